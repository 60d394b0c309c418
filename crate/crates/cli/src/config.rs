//! Run configuration: a flat `key = value` file, then command-line
//! overrides applied in order (the last assignment of a key wins).
//!
//! ```text
//! # box and grid
//! L = 6.283185307179586
//! N = 32
//! sigma = 0.3
//! suite = commutators, converge
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Tensoralg,
    Maxwell,
    Transforms,
    Commutators,
    Converge,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Tensoralg,
        Suite::Maxwell,
        Suite::Transforms,
        Suite::Commutators,
        Suite::Converge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tensoralg => "tensoralg",
            Suite::Maxwell => "maxwell",
            Suite::Transforms => "transforms",
            Suite::Commutators => "commutators",
            Suite::Converge => "converge",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses one suite name; `all` expands to every suite.
fn parse_suites(text: &str) -> Result<Vec<Suite>, CliError> {
    let mut out = Vec::new();
    for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name == "all" {
            out.extend(Suite::ALL);
            continue;
        }
        let suite = Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| CliError::Config(format!("unknown suite `{name}`; expected one of tensoralg, maxwell, transforms, commutators, converge, all")))?;
        out.push(suite);
    }
    if out.is_empty() {
        return Err(CliError::Config("empty suite selection".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Box side `L`.
    pub box_length: f64,
    /// Grid points per axis `N`.
    pub grid_points: usize,
    pub hbar: f64,
    pub c: f64,
    /// Test-function width for equal-time, Pauli-Jordan and audit checks.
    pub sigma: f64,
    /// Narrower width for the unequal-time and microcausality checks.
    pub sigma_causal: f64,
    /// Mode-sum cutoff in units of `1 / sigma`.
    pub kmax_sigma: f64,
    /// Absolute mode-sum cutoff; overrides `kmax_sigma` when set.
    pub k_max: Option<f64>,
    /// Cutoff of the lattice holding random classical states.
    pub state_kmax: f64,
    /// Number of occupied modes in random states.
    pub modes: usize,
    /// Number of `+-rho` pairs sampled by the kernel audit.
    pub audit_samples: usize,
    pub seed: u64,
    /// Adds a curl-free component to the state used by the subsidiary-condition check.
    pub inject_longitudinal: bool,
    pub suites: Vec<Suite>,
    /// Absolute cutoffs for `converge`; empty means `{2, 4, 8} / sigma`.
    pub cutoffs: Vec<f64>,
    /// Output directory; not serialized.
    #[serde(skip)]
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            box_length: 2.0 * std::f64::consts::PI,
            grid_points: 32,
            hbar: 1.0,
            c: 1.0,
            sigma: 0.3,
            sigma_causal: 0.15,
            kmax_sigma: 8.0,
            k_max: None,
            state_kmax: 5.0,
            modes: 20,
            audit_samples: 16,
            seed: 20240611,
            inject_longitudinal: false,
            suites: Suite::ALL.to_vec(),
            cutoffs: Vec::new(),
            out: PathBuf::from("emq-out"),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse `{value}` for key `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("key `{key}` expects true or false, got `{value}`"))),
    }
}

impl RunConfig {
    /// Assigns one key. Unknown keys are an error.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let (key, value) = (key.trim(), value.trim());
        match key {
            "L" | "box_length" => self.box_length = parse_value(key, value)?,
            "N" | "grid_points" => self.grid_points = parse_value(key, value)?,
            "hbar" => self.hbar = parse_value(key, value)?,
            "c" => self.c = parse_value(key, value)?,
            "sigma" => self.sigma = parse_value(key, value)?,
            "sigma_causal" => self.sigma_causal = parse_value(key, value)?,
            "kmax_sigma" => self.kmax_sigma = parse_value(key, value)?,
            "k_max" | "kmax" => self.k_max = Some(parse_value(key, value)?),
            "state_kmax" => self.state_kmax = parse_value(key, value)?,
            "modes" => self.modes = parse_value(key, value)?,
            "audit_samples" => self.audit_samples = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "inject_longitudinal" => self.inject_longitudinal = parse_bool(key, value)?,
            "suite" | "suites" => self.suites = parse_suites(value)?,
            "cutoffs" => {
                self.cutoffs = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_value(key, s))
                    .collect::<Result<_, _>>()?
            }
            "out" => self.out = PathBuf::from(value),
            other => return Err(CliError::Config(format!("unknown configuration key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a `key = value` document; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`, got `{raw}`", number + 1)))?;
            self.set(key, value).map_err(|e| match e {
                CliError::Config(reason) => CliError::Config(format!("line {}: {reason}", number + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::default();
        config.apply_text(&text)?;
        Ok(config)
    }

    /// Cutoff for a test function of width `sigma`.
    pub fn cutoff_for(&self, sigma: f64) -> f64 {
        self.k_max.unwrap_or(self.kmax_sigma / sigma)
    }

    /// Cutoffs studied by `converge`.
    pub fn converge_cutoffs(&self) -> Vec<f64> {
        if self.cutoffs.is_empty() {
            [2.0, 4.0, 8.0].map(|m| m / self.sigma).to_vec()
        } else {
            self.cutoffs.clone()
        }
    }

    /// Time separation used by the unequal-time and microcausality checks.
    pub fn causal_tau(&self) -> f64 {
        0.5 / self.c
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("L", self.box_length),
            ("hbar", self.hbar),
            ("c", self.c),
            ("sigma", self.sigma),
            ("sigma_causal", self.sigma_causal),
            ("kmax_sigma", self.kmax_sigma),
            ("state_kmax", self.state_kmax),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(CliError::Config(format!("`{name}` must be positive and finite, got {value}")));
            }
        }
        if let Some(k) = self.k_max {
            if !(k.is_finite() && k > 0.0) {
                return Err(CliError::Config(format!("`k_max` must be positive and finite, got {k}")));
            }
        }
        if self.grid_points < 8 {
            return Err(CliError::Config(format!("`N` must be at least 8, got {}", self.grid_points)));
        }
        if self.modes == 0 || self.audit_samples == 0 {
            return Err(CliError::Config("`modes` and `audit_samples` must be positive".into()));
        }
        let limit = self.box_length / 10.0;
        for (name, s) in [("sigma", self.sigma), ("sigma_causal", self.sigma_causal)] {
            if s > limit {
                return Err(CliError::Config(format!("`{name}` = {s} exceeds L/10 = {limit}")));
            }
        }
        let nyquist = std::f64::consts::PI * self.grid_points as f64 / self.box_length;
        if self.state_kmax >= nyquist {
            return Err(CliError::Config(format!(
                "`state_kmax` = {} must stay below the grid Nyquist wavenumber {nyquist}",
                self.state_kmax
            )));
        }
        let fundamental = 2.0 * std::f64::consts::PI / self.box_length;
        if self.state_kmax < fundamental {
            return Err(CliError::Config(format!(
                "`state_kmax` = {} is below the fundamental wavenumber {fundamental}",
                self.state_kmax
            )));
        }
        // the spacelike pair and its nearest periodic image both need clearance
        let reach = 0.5 + 12.0 * self.sigma_causal + 0.2;
        if 2.0 * reach >= self.box_length {
            return Err(CliError::Config(format!(
                "`sigma_causal` = {} leaves no room for a spacelike pair in a box of side {}",
                self.sigma_causal, self.box_length
            )));
        }
        // the Pauli-Jordan check puts the shell at c tau = 2 sigma
        if 8.0 * self.sigma >= self.box_length / 2.0 {
            return Err(CliError::Config(format!("`sigma` = {} is too wide for the light-cone checks", self.sigma)));
        }
        let cutoffs = self.converge_cutoffs();
        if cutoffs.is_empty() || cutoffs.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
            return Err(CliError::Config("cutoffs must be positive".into()));
        }
        if cutoffs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(format!("cutoffs must be strictly increasing, got {cutoffs:?}")));
        }
        Ok(())
    }
}
