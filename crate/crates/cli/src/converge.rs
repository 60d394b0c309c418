//! Mode-sum convergence study against the analytic kernels.

use emq_core::commutators::{commutator_tensor, pauli_jordan_smeared, Method, Pair, TestFunction};
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::report::Check;
use crate::suites::commutators::{context, equal_time_pair};
use crate::CliError;

pub const CSV_HEADER: &str = "check,pair,k,l,tau,cutoff,analytic,modesum_re,modesum_im,rel_error";

/// Errors below this are treated as converged when testing monotonicity.
const FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeRow {
    pub check: &'static str,
    pub pair: Option<Pair>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub tau: f64,
    pub cutoff: f64,
    /// The nonvanishing part of the analytic value: imaginary for the
    /// E-B and E-E kernels, real for the Pauli-Jordan function.
    pub analytic: f64,
    pub modesum: Complex64,
    /// `|modesum - analytic| / |analytic|`, or relative to the kernel
    /// scale when the analytic value is zero.
    pub rel_error: f64,
}

impl ConvergeRow {
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{:e},{:e},{:e},{:e},{:e},{:e}",
            self.check,
            self.pair.map(|p| p.label()).unwrap_or(""),
            opt(self.k),
            opt(self.l),
            self.tau,
            self.cutoff,
            self.analytic,
            self.modesum.re,
            self.modesum.im,
            self.rel_error
        )
    }
}

pub fn to_csv(rows: &[ConvergeRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// One row per (check, cutoff), checks in a fixed order.
pub fn run_converge(config: &RunConfig, cutoffs: &[f64]) -> Result<Vec<ConvergeRow>, CliError> {
    if cutoffs.is_empty() || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(format!("cutoffs must be non-empty and strictly increasing, got {cutoffs:?}")));
    }
    let ctx = context(config, 1.0)?;
    let sigma = config.sigma;
    let (f, g) = equal_time_pair(config)?;
    let generic = TestFunction::new([0.5 * sigma, -0.4 * sigma, 1.2 * sigma], sigma)?;
    let scale = ctx.scale(&f, &g);
    let tau_pj = 2.0 * sigma / config.c;
    let tau_dyn = sigma / config.c;

    let eb0 = commutator_tensor(&ctx, Pair::EB, 0.0, &f, &g, &Method::Analytic)?[0][1];
    let pj = pauli_jordan_smeared(&ctx, &g, tau_pj, &Method::Analytic)?.value;
    let eb_dyn = commutator_tensor(&ctx, Pair::EB, tau_dyn, &generic, &g, &Method::Analytic)?[0][1];
    let ee_dyn = commutator_tensor(&ctx, Pair::EE, tau_dyn, &generic, &g, &Method::Analytic)?[0][2];

    let mut rows = Vec::new();
    for &cutoff in cutoffs {
        let method = Method::mode_sum(ctx.lattice(cutoff)?);
        let rel = |sum: Complex64, exact: Complex64| (sum - exact).norm() / exact.norm();
        let row = |check, pair, k, l, tau, analytic, modesum, rel_error| ConvergeRow {
            check,
            pair,
            k,
            l,
            tau,
            cutoff,
            analytic,
            modesum,
            rel_error,
        };

        let sum = commutator_tensor(&ctx, Pair::EB, 0.0, &f, &g, &method)?[0][1];
        rows.push(row("equal_time_E_B", Some(Pair::EB), Some(1), Some(2), 0.0, eb0.im, sum, rel(sum, eb0)));

        let sum = pauli_jordan_smeared(&ctx, &g, tau_pj, &method)?.value;
        rows.push(row("pauli_jordan", None, None, None, tau_pj, pj.re, sum, rel(sum, pj)));

        let sum = commutator_tensor(&ctx, Pair::EE, 0.0, &f, &g, &method)?[0][1];
        rows.push(row("equal_time_E_E", Some(Pair::EE), Some(1), Some(2), 0.0, 0.0, sum, sum.norm() / scale));

        let sum = commutator_tensor(&ctx, Pair::EB, tau_dyn, &generic, &g, &method)?[0][1];
        rows.push(row("unequal_time_E_B", Some(Pair::EB), Some(1), Some(2), tau_dyn, eb_dyn.im, sum, rel(sum, eb_dyn)));

        let sum = commutator_tensor(&ctx, Pair::EE, tau_dyn, &generic, &g, &method)?[0][2];
        rows.push(row("unequal_time_E_E", Some(Pair::EE), Some(1), Some(3), tau_dyn, ee_dyn.im, sum, rel(sum, ee_dyn)));
    }
    rows.sort_by_key(|r| CHECK_ORDER.iter().position(|c| *c == r.check));
    Ok(rows)
}

const CHECK_ORDER: [&str; 5] = [
    "equal_time_E_B",
    "pauli_jordan",
    "equal_time_E_E",
    "unequal_time_E_B",
    "unequal_time_E_E",
];

/// Number of increases in the error column once it first drops below 1.
pub fn monotonicity_violations(errors: &[f64]) -> usize {
    let Some(start) = errors.iter().position(|e| *e < 1.0) else {
        return errors.len();
    };
    errors[start..]
        .windows(2)
        .filter(|w| w[1] > w[0].max(FLOOR))
        .count()
}

pub fn convergence_checks(rows: &[ConvergeRow]) -> Vec<Check> {
    let mut checks = Vec::new();
    for name in CHECK_ORDER {
        let errors: Vec<f64> = rows.iter().filter(|r| r.check == name).map(|r| r.rel_error).collect();
        let last = errors.last().copied().unwrap_or(f64::NAN);
        if name == "equal_time_E_E" {
            let worst = errors.iter().fold(0.0f64, |m, e| m.max(*e));
            checks.push(Check::at_most(
                "equal_time_E_E_cancellation",
                "[E, E] mode sum cancels at every cutoff",
                worst,
                1e-12,
            ));
            continue;
        }
        checks.push(Check::exact(
            &format!("{name}_monotone"),
            "mode-sum error non-increasing in the cutoff",
            monotonicity_violations(&errors) as f64,
            0.0,
        ));
        let bound = if name == "pauli_jordan" { 1e-4 } else { 1e-6 };
        checks.push(Check::at_most(
            &format!("{name}_final"),
            "mode-sum error at the largest cutoff",
            last,
            bound,
        ));
    }
    checks
}

/// Study over the configured cutoffs, reduced to pass/fail checks.
pub fn run(config: &RunConfig) -> Result<Vec<Check>, CliError> {
    let rows = run_converge(config, &config.converge_cutoffs())?;
    Ok(convergence_checks(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotonicity_counts_rises_after_resolution() {
        assert_eq!(monotonicity_violations(&[3.0, 0.5, 1e-3, 1e-9]), 0);
        assert_eq!(monotonicity_violations(&[2.0, 5.0, 1e-3]), 0);
        assert_eq!(monotonicity_violations(&[0.1, 0.2, 1e-3]), 1);
        assert_eq!(monotonicity_violations(&[1e-14, 5e-14]), 0);
        assert_eq!(monotonicity_violations(&[2.0, 3.0]), 2);
    }

    #[test]
    fn csv_header_is_exact() {
        assert_eq!(CSV_HEADER, "check,pair,k,l,tau,cutoff,analytic,modesum_re,modesum_im,rel_error");
    }
}
