//! Space inversion, time inversion, charge conjugation and duality on
//! field configurations.
//!
//! The classical table acting on `F = E + i B`:
//!
//! | op | `F(r, t)` maps to  |
//! |----|--------------------|
//! | P  | `-F*(-r, t)`       |
//! | T  | `F*(r, -t)`        |
//! | C  | `-F(r, t)`         |
//! | D  | `i F(r, t)`        |
//!
//! so `D: (E, B) -> (-B, E)`. Time inversion is the classical rule. The
//! quantum rule, which drops the conjugation because the Hilbert-space
//! operator is anti-unitary, has no action on c-number samples; it enters
//! only as the reality constraint on the commutator kernel, audited in
//! [`crate::commutators::kernel_symmetry_audit`].
//!
//! The four operations generate a group of order 16. `C = D^2` is central,
//! `P` and `T` commute with each other, and both invert `D`
//! (`P D = D^-1 P`, `T D = D^-1 T`), so every element has the unique form
//! `D^m P^a T^b`.

use std::fmt;

use num_complex::Complex64;

use crate::fields::FieldConfiguration;
use crate::lattice::UnitSystem;
use crate::maxwell::{maxwell_residual, MaxwellResidual};
use crate::vec3::CVec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    P,
    T,
    C,
    D,
}

/// Group element `D^dual P^parity T^time_reversal`, acting right to left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransformOp {
    dual: u8,
    parity: bool,
    time_reversal: bool,
}

impl TransformOp {
    pub const IDENTITY: TransformOp = TransformOp {
        dual: 0,
        parity: false,
        time_reversal: false,
    };

    pub fn dual_power(&self) -> u8 {
        self.dual
    }

    pub fn has_parity(&self) -> bool {
        self.parity
    }

    pub fn has_time_reversal(&self) -> bool {
        self.time_reversal
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// `self` applied after `first`.
    pub fn after(self, first: TransformOp) -> TransformOp {
        // T^b D^m' = D^{-m'} T^b and likewise for P, so moving first's D factor
        // to the left flips its sign once per P/T present in self.
        let flips = self.parity as u8 + self.time_reversal as u8;
        let carried = if flips % 2 == 1 {
            (4 - first.dual) % 4
        } else {
            first.dual
        };
        TransformOp {
            dual: (self.dual + carried) % 4,
            parity: self.parity ^ first.parity,
            time_reversal: self.time_reversal ^ first.time_reversal,
        }
    }

    /// Multiplier `i^dual` applied last.
    fn dual_factor(&self) -> Complex64 {
        match self.dual {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl From<Transform> for TransformOp {
    fn from(t: Transform) -> Self {
        let mut op = TransformOp::IDENTITY;
        match t {
            Transform::P => op.parity = true,
            Transform::T => op.time_reversal = true,
            Transform::C => op.dual = 2,
            Transform::D => op.dual = 1,
        }
        op
    }
}

impl fmt::Display for TransformOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        match self.dual {
            0 => {}
            1 => parts.push("D".to_string()),
            2 => parts.push("C".to_string()),
            _ => parts.push("CD".to_string()),
        }
        if self.parity {
            parts.push("P".into());
        }
        if self.time_reversal {
            parts.push("T".into());
        }
        write!(f, "{}", parts.join(""))
    }
}

/// Composes a sequence applied first to last.
pub fn compose<I>(ops: I) -> TransformOp
where
    I: IntoIterator,
    I::Item: Into<TransformOp>,
{
    ops.into_iter()
        .fold(TransformOp::IDENTITY, |acc, op| op.into().after(acc))
}

fn conj3(v: &CVec3) -> CVec3 {
    v.map(|c| c.conj())
}

fn transform_values(op: TransformOp, config: &FieldConfiguration, rate: bool) -> FieldConfiguration {
    let grid = *config.grid();
    let mut values: Vec<CVec3> = config.values().to_vec();
    let mut t = config.time();
    if op.time_reversal {
        // d/dt of F*(r, -t) is -(dF/dt)*(r, -t)
        let sign = if rate { -1.0 } else { 1.0 };
        for v in values.iter_mut() {
            *v = conj3(v).map(|c| c * sign);
        }
        t = -t;
    }
    if op.parity {
        let inverted: Vec<CVec3> = (0..grid.len())
            .map(|flat| conj3(&values[grid.inverted(flat)]).map(|c| -c))
            .collect();
        values = inverted;
    }
    if op.dual != 0 {
        let factor = op.dual_factor();
        for v in values.iter_mut() {
            *v = v.map(|c| c * factor);
        }
    }
    FieldConfiguration {
        grid,
        t,
        values,
        reality_defect: config.reality_defect,
    }
}

/// Applies `op` to a configuration.
pub fn apply(op: impl Into<TransformOp>, config: &FieldConfiguration) -> FieldConfiguration {
    transform_values(op.into(), config, false)
}

/// Applies `op` to a time derivative `dF/dt`; under `T` the rate also flips sign.
pub fn apply_to_rate(op: impl Into<TransformOp>, rate: &FieldConfiguration) -> FieldConfiguration {
    transform_values(op.into(), rate, true)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub before: MaxwellResidual,
    pub after: MaxwellResidual,
}

/// Maxwell residuals before and after transforming `config` and `df_dt` together.
pub fn invariance_report(
    config: &FieldConfiguration,
    df_dt: &FieldConfiguration,
    op: impl Into<TransformOp>,
    units: &UnitSystem,
) -> InvarianceReport {
    let op = op.into();
    let before = maxwell_residual(config, df_dt, units);
    let after = maxwell_residual(&apply(op, config), &apply_to_rate(op, df_dt), units);
    InvarianceReport { before, after }
}
