use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty lattice: k_max = {k_max} is below the smallest nonzero wavenumber {k_min}")]
    EmptyLattice { k_max: f64, k_min: f64 },

    #[error("wavevector {requested:?} is not on the lattice; nearest valid wavevector is {nearest:?}")]
    NotOnLattice { requested: [f64; 3], nearest: [f64; 3] },

    #[error("aliasing: lattice k_max = {k_max} is at or above the grid Nyquist limit {nyquist}")]
    Aliasing { k_max: f64, nyquist: f64 },

    #[error("translation {delta:?} is not an integer multiple of the grid spacing {spacing}")]
    NonCommensurateShift { delta: [f64; 3], spacing: f64 },

    #[error("index {index} out of range 1..=3")]
    IndexOutOfRange { index: usize },

    #[error("sample point set is not closed under negation (no partner for point {index})")]
    NotNegationClosed { index: usize },

    #[error("matrix is not antisymmetric: |A + A^T| = {defect} exceeds {allowed}")]
    NotAntisymmetric { defect: f64, allowed: f64 },

    #[error("test function width sigma = {sigma} exceeds L/10 = {limit}")]
    SigmaTooLarge { sigma: f64, limit: f64 },

    #[error("light cone leaves the box: c|tau| + 6 width = {reach} is not below L/2 = {half_box}")]
    LightConeOutOfBox { reach: f64, half_box: f64 },

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
