//! Smeared c-number commutators of the quantized free field.
//!
//! Every commutator is a distribution in `rho = r' - r` and `tau = t' - t`
//! and is only evaluated smeared: the first (primed) field against a test
//! function `f`, the second against `g`,
//!
//! ```text
//! C_kl(f, g, tau) = int int f(r') g(r) [X_k(r', t'), Y_l(r, t)] d^3r' d^3r.
//! ```
//!
//! One convention fixes all signs of the smeared delta derivative:
//!
//! ```text
//! int int f(r') g(r) d_{s'} delta(r' - r) = - int (d_s f)(r) g(r) d^3r,
//! ```
//!
//! which for Gaussians equals `d/dd_s` of the overlap `O(d) = int f g` taken
//! as a function of the center separation `d = c_f - c_g`.
//!
//! Two independent routes produce each value:
//!
//! * **analytic**: closed forms in the overlap and in the smeared
//!   Pauli-Jordan function `Phi(d, tau) = int int f g D`, summed over the
//!   periodic images of the box;
//! * **mode sum**: the fields are linear in the mode amplitudes, so the
//!   commutator is `-2i sum x^X_k x^Y_l sin(k.d - w tau) G(k)`, with `x` the
//!   per-mode coefficient of the annihilation amplitude and
//!   `G(k) = exp(-(s_f^2 + s_g^2) k^2 / 2)`.
//!
//! By Poisson summation, the image-summed closed form is the infinite-cutoff
//! limit of the lattice sum, so the two routes differ only by the Gaussian
//! tail beyond `k_max`.

mod analytic;
mod consistency;
mod modesum;
pub mod quadrature;
pub mod radial;
mod smearing;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fields::ModeNormalization;
use crate::lattice::{ModeLattice, UnitSystem};
use crate::vec3::{self, Vec3};

pub use analytic::{smeared_pauli_jordan_jets, SmearedPauliJordan};
pub use consistency::{
    generator_identity_check, kernel_symmetry_audit, m_tensor_check, m_tensor_report,
    normalization_check, GeneratorReport, KernelAudit, MTensorReport, NormalizationReport,
};
pub use smearing::TestFunction;

/// Ordered field pair `[X_k(r', t'), Y_l(r, t)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    FF,
    FdFd,
    FdF,
    EE,
    BB,
    EB,
}

impl Pair {
    pub const ALL: [Pair; 6] = [Pair::FF, Pair::FdFd, Pair::FdF, Pair::EE, Pair::BB, Pair::EB];

    pub fn label(self) -> &'static str {
        match self {
            Pair::FF => "F_F",
            Pair::FdFd => "Fd_Fd",
            Pair::FdF => "Fd_F",
            Pair::EE => "E_E",
            Pair::BB => "B_B",
            Pair::EB => "E_B",
        }
    }

    /// Same-type pairs, whose equal-time commutator vanishes.
    pub fn is_same_type(self) -> bool {
        matches!(self, Pair::FF | Pair::FdFd | Pair::EE | Pair::BB)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pair::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| invalid("pair", format!("unknown pair `{s}`")))
    }
}

/// One commutator query; `k` and `l` are 1-based component labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorSpec {
    pub pair: Pair,
    pub k: usize,
    pub l: usize,
    pub tau: f64,
    pub f: TestFunction,
    pub g: TestFunction,
}

impl CommutatorSpec {
    pub fn new(pair: Pair, k: usize, l: usize, tau: f64, f: TestFunction, g: TestFunction) -> Result<Self> {
        for index in [k, l] {
            if !(1..=3).contains(&index) {
                return Err(Error::IndexOutOfRange { index });
            }
        }
        if !tau.is_finite() {
            return Err(invalid("tau", "must be finite"));
        }
        Ok(Self { pair, k, l, tau, f, g })
    }

    /// Center separation `d = c_f - c_g`.
    pub fn separation(&self) -> Vec3 {
        vec3::sub(self.f.center(), self.g.center())
    }

    /// Combined smearing variance `S = s_f^2 + s_g^2`.
    pub fn variance(&self) -> f64 {
        self.f.sigma().powi(2) + self.g.sigma().powi(2)
    }
}

#[derive(Debug, Clone)]
pub enum Method {
    Analytic,
    ModeSum {
        lattice: Arc<ModeLattice>,
        normalization: ModeNormalization,
    },
}

impl Method {
    pub fn mode_sum(lattice: Arc<ModeLattice>) -> Self {
        Method::ModeSum {
            lattice,
            normalization: ModeNormalization::STANDARD,
        }
    }

    pub fn kind(&self) -> MethodKind {
        match self {
            Method::Analytic => MethodKind::Analytic,
            Method::ModeSum { .. } => MethodKind::ModeSum,
        }
    }

    fn cutoff(&self) -> Option<f64> {
        match self {
            Method::Analytic => None,
            Method::ModeSum { lattice, .. } => Some(lattice.k_max()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodKind {
    Analytic,
    ModeSum,
}

impl MethodKind {
    pub fn label(self) -> &'static str {
        match self {
            MethodKind::Analytic => "analytic",
            MethodKind::ModeSum => "modesum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub method: MethodKind,
    /// `k_max` of the lattice for mode sums.
    pub cutoff: Option<f64>,
}

/// Box and units shared by both evaluation routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorContext {
    box_length: f64,
    units: UnitSystem,
}

impl CommutatorContext {
    pub fn new(box_length: f64, units: UnitSystem) -> Result<Self> {
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(invalid("box_length", format!("must be positive, got {box_length}")));
        }
        Ok(Self { box_length, units })
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn lattice(&self, k_max: f64) -> Result<Arc<ModeLattice>> {
        Ok(Arc::new(ModeLattice::for_box(self.box_length, k_max, self.units)?))
    }

    /// Typical size `8 pi hbar c (2 pi S)^{-3/2} / sqrt(S)` of a smeared
    /// equal-time kernel; the reference for absolute tolerances.
    pub fn scale(&self, f: &TestFunction, g: &TestFunction) -> f64 {
        let s = f.sigma().powi(2) + g.sigma().powi(2);
        8.0 * std::f64::consts::PI * self.units.hbar() * self.units.c()
            * smearing::gaussian_normalization(s)
            / s.sqrt()
    }

    fn check_functions(&self, f: &TestFunction, g: &TestFunction) -> Result<()> {
        f.check_box(self.box_length)?;
        g.check_box(self.box_length)
    }

    fn check_light_cone(&self, tau: f64, width: f64) -> Result<()> {
        let reach = self.units.c() * tau.abs() + 6.0 * width;
        let half_box = 0.5 * self.box_length;
        if reach >= half_box {
            return Err(Error::LightConeOutOfBox { reach, half_box });
        }
        Ok(())
    }

    fn check_method(&self, method: &Method) -> Result<()> {
        if let Method::ModeSum { lattice, .. } = method {
            let same_box = (lattice.box_length() - self.box_length).abs() <= 1e-12 * self.box_length;
            if !same_box || lattice.units() != self.units {
                return Err(Error::Incompatible(
                    "mode lattice box or units differ from the commutator context".into(),
                ));
            }
        }
        Ok(())
    }
}

fn component(tensor: &[[Complex64; 3]; 3], spec: &CommutatorSpec) -> Complex64 {
    tensor[spec.k - 1][spec.l - 1]
}

/// `int int f(r') g(r) d_{s'} delta(r' - r)`; `s` is 1-based.
pub fn smeared_delta_gradient(
    ctx: &CommutatorContext,
    f: &TestFunction,
    g: &TestFunction,
    s: usize,
) -> Result<f64> {
    if !(1..=3).contains(&s) {
        return Err(Error::IndexOutOfRange { index: s });
    }
    ctx.check_functions(f, g)?;
    Ok(analytic::overlap_gradient(ctx, f, g)[s - 1])
}

/// All nine components of a commutator at equal or unequal times.
pub fn commutator_tensor(
    ctx: &CommutatorContext,
    pair: Pair,
    tau: f64,
    f: &TestFunction,
    g: &TestFunction,
    method: &Method,
) -> Result<[[Complex64; 3]; 3]> {
    ctx.check_functions(f, g)?;
    ctx.check_method(method)?;
    if tau != 0.0 {
        let width = (f.sigma().powi(2) + g.sigma().powi(2)).sqrt();
        ctx.check_light_cone(tau, width)?;
    }
    Ok(match method {
        Method::Analytic if tau == 0.0 => analytic::equal_time_tensor(ctx, pair, f, g),
        Method::Analytic => analytic::unequal_time_tensor(ctx, pair, tau, f, g),
        Method::ModeSum {
            lattice,
            normalization,
        } => modesum::commutator_tensor(lattice, *normalization, pair, tau, f, g),
    })
}

fn kernel_value(value: Complex64, method: &Method) -> KernelValue {
    KernelValue {
        value,
        method: method.kind(),
        cutoff: method.cutoff(),
    }
}

/// Equal-time commutator; `spec.tau` must be zero.
pub fn equal_time_commutator(
    ctx: &CommutatorContext,
    spec: &CommutatorSpec,
    method: &Method,
) -> Result<KernelValue> {
    if spec.tau != 0.0 {
        return Err(invalid("tau", format!("equal-time commutator needs tau = 0, got {}", spec.tau)));
    }
    unequal_time_commutator(ctx, spec, method)
}

/// Commutator at time separation `spec.tau`; at `tau = 0` the analytic
/// route returns the equal-time closed form.
pub fn unequal_time_commutator(
    ctx: &CommutatorContext,
    spec: &CommutatorSpec,
    method: &Method,
) -> Result<KernelValue> {
    let tensor = commutator_tensor(ctx, spec.pair, spec.tau, &spec.f, &spec.g, method)?;
    Ok(kernel_value(component(&tensor, spec), method))
}

/// `int g(rho) D(rho, tau) d^3 rho`, with the light cone inside the box.
pub fn pauli_jordan_smeared(
    ctx: &CommutatorContext,
    g: &TestFunction,
    tau: f64,
    method: &Method,
) -> Result<KernelValue> {
    g.check_box(ctx.box_length)?;
    ctx.check_method(method)?;
    ctx.check_light_cone(tau, g.sigma())?;
    let value = match method {
        Method::Analytic => analytic::pauli_jordan(ctx, g, tau),
        Method::ModeSum { lattice, .. } => modesum::pauli_jordan(lattice, g, tau),
    };
    Ok(kernel_value(Complex64::new(value, 0.0), method))
}

/// Header of [`kernel_csv_row`].
pub const KERNEL_CSV_HEADER: &str =
    "pair,k,l,tau,sigma1,sigma2,separation,method,cutoff,value_re,value_im";

pub fn kernel_csv_row(spec: &CommutatorSpec, value: &KernelValue) -> String {
    let cutoff = value.cutoff.map(|c| format!("{c:.17e}")).unwrap_or_default();
    format!(
        "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{:.17e},{:.17e}",
        spec.pair,
        spec.k,
        spec.l,
        spec.tau,
        spec.f.sigma(),
        spec.g.sigma(),
        vec3::norm(spec.separation()),
        value.method.label(),
        cutoff,
        value.value.re,
        value.value.im
    )
}
