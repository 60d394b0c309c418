//! Cross-checks that tie the commutator kernels to the field machinery:
//! the M tensor of the operator Maxwell equations, the translation
//! generator, the symmetry audit of the sampled kernel, and the agreement
//! between the energy normalization and the commutator prefactor.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::analytic::overlap_gradient;
use super::smearing::TestFunction;
use super::{commutator_tensor, CommutatorContext, Method, Pair};
use crate::error::Result;
use crate::fields::{plane_wave, synthesize, synthesize_normalized, FieldConfiguration, ModeAmplitudes, ModeNormalization};
use crate::lattice::{ModeLattice, Polarization, SpatialGrid, UnitSystem};
use crate::maxwell::{energy, gradient};
use crate::tensoralg::{
    antisym_to_vector, decompose_gu_sa, epsilon, exchange_symmetry_defect, kronecker,
    pseudotensor_parity_check, symmetric_sample_points, Matrix3, Tensor3x3Field,
};
use crate::vec3;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

type Rank3 = [[[Complex64; 3]; 3]; 3];

/// Grid integrals `W[l][u] = int F_l d_u f` and `V[l][u] = int f d_u F_l`.
fn smeared_moments(config: &FieldConfiguration, f: &TestFunction) -> ([[Complex64; 3]; 3], [[Complex64; 3]; 3]) {
    let grid = config.grid();
    let l_box = grid.box_length();
    let dv = grid.cell_volume();
    let grads = gradient(config);
    let mut w = [[ZERO; 3]; 3];
    let mut v = [[ZERO; 3]; 3];
    for (flat, value) in config.values().iter().enumerate() {
        let r = grid.position(flat);
        let fv = f.value(r, l_box);
        let fg = f.gradient(r, l_box);
        for l in 0..3 {
            for u in 0..3 {
                w[l][u] += value[l] * fg[u] * dv;
                v[l][u] += grads[flat][l][u] * fv * dv;
            }
        }
    }
    (w, v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MTensorReport {
    /// `int f M_kls` from the equal-time kernel, indexed `[k][l][s]`.
    pub lhs: Rank3,
    /// `-16 pi hbar c eps_ksu int f d_u F_l`.
    pub rhs: Rank3,
    pub max_discrepancy: f64,
    /// `(d_jk d_ls - d_jl d_sk + d_js d_kl) M_kls` for each `j`.
    pub first_contraction: [Complex64; 3],
    /// `eps_kls M_kls`.
    pub second_contraction: Complex64,
    /// `int f div F`, for comparison with the second contraction.
    pub smeared_divergence: Complex64,
    /// `16 pi hbar c |F|_max / sigma`.
    pub scale: f64,
}

/// Both routes to the smeared M tensor for every index triple.
pub fn m_tensor_report(config: &FieldConfiguration, f: &TestFunction, units: &UnitSystem) -> Result<MTensorReport> {
    f.check_box(config.grid().box_length())?;
    let pref = 16.0 * PI * units.hbar() * units.c();
    let (w, v) = smeared_moments(config, f);
    let mut lhs = [[[ZERO; 3]; 3]; 3];
    let mut rhs = [[[ZERO; 3]; 3]; 3];
    let mut max_discrepancy: f64 = 0.0;
    for k in 0..3 {
        for l in 0..3 {
            for s in 0..3 {
                for u in 0..3 {
                    let e = f64::from(epsilon(k, s, u));
                    // the kernel 2 alpha_ks = 16 pi hbar c eps_ksu d_u' delta moves onto f
                    lhs[k][l][s] += pref * e * w[l][u];
                    rhs[k][l][s] -= pref * e * v[l][u];
                }
                max_discrepancy = max_discrepancy.max((lhs[k][l][s] - rhs[k][l][s]).norm());
            }
        }
    }
    let first_contraction = std::array::from_fn(|j| {
        let mut total = ZERO;
        for k in 0..3 {
            for l in 0..3 {
                for s in 0..3 {
                    let w = kronecker(j, k) * kronecker(l, s) - kronecker(j, l) * kronecker(s, k)
                        + kronecker(j, s) * kronecker(k, l);
                    total += f64::from(w) * lhs[k][l][s];
                }
            }
        }
        total
    });
    let mut second_contraction = ZERO;
    for k in 0..3 {
        for l in 0..3 {
            for s in 0..3 {
                second_contraction += f64::from(epsilon(k, l, s)) * lhs[k][l][s];
            }
        }
    }
    let smeared_divergence = v[0][0] + v[1][1] + v[2][2];
    Ok(MTensorReport {
        lhs,
        rhs,
        max_discrepancy,
        first_contraction,
        second_contraction,
        smeared_divergence,
        scale: pref * config.field_scale() / f.sigma(),
    })
}

/// `(lhs, rhs)` for one `(k, l, s)`, 1-based, on a synthesized state.
pub fn m_tensor_check(
    modes: &ModeAmplitudes,
    grid: &SpatialGrid,
    k: usize,
    l: usize,
    s: usize,
    f: &TestFunction,
) -> Result<(Complex64, Complex64)> {
    for index in [k, l, s] {
        if !(1..=3).contains(&index) {
            return Err(crate::Error::IndexOutOfRange { index });
        }
    }
    let config = synthesize(modes, grid, 0.0)?;
    let report = m_tensor_report(&config, f, &modes.lattice().units())?;
    Ok((report.lhs[k - 1][l - 1][s - 1], report.rhs[k - 1][l - 1][s - 1]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorReport {
    /// `(s, l, kernel route, int f d_s F_l)` for every `s != l`, 1-based.
    pub entries: Vec<(usize, usize, Complex64, Complex64)>,
    pub max_discrepancy: f64,
    /// `|F|_max / sigma`.
    pub scale: f64,
}

/// Smeared `-(1 / 8 pi hbar c) eps_skj eps_klu int alpha_u(r' - r) F_j(r')`
/// against `int f d_s F_l` for `s != l`.
pub fn generator_identity_check(
    config: &FieldConfiguration,
    f: &TestFunction,
    units: &UnitSystem,
) -> Result<GeneratorReport> {
    f.check_box(config.grid().box_length())?;
    let hbar_c = units.hbar() * units.c();
    let alpha = 8.0 * PI * hbar_c;
    let (w, v) = smeared_moments(config, f);
    let mut entries = Vec::new();
    let mut max_discrepancy: f64 = 0.0;
    for s in 0..3 {
        for l in 0..3 {
            if s == l {
                continue;
            }
            let mut kernel = ZERO;
            for k in 0..3 {
                for j in 0..3 {
                    for u in 0..3 {
                        let e = epsilon(s, k, j) * epsilon(k, l, u);
                        if e != 0 {
                            // int f(r) alpha_u(r' - r) dr = alpha d_u f(r')
                            kernel += f64::from(e) * alpha * w[j][u];
                        }
                    }
                }
            }
            kernel *= -1.0 / alpha;
            let direct = v[l][s];
            max_discrepancy = max_discrepancy.max((kernel - direct).norm());
            entries.push((s + 1, l + 1, kernel, direct));
        }
    }
    Ok(GeneratorReport {
        entries,
        max_discrepancy,
        scale: config.field_scale() / f.sigma(),
    })
}

/// Constraint checks on the sampled mode-sum kernel `alpha_kl(rho)`; every
/// defect is relative to [`CommutatorContext::scale`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelAudit {
    pub seed: u64,
    pub sample_points: usize,
    pub cutoff: f64,
    pub sigma: f64,
    pub scale: f64,
    pub max_imaginary: f64,
    pub exchange_defect: f64,
    pub parity_defect: f64,
    /// `|alpha^AU| / |alpha|` over all samples.
    pub au_fraction: f64,
    /// Largest deviation of the extracted vector from
    /// `8 pi hbar c` times the smeared delta gradient.
    pub vector_mismatch: f64,
    /// Largest `|alpha_s(rho) + alpha_s(-rho)|`.
    pub vector_oddness: f64,
}

pub fn kernel_symmetry_audit(
    ctx: &CommutatorContext,
    cutoff: f64,
    sample_count: usize,
    seed: u64,
    sigma: f64,
) -> Result<KernelAudit> {
    let lattice = ctx.lattice(cutoff)?;
    let method = Method::mode_sum(Arc::clone(&lattice));
    let g = TestFunction::centered(sigma)?;
    let scale = ctx.scale(&g, &g);
    let points = symmetric_sample_points(sample_count, ctx.box_length() / 8.0, seed);
    let mut values: Vec<Matrix3> = Vec::with_capacity(points.len());
    let mut expected = Vec::with_capacity(points.len());
    let mut max_imaginary: f64 = 0.0;
    let alpha = 8.0 * PI * ctx.units().hbar() * ctx.units().c();
    for p in &points {
        let f = TestFunction::new(*p, sigma)?;
        let tensor = commutator_tensor(ctx, Pair::FdF, 0.0, &f, &g, &method)?;
        let mut real = [[0.0; 3]; 3];
        for k in 0..3 {
            for l in 0..3 {
                real[k][l] = tensor[k][l].re;
                max_imaginary = max_imaginary.max(tensor[k][l].im.abs());
            }
        }
        values.push(real);
        expected.push(vec3::scale(alpha, overlap_gradient(ctx, &f, &g)));
    }
    let field = Tensor3x3Field::new(points, values)?;
    let parts = decompose_gu_sa(&field);
    let total = field.norm();
    let vectors = parts
        .au
        .values()
        .iter()
        .map(antisym_to_vector)
        .collect::<Result<Vec<_>>>()?;
    let mut vector_mismatch: f64 = 0.0;
    let mut vector_oddness: f64 = 0.0;
    for (i, v) in vectors.iter().enumerate() {
        let partner = vectors[field.partner(i)];
        for s in 0..3 {
            vector_mismatch = vector_mismatch.max((v[s] - expected[i][s]).abs());
            vector_oddness = vector_oddness.max((v[s] + partner[s]).abs());
        }
    }
    Ok(KernelAudit {
        seed,
        sample_points: field.points().len(),
        cutoff,
        sigma,
        scale,
        max_imaginary: max_imaginary / scale,
        exchange_defect: exchange_symmetry_defect(&field) / scale,
        parity_defect: pseudotensor_parity_check(&field) / scale,
        au_fraction: if total > 0.0 { parts.au.norm() / total } else { 0.0 },
        vector_mismatch: vector_mismatch / scale,
        vector_oddness: vector_oddness / scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationReport {
    /// `c` in `N_k^2 = c hbar w / V`, fitted from the energy of one mode.
    pub fitted_coefficient: f64,
    /// `2 N_k^2 V / |k|` from the fitted coefficient (any mode gives the same).
    pub implied_prefactor: f64,
    /// `4 pi hbar c`.
    pub expected_prefactor: f64,
    /// Largest `|implied / expected - 1|` over the lattice.
    pub prefactor_relative_error: f64,
    /// Relative difference between the equal-time `[E_1, B_2]` mode sum built
    /// with the fitted coefficient and the closed form.
    pub commutator_relative_error: f64,
}

/// Fixes `N_k` from the single-mode energy and compares the resulting
/// commutator prefactor with `4 pi hbar c`.
pub fn normalization_check(
    ctx: &CommutatorContext,
    grid: &SpatialGrid,
    f: &TestFunction,
    g: &TestFunction,
    cutoff: f64,
) -> Result<NormalizationReport> {
    let units = ctx.units();
    let volume = grid.volume();
    let small = Arc::new(ModeLattice::for_box(grid.box_length(), grid.fundamental_wavenumber(), units)?);
    let probe = plane_wave(
        Arc::clone(&small),
        [grid.fundamental_wavenumber(), 0.0, 0.0],
        Polarization::One,
        Complex64::new(1.0, 0.0),
    )?;
    let config = synthesize_normalized(&probe, grid, 0.0, ModeNormalization::Unit)?;
    let fitted = ModeNormalization::from_unit_energy(energy(&config), volume);
    let lattice = ctx.lattice(cutoff)?;
    let expected = 4.0 * PI * units.hbar() * units.c();
    let mut implied = 0.0;
    let mut worst: f64 = 0.0;
    for m in lattice.modes() {
        let n = fitted.amplitude(&units, m.omega, volume);
        let p = 2.0 * n * n * volume / m.k_norm;
        implied = p;
        worst = worst.max((p / expected - 1.0).abs());
    }
    let method = Method::ModeSum {
        lattice,
        normalization: fitted,
    };
    let sum = commutator_tensor(ctx, Pair::EB, 0.0, f, g, &method)?[0][1];
    let exact = commutator_tensor(ctx, Pair::EB, 0.0, f, g, &Method::Analytic)?[0][1];
    Ok(NormalizationReport {
        fitted_coefficient: fitted.coefficient().unwrap_or(f64::NAN),
        implied_prefactor: implied,
        expected_prefactor: expected,
        prefactor_relative_error: worst,
        commutator_relative_error: (sum - exact).norm() / exact.norm(),
    })
}
