//! Spectral calculus, Maxwell residuals, exact evolution and the field
//! energy and momentum.
//!
//! In terms of `F = E + i B` the free equations read
//! `curl F = (i / c) dF/dt` and `div F = 0`. Derivatives are taken
//! spectrally (multiplication by `i k` on the FFT of each component), so
//! band-limited configurations are differentiated exactly up to roundoff.
//!
//! Energy and momentum use the Gaussian-unit prefactors
//! `H = (1/8 pi) int (E^2 + B^2)` and
//! `P = (1/8 pi c) int (E x B - B x E)`; the second form is the ordering
//! symmetrized for operators, and with commuting samples it is
//! `(1/4 pi c) int E x B`. Periodicity makes every surface term vanish,
//! which stands in for fields vanishing at infinity.

use num_complex::Complex64;

use crate::fft::Fft3;
use crate::fields::{self, synthesize, synthesize_time_derivative, FieldConfiguration, ModeAmplitudes};
use crate::lattice::{SpatialGrid, UnitSystem};
use crate::vec3::{self, CVec3, Vec3};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Max-abs defects of the two free Maxwell equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellResidual {
    pub curl_residual: f64,
    pub div_residual: f64,
}

impl MaxwellResidual {
    pub fn max(&self) -> f64 {
        self.curl_residual.max(self.div_residual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyMomentum {
    pub energy: f64,
    pub momentum: Vec3,
}

/// Spectral gradient of every component: `out[c][s] = d_s F_c`.
pub fn gradient(config: &FieldConfiguration) -> Vec<[CVec3; 3]> {
    let grid = config.grid();
    let n = grid.points_per_axis();
    let plan = Fft3::new(n);
    let mut out = vec![[vec3::CZERO; 3]; grid.len()];
    for c in 0..3 {
        let spectrum = fields::spectrum(grid, config.values(), c);
        for s in 0..3 {
            let mut work: Vec<Complex64> = spectrum
                .iter()
                .enumerate()
                .map(|(flat, x)| I * fields::wave_vector_of_bin(grid, flat)[s] * x)
                .collect();
            plan.inverse(&mut work);
            for (o, w) in out.iter_mut().zip(work) {
                o[c][s] = w;
            }
        }
    }
    out
}

pub fn curl(config: &FieldConfiguration) -> Vec<CVec3> {
    gradient(config)
        .into_iter()
        .map(|g| {
            // (curl F)_j = eps_jkl d_k F_l, with g[l][k] = d_k F_l
            [g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]]
        })
        .collect()
}

pub fn div(config: &FieldConfiguration) -> Vec<Complex64> {
    gradient(config)
        .into_iter()
        .map(|g| g[0][0] + g[1][1] + g[2][2])
        .collect()
}

/// Residuals of `curl F = (i/c) dF/dt` and `div F = 0`.
pub fn maxwell_residual(
    config: &FieldConfiguration,
    df_dt: &FieldConfiguration,
    units: &UnitSystem,
) -> MaxwellResidual {
    let rot = curl(config);
    let k = I / units.c();
    let curl_residual = rot
        .iter()
        .zip(df_dt.values())
        .flat_map(|(r, d)| (0..3).map(move |c| (r[c] - k * d[c]).norm()))
        .fold(0.0, f64::max);
    let div_residual = div(config).iter().map(|d| d.norm()).fold(0.0, f64::max);
    MaxwellResidual {
        curl_residual,
        div_residual,
    }
}

/// Central finite-difference `dF/dt` with step `1e-4 / w_max`.
pub fn finite_difference_time_derivative(
    modes: &ModeAmplitudes,
    grid: &SpatialGrid,
    t: f64,
) -> crate::Result<FieldConfiguration> {
    let omega_max = modes
        .nonzero()
        .map(|(m, _, _)| m.omega)
        .fold(0.0, f64::max);
    if omega_max == 0.0 {
        return Ok(FieldConfiguration::zeros(*grid, t));
    }
    let h = 1e-4 / omega_max;
    let ahead = synthesize(modes, grid, t + h)?;
    let behind = synthesize(modes, grid, t - h)?;
    let values = ahead
        .values()
        .iter()
        .zip(behind.values())
        .map(|(a, b)| std::array::from_fn(|c| (a[c] - b[c]) / (2.0 * h)))
        .collect();
    FieldConfiguration::from_values(*grid, t, values)
}

/// Synthesizes a state and its analytic time derivative, then measures the residual.
pub fn synthesized_residual(
    modes: &ModeAmplitudes,
    grid: &SpatialGrid,
    t: f64,
) -> crate::Result<MaxwellResidual> {
    let f = synthesize(modes, grid, t)?;
    let d = synthesize_time_derivative(modes, grid, t)?;
    Ok(maxwell_residual(&f, &d, &modes.lattice().units()))
}

/// Exact evolution: `a -> a exp(-i w dt)`.
pub fn evolve(modes: &ModeAmplitudes, dt: f64) -> ModeAmplitudes {
    modes.map_phase(|m| Complex64::from_polar(1.0, -m.omega * dt))
}

/// Grid quadrature of `(1/8 pi) sum |F|^2 dV`.
pub fn energy(config: &FieldConfiguration) -> f64 {
    let dv = config.grid().cell_volume();
    let sum: f64 = config
        .values()
        .iter()
        .map(|f| f.iter().map(|c| c.norm_sqr()).sum::<f64>())
        .sum();
    sum * dv / (8.0 * std::f64::consts::PI)
}

/// Grid quadrature of `(1/8 pi c) sum (E x B - B x E) dV`.
pub fn momentum(config: &FieldConfiguration, units: &UnitSystem) -> Vec3 {
    let dv = config.grid().cell_volume();
    let mut total = vec3::ZERO;
    for f in config.values() {
        let e = f.map(|c| c.re);
        let b = f.map(|c| c.im);
        let density = vec3::sub(vec3::cross(e, b), vec3::cross(b, e));
        total = vec3::add(total, density);
    }
    vec3::scale(dv / (8.0 * std::f64::consts::PI * units.c()), total)
}

pub fn energy_momentum(config: &FieldConfiguration, units: &UnitSystem) -> EnergyMomentum {
    EnergyMomentum {
        energy: energy(config),
        momentum: momentum(config, units),
    }
}

/// Mode-space values `H = sum hbar w |a|^2`, `P = sum hbar k |a|^2`
/// (standard normalization).
pub fn mode_energy_momentum(modes: &ModeAmplitudes) -> EnergyMomentum {
    let hbar = modes.lattice().units().hbar();
    let mut energy = 0.0;
    let mut momentum = vec3::ZERO;
    for (m, _, a) in modes.nonzero() {
        let w = hbar * a.norm_sqr();
        energy += w * m.omega;
        momentum = vec3::add(momentum, vec3::scale(w, m.k));
    }
    EnergyMomentum { energy, momentum }
}

/// Energies of two states and of their superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossTerm {
    pub h1: f64,
    pub h2: f64,
    pub h12: f64,
    /// `H(m1 + m2) - H(m1) - H(m2)`.
    pub cross: f64,
}

pub fn energy_cross_term(
    m1: &ModeAmplitudes,
    m2: &ModeAmplitudes,
    grid: &SpatialGrid,
) -> crate::Result<CrossTerm> {
    let sum = m1.try_add(m2)?;
    let h1 = energy(&synthesize(m1, grid, 0.0)?);
    let h2 = energy(&synthesize(m2, grid, 0.0)?);
    let h12 = energy(&synthesize(&sum, grid, 0.0)?);
    Ok(CrossTerm {
        h1,
        h2,
        h12,
        cross: h12 - h1 - h2,
    })
}

/// Bilinear overlap `2 (1/8 pi) sum (E1.E2 + B1.B2) dV`.
pub fn energy_overlap(a: &FieldConfiguration, b: &FieldConfiguration) -> f64 {
    let dv = a.grid().cell_volume();
    let sum: f64 = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (0..3).map(|c| x[c].re * y[c].re + x[c].im * y[c].im).sum::<f64>())
        .sum();
    2.0 * sum * dv / (8.0 * std::f64::consts::PI)
}
