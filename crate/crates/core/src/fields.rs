//! Field states in mode space and their synthesis on the grid.
//!
//! A mode state assigns a complex amplitude `a` to every `(k, lambda)` pair
//! of a [`ModeLattice`]. The real fields are
//!
//! ```text
//! E(r, t) = sum  i N_k a e_lambda        exp(i(k.r - w t)) + c.c.
//! B(r, t) = sum  i N_k a (k_hat x e_lambda) exp(i(k.r - w t)) + c.c.
//! ```
//!
//! and `F = E + i B`. With `N_k = sqrt(2 pi hbar w / V)` the classical energy
//! `(1 / 8 pi) int (E^2 + B^2)` of one mode is `hbar w |a|^2`. The same
//! coefficient sets the mode-sum commutator prefactor, which the commutators
//! module checks against the closed form.
//!
//! This phase convention is the only one in the crate: the transforms and the
//! commutator mode sums both rely on it.
//!
//! The helicity content is diagonal: every term of `F` at spatial wavevector
//! `q` lies along `e1 + i e2` of its own mode, so a single circularly
//! polarized mode (`a_2 = +i a_1` for the `exp(i k.r)` branch, `a_2 = -i a_1`
//! for the conjugate branch) gives a field of constant magnitude.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fft::{self, Fft3};
use crate::lattice::{Mode, ModeLattice, Polarization, SpatialGrid, UnitSystem};
use crate::vec3::{self, CVec3, Vec3};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Mode expansion coefficient `N_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeNormalization {
    /// `N_k = sqrt(coefficient * hbar * w / V)`.
    Energy { coefficient: f64 },
    /// `N_k = 1` for every mode; used to measure the normalization from scratch.
    Unit,
}

impl ModeNormalization {
    /// `coefficient = 2 pi`: single-mode energy is `hbar w |a|^2`.
    pub const STANDARD: ModeNormalization = ModeNormalization::Energy {
        coefficient: 2.0 * PI,
    };

    pub fn amplitude(&self, units: &UnitSystem, omega: f64, volume: f64) -> f64 {
        match *self {
            Self::Energy { coefficient } => (coefficient * units.hbar() * omega / volume).sqrt(),
            Self::Unit => 1.0,
        }
    }

    /// Fixes the coefficient from the energy of a unit-amplitude mode
    /// synthesized with [`ModeNormalization::Unit`]. Energy is quadratic in
    /// `N_k`, so `hbar w = N_k^2 H_unit` gives `coefficient = V / H_unit`.
    pub fn from_unit_energy(unit_energy: f64, volume: f64) -> Self {
        Self::Energy {
            coefficient: volume / unit_energy,
        }
    }

    pub fn coefficient(&self) -> Option<f64> {
        match *self {
            Self::Energy { coefficient } => Some(coefficient),
            Self::Unit => None,
        }
    }
}

impl Default for ModeNormalization {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Complex amplitude per `(mode, polarization)` over a shared lattice.
#[derive(Debug, Clone)]
pub struct ModeAmplitudes {
    lattice: Arc<ModeLattice>,
    amp: Vec<[Complex64; 2]>,
}

impl PartialEq for ModeAmplitudes {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) && self.amp == other.amp
    }
}

impl ModeAmplitudes {
    pub fn zeros(lattice: Arc<ModeLattice>) -> Self {
        let amp = vec![[Complex64::new(0.0, 0.0); 2]; lattice.len()];
        Self { lattice, amp }
    }

    pub fn lattice(&self) -> &Arc<ModeLattice> {
        &self.lattice
    }

    pub fn get(&self, mode: usize, lambda: Polarization) -> Complex64 {
        self.amp[mode][lambda.slot()]
    }

    pub fn set(&mut self, mode: usize, lambda: Polarization, value: Complex64) {
        self.amp[mode][lambda.slot()] = value;
    }

    pub fn entries(&self) -> &[[Complex64; 2]] {
        &self.amp
    }

    /// Iterates `(mode, lambda, amplitude)` over nonzero entries.
    pub fn nonzero(&self) -> impl Iterator<Item = (&Mode, Polarization, Complex64)> + '_ {
        self.lattice
            .modes()
            .iter()
            .zip(&self.amp)
            .flat_map(|(m, a)| {
                Polarization::BOTH
                    .into_iter()
                    .map(move |lam| (m, lam, a[lam.slot()]))
            })
            .filter(|(_, _, a)| *a != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero().next().is_none()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            lattice: self.lattice.clone(),
            amp: self.amp.iter().map(|a| [a[0] * s, a[1] * s]).collect(),
        }
    }

    /// Applies `a -> a * phase(mode)` to both polarizations of every mode.
    pub fn map_phase(&self, phase: impl Fn(&Mode) -> Complex64) -> Self {
        let amp = self
            .lattice
            .modes()
            .iter()
            .zip(&self.amp)
            .map(|(m, a)| {
                let p = phase(m);
                [a[0] * p, a[1] * p]
            })
            .collect();
        Self {
            lattice: self.lattice.clone(),
            amp,
        }
    }

    /// Random state with `count` distinct excited `(mode, lambda)` entries.
    pub fn random(lattice: Arc<ModeLattice>, count: usize, seed: u64) -> Self {
        let mut state = Self::zeros(lattice);
        let total = state.amp.len() * 2;
        let count = count.min(total);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut filled = 0;
        while filled < count {
            let slot = rng.gen_range(0..total);
            let (mode, lam) = (slot / 2, slot % 2);
            if state.amp[mode][lam] != Complex64::new(0.0, 0.0) {
                continue;
            }
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            state.amp[mode][lam] = Complex64::new(re, im);
            filled += 1;
        }
        state
    }

    fn check_same_lattice(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice)
            || (self.lattice.len() == other.lattice.len()
                && self.lattice.box_length() == other.lattice.box_length())
        {
            Ok(())
        } else {
            Err(Error::Incompatible(
                "mode amplitudes live on different lattices".into(),
            ))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_lattice(other)?;
        let amp = self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| [a[0] + b[0], a[1] + b[1]])
            .collect();
        Ok(Self {
            lattice: self.lattice.clone(),
            amp,
        })
    }

    /// Serializes nonzero entries as `nx ny nz lambda re im` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, lam, a) in self.nonzero() {
            let _ = writeln!(
                out,
                "{} {} {} {} {:.17e} {:.17e}",
                m.n[0],
                m.n[1],
                m.n[2],
                lam.label(),
                a.re,
                a.im
            );
        }
        out
    }

    /// Parses the text format written by [`ModeAmplitudes::to_text`].
    ///
    /// Blank lines and lines starting with `#` are skipped. Repeated entries
    /// accumulate.
    pub fn from_text(lattice: Arc<ModeLattice>, text: &str) -> Result<Self> {
        let mut state = Self::zeros(lattice);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |reason: String| Error::Parse {
                line: lineno + 1,
                reason,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 6 {
                return Err(parse_err(format!("expected 6 fields, found {}", fields.len())));
            }
            let mut n = [0i32; 3];
            for (slot, f) in n.iter_mut().zip(&fields[..3]) {
                *slot = f
                    .parse()
                    .map_err(|e| parse_err(format!("bad wave index `{f}`: {e}")))?;
            }
            let lam: u8 = fields[3]
                .parse()
                .map_err(|e| parse_err(format!("bad polarization `{}`: {e}", fields[3])))?;
            let lam = Polarization::from_label(lam).map_err(|e| parse_err(e.to_string()))?;
            let re: f64 = fields[4]
                .parse()
                .map_err(|e| parse_err(format!("bad real part `{}`: {e}", fields[4])))?;
            let im: f64 = fields[5]
                .parse()
                .map_err(|e| parse_err(format!("bad imaginary part `{}`: {e}", fields[5])))?;
            let mode = state
                .lattice
                .index_of(n)
                .ok_or_else(|| parse_err(format!("wave index {n:?} is not on the lattice")))?;
            state.amp[mode][lam.slot()] += Complex64::new(re, im);
        }
        Ok(state)
    }
}

impl Add for &ModeAmplitudes {
    type Output = ModeAmplitudes;
    fn add(self, rhs: Self) -> ModeAmplitudes {
        self.try_add(rhs).expect("mode amplitudes on different lattices")
    }
}

impl Sub for &ModeAmplitudes {
    type Output = ModeAmplitudes;
    fn sub(self, rhs: Self) -> ModeAmplitudes {
        self.try_add(&rhs.scaled((-1.0).into()))
            .expect("mode amplitudes on different lattices")
    }
}

impl Neg for &ModeAmplitudes {
    type Output = ModeAmplitudes;
    fn neg(self) -> ModeAmplitudes {
        self.scaled((-1.0).into())
    }
}

impl Mul<Complex64> for &ModeAmplitudes {
    type Output = ModeAmplitudes;
    fn mul(self, rhs: Complex64) -> ModeAmplitudes {
        self.scaled(rhs)
    }
}

/// Single-entry state on the lattice wavevector `k`.
pub fn plane_wave(
    lattice: Arc<ModeLattice>,
    k: Vec3,
    lambda: Polarization,
    amplitude: Complex64,
) -> Result<ModeAmplitudes> {
    let mode = lattice.locate(k)?;
    let mut state = ModeAmplitudes::zeros(lattice);
    state.set(mode, lambda, amplitude);
    Ok(state)
}

/// Circularly polarized state: all of `F` carried by the `exp(i k.r)` branch
/// (`sign = +1`, `a_2 = i a_1`) or by the conjugate branch (`sign = -1`).
pub fn circular_wave(
    lattice: Arc<ModeLattice>,
    k: Vec3,
    sign: i8,
    amplitude: Complex64,
) -> Result<ModeAmplitudes> {
    let mode = lattice.locate(k)?;
    let mut state = ModeAmplitudes::zeros(lattice);
    state.set(mode, Polarization::One, amplitude);
    state.set(mode, Polarization::Two, I * f64::from(sign.signum()) * amplitude);
    Ok(state)
}

/// Complex field `F = E + i B` sampled on the grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfiguration {
    pub(crate) grid: SpatialGrid,
    pub(crate) t: f64,
    pub(crate) values: Vec<CVec3>,
    /// Largest imaginary part left in the synthesized `E` and `B` by the
    /// inverse transform (zero for configurations built from real data).
    pub(crate) reality_defect: f64,
}

impl FieldConfiguration {
    pub fn from_values(grid: SpatialGrid, t: f64, values: Vec<CVec3>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Incompatible(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid,
            t,
            values,
            reality_defect: 0.0,
        })
    }

    pub fn zeros(grid: SpatialGrid, t: f64) -> Self {
        Self {
            grid,
            t,
            values: vec![vec3::CZERO; grid.len()],
            reality_defect: 0.0,
        }
    }

    /// Builds `F = E + i B` from real samples.
    pub fn from_eb(grid: SpatialGrid, t: f64, e: &[Vec3], b: &[Vec3]) -> Result<Self> {
        if e.len() != grid.len() || b.len() != grid.len() {
            return Err(Error::Incompatible("E/B sample count mismatch".into()));
        }
        let values = e
            .iter()
            .zip(b)
            .map(|(e, b)| std::array::from_fn(|c| Complex64::new(e[c], b[c])))
            .collect();
        Ok(Self {
            grid,
            t,
            values,
            reality_defect: 0.0,
        })
    }

    /// Evaluates a closed-form field at every grid point.
    pub fn from_fn(grid: SpatialGrid, t: f64, f: impl Fn(Vec3) -> CVec3) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.position(i))).collect();
        Self {
            grid,
            t,
            values,
            reality_defect: 0.0,
        }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn values(&self) -> &[CVec3] {
        &self.values
    }

    pub fn reality_defect(&self) -> f64 {
        self.reality_defect
    }

    /// `E = Re F`, `B = Im F`.
    pub fn to_eb(&self) -> (Vec<Vec3>, Vec<Vec3>) {
        self.values
            .iter()
            .map(|f| (f.map(|c| c.re), f.map(|c| c.im)))
            .unzip()
    }

    /// Largest pointwise magnitude `|F(r)|`.
    pub fn field_scale(&self) -> f64 {
        max_magnitude(&self.values)
    }

    /// Adds the curl-free field `amplitude * k_hat * cos(k.r)` to `E`,
    /// breaking the transversality of the state.
    pub fn inject_longitudinal(&mut self, n: [i32; 3], amplitude: f64) {
        let dk = self.grid.fundamental_wavenumber();
        let k = n.map(|c| f64::from(c) * dk);
        let k_hat = vec3::normalize(k);
        for (flat, value) in self.values.iter_mut().enumerate() {
            let phase = vec3::dot(k, self.grid.position(flat)).cos() * amplitude;
            for c in 0..3 {
                value[c] += k_hat[c] * phase;
            }
        }
    }

    pub fn max_difference(&self, other: &Self) -> f64 {
        max_difference(&self.values, &other.values)
    }
}

pub(crate) fn max_magnitude(values: &[CVec3]) -> f64 {
    values
        .iter()
        .map(|v| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

pub(crate) fn max_difference(a: &[CVec3], b: &[CVec3]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| (0..3).map(move |c| (x[c] - y[c]).norm()))
        .fold(0.0, f64::max)
}

/// Which time derivative of the mode expansion to place on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Order {
    Field,
    TimeDerivative,
}

fn check_band_limit(modes: &ModeAmplitudes, grid: &SpatialGrid) -> Result<()> {
    let lattice = modes.lattice();
    if (lattice.box_length() - grid.box_length()).abs() > 1e-12 * grid.box_length() {
        return Err(Error::Incompatible(format!(
            "lattice box {} differs from grid box {}",
            lattice.box_length(),
            grid.box_length()
        )));
    }
    let nyquist = grid.nyquist();
    if lattice.k_max() >= nyquist {
        return Err(Error::Aliasing {
            k_max: lattice.k_max(),
            nyquist,
        });
    }
    Ok(())
}

/// Synthesizes `E` and `B` as complex grid arrays (imaginary parts are roundoff).
fn synthesize_components(
    modes: &ModeAmplitudes,
    grid: &SpatialGrid,
    t: f64,
    normalization: ModeNormalization,
    order: Order,
) -> Result<[Vec<Complex64>; 6]> {
    check_band_limit(modes, grid)?;
    let lattice = modes.lattice();
    let units = lattice.units();
    let n = grid.points_per_axis();
    let total = (n as f64).powi(3);
    let volume = grid.volume();
    let mut spectra: [Vec<Complex64>; 6] =
        std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); grid.len()]);

    for (m, lam, a) in modes.nonzero() {
        let norm = normalization.amplitude(&units, m.omega, volume);
        let mut coeff = I * norm * a * Complex64::from_polar(1.0, -m.omega * t);
        if order == Order::TimeDerivative {
            coeff *= -I * m.omega;
        }
        let coeff = coeff * total;
        let e = m.polarization(lam);
        let b = m.magnetic_polarization(lam);
        let plus = grid.index(m.n[0] as isize, m.n[1] as isize, m.n[2] as isize);
        let minus = grid.index(-m.n[0] as isize, -m.n[1] as isize, -m.n[2] as isize);
        for c in 0..3 {
            spectra[c][plus] += coeff * e[c];
            spectra[c][minus] += coeff.conj() * e[c];
            spectra[3 + c][plus] += coeff * b[c];
            spectra[3 + c][minus] += coeff.conj() * b[c];
        }
    }
    let plan = Fft3::new(n);
    for s in spectra.iter_mut() {
        plan.inverse(s);
    }
    Ok(spectra)
}

fn assemble(grid: &SpatialGrid, t: f64, comps: [Vec<Complex64>; 6]) -> FieldConfiguration {
    let mut reality_defect: f64 = 0.0;
    let values = (0..grid.len())
        .map(|i| {
            std::array::from_fn(|c| {
                let e = comps[c][i];
                let b = comps[3 + c][i];
                reality_defect = reality_defect.max(e.im.abs()).max(b.im.abs());
                Complex64::new(e.re, b.re)
            })
        })
        .collect();
    FieldConfiguration {
        grid: *grid,
        t,
        values,
        reality_defect,
    }
}

/// Synthesizes `F = E + i B` at time `t` with the standard normalization.
pub fn synthesize(modes: &ModeAmplitudes, grid: &SpatialGrid, t: f64) -> Result<FieldConfiguration> {
    synthesize_normalized(modes, grid, t, ModeNormalization::STANDARD)
}

pub fn synthesize_normalized(
    modes: &ModeAmplitudes,
    grid: &SpatialGrid,
    t: f64,
    normalization: ModeNormalization,
) -> Result<FieldConfiguration> {
    let comps = synthesize_components(modes, grid, t, normalization, Order::Field)?;
    Ok(assemble(grid, t, comps))
}

/// Analytic `dF/dt` at time `t`: every `exp(-i w t)` branch picks up `-i w`.
pub fn synthesize_time_derivative(
    modes: &ModeAmplitudes,
    grid: &SpatialGrid,
    t: f64,
) -> Result<FieldConfiguration> {
    let comps = synthesize_components(
        modes,
        grid,
        t,
        ModeNormalization::STANDARD,
        Order::TimeDerivative,
    )?;
    Ok(assemble(grid, t, comps))
}

/// Compares the grid-shifted field `F(r + delta)` with the field synthesized
/// from the phase-shifted amplitudes `a exp(i k.delta)`. Returns the largest
/// component-wise discrepancy.
pub fn check_translation_generation(
    modes: &ModeAmplitudes,
    grid: &SpatialGrid,
    delta: Vec3,
) -> Result<f64> {
    let h = grid.spacing();
    let mut shift = [0isize; 3];
    for c in 0..3 {
        let steps = delta[c] / h;
        let rounded = steps.round();
        if (steps - rounded).abs() > 1e-9 * (1.0 + rounded.abs()) {
            return Err(Error::NonCommensurateShift { delta, spacing: h });
        }
        shift[c] = rounded as isize;
    }
    let base = synthesize(modes, grid, 0.0)?;
    let n = grid.points_per_axis() as isize;
    let translated: Vec<CVec3> = (0..grid.len())
        .map(|flat| {
            let [i, j, k] = grid.unflatten(flat).map(|x| x as isize);
            base.values[grid.index((i + shift[0]) % n, (j + shift[1]) % n, (k + shift[2]) % n)]
        })
        .collect();
    let shifted = modes.map_phase(|m| Complex64::from_polar(1.0, vec3::dot(m.k, delta)));
    let phased = synthesize(&shifted, grid, 0.0)?;
    Ok(max_difference(&translated, &phased.values))
}

/// Closed-form `F` of one mode at one point; used by tests and by the
/// synthesis cross-checks.
pub fn mode_field_at(
    mode: &Mode,
    lambda: Polarization,
    amplitude: Complex64,
    units: &UnitSystem,
    volume: f64,
    r: Vec3,
    t: f64,
) -> CVec3 {
    let norm = ModeNormalization::STANDARD.amplitude(units, mode.omega, volume);
    let phase = Complex64::from_polar(1.0, vec3::dot(mode.k, r) - mode.omega * t);
    let z = I * norm * amplitude * phase;
    let e = mode.polarization(lambda);
    let b = mode.magnetic_polarization(lambda);
    // E = z e + c.c.,  B = z b + c.c.
    std::array::from_fn(|c| {
        let ec = 2.0 * z.re * e[c];
        let bc = 2.0 * z.re * b[c];
        Complex64::new(ec, bc)
    })
}

/// Forward transform of one scalar component, for spectral diagnostics.
pub(crate) fn spectrum(grid: &SpatialGrid, values: &[CVec3], component: usize) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = values.iter().map(|v| v[component]).collect();
    Fft3::new(grid.points_per_axis()).forward(&mut data);
    data
}

pub(crate) fn wave_vector_of_bin(grid: &SpatialGrid, flat: usize) -> Vec3 {
    let n = grid.points_per_axis();
    let dk = grid.fundamental_wavenumber();
    grid.unflatten(flat)
        .map(|m| fft::derivative_index(m, n) as f64 * dk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_grid, build_mode_lattice};

    fn setup(n: usize, kmax: f64) -> (SpatialGrid, Arc<ModeLattice>) {
        let grid = build_grid(2.0 * PI, n).unwrap();
        let lattice = build_mode_lattice(&grid, kmax, UnitSystem::default()).unwrap();
        (grid, Arc::new(lattice))
    }

    #[test]
    fn plane_wave_single_entry() {
        let (_, lattice) = setup(8, 1.5);
        let s = plane_wave(lattice.clone(), [1.0, 0.0, 0.0], Polarization::One, 1.0.into()).unwrap();
        assert_eq!(s.nonzero().count(), 1);
        let err = plane_wave(lattice, [0.5, 0.0, 0.0], Polarization::One, 1.0.into()).unwrap_err();
        match err {
            Error::NotOnLattice { nearest, .. } => assert_eq!(nearest, [1.0, 0.0, 0.0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn plane_wave_superposition_is_additive() {
        let (_, lattice) = setup(8, 1.5);
        let k = [0.0, 1.0, 0.0];
        let a = Complex64::new(0.3, -0.2);
        let b = Complex64::new(-1.1, 0.7);
        let sa = plane_wave(lattice.clone(), k, Polarization::Two, a).unwrap();
        let sb = plane_wave(lattice.clone(), k, Polarization::Two, b).unwrap();
        let sum = plane_wave(lattice, k, Polarization::Two, a + b).unwrap();
        assert_eq!(&sa + &sb, sum);
    }

    #[test]
    fn zero_state_synthesizes_zero() {
        let (grid, lattice) = setup(8, 2.0);
        let f = synthesize(&ModeAmplitudes::zeros(lattice), &grid, 0.3).unwrap();
        assert!(f.values().iter().all(|v| v.iter().all(|c| c.norm() == 0.0)));
    }

    #[test]
    fn synthesis_matches_closed_form() {
        let (grid, lattice) = setup(16, 2.5);
        let units = UnitSystem::default();
        let k = [0.0, 0.0, 1.0];
        let a = Complex64::new(0.8, 0.25);
        let s = plane_wave(lattice.clone(), k, Polarization::One, a).unwrap();
        let t = 0.37;
        let f = synthesize(&s, &grid, t).unwrap();
        let mode = &lattice.modes()[lattice.locate(k).unwrap()];
        for flat in (0..grid.len()).step_by(37) {
            let exact = mode_field_at(mode, Polarization::One, a, &units, grid.volume(), grid.position(flat), t);
            for c in 0..3 {
                assert!((f.values()[flat][c] - exact[c]).norm() < 1e-12);
            }
        }
        // B = k_hat x E for a single mode.
        let (e, b) = f.to_eb();
        for (e, b) in e.iter().zip(&b) {
            let kxe = vec3::cross(mode.k_hat, *e);
            assert!(vec3::norm(vec3::sub(kxe, *b)) < 1e-12);
        }
    }

    #[test]
    fn aliasing_guard() {
        let grid = build_grid(2.0 * PI, 4).unwrap();
        let lattice = Arc::new(build_mode_lattice(&grid, 2.0, UnitSystem::default()).unwrap());
        let s = ModeAmplitudes::random(lattice, 3, 1);
        assert!(matches!(synthesize(&s, &grid, 0.0), Err(Error::Aliasing { .. })));
    }

    #[test]
    fn period_of_single_mode() {
        let (grid, lattice) = setup(8, 2.0);
        let s = plane_wave(lattice.clone(), [1.0, 1.0, 0.0], Polarization::Two, Complex64::new(0.4, 0.9))
            .unwrap();
        let omega = 2f64.sqrt();
        let t = 0.21;
        let a = synthesize(&s, &grid, t).unwrap();
        let b = synthesize(&s, &grid, t + 2.0 * PI / omega).unwrap();
        assert!(a.max_difference(&b) < 1e-12);
    }

    #[test]
    fn eb_round_trip() {
        let grid = build_grid(1.0, 4).unwrap();
        let mut f = FieldConfiguration::zeros(grid, 0.0);
        f.values[5] = [Complex64::new(1.0, 2.0), 0.0.into(), 0.0.into()];
        let (e, b) = f.to_eb();
        assert_eq!(e[5], [1.0, 0.0, 0.0]);
        assert_eq!(b[5], [2.0, 0.0, 0.0]);
        let back = FieldConfiguration::from_eb(grid, 0.0, &e, &b).unwrap();
        assert_eq!(back, f);

        let real = FieldConfiguration::from_fn(grid, 0.0, vec3::to_complex);
        let (_, b) = real.to_eb();
        assert!(b.iter().all(|v| *v == [0.0; 3]));
    }

    #[test]
    fn translation_identity_and_period() {
        let (grid, lattice) = setup(8, 2.0);
        let s = ModeAmplitudes::random(lattice, 5, 3);
        assert_eq!(check_translation_generation(&s, &grid, [0.0; 3]).unwrap(), 0.0);
        let l = grid.box_length();
        assert!(check_translation_generation(&s, &grid, [l, l, l]).unwrap() < 1e-12);
        let h = grid.spacing();
        assert!(check_translation_generation(&s, &grid, [h, 0.0, 0.0]).unwrap() < 1e-10);
        assert!(matches!(
            check_translation_generation(&s, &grid, [0.3 * h, 0.0, 0.0]),
            Err(Error::NonCommensurateShift { .. })
        ));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let (_, lattice) = setup(8, 2.0);
        let s = ModeAmplitudes::random(lattice.clone(), 6, 11);
        let text = s.to_text();
        assert_eq!(text.lines().count(), 6);
        let back = ModeAmplitudes::from_text(lattice.clone(), &format!("# header\n\n{text}")).unwrap();
        assert_eq!(back.entries(), s.entries());

        assert!(matches!(
            ModeAmplitudes::from_text(lattice.clone(), "1 0 0 3 1.0 0.0"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(ModeAmplitudes::from_text(lattice.clone(), "9 0 0 1 1.0 0.0").is_err());
        assert!(ModeAmplitudes::from_text(lattice, "1 0 0 1 1.0").is_err());
    }

    #[test]
    fn random_state_has_requested_count() {
        let (_, lattice) = setup(8, 2.0);
        assert_eq!(ModeAmplitudes::random(lattice, 20, 5).nonzero().count(), 20);
    }

    #[test]
    fn circular_mode_has_constant_magnitude() {
        let (grid, lattice) = setup(8, 2.0);
        for sign in [1, -1] {
            let s = circular_wave(lattice.clone(), [0.0, 1.0, 1.0], sign, Complex64::new(0.7, 0.2)).unwrap();
            let f = synthesize(&s, &grid, 0.0).unwrap();
            let reference = f.field_scale();
            for t in [0.1, 0.77, 2.5] {
                let g = synthesize(&s, &grid, t).unwrap();
                for (a, b) in f.values().iter().zip(g.values()) {
                    let ma = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                    let mb = b.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                    assert!((ma - mb).abs() < 1e-12 * reference);
                }
            }
        }
    }
}
