//! Mode-sum route.
//!
//! Each field is `X_k = sum x_k (a e^{i theta} - a^dag e^{-i theta})` with
//! `theta = k.r - w t` and per-mode coefficients
//! `x = i N_k e` (E), `i N_k b` (B), `i N_k (e + i b)` (F), `i N_k (e - i b)` (Fd),
//! where `b = k_hat x e`. With `[a, a^dag] = 1` per mode and polarization,
//! the smeared commutator is
//!
//! ```text
//! C_kl = -2i sum_{k, lambda} x^X_k x^Y_l sin(k.d - w tau) G(k).
//! ```
//!
//! The Pauli-Jordan function on the lattice is
//! `D(rho, tau) = -(1/V) sum_k exp(i k.rho) sin(w tau) / |k|`, including the
//! `k = 0` term `-c tau / V`, which carries no transverse polarization but
//! is needed for `D` itself.
//!
//! Sums run over fixed-size chunks in parallel and are combined by a
//! pairwise reduction in chunk order, so results do not depend on the
//! thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use super::smearing::TestFunction;
use super::Pair;
use crate::fields::ModeNormalization;
use crate::lattice::{Mode, ModeLattice, Polarization};
use crate::vec3::{self, CVec3, Vec3};

const CHUNK: usize = 1024;
const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

type Tensor = [[Complex64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    E,
    B,
    F,
    Fd,
}

fn fields_of(pair: Pair) -> (Field, Field) {
    match pair {
        Pair::FF => (Field::F, Field::F),
        Pair::FdFd => (Field::Fd, Field::Fd),
        Pair::FdF => (Field::Fd, Field::F),
        Pair::EE => (Field::E, Field::E),
        Pair::BB => (Field::B, Field::B),
        Pair::EB => (Field::E, Field::B),
    }
}

/// Polarization part `v` of the annihilation coefficient `x = i N v`.
fn polarization_vector(field: Field, mode: &Mode, lambda: Polarization) -> CVec3 {
    let e = mode.polarization(lambda);
    let b = mode.magnetic_polarization(lambda);
    std::array::from_fn(|c| match field {
        Field::E => Complex64::new(e[c], 0.0),
        Field::B => Complex64::new(b[c], 0.0),
        Field::F => Complex64::new(e[c], b[c]),
        Field::Fd => Complex64::new(e[c], -b[c]),
    })
}

fn add_tensor(a: Tensor, b: Tensor) -> Tensor {
    std::array::from_fn(|k| std::array::from_fn(|l| a[k][l] + b[k][l]))
}

/// Sums `items` pairwise in order.
fn pairwise<T: Copy>(items: &[T], zero: T, add: &impl Fn(T, T) -> T) -> T {
    match items.len() {
        0 => zero,
        1 => items[0],
        n => {
            let (left, right) = items.split_at(n / 2);
            add(pairwise(left, zero, add), pairwise(right, zero, add))
        }
    }
}

/// Deterministic parallel reduction over the modes of a lattice.
fn reduce_modes<T, F, A>(modes: &[Mode], zero: T, term: F, add: A) -> T
where
    T: Copy + Send + Sync,
    F: Fn(&Mode) -> T + Sync,
    A: Fn(T, T) -> T + Sync,
{
    let partials: Vec<T> = modes
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().fold(zero, |acc, m| add(acc, term(m))))
        .collect();
    pairwise(&partials, zero, &add)
}

pub(super) fn commutator_tensor(
    lattice: &ModeLattice,
    normalization: ModeNormalization,
    pair: Pair,
    tau: f64,
    f: &TestFunction,
    g: &TestFunction,
) -> Tensor {
    let units = lattice.units();
    let volume = lattice.volume();
    let d: Vec3 = vec3::sub(f.center(), g.center());
    let (x, y) = fields_of(pair);
    let term = |m: &Mode| -> Tensor {
        let n = normalization.amplitude(&units, m.omega, volume);
        let k_sq = m.k_norm * m.k_norm;
        let weight = f.fourier_weight(k_sq) * g.fourier_weight(k_sq);
        let phase = (vec3::dot(m.k, d) - m.omega * tau).sin();
        // -2i (i N v^X)(i N v^Y) = 2i N^2 v^X v^Y
        let s = I * (2.0 * n * n * weight * phase);
        let mut out = [[ZERO; 3]; 3];
        for lambda in Polarization::BOTH {
            let vx = polarization_vector(x, m, lambda);
            let vy = polarization_vector(y, m, lambda);
            for k in 0..3 {
                for l in 0..3 {
                    out[k][l] += s * vx[k] * vy[l];
                }
            }
        }
        out
    };
    reduce_modes(lattice.modes(), [[ZERO; 3]; 3], term, add_tensor)
}

pub(super) fn pauli_jordan(lattice: &ModeLattice, g: &TestFunction, tau: f64) -> f64 {
    let c = lattice.units().c();
    let volume = lattice.volume();
    let center = g.center();
    let sum = reduce_modes(
        lattice.modes(),
        0.0,
        |m| {
            let weight = g.fourier_weight(m.k_norm * m.k_norm);
            vec3::dot(m.k, center).cos() * weight * (m.omega * tau).sin() / m.k_norm
        },
        |a, b| a + b,
    );
    -(sum + c * tau) / volume
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_is_ordered() {
        let v: Vec<f64> = (0..37).map(|i| i as f64).collect();
        assert_eq!(pairwise(&v, 0.0, &|a, b| a + b), 666.0);
        assert_eq!(pairwise(&[] as &[f64], 0.0, &|a, b| a + b), 0.0);
    }

    #[test]
    fn fd_vector_is_conjugate() {
        let lattice = ModeLattice::for_box(6.0, 2.0, Default::default()).unwrap();
        let m = &lattice.modes()[3];
        let f = polarization_vector(Field::F, m, Polarization::Two);
        let fd = polarization_vector(Field::Fd, m, Polarization::Two);
        for c in 0..3 {
            assert_eq!(fd[c], f[c].conj());
        }
    }
}
