//! Closed-form route.
//!
//! Equal times: with `A = (2 pi S)^{-3/2}` the overlap of `f` and `g` is
//! `O(d) = A exp(-|d|^2 / 2S)` (per image) and
//!
//! ```text
//! [E_k, B_l]     -> -i 4 pi hbar c eps_kls d_s O
//! [Fd_k, F_l]    ->    8 pi hbar c eps_kls d_s O
//! ```
//!
//! with all same-type pairs zero. Unequal times: the cross-correlation of
//! `f` and `g` is a Gaussian of variance `S` centered at `d`, and its
//! integral against the Pauli-Jordan shells at radius `|c tau|` is
//! `Phi(d, tau) = -A S Psi_0(|d|; c tau)` (see [`super::radial`]). Spatial
//! derivatives of `D` act as derivatives in `d`, so
//!
//! ```text
//! [E_k, E_l] = [B_k, B_l] -> i 4 pi hbar c (d_k d_l - delta_kl d_tau^2 / c^2) Phi
//! [E_k, B_l]              -> i 4 pi hbar eps_kls d_s d_tau Phi
//! [Fd_k, F_l]             -> i 8 pi hbar c (d_k d_l - delta_kl d_tau^2 / c^2) Phi
//!                            - 8 pi hbar eps_kls d_s d_tau Phi
//! ```
//!
//! and `[F, F] = [Fd, Fd] = 0`. Derivatives in `tau` are derivatives in the
//! signed radius `R = c tau`, which keeps every expression smooth through
//! `tau = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::radial::psi_jet;
use super::smearing::{gaussian_normalization, images, TestFunction};
use super::{CommutatorContext, Pair};
use crate::tensoralg::epsilon;
use crate::vec3::{self, Vec3};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn variance(f: &TestFunction, g: &TestFunction) -> f64 {
    f.sigma().powi(2) + g.sigma().powi(2)
}

/// Gradient in `d` of the periodized overlap.
pub(super) fn overlap_gradient(ctx: &CommutatorContext, f: &TestFunction, g: &TestFunction) -> Vec3 {
    let s = variance(f, g);
    let a = gaussian_normalization(s);
    let d = vec3::sub(f.center(), g.center());
    images(d, ctx.box_length(), 1).fold(vec3::ZERO, |acc, x| {
        let w = -a * (-vec3::dot(x, x) / (2.0 * s)).exp() / s;
        vec3::add(acc, vec3::scale(w, x))
    })
}

fn epsilon_contract(k: usize, l: usize, v: Vec3) -> f64 {
    (0..3).map(|s| f64::from(epsilon(k, l, s)) * v[s]).sum()
}

pub(super) fn equal_time_tensor(
    ctx: &CommutatorContext,
    pair: Pair,
    f: &TestFunction,
    g: &TestFunction,
) -> [[Complex64; 3]; 3] {
    let hbar_c = ctx.units().hbar() * ctx.units().c();
    let prefactor = match pair {
        Pair::EB => Complex64::new(0.0, -4.0 * PI * hbar_c),
        Pair::FdF => Complex64::new(8.0 * PI * hbar_c, 0.0),
        _ => return [[ZERO; 3]; 3],
    };
    let grad = overlap_gradient(ctx, f, g);
    std::array::from_fn(|k| std::array::from_fn(|l| prefactor * epsilon_contract(k, l, grad)))
}

/// Smeared Pauli-Jordan function and the derivatives entering the
/// unequal-time commutators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmearedPauliJordan {
    /// `Phi`.
    pub value: f64,
    /// `d_tau Phi`.
    pub rate: f64,
    /// `d_tau^2 Phi`.
    pub second_rate: f64,
    /// `d_k d_l Phi`.
    pub hessian: [[f64; 3]; 3],
    /// `d_s d_tau Phi`.
    pub rate_gradient: Vec3,
}

/// `Phi(d, tau)` for a Gaussian of variance `variance` centered at `d`,
/// summed over periodic images.
pub fn smeared_pauli_jordan_jets(
    ctx: &CommutatorContext,
    d: Vec3,
    variance: f64,
    tau: f64,
) -> SmearedPauliJordan {
    let c = ctx.units().c();
    let radius = c * tau;
    let root = variance.sqrt();
    let amp = -gaussian_normalization(variance) * variance;
    let mut out = SmearedPauliJordan {
        value: 0.0,
        rate: 0.0,
        second_rate: 0.0,
        hessian: [[0.0; 3]; 3],
        rate_gradient: vec3::ZERO,
    };
    for x in images(d, ctx.box_length(), 2) {
        let u = vec3::norm(x);
        if u - radius.abs() > 40.0 * root {
            continue;
        }
        let j0 = psi_jet(0, u, radius, variance);
        let j1 = psi_jet(1, u, radius, variance);
        let j2 = psi_jet(2, u, radius, variance);
        out.value += amp * j0.value;
        out.rate += amp * c * j1.value;
        out.second_rate += amp * c * c * j2.value;
        let h = j0.hessian(x);
        for k in 0..3 {
            for l in 0..3 {
                out.hessian[k][l] += amp * h[k][l];
            }
        }
        out.rate_gradient = vec3::add(out.rate_gradient, vec3::scale(amp * c, j1.gradient(x)));
    }
    out
}

pub(super) fn unequal_time_tensor(
    ctx: &CommutatorContext,
    pair: Pair,
    tau: f64,
    f: &TestFunction,
    g: &TestFunction,
) -> [[Complex64; 3]; 3] {
    if matches!(pair, Pair::FF | Pair::FdFd) {
        return [[ZERO; 3]; 3];
    }
    let hbar = ctx.units().hbar();
    let c = ctx.units().c();
    let d = vec3::sub(f.center(), g.center());
    let jets = smeared_pauli_jordan_jets(ctx, d, variance(f, g), tau);
    let wave = |k: usize, l: usize| {
        let diag = if k == l { jets.second_rate / (c * c) } else { 0.0 };
        jets.hessian[k][l] - diag
    };
    let curl = |k: usize, l: usize| epsilon_contract(k, l, jets.rate_gradient);
    std::array::from_fn(|k| {
        std::array::from_fn(|l| match pair {
            Pair::EE | Pair::BB => I * (4.0 * PI * hbar * c * wave(k, l)),
            Pair::EB => I * (4.0 * PI * hbar * curl(k, l)),
            Pair::FdF => I * (8.0 * PI * hbar * c * wave(k, l)) - 8.0 * PI * hbar * curl(k, l),
            Pair::FF | Pair::FdFd => ZERO,
        })
    })
}

pub(super) fn pauli_jordan(ctx: &CommutatorContext, g: &TestFunction, tau: f64) -> f64 {
    smeared_pauli_jordan_jets(ctx, g.center(), g.sigma().powi(2), tau).value
}
