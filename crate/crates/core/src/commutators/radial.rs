//! Spherical means of a Gaussian and their radial derivatives.
//!
//! With `q(x) = exp(-x^2 / 2S)` and `p = q^(m)`, the functions
//!
//! ```text
//! Psi_m(u; R) = [p(R - u) - p(R + u)] / (2u)
//! ```
//!
//! are even and smooth in `u`. `Psi_0` is the mean of `q` over a sphere of
//! radius `R` whose center sits at distance `u` from the Gaussian's peak,
//! up to the factor `S / (R u)`; `Psi_1` and `Psi_2` are its `R` derivatives.
//! For a field point at separation vector `d` with `u = |d|` the Cartesian
//! derivatives follow from
//!
//! ```text
//! d_k f   = d_k (f'/u)
//! d_k d_l f = d_k d_l (f'' - f'/u) / u^2 + delta_kl f'/u
//! ```
//!
//! For `u >= u_switch` the closed form is used; below it the Taylor series
//! `Psi_m = -sum_j q^(m+2j+1)(R) u^(2j) / (2j+1)!` avoids the cancellation in
//! the divided differences.

use crate::vec3::Vec3;

/// Value and radial derivative data of an even function of `u = |d|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialJet {
    pub value: f64,
    /// `f'(u) / u`.
    pub grad_over_u: f64,
    /// `(f''(u) - f'(u)/u) / u^2`.
    pub hess_coeff: f64,
}

impl RadialJet {
    pub fn gradient(&self, d: Vec3) -> Vec3 {
        d.map(|x| x * self.grad_over_u)
    }

    pub fn hessian(&self, d: Vec3) -> [[f64; 3]; 3] {
        std::array::from_fn(|k| {
            std::array::from_fn(|l| {
                let diag = if k == l { self.grad_over_u } else { 0.0 };
                d[k] * d[l] * self.hess_coeff + diag
            })
        })
    }

    pub fn laplacian(&self, d: Vec3) -> f64 {
        let u_sq: f64 = d.iter().map(|x| x * x).sum();
        u_sq * self.hess_coeff + 3.0 * self.grad_over_u
    }
}

/// `q^(n)(x)` for `n = 0..=order`, `q(x) = exp(-x^2 / 2S)`.
///
/// Uses `q^(n)(x) = (-1)^n S^(-n/2) He_n(x / sqrt S) q(x)`, with the Gaussian
/// carried through the Hermite recursion so large orders do not overflow.
pub fn gaussian_derivatives(x: f64, variance: f64, order: usize) -> Vec<f64> {
    let root = variance.sqrt();
    let y = x / root;
    let mut g = Vec::with_capacity(order + 1);
    g.push((-0.5 * y * y).exp());
    if order >= 1 {
        g.push(y * g[0]);
    }
    for n in 1..order {
        let next = y * g[n] - n as f64 * g[n - 1];
        g.push(next);
    }
    let mut scale = 1.0;
    for (n, value) in g.iter_mut().enumerate() {
        if n > 0 {
            scale *= -1.0 / root;
        }
        *value *= scale;
    }
    g
}

/// Switch point between series and closed form, in units of `sqrt(S)`.
const SERIES_RADIUS: f64 = 0.5;
const MAX_TERMS: usize = 400;

/// Jet of `Psi_m(u; R)` in `u`.
pub fn psi_jet(m: usize, u: f64, radius: f64, variance: f64) -> RadialJet {
    let u = u.abs();
    if u >= SERIES_RADIUS * variance.sqrt() {
        closed_form(m, u, radius, variance)
    } else {
        series(m, u, radius, variance)
    }
}

fn closed_form(m: usize, u: f64, radius: f64, variance: f64) -> RadialJet {
    let lo = gaussian_derivatives(radius - u, variance, m + 2);
    let hi = gaussian_derivatives(radius + u, variance, m + 2);
    let n0 = lo[m] - hi[m];
    let n1 = -lo[m + 1] - hi[m + 1];
    let n2 = lo[m + 2] - hi[m + 2];
    let value = n0 / (2.0 * u);
    let d1 = n1 / (2.0 * u) - n0 / (2.0 * u * u);
    let d2 = n2 / (2.0 * u) - n1 / (u * u) + n0 / (u * u * u);
    RadialJet {
        value,
        grad_over_u: d1 / u,
        hess_coeff: (d2 - d1 / u) / (u * u),
    }
}

fn series(m: usize, u: f64, radius: f64, variance: f64) -> RadialJet {
    let y = radius.abs() / variance.sqrt();
    let mut derivs: Vec<f64> = Vec::new();
    let u_sq = u * u;
    let (mut value, mut grad, mut hess) = (0.0, 0.0, 0.0);
    let mut largest: f64 = 0.0;
    let mut factorial = 1.0;
    // powers[i] = u^(2i)
    let mut powers = vec![1.0];
    for j in 0..MAX_TERMS {
        let n = m + 2 * j + 1;
        if n >= derivs.len() {
            derivs = gaussian_derivatives(radius, variance, 2 * n + 8);
        }
        if j > 0 {
            factorial *= (2 * j) as f64 * (2 * j + 1) as f64;
            let last = powers[j - 1];
            powers.push(last * u_sq);
        }
        let c = -derivs[n] / factorial;
        let terms = [
            c * powers[j],
            if j >= 1 { 2.0 * j as f64 * c * powers[j - 1] } else { 0.0 },
            if j >= 2 { 4.0 * (j * (j - 1)) as f64 * c * powers[j - 2] } else { 0.0 },
        ];
        value += terms[0];
        grad += terms[1];
        hess += terms[2];
        let size = terms.iter().fold(0.0_f64, |a, t| a.max(t.abs()));
        largest = largest.max(size);
        if j >= 4 && j as f64 > y + 4.0 && size <= 1e-18 * largest {
            break;
        }
    }
    RadialJet {
        value,
        grad_over_u: grad,
        hess_coeff: hess,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(m: usize, u: f64, r: f64, s: f64) -> f64 {
        let p = gaussian_derivatives(r - u, s, m);
        let q = gaussian_derivatives(r + u, s, m);
        (p[m] - q[m]) / (2.0 * u)
    }

    #[test]
    fn derivatives_match_closed_forms() {
        let s = 0.7;
        let x = 0.9;
        let d = gaussian_derivatives(x, s, 3);
        let q = (-x * x / (2.0 * s)).exp();
        assert!((d[0] - q).abs() < 1e-15);
        assert!((d[1] + x / s * q).abs() < 1e-15);
        assert!((d[2] - (x * x / (s * s) - 1.0 / s) * q).abs() < 1e-14);
    }

    #[test]
    fn series_and_closed_form_agree_at_switch() {
        let s: f64 = 0.72;
        let u = 0.5 * s.sqrt();
        for m in 0..3 {
            for r in [0.0, 0.3, 1.2, -0.8] {
                let a = closed_form(m, u, r, s);
                let b = series(m, u, r, s);
                let scale = a.value.abs().max(1e-3);
                assert!((a.value - b.value).abs() < 1e-12 * scale, "{m} {r}");
                assert!((a.grad_over_u - b.grad_over_u).abs() < 1e-9 * a.grad_over_u.abs().max(1e-2));
                assert!((a.hess_coeff - b.hess_coeff).abs() < 1e-7 * a.hess_coeff.abs().max(1e-1));
            }
        }
    }

    #[test]
    fn value_matches_definition() {
        let s = 0.3;
        for (u, r) in [(1.0, 0.7), (0.2, 1.1), (2.0, 2.1)] {
            let jet = psi_jet(1, u, r, s);
            assert!((jet.value - brute(1, u, r, s)).abs() < 1e-12);
        }
    }

    #[test]
    fn odd_in_radius() {
        let s = 0.5;
        for u in [0.0, 0.1, 0.9] {
            let plus = psi_jet(0, u, 0.6, s).value;
            let minus = psi_jet(0, u, -0.6, s).value;
            assert!((plus + minus).abs() < 1e-15);
        }
        assert_eq!(psi_jet(0, 0.7, 0.0, s).value, 0.0);
    }

    #[test]
    fn jet_at_origin_is_finite() {
        let jet = psi_jet(0, 0.0, 0.8, 0.4);
        let near = psi_jet(0, 1e-4, 0.8, 0.4);
        assert!((jet.value - near.value).abs() < 1e-7);
        assert!((jet.grad_over_u - near.grad_over_u).abs() < 1e-6);
        assert!((jet.hess_coeff - near.hess_coeff).abs() < 1e-5);
    }
}
