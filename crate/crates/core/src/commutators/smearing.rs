//! Periodized Gaussian test functions.
//!
//! On a box of side `L` a test function is the lattice sum
//! `f(r) = sum_n (2 pi s^2)^{-3/2} exp(-|r - c - n L|^2 / 2 s^2)`, which has
//! Fourier series `f(r) = (1/V) sum_k exp(i k.(r - c)) exp(-s^2 k^2 / 2)` and
//! integrates to one over the box exactly. Images beyond the nearest shell are
//! below `exp(-100)` once `s <= L/10`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::vec3::{self, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    center: Vec3,
    sigma: f64,
}

impl TestFunction {
    pub fn new(center: Vec3, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(invalid("sigma", format!("must be positive, got {sigma}")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(invalid("center", format!("must be finite, got {center:?}")));
        }
        Ok(Self { center, sigma })
    }

    pub fn centered(sigma: f64) -> Result<Self> {
        Self::new(vec3::ZERO, sigma)
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Normalization `(2 pi s^2)^{-3/2}` of one image.
    pub fn normalization(&self) -> f64 {
        gaussian_normalization(self.sigma * self.sigma)
    }

    pub fn check_box(&self, box_length: f64) -> Result<()> {
        let limit = box_length / 10.0;
        if self.sigma > limit {
            return Err(Error::SigmaTooLarge {
                sigma: self.sigma,
                limit,
            });
        }
        Ok(())
    }

    /// Fourier weight `exp(-s^2 k^2 / 2)`.
    pub fn fourier_weight(&self, k_sq: f64) -> f64 {
        (-0.5 * self.sigma * self.sigma * k_sq).exp()
    }

    /// Value of the periodized function at `r`.
    pub fn value(&self, r: Vec3, box_length: f64) -> f64 {
        let var = self.sigma * self.sigma;
        let norm = self.normalization();
        nearest_images(vec3::sub(r, self.center), box_length)
            .map(|x| norm * (-vec3::dot(x, x) / (2.0 * var)).exp())
            .sum()
    }

    /// Gradient of the periodized function at `r`.
    pub fn gradient(&self, r: Vec3, box_length: f64) -> Vec3 {
        let var = self.sigma * self.sigma;
        let norm = self.normalization();
        nearest_images(vec3::sub(r, self.center), box_length).fold(vec3::ZERO, |acc, x| {
            let w = -norm * (-vec3::dot(x, x) / (2.0 * var)).exp() / var;
            vec3::add(acc, vec3::scale(w, x))
        })
    }
}

pub(crate) fn gaussian_normalization(variance: f64) -> f64 {
    (2.0 * PI * variance).powf(-1.5)
}

/// Wraps each component into `[-L/2, L/2)`.
pub(crate) fn wrap_displacement(d: Vec3, box_length: f64) -> Vec3 {
    d.map(|x| x - box_length * (x / box_length).round())
}

/// `d + n L` for `n` in `{-reach..reach}^3`, after wrapping `d`.
pub(crate) fn images(d: Vec3, box_length: f64, reach: i32) -> impl Iterator<Item = Vec3> {
    let base = wrap_displacement(d, box_length);
    (-reach..=reach).flat_map(move |i| {
        (-reach..=reach).flat_map(move |j| {
            (-reach..=reach).map(move |k| {
                [
                    base[0] + f64::from(i) * box_length,
                    base[1] + f64::from(j) * box_length,
                    base[2] + f64::from(k) * box_length,
                ]
            })
        })
    })
}

fn nearest_images(d: Vec3, box_length: f64) -> impl Iterator<Item = Vec3> {
    images(d, box_length, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_width() {
        assert!(TestFunction::centered(0.0).is_err());
        assert!(TestFunction::centered(-1.0).is_err());
        let f = TestFunction::centered(1.0).unwrap();
        assert!(matches!(f.check_box(5.0), Err(Error::SigmaTooLarge { .. })));
        assert!(f.check_box(10.0).is_ok());
    }

    #[test]
    fn grid_integral_is_one() {
        let l = 2.0 * PI;
        let n = 24;
        let h = l / n as f64;
        let f = TestFunction::new([0.3, -1.2, 2.9], 0.5).unwrap();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    total += f.value([i as f64 * h, j as f64 * h, k as f64 * h], l);
                }
            }
        }
        assert!((total * h.powi(3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_difference() {
        let l = 2.0 * PI;
        let f = TestFunction::new([0.1, 0.2, -0.4], 0.6).unwrap();
        let r = [0.5, -0.3, 0.2];
        let g = f.gradient(r, l);
        let h = 1e-5;
        for s in 0..3 {
            let mut p = r;
            let mut m = r;
            p[s] += h;
            m[s] -= h;
            let fd = (f.value(p, l) - f.value(m, l)) / (2.0 * h);
            assert!((fd - g[s]).abs() < 1e-8);
        }
    }

    #[test]
    fn wrapping_is_periodic() {
        let l = 2.0;
        let w = wrap_displacement([1.7, -1.2, 0.4], l);
        assert!((w[0] + 0.3).abs() < 1e-15);
        assert!((w[1] - 0.8).abs() < 1e-15);
        assert_eq!(w[2], 0.4);
    }
}
