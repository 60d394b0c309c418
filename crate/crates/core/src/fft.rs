//! Three-dimensional discrete Fourier transform on the periodic grid.
//!
//! Conventions, fixed here and nowhere else:
//!
//! * forward: `X[m] = sum_j x[j] exp(-2 pi i j.m / N)`, unnormalized;
//! * inverse: `x[j] = (1 / N^3) sum_m X[m] exp(+2 pi i j.m / N)`.
//!
//! Array layout is row-major `(i, j, k)` with `k` fastest, matching
//! [`SpatialGrid::index`](crate::lattice::SpatialGrid::index).

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Sign of the exponent in the forward transform.
pub const FORWARD_SIGN: i32 = -1;
/// Power of `N^3` dividing the forward transform (none).
pub const FORWARD_NORMALIZATION_POWER: i32 = 0;
/// Power of `N^3` dividing the inverse transform.
pub const INVERSE_NORMALIZATION_POWER: i32 = 1;

pub struct Fft3 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft3").field("n", &self.n).finish()
    }
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / (self.n as f64).powi(3);
        for x in data.iter_mut() {
            *x *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n, "array does not match grid size");
        // fastest axis: contiguous rows
        plan.process(data);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        // middle axis
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    line[j] = data[(i * n + j) * n + k];
                }
                plan.process(&mut line);
                for j in 0..n {
                    data[(i * n + j) * n + k] = line[j];
                }
            }
        }
        // slowest axis
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    line[i] = data[(i * n + j) * n + k];
                }
                plan.process(&mut line);
                for i in 0..n {
                    data[(i * n + j) * n + k] = line[i];
                }
            }
        }
    }
}

/// Signed integer wave index for FFT bin `m` (`0..N`).
#[inline]
pub fn signed_index(m: usize, n: usize) -> i64 {
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// FFT bin holding the signed wave index `w`.
#[inline]
pub fn bin(w: i64, n: usize) -> usize {
    w.rem_euclid(n as i64) as usize
}

/// Wave index used for spectral differentiation: the Nyquist bin is zeroed.
#[inline]
pub fn derivative_index(m: usize, n: usize) -> i64 {
    if n.is_multiple_of(2) && m == n / 2 {
        0
    } else {
        signed_index(m, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let n = 8;
        let fft = Fft3::new(n);
        let data: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut work = data.clone();
        fft.forward(&mut work);
        fft.inverse(&mut work);
        for (a, b) in data.iter().zip(&work) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn forward_sign_convention() {
        // x[j] = exp(+2 pi i j_z / N) lands in bin (0, 0, 1) with weight N^3.
        let n = 4;
        let fft = Fft3::new(n);
        let mut data: Vec<Complex64> = (0..n * n * n)
            .map(|flat| {
                let k = flat % n;
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
            })
            .collect();
        fft.forward(&mut data);
        assert!((data[1] - Complex64::new(64.0, 0.0)).norm() < 1e-12);
        assert!(data[n - 1].norm() < 1e-12);
    }

    #[test]
    fn index_helpers() {
        assert_eq!(signed_index(5, 8), -3);
        assert_eq!(signed_index(4, 8), 4);
        assert_eq!(derivative_index(4, 8), 0);
        assert_eq!(bin(-3, 8), 5);
    }
}
