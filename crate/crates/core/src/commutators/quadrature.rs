//! Brute-force reference integrals used as oracles for the closed forms.
//! They share no code with the analytic route beyond the test-function
//! evaluation itself.

use std::f64::consts::PI;

use super::smearing::TestFunction;
use crate::lattice::SpatialGrid;
use crate::vec3::Vec3;

/// Midpoint rule for `-int (d_s f) g d^3r` on the cell centres of `grid`.
pub fn grid_delta_gradient(grid: &SpatialGrid, f: &TestFunction, g: &TestFunction) -> Vec3 {
    let l = grid.box_length();
    let h = grid.spacing();
    let n = grid.points_per_axis();
    let mut out = [0.0; 3];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h, (k as f64 + 0.5) * h];
                let grad = f.gradient(r, l);
                let gv = g.value(r, l);
                for s in 0..3 {
                    out[s] -= grad[s] * gv;
                }
            }
        }
    }
    out.map(|x| x * grid.cell_volume())
}

fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut total = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        total += w * f(a + i as f64 * h);
    }
    total * h / 3.0
}

/// `int g D d^3 rho` for a centred Gaussian from the two-shell form of `D`,
/// with each shell broadened to a narrow Gaussian and the width
/// Richardson-extrapolated to zero.
pub fn radial_shell_pauli_jordan(sigma: f64, c: f64, tau: f64) -> f64 {
    if tau == 0.0 {
        return 0.0;
    }
    let radius = c * tau.abs();
    let var = sigma * sigma;
    let profile = |rho: f64| (2.0 * PI * var).powf(-1.5) * (-rho * rho / (2.0 * var)).exp();
    let broadened = |eta: f64| {
        let delta = |x: f64| (-x * x / (2.0 * eta * eta)).exp() / (eta * (2.0 * PI).sqrt());
        // 4 pi rho^2 g(rho) (1 / 4 pi rho) [delta(rho + R) - delta(rho - R)]
        let integrand = |rho: f64| rho * profile(rho) * (delta(rho + radius) - delta(rho - radius));
        simpson((radius - 12.0 * eta).max(0.0), radius + 12.0 * eta, 4000, integrand)
    };
    let eta = 0.02 * sigma;
    let (a1, a2, a3) = (broadened(eta), broadened(eta / 2.0), broadened(eta / 4.0));
    let r1 = (4.0 * a2 - a1) / 3.0;
    let r2 = (4.0 * a3 - a2) / 3.0;
    (16.0 * r2 - r1) / 15.0 * tau.signum()
}
