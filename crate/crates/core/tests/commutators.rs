#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;
use std::sync::Arc;

use emq_core::commutators::{
    commutator_tensor, generator_identity_check, kernel_symmetry_audit, m_tensor_check, m_tensor_report,
    normalization_check, pauli_jordan_smeared, smeared_delta_gradient, unequal_time_commutator,
    CommutatorContext, CommutatorSpec, Method, Pair, TestFunction,
};
use emq_core::fields::{plane_wave, synthesize, ModeAmplitudes};
use emq_core::lattice::{build_grid, ModeLattice, Polarization, UnitSystem};
use num_complex::Complex64;

type Tensor = [[Complex64; 3]; 3];

fn ctx_with(hbar: f64, c: f64) -> CommutatorContext {
    CommutatorContext::new(2.0 * PI, UnitSystem::new(hbar, c).unwrap()).unwrap()
}

fn ctx() -> CommutatorContext {
    ctx_with(1.0, 1.0)
}

fn max_diff(a: &Tensor, b: &Tensor) -> f64 {
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        for l in 0..3 {
            worst = worst.max((a[k][l] - b[k][l]).norm());
        }
    }
    worst
}

fn max_abs(a: &Tensor) -> f64 {
    a.iter().flatten().fold(0.0, |m, z| m.max(z.norm()))
}

#[test]
fn same_type_pairs_vanish_at_equal_times() {
    let ctx = ctx();
    let f = TestFunction::new([0.4, -0.3, 0.7], 0.4).unwrap();
    let g = TestFunction::new([-0.2, 0.1, 0.0], 0.5).unwrap();
    let method = Method::mode_sum(ctx.lattice(8.0 / 0.4).unwrap());
    let scale = ctx.scale(&f, &g);
    for pair in Pair::ALL.into_iter().filter(|p| p.is_same_type()) {
        let exact = commutator_tensor(&ctx, pair, 0.0, &f, &g, &Method::Analytic).unwrap();
        assert_eq!(max_abs(&exact), 0.0, "{pair}");
        let sum = commutator_tensor(&ctx, pair, 0.0, &f, &g, &method).unwrap();
        assert!(max_abs(&sum) <= 1e-12 * scale, "{pair}: {}", max_abs(&sum) / scale);
    }
}

#[test]
fn equal_time_structure() {
    let ctx = ctx();
    let g = TestFunction::centered(0.5).unwrap();
    let concentric = commutator_tensor(&ctx, Pair::EB, 0.0, &g, &g, &Method::Analytic).unwrap();
    assert!(max_abs(&concentric) < 1e-30);

    let f = TestFunction::new([0.0, 0.0, 0.9], 0.5).unwrap();
    let eb = commutator_tensor(&ctx, Pair::EB, 0.0, &f, &g, &Method::Analytic).unwrap();
    let fdf = commutator_tensor(&ctx, Pair::FdF, 0.0, &f, &g, &Method::Analytic).unwrap();
    let grad3 = smeared_delta_gradient(&ctx, &f, &g, 3).unwrap();
    let expected = Complex64::new(0.0, -4.0 * PI * grad3);
    assert!((eb[0][1] - expected).norm() <= 1e-14 * expected.norm());
    for k in 0..3 {
        assert_eq!(eb[k][k], Complex64::new(0.0, 0.0));
        for l in 0..3 {
            assert_eq!(eb[k][l], -eb[l][k]);
            // the complex pair carries twice the real magnitude and a -i phase
            assert!((fdf[k][l] - eb[k][l] * Complex64::new(0.0, 2.0)).norm() < 1e-14);
        }
    }
}

#[test]
fn two_routes_agree_at_equal_times() {
    let ctx = ctx();
    let sigma = 0.5;
    let f = TestFunction::new([0.3, -0.5, 0.8], sigma).unwrap();
    let g = TestFunction::new([0.0, 0.2, -0.1], sigma).unwrap();
    let exact = commutator_tensor(&ctx, Pair::EB, 0.0, &f, &g, &Method::Analytic).unwrap();
    let reference = max_abs(&exact);
    let mut errors = Vec::new();
    for factor in [2.0, 4.0, 8.0] {
        let method = Method::mode_sum(ctx.lattice(factor / sigma).unwrap());
        let sum = commutator_tensor(&ctx, Pair::EB, 0.0, &f, &g, &method).unwrap();
        errors.push(max_diff(&sum, &exact) / reference);
    }
    assert!(errors[1] < 1e-2, "{errors:?}");
    assert!(errors[2] < 1e-6, "{errors:?}");
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
}

#[test]
fn two_routes_agree_at_unequal_times() {
    let ctx = ctx_with(1.0, 1.3);
    let sigma = 0.2;
    let method = Method::mode_sum(ctx.lattice(8.0 / sigma).unwrap());
    let cases = [
        ([0.3, -0.2, 0.5], 0.2, 0.4),
        ([0.0, 0.0, 0.8], 0.15, -0.5),
        ([0.05, 0.02, -0.03], 0.2, 0.9),
        ([1.1, 0.4, -0.3], 0.18, 0.7),
    ];
    for (d, sf, tau) in cases {
        let f = TestFunction::new(d, sf).unwrap();
        let g = TestFunction::centered(sigma).unwrap();
        let scale = ctx.scale(&f, &g);
        for pair in Pair::ALL {
            let exact = commutator_tensor(&ctx, pair, tau, &f, &g, &Method::Analytic).unwrap();
            let sum = commutator_tensor(&ctx, pair, tau, &f, &g, &method).unwrap();
            assert!(max_diff(&exact, &sum) <= 1e-8 * scale, "{pair} {d:?} {tau}: {}", max_diff(&exact, &sum) / scale);
        }
    }
}

#[test]
fn electric_and_magnetic_share_a_kernel() {
    let ctx = ctx();
    let f = TestFunction::new([0.4, 0.1, -0.6], 0.2).unwrap();
    let g = TestFunction::new([0.0, -0.3, 0.0], 0.25).unwrap();
    for tau in [-0.6, 0.3, 1.0] {
        let ee = commutator_tensor(&ctx, Pair::EE, tau, &f, &g, &Method::Analytic).unwrap();
        let bb = commutator_tensor(&ctx, Pair::BB, tau, &f, &g, &Method::Analytic).unwrap();
        assert_eq!(ee, bb);
        for pair in [Pair::FF, Pair::FdFd] {
            assert_eq!(max_abs(&commutator_tensor(&ctx, pair, tau, &f, &g, &Method::Analytic).unwrap()), 0.0);
        }
    }
}

#[test]
fn prefactors_scale_with_units() {
    let f = TestFunction::new([0.5, 0.2, -0.4], 0.2).unwrap();
    let g = TestFunction::centered(0.2).unwrap();
    let base = ctx();
    let doubled = ctx_with(2.0, 1.0);
    for pair in [Pair::EB, Pair::FdF, Pair::EE] {
        for tau in [0.0, 0.5] {
            let a = commutator_tensor(&base, pair, tau, &f, &g, &Method::Analytic).unwrap();
            let b = commutator_tensor(&doubled, pair, tau, &f, &g, &Method::Analytic).unwrap();
            for k in 0..3 {
                for l in 0..3 {
                    assert!((b[k][l] - 2.0 * a[k][l]).norm() <= 1e-12 * a[k][l].norm().max(1e-300));
                }
            }
        }
    }
    // equal-time kernels carry one power of c
    let fast = ctx_with(1.0, 3.0);
    let a = commutator_tensor(&base, Pair::EB, 0.0, &f, &g, &Method::Analytic).unwrap();
    let b = commutator_tensor(&fast, Pair::EB, 0.0, &f, &g, &Method::Analytic).unwrap();
    assert!((b[0][1] - 3.0 * a[0][1]).norm() <= 1e-12 * a[0][1].norm());
    // at unequal times the kernel depends on c tau; rescaling tau by 1/c leaves E_E linear in c
    let a = commutator_tensor(&base, Pair::EE, 0.6, &f, &g, &Method::Analytic).unwrap();
    let b = commutator_tensor(&fast, Pair::EE, 0.2, &f, &g, &Method::Analytic).unwrap();
    assert!(max_diff(&b, &a.map(|r| r.map(|z| 3.0 * z))) <= 1e-12 * max_abs(&a));
}

#[test]
fn hbar_doubling_on_mode_sum() {
    let f = TestFunction::new([0.0, 0.0, 0.7], 0.4).unwrap();
    let g = TestFunction::centered(0.4).unwrap();
    let base = ctx();
    let doubled = ctx_with(2.0, 1.0);
    let a = commutator_tensor(&base, Pair::EB, 0.0, &f, &g, &Method::mode_sum(base.lattice(20.0).unwrap())).unwrap();
    let b = commutator_tensor(&doubled, Pair::EB, 0.0, &f, &g, &Method::mode_sum(doubled.lattice(20.0).unwrap())).unwrap();
    assert!((b[0][1] - 2.0 * a[0][1]).norm() <= 1e-12 * a[0][1].norm());
}

#[test]
fn microcausality() {
    for c in [1.0, 2.0] {
        let ctx = ctx_with(1.0, c);
        let sigma = 0.15;
        let f = TestFunction::new([2.5, 0.0, 0.0], sigma).unwrap();
        let g = TestFunction::centered(sigma).unwrap();
        let scale = ctx.scale(&f, &g);
        let tau = 0.5 / c;
        let method = Method::mode_sum(ctx.lattice(8.0 / sigma).unwrap());
        for pair in Pair::ALL {
            for sign in [1.0, -1.0] {
                let exact = commutator_tensor(&ctx, pair, sign * tau, &f, &g, &Method::Analytic).unwrap();
                assert!(max_abs(&exact) <= 1e-8 * scale, "{pair}: {}", max_abs(&exact) / scale);
                let sum = commutator_tensor(&ctx, pair, sign * tau, &f, &g, &method).unwrap();
                assert!(max_abs(&sum) <= 1e-8 * scale, "{pair}: {}", max_abs(&sum) / scale);
            }
        }
        // the same pair of supports inside the light cone
        let near = TestFunction::new([1.5, 0.0, 0.0], sigma).unwrap();
        let inside = commutator_tensor(&ctx, Pair::EB, 1.5 / c, &near, &g, &Method::Analytic).unwrap();
        assert!(inside[1][2].norm() > 1e-2 * scale, "{}", inside[1][2].norm() / scale);
        let sum = commutator_tensor(&ctx, Pair::EB, 1.5 / c, &near, &g, &method).unwrap();
        assert!((sum[1][2] - inside[1][2]).norm() <= 1e-8 * scale);
    }
}

#[test]
fn equal_time_continuity() {
    let ctx = ctx();
    let f = TestFunction::new([0.2, -0.4, 0.5], 0.2).unwrap();
    let g = TestFunction::centered(0.25).unwrap();
    let at_zero = commutator_tensor(&ctx, Pair::EB, 0.0, &f, &g, &Method::Analytic).unwrap();
    for tau in [1e-4, -1e-4, 1e-6] {
        let near = commutator_tensor(&ctx, Pair::EB, tau, &f, &g, &Method::Analytic).unwrap();
        assert!(max_diff(&near, &at_zero) <= 1e-6 * max_abs(&at_zero), "{tau}");
        let ee = commutator_tensor(&ctx, Pair::EE, tau, &f, &g, &Method::Analytic).unwrap();
        assert!(max_abs(&ee) <= 1e-2 * ctx.scale(&f, &g), "{tau}");
    }
    // the departure is quadratic in tau
    let gap = |tau: f64| {
        let near = commutator_tensor(&ctx, Pair::EB, tau, &f, &g, &Method::Analytic).unwrap();
        max_diff(&near, &at_zero)
    };
    let ratio = gap(1e-3) / gap(1e-4);
    assert!((ratio - 100.0).abs() < 1.0, "{ratio}");
    let spec = CommutatorSpec::new(Pair::EB, 1, 2, 0.0, f, g).unwrap();
    let value = unequal_time_commutator(&ctx, &spec, &Method::Analytic).unwrap().value;
    assert_eq!(value, at_zero[0][1]);
}

#[test]
fn pauli_jordan_mode_sum_converges() {
    let ctx = ctx();
    let sigma = 0.3;
    let g = TestFunction::centered(sigma).unwrap();
    let method = Method::mode_sum(ctx.lattice(8.0 / sigma).unwrap());
    for tau in [0.6, -0.6, 1.2, 0.2] {
        let exact = pauli_jordan_smeared(&ctx, &g, tau, &Method::Analytic).unwrap().value.re;
        let sum = pauli_jordan_smeared(&ctx, &g, tau, &method).unwrap().value;
        assert!(sum.im == 0.0);
        assert!((sum.re - exact).abs() <= 1e-4 * exact.abs(), "{tau}: {} {exact}", sum.re);
    }
    let zero = pauli_jordan_smeared(&ctx, &g, 0.0, &method).unwrap().value;
    assert!(zero.norm() < 1e-14);
}

#[test]
fn m_tensor_routes_agree() {
    let grid = build_grid(2.0 * PI, 24).unwrap();
    let lattice = Arc::new(ModeLattice::for_box(2.0 * PI, 5.0, UnitSystem::default()).unwrap());
    let modes = ModeAmplitudes::random(Arc::clone(&lattice), 12, 7);
    let config = synthesize(&modes, &grid, 0.0).unwrap();
    let f = TestFunction::new([0.3, -0.2, 0.1], 0.6).unwrap();
    let report = m_tensor_report(&config, &f, &UnitSystem::default()).unwrap();
    assert!(report.max_discrepancy <= 1e-8 * report.scale, "{}", report.max_discrepancy / report.scale);
    for j in 0..3 {
        assert!(report.first_contraction[j].norm() <= 1e-12 * report.scale);
    }
    assert!(report.second_contraction.norm() <= 1e-8 * report.scale);
    let expected = report.smeared_divergence * (32.0 * PI);
    assert!((report.second_contraction - expected).norm() <= 1e-8 * report.scale);

    let single = plane_wave(Arc::clone(&lattice), [0.0, 0.0, 2.0], Polarization::One, Complex64::new(0.7, 0.2)).unwrap();
    // a mode along z has no z component, so this triple is zero on both routes
    let (lhs, rhs) = m_tensor_check(&single, &grid, 1, 3, 2, &f).unwrap();
    assert!(lhs.norm() < 1e-12 && rhs.norm() < 1e-12);
    let (lhs, rhs) = m_tensor_check(&single, &grid, 1, 1, 2, &f).unwrap();
    assert!(lhs.norm() > 1e-2);
    assert!((lhs - rhs).norm() <= 1e-8 * lhs.norm(), "{lhs} {rhs}");

    let zero = ModeAmplitudes::zeros(lattice);
    assert_eq!(m_tensor_check(&zero, &grid, 1, 3, 2, &f).unwrap(), (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    assert!(m_tensor_check(&zero, &grid, 0, 3, 2, &f).is_err());
}

#[test]
fn longitudinal_component_breaks_the_contraction() {
    let grid = build_grid(2.0 * PI, 24).unwrap();
    let lattice = Arc::new(ModeLattice::for_box(2.0 * PI, 5.0, UnitSystem::default()).unwrap());
    let modes = ModeAmplitudes::random(lattice, 8, 3);
    let mut config = synthesize(&modes, &grid, 0.0).unwrap();
    config.inject_longitudinal([1, 0, 0], 0.5);
    let f = TestFunction::new([0.9, 0.0, 0.0], 0.6).unwrap();
    let report = m_tensor_report(&config, &f, &UnitSystem::default()).unwrap();
    assert!(report.second_contraction.norm() > 1e-3 * report.scale, "{}", report.second_contraction.norm() / report.scale);
    for j in 0..3 {
        assert!(report.first_contraction[j].norm() <= 1e-12 * report.scale);
    }
}

#[test]
fn generator_identity_holds() {
    let grid = build_grid(2.0 * PI, 24).unwrap();
    let lattice = Arc::new(ModeLattice::for_box(2.0 * PI, 5.0, UnitSystem::default()).unwrap());
    let modes = ModeAmplitudes::random(lattice, 15, 11);
    let config = synthesize(&modes, &grid, 0.0).unwrap();
    let f = TestFunction::new([-0.4, 0.6, 0.2], 0.5).unwrap();
    let report = generator_identity_check(&config, &f, &UnitSystem::default()).unwrap();
    assert_eq!(report.entries.len(), 6);
    assert!(report.max_discrepancy <= 1e-8 * report.scale, "{}", report.max_discrepancy / report.scale);
    assert!(report.entries.iter().any(|e| e.3.norm() > 1e-3 * report.scale));
}

#[test]
fn kernel_audit_passes_for_several_seeds() {
    let ctx = ctx();
    for seed in [1, 42, 9001] {
        let audit = kernel_symmetry_audit(&ctx, 8.0 / 0.4, 16, seed, 0.4).unwrap();
        assert_eq!(audit.sample_points, 32);
        assert!(audit.max_imaginary <= 1e-10, "{}", audit.max_imaginary);
        assert!(audit.exchange_defect <= 1e-10);
        assert!(audit.parity_defect <= 1e-10);
        assert!(audit.au_fraction >= 1.0 - 1e-8);
        assert!(audit.vector_mismatch <= 1e-6, "{}", audit.vector_mismatch);
        assert!(audit.vector_oddness <= 1e-10);
    }
}

#[test]
fn normalization_reproduces_prefactor() {
    let ctx = ctx_with(1.3, 0.8);
    let grid = build_grid(2.0 * PI, 16).unwrap();
    let f = TestFunction::new([0.0, 0.5, 0.5], 0.4).unwrap();
    let g = TestFunction::centered(0.4).unwrap();
    let report = normalization_check(&ctx, &grid, &f, &g, 8.0 / 0.4).unwrap();
    assert!(report.prefactor_relative_error <= 1e-6, "{report:?}");
    assert!((report.expected_prefactor - 4.0 * PI * 1.3 * 0.8).abs() < 1e-12);
    assert!(report.commutator_relative_error <= 1e-6, "{report:?}");
}

#[test]
fn mode_sum_is_deterministic() {
    let ctx = ctx();
    let f = TestFunction::new([0.3, 0.1, 0.2], 0.2).unwrap();
    let g = TestFunction::centered(0.2).unwrap();
    let method = Method::mode_sum(ctx.lattice(40.0).unwrap());
    let a = commutator_tensor(&ctx, Pair::FdF, 0.5, &f, &g, &method).unwrap();
    let b = commutator_tensor(&ctx, Pair::FdF, 0.5, &f, &g, &method).unwrap();
    assert_eq!(a, b);
}
