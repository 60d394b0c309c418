use std::f64::consts::PI;
use std::sync::Arc;

use emq_core::commutators::quadrature::{grid_delta_gradient, radial_shell_pauli_jordan};
use emq_core::commutators::{
    commutator_tensor, generator_identity_check, kernel_symmetry_audit, m_tensor_report, normalization_check,
    pauli_jordan_smeared, smeared_delta_gradient, CommutatorContext, Method, Pair, TestFunction,
};
use emq_core::fields::{synthesize, ModeAmplitudes};
use emq_core::lattice::{build_grid, UnitSystem};
use num_complex::Complex64;

use super::maxwell::state_setup;
use crate::config::RunConfig;
use crate::report::Check;
use crate::CliError;

type Tensor = [[Complex64; 3]; 3];

fn max_abs(t: &Tensor) -> f64 {
    t.iter().flatten().fold(0.0, |m, z| m.max(z.norm()))
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

pub(crate) fn context(config: &RunConfig, hbar_factor: f64) -> Result<CommutatorContext, CliError> {
    let units = UnitSystem::new(config.hbar * hbar_factor, config.c)?;
    Ok(CommutatorContext::new(config.box_length, units)?)
}

/// Test functions for the equal-time E_B checks: displaced along axis 3.
pub(crate) fn equal_time_pair(config: &RunConfig) -> Result<(TestFunction, TestFunction), CliError> {
    let f = TestFunction::new([0.0, 0.0, 3.0 * config.sigma], config.sigma)?;
    let g = TestFunction::centered(config.sigma)?;
    Ok((f, g))
}

/// Oracle grid fine enough that the midpoint rule on the product `f' g`
/// is accurate far below the tolerance: spacing at most 0.7 of the
/// product's width, and never coarser than the configured grid.
fn quadrature_points(config: &RunConfig, f: &TestFunction, g: &TestFunction) -> usize {
    let (a, b) = (f.sigma().powi(2), g.sigma().powi(2));
    let width = (a * b / (a + b)).sqrt();
    let needed = (config.box_length / (0.7 * width)).ceil() as usize;
    let n = needed.max(config.grid_points);
    n + n % 2
}

pub fn run(config: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    equal_time(config, &mut checks)?;
    normalization(config, &mut checks)?;
    pauli_jordan(config, &mut checks)?;
    unequal_time(config, &mut checks)?;
    operator_maxwell(config, &mut checks)?;
    audit(config, &mut checks)?;
    Ok(checks)
}

fn equal_time(config: &RunConfig, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let ctx = context(config, 1.0)?;
    let method = Method::mode_sum(ctx.lattice(config.cutoff_for(config.sigma))?);
    let (f, g) = equal_time_pair(config)?;
    let generic = TestFunction::new([0.4 * config.sigma, -0.7 * config.sigma, 1.3 * config.sigma], 0.8 * config.sigma)?;
    let scale = ctx.scale(&generic, &g);

    let mut analytic_same: f64 = 0.0;
    let mut modesum_same: f64 = 0.0;
    for pair in Pair::ALL.into_iter().filter(|p| p.is_same_type()) {
        for (a, b) in [(&f, &g), (&generic, &g)] {
            analytic_same = analytic_same.max(max_abs(&commutator_tensor(&ctx, pair, 0.0, a, b, &Method::Analytic)?));
            modesum_same = modesum_same.max(max_abs(&commutator_tensor(&ctx, pair, 0.0, a, b, &method)?) / scale);
        }
    }
    checks.push(Check::exact(
        "same_type_analytic",
        "[F,F], [Fd,Fd], [E,E], [B,B] vanish at equal times",
        analytic_same,
        0.0,
    ));
    checks.push(Check::at_most(
        "same_type_modesum",
        "same-type mode sums cancel between k and -k",
        modesum_same,
        1e-12,
    ));

    let quad_grid = build_grid(config.box_length, quadrature_points(config, &generic, &g))?;
    let quad = grid_delta_gradient(&quad_grid, &generic, &g);
    let mut oracle: f64 = 0.0;
    let quad_scale = quad.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for s in 1..=3 {
        let v = smeared_delta_gradient(&ctx, &generic, &g, s)?;
        oracle = oracle.max((v - quad[s - 1]).abs() / quad_scale);
    }
    checks.push(Check::at_most(
        "delta_gradient_quadrature",
        "smeared d_s' delta against grid midpoint quadrature",
        oracle,
        1e-8,
    ));

    let exact = commutator_tensor(&ctx, Pair::EB, 0.0, &f, &g, &Method::Analytic)?;
    let grad = smeared_delta_gradient(&ctx, &f, &g, 3)?;
    let expected = Complex64::new(0.0, -4.0 * PI * config.hbar * config.c * grad);
    checks.push(Check::at_most(
        "eb_closed_form",
        "[E_1, B_2] = -i 4 pi hbar c eps_12s d_s' delta",
        (exact[0][1] - expected).norm() / expected.norm(),
        1e-14,
    ));
    let mut antisym: f64 = 0.0;
    for k in 0..3 {
        for l in 0..3 {
            antisym = antisym.max((exact[k][l] + exact[l][k]).norm());
        }
    }
    checks.push(Check::exact("eb_antisymmetry", "[E_k, B_l] odd under k <-> l", antisym, 0.0));
    let concentric = commutator_tensor(&ctx, Pair::EB, 0.0, &g, &g, &Method::Analytic)?;
    checks.push(Check::at_most(
        "eb_concentric",
        "concentric equal-width smearing gives zero",
        max_abs(&concentric) / ctx.scale(&g, &g),
        1e-15,
    ));

    let sum = commutator_tensor(&ctx, Pair::EB, 0.0, &f, &g, &method)?;
    let sum_generic = commutator_tensor(&ctx, Pair::EB, 0.0, &generic, &g, &method)?;
    let exact_generic = commutator_tensor(&ctx, Pair::EB, 0.0, &generic, &g, &Method::Analytic)?;
    let route = (max_diff(&sum, &exact) / max_abs(&exact)).max(max_diff(&sum_generic, &exact_generic) / max_abs(&exact_generic));
    checks.push(Check::at_most(
        "eb_two_route",
        "mode sum reproduces the smeared [E_k, B_l] kernel",
        route,
        1e-6,
    ));
    let fdf_sum = commutator_tensor(&ctx, Pair::FdF, 0.0, &generic, &g, &method)?;
    let fdf_exact = commutator_tensor(&ctx, Pair::FdF, 0.0, &generic, &g, &Method::Analytic)?;
    checks.push(Check::at_most(
        "fdf_two_route",
        "mode sum reproduces the smeared [Fd_k, F_l] kernel",
        max_diff(&fdf_sum, &fdf_exact) / max_abs(&fdf_exact),
        1e-6,
    ));

    let doubled = context(config, 2.0)?;
    let doubled_method = Method::mode_sum(doubled.lattice(config.cutoff_for(config.sigma))?);
    let exact2 = commutator_tensor(&doubled, Pair::EB, 0.0, &f, &g, &Method::Analytic)?;
    let sum2 = commutator_tensor(&doubled, Pair::EB, 0.0, &f, &g, &doubled_method)?;
    let twice = |t: &Tensor| t.map(|r| r.map(|z| 2.0 * z));
    let hbar_err = (max_diff(&exact2, &twice(&exact)) / max_abs(&exact2)).max(max_diff(&sum2, &twice(&sum)) / max_abs(&sum2));
    checks.push(Check::at_most("hbar_linearity", "kernel doubles when hbar doubles", hbar_err, 1e-12));
    Ok(())
}

fn normalization(config: &RunConfig, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let ctx = context(config, 1.0)?;
    let grid = build_grid(config.box_length, config.grid_points)?;
    let (f, g) = equal_time_pair(config)?;
    let report = normalization_check(&ctx, &grid, &f, &g, config.cutoff_for(config.sigma))?;
    checks.push(Check::at_most(
        "normalization_prefactor",
        "energy-fixed N_k gives 2 N_k^2 V / |k| = 4 pi hbar c",
        report.prefactor_relative_error,
        1e-6,
    ));
    checks.push(Check::at_most(
        "normalization_commutator",
        "energy-fixed mode sum reproduces [E_1, B_2]",
        report.commutator_relative_error,
        1e-6,
    ));
    Ok(())
}

fn pauli_jordan(config: &RunConfig, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let ctx = context(config, 1.0)?;
    let sigma = config.sigma;
    let g = TestFunction::centered(sigma)?;
    let tau = 2.0 * sigma / config.c;
    let forward = pauli_jordan_smeared(&ctx, &g, tau, &Method::Analytic)?.value.re;
    let backward = pauli_jordan_smeared(&ctx, &g, -tau, &Method::Analytic)?.value.re;
    let zero = pauli_jordan_smeared(&ctx, &g, 0.0, &Method::Analytic)?.value;
    let oracle = radial_shell_pauli_jordan(sigma, config.c, tau);
    let profile = (2.0 * PI * sigma * sigma).powf(-1.5) * (-2.0f64).exp();
    let closed = -2.0 * sigma * profile;
    checks.push(Check::at_most(
        "pauli_jordan_shell_oracle",
        "int g D = -c tau g(c tau) against radial shell quadrature",
        (forward - oracle).abs() / oracle.abs(),
        1e-8,
    ));
    checks.push(Check::at_most(
        "pauli_jordan_closed_form",
        "int g D = -c tau g(c tau) at c tau = 2 sigma",
        (forward - closed).abs() / closed.abs(),
        1e-12,
    ));
    checks.push(Check::exact("pauli_jordan_odd", "D(rho, -tau) = -D(rho, tau)", (forward + backward).abs(), 0.0));
    checks.push(Check::exact("pauli_jordan_equal_time", "D(rho, 0) = 0", zero.norm(), 0.0));
    let method = Method::mode_sum(ctx.lattice(config.cutoff_for(sigma))?);
    let sum = pauli_jordan_smeared(&ctx, &g, tau, &method)?.value;
    checks.push(Check::at_most(
        "pauli_jordan_modesum",
        "lattice D converges to the two-shell form",
        (sum - Complex64::new(forward, 0.0)).norm() / forward.abs(),
        1e-4,
    ));
    Ok(())
}

fn unequal_time(config: &RunConfig, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let ctx = context(config, 1.0)?;
    let sigma = config.sigma_causal;
    let method = Method::mode_sum(ctx.lattice(config.cutoff_for(sigma))?);
    let g = TestFunction::centered(sigma)?;
    let tau = config.causal_tau();

    let mut route: f64 = 0.0;
    let mut ee_bb: f64 = 0.0;
    let mut same: f64 = 0.0;
    for (d, s) in [([2.0, -1.3, 3.3], 1.0), ([0.0, 0.0, 4.0], 0.8), ([0.3, 0.1, -0.2], 1.0)] {
        let f = TestFunction::new(d.map(|x| x * sigma), s * sigma)?;
        let scale = ctx.scale(&f, &g);
        for t in [tau, -0.6 * tau] {
            for pair in Pair::ALL {
                let exact = commutator_tensor(&ctx, pair, t, &f, &g, &Method::Analytic)?;
                let sum = commutator_tensor(&ctx, pair, t, &f, &g, &method)?;
                route = route.max(max_diff(&exact, &sum) / scale);
                if matches!(pair, Pair::FF | Pair::FdFd) {
                    same = same.max(max_abs(&exact));
                }
            }
            let ee = commutator_tensor(&ctx, Pair::EE, t, &f, &g, &Method::Analytic)?;
            let bb = commutator_tensor(&ctx, Pair::BB, t, &f, &g, &Method::Analytic)?;
            ee_bb = ee_bb.max(max_diff(&ee, &bb));
        }
    }
    checks.push(Check::at_most(
        "unequal_time_two_route",
        "phase-evolved mode sums reproduce the smeared D-derivative kernels",
        route,
        1e-8,
    ));
    checks.push(Check::exact("unequal_time_ee_bb", "[E_k, E_l] and [B_k, B_l] share one kernel", ee_bb, 0.0));
    checks.push(Check::exact("unequal_time_ff", "[F, F] and [Fd, Fd] vanish at all times", same, 0.0));

    // spacelike pair: d - c tau exceeds 6 (sigma_1 + sigma_2) with margin
    let ct = config.c * tau;
    let d = ct + 12.0 * sigma + 0.2;
    let far = TestFunction::new([d / 3f64.sqrt(); 3], sigma)?;
    let scale = ctx.scale(&far, &g);
    let mut spacelike: f64 = 0.0;
    for t in [tau, -tau] {
        for pair in Pair::ALL {
            for m in [&Method::Analytic, &method] {
                spacelike = spacelike.max(max_abs(&commutator_tensor(&ctx, pair, t, &far, &g, m)?) / scale);
            }
        }
    }
    checks.push(Check::at_most(
        "microcausality_spacelike",
        "smeared commutators vanish outside the light cone",
        spacelike,
        1e-8,
    ));

    let near = TestFunction::new([0.0, ct, 0.0], sigma)?;
    let inside = commutator_tensor(&ctx, Pair::EB, tau, &near, &g, &Method::Analytic)?;
    checks.push(Check::at_least(
        "microcausality_light_cone",
        "[E, B] is nonzero where the light cone meets both supports",
        max_abs(&inside) / ctx.scale(&near, &g),
        1e-2,
    ));

    let f = TestFunction::new([0.3 * sigma, -0.2 * sigma, 1.5 * sigma], sigma)?;
    let at_zero = commutator_tensor(&ctx, Pair::EB, 0.0, &f, &g, &Method::Analytic)?;
    let small = 1e-4 * sigma / config.c;
    let mut continuity: f64 = 0.0;
    for t in [small, -small] {
        let near_zero = commutator_tensor(&ctx, Pair::EB, t, &f, &g, &Method::Analytic)?;
        continuity = continuity.max(max_diff(&near_zero, &at_zero) / max_abs(&at_zero));
    }
    checks.push(Check::at_most(
        "equal_time_continuity",
        "[E, B] at tau -> 0 joins the equal-time kernel",
        continuity,
        1e-6,
    ));
    Ok(())
}

fn operator_maxwell(config: &RunConfig, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let units = UnitSystem::new(config.hbar, config.c)?;
    let (grid, lattice) = state_setup(config)?;
    let modes = ModeAmplitudes::random(Arc::clone(&lattice), config.modes, config.seed.wrapping_add(7));
    let mut state = synthesize(&modes, &grid, 0.0)?;
    let longitudinal_mode = [1, 0, 0];
    let amplitude = 0.5 * state.field_scale();
    if config.inject_longitudinal {
        state.inject_longitudinal(longitudinal_mode, amplitude);
    }
    let width = (2.0 * config.sigma).min(config.box_length / 10.0);
    let f = TestFunction::new([0.3, -0.2, 0.1].map(|x| x * config.box_length / (2.0 * PI)), width)?;
    let report = m_tensor_report(&state, &f, &units)?;
    checks.push(Check::at_most(
        "m_tensor_two_route",
        "kernel-convolved M_kls equals -16 pi hbar c eps_ksu d_u F_l",
        report.max_discrepancy / report.scale,
        1e-8,
    ));
    let first = report.first_contraction.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    checks.push(Check::at_most(
        "m_tensor_first_contraction",
        "first operator Maxwell equation holds identically",
        first / report.scale,
        1e-12,
    ));
    checks.push(Check::at_most(
        "subsidiary_condition",
        "eps_kls M_kls vanishes on the transverse state",
        report.second_contraction.norm() / report.scale,
        1e-8,
    ));

    let mut broken = synthesize(&modes, &grid, 0.0)?;
    broken.inject_longitudinal(longitudinal_mode, amplitude);
    let violated = m_tensor_report(&broken, &f, &units)?;
    checks.push(Check::at_least(
        "subsidiary_violation_detected",
        "an injected longitudinal component makes eps_kls M_kls nonzero",
        violated.second_contraction.norm() / violated.scale,
        1e-3,
    ));

    let generator = generator_identity_check(&state, &f, &units)?;
    checks.push(Check::at_most(
        "generator_identity",
        "the equal-time kernel generates d_s F_l",
        generator.max_discrepancy / generator.scale,
        1e-8,
    ));
    Ok(())
}

fn audit(config: &RunConfig, checks: &mut Vec<Check>) -> Result<(), CliError> {
    let ctx = context(config, 1.0)?;
    let a = kernel_symmetry_audit(
        &ctx,
        config.cutoff_for(config.sigma),
        config.audit_samples,
        config.seed,
        config.sigma,
    )?;
    checks.push(Check::at_most("audit_reality", "sampled alpha_kl is real", a.max_imaginary, 1e-10));
    checks.push(Check::at_most(
        "audit_exchange",
        "alpha_kl(rho) = alpha_lk(-rho) on sampled pairs",
        a.exchange_defect,
        1e-10,
    ));
    checks.push(Check::at_most("audit_parity", "alpha_kl is a pseudotensor", a.parity_defect, 1e-10));
    checks.push(Check::at_most(
        "audit_au_fraction",
        "kernel is entirely antisymmetric and odd",
        1.0 - a.au_fraction,
        1e-8,
    ));
    checks.push(Check::at_most(
        "audit_vector",
        "extracted alpha_s matches 8 pi hbar c times the smeared delta gradient",
        a.vector_mismatch,
        1e-6,
    ));
    checks.push(Check::at_most("audit_vector_odd", "alpha_s(-rho) = -alpha_s(rho)", a.vector_oddness, 1e-10));
    Ok(())
}
