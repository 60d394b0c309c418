use std::sync::Arc;

use emq_core::fields::{check_translation_generation, plane_wave, synthesize, ModeAmplitudes};
use emq_core::lattice::{build_grid, ModeLattice, Polarization, SpatialGrid, UnitSystem};
use emq_core::maxwell::{
    energy, energy_cross_term, energy_momentum, energy_overlap, evolve, mode_energy_momentum,
    synthesized_residual,
};
use emq_core::vec3;
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::report::Check;
use crate::CliError;

const STATES: u64 = 5;
const STEPS: usize = 1000;

pub(crate) fn state_setup(config: &RunConfig) -> Result<(SpatialGrid, Arc<ModeLattice>), CliError> {
    let units = UnitSystem::new(config.hbar, config.c)?;
    let grid = build_grid(config.box_length, config.grid_points)?;
    let lattice = Arc::new(ModeLattice::for_box(config.box_length, config.state_kmax, units)?);
    Ok((grid, lattice))
}

pub fn run(config: &RunConfig) -> Result<Vec<Check>, CliError> {
    let (grid, lattice) = state_setup(config)?;
    let units = lattice.units();
    let count = config.modes.min(20);
    let states: Vec<ModeAmplitudes> = (0..STATES)
        .map(|i| ModeAmplitudes::random(Arc::clone(&lattice), count, config.seed.wrapping_add(i)))
        .collect();

    let mut residual: f64 = 0.0;
    let mut parseval: f64 = 0.0;
    let mut translation: f64 = 0.0;
    let h = grid.spacing();
    for (i, modes) in states.iter().enumerate() {
        let t = 0.37 * i as f64;
        let config_t = synthesize(modes, &grid, t)?;
        let r = synthesized_residual(modes, &grid, t)?;
        residual = residual.max(r.max() / config_t.field_scale());
        let grid_energy = energy(&config_t);
        let mode_energy = mode_energy_momentum(modes).energy;
        parseval = parseval.max((grid_energy - mode_energy).abs() / mode_energy);
        let shift = check_translation_generation(modes, &grid, [3.0 * h, -2.0 * h, h])?;
        translation = translation.max(shift / config_t.field_scale());
    }

    let mut energy_drift: f64 = 0.0;
    let mut momentum_drift: f64 = 0.0;
    for modes in &states {
        let start = energy_momentum(&synthesize(modes, &grid, 0.0)?, &units);
        let mut state = modes.clone();
        for _ in 0..STEPS {
            state = evolve(&state, 0.01);
        }
        let end = energy_momentum(&synthesize(&state, &grid, 0.0)?, &units);
        energy_drift = energy_drift.max((end.energy - start.energy).abs() / start.energy);
        let p_scale = start.energy / units.c();
        momentum_drift = momentum_drift.max(vec3::norm(vec3::sub(end.momentum, start.momentum)) / p_scale);
    }

    let k = 2.0 * std::f64::consts::PI / config.box_length;
    let mut single: f64 = 0.0;
    for (n, lambda) in [([1.0, 0.0, 0.0], Polarization::One), ([1.0, 2.0, -1.0], Polarization::Two), ([0.0, 0.0, 3.0], Polarization::One)] {
        let wave = plane_wave(Arc::clone(&lattice), vec3::scale(k, n), lambda, Complex64::new(0.6, -0.8))?;
        let em = energy_momentum(&synthesize(&wave, &grid, 0.2)?, &units);
        let expected = em.energy / units.c();
        single = single.max((vec3::norm(em.momentum) - expected).abs() / expected);
    }

    let a = &states[0];
    let b = &states[1];
    let term = energy_cross_term(a, b, &grid)?;
    let overlap = energy_overlap(&synthesize(a, &grid, 0.0)?, &synthesize(b, &grid, 0.0)?);
    let cross = (term.cross - overlap).abs() / term.h1.max(term.h2);

    let one = plane_wave(Arc::clone(&lattice), [k, 0.0, 0.0], Polarization::One, Complex64::new(0.9, 0.2))?;
    let same = energy_cross_term(&one, &one, &grid)?;
    let doubling = (same.h12 - 4.0 * same.h1).abs() / same.h12;
    let other = plane_wave(Arc::clone(&lattice), [0.0, 2.0 * k, k], Polarization::Two, Complex64::new(-0.4, 0.5))?;
    let distinct = energy_cross_term(&one, &other, &grid)?;
    let additivity = distinct.cross.abs() / distinct.h12;

    Ok(vec![
        Check::at_most(
            "residual_random_states",
            "curl F = (i/c) dF/dt and div F = 0 on synthesized states",
            residual,
            1e-10,
        ),
        Check::at_most("parseval_energy", "grid energy equals sum hbar w |a|^2", parseval, 1e-10),
        Check::at_most(
            "translation_generation",
            "F(r + delta) from phases exp(i k.delta)",
            translation,
            1e-12,
        ),
        Check::at_most("energy_conservation", "H constant under 1000 evolution steps", energy_drift, 1e-12),
        Check::at_most("momentum_conservation", "P constant under 1000 evolution steps", momentum_drift, 1e-12),
        Check::at_most("single_mode_momentum", "|P| = H / c for one plane wave", single, 1e-10),
        Check::at_most("energy_cross_term", "H(1+2) - H(1) - H(2) equals the bilinear overlap", cross, 1e-12),
        Check::at_most("equal_mode_doubling", "doubling one mode amplitude gives 4H", doubling, 1e-12),
        Check::at_most("distinct_mode_additivity", "orthogonal modes add their energies", additivity, 1e-10),
    ])
}
