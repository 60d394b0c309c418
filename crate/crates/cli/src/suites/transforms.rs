use std::collections::HashSet;
use std::sync::Arc;

use emq_core::fields::{synthesize, synthesize_time_derivative, ModeAmplitudes};
use emq_core::maxwell::energy;
use emq_core::transforms::{apply, compose, invariance_report, Transform, TransformOp};

use super::maxwell::state_setup;
use crate::config::RunConfig;
use crate::report::Check;
use crate::CliError;

const OPS: [Transform; 4] = [Transform::P, Transform::T, Transform::C, Transform::D];

fn group_order() -> usize {
    let mut seen: HashSet<TransformOp> = HashSet::from([TransformOp::IDENTITY]);
    let mut frontier = vec![TransformOp::IDENTITY];
    while let Some(op) = frontier.pop() {
        for t in OPS {
            let next = TransformOp::from(t).after(op);
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen.len()
}

pub fn run(config: &RunConfig) -> Result<Vec<Check>, CliError> {
    let (grid, lattice) = state_setup(config)?;
    let units = lattice.units();
    let mut dd: f64 = 0.0;
    let mut pp: f64 = 0.0;
    let mut tt: f64 = 0.0;
    let mut residual = [0.0f64; 4];
    let mut energy_change = [0.0f64; 4];
    for i in 0..3u64 {
        let modes = ModeAmplitudes::random(Arc::clone(&lattice), config.modes.min(20), config.seed.wrapping_add(100 + i));
        let t = 0.25 * i as f64 - 0.3;
        let f = synthesize(&modes, &grid, t)?;
        let rate = synthesize_time_derivative(&modes, &grid, t)?;
        dd = dd.max(apply(compose([Transform::D, Transform::D]), &f).max_difference(&apply(Transform::C, &f)));
        dd = dd.max(apply(Transform::D, &apply(Transform::D, &f)).max_difference(&apply(Transform::C, &f)));
        pp = pp.max(apply(Transform::P, &apply(Transform::P, &f)).max_difference(&f));
        tt = tt.max(apply(Transform::T, &apply(Transform::T, &f)).max_difference(&f));
        let scale = f.field_scale();
        let h = energy(&f);
        for (slot, op) in OPS.into_iter().enumerate() {
            let report = invariance_report(&f, &rate, op, &units);
            residual[slot] = residual[slot].max(report.before.max().max(report.after.max()) / scale);
            energy_change[slot] = energy_change[slot].max((energy(&apply(op, &f)) - h).abs() / h);
        }
    }

    let mut checks = vec![
        Check::exact("duality_squared", "D^2 = C", dd, 0.0),
        Check::exact("parity_squared", "P^2 = identity", pp, 0.0),
        Check::exact("time_reversal_squared", "T^2 = identity", tt, 0.0),
        Check::exact("group_order", "P, T, C, D generate 16 elements", group_order() as f64, 16.0),
    ];
    for (slot, op) in OPS.into_iter().enumerate() {
        let name = format!("{op:?}");
        checks.push(Check::at_most(
            &format!("maxwell_invariance_{name}"),
            &format!("vacuum Maxwell equations hold after {name}"),
            residual[slot],
            1e-10,
        ));
        checks.push(Check::at_most(
            &format!("energy_invariance_{name}"),
            &format!("field energy preserved by {name}"),
            energy_change[slot],
            1e-10,
        ));
    }
    Ok(checks)
}
