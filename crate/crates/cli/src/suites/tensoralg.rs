use emq_core::tensoralg::{
    antisym_to_vector, decompose_gu_sa, divergence_absurdity_factor, epsilon_contraction_identity_check,
    epsilon_full_contraction, exchange_symmetry_defect, levi_civita, pseudotensor_parity_check,
    symmetric_sample_points, vector_to_antisym, Tensor3x3Field,
};
use emq_core::vec3;

use crate::config::RunConfig;
use crate::report::Check;
use crate::CliError;

pub fn run(config: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut checks = vec![
        Check::exact(
            "epsilon_delta_identity",
            "eps_jkl eps_jsu = d_ks d_lu - d_ku d_ls over all 81 tuples",
            f64::from(epsilon_contraction_identity_check()),
            0.0,
        ),
        Check::exact(
            "epsilon_full_contraction",
            "eps_jkl eps_jkl = 6",
            f64::from(epsilon_full_contraction()),
            6.0,
        ),
        Check::exact(
            "divergence_absurdity_factor",
            "(d_uu d_ls - d_us d_lu) = 2 d_ls",
            divergence_absurdity_factor(),
            2.0,
        ),
    ];

    let out_of_range = [(0, 1, 2), (1, 4, 2), (3, 3, 7)]
        .iter()
        .filter(|(j, k, l)| levi_civita(*j, *k, *l).is_ok())
        .count();
    checks.push(Check::exact(
        "levi_civita_index_guard",
        "indices outside 1..=3 are rejected",
        out_of_range as f64,
        0.0,
    ));

    let vectors = symmetric_sample_points(64, 10.0, config.seed);
    let mut round_trip: f64 = 0.0;
    for v in &vectors {
        let back = antisym_to_vector(&vector_to_antisym(*v))?;
        round_trip = round_trip.max(vec3::norm(vec3::sub(back, *v)));
    }
    checks.push(Check::exact(
        "antisym_round_trip",
        "A_kl = eps_kls v_s inverted exactly",
        round_trip,
        0.0,
    ));

    // an odd vector profile dressed as an antisymmetric tensor is a pure AU pseudotensor
    let points = symmetric_sample_points(32, 1.0, config.seed ^ 0x5eed);
    let field = Tensor3x3Field::sample(points, |r| {
        let w = (-vec3::dot(r, r)).exp();
        vector_to_antisym(vec3::scale(w, [r[0] + 0.3 * r[1], r[1] - r[2], 2.0 * r[2]]))
    })?;
    let parts = decompose_gu_sa(&field);
    checks.push(Check::at_most(
        "gu_sa_reconstruction",
        "SG + AG + SU + AU reproduces the tensor field",
        parts.sum().max_difference(&field) / field.max_abs(),
        1e-15,
    ));
    let leak = parts.sg.max_abs().max(parts.ag.max_abs()).max(parts.su.max_abs()) / field.max_abs();
    checks.push(Check::at_most(
        "gu_sa_pure_au",
        "odd antisymmetric kernel has no SG, AG or SU part",
        leak,
        1e-15,
    ));
    checks.push(Check::at_most(
        "pseudotensor_parity",
        "alpha_kl(rho) = -alpha_kl(-rho)",
        pseudotensor_parity_check(&field) / field.max_abs(),
        1e-15,
    ));
    checks.push(Check::at_most(
        "exchange_symmetry",
        "alpha_kl(rho) = alpha_lk(-rho)",
        exchange_symmetry_defect(&field) / field.max_abs(),
        1e-15,
    ));
    Ok(checks)
}
