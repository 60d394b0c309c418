//! Exhaustive index-algebra checks in three dimensions.
//!
//! The identities used by the commutator derivation are finite statements
//! over indices in `{1, 2, 3}`, so they are verified by brute-force
//! enumeration in integer arithmetic. Kernel-valued statements (the
//! even/odd by symmetric/antisymmetric split, parity, and the
//! antisymmetric-tensor-to-vector map) act on 3x3 matrices sampled on point
//! sets closed under `rho -> -rho`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::vec3::{self, Vec3};

pub type Matrix3 = [[f64; 3]; 3];

/// Levi-Civita symbol on 0-based indices.
#[inline]
pub const fn epsilon(i: usize, j: usize, k: usize) -> i32 {
    if i == j || j == k || i == k {
        0
    } else if (i + 1) % 3 == j && (j + 1) % 3 == k {
        1
    } else {
        -1
    }
}

#[inline]
pub const fn kronecker(i: usize, j: usize) -> i32 {
    if i == j {
        1
    } else {
        0
    }
}

/// Levi-Civita symbol on 1-based indices.
pub fn levi_civita(j: usize, k: usize, l: usize) -> Result<i32> {
    for index in [j, k, l] {
        if !(1..=3).contains(&index) {
            return Err(Error::IndexOutOfRange { index });
        }
    }
    Ok(epsilon(j - 1, k - 1, l - 1))
}

/// `max |sum_j eps_jkl eps_jsu - (d_ks d_lu - d_ku d_ls)|` over all 81 `(k, l, s, u)`.
pub fn epsilon_contraction_identity_check() -> i32 {
    let mut worst = 0;
    for k in 0..3 {
        for l in 0..3 {
            for s in 0..3 {
                for u in 0..3 {
                    let lhs: i32 = (0..3).map(|j| epsilon(j, k, l) * epsilon(j, s, u)).sum();
                    let rhs = kronecker(k, s) * kronecker(l, u) - kronecker(k, u) * kronecker(l, s);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
    }
    worst
}

/// `sum_{jkl} eps_jkl eps_jkl`.
pub fn epsilon_full_contraction() -> i32 {
    let mut total = 0;
    for j in 0..3 {
        for k in 0..3 {
            for l in 0..3 {
                total += epsilon(j, k, l) * epsilon(j, k, l);
            }
        }
    }
    total
}

/// `sum_u (d_uu d_ls - d_us d_lu)` for every `(l, s)`.
pub fn divergence_absurdity_matrix() -> [[i32; 3]; 3] {
    let mut m = [[0; 3]; 3];
    for (l, row) in m.iter_mut().enumerate() {
        for (s, entry) in row.iter_mut().enumerate() {
            // d_uu summed over u is the trace of the identity
            let trace: i32 = (0..3).map(|u| kronecker(u, u)).sum();
            let contracted: i32 = (0..3).map(|u| kronecker(u, s) * kronecker(l, u)).sum();
            *entry = trace * kronecker(l, s) - contracted;
        }
    }
    m
}

/// Proportionality factor of [`divergence_absurdity_matrix`] to `d_ls`;
/// `NaN` if the matrix is not a multiple of the identity.
pub fn divergence_absurdity_factor() -> f64 {
    let m = divergence_absurdity_matrix();
    let diag = m[0][0];
    for (l, row) in m.iter().enumerate() {
        for (s, &entry) in row.iter().enumerate() {
            let expected = if l == s { diag } else { 0 };
            if entry != expected {
                return f64::NAN;
            }
        }
    }
    f64::from(diag)
}

/// `A_kl = eps_kls v_s`.
pub fn vector_to_antisym(v: Vec3) -> Matrix3 {
    let mut a = [[0.0; 3]; 3];
    for (k, row) in a.iter_mut().enumerate() {
        for (l, entry) in row.iter_mut().enumerate() {
            *entry = (0..3)
                .map(|s| f64::from(epsilon(k, l, s)) * v[s])
                .sum();
        }
    }
    a
}

/// Recovers `v` with `A_kl = eps_kls v_s` from an antisymmetric matrix.
pub fn antisym_to_vector(a: &Matrix3) -> Result<Vec3> {
    let norm = frobenius(a);
    let mut sym_defect: f64 = 0.0;
    for k in 0..3 {
        for l in 0..3 {
            sym_defect = sym_defect.max((a[k][l] + a[l][k]).abs());
        }
    }
    let allowed = 1e-12 * norm;
    if sym_defect > allowed {
        return Err(Error::NotAntisymmetric {
            defect: sym_defect,
            allowed,
        });
    }
    Ok([a[1][2], a[2][0], a[0][1]])
}

pub fn frobenius(a: &Matrix3) -> f64 {
    a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn transpose(a: &Matrix3) -> Matrix3 {
    std::array::from_fn(|k| std::array::from_fn(|l| a[l][k]))
}

fn combine(a: &Matrix3, b: &Matrix3, wa: f64, wb: f64) -> Matrix3 {
    std::array::from_fn(|k| std::array::from_fn(|l| wa * a[k][l] + wb * b[k][l]))
}

/// 3x3 samples over a point set closed under negation.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3x3Field {
    points: Vec<Vec3>,
    values: Vec<Matrix3>,
    partner: Vec<usize>,
}

impl Tensor3x3Field {
    pub fn new(points: Vec<Vec3>, values: Vec<Matrix3>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Incompatible(format!(
                "{} points but {} samples",
                points.len(),
                values.len()
            )));
        }
        let partner = points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let target = vec3::neg(*p);
                points
                    .iter()
                    .position(|q| *q == target)
                    .ok_or(Error::NotNegationClosed { index: i })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            points,
            values,
            partner,
        })
    }

    /// Samples `f` on `points`.
    pub fn sample(points: Vec<Vec3>, f: impl Fn(Vec3) -> Matrix3) -> Result<Self> {
        let values = points.iter().map(|p| f(*p)).collect();
        Self::new(points, values)
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn values(&self) -> &[Matrix3] {
        &self.values
    }

    /// Index of the sample at `-rho` for sample `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    /// Value at `-rho` for sample `i`.
    pub fn at_negated(&self, i: usize) -> &Matrix3 {
        &self.values[self.partner[i]]
    }

    fn with_values(&self, values: Vec<Matrix3>) -> Self {
        Self {
            points: self.points.clone(),
            values,
            partner: self.partner.clone(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .flatten()
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Root-sum-square over all samples and components.
    pub fn norm(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .flatten()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_difference(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .flatten()
            .flatten()
            .zip(other.values.iter().flatten().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Pointwise sum of two fields on the same point set.
    pub fn plus(&self, other: &Self) -> Self {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| combine(a, b, 1.0, 1.0))
            .collect();
        self.with_values(values)
    }
}

/// The four parts of a kernel: Gerade/Ungerade in `rho` times
/// symmetric/antisymmetric in the indices.
#[derive(Debug, Clone, PartialEq)]
pub struct GuSaParts {
    pub sg: Tensor3x3Field,
    pub ag: Tensor3x3Field,
    pub su: Tensor3x3Field,
    pub au: Tensor3x3Field,
}

impl GuSaParts {
    pub fn sum(&self) -> Tensor3x3Field {
        self.sg.plus(&self.ag).plus(&self.su).plus(&self.au)
    }
}

pub fn decompose_gu_sa(field: &Tensor3x3Field) -> GuSaParts {
    let mut parts: [Vec<Matrix3>; 4] = std::array::from_fn(|_| Vec::with_capacity(field.values.len()));
    for (i, here) in field.values.iter().enumerate() {
        let there = field.at_negated(i);
        let even = combine(here, there, 0.5, 0.5);
        let odd = combine(here, there, 0.5, -0.5);
        let even_t = transpose(&even);
        let odd_t = transpose(&odd);
        parts[0].push(combine(&even, &even_t, 0.5, 0.5));
        parts[1].push(combine(&even, &even_t, 0.5, -0.5));
        parts[2].push(combine(&odd, &odd_t, 0.5, 0.5));
        parts[3].push(combine(&odd, &odd_t, 0.5, -0.5));
    }
    let [sg, ag, su, au] = parts;
    GuSaParts {
        sg: field.with_values(sg),
        ag: field.with_values(ag),
        su: field.with_values(su),
        au: field.with_values(au),
    }
}

/// Defect of the odd-parity (pseudotensor) behaviour
/// `alpha_kl(rho) = pi alpha_kl(-rho)` with `pi = -1`:
/// returns `max |alpha_kl(rho) + alpha_kl(-rho)|`.
pub fn pseudotensor_parity_check(field: &Tensor3x3Field) -> f64 {
    let parity = -1.0;
    let mut worst: f64 = 0.0;
    for (i, here) in field.values.iter().enumerate() {
        let there = field.at_negated(i);
        for k in 0..3 {
            for l in 0..3 {
                worst = worst.max((here[k][l] - parity * there[k][l]).abs());
            }
        }
    }
    worst
}

/// Defect of the exchange symmetry `alpha_kl(rho) = alpha_lk(-rho)`.
pub fn exchange_symmetry_defect(field: &Tensor3x3Field) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, here) in field.values.iter().enumerate() {
        let there = field.at_negated(i);
        for k in 0..3 {
            for l in 0..3 {
                worst = worst.max((here[k][l] - there[l][k]).abs());
            }
        }
    }
    worst
}

/// `count` points drawn uniformly from the cube `[-extent, extent]^3`,
/// returned as `2 * count` samples with every `rho` followed by `-rho`.
pub fn symmetric_sample_points(count: usize, extent: f64, seed: u64) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(2 * count);
    while points.len() < 2 * count {
        let p: Vec3 = std::array::from_fn(|_| rng.gen_range(-extent..extent));
        if vec3::norm(p) == 0.0 {
            continue;
        }
        points.push(p);
        points.push(vec3::neg(p));
    }
    points
}
