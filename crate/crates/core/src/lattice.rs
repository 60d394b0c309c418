//! Units, the periodic spatial grid, and the transverse mode lattice.
//!
//! Every other module works on top of these three types. They are immutable
//! after construction and cheap to share across threads.
//!
//! The grid is a periodic cube of side `L` with `N` points per axis, `N`
//! even so that the point-inversion map `i -> (N - i) mod N` is a bijection
//! and the wavevector set is symmetric under `k -> -k`.
//!
//! The mode lattice holds every wavevector `k = (2 pi / L) n`, `n` a nonzero
//! integer triple, inside the sphere `|k| <= k_max`. Each mode carries a
//! right-handed transverse triad `(e1, e2, k_hat)` built by a fixed rule:
//! `e1 = normalize(a x k)` with `a = z_hat`, or `a = x_hat` when
//! `|k_hat . z_hat| > 0.9`, and `e2 = k_hat x e1`. The zero mode has no
//! transverse polarization and is not part of the lattice.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::vec3::{self, Vec3};

/// Values of the reduced Planck constant and the speed of light.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    hbar: f64,
    c: f64,
}

impl UnitSystem {
    pub fn new(hbar: f64, c: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(invalid("hbar", format!("must be positive and finite, got {hbar}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(invalid("c", format!("must be positive and finite, got {c}")));
        }
        Ok(Self { hbar, c })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { hbar: 1.0, c: 1.0 }
    }
}

/// Periodic cubic grid with `N^3` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    box_length: f64,
    points_per_axis: usize,
    spacing: f64,
}

/// Builds a periodic grid of side `box_length` with `points_per_axis` points
/// along each axis.
pub fn build_grid(box_length: f64, points_per_axis: usize) -> Result<SpatialGrid> {
    if !(box_length > 0.0 && box_length.is_finite()) {
        return Err(invalid(
            "box_length",
            format!("must be positive and finite, got {box_length}"),
        ));
    }
    if !points_per_axis.is_multiple_of(2) {
        return Err(invalid(
            "points_per_axis",
            format!("must be even, got {points_per_axis}"),
        ));
    }
    if points_per_axis < 4 {
        return Err(invalid(
            "points_per_axis",
            format!("must be at least 4, got {points_per_axis}"),
        ));
    }
    Ok(SpatialGrid {
        box_length,
        points_per_axis,
        spacing: box_length / points_per_axis as f64,
    })
}

impl SpatialGrid {
    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Total number of grid points, `N^3`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(3)
    }

    /// Largest resolvable wavenumber per axis, `pi N / L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.points_per_axis as f64 / self.box_length
    }

    /// Wraps a signed axis index into `0..N`.
    #[inline]
    pub fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.points_per_axis as isize) as usize
    }

    /// Flat index of the point `(i, j, k)`; indices wrap periodically.
    #[inline]
    pub fn index(&self, i: isize, j: isize, k: isize) -> usize {
        let n = self.points_per_axis;
        (self.wrap(i) * n + self.wrap(j)) * n + self.wrap(k)
    }

    /// Inverse of [`SpatialGrid::index`] for in-range flat indices.
    #[inline]
    pub fn unflatten(&self, flat: usize) -> [usize; 3] {
        let n = self.points_per_axis;
        [flat / (n * n), (flat / n) % n, flat % n]
    }

    /// Coordinate of axis index `i` (wrapped into the box).
    #[inline]
    pub fn coordinate(&self, i: isize) -> f64 {
        self.wrap(i) as f64 * self.spacing
    }

    #[inline]
    pub fn position(&self, flat: usize) -> Vec3 {
        let [i, j, k] = self.unflatten(flat);
        [
            i as f64 * self.spacing,
            j as f64 * self.spacing,
            k as f64 * self.spacing,
        ]
    }

    /// Flat index of the point at `-r`, i.e. `i -> (N - i) mod N` per axis.
    #[inline]
    pub fn inverted(&self, flat: usize) -> usize {
        let [i, j, k] = self.unflatten(flat);
        self.index(-(i as isize), -(j as isize), -(k as isize))
    }

    /// Smallest nonzero lattice wavenumber, `2 pi / L`.
    pub fn fundamental_wavenumber(&self) -> f64 {
        2.0 * PI / self.box_length
    }
}

/// One transverse plane-wave mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Integer wave index `n` with `k = (2 pi / L) n`.
    pub n: [i32; 3],
    pub k: Vec3,
    pub k_norm: f64,
    pub k_hat: Vec3,
    pub omega: f64,
    pub e1: Vec3,
    pub e2: Vec3,
}

impl Mode {
    /// Polarization vector for `lambda` in `{1, 2}`.
    pub fn polarization(&self, lambda: Polarization) -> Vec3 {
        match lambda {
            Polarization::One => self.e1,
            Polarization::Two => self.e2,
        }
    }

    /// Magnetic partner `k_hat x e_lambda`: `e2` for `lambda = 1`, `-e1` for `lambda = 2`.
    pub fn magnetic_polarization(&self, lambda: Polarization) -> Vec3 {
        vec3::cross(self.k_hat, self.polarization(lambda))
    }
}

/// Transverse polarization label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    One,
    Two,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::One, Polarization::Two];

    pub fn from_label(label: u8) -> Result<Self> {
        match label {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            other => Err(invalid("lambda", format!("must be 1 or 2, got {other}"))),
        }
    }

    pub fn label(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
        }
    }

    pub fn slot(self) -> usize {
        self.label() as usize - 1
    }
}

/// Deterministic transverse triad for a nonzero wavevector.
pub fn polarization_pair(k: Vec3) -> (Vec3, Vec3) {
    let k_hat = vec3::normalize(k);
    let a = if k_hat[2].abs() > 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let e1 = vec3::normalize(vec3::cross(a, k));
    let e2 = vec3::cross(k_hat, e1);
    (e1, e2)
}

/// All transverse modes with `0 < |k| <= k_max` on a periodic box.
#[derive(Debug, Clone)]
pub struct ModeLattice {
    modes: Vec<Mode>,
    lookup: HashMap<[i32; 3], usize>,
    box_length: f64,
    k_max: f64,
    units: UnitSystem,
}

/// Builds the spherical-cutoff mode lattice for `grid`.
pub fn build_mode_lattice(grid: &SpatialGrid, k_max: f64, units: UnitSystem) -> Result<ModeLattice> {
    ModeLattice::for_box(grid.box_length(), k_max, units)
}

impl ModeLattice {
    /// Same as [`build_mode_lattice`] but only needs the box side.
    pub fn for_box(box_length: f64, k_max: f64, units: UnitSystem) -> Result<Self> {
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(invalid("box_length", format!("must be positive, got {box_length}")));
        }
        let dk = 2.0 * PI / box_length;
        if !(k_max.is_finite()) || k_max < dk * (1.0 - 1e-12) {
            return Err(Error::EmptyLattice { k_max, k_min: dk });
        }
        let reach = (k_max / dk * (1.0 + 1e-12)).floor() as i32;
        let bound_sq = (k_max / dk).powi(2) * (1.0 + 2e-12);

        let mut modes = Vec::new();
        for nx in -reach..=reach {
            for ny in -reach..=reach {
                for nz in -reach..=reach {
                    let n_sq = (nx * nx + ny * ny + nz * nz) as f64;
                    if n_sq == 0.0 || n_sq > bound_sq {
                        continue;
                    }
                    let k = [nx as f64 * dk, ny as f64 * dk, nz as f64 * dk];
                    let k_norm = vec3::norm(k);
                    let (e1, e2) = polarization_pair(k);
                    modes.push(Mode {
                        n: [nx, ny, nz],
                        k,
                        k_norm,
                        k_hat: vec3::normalize(k),
                        omega: units.c() * k_norm,
                        e1,
                        e2,
                    });
                }
            }
        }
        let lookup = modes.iter().enumerate().map(|(i, m)| (m.n, i)).collect();
        Ok(Self {
            modes,
            lookup,
            box_length,
            k_max,
            units,
        })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(3)
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    /// Largest `|k|` actually present.
    pub fn max_wavenumber(&self) -> f64 {
        self.modes.iter().map(|m| m.k_norm).fold(0.0, f64::max)
    }

    pub fn index_of(&self, n: [i32; 3]) -> Option<usize> {
        self.lookup.get(&n).copied()
    }

    /// Locates a physical wavevector; returns the nearest lattice wavevector on failure.
    pub fn locate(&self, k: Vec3) -> Result<usize> {
        let dk = 2.0 * PI / self.box_length;
        let scaled = k.map(|c| c / dk);
        let rounded = scaled.map(|c| c.round());
        let on_integer = scaled
            .iter()
            .zip(&rounded)
            .all(|(s, r)| (s - r).abs() <= 1e-9 * (1.0 + r.abs()));
        if on_integer {
            let n = rounded.map(|c| c as i32);
            if let Some(i) = self.index_of(n) {
                return Ok(i);
            }
        }
        let nearest = self
            .modes
            .iter()
            .min_by(|a, b| {
                let da = vec3::norm(vec3::sub(a.k, k));
                let db = vec3::norm(vec3::sub(b.k, k));
                da.total_cmp(&db)
            })
            .map(|m| m.k)
            .unwrap_or(vec3::ZERO);
        Err(Error::NotOnLattice {
            requested: k,
            nearest,
        })
    }
}
