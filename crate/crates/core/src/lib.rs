//! Free electromagnetic field on a periodic box: mode lattice, spectral
//! Maxwell calculus, discrete symmetries, index algebra, and smeared field
//! commutators evaluated both in closed form and as photon mode sums.

#![allow(clippy::needless_range_loop)]

pub mod commutators;
pub mod error;
pub mod fft;
pub mod fields;
pub mod lattice;
pub mod maxwell;
pub mod tensoralg;
pub mod transforms;
pub mod vec3;

pub use error::{Error, Result};
