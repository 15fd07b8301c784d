//! Exact numerical toolkit for stability questions on polarized surfaces.
//!
//! Everything here works with intersection numbers only: a surface is a
//! Néron–Severi Gram matrix together with its canonical class and `c₂`, and
//! an object is its Chern character `(ch₀, ch₁, ch₂)`. All arithmetic is over
//! arbitrary-precision rationals.
//!
//! Modules:
//! - [`lattice`]: surface lattices, divisor classes, exact inertia.
//! - [`chern`]: Chern vectors, twists, discriminants, slopes, Euler characteristics.
//! - [`stability`]: Bogomolov-type checks, the discriminant decomposition
//!   identity, polarization walls, Reider and Sun numerics.
//! - [`bridgeland`]: tilt central charges, torsion-pair sides, pseudo-walls.
//! - [`frobenius`]: Chern character of Frobenius pushforwards of line bundles.
//! - [`curve`]: genus-0 split bundles, HN profiles and tensor-slope bounds.
//! - [`fibration`]: slope-inequality bookkeeping for a surface over a curve.

pub mod bridgeland;
pub mod chern;
pub mod curve;
pub mod error;
pub mod fibration;
pub mod frobenius;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod stability;

pub use chern::{ChernVector, Slope};
pub use error::{Error, Result};
pub use lattice::{DivisorClass, Signature, SurfaceLattice};
pub use rational::Rational;

/// Returns a rayon pool sized by the `STABKIT_THREADS` environment variable
/// (`0` or unset means one thread per core).
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var("STABKIT_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("failed to build thread pool")
}
