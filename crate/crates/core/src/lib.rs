//! Exact combinatorics and harmonic analysis on the finite plane `F_q^2`.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: arithmetic in `F_q` for odd prime powers, square roots,
//!   absolute trace and the canonical additive character.
//! - [`geometry`]: points, point sets, the quadratic form `||x|| = x1^2 + x2^2`,
//!   distance / direction / scale sets and deterministic set generators.
//! - [`groups`]: `O(2, F_q)`, the product group `G1`, similarities and
//!   constructive rigidity.
//! - [`fourier`]: transforms of indicator functions on `F_q^2` and `F_q^4`.
//! - [`counting`]: exact integer counting functions with fast kernels.
//! - [`oracle`]: definition-level brute-force enumerations of the same counts.
//! - [`verify`]: one checker per bound, producing structured reports.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod counting;
pub mod error;
pub mod field;
pub mod fourier;
pub mod geometry;
pub mod groups;
pub mod limits;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElement};
pub use geometry::{Point, PointSet, SetSpec, ValueSet};
pub use limits::Limits;

/// `x^n` without `std`.
pub(crate) fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}
