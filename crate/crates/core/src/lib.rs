//! Walsh–Fourier machinery for the circulant Hadamard problem.
//!
//! A ±1 vector `u` of length `n` generates a circulant Hadamard matrix iff
//! its periodic autocorrelation vanishes at every nonzero shift. Writing
//! `M(γ) = u^γ` for the Walsh characters `γ ∈ Z₂ⁿ` turns that condition into
//! a homogeneous *linear* system in the `2ⁿ` unknowns `M(γ)`. A rational
//! combination of its rows that equals the functional `M(0)` is a witness
//! that no circulant Hadamard matrix of order `n` exists.
//!
//! Modules:
//!
//! * [`walsh`]: group elements, sign vectors, characters, the fast Walsh
//!   transform and the matrix Fourier transform.
//! * [`system`]: rows of the pair-shift system, the `S` polynomial and
//!   convolution.
//! * [`symmetry`]: shift/multiplier symmetry group, orbit tables and the
//!   orbit-reduced system.
//! * [`linalg`]: streaming sparse elimination over `Q` and prime fields.
//! * [`witness`]: certificates, the tridiagonal single-weight system and an
//!   independent verifier.
//! * [`oracle`]: brute force ground truth.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod symmetry;
pub mod system;
pub mod walsh;
pub mod witness;

pub use error::{Error, Result};
pub use rational::Rational;
pub use walsh::{GroupElement, SignMatrix, SignVector, WalshPolynomial};

/// Tag recorded in every exported artifact: the `d = n/2` constraint counts
/// each antipodal pair once.
pub const CONVENTION_TAG: &str = "antipodal-half-range/v1";

/// Largest order accepted by the system builder unless overridden.
pub const DEFAULT_ORDER_CAP: usize = 24;

/// Hard ceiling from the 64-bit mask representation.
pub const MAX_ORDER: usize = 63;
