//! Numerical core for non-colliding systems of generalized meanders.
//!
//! The crate computes, for the two-parameter family of Bessel-type
//! diffusions indexed by `nu > -1` and `kappa in [0, 2(nu+1))`:
//!
//! - transition densities of (squared) generalized meanders and the
//!   Karlin-McGregor determinant densities of their non-colliding systems
//!   ([`meander`]),
//! - Riemann-Liouville differintegrals of scaled Bessel functions
//!   ([`differint`]),
//! - the skew-orthogonal Laguerre polynomial machinery ([`skeworth`]),
//! - finite-N and scaling-limit Pfaffian matrix kernels ([`kernels`]),
//! - Pfaffians, correlation functions, and discretized Fredholm
//!   Pfaffians/determinants ([`pfaffian`]),
//! - a path simulator for cross-validation ([`simulate`]),
//! - and a self-checking validation suite ([`validate`]).
//!
//! `no_std` compatible with `alloc` (`default-features = false` routes the
//! float math through `libm`). The CLI and file formats live in the
//! companion crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(test, not(feature = "std")))]
extern crate std;

#[doc(hidden)]
pub mod dd;
#[cfg(test)]
pub(crate) mod refdata;
pub mod differint;
pub mod error;
mod fx;
mod linalg;
pub mod kernels;
pub mod meander;
pub mod pfaffian;
pub mod quad;
pub mod simulate;
pub mod skeworth;
pub mod specfun;
pub mod validate;

pub use error::{Error, Result};

