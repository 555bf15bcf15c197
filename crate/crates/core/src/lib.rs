//! Exact certificates for the solution spaces of linear difference equations
//!
//! ```text
//! a_r(n) x(n + r) + ... + a_1(n) x(n + 1) + a_0(n) x(n) = 0,   n in Z
//! ```
//!
//! whose coefficients `a_k` are arbitrary (finitely described) rational
//! sequences. Such a solution space is infinite-dimensional exactly when the
//! equation admits a lacunary solution, i.e. one whose support contains
//! arbitrarily long runs of zeroes. This crate builds the finite witnesses of
//! that statement:
//!
//! * finite-support solutions, extracted from exact nullspaces of banded
//!   window systems ([`linalg::finite_support_kernel`]);
//! * dimension lower-bound certificates made of pairwise support-disjoint
//!   solutions ([`engine::certify_dimension`]);
//! * budgeted prefixes of lacunary solutions ([`engine::build_lacunary`]), and
//!   the inverse cut of a lacunary solution into independent finite pieces
//!   ([`engine::split_lacunary`]).
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere. The crate is `no_std` and only needs `alloc`.
//! Every procedure takes an explicit budget and reports `Inconclusive` when it
//! runs out, which is never a claim of finite dimension.

#![cfg_attr(not(test), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod corpus;
pub mod engine;
mod error;
pub mod linalg;
pub mod operator;
pub mod rational;
pub mod sequence;

pub use error::{Error, MaskTarget};
pub use rational::Rational;

/// Crate-wide result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;
