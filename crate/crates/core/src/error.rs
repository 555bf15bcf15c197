use alloc::string::String;
use core::fmt;

use crate::Rational;

/// Which sequence a [`Error::MaskViolation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaskTarget {
    /// The coefficient `a_k` with the given shift `k`.
    Coefficient(usize),
    /// The candidate solution.
    Solution,
}

impl fmt::Display for MaskTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaskTarget::Coefficient(k) => write!(f, "coefficient a_{k}"),
            MaskTarget::Solution => f.write_str("solution"),
        }
    }
}

/// Errors raised by the library. Display strings start with the error name so
/// front ends can echo them verbatim.
#[allow(missing_docs)]
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A window with `lo > hi`.
    #[error("InvalidWindow: lo = {lo} exceeds hi = {hi}")]
    InvalidWindow { lo: i64, hi: i64 },

    /// A sequence description violating its own invariants.
    #[error("InvalidSequence: {0}")]
    InvalidSequence(&'static str),

    /// A list has the wrong number of entries (coefficients, masks).
    #[error("ArityMismatch: expected {expected} entries, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    /// A finite solution that is all-zero or not tightly anchored.
    #[error("InvalidSolution: {0}")]
    InvalidSolution(&'static str),

    /// A budget, count or size parameter outside its domain.
    #[error("InvalidParameter: {0}")]
    InvalidParameter(&'static str),

    /// Text that is not a rational in `p/q` form.
    #[error("ParseRational: cannot parse {0:?} as p/q")]
    ParseRational(String),

    /// A sampled value contradicts a claimed residue mask.
    #[error("MaskViolation: {target} is nonzero at n = {index}, outside its claimed residue mask")]
    MaskViolation { target: MaskTarget, index: i64 },

    /// A computed kernel vector failed exact re-verification.
    #[error("VerificationFailure: kernel vector {index} is not an exact global solution")]
    VerificationFailure { index: usize },

    /// The window is shorter than the operator order plus one.
    #[error("WindowTooSmall: window of {len} points cannot hold an equation of order {order}")]
    WindowTooSmall { len: u64, order: usize },

    /// A windowed residual check failed at `n`.
    #[error("NotASolutionOnWindow: residual at n = {n} is {residual}")]
    NotASolutionOnWindow { n: i64, residual: Rational },

    /// A zero coefficient value where a nonzero one is required.
    #[error("ZeroValueRejected: coefficient value for k = {k} is zero")]
    ZeroValueRejected { k: usize },
}
