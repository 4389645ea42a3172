//! Crate-wide error type.
//!
//! Every failure here is either a rejected input (bad field parameters, a
//! table cap overflow) or a violated mathematical precondition that callers
//! may want to catch (a sum falling outside the quadratic subfield, a
//! non-integer closed-form count). Internal impossibilities panic instead.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Field parameters violate a structural constraint (p not a prime
    /// ≡ 3 mod 4, n even, k ∤ n, or a derived invariant failed).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// p^n does not fit under the configured table cap.
    #[error("field of order {order} exceeds the table cap {cap}")]
    CapExceeded { order: u128, cap: u64 },

    /// The quadratic character of zero is undefined.
    #[error("quadratic character is undefined at zero")]
    ZeroArgument,

    /// A tallied character sum is not constant on the residue classes, so it
    /// does not lie in Q(√p*) and cannot be expressed as a QuadValue.
    #[error("character sum does not lie in the quadratic subfield")]
    NotInQuadraticSubfield,

    /// A closed-form count came out negative or fractional.
    #[error("closed-form count is not a nonnegative integer: {0}")]
    NonIntegerCount(String),

    /// A linearized-polynomial kernel is not an F_{p^k}-subspace size.
    #[error("kernel size {0} is not a power of p^k")]
    NonSubfieldKernel(u64),

    /// The quadratic-form sum formula only covers p^k ≡ 3 (mod 4).
    #[error("quadratic-form sums for p^k ≡ 1 (mod 4) are not supported")]
    UnsupportedBranch,

    /// The weight derived from the μ map is fractional or out of range.
    #[error("derived codeword weight is not an integer in range: {0}")]
    NonIntegerWeight(String),

    /// An exact half-integer division failed; indicates a value outside the
    /// ring of integers of Q(√p*), i.e. an internal arithmetic bug.
    #[error("exact halving failed for ({0}/2, {1}/2·√p*)")]
    InexactHalving(i128, i128),
}

pub type Result<T> = std::result::Result<T, Error>;
