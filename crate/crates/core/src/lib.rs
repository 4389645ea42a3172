//! Exact arithmetic for the exponential sums
//!
//! ```text
//!     S(a, b) = Σ_{x ∈ F_{p^n}} ω^{tr(a·x + b·x^d)},    ω = e^{2πi/p},
//! ```
//!
//! where p ≡ 3 (mod 4) is prime, n is odd, k | n, and the decimation is
//! d = (p^n+1)/(p^k+1) + (p^n−1)/2. Every such sum lies in the quadratic
//! subfield Q(√p*) of the p-th cyclotomic field (p* = −p), so it is stored
//! exactly as a pair of integers — no floating point in any result path.
//!
//! On top of the sums the crate derives, all in exact integer arithmetic:
//!
//! * the full value distribution of S(a, b) over all p^{2n} pairs, both by
//!   enumeration and in closed form, with moment-identity checks;
//! * the rank/discriminant classification of the associated quadratic forms
//!   tr_k(±a·x^{p^k+1} + b·x²), including kernel censuses of their
//!   linearized polynomials and a root census of the projective polynomials
//!   z^{p^s+1} − ψz + ψ;
//! * the correlation spectrum of the sequence family
//!   s_β(t) = tr(α^t) + tr(β·α^{dt}) and its bound;
//! * the weight distribution of the cyclic code with codewords
//!   c_i = tr(a·α^i + b·α^{di}).
//!
//! Module map: [`gf`] builds the field tower and its log/antilog tables,
//! [`charsum`] is the exact quadratic-subfield arithmetic, [`expsum`]
//! evaluates the sums and distributions, [`quadform`] classifies the
//! quadratic forms, [`seqfam`] and [`code`] derive the sequence family and
//! the cyclic code, and [`oracle`] holds deliberately naive re-computations
//! (floating point, exhaustive scans) used to cross-check the exact paths.

pub mod charsum;
pub mod code;
pub mod error;
pub mod expsum;
pub mod gf;
pub mod oracle;
pub mod quadform;
pub mod seqfam;

mod linalg;

pub use charsum::{CountVector, QuadValue, ValueDistribution};
pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElement, FieldParams, DEFAULT_TABLE_CAP};
