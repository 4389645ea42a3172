//! The p-ary sequence family and its exact correlation spectrum.
//!
//! Family members are s_β(t) = tr(α^t) + tr(β·α^{dt}) for β ∈ F_{p^n}, each
//! of period N = p^n − 1. The cross-correlation at shift τ,
//!
//! ```text
//!     C_{β₁,β₂}(τ) = Σ_{t=0}^{N−1} ω^{s_{β₁}(t+τ) − s_{β₂}(t)},
//! ```
//!
//! collapses to −1 + S(δ−1, β₁δ^d − β₂) with δ = α^τ, so the whole spectrum
//! is assembled from the reduced S-table instead of per-triple tallies: for
//! each shift the a-argument is fixed and the b-argument sweeps the field
//! with computable multiplicity.

use crate::charsum::QuadValue;
use crate::error::Result;
use crate::expsum::{candidate_values, reduced_s_table, sab};
use crate::gf::{checked_pow, FieldCtx, FieldElement, FieldParams};
use std::collections::BTreeMap;

/// One family member: β and the length-N symbol vector over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub beta: FieldElement,
    pub values: Vec<u32>,
}

/// s_β(t) = tr(α^t) + tr(β·α^{dt}) for t = 0..N. β = 0 gives the plain
/// m-sequence.
pub fn family_member(ctx: &FieldCtx, beta: FieldElement) -> Sequence {
    let p = ctx.params.p as u32;
    let period = ctx.params.period;
    let nn = period as usize;
    let db = (ctx.params.d % period) as usize;
    let mut values = Vec::with_capacity(nn);
    match ctx.log(beta) {
        None => {
            for t in 0..nn {
                values.push(ctx.trace_of_exp(t as u64));
            }
        }
        Some(lb) => {
            let mut ib = (lb % period) as usize;
            for t in 0..nn {
                let mut v = ctx.trace_of_exp(t as u64) + ctx.trace_of_exp(ib as u64);
                if v >= p {
                    v -= p;
                }
                values.push(v);
                ib += db;
                if ib >= nn {
                    ib -= nn;
                }
            }
        }
    }
    Sequence { beta, values }
}

/// Exact cross-correlation C_{β₁,β₂}(τ) = Σ_t ω^{s_{β₁}(t+τ) − s_{β₂}(t)}
/// by direct tally over one period.
pub fn correlation(
    ctx: &FieldCtx,
    beta1: FieldElement,
    beta2: FieldElement,
    tau: u64,
) -> Result<QuadValue> {
    let nn = ctx.params.period as usize;
    assert!((tau as usize) < nn, "shift must lie in 0..N");
    let p = ctx.params.p as u32;
    let s1 = family_member(ctx, beta1);
    let s2 = family_member(ctx, beta2);
    let mut cv = crate::charsum::CountVector::new(ctx.params.p);
    for t in 0..nn {
        let x = s1.values[(t + tau as usize) % nn];
        let y = s2.values[t];
        let diff = (x + p - y) % p;
        cv.bump(diff as u64);
    }
    cv.to_quad_value()
}

/// Which (β₁, β₂, τ) triples a spectrum covers. In-phase autocorrelation
/// (β₁ = β₂, τ = 0) is always excluded — its value is trivially N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Ordered pairs β₁ ≠ β₂, every shift including τ = 0.
    DistinctPairs,
    /// Every ordered pair and every shift except in-phase auto.
    AllShifts,
    /// β₁ = β₂, shifts τ ≠ 0 only.
    OutOfPhaseAuto,
}

/// Exact multiset of correlation values over a scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationSpectrum {
    pub scope: Scope,
    /// value → number of (β₁, β₂, τ) triples attaining it.
    pub rows: BTreeMap<QuadValue, u128>,
    /// 4·(1 + ((p^k+1)/2)²·p^n) = 4 + (p^k+1)²·p^n.
    pub bound_sq_times4: i128,
    /// max over attained values of 4·|C|².
    pub max_observed_sq_times4: i128,
}

impl CorrelationSpectrum {
    pub fn total(&self) -> u128 {
        self.rows.values().sum()
    }

    /// 4|C|² ≤ 4 + (p^k+1)²p^n for every attained value (exact integers).
    pub fn bound_holds(&self) -> bool {
        self.max_observed_sq_times4 <= self.bound_sq_times4
    }

    /// Every key must be −1 + (an attainable S value).
    pub fn keys_are_shifted_candidates(&self, params: &FieldParams) -> bool {
        let candidates = candidate_values(params);
        let one = QuadValue::from_int(1);
        self.rows
            .keys()
            .all(|&key| candidates.binary_search(&key.add(one)).is_ok())
    }
}

/// The squared-magnitude correlation bound, times 4: 4 + (p^k+1)²·p^n.
pub fn correlation_bound_sq_times4(params: &FieldParams) -> i128 {
    let pk1 = checked_pow(params.p, params.k).expect("p^k ≤ p^n") as i128 + 1;
    4 + pk1 * pk1 * params.order as i128
}

/// Number of triples a scope covers — the spectrum total must match.
pub fn expected_triple_count(scope: Scope, params: &FieldParams) -> u128 {
    let q = params.order as u128;
    let nn = params.period as u128;
    match scope {
        Scope::AllShifts => q * q * nn - q,
        Scope::DistinctPairs => q * (q - 1) * nn,
        Scope::OutOfPhaseAuto => q * (nn - 1),
    }
}

/// Assemble the exact spectrum from the reduced S-table.
///
/// Shift algebra per τ (δ = α^τ, a = δ − 1, b = β₁δ^d − β₂):
/// * τ = 0: a = 0 and b = β₁ − β₂; each nonzero b arises from p^n ordered
///   pairs (none for b = 0 in `DistinctPairs`; β₁ = β₂ is excluded anyway).
/// * τ = N/2: δ = −1, δ^d = 1, so b = β₁ − β₂ again but with a = −2 ≠ 0.
/// * all other τ: δ^d ≠ 1, so for fixed β₁ the map β₂ ↦ b is a bijection of
///   the field; over ordered pairs each b is hit p^n times (p^n − 1 times
///   when β₁ = β₂ is excluded, once when only β₁ = β₂ is kept).
pub fn family_spectrum(ctx: &FieldCtx, scope: Scope) -> Result<CorrelationSpectrum> {
    let table = reduced_s_table(ctx)?;
    let params = &ctx.params;
    let q = params.order as u128;
    let nn = params.period as u128;
    let minus_one = QuadValue::from_int(-1);

    // Histogram of S(1, c) over every c ∈ F_{p^n} (one count per c).
    let mut d1: BTreeMap<QuadValue, u128> = BTreeMap::new();
    for &v in table.by_code.iter() {
        *d1.entry(v).or_insert(0) += 1;
    }
    let s_at_b0 = table.by_code[0]; // S(1, 0) = 0, the b = 0 column entry

    let mut rows: BTreeMap<QuadValue, u128> = BTreeMap::new();
    let mut bump = |v: QuadValue, c: u128| {
        if c > 0 {
            *rows.entry(v.add(minus_one)).or_insert(0) += c;
        }
    };

    match scope {
        Scope::AllShifts => {
            // τ = 0, β₁ ≠ β₂: the a = 0 column, p^n pairs per nonzero b.
            bump(table.s0_square, q * (nn / 2));
            bump(table.s0_nonsquare, q * (nn / 2));
            // τ ≠ 0: every pair; each b attained p^n times per shift.
            for (&v, &c) in &d1 {
                bump(v, (nn - 1) * q * c);
            }
        }
        Scope::DistinctPairs => {
            // τ = 0: as above.
            bump(table.s0_square, q * (nn / 2));
            bump(table.s0_nonsquare, q * (nn / 2));
            // τ = N/2: b = β₁ − β₂ ≠ 0, a = −2; b = 0 never occurs.
            for (&v, &c) in &d1 {
                let c = if v == s_at_b0 { c - 1 } else { c };
                bump(v, q * c);
            }
            // τ ∉ {0, N/2}: each b hit p^n − 1 times (the β₁ = β₂ pair that
            // would produce it is excluded).
            for (&v, &c) in &d1 {
                bump(v, (nn - 2) * (q - 1) * c);
            }
        }
        Scope::OutOfPhaseAuto => {
            // τ = N/2: b = 0 for every β, value −1 + S(−2, 0) = −1.
            bump(s_at_b0, q);
            // τ ∉ {0, N/2}: β ↦ b bijective, one count per b per shift.
            for (&v, &c) in &d1 {
                bump(v, (nn - 2) * c);
            }
        }
    }

    let p = params.p;
    let max_observed_sq_times4 =
        rows.keys().map(|v| v.mag_sq_times4(p)).max().unwrap_or(0);
    Ok(CorrelationSpectrum {
        scope,
        rows,
        bound_sq_times4: correlation_bound_sq_times4(params),
        max_observed_sq_times4,
    })
}

/// The reduction identity behind the spectrum: C_{β₁,β₂}(τ) must equal
/// −1 + S(δ−1, β₁δ^d − β₂). Returns the two values for a triple.
pub fn correlation_identity_pair(
    ctx: &FieldCtx,
    beta1: FieldElement,
    beta2: FieldElement,
    tau: u64,
) -> Result<(QuadValue, QuadValue)> {
    let delta = ctx.exp_at(tau % ctx.params.period);
    let a = ctx.sub(delta, FieldElement::ONE);
    let dd = ctx.pow(delta, ctx.params.d % ctx.params.period);
    let b = ctx.sub(ctx.mul(beta1, dd), beta2);
    let direct = correlation(ctx, beta1, beta2, tau)?;
    let via_s = sab(ctx, a, b)?.add(QuadValue::from_int(-1));
    Ok((direct, via_s))
}
