//! The p-ary cyclic code attached to the sum family.
//!
//! Codewords are c(a, b) = (c_0, …, c_{N−1}) with c_i = tr(a·α^i + b·α^{di}),
//! one for each pair (a, b) ∈ F_{p^n}², giving a linear code of length
//! N = p^n − 1 and dimension 2n. Hamming weights come for free from the
//! exponential sums: with μ(v) = (p−1)/2 · (v + v̄),
//!
//! ```text
//!     w(c(a,b)) = p^{n−1}(p−1) − μ(S(a, b))/p,
//! ```
//!
//! so the full weight distribution is the S-value distribution pushed through
//! an affine map — no per-codeword symbol counting required.

use crate::charsum::{conjugate_sum, QuadValue};
use crate::error::{Error, Result};
use crate::expsum::{sab, value_distribution_bruteforce};
use crate::gf::{checked_pow, FieldCtx, FieldElement, FieldParams};
use crate::linalg::ModMatrix;
use std::collections::BTreeMap;

/// One codeword: the defining pair and the N symbols over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub a: FieldElement,
    pub b: FieldElement,
    pub symbols: Vec<u32>,
}

/// c_i = tr(a·α^i + b·α^{di}) for i = 0..N.
pub fn codeword(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Codeword {
    let p = ctx.params.p as u32;
    let period = ctx.params.period;
    let nn = period as usize;
    let mut symbols = vec![0u32; nn];
    if let Some(la) = ctx.log(a) {
        let mut ia = (la % period) as usize;
        for s in symbols.iter_mut() {
            *s += ctx.trace_of_exp(ia as u64);
            ia += 1;
            if ia >= nn {
                ia -= nn;
            }
        }
    }
    if let Some(lb) = ctx.log(b) {
        let db = (ctx.params.d % period) as usize;
        let mut ib = (lb % period) as usize;
        for s in symbols.iter_mut() {
            *s += ctx.trace_of_exp(ib as u64);
            ib += db;
            if ib >= nn {
                ib -= nn;
            }
        }
    }
    for s in symbols.iter_mut() {
        *s %= p;
    }
    Codeword { a, b, symbols }
}

/// Hamming weight through the sum: w = p^{n−1}(p−1) − μ(S(a,b))/p with
/// μ(v) = (p−1)/2·(v + v̄). Errors if the division is inexact or the result
/// falls outside [0, N] — either would contradict the weight identity, so an
/// error is a bug signal rather than an input condition.
pub fn weight_via_mu(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Result<u64> {
    let s = sab(ctx, a, b)?;
    weight_from_sum(&ctx.params, s)
}

/// The affine weight map on an S value.
pub fn weight_from_sum(params: &FieldParams, s: QuadValue) -> Result<u64> {
    let p = params.p as i128;
    let mu = conjugate_sum(s, params.p);
    if mu % p != 0 {
        return Err(Error::NonIntegerWeight(format!(
            "μ(S) = {mu} is not divisible by p = {p}"
        )));
    }
    let base = (p - 1) * checked_pow(params.p, params.n - 1).expect("p^{n-1} ≤ p^n") as i128;
    let w = base - mu / p;
    if w < 0 || w > params.period as i128 {
        return Err(Error::NonIntegerWeight(format!(
            "weight {w} escapes [0, {}]",
            params.period
        )));
    }
    Ok(w as u64)
}

/// Weight → number of codewords attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub rows: BTreeMap<u64, u128>,
}

impl WeightDistribution {
    pub fn total(&self) -> u128 {
        self.rows.values().sum()
    }

    pub fn count_at(&self, w: u64) -> u128 {
        self.rows.get(&w).copied().unwrap_or(0)
    }

    /// The same distribution with structurally-zero rows dropped, for
    /// comparing a closed form against an observed histogram.
    pub fn without_zero_rows(&self) -> WeightDistribution {
        WeightDistribution {
            rows: self.rows.iter().filter(|(_, &c)| c > 0).map(|(&w, &c)| (w, c)).collect(),
        }
    }
}

/// Exact weight distribution of the whole code, by pushing the S-value
/// distribution through the weight map.
pub fn weight_distribution(ctx: &FieldCtx) -> Result<WeightDistribution> {
    let dist = value_distribution_bruteforce(ctx)?;
    let mut rows: BTreeMap<u64, u128> = BTreeMap::new();
    for (&v, &count) in &dist.rows {
        if count == 0 {
            continue;
        }
        let w = weight_from_sum(&ctx.params, v)?;
        *rows.entry(w).or_insert(0) += count as u128;
    }
    Ok(WeightDistribution { rows })
}

/// The four-line closed form: weight 0 once; the balanced weight
/// (p−1)p^{n−1} for every pair whose sum is imaginary or zero; and the two
/// offset weights (p−1)p^{n−1} ∓ ((p−1)/2)·p^{(n+k)/2−1} from the half-plane
/// values. Zero-count rows are kept (the high offset collapses when k = n).
pub fn closed_form_weight_distribution(params: &FieldParams) -> Result<WeightDistribution> {
    let p = params.p as u128;
    let q = params.order as u128; // p^n
    let nn = params.period as u128; // p^n − 1
    let pnk = checked_pow(params.p, params.n - params.k).expect("p^{n-k} ≤ p^n") as u128;
    let pnk_half = checked_pow(params.p, (params.n - params.k) / 2).expect("≤ p^n") as u128;

    let base = (p - 1) * checked_pow(params.p, params.n - 1).expect("≤ p^n") as u128;
    let offset = ((p - 1) / 2)
        * checked_pow(params.p, (params.n + params.k) / 2 - 1).expect("≤ p^n") as u128;

    let mut rows: BTreeMap<u64, u128> = BTreeMap::new();
    let mut put = |w: u128, c: u128| {
        *rows.entry(w as u64).or_insert(0) += c;
    };
    put(0, 1);
    put(base, nn * (q - 2 * pnk + 1));
    put(base - offset, nn * (pnk + pnk_half));
    put(base + offset, nn * (pnk - pnk_half));

    let dist = WeightDistribution { rows };
    if dist.total() != q * q {
        return Err(Error::NonIntegerCount(format!(
            "closed-form weight counts total {} ≠ p^{{2n}} = {}",
            dist.total(),
            q * q
        )));
    }
    Ok(dist)
}

/// True iff the pair → codeword map is injective, i.e. the code has
/// dimension 2n over F_p. Checked as the rank of the 2n × N generator
/// matrix whose rows are the codewords of the basis pairs (α^i, 0) and
/// (0, α^i) — linearity makes this equivalent to pairwise distinctness of
/// all p^{2n} codewords.
pub fn dimension_check(ctx: &FieldCtx) -> bool {
    let p = ctx.params.p;
    let n = ctx.params.n as usize;
    let period = ctx.params.period;
    let nn = period as usize;
    let d = ctx.params.d % period;
    let mut m = ModMatrix::zero(2 * n, nn, p);
    for i in 0..n {
        for j in 0..nn {
            let ija = (i as u64 + j as u64) % period;
            m.set(i, j, ctx.trace_of_exp(ija) as u64);
            let ijb = (i as u64 + (d as u128 * j as u128 % period as u128) as u64) % period;
            m.set(n + i, j, ctx.trace_of_exp(ijb) as u64);
        }
    }
    m.rank() == 2 * n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx331() -> FieldCtx {
        FieldCtx::build(3, 3, 1).unwrap()
    }

    fn hamming(cw: &Codeword) -> u64 {
        cw.symbols.iter().filter(|&&s| s != 0).count() as u64
    }

    #[test]
    fn zero_pair_gives_the_zero_word() {
        let ctx = ctx331();
        let cw = codeword(&ctx, FieldElement::ZERO, FieldElement::ZERO);
        assert!(cw.symbols.iter().all(|&s| s == 0));
        assert_eq!(weight_via_mu(&ctx, FieldElement::ZERO, FieldElement::ZERO).unwrap(), 0);
    }

    #[test]
    fn pure_trace_codewords_are_balanced() {
        let ctx = ctx331();
        for ca in 1..27 {
            let a = ctx.from_code(ca).unwrap();
            let cw = codeword(&ctx, a, FieldElement::ZERO);
            assert_eq!(hamming(&cw), 18); // p^{n−1}(p−1)
            assert_eq!(weight_via_mu(&ctx, a, FieldElement::ZERO).unwrap(), 18);
        }
    }

    #[test]
    fn mu_weight_equals_direct_count_exhaustively() {
        let ctx = ctx331();
        let mut seen_low = false;
        for ca in 0..27 {
            for cb in 0..27 {
                let a = ctx.from_code(ca).unwrap();
                let b = ctx.from_code(cb).unwrap();
                let direct = hamming(&codeword(&ctx, a, b));
                let via_mu = weight_via_mu(&ctx, a, b).unwrap();
                assert_eq!(via_mu, direct, "weight split at ({ca}, {cb})");
                // Spot-pin the identity on the (9+3√-3)/2 sum: weight 15.
                if sab(&ctx, a, b).unwrap() == QuadValue::from_doubled(9, 3) {
                    assert_eq!(via_mu, 15);
                    seen_low = true;
                }
            }
        }
        assert!(seen_low, "expected at least one pair with the half-plane sum");
    }

    #[test]
    fn weight_distribution_matches_closed_form() {
        let ctx = ctx331();
        let observed = weight_distribution(&ctx).unwrap();
        let closed = closed_form_weight_distribution(&ctx.params).unwrap();
        assert_eq!(observed.without_zero_rows(), closed.without_zero_rows());
        let frozen: BTreeMap<u64, u128> = [(0, 1), (15, 312), (18, 260), (21, 156)].into();
        assert_eq!(observed.rows, frozen);
        assert_eq!(observed.total(), 729);

        // k = n: the high-offset row collapses to zero count.
        let ctx33 = FieldCtx::build(3, 3, 3).unwrap();
        let observed33 = weight_distribution(&ctx33).unwrap();
        let closed33 = closed_form_weight_distribution(&ctx33.params).unwrap();
        assert_eq!(observed33.without_zero_rows(), closed33.without_zero_rows());
        assert_eq!(closed33.count_at(27), 0);
        let frozen33: BTreeMap<u64, u128> = [(0, 1), (9, 52), (18, 676)].into();
        assert_eq!(observed33.rows, frozen33);
    }

    #[test]
    fn weight_distribution_matches_codeword_enumeration() {
        let ctx = ctx331();
        let mut naive: BTreeMap<u64, u128> = BTreeMap::new();
        for ca in 0..27 {
            for cb in 0..27 {
                let a = ctx.from_code(ca).unwrap();
                let b = ctx.from_code(cb).unwrap();
                *naive.entry(hamming(&codeword(&ctx, a, b))).or_insert(0) += 1;
            }
        }
        assert_eq!(weight_distribution(&ctx).unwrap().rows, naive);
    }

    #[test]
    fn one_step_cyclic_shift_reindexes_the_pair() {
        let ctx = ctx331();
        let alpha = ctx.alpha();
        let ad = ctx.pow(alpha, ctx.params.d);
        for (ca, cb) in [(1u64, 2u64), (5, 0), (0, 7), (13, 26)] {
            let a = ctx.from_code(ca).unwrap();
            let b = ctx.from_code(cb).unwrap();
            let cw = codeword(&ctx, a, b);
            let shifted = codeword(&ctx, ctx.mul(a, alpha), ctx.mul(b, ad));
            let mut rotated = cw.symbols.clone();
            rotated.rotate_left(1);
            assert_eq!(shifted.symbols, rotated);
        }
    }

    #[test]
    fn code_has_full_dimension() {
        assert!(dimension_check(&ctx331()));
        assert!(dimension_check(&FieldCtx::build(3, 1, 1).unwrap()));
        assert!(dimension_check(&FieldCtx::build(7, 3, 1).unwrap()));

        // Zero kernel, checked literally on the smallest field: only (0,0)
        // produces the zero word.
        let ctx = ctx331();
        for ca in 0..27 {
            for cb in 0..27 {
                if ca == 0 && cb == 0 {
                    continue;
                }
                let a = ctx.from_code(ca).unwrap();
                let b = ctx.from_code(cb).unwrap();
                assert!(codeword(&ctx, a, b).symbols.iter().any(|&s| s != 0));
            }
        }
    }

    #[test]
    fn codeword_map_is_linear() {
        let ctx = ctx331();
        let p = ctx.params.p as u32;
        for (c1, c2) in [(1u64, 2u64), (5, 17), (22, 9)] {
            let (a1, b1) = (ctx.from_code(c1).unwrap(), ctx.from_code(c2).unwrap());
            let (a2, b2) = (ctx.from_code(c2).unwrap(), ctx.from_code(c1).unwrap());
            let sum = codeword(&ctx, ctx.add(a1, a2), ctx.add(b1, b2));
            let w1 = codeword(&ctx, a1, b1);
            let w2 = codeword(&ctx, a2, b2);
            for i in 0..sum.symbols.len() {
                assert_eq!(sum.symbols[i], (w1.symbols[i] + w2.symbols[i]) % p);
            }
        }
    }
}
