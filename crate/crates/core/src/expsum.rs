//! Exact evaluation of S(a, b) = Σ_{x ∈ F_{p^n}} ω^{tr(ax + bx^d)} and its
//! full value distribution over all p^{2n} parameter pairs.
//!
//! The workhorse is a tally engine that walks x = α^i once and maintains the
//! exponent indices of up to two monomial terms incrementally, so the inner
//! loop is two table lookups and one add. Everything downstream — the value
//! distribution, the Weil-bound scans, the reduction identities — is exact
//! integer arithmetic on [`CountVector`]s collapsed into [`QuadValue`]s.
//!
//! Enumerating all p^{2n} pairs naively would cost O(p^{3n}); instead the
//! distribution uses two exact reductions, both of which are themselves
//! re-checked by [`reduction_check`]:
//!
//! * for a ≠ 0, the substitution x ↦ a^{−1}x gives S(a, b) = S(1, b·a^{−d}),
//!   so one pass over c ∈ F_{p^n} with weight p^n − 1 covers the whole block;
//! * for a = 0, the substitution x ↦ sx shows S(0, b) depends only on the
//!   square class of b, so two tallies with weight (p^n − 1)/2 cover the
//!   column (S(0,0) = p^n is its own row).

use crate::charsum::{CountVector, QuadValue, ValueDistribution};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement, FieldParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Tally tr(a·x^s + b·x^t) over every x ∈ F_{p^n} into per-residue counts.
///
/// Each part is given as (log coefficient, exponent); `None` drops the term.
/// Exponents are reduced mod p^n − 1 (the function x ↦ x^s on F* only sees
/// s mod p^n − 1); x = 0 contributes to the zero bucket since both monomials
/// have positive degree.
pub fn exponent_tally(
    ctx: &FieldCtx,
    a_part: Option<(u64, u64)>,
    b_part: Option<(u64, u64)>,
) -> CountVector {
    let p = ctx.params.p;
    let period = ctx.params.period;
    let np = period as usize;
    let tr = ctx.trace_table();
    let mut cv = CountVector::new(p);
    cv.bump(0); // x = 0
    match (a_part, b_part) {
        (None, None) => cv.bump_by(0, period),
        (Some((l, s)), None) | (None, Some((l, s))) => {
            let mut i = (l % period) as usize;
            let s = (s % period) as usize;
            for _ in 0..np {
                cv.bump(tr[i] as u64);
                i += s;
                if i >= np {
                    i -= np;
                }
            }
        }
        (Some((la, sa)), Some((lb, sb))) => {
            let mut ia = (la % period) as usize;
            let sa = (sa % period) as usize;
            let mut ib = (lb % period) as usize;
            let sb = (sb % period) as usize;
            let pu = p as u32;
            for _ in 0..np {
                let mut t = tr[ia] + tr[ib];
                if t >= pu {
                    t -= pu;
                }
                cv.bump(t as u64);
                ia += sa;
                if ia >= np {
                    ia -= np;
                }
                ib += sb;
                if ib >= np {
                    ib -= np;
                }
            }
        }
    }
    cv
}

/// Per-residue counts of tr(ax + bx^d) over all x.
pub fn sab_counts(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> CountVector {
    let d = ctx.params.d;
    exponent_tally(ctx, ctx.log(a).map(|la| (la, 1)), ctx.log(b).map(|lb| (lb, d)))
}

/// The exact exponential sum S(a, b) = Σ_x ω^{tr(ax + bx^d)}.
///
/// An error here means the sum escaped Q(√p*) — impossible under validated
/// parameters, so it signals a parameter-validation bug, not bad input.
pub fn sab(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> Result<QuadValue> {
    sab_counts(ctx, a, b).to_quad_value()
}

/// Every S value the p^{2n} table can contain, reduced to p^n + 3 sums:
/// S(1, c) for all c, plus the two square classes of the a = 0 column.
pub struct ReducedSTable {
    /// by_code[code(c)] = S(1, c).
    pub by_code: Vec<QuadValue>,
    /// S(0, b) for b a nonzero square.
    pub s0_square: QuadValue,
    /// S(0, b) for b a non-square.
    pub s0_nonsquare: QuadValue,
}

impl ReducedSTable {
    /// S(a, b) for arbitrary (a, b), resolved through the reductions.
    pub fn lookup(&self, ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> QuadValue {
        match (ctx.log(a), ctx.log(b)) {
            (None, None) => QuadValue::from_int(ctx.params.order as i128),
            (None, Some(lb)) => {
                if lb % 2 == 0 {
                    self.s0_square
                } else {
                    self.s0_nonsquare
                }
            }
            (Some(la), lb) => {
                let period = ctx.params.period;
                let c = match lb {
                    None => FieldElement::ZERO,
                    Some(lb) => {
                        // c = b·a^{−d}: log arithmetic mod p^n − 1.
                        let shift = (ctx.params.d as u128 * la as u128 % period as u128) as u64;
                        ctx.exp_at((lb + period - shift) % period)
                    }
                };
                self.by_code[c.code() as usize]
            }
        }
    }
}

/// Build the reduced table with one O(p^n) tally per column, in parallel.
pub fn reduced_s_table(ctx: &FieldCtx) -> Result<ReducedSTable> {
    let order = ctx.params.order;
    let by_code = (0..order)
        .into_par_iter()
        .map(|c| sab(ctx, FieldElement::ONE, ctx.from_code(c).expect("c < order")))
        .collect::<Result<Vec<QuadValue>>>()?;
    let s0_square = sab(ctx, FieldElement::ZERO, FieldElement::ONE)?;
    let s0_nonsquare = sab(ctx, FieldElement::ZERO, ctx.alpha())?;
    Ok(ReducedSTable { by_code, s0_square, s0_nonsquare })
}

/// Assemble the full p^{2n}-pair value distribution from the reduced table.
pub fn distribution_from_table(ctx: &FieldCtx, table: &ReducedSTable) -> ValueDistribution {
    let period = ctx.params.period as i128;
    let mut dist = ValueDistribution::new(ctx.params.p);
    dist.bump(QuadValue::from_int(ctx.params.order as i128), 1);
    dist.bump(table.s0_square, period / 2);
    dist.bump(table.s0_nonsquare, period / 2);
    for &v in &table.by_code {
        dist.bump(v, period);
    }
    dist
}

/// The value distribution of S(a, b) over all p^{2n} pairs, by enumeration.
pub fn value_distribution_bruteforce(ctx: &FieldCtx) -> Result<ValueDistribution> {
    Ok(distribution_from_table(ctx, &reduced_s_table(ctx)?))
}

/// The ten values S(a, b) can take, in (twoA, twoB) order:
/// p^n, 0, ±jp^{n/2}, (±√p^k ± j)p^{n/2}/2, and ±j(p^k+1)p^{n/2}/2.
pub fn candidate_values(params: &FieldParams) -> Vec<QuadValue> {
    let p = params.p as i128;
    let pn = p.pow(params.n);
    let pk = p.pow(params.k);
    // j·p^{n/2} = p^{(n−1)/2}·√p*, so half-integer exponents never appear.
    let ph = p.pow((params.n - 1) / 2);
    let pa = p.pow((params.n + params.k) / 2);
    let mut v = vec![
        QuadValue::from_int(pn),
        QuadValue::ZERO,
        QuadValue::from_doubled(0, 2 * ph),
        QuadValue::from_doubled(0, -2 * ph),
        QuadValue::from_doubled(pa, ph),
        QuadValue::from_doubled(pa, -ph),
        QuadValue::from_doubled(-pa, ph),
        QuadValue::from_doubled(-pa, -ph),
        QuadValue::from_doubled(0, (pk + 1) * ph),
        QuadValue::from_doubled(0, -(pk + 1) * ph),
    ];
    v.sort();
    v
}

/// The two candidate-adjacent values ±j(p^k−1)p^{n/2}/2 that never occur
/// for a, b both nonzero. (For p^k = 3 they coincide with ±jp^{n/2}, which
/// does occur — but only in the a = 0 column.)
pub fn excluded_values(params: &FieldParams) -> [QuadValue; 2] {
    let p = params.p as i128;
    let pk = p.pow(params.k);
    let ph = p.pow((params.n - 1) / 2);
    [
        QuadValue::from_doubled(0, (pk - 1) * ph),
        QuadValue::from_doubled(0, -(pk - 1) * ph),
    ]
}

fn exact_div(num: i128, den: i128, what: &str) -> Result<i128> {
    if den == 0 || num % den != 0 {
        return Err(Error::NonIntegerCount(format!("{what}: {num}/{den} is not an integer")));
    }
    Ok(num / den)
}

/// The closed-form value distribution: per-value multiplicities as explicit
/// products and quotients of p-powers, every division checked exact.
/// Structurally-zero rows (e.g. the ±j(p^k+1)p^{n/2}/2 rows at k = n) are
/// kept with count 0.
pub fn closed_form_distribution(params: &FieldParams) -> Result<ValueDistribution> {
    let p = params.p as i128;
    let pn = p.pow(params.n);
    let p2n = pn * pn;
    let pk = p.pow(params.k);
    let ph = p.pow((params.n - 1) / 2);
    let pa = p.pow((params.n + params.k) / 2);
    let pek = p.pow(params.n - params.k);
    let peh = p.pow((params.n - params.k) / 2);

    let omega0 = 1;
    let omega_zero = exact_div((pk - 1) * (p2n - 1), 2 * (pk + 1), "count at 0")?;
    let omega_j = exact_div(p2n - 1, 4, "count at ±jp^{n/2}, first term")?
        - exact_div((pn - 1) * (pn - 1), 2 * (pk - 1), "count at ±jp^{n/2}, second term")?;
    let omega_plus = exact_div((pn - 1) * (pek + peh), 2, "count at (√p^k±j)p^{n/2}/2")?;
    let omega_minus = exact_div((pn - 1) * (pek - peh), 2, "count at (−√p^k±j)p^{n/2}/2")?;
    let omega_wide =
        exact_div((pek - 1) * (pn - 1), pk * pk - 1, "count at ±j(p^k+1)p^{n/2}/2")?;

    for (name, c) in [
        ("±jp^{n/2}", omega_j),
        ("(√p^k±j)p^{n/2}/2", omega_plus),
        ("(−√p^k±j)p^{n/2}/2", omega_minus),
        ("±j(p^k+1)p^{n/2}/2", omega_wide),
        ("0", omega_zero),
    ] {
        if c < 0 {
            return Err(Error::NonIntegerCount(format!("count at {name} is negative: {c}")));
        }
    }

    let mut dist = ValueDistribution::new(params.p);
    dist.bump(QuadValue::from_int(pn), omega0);
    dist.bump(QuadValue::ZERO, omega_zero);
    dist.bump(QuadValue::from_doubled(0, 2 * ph), omega_j);
    dist.bump(QuadValue::from_doubled(0, -2 * ph), omega_j);
    dist.bump(QuadValue::from_doubled(pa, ph), omega_plus);
    dist.bump(QuadValue::from_doubled(pa, -ph), omega_plus);
    dist.bump(QuadValue::from_doubled(-pa, ph), omega_minus);
    dist.bump(QuadValue::from_doubled(-pa, -ph), omega_minus);
    dist.bump(QuadValue::from_doubled(0, (pk + 1) * ph), omega_wide);
    dist.bump(QuadValue::from_doubled(0, -(pk + 1) * ph), omega_wide);
    Ok(dist)
}

/// Results of the three moment identities and the conjugation symmetry.
///
/// For the true distribution all of Σ Ω, Σ v·Ω, Σ v²·Ω equal p^{2n}: the
/// count because it enumerates pairs, the first and second moments because
/// character orthogonality kills every term except (a, b) forcing x = 0
/// (respectively x + y = 0 ∧ x^d + y^d = 0, which has the sole solution
/// x = y = 0 since d is even).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub expected: i128,
    pub count: i128,
    pub first: QuadValue,
    pub second: QuadValue,
    pub conjugation_symmetric: bool,
}

impl MomentReport {
    pub fn count_ok(&self) -> bool {
        self.count == self.expected
    }
    pub fn first_ok(&self) -> bool {
        self.first == QuadValue::from_int(self.expected)
    }
    pub fn second_ok(&self) -> bool {
        self.second == QuadValue::from_int(self.expected)
    }
    pub fn all_ok(&self) -> bool {
        self.count_ok() && self.first_ok() && self.second_ok() && self.conjugation_symmetric
    }
}

/// Evaluate the moment identities and conjugation symmetry of a distribution.
pub fn moment_checks(dist: &ValueDistribution, params: &FieldParams) -> MomentReport {
    let (count, first, second) = dist.moments();
    let pn = (params.p as i128).pow(params.n);
    let conjugation_symmetric = dist
        .rows
        .iter()
        .all(|(v, &c)| dist.rows.get(&v.conj()).copied().unwrap_or(0) == c);
    MomentReport { expected: pn * pn, count, first, second, conjugation_symmetric }
}

/// How a pair-indexed check chooses its (a, b) inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Every pair. Meant for desk-scale fields: the pair list is
    /// materialized, so p^{2n} must be small enough to hold in memory.
    Exhaustive,
    /// `count` pairs drawn from a seeded ChaCha stream — reproducible.
    Sample { count: u64, seed: u64 },
}

/// Element-code pairs (a, b) for a check, honoring the mode.
pub(crate) fn collect_pairs(order: u64, mode: SampleMode, nonzero_a: bool) -> Vec<(u64, u64)> {
    match mode {
        SampleMode::Exhaustive => {
            let lo = if nonzero_a { 1 } else { 0 };
            (lo..order).flat_map(|a| (0..order).map(move |b| (a, b))).collect()
        }
        SampleMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let a = if nonzero_a {
                        rng.random_range(1..order)
                    } else {
                        rng.random_range(0..order)
                    };
                    (a, rng.random_range(0..order))
                })
                .collect()
        }
    }
}

/// Outcome of a Weil-bound scan over f(x) = a·x^l + b·x, a ≠ 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilReport {
    pub pairs_checked: u64,
    /// Pairs skipped because the polynomial degenerated to a constant
    /// (only possible for l = 1 with b = −a).
    pub skipped_degenerate: u64,
    pub max_mag_sq4: i128,
    /// 4·(l−1)²·p^n.
    pub bound_mag_sq4: i128,
}

impl WeilReport {
    pub fn holds(&self) -> bool {
        self.max_mag_sq4 <= self.bound_mag_sq4
    }
}

/// Check |Σ_x ω^{tr(a x^l + b x)}| ≤ (l−1)·p^{n/2} over sampled pairs with
/// a ≠ 0, as exact integers: 4|v|² vs 4(l−1)²p^n.
///
/// Requires p ∤ l so the degree survives Artin–Schreier reduction. The sums
/// land in Q(√p*) for l = 1, for l = (p^k+1)/2 (splitting the domain into
/// squares and nonsquares writes that sum as half the difference of two
/// quadratic-form sums), and for every l when p = 3 (Q(ω) = Q(√−3) there).
/// Other degrees can leave the quadratic subfield — e.g. l = 2 over F_{7^n},
/// where completing the square leaves a stray ω^{tr(−b²/4a)} factor — and
/// then this returns NotInQuadraticSubfield: a statement about where the
/// value lives, not a bound violation.
pub fn weil_bound_check(ctx: &FieldCtx, l: u64, mode: SampleMode) -> Result<WeilReport> {
    let params = &ctx.params;
    if l == 0 || l % params.p == 0 {
        return Err(Error::InvalidParams(format!(
            "degree l = {l} must be positive and coprime to p = {}",
            params.p
        )));
    }
    let bound_mag_sq4 = 4 * (l as i128 - 1).pow(2) * (params.p as i128).pow(params.n);
    let pairs = collect_pairs(params.order, mode, true);
    let (max_mag_sq4, pairs_checked, skipped_degenerate) = pairs
        .par_iter()
        .map(|&(ca, cb)| -> Result<(i128, u64, u64)> {
            let a = ctx.from_code(ca).expect("sampled in range");
            let b = ctx.from_code(cb).expect("sampled in range");
            if l == 1 && ctx.add(a, b).is_zero() {
                return Ok((0, 0, 1));
            }
            let la = ctx.log(a).expect("a nonzero");
            let cv = exponent_tally(ctx, Some((la, l)), ctx.log(b).map(|lb| (lb, 1)));
            let v = cv.to_quad_value()?;
            Ok((v.mag_sq_times4(params.p), 1, 0))
        })
        .try_reduce(
            || (0, 0, 0),
            |x, y| Ok((x.0.max(y.0), x.1 + y.1, x.2 + y.2)),
        )?;
    Ok(WeilReport { pairs_checked, skipped_degenerate, max_mag_sq4, bound_mag_sq4 })
}

/// Result of scanning every reduced column value against the candidate set,
/// the never-occurring pair, and the magnitude bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnScanReport {
    pub columns: u64,
    /// Values outside the ten-candidate set (must be 0).
    pub off_candidate: u64,
    /// Occurrences of ±j(p^k−1)p^{n/2}/2 among S(1, c), c ≠ 0 (must be 0).
    pub excluded_hits: u64,
    pub max_mag_sq4: i128,
    /// 4 + (p^k+1)²·p^n, the sharp cap on 4|S(a,b)|² away from (0,0).
    pub mag_bound4: i128,
}

impl ColumnScanReport {
    pub fn ok(&self) -> bool {
        self.off_candidate == 0 && self.excluded_hits == 0 && self.max_mag_sq4 <= self.mag_bound4
    }
}

/// Scan the reduced table: every value must be a candidate; the excluded
/// values must never appear for a, b both nonzero; and every value with
/// (a, b) ≠ (0, 0) obeys 4|S|² ≤ 4 + (p^k+1)²p^n.
pub fn scan_reduced_columns(params: &FieldParams, table: &ReducedSTable) -> ColumnScanReport {
    let candidates = candidate_values(params);
    let excluded = excluded_values(params);
    let p = params.p as i128;
    let mag_bound4 = 4 + (p.pow(params.k) + 1).pow(2) * p.pow(params.n);

    let mut report = ColumnScanReport {
        columns: 0,
        off_candidate: 0,
        excluded_hits: 0,
        max_mag_sq4: 0,
        mag_bound4,
    };
    let mut visit = |v: QuadValue, check_excluded: bool| {
        report.columns += 1;
        if candidates.binary_search(&v).is_err() {
            report.off_candidate += 1;
        }
        if check_excluded && excluded.contains(&v) {
            report.excluded_hits += 1;
        }
        report.max_mag_sq4 = report.max_mag_sq4.max(v.mag_sq_times4(params.p));
    };
    for (c, &v) in table.by_code.iter().enumerate() {
        visit(v, c != 0);
    }
    visit(table.s0_square, false);
    visit(table.s0_nonsquare, false);
    report
}

/// Outcome of re-deriving sampled S(a, b) through the reduction identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionReport {
    pub pairs_checked: u64,
    pub mismatches: u64,
}

/// Verify, by independent direct tallies, that S(a, b) = S(1, b·a^{−d}) for
/// a ≠ 0, that S(0, b) depends only on the square class of b, and that
/// S(0, 0) = p^n — the three facts the distribution assembly rests on.
pub fn reduction_check(ctx: &FieldCtx, mode: SampleMode) -> Result<ReductionReport> {
    let params = &ctx.params;
    let period = params.period;
    let d = params.d;
    let pairs = collect_pairs(params.order, mode, false);
    let (pairs_checked, mismatches) = pairs
        .par_iter()
        .map(|&(ca, cb)| -> Result<(u64, u64)> {
            let a = ctx.from_code(ca).expect("in range");
            let b = ctx.from_code(cb).expect("in range");
            let lhs = sab(ctx, a, b)?;
            let rhs = match (ctx.log(a), ctx.log(b)) {
                (None, None) => QuadValue::from_int(params.order as i128),
                (None, Some(lb)) => {
                    // Square-class representative: 1 or α.
                    let rep = ctx.exp_at(lb % 2);
                    sab(ctx, FieldElement::ZERO, rep)?
                }
                (Some(la), lb) => {
                    let c = match lb {
                        None => FieldElement::ZERO,
                        Some(lb) => {
                            let shift = (d as u128 * la as u128 % period as u128) as u64;
                            ctx.exp_at((lb + period - shift) % period)
                        }
                    };
                    sab(ctx, FieldElement::ONE, c)?
                }
            };
            Ok((1, u64::from(lhs != rhs)))
        })
        .try_reduce(|| (0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1)))?;
    Ok(ReductionReport { pairs_checked, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx331() -> FieldCtx {
        FieldCtx::build(3, 3, 1).unwrap()
    }

    /// Direct re-evaluation of the tally through field ops, no incremental
    /// index tricks — the in-module oracle for the engine.
    fn direct_counts(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> CountVector {
        let mut cv = CountVector::new(ctx.params.p);
        for code in 0..ctx.params.order {
            let x = ctx.from_code(code).unwrap();
            let xd = ctx.pow(x, ctx.params.d);
            let val = ctx.add(ctx.mul(a, x), ctx.mul(b, xd));
            cv.bump(ctx.trace_to_int(val));
        }
        cv
    }

    #[test]
    fn tally_engine_matches_direct_evaluation() {
        for (p, n, k) in [(3u64, 3u32, 1u32), (3, 1, 1), (7, 3, 1)] {
            let ctx = FieldCtx::build(p, n, k).unwrap();
            let probes = [
                (0u64, 0u64),
                (0, 1),
                (1, 0),
                (1, 1),
                (2, ctx.params.order - 1),
                (ctx.params.order / 2, 2),
            ];
            for (ca, cb) in probes {
                let a = ctx.from_code(ca).unwrap();
                let b = ctx.from_code(cb).unwrap();
                assert_eq!(
                    sab_counts(&ctx, a, b),
                    direct_counts(&ctx, a, b),
                    "tally mismatch at ({p},{n},{k}), a={ca}, b={cb}"
                );
            }
        }
    }

    #[test]
    fn degenerate_sums_have_known_values() {
        let ctx = ctx331();
        // S(0,0) = p^n.
        assert_eq!(
            sab(&ctx, FieldElement::ZERO, FieldElement::ZERO).unwrap(),
            QuadValue::from_int(27)
        );
        // S(a,0) = 0 for a ≠ 0.
        for la in 0..ctx.params.period {
            assert_eq!(
                sab(&ctx, ctx.exp_at(la), FieldElement::ZERO).unwrap(),
                QuadValue::ZERO
            );
        }
        // S(0,b) = ±jp^{n/2}, conjugate across square classes.
        let s_sq = sab(&ctx, FieldElement::ZERO, FieldElement::ONE).unwrap();
        let s_nsq = sab(&ctx, FieldElement::ZERO, ctx.alpha()).unwrap();
        assert_eq!(s_sq, s_nsq.conj());
        assert_eq!(s_sq.two_a, 0);
        assert_eq!(s_sq.two_b.abs(), 2 * 3); // |twoB| = 2p^{(n−1)/2}
    }

    #[test]
    fn candidates_for_3_3_1_are_the_frozen_ten() {
        let params = FieldParams::new(3, 3, 1).unwrap();
        let expected: Vec<QuadValue> = [
            (-9, -3),
            (-9, 3),
            (0, -12),
            (0, -6),
            (0, 0),
            (0, 6),
            (0, 12),
            (9, -3),
            (9, 3),
            (54, 0),
        ]
        .into_iter()
        .map(|(a, b)| QuadValue::from_doubled(a, b))
        .collect();
        assert_eq!(candidate_values(&params), expected);
        assert_eq!(
            excluded_values(&params),
            [QuadValue::from_doubled(0, 6), QuadValue::from_doubled(0, -6)]
        );
    }

    #[test]
    fn closed_form_3_3_1_matches_frozen_table() {
        let params = FieldParams::new(3, 3, 1).unwrap();
        let dist = closed_form_distribution(&params).unwrap();
        let expect = [
            ((54, 0), 1),
            ((0, 0), 182),
            ((0, 6), 13),
            ((0, -6), 13),
            ((9, 3), 156),
            ((9, -3), 156),
            ((-9, 3), 78),
            ((-9, -3), 78),
            ((0, 12), 26),
            ((0, -12), 26),
        ];
        for ((ta, tb), c) in expect {
            assert_eq!(
                dist.rows.get(&QuadValue::from_doubled(ta, tb)),
                Some(&c),
                "count at ({ta},{tb})"
            );
        }
        assert_eq!(dist.total(), 729);
    }

    #[test]
    fn closed_form_equals_bruteforce_on_small_fields() {
        for (p, n, k) in [(3u64, 1u32, 1u32), (3, 3, 1), (3, 3, 3)] {
            let ctx = FieldCtx::build(p, n, k).unwrap();
            let bf = value_distribution_bruteforce(&ctx).unwrap();
            let cf = closed_form_distribution(&ctx.params).unwrap().without_zero_rows();
            assert_eq!(bf.without_zero_rows(), cf, "distribution mismatch at ({p},{n},{k})");
        }
    }

    #[test]
    fn prime_field_distribution_by_hand() {
        // For (3,1,1) the 9 sums are small enough to enumerate mentally:
        // S(0,0)=3, the a≠0,b=0 column gives two zeros, S(0,b) = ±j√3, and
        // the four nonzero pairs split 2/2 between (√3±j)√3/2.
        let ctx = FieldCtx::build(3, 1, 1).unwrap();
        let dist = value_distribution_bruteforce(&ctx).unwrap().without_zero_rows();
        let expect: Vec<((i128, i128), i128)> = vec![
            ((-0, -2), 1),
            ((0, 0), 2),
            ((0, 2), 1),
            ((3, -1), 2),
            ((3, 1), 2),
            ((6, 0), 1),
        ];
        let got: Vec<((i128, i128), i128)> =
            dist.rows.iter().map(|(v, &c)| ((v.two_a, v.two_b), c)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn moments_all_equal_p_2n() {
        for (p, n, k) in [(3u64, 1u32, 1u32), (3, 3, 1), (3, 3, 3), (7, 3, 1)] {
            let params = FieldParams::new(p, n, k).unwrap();
            let dist = closed_form_distribution(&params).unwrap();
            let report = moment_checks(&dist, &params);
            assert!(report.all_ok(), "moment failure at ({p},{n},{k}): {report:?}");
        }
    }

    #[test]
    fn perturbed_distribution_fails_moments() {
        let params = FieldParams::new(3, 3, 1).unwrap();
        let mut dist = closed_form_distribution(&params).unwrap();
        dist.bump(QuadValue::ZERO, 1);
        assert!(!moment_checks(&dist, &params).all_ok());
    }

    #[test]
    fn reduced_column_scan_is_clean() {
        let ctx = ctx331();
        let table = reduced_s_table(&ctx).unwrap();
        let report = scan_reduced_columns(&ctx.params, &table);
        assert!(report.ok(), "{report:?}");
        assert_eq!(report.columns, 27 + 2);
        // The magnitude cap is attained by the widest candidate.
        assert_eq!(report.mag_bound4, 4 + 16 * 27);
    }

    #[test]
    fn weil_bound_exhaustive_3_3_1() {
        let ctx = ctx331();
        // l = (p^k+1)/2 = 2: the quadratic family of the bound's use-site.
        let report = weil_bound_check(&ctx, 2, SampleMode::Exhaustive).unwrap();
        assert!(report.holds(), "{report:?}");
        assert_eq!(report.pairs_checked, 26 * 27);
        assert_eq!(report.bound_mag_sq4, 4 * 27);
        // The pure Gauss sum f = x² attains |v|² = 27 → the bound is tight.
        assert_eq!(report.max_mag_sq4, 4 * 27);
        // Degree 1: every non-degenerate sum is exactly zero.
        let linear = weil_bound_check(&ctx, 1, SampleMode::Exhaustive).unwrap();
        assert_eq!(linear.max_mag_sq4, 0);
        assert_eq!(linear.skipped_degenerate, 26);
        // p | l is rejected.
        assert!(weil_bound_check(&ctx, 3, SampleMode::Exhaustive).is_err());
    }

    #[test]
    fn weil_bound_degree_choice_over_f343() {
        let ctx = FieldCtx::build(7, 3, 1).unwrap();
        // l = (p^k+1)/2 = 4 stays in Q(√p*): half the difference of two
        // quadratic-form sums. Sampled to keep the walk short.
        let mode = SampleMode::Sample { count: 2000, seed: 7 };
        let report = weil_bound_check(&ctx, 4, mode).unwrap();
        assert!(report.holds(), "{report:?}");
        assert_eq!(report.pairs_checked, 2000);
        assert_eq!(report.bound_mag_sq4, 4 * 9 * 343);
        // l = 2 leaves the quadratic subfield once p > 3: completing the
        // square strands an ω^{tr(−b²/4a)} factor outside Q(√−7).
        match weil_bound_check(&ctx, 2, SampleMode::Exhaustive) {
            Err(Error::NotInQuadraticSubfield) => {}
            other => panic!("expected NotInQuadraticSubfield, got {other:?}"),
        }
    }

    #[test]
    fn reduction_identities_hold_exhaustively() {
        let ctx = ctx331();
        let report = reduction_check(&ctx, SampleMode::Exhaustive).unwrap();
        assert_eq!(report.pairs_checked, 729);
        assert_eq!(report.mismatches, 0);
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = collect_pairs(27, SampleMode::Sample { count: 50, seed: 7 }, true);
        let b = collect_pairs(27, SampleMode::Sample { count: 50, seed: 7 }, true);
        assert_eq!(a, b);
        assert!(a.iter().all(|&(x, y)| (1..27).contains(&x) && y < 27));
        let c = collect_pairs(27, SampleMode::Sample { count: 50, seed: 8 }, true);
        assert_ne!(a, c, "different seeds must give different streams");
    }

    #[test]
    fn table_lookup_agrees_with_direct_sums() {
        let ctx = ctx331();
        let table = reduced_s_table(&ctx).unwrap();
        for ca in 0..ctx.params.order {
            for cb in 0..ctx.params.order {
                let a = ctx.from_code(ca).unwrap();
                let b = ctx.from_code(cb).unwrap();
                assert_eq!(
                    table.lookup(&ctx, a, b),
                    sab(&ctx, a, b).unwrap(),
                    "lookup mismatch at a={ca}, b={cb}"
                );
            }
        }
    }
}
