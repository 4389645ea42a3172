//! The acceptance gate: one test per numbered exit criterion, each running
//! over the full roster of desk-scale fields
//!
//!     (3,3,1) (3,3,3) (3,5,1) (3,5,5) (7,3,1) (7,3,3) (11,3,1) (3,9,3).
//!
//! Criterion 10 (byte-determinism of CLI output across thread counts) needs
//! the compiled binary and lives in the CLI crate's acceptance target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqspectra_core::charsum::QuadValue;
use seqspectra_core::code::{
    closed_form_weight_distribution, codeword, weight_distribution, weight_from_sum,
    weight_via_mu, WeightDistribution,
};
use seqspectra_core::expsum::{
    candidate_values, closed_form_distribution, distribution_from_table, moment_checks,
    reduced_s_table, sab, scan_reduced_columns, ReducedSTable, SampleMode,
};
use seqspectra_core::gf::FieldCtx;
use seqspectra_core::oracle::{default_tolerance, float_sab, naive_weight};
use seqspectra_core::quadform::{bluher_census, dual_path_check, n1_n2_census};
use seqspectra_core::seqfam::{correlation, expected_triple_count, family_spectrum, Scope};
use seqspectra_core::ValueDistribution;
use std::collections::BTreeMap;
use std::sync::LazyLock;

const FIELDS: [(u64, u32, u32); 8] =
    [(3, 3, 1), (3, 3, 3), (3, 5, 1), (3, 5, 5), (7, 3, 1), (7, 3, 3), (11, 3, 1), (3, 9, 3)];

struct Shared {
    ctx: FieldCtx,
    table: ReducedSTable,
    brute: ValueDistribution,
}

static SHARED: LazyLock<Vec<Shared>> = LazyLock::new(|| {
    FIELDS
        .iter()
        .map(|&(p, n, k)| {
            let ctx = FieldCtx::build(p, n, k).expect("roster fields are valid");
            let table = reduced_s_table(&ctx).expect("table fits the cap");
            let brute = distribution_from_table(&ctx, &table);
            Shared { ctx, table, brute }
        })
        .collect()
});

fn label(ctx: &FieldCtx) -> String {
    format!("({}, {}, {})", ctx.params.p, ctx.params.n, ctx.params.k)
}

#[test]
fn criterion_01_value_distribution_matches_closed_form() {
    for sh in SHARED.iter() {
        let params = &sh.ctx.params;
        let closed = closed_form_distribution(params).unwrap();
        assert_eq!(
            sh.brute.without_zero_rows().rows,
            closed.without_zero_rows().rows,
            "value distribution split from closed form on {}",
            label(&sh.ctx)
        );
        let q = params.order as i128;
        assert_eq!(sh.brute.total(), q * q, "row counts must cover all pairs");
    }

    // The smallest field, frozen row by row.
    let frozen: BTreeMap<QuadValue, i128> = [
        (QuadValue::from_int(27), 1),
        (QuadValue::ZERO, 182),
        (QuadValue::from_doubled(0, 6), 13),
        (QuadValue::from_doubled(0, -6), 13),
        (QuadValue::from_doubled(9, 3), 156),
        (QuadValue::from_doubled(9, -3), 156),
        (QuadValue::from_doubled(-9, 3), 78),
        (QuadValue::from_doubled(-9, -3), 78),
        (QuadValue::from_doubled(0, 12), 26),
        (QuadValue::from_doubled(0, -12), 26),
    ]
    .into();
    assert_eq!(SHARED[0].brute.rows, frozen);
}

#[test]
fn criterion_02_weight_distribution_matches_closed_form_and_naive_counts() {
    for sh in SHARED.iter() {
        let params = &sh.ctx.params;
        // Observed distribution: the shared S-distribution pushed through
        // the weight map.
        let mut rows: BTreeMap<u64, u128> = BTreeMap::new();
        for (&v, &count) in &sh.brute.rows {
            *rows.entry(weight_from_sum(params, v).unwrap()).or_insert(0) += count as u128;
        }
        let observed = WeightDistribution { rows };
        let closed = closed_form_weight_distribution(params).unwrap();
        assert_eq!(
            observed.without_zero_rows(),
            closed.without_zero_rows(),
            "weight distribution split from closed form on {}",
            label(&sh.ctx)
        );
        assert_eq!(observed.count_at(0), 1, "only the zero pair has weight 0");
        assert_eq!(observed.total(), (params.order as u128).pow(2));
    }

    // The shipped end-to-end function agrees with the composition above.
    let lib = weight_distribution(&SHARED[0].ctx).unwrap();
    let frozen: BTreeMap<u64, u128> = [(0, 1), (15, 312), (18, 260), (21, 156)].into();
    assert_eq!(lib.rows, frozen);

    // Per-codeword: the μ-route weight equals literal symbol counting for
    // every single pair on the two smallest mixed-parameter fields.
    for &(p, n, k) in &[(3u64, 3u32, 1u32), (7, 3, 1)] {
        let ctx = FieldCtx::build(p, n, k).unwrap();
        for ca in 0..ctx.params.order {
            for cb in 0..ctx.params.order {
                let a = ctx.from_code(ca).unwrap();
                let b = ctx.from_code(cb).unwrap();
                assert_eq!(
                    weight_via_mu(&ctx, a, b).unwrap(),
                    naive_weight(&codeword(&ctx, a, b)),
                    "weight disagreement at ({ca}, {cb}) on ({p}, {n}, {k})"
                );
            }
        }
    }
}

#[test]
fn criterion_03_sums_stay_on_the_candidate_list() {
    for sh in SHARED.iter() {
        let params = &sh.ctx.params;
        let candidates = candidate_values(params);
        assert_eq!(candidates.len(), 10);
        assert!(candidates.windows(2).all(|w| w[0] < w[1]), "sorted and distinct");

        // Scan the whole reduced table: membership in the candidate set,
        // absence of the two excluded values away from the zero columns,
        // and the magnitude cap.
        let scan = scan_reduced_columns(params, &sh.table);
        assert!(
            scan.ok(),
            "reduced-table scan failed on {}: {scan:?}",
            label(&sh.ctx)
        );

        // Every realized value — zero columns included — is a candidate.
        for (&v, &count) in &sh.brute.rows {
            if count > 0 {
                assert!(
                    candidates.binary_search(&v).is_ok(),
                    "realized value {v:?} off the candidate list on {}",
                    label(&sh.ctx)
                );
            }
        }
    }
}

#[test]
fn criterion_04_quadratic_split_agrees_with_direct_sums() {
    for sh in SHARED.iter() {
        let params = &sh.ctx.params;
        let exhaustive = (params.p, params.n, params.k) == (3, 3, 1)
            || (params.p, params.n, params.k) == (7, 3, 1);
        let mode = if exhaustive {
            SampleMode::Exhaustive
        } else {
            SampleMode::Sample { count: 10_000, seed: 0x5eed }
        };
        let report = dual_path_check(&sh.ctx, mode).unwrap();
        assert!(report.ok(), "dual-path failure on {}: {report:?}", label(&sh.ctx));
        let expected_pairs =
            if exhaustive { params.order * params.order } else { 10_000 };
        assert_eq!(report.pairs_checked, expected_pairs);
    }
}

#[test]
fn criterion_05_kernel_census_matches_the_closed_counts() {
    for sh in SHARED.iter() {
        let census = n1_n2_census(&sh.ctx);
        assert!(census.ok(), "kernel census failed on {}: {census:?}", label(&sh.ctx));
        assert_eq!(census.invalid_kernels, 0, "kernel sizes confined to 1, p^k, p^{{2k}}");
        assert_eq!(census.both_nontrivial, 0, "at least one sign stays trivial per pair");
    }
    let smallest = n1_n2_census(&SHARED[0].ctx);
    assert_eq!((smallest.n1, smallest.n2), (468, 52));
}

#[test]
fn criterion_06_projective_root_census_matches_the_formulas() {
    for sh in SHARED.iter() {
        for s in 1..sh.ctx.params.n {
            let census = bluher_census(&sh.ctx, s);
            assert!(
                census.ok(),
                "root census failed on {} at s = {s}: {census:?}",
                label(&sh.ctx)
            );
            assert_eq!(census.root_condition_violations, 0);
        }
    }

    // Both (3, 3, ·) fields at s = 1: exactly nine ψ with a unique root and
    // exactly one ψ with p + 1 = 4 roots.
    for sh in &SHARED[0..2] {
        let census = bluher_census(&sh.ctx, 1);
        assert_eq!(census.histogram.get(&1), Some(&9));
        assert_eq!(census.histogram.get(&4), Some(&1));
    }
}

#[test]
fn criterion_07_correlation_bound_holds_with_exact_arithmetic() {
    // (3, 3, 1): literally every ordered pair and every shift, in-phase
    // autocorrelation excluded, tallied directly from the sequences.
    let ctx = &SHARED[0].ctx;
    let bound = 436i128;
    let mut max_seen = 0i128;
    let mut triples = 0u128;
    for cb1 in 0..ctx.params.order {
        for cb2 in 0..ctx.params.order {
            for tau in 0..ctx.params.period {
                if cb1 == cb2 && tau == 0 {
                    continue;
                }
                let b1 = ctx.from_code(cb1).unwrap();
                let b2 = ctx.from_code(cb2).unwrap();
                let c = correlation(ctx, b1, b2, tau).unwrap();
                max_seen = max_seen.max(c.mag_sq_times4(ctx.params.p));
                triples += 1;
            }
        }
    }
    assert!(max_seen <= bound, "4|C|² reached {max_seen} > {bound}");
    assert_eq!(max_seen, bound, "the cap is attained on this field");
    assert_eq!(triples, 27 * 27 * 26 - 27);

    // The assembled spectra agree scope by scope.
    for scope in [Scope::AllShifts, Scope::DistinctPairs, Scope::OutOfPhaseAuto] {
        let spec = family_spectrum(ctx, scope).unwrap();
        assert!(spec.bound_holds());
        assert_eq!(spec.bound_sq_times4, bound);
        assert_eq!(spec.total(), expected_triple_count(scope, &ctx.params));
        assert!(spec.keys_are_shifted_candidates(&ctx.params));
    }

    // (3, 5, 1) through the reduced path: 4|C|² ≤ 4 + 16·243 = 3892.
    let ctx5 = &SHARED[2].ctx;
    let spec5 = family_spectrum(ctx5, Scope::AllShifts).unwrap();
    assert_eq!(spec5.bound_sq_times4, 3892);
    assert!(spec5.bound_holds());
    assert_eq!(spec5.max_observed_sq_times4, 3892, "the cap is attained here too");
    assert_eq!(spec5.total(), expected_triple_count(Scope::AllShifts, &ctx5.params));
}

#[test]
fn criterion_08_moment_identities_hold_exactly() {
    for sh in SHARED.iter() {
        let report = moment_checks(&sh.brute, &sh.ctx.params);
        assert!(report.all_ok(), "moment identities failed on {}: {report:?}", label(&sh.ctx));
    }
}

#[test]
fn criterion_09_float_oracle_agrees_with_exact_sums() {
    for sh in SHARED.iter() {
        let params = &sh.ctx.params;
        let tol = default_tolerance(params);
        let mut rng = ChaCha8Rng::seed_from_u64(0x0ac1e);
        for _ in 0..1000 {
            let ca = rng.random_range(0..params.order);
            let cb = rng.random_range(0..params.order);
            let a = sh.ctx.from_code(ca).unwrap();
            let b = sh.ctx.from_code(cb).unwrap();
            let exact = sab(&sh.ctx, a, b).unwrap();
            let float = float_sab(&sh.ctx, a, b);
            assert!(
                float.agrees_with(exact, params.p, tol),
                "float/exact split at ({ca}, {cb}) on {}: {exact:?} vs {float:?}",
                label(&sh.ctx)
            );
        }
    }
}
