//! Command-line front-end: exact exponential-sum distributions, sequence
//! correlation spectra, cyclic-code weight distributions, and a named-check
//! verification suite, serialized bit-deterministically as JSON or CSV.
//!
//! Exit codes: 0 success, 2 invalid input, 3 verification mismatch.
//!
//! Serialization rules (documented in the README): structural integers
//! (p, n, k, e, modulus coefficients) are JSON numbers; every derived or
//! potentially large integer (d, orders, counts, weights, value parts,
//! squared magnitudes) is a decimal string, so consumers that read JSON
//! numbers as f64 never lose digits. Map-like rows are emitted sorted by
//! their natural key — (twoA, twoB) for values, the weight for weights —
//! and all reductions are exact, so output bytes do not depend on the
//! thread count.

use clap::{Args, Parser, Subcommand, ValueEnum};
use seqspectra_core::charsum::QuadValue;
use seqspectra_core::code::{
    closed_form_weight_distribution, dimension_check, weight_distribution, weight_from_sum,
};
use seqspectra_core::expsum::{
    closed_form_distribution, distribution_from_table, moment_checks, reduced_s_table,
    reduction_check, scan_reduced_columns, weil_bound_check, SampleMode,
};
use seqspectra_core::gf::DEFAULT_TABLE_CAP;
use seqspectra_core::quadform::{bluher_census, dual_path_check, n1_n2_census};
use seqspectra_core::seqfam::{expected_triple_count, family_spectrum, Scope};
use seqspectra_core::{Error, FieldCtx, Result};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "seqspectra",
    version,
    about = "Exact exponential-sum value distributions, sequence-family correlation spectra, \
             and cyclic-code weight distributions over F_{p^n}, p ≡ 3 (mod 4)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print field parameters, the defining modulus, and validation results
    FieldInfo(CommonArgs),
    /// Value distribution of S(a,b): brute force against the closed form
    Vdist(CommonArgs),
    /// Correlation spectrum of the sequence family, with the magnitude bound
    Family(FamilyArgs),
    /// Weight distribution of the cyclic code against the closed form
    CodeWeights(CommonArgs),
    /// Run every named verification check for one field
    Verify(CommonArgs),
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::FieldInfo(c)
            | Command::Vdist(c)
            | Command::CodeWeights(c)
            | Command::Verify(c) => c,
            Command::Family(f) => &f.common,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Characteristic: a prime ≡ 3 (mod 4)
    #[arg(long)]
    p: u64,
    /// Extension degree (odd)
    #[arg(long)]
    n: u32,
    /// Intermediate degree (divides n, with n/k odd)
    #[arg(long)]
    k: u32,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    threads: Option<usize>,
    /// Table cap: reject fields with p^n above this
    #[arg(long)]
    cap: Option<u64>,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Which (β₁, β₂, τ) triples to aggregate
    #[arg(long, value_enum, default_value_t = ScopeArg::AllShifts)]
    scope: ScopeArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    /// Ordered pairs β₁ ≠ β₂, every shift
    DistinctPairs,
    /// Every ordered pair and every shift (in-phase autocorrelation excluded)
    AllShifts,
    /// Autocorrelations only, τ ≠ 0
    OutOfPhaseAuto,
}

impl ScopeArg {
    fn to_scope(self) -> Scope {
        match self {
            ScopeArg::DistinctPairs => Scope::DistinctPairs,
            ScopeArg::AllShifts => Scope::AllShifts,
            ScopeArg::OutOfPhaseAuto => Scope::OutOfPhaseAuto,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ScopeArg::DistinctPairs => "distinct-pairs",
            ScopeArg::AllShifts => "all-shifts",
            ScopeArg::OutOfPhaseAuto => "out-of-phase-auto",
        }
    }
}

/// Rendered output plus whether every comparison in it passed.
struct Rendered {
    text: String,
    pass: bool,
}

fn main() {
    let cli = Cli::parse();
    let common = cli.command.common();
    let out_path = common.out.clone();
    match execute(&cli.command) {
        Ok(rendered) => {
            if let Some(path) = out_path {
                if let Err(e) = std::fs::write(&path, rendered.text.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(1);
                }
            } else {
                print!("{}", rendered.text);
            }
            std::process::exit(if rendered.pass { 0 } else { 3 });
        }
        Err(e @ (Error::InvalidParams(_) | Error::CapExceeded { .. })) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
        Err(e) => {
            // Any other library error means an exactness invariant broke
            // mid-computation — report it as a verification failure.
            eprintln!("verification error: {e}");
            std::process::exit(3);
        }
    }
}

fn execute(command: &Command) -> Result<Rendered> {
    let common = command.common();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    let cap = common.cap.unwrap_or(DEFAULT_TABLE_CAP);
    let ctx = FieldCtx::build_with_cap(common.p, common.n, common.k, cap)?;
    pool.install(|| match command {
        Command::FieldInfo(c) => cmd_field_info(&ctx, c.format),
        Command::Vdist(c) => cmd_vdist(&ctx, c.format),
        Command::Family(f) => cmd_family(&ctx, f.common.format, f.scope),
        Command::CodeWeights(c) => cmd_code_weights(&ctx, c.format),
        Command::Verify(c) => cmd_verify(&ctx, c.format),
    })
}

// ----- field-info --------------------------------------------------------

#[derive(Serialize)]
struct FieldInfoOut {
    p: u64,
    n: u32,
    k: u32,
    e: u32,
    d: String,
    order: String,
    period: String,
    /// Defining modulus coefficients, constant term first, monic.
    modulus: Vec<u64>,
    /// Code of the primitive element α (the class of x).
    #[serde(rename = "alphaCode")]
    alpha_code: String,
    #[serde(rename = "gcdDN")]
    gcd_d_n: String,
    /// d·(p^k+1) mod N — must be 2.
    #[serde(rename = "dPk1ModN")]
    d_pk1_mod_n: String,
    valid: bool,
}

fn cmd_field_info(ctx: &FieldCtx, format: Format) -> Result<Rendered> {
    let params = &ctx.params;
    let pk1 = params.subfield_order() as u128 + 1;
    let out = FieldInfoOut {
        p: params.p,
        n: params.n,
        k: params.k,
        e: params.e,
        d: params.d.to_string(),
        order: params.order.to_string(),
        period: params.period.to_string(),
        modulus: ctx.modulus.clone(),
        alpha_code: ctx.alpha().code().to_string(),
        gcd_d_n: num_gcd(params.d, params.period).to_string(),
        d_pk1_mod_n: (params.d as u128 * pk1 % params.period as u128).to_string(),
        valid: params.validate().is_ok(),
    };
    let text = match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let mut t = String::from("key,value\n");
            let modulus =
                out.modulus.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            for (key, value) in [
                ("p", out.p.to_string()),
                ("n", out.n.to_string()),
                ("k", out.k.to_string()),
                ("e", out.e.to_string()),
                ("d", out.d),
                ("order", out.order),
                ("period", out.period),
                ("modulus", modulus),
                ("alphaCode", out.alpha_code),
                ("gcdDN", out.gcd_d_n),
                ("dPk1ModN", out.d_pk1_mod_n),
                ("valid", out.valid.to_string()),
            ] {
                writeln!(t, "{key},{value}").expect("string write");
            }
            t
        }
    };
    Ok(Rendered { text, pass: true })
}

fn num_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

// ----- vdist --------------------------------------------------------------

#[derive(Serialize)]
struct VdistRow {
    #[serde(rename = "twoA")]
    two_a: String,
    #[serde(rename = "twoB")]
    two_b: String,
    re: f64,
    im: f64,
    count_bruteforce: String,
    count_closedform: String,
    #[serde(rename = "match")]
    matches: bool,
}

#[derive(Serialize)]
struct MomentsOut {
    expected: String,
    count: String,
    #[serde(rename = "countOk")]
    count_ok: bool,
    #[serde(rename = "firstOk")]
    first_ok: bool,
    #[serde(rename = "secondOk")]
    second_ok: bool,
    #[serde(rename = "conjugationSymmetric")]
    conjugation_symmetric: bool,
}

#[derive(Serialize)]
struct VdistOut {
    p: u64,
    n: u32,
    k: u32,
    rows: Vec<VdistRow>,
    moments: MomentsOut,
    #[serde(rename = "allMatch")]
    all_match: bool,
}

fn cmd_vdist(ctx: &FieldCtx, format: Format) -> Result<Rendered> {
    let params = &ctx.params;
    let table = reduced_s_table(ctx)?;
    let brute = distribution_from_table(ctx, &table);
    let closed = closed_form_distribution(params)?;
    let moments = moment_checks(&brute, params);

    let keys: BTreeSet<QuadValue> =
        brute.rows.keys().chain(closed.rows.keys()).copied().collect();
    let rows: Vec<VdistRow> = keys
        .into_iter()
        .map(|v| {
            let bc = brute.rows.get(&v).copied().unwrap_or(0);
            let cc = closed.rows.get(&v).copied().unwrap_or(0);
            let (re, im) = v.to_complex(params.p);
            VdistRow {
                two_a: v.two_a.to_string(),
                two_b: v.two_b.to_string(),
                re,
                im,
                count_bruteforce: bc.to_string(),
                count_closedform: cc.to_string(),
                matches: bc == cc,
            }
        })
        .collect();

    let all_match = rows.iter().all(|r| r.matches) && moments.all_ok();
    let out = VdistOut {
        p: params.p,
        n: params.n,
        k: params.k,
        rows,
        moments: MomentsOut {
            expected: moments.expected.to_string(),
            count: moments.count.to_string(),
            count_ok: moments.count_ok(),
            first_ok: moments.first_ok(),
            second_ok: moments.second_ok(),
            conjugation_symmetric: moments.conjugation_symmetric,
        },
        all_match,
    };
    let text = match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let mut t = String::from("twoA,twoB,re,im,count_bruteforce,count_closedform,match\n");
            for r in &out.rows {
                writeln!(
                    t,
                    "{},{},{},{},{},{},{}",
                    r.two_a, r.two_b, r.re, r.im, r.count_bruteforce, r.count_closedform,
                    r.matches
                )
                .expect("string write");
            }
            t
        }
    };
    Ok(Rendered { text, pass: all_match })
}

// ----- family ---------------------------------------------------------------

#[derive(Serialize)]
struct FamilyRow {
    #[serde(rename = "twoA")]
    two_a: String,
    #[serde(rename = "twoB")]
    two_b: String,
    count: String,
}

#[derive(Serialize)]
struct FamilyOut {
    p: u64,
    n: u32,
    k: u32,
    scope: &'static str,
    #[serde(rename = "boundSquaredTimes4")]
    bound_sq_times4: String,
    #[serde(rename = "maxObservedSquaredTimes4")]
    max_observed_sq_times4: String,
    #[serde(rename = "totalTriples")]
    total_triples: String,
    #[serde(rename = "boundHolds")]
    bound_holds: bool,
    rows: Vec<FamilyRow>,
}

fn cmd_family(ctx: &FieldCtx, format: Format, scope: ScopeArg) -> Result<Rendered> {
    let params = &ctx.params;
    let spectrum = family_spectrum(ctx, scope.to_scope())?;
    let rows: Vec<FamilyRow> = spectrum
        .rows
        .iter()
        .map(|(v, c)| FamilyRow {
            two_a: v.two_a.to_string(),
            two_b: v.two_b.to_string(),
            count: c.to_string(),
        })
        .collect();
    let pass = spectrum.bound_holds()
        && spectrum.total() == expected_triple_count(scope.to_scope(), params)
        && spectrum.keys_are_shifted_candidates(params);
    let out = FamilyOut {
        p: params.p,
        n: params.n,
        k: params.k,
        scope: scope.name(),
        bound_sq_times4: spectrum.bound_sq_times4.to_string(),
        max_observed_sq_times4: spectrum.max_observed_sq_times4.to_string(),
        total_triples: spectrum.total().to_string(),
        bound_holds: spectrum.bound_holds(),
        rows,
    };
    let text = match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let mut t = String::from("twoA,twoB,count\n");
            for r in &out.rows {
                writeln!(t, "{},{},{}", r.two_a, r.two_b, r.count).expect("string write");
            }
            t
        }
    };
    Ok(Rendered { text, pass })
}

// ----- code-weights --------------------------------------------------------

#[derive(Serialize)]
struct WeightRow {
    weight: String,
    count_bruteforce: String,
    count_closedform: String,
    #[serde(rename = "match")]
    matches: bool,
}

#[derive(Serialize)]
struct WeightsOut {
    p: u64,
    n: u32,
    k: u32,
    total: String,
    #[serde(rename = "allMatch")]
    all_match: bool,
    rows: Vec<WeightRow>,
}

fn cmd_code_weights(ctx: &FieldCtx, format: Format) -> Result<Rendered> {
    let params = &ctx.params;
    let observed = weight_distribution(ctx)?;
    let closed = closed_form_weight_distribution(params)?;
    let keys: BTreeSet<u64> = observed.rows.keys().chain(closed.rows.keys()).copied().collect();
    let rows: Vec<WeightRow> = keys
        .into_iter()
        .map(|w| {
            let oc = observed.count_at(w);
            let cc = closed.count_at(w);
            WeightRow {
                weight: w.to_string(),
                count_bruteforce: oc.to_string(),
                count_closedform: cc.to_string(),
                matches: oc == cc,
            }
        })
        .collect();
    let total = observed.total();
    let all_match =
        rows.iter().all(|r| r.matches) && total == (params.order as u128).pow(2);
    let out = WeightsOut {
        p: params.p,
        n: params.n,
        k: params.k,
        total: total.to_string(),
        all_match,
        rows,
    };
    let text = match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let mut t = String::from("weight,count_bruteforce,count_closedform,match\n");
            for r in &out.rows {
                writeln!(
                    t,
                    "{},{},{},{}",
                    r.weight, r.count_bruteforce, r.count_closedform, r.matches
                )
                .expect("string write");
            }
            t
        }
    };
    Ok(Rendered { text, pass: all_match })
}

// ----- verify ----------------------------------------------------------------

#[derive(Serialize)]
struct CheckOut {
    name: &'static str,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyOut {
    p: u64,
    n: u32,
    k: u32,
    /// "exhaustive" or "sampled", for the pair-indexed checks.
    mode: &'static str,
    #[serde(rename = "allPass")]
    all_pass: bool,
    checks: Vec<CheckOut>,
}

/// Pair-indexed checks switch from every pair to 10⁴ seeded samples once the
/// field outgrows a desk-scale exhaustive sweep.
const EXHAUSTIVE_ORDER_LIMIT: u64 = 1000;
const SAMPLE_COUNT: u64 = 10_000;
const SAMPLE_SEED: u64 = 0x5eed;

fn cmd_verify(ctx: &FieldCtx, format: Format) -> Result<Rendered> {
    let params = &ctx.params;
    let exhaustive = params.order <= EXHAUSTIVE_ORDER_LIMIT;
    let mode = if exhaustive {
        SampleMode::Exhaustive
    } else {
        SampleMode::Sample { count: SAMPLE_COUNT, seed: SAMPLE_SEED }
    };

    let table = reduced_s_table(ctx)?;
    let brute = distribution_from_table(ctx, &table);
    let mut checks = Vec::new();

    checks.push(CheckOut {
        name: "field_invariants",
        pass: params.validate().is_ok(),
        detail: format!("d = {}, gcd(d, N) = 2, d(p^k+1) ≡ 2 (mod N)", params.d),
    });

    // a·x^{(p^k+1)/2} + b·x is half the difference of two quadratic-form
    // sums, so it stays in Q(√p*) for every p; lower degrees do not once
    // p^k > 3.
    let weil_degree = (params.subfield_order() + 1) / 2;
    let weil = weil_bound_check(ctx, weil_degree, mode)?;
    checks.push(CheckOut {
        name: "weil_bound",
        pass: weil.holds(),
        detail: format!(
            "degree {weil_degree}: max 4|Σ|² = {} ≤ {} over {} pairs",
            weil.max_mag_sq4, weil.bound_mag_sq4, weil.pairs_checked
        ),
    });

    let census = n1_n2_census(ctx);
    checks.push(CheckOut {
        name: "kernel_trivial",
        pass: census.both_nontrivial == 0 && census.invalid_kernels == 0,
        detail: format!(
            "pairs with both radicals nontrivial: {}, invalid kernel sizes: {}",
            census.both_nontrivial, census.invalid_kernels
        ),
    });

    let scan = scan_reduced_columns(params, &table);
    checks.push(CheckOut {
        name: "excluded_values",
        pass: scan.ok(),
        detail: format!(
            "off-candidate: {}, excluded hits: {}, max 4|S|² = {} ≤ {}",
            scan.off_candidate, scan.excluded_hits, scan.max_mag_sq4, scan.mag_bound4
        ),
    });

    let mut root_ok = true;
    let mut root_detail = String::new();
    for s in 1..params.n {
        let rc = bluher_census(ctx, s);
        let ok = rc.ok() && rc.root_condition_violations == 0;
        root_ok &= ok;
        if !ok {
            write!(root_detail, "s = {s} failed; ").expect("string write");
        }
    }
    if root_ok {
        write!(root_detail, "all s in 1..{} match the class counts", params.n)
            .expect("string write");
    }
    checks.push(CheckOut { name: "root_census", pass: root_ok, detail: root_detail });

    checks.push(CheckOut {
        name: "kernel_census",
        pass: census.ok(),
        detail: format!(
            "N1 = {} (expected {}), N2 = {} (expected {})",
            census.n1, census.expected_n1, census.n2, census.expected_n2
        ),
    });

    let dual = dual_path_check(ctx, mode)?;
    checks.push(CheckOut {
        name: "dual_path",
        pass: dual.ok(),
        detail: format!("{} pairs, {} mismatches", dual.pairs_checked, dual.mismatches),
    });

    let reduction = reduction_check(ctx, mode)?;
    checks.push(CheckOut {
        name: "reduction_identity",
        pass: reduction.mismatches == 0 && reduction.pairs_checked > 0,
        detail: format!(
            "{} pairs, {} mismatches",
            reduction.pairs_checked, reduction.mismatches
        ),
    });

    let moments = moment_checks(&brute, params);
    checks.push(CheckOut {
        name: "moment_identities",
        pass: moments.all_ok(),
        detail: format!(
            "count {}, first ({} + {}√p*)/2, second ({} + {}√p*)/2, expected {}",
            moments.count,
            moments.first.two_a,
            moments.first.two_b,
            moments.second.two_a,
            moments.second.two_b,
            moments.expected
        ),
    });

    let mu_bad = brute
        .rows
        .keys()
        .filter(|&&v| weight_from_sum(params, v).is_err())
        .count();
    checks.push(CheckOut {
        name: "mu_integrality",
        pass: mu_bad == 0,
        detail: format!(
            "{} of {} realized values map to non-integer weights",
            mu_bad,
            brute.rows.len()
        ),
    });

    let dim_ok = dimension_check(ctx);
    checks.push(CheckOut {
        name: "dimension",
        pass: dim_ok,
        detail: format!("generator matrix rank = 2n = {}", 2 * params.n),
    });

    let all_pass = checks.iter().all(|c| c.pass);
    let out = VerifyOut {
        p: params.p,
        n: params.n,
        k: params.k,
        mode: if exhaustive { "exhaustive" } else { "sampled" },
        all_pass,
        checks,
    };
    let text = match format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let mut t = String::from("check,pass\n");
            for c in &out.checks {
                writeln!(t, "{},{}", c.name, c.pass).expect("string write");
            }
            t
        }
    };
    Ok(Rendered { text, pass: all_pass })
}

// ----- shared rendering -----------------------------------------------------

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output structs serialize");
    text.push('\n');
    text
}
