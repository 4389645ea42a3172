//! Independent verification paths: floating-point character sums and direct
//! brute-force recomputation.
//!
//! Everything in this module deliberately avoids the exact machinery it is
//! used to check. The float sums embody the character χ(x) = ω^{tr(x)}
//! numerically with ω = e^{2πi/p} and the principal branch √p* = +i√p, so an
//! exact value (A + B√p*)/2 and its float counterpart can be compared as
//! complex numbers. Magnitudes here are at most p^n while f64 carries ~15–16
//! significant digits, so at desk scale the two paths agree to far better
//! than the tolerance 10⁻⁶·p^{n/2} used by the verification suites.

use crate::charsum::{QuadValue, ValueDistribution};
use crate::code::Codeword;
use crate::expsum::sab;
use crate::error::Result;
use crate::gf::{FieldCtx, FieldElement, FieldParams};
use std::f64::consts::TAU;

/// A numerically evaluated character sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatSum {
    pub re: f64,
    pub im: f64,
}

impl FloatSum {
    pub fn magnitude(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Distance to an exact value embedded at the same prime.
    pub fn distance_to(self, v: QuadValue, p: u64) -> f64 {
        let (re, im) = v.to_complex(p);
        (self.re - re).hypot(self.im - im)
    }

    pub fn agrees_with(self, v: QuadValue, p: u64, tol: f64) -> bool {
        self.distance_to(v, p) <= tol
    }
}

/// The comparison tolerance 10⁻⁶·p^{n/2}: proportional to the Weil-scale
/// magnitude of the sums, and many orders of magnitude above the actual f64
/// rounding error at any field size the tables admit.
pub fn default_tolerance(params: &FieldParams) -> f64 {
    1e-6 * (params.order as f64).sqrt()
}

/// Σ_x e^{2πi·f(x)/p} over the whole field, with f giving the ω-exponent of
/// each element (anything ≥ p is reduced).
pub fn float_char_sum(ctx: &FieldCtx, f: impl Fn(FieldElement) -> u64) -> FloatSum {
    let p = ctx.params.p;
    let mut cos = vec![0.0f64; p as usize];
    let mut sin = vec![0.0f64; p as usize];
    for (t, (c, s)) in cos.iter_mut().zip(sin.iter_mut()).enumerate() {
        let angle = TAU * t as f64 / p as f64;
        *c = angle.cos();
        *s = angle.sin();
    }
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for code in 0..ctx.params.order {
        let x = ctx.from_code(code).expect("codes below the order are valid");
        let t = (f(x) % p) as usize;
        re += cos[t];
        im += sin[t];
    }
    FloatSum { re, im }
}

/// S(a, b) recomputed numerically: Σ_x e^{2πi·tr(ax + bx^d)/p}.
pub fn float_sab(ctx: &FieldCtx, a: FieldElement, b: FieldElement) -> FloatSum {
    let d = ctx.params.d;
    float_char_sum(ctx, |x| {
        let ax = ctx.mul(a, x);
        let bxd = ctx.mul(b, ctx.pow(x, d));
        ctx.trace_to_int(ctx.add(ax, bxd))
    })
}

/// Every root of an arbitrary field-valued map, found by scanning all p^n
/// elements.
pub fn exhaustive_roots(ctx: &FieldCtx, f: impl Fn(FieldElement) -> FieldElement) -> Vec<FieldElement> {
    (0..ctx.params.order)
        .filter_map(|code| {
            let x = ctx.from_code(code).expect("codes below the order are valid");
            if f(x) == FieldElement::ZERO {
                Some(x)
            } else {
                None
            }
        })
        .collect()
}

/// Hamming weight by literally counting nonzero symbols.
pub fn naive_weight(cw: &Codeword) -> u64 {
    cw.symbols.iter().filter(|&&s| s != 0).count() as u64
}

/// The S-value distribution recomputed pair by pair, with no reuse of the
/// reduced one-parameter table.
pub fn naive_value_distribution(ctx: &FieldCtx) -> Result<ValueDistribution> {
    let mut dist = ValueDistribution::new(ctx.params.p);
    for ca in 0..ctx.params.order {
        for cb in 0..ctx.params.order {
            let a = ctx.from_code(ca)?;
            let b = ctx.from_code(cb)?;
            dist.bump(sab(ctx, a, b)?, 1);
        }
    }
    Ok(dist)
}
