//! The finite field tower F_p ⊂ F_{p^k} ⊂ F_{p^n} with full log/antilog
//! tables.
//!
//! Parameters are constrained to the regime the sums live in: p prime with
//! p ≡ 3 (mod 4), n odd, k | n (so e = n/k is odd), and the decimation
//! d = (p^n+1)/(p^k+1) + (p^n−1)/2, which satisfies gcd(d, p^n−1) = 2 and
//! d·(p^k+1) ≡ 2 (mod p^n−1). Both derived invariants are re-verified at
//! construction time rather than trusted.
//!
//! Elements are stored as the canonical integer code Σ c_i p^i of their
//! coefficient vector over F_p in the polynomial basis (1, α, …, α^{n−1}),
//! where α is the class of x modulo the defining polynomial. The modulus is
//! deterministic: the monic degree-n polynomial with the smallest base-p
//! integer encoding that is irreducible *and* has x primitive. Both
//! properties fall out of a single test — the multiplicative order of x in
//! F_p[x]/(f) equals p^n − 1 — because a reducible f has a unit group of
//! order strictly below p^n − 1.

use crate::error::{Error, Result};
use crate::linalg::{mod_pow, ModMatrix};

/// Default ceiling on p^n. The exp/log/trace tables are three u32 vectors of
/// that length, so 2^26 keeps a context under a gigabyte at the very worst.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 26;

/// Validated field parameters plus the constants derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldParams {
    pub p: u64,
    pub n: u32,
    pub k: u32,
    /// Extension degree of F_{p^n} over F_{p^k}: e = n/k (always odd).
    pub e: u32,
    /// The decimation d = (p^n+1)/(p^k+1) + (p^n−1)/2.
    pub d: u64,
    /// p^n.
    pub order: u64,
    /// p^n − 1, the order of the multiplicative group.
    pub period: u64,
}

impl FieldParams {
    /// Validate (p, n, k) and derive the rest, honoring the default cap.
    pub fn new(p: u64, n: u32, k: u32) -> Result<Self> {
        Self::with_cap(p, n, k, DEFAULT_TABLE_CAP)
    }

    pub fn with_cap(p: u64, n: u32, k: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} is not prime")));
        }
        if p % 4 != 3 {
            return Err(Error::InvalidParams(format!("p = {p} ≢ 3 (mod 4)")));
        }
        if n == 0 || n % 2 == 0 {
            return Err(Error::InvalidParams(format!("n = {n} must be odd")));
        }
        if k == 0 || n % k != 0 {
            return Err(Error::InvalidParams(format!("k = {k} must divide n = {n}")));
        }
        let order = checked_pow(p, n).ok_or(Error::CapExceeded {
            order: (p as u128).pow(n),
            cap,
        })?;
        if order > cap {
            return Err(Error::CapExceeded { order: order as u128, cap });
        }
        let pk = checked_pow(p, k).expect("p^k <= p^n");
        if (order + 1) % (pk + 1) != 0 {
            // Unreachable for odd e; kept as a real check, not an assumption.
            return Err(Error::InvalidParams(format!(
                "p^k+1 = {} does not divide p^n+1 = {}",
                pk + 1,
                order + 1
            )));
        }
        let d = (order + 1) / (pk + 1) + (order - 1) / 2;
        let params = FieldParams { p, n, k, e: n / k, d, order, period: order - 1 };
        params.validate()?;
        Ok(params)
    }

    /// Re-verify every derived invariant. Separated from construction so a
    /// corrupted value (bit flip, bad deserialization) is caught before any
    /// computation trusts it.
    pub fn validate(&self) -> Result<()> {
        let pk = checked_pow(self.p, self.k)
            .ok_or_else(|| Error::InvalidParams("p^k overflows".into()))?;
        if self.e != self.n / self.k || self.e % 2 == 0 {
            return Err(Error::InvalidParams(format!("e = {} is not odd n/k", self.e)));
        }
        if Some(self.order) != checked_pow(self.p, self.n) || self.period != self.order - 1 {
            return Err(Error::InvalidParams("order/period do not match p^n".into()));
        }
        let expected_d = (self.order + 1) / (pk + 1) + (self.order - 1) / 2;
        if self.d != expected_d {
            return Err(Error::InvalidParams(format!(
                "d = {} but (p^n+1)/(p^k+1) + (p^n−1)/2 = {expected_d}",
                self.d
            )));
        }
        if num_integer::gcd(self.d, self.period) != 2 {
            return Err(Error::InvalidParams(format!(
                "gcd(d, p^n−1) = {} ≠ 2",
                num_integer::gcd(self.d, self.period)
            )));
        }
        let lhs = (self.d as u128 * (pk + 1) as u128) % self.period as u128;
        if lhs != 2 % self.period as u128 {
            return Err(Error::InvalidParams(format!(
                "d(p^k+1) ≡ {lhs} (mod p^n−1), expected 2"
            )));
        }
        Ok(())
    }

    /// p^k as a u64.
    pub fn subfield_order(&self) -> u64 {
        checked_pow(self.p, self.k).expect("validated")
    }
}

/// An element of F_{p^n}, stored as its canonical code Σ c_i p^i < p^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A fully built field context: modulus, exp/log tables, the absolute-trace
/// table, and the change-of-basis solver for F_{p^k}-coordinates.
pub struct FieldCtx {
    pub params: FieldParams,
    /// Coefficients of the defining polynomial, ascending degree, monic.
    pub modulus: Vec<u64>,
    /// exp[i] = code of α^i for 0 ≤ i < p^n − 1.
    exp: Vec<u32>,
    /// log[code] = i with exp[i] = code; log[0] is a sentinel.
    log: Vec<u32>,
    /// trace_exp[i] = tr_1^n(α^i) as an integer in 0..p.
    trace_exp: Vec<u32>,
    /// frob_step[j] = p^j mod (p^n − 1) for 0 ≤ j < n.
    frob_step: Vec<u64>,
    /// Inverse of the F_p-basis matrix {γ^j α^i}, for subfield coordinates.
    coord_inv: ModMatrix,
}

const LOG_SENTINEL: u32 = u32::MAX;

impl FieldCtx {
    pub fn build(p: u64, n: u32, k: u32) -> Result<FieldCtx> {
        Self::build_with_cap(p, n, k, DEFAULT_TABLE_CAP)
    }

    pub fn build_with_cap(p: u64, n: u32, k: u32, cap: u64) -> Result<FieldCtx> {
        let params = FieldParams::with_cap(p, n, k, cap)?;
        let order = params.order as usize;
        let period = params.period;

        let mut exp = vec![0u32; period as usize];
        let modulus = find_modulus(&params, &mut exp).expect(
            "a primitive irreducible polynomial of every degree exists over F_p",
        );

        let mut log = vec![LOG_SENTINEL; order];
        for (i, &code) in exp.iter().enumerate() {
            debug_assert_eq!(log[code as usize], LOG_SENTINEL, "exp table not injective");
            log[code as usize] = i as u32;
        }

        let frob_step: Vec<u64> = (0..n).map(|j| mod_pow(p, j as u64, period)).collect();

        // tr(α^i) = Σ_j α^{i·p^j}; the sum of conjugates lands in F_p, i.e.
        // its code is a single base-p digit.
        let mut trace_exp = vec![0u32; period as usize];
        for i in 0..period {
            let mut acc = 0u64;
            for &f in &frob_step {
                let idx = ((i as u128 * f as u128) % period as u128) as usize;
                acc = add_code(p, acc, exp[idx] as u64);
            }
            debug_assert!(acc < p, "trace escaped the prime field");
            trace_exp[i as usize] = acc as u32;
        }

        let coord_inv = build_coord_inverse(&params, &exp);

        Ok(FieldCtx { params, modulus, exp, log, trace_exp, frob_step, coord_inv })
    }

    // ----- element plumbing -------------------------------------------------

    /// The fixed primitive element α (the class of x for n ≥ 2).
    pub fn alpha(&self) -> FieldElement {
        FieldElement(self.exp[1 % self.exp.len()])
    }

    /// Element from its integer code, rejecting codes ≥ p^n.
    pub fn from_code(&self, code: u64) -> Result<FieldElement> {
        if code >= self.params.order {
            return Err(Error::InvalidParams(format!(
                "element code {code} out of range for order {}",
                self.params.order
            )));
        }
        Ok(FieldElement(code as u32))
    }

    /// The prime-field element c mod p.
    pub fn from_base(&self, c: u64) -> FieldElement {
        FieldElement((c % self.params.p) as u32)
    }

    /// α^i, with the exponent reduced mod p^n − 1.
    pub fn exp_at(&self, i: u64) -> FieldElement {
        FieldElement(self.exp[(i % self.params.period) as usize])
    }

    /// Discrete log of x, None at zero.
    pub fn log(&self, x: FieldElement) -> Option<u64> {
        let l = self.log[x.0 as usize];
        (l != LOG_SENTINEL).then_some(l as u64)
    }

    // ----- arithmetic -------------------------------------------------------

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(add_code(self.params.p, x.0 as u64, y.0 as u64) as u32)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        FieldElement(neg_code(self.params.p, x.0 as u64) as u32)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        match (self.log(x), self.log(y)) {
            (Some(lx), Some(ly)) => self.exp_at(lx + ly),
            _ => FieldElement::ZERO,
        }
    }

    /// Multiplicative inverse; panics at zero (an internal-contract error).
    pub fn inv(&self, x: FieldElement) -> FieldElement {
        let lx = self.log(x).expect("inverse of zero");
        self.exp_at(self.params.period - lx)
    }

    /// x^e with e an arbitrary nonnegative exponent (0^0 = 1).
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        match self.log(x) {
            None => {
                if e == 0 {
                    FieldElement::ONE
                } else {
                    FieldElement::ZERO
                }
            }
            Some(lx) => {
                let period = self.params.period as u128;
                self.exp_at(((lx as u128 * (e as u128 % period)) % period) as u64)
            }
        }
    }

    /// Frobenius iterate x^{p^j} for any j ≥ 0.
    pub fn frobenius(&self, x: FieldElement, j: u32) -> FieldElement {
        match self.log(x) {
            None => FieldElement::ZERO,
            Some(lx) => {
                let f = if (j as usize) < self.frob_step.len() {
                    self.frob_step[j as usize]
                } else {
                    mod_pow(self.params.p, j as u64, self.params.period)
                };
                let period = self.params.period as u128;
                self.exp_at(((lx as u128 * f as u128) % period) as u64)
            }
        }
    }

    // ----- traces, characters, subfield structure ---------------------------

    /// Relative trace tr^n_m: F_{p^n} → F_{p^m}, for m | n.
    pub fn trace(&self, x: FieldElement, m: u32) -> Result<FieldElement> {
        if m == 0 || self.params.n % m != 0 {
            return Err(Error::InvalidParams(format!(
                "trace target degree {m} does not divide n = {}",
                self.params.n
            )));
        }
        let mut acc = FieldElement::ZERO;
        for i in 0..self.params.n / m {
            acc = self.add(acc, self.frobenius(x, m * i));
        }
        Ok(acc)
    }

    /// Absolute trace of α^i as an integer in 0..p, straight from the table.
    #[inline]
    pub fn trace_of_exp(&self, i: u64) -> u32 {
        self.trace_exp[i as usize]
    }

    /// Absolute trace of x as an integer in 0..p.
    pub fn trace_to_int(&self, x: FieldElement) -> u64 {
        match self.log(x) {
            None => 0,
            Some(lx) => self.trace_exp[lx as usize] as u64,
        }
    }

    pub(crate) fn trace_table(&self) -> &[u32] {
        &self.trace_exp
    }

    /// Quadratic character of x within F_{p^m} ⊆ F_{p^n} (m | n): +1 on
    /// squares of F_{p^m}^*, −1 on non-squares. Zero is rejected.
    pub fn eta(&self, x: FieldElement, m: u32) -> Result<i8> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        if m == 0 || self.params.n % m != 0 {
            return Err(Error::InvalidParams(format!(
                "eta subfield degree {m} does not divide n = {}",
                self.params.n
            )));
        }
        let period = self.params.period;
        let sub_period = checked_pow(self.params.p, m).expect("p^m ≤ p^n") - 1;
        let step = period / sub_period;
        let lx = self.log(x).expect("nonzero");
        if lx % step != 0 {
            return Err(Error::InvalidParams(format!(
                "eta argument (log {lx}) lies outside F_{{p^{m}}}"
            )));
        }
        // x = γ^t with γ = α^step, so x^{(p^m−1)/2} = α^{t·(p^n−1)/2}.
        let t = lx / step;
        Ok(if (t * (sub_period / 2)) % sub_period == 0 { 1 } else { -1 })
    }

    /// Generator of F_{p^m}^* inside the big field: γ = α^{(p^n−1)/(p^m−1)}.
    pub fn subfield_generator(&self, m: u32) -> FieldElement {
        let sub_period = checked_pow(self.params.p, m).expect("p^m ≤ p^n") - 1;
        self.exp_at(self.params.period / sub_period)
    }

    /// True when x lies in the subfield F_{p^m}.
    pub fn in_subfield(&self, x: FieldElement, m: u32) -> bool {
        match self.log(x) {
            None => true,
            Some(lx) => {
                let sub_period = checked_pow(self.params.p, m).expect("p^m ≤ p^n") - 1;
                lx % (self.params.period / sub_period) == 0
            }
        }
    }

    /// Coordinates of x in the F_{p^k}-basis (1, α, …, α^{e−1}):
    /// x = Σ_i coords[i]·α^i with every coords[i] ∈ F_{p^k}.
    pub fn subfield_coords(&self, x: FieldElement) -> Vec<FieldElement> {
        let (p, n, k, e) = (self.params.p, self.params.n, self.params.k, self.params.e);
        let digits = digits_of(p, x.0 as u64, n);
        let y = self.coord_inv.mat_vec(&digits);
        let gamma = self.subfield_generator(k);
        (0..e as usize)
            .map(|i| {
                let mut acc = FieldElement::ZERO;
                let mut gpow = FieldElement::ONE;
                for j in 0..k as usize {
                    let term = self.mul(self.from_base(y[i * k as usize + j]), gpow);
                    acc = self.add(acc, term);
                    gpow = self.mul(gpow, gamma);
                }
                acc
            })
            .collect()
    }

    /// −1 as a field element.
    pub fn minus_one(&self) -> FieldElement {
        self.from_base(self.params.p - 1)
    }

    /// The inverse of 2 in F_p (p is odd).
    pub fn half(&self) -> FieldElement {
        self.from_base((self.params.p + 1) / 2)
    }
}

// ----- code-level digit arithmetic ------------------------------------------

/// Coefficient-wise sum of two element codes, base p.
#[inline]
pub(crate) fn add_code(p: u64, mut a: u64, mut b: u64) -> u64 {
    let mut out = 0u64;
    let mut shift = 1u64;
    while a != 0 || b != 0 {
        let s = (a % p + b % p) % p;
        out += s * shift;
        shift *= p;
        a /= p;
        b /= p;
    }
    out
}

/// Coefficient-wise negation of an element code.
#[inline]
pub(crate) fn neg_code(p: u64, mut a: u64) -> u64 {
    let mut out = 0u64;
    let mut shift = 1u64;
    while a != 0 {
        let d = a % p;
        if d != 0 {
            out += (p - d) * shift;
        }
        shift *= p;
        a /= p;
    }
    out
}

pub(crate) fn digits_of(p: u64, mut code: u64, n: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(code % p);
        code /= p;
    }
    out
}

pub(crate) fn checked_pow(p: u64, n: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut f = 3u64;
    while f * f <= p {
        if p % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

// ----- modulus search ---------------------------------------------------

/// Find the deterministic modulus and fill the exp table in the same walk.
///
/// Candidates are monic f = x^n + Σ c_i x^i enumerated by increasing integer
/// encoding of (c_0, …, c_{n−1}); c_0 = 0 is skipped since x must be a unit.
/// A candidate is accepted iff the order of x in F_p[x]/(f) is exactly
/// p^n − 1, which simultaneously certifies irreducibility and primitivity.
fn find_modulus(params: &FieldParams, exp: &mut [u32]) -> Option<Vec<u64>> {
    let (p, n) = (params.p, params.n);
    for tail in 1..params.order {
        if tail % p == 0 {
            continue; // x | f
        }
        let f_low = digits_of(p, tail, n);
        if walk_powers(params, &f_low, exp) {
            let mut modulus = f_low;
            modulus.push(1);
            return Some(modulus);
        }
    }
    None
}

/// Walk α^0, α^1, …; return true iff the first return to 1 happens at step
/// p^n − 1 exactly. Fills exp[i] along the way (valid only on success).
fn walk_powers(params: &FieldParams, f_low: &[u64], exp: &mut [u32]) -> bool {
    let (p, n) = (params.p, params.n as usize);
    let period = params.period;
    let mut cur = vec![0u64; n];
    cur[0] = 1;
    exp[0] = 1;
    for i in 1..=period {
        if n == 1 {
            // α = −c_0; multiply the single coefficient.
            let alpha = (p - f_low[0]) % p;
            cur[0] = cur[0] * alpha % p;
        } else {
            // Multiply by x and reduce: the spilled top coefficient q
            // subtracts q·(f − x^n).
            let carry = cur[n - 1];
            for j in (1..n).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if carry != 0 {
                for j in 0..n {
                    cur[j] = (cur[j] + (p - f_low[j] % p) * carry) % p;
                }
            }
        }
        let code = encode(p, &cur);
        if code == 1 {
            return i == period;
        }
        if i < period {
            exp[i as usize] = code as u32;
        }
    }
    false
}

fn encode(p: u64, digits: &[u64]) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Build the inverse of the n×n matrix whose columns are the F_p-expansions
/// of the basis {γ^j·α^i : 0 ≤ i < e, 0 ≤ j < k}.
fn build_coord_inverse(params: &FieldParams, exp: &[u32]) -> ModMatrix {
    let (p, n, k, e) = (params.p, params.n as usize, params.k as usize, params.e as usize);
    let period = params.period;
    let sub_period = checked_pow(params.p, params.k).expect("p^k ≤ p^n") - 1;
    let gamma_log = period / sub_period;

    let mut m = ModMatrix::zero(n, n, p);
    for i in 0..e {
        for j in 0..k {
            // γ^j·α^i = α^{j·gamma_log + i}; both factors are powers of α.
            let l = (j as u64 * gamma_log + i as u64) % period;
            let code = exp[l as usize] as u64;
            let digits = digits_of(p, code, params.n);
            for (row, &dgt) in digits.iter().enumerate() {
                m.set(row, i * k + j, dgt);
            }
        }
    }
    m.inverse().expect("{γ^j α^i} is an F_p-basis")
}
