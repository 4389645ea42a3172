//! Exact values of character sums inside the quadratic subfield Q(√p*),
//! p* = (−1)^{(p−1)/2}·p = −p for the p ≡ 3 (mod 4) regime this crate lives
//! in.
//!
//! Every sum the library computes is an algebraic integer in the cyclotomic
//! field Q(ω), ω = e^{2πi/p}, that actually lands in the ring of integers
//! Z[(1+√p*)/2] of the quadratic subfield. A value is therefore stored as a
//! pair of scaled rational integers: v = (twoA + twoB·√p*)/2 with
//! twoA ≡ twoB (mod 2). Keeping doubled coordinates makes every arithmetic
//! operation exact in i128 and turns the "is this really an algebraic
//! integer" question into a parity assertion.

use crate::error::{Error, Result};
use crate::linalg::mod_pow;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// An element (twoA + twoB·√p*)/2 of Z[(1+√p*)/2], p* = −p.
///
/// The prime p is carried by context, not by the value; mixing values from
/// different fields is a caller bug that the arithmetic cannot detect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadValue {
    /// Twice the rational coordinate.
    pub two_a: i128,
    /// Twice the √p*-coordinate.
    pub two_b: i128,
}

impl QuadValue {
    pub const ZERO: QuadValue = QuadValue { two_a: 0, two_b: 0 };

    /// Construct from doubled coordinates, enforcing the ring's parity
    /// invariant twoA ≡ twoB (mod 2).
    pub fn from_doubled(two_a: i128, two_b: i128) -> QuadValue {
        assert!(
            (two_a - two_b) % 2 == 0,
            "({two_a} + {two_b}√p*)/2 is not an algebraic integer"
        );
        QuadValue { two_a, two_b }
    }

    /// The rational integer a, as (2a, 0)/2.
    pub fn from_int(a: i128) -> QuadValue {
        QuadValue { two_a: 2 * a, two_b: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.two_a == 0 && self.two_b == 0
    }

    /// True when the value is a rational integer.
    pub fn is_rational(self) -> bool {
        self.two_b == 0
    }

    pub fn add(self, o: QuadValue) -> QuadValue {
        QuadValue { two_a: self.two_a + o.two_a, two_b: self.two_b + o.two_b }
    }

    pub fn sub(self, o: QuadValue) -> QuadValue {
        QuadValue { two_a: self.two_a - o.two_a, two_b: self.two_b - o.two_b }
    }

    pub fn neg(self) -> QuadValue {
        QuadValue { two_a: -self.two_a, two_b: -self.two_b }
    }

    pub fn scale(self, c: i128) -> QuadValue {
        QuadValue { two_a: c * self.two_a, two_b: c * self.two_b }
    }

    /// Exact product in Z[(1+√p*)/2]; needs p because √p*² = −p.
    ///
    /// (A1 + B1√p*)(A2 + B2√p*) = (A1A2 − p·B1B2) + (A1B2 + B1A2)√p*, and
    /// with doubled coordinates both numerators are provably even.
    pub fn mul(self, o: QuadValue, p: u64) -> QuadValue {
        let p = p as i128;
        let four_a = self.two_a * o.two_a - p * self.two_b * o.two_b;
        let four_b = self.two_a * o.two_b + self.two_b * o.two_a;
        assert!(four_a % 2 == 0 && four_b % 2 == 0, "quadratic ring closure failed");
        QuadValue::from_doubled(four_a / 2, four_b / 2)
    }

    /// Exact halving v/2, failing when v/2 leaves the ring.
    pub fn half(self) -> Result<QuadValue> {
        // v/2 has doubled coordinates (twoA/2, twoB/2); staying in the ring
        // needs both to be integers and of equal parity.
        if self.two_a % 2 != 0 || self.two_b % 2 != 0 {
            return Err(Error::InexactHalving(self.two_a, self.two_b));
        }
        let (a, b) = (self.two_a / 2, self.two_b / 2);
        if (a - b) % 2 != 0 {
            return Err(Error::InexactHalving(self.two_a, self.two_b));
        }
        Ok(QuadValue { two_a: a, two_b: b })
    }

    /// Galois conjugate √p* ↦ −√p*.
    pub fn conj(self) -> QuadValue {
        QuadValue { two_a: self.two_a, two_b: -self.two_b }
    }

    /// Four times the squared complex magnitude: 4|v|² = twoA² + p·twoB²
    /// (exact, since |√p*|² = p).
    pub fn mag_sq_times4(self, p: u64) -> i128 {
        self.two_a * self.two_a + p as i128 * self.two_b * self.two_b
    }

    /// The complex embedding with √p* = +i√p: returns (re, im) as f64.
    pub fn to_complex(self, p: u64) -> (f64, f64) {
        let re = self.two_a as f64 / 2.0;
        let im = self.two_b as f64 / 2.0 * (p as f64).sqrt();
        (re, im)
    }
}

impl fmt::Display for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_b == 0 {
            write!(f, "{}", self.two_a / 2)
        } else {
            write!(f, "({} + {}·√-p)/2", self.two_a, self.two_b)
        }
    }
}

// Serialized as {"twoA": "...", "twoB": "..."} with decimal strings so that
// i128 survives JSON readers that parse numbers as f64.
impl Serialize for QuadValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadValue", 2)?;
        st.serialize_field("twoA", &self.two_a.to_string())?;
        st.serialize_field("twoB", &self.two_b.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QuadValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "twoA")]
            two_a: String,
            #[serde(rename = "twoB")]
            two_b: String,
        }
        let raw = Raw::deserialize(d)?;
        let two_a: i128 = raw.two_a.parse().map_err(D::Error::custom)?;
        let two_b: i128 = raw.two_b.parse().map_err(D::Error::custom)?;
        if (two_a - two_b) % 2 != 0 {
            return Err(D::Error::custom("twoA and twoB must have equal parity"));
        }
        Ok(QuadValue { two_a, two_b })
    }
}

/// Per-residue character counts: counts[t] = #{x : f(x) = t} for a map f
/// into F_p. The character sum Σ ω^{f(x)} is Σ_t counts[t]·ω^t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    pub p: u64,
    pub counts: Vec<u64>,
}

impl CountVector {
    pub fn new(p: u64) -> CountVector {
        CountVector { p, counts: vec![0; p as usize] }
    }

    #[inline]
    pub fn bump(&mut self, t: u64) {
        self.counts[t as usize] += 1;
    }

    #[inline]
    pub fn bump_by(&mut self, t: u64, w: u64) {
        self.counts[t as usize] += w;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Collapse the counts into an exact quadratic-subfield value.
    ///
    /// Writing c₀, c_q (constant on quadratic residues), c_nq (constant on
    /// non-residues), the quadratic Gauss sum Σ_{t≠0} η(t)ω^t = √p* gives
    ///
    ///   Σ c_t ω^t = (2c₀ − c_q − c_nq)/2 + (c_q − c_nq)/2·√p*.
    ///
    /// The collapse is valid iff the counts are constant on each square
    /// class; that is exactly the condition for the sum to lie in Q(√p*),
    /// because the only Z-linear relation among 1, ω, …, ω^{p−1} is that
    /// their sum vanishes. Fails with NotInQuadraticSubfield otherwise.
    pub fn to_quad_value(&self) -> Result<QuadValue> {
        let p = self.p;
        if p == 3 {
            // Residue class {1}, non-residue class {2}: constancy is free.
            let (c0, cq, cnq) =
                (self.counts[0] as i128, self.counts[1] as i128, self.counts[2] as i128);
            return Ok(QuadValue::from_doubled(2 * c0 - cq - cnq, cq - cnq));
        }
        let mut is_square = vec![false; p as usize];
        for t in 1..p {
            is_square[(t * t % p) as usize] = true;
        }
        let mut cq = None;
        let mut cnq = None;
        for t in 1..p as usize {
            let slot = if is_square[t] { &mut cq } else { &mut cnq };
            match *slot {
                None => *slot = Some(self.counts[t]),
                Some(c) if c == self.counts[t] => {}
                Some(_) => return Err(Error::NotInQuadraticSubfield),
            }
        }
        let (c0, cq, cnq) = (
            self.counts[0] as i128,
            cq.expect("p > 3 has residues") as i128,
            cnq.expect("p > 3 has non-residues") as i128,
        );
        Ok(QuadValue::from_doubled(2 * c0 - cq - cnq, cq - cnq))
    }

    /// Evaluate Σ c_t ω^t numerically in f64, for oracle comparisons.
    pub fn to_complex(&self) -> (f64, f64) {
        let p = self.p as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (t, &c) in self.counts.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * t as f64 / p;
            re += c as f64 * theta.cos();
            im += c as f64 * theta.sin();
        }
        (re, im)
    }
}

/// Image of v under the Galois automorphism σ_l : ω ↦ ω^l of Q(ω)/Q,
/// restricted to Q(√p*): σ_l fixes √p* when l is a quadratic residue mod p
/// and negates it otherwise.
pub fn galois_sigma(v: QuadValue, l: u64, p: u64) -> Result<QuadValue> {
    if l % p == 0 {
        return Err(Error::ZeroArgument);
    }
    // Euler's criterion via modular exponentiation.
    let sym = mod_pow(l % p, (p - 1) / 2, p);
    Ok(if sym == 1 { v } else { v.conj() })
}

/// Sum of v over its p−1 conjugates' worth of additive shifts — concretely
/// the exact integer Σ_{u∈F_p^*} σ_u(v) = (p−1)/2·twoA, used to turn a
/// character-sum value into a solution/weight count.
pub fn conjugate_sum(v: QuadValue, p: u64) -> i128 {
    (p as i128 - 1) / 2 * v.two_a
}

/// A value histogram: how many parameter pairs produced each exact value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueDistribution {
    pub p: u64,
    /// value → multiplicity, ordered by (twoA, twoB).
    pub rows: BTreeMap<QuadValue, i128>,
}

impl ValueDistribution {
    pub fn new(p: u64) -> ValueDistribution {
        ValueDistribution { p, rows: BTreeMap::new() }
    }

    pub fn bump(&mut self, v: QuadValue, by: i128) {
        *self.rows.entry(v).or_insert(0) += by;
    }

    pub fn total(&self) -> i128 {
        self.rows.values().sum()
    }

    /// Drop zero-multiplicity rows (kept during assembly for completeness).
    pub fn without_zero_rows(&self) -> ValueDistribution {
        ValueDistribution {
            p: self.p,
            rows: self.rows.iter().filter(|(_, &c)| c != 0).map(|(&v, &c)| (v, c)).collect(),
        }
    }

    /// First, second moment and count, all exact: Σ multiplicities,
    /// Σ v·mult, Σ v²·mult (the latter two in the quadratic ring).
    pub fn moments(&self) -> (i128, QuadValue, QuadValue) {
        let mut m0 = 0i128;
        let mut m1 = QuadValue::ZERO;
        let mut m2 = QuadValue::ZERO;
        for (&v, &c) in &self.rows {
            m0 += c;
            m1 = m1.add(v.scale(c));
            m2 = m2.add(v.mul(v, self.p).scale(c));
        }
        (m0, m1, m2)
    }
}
