//! Certified sign evaluation for sums of rational multiples of fractional
//! powers of a rational `q > 0`.
//!
//! The threshold inequalities that pin down the chain length involve terms
//! like `q^{5/6}` and `q^{4/5}`, so everything here works over exponents
//! measured in *thirtieths* (30 = lcm of the denominators that occur).  A
//! [`PowerSum`] is a finite sum `Σ c_j · q^{j/30}` with `c_j ∈ ℚ`, and
//! [`PowerSum::sign_at`] decides its sign exactly:
//!
//! 1. Write `q = t^e` with `e` the largest divisor of 30 such that `q` is a
//!    perfect `e`-th power, and set `d = 30/e`.  Then `x^d - t` is the
//!    minimal polynomial of `q^{1/30}` over ℚ (irreducible by the classical
//!    binomial criterion: `t` is not a `p`-th power for any prime `p | d`
//!    by maximality of `e`, and `t > 0` rules out the `-4c^4` case).
//! 2. Reduce the sum modulo `x^d - t`.  The value is exactly zero iff every
//!    reduced coefficient vanishes.
//! 3. Otherwise bracket `q^{1/30}` between consecutive dyadic rationals via
//!    integer `d`-th roots and evaluate the reduced sum in interval
//!    arithmetic, doubling the precision until the interval excludes zero.
//!    Step 2 guarantees this terminates.
//!
//! No floating point is involved at any stage; a returned [`Ordering`] is a
//! proof-grade verdict.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Precision ceiling for the interval refinement, in bits.  Reaching it means
/// a nonzero value stayed indistinguishable from zero across 13 doublings
/// starting from 8 bits, which does not happen for inputs of sane height; the
/// cap only turns a hypothetical infinite loop into an honest error.
const MAX_BITS: u64 = 1 << 16;

/// A finite sum `Σ c_j · q^{j/30}` with rational coefficients, exponent `j`
/// in thirtieths.  Exponents may exceed 30 (i.e. whole powers of `q` and
/// beyond are fine).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PowerSum {
    terms: BTreeMap<u32, BigRational>,
}

impl PowerSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// The single term `c · q^{thirtieths/30}`.
    pub fn term(thirtieths: u32, coeff: BigRational) -> Self {
        let mut s = Self::new();
        s.add_term(thirtieths, coeff);
        s
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(0, c)
    }

    /// Adds `c · q^{thirtieths/30}` in place, merging with any existing term.
    pub fn add_term(&mut self, thirtieths: u32, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(thirtieths).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&thirtieths);
        }
    }

    /// Builder-style variant of [`add_term`](Self::add_term).
    pub fn with_term(mut self, thirtieths: u32, coeff: BigRational) -> Self {
        self.add_term(thirtieths, coeff);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.terms.iter().map(|(&j, c)| (j, c))
    }

    /// Decides the sign of the sum at `q`, exactly.  `q` must be positive.
    pub fn sign_at(&self, q: &BigRational) -> Result<Ordering> {
        self.sign_at_from(q, 32)
    }

    /// Like [`sign_at`](Self::sign_at) but with an explicit starting
    /// precision in bits, so callers can cross-check that the verdict is
    /// independent of where the refinement begins.
    pub fn sign_at_from(&self, q: &BigRational, start_bits: u64) -> Result<Ordering> {
        if !q.is_positive() {
            return Err(Error::invalid_input("power sums are evaluated at q > 0"));
        }
        if self.terms.is_empty() {
            return Ok(Ordering::Equal);
        }
        let (d, t) = root_structure(q);
        let reduced = self.reduce(d, &t);
        if reduced.iter().all(Zero::is_zero) {
            return Ok(Ordering::Equal);
        }
        let mut bits = start_bits.max(8);
        while bits <= MAX_BITS {
            if let Some(sign) = interval_sign(&reduced, &t, d, bits) {
                return Ok(sign);
            }
            bits *= 2;
        }
        Err(Error::Overflow(
            "certified sign evaluation exceeded the precision cap".into(),
        ))
    }

    /// Certified enclosure `[lo, hi]` of the value at `q` using `bits` bits
    /// of precision for the root.  Intended for reporting, not for decisions;
    /// use [`sign_at`](Self::sign_at) for those.
    pub fn enclosure(&self, q: &BigRational, bits: u64) -> Result<(BigRational, BigRational)> {
        if !q.is_positive() {
            return Err(Error::invalid_input("power sums are evaluated at q > 0"));
        }
        let (d, t) = root_structure(q);
        let reduced = self.reduce(d, &t);
        Ok(evaluate_interval(&reduced, &t, d, bits.max(8)))
    }

    /// Coefficient vector of the sum reduced modulo `x^d - t`, where
    /// `x = q^{1/30}`; index `r` holds the coefficient of `x^r`.
    fn reduce(&self, d: u32, t: &BigRational) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); d as usize];
        for (&j, c) in &self.terms {
            let (k, r) = (j / d, j % d);
            out[r as usize] += c * t.pow(k as i32);
        }
        out
    }
}

impl Add for PowerSum {
    type Output = PowerSum;
    fn add(mut self, rhs: PowerSum) -> PowerSum {
        for (j, c) in rhs.terms {
            self.add_term(j, c);
        }
        self
    }
}

impl Sub for PowerSum {
    type Output = PowerSum;
    fn sub(self, rhs: PowerSum) -> PowerSum {
        self + (-rhs)
    }
}

impl Neg for PowerSum {
    type Output = PowerSum;
    fn neg(mut self) -> PowerSum {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

/// `r` with `r^e == n`, if `n` is a perfect `e`-th power.  `n` must be
/// positive.
fn perfect_root(n: &BigInt, e: u32) -> Option<BigInt> {
    let r = n.nth_root(e);
    (r.clone().pow(e) == *n).then_some(r)
}

/// Writes `q = t^e` with `e | 30` maximal, returning `(d, t)` with `d = 30/e`.
/// `q^{1/30} = t^{1/d}`, and `x^d - t` is irreducible over ℚ.
pub fn root_structure(q: &BigRational) -> (u32, BigRational) {
    for e in [30u32, 15, 10, 6, 5, 3, 2] {
        if let (Some(a), Some(b)) = (perfect_root(q.numer(), e), perfect_root(q.denom(), e)) {
            return (30 / e, BigRational::new(a, b));
        }
    }
    (30, q.clone())
}

/// Dyadic bracket `lo/2^bits <= t^{1/d} <= hi/2^bits` with `hi - lo <= 1`,
/// collapsing to a point when the root is exactly dyadic.
fn root_bracket(t: &BigRational, d: u32, bits: u64) -> (BigInt, BigInt) {
    // floor(t^{1/d} * 2^bits) = floor((t_num * 2^{d*bits} / t_den)^{1/d}):
    // for integers a, b the map k ↦ k^d is monotone, so the d-th root of
    // floor(a/b) is the largest k with k^d * b <= a.
    let scale_pow: BigInt = BigInt::one() << (bits * u64::from(d));
    // Plain division truncates toward zero, which is floor here since t > 0.
    let scaled = (t.numer() * &scale_pow) / t.denom();
    let lo = scaled.nth_root(d);
    let exact = lo.clone().pow(d) * t.denom() == t.numer() * &scale_pow;
    let hi = if exact { lo.clone() } else { &lo + 1 };
    (lo, hi)
}

/// Interval evaluation of `Σ coeffs[r] · x^r` where `x = t^{1/d}`.
fn evaluate_interval(
    coeffs: &[BigRational],
    t: &BigRational,
    d: u32,
    bits: u64,
) -> (BigRational, BigRational) {
    let (lo_int, hi_int) = root_bracket(t, d, bits);
    let scale = BigInt::one() << bits;
    // Powers of the bracket endpoints as rationals; x >= 0 keeps these
    // monotone, so [lo^r, hi^r] encloses x^r.
    let mut lo_pows = Vec::with_capacity(coeffs.len());
    let mut hi_pows = Vec::with_capacity(coeffs.len());
    let mut lp = BigRational::one();
    let mut hp = BigRational::one();
    let lo_q = BigRational::new(lo_int, scale.clone());
    let hi_q = BigRational::new(hi_int, scale);
    for _ in 0..coeffs.len() {
        lo_pows.push(lp.clone());
        hi_pows.push(hp.clone());
        lp *= &lo_q;
        hp *= &hi_q;
    }
    let mut low = BigRational::zero();
    let mut high = BigRational::zero();
    for (r, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c.is_positive() {
            low += c * &lo_pows[r];
            high += c * &hi_pows[r];
        } else {
            low += c * &hi_pows[r];
            high += c * &lo_pows[r];
        }
    }
    (low, high)
}

/// Sign of the reduced sum if the interval at this precision settles it.
fn interval_sign(coeffs: &[BigRational], t: &BigRational, d: u32, bits: u64) -> Option<Ordering> {
    let (low, high) = evaluate_interval(coeffs, t, d, bits);
    if low.is_positive() {
        Some(Ordering::Greater)
    } else if high.is_negative() {
        Some(Ordering::Less)
    } else {
        None
    }
}
