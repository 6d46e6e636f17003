//! Exact scalars of the form `r + s*eps`, where `r` is an arbitrary-precision
//! rational and `eps` is a formal positive infinitesimal carried only through
//! its sign `s` (-1, 0, +1).
//!
//! The order is lexicographic: rational parts first, infinitesimal signs as a
//! tie-break. This makes quantities like `1/2 - eps < 1/2 < 1/2 + eps` exact,
//! with no tolerance anywhere. Floors and ceilings feel the infinitesimal
//! exactly when the scaled rational part lands on an integer:
//! `floor(n - eps) = n - 1`, `ceil(n + eps) = n + 1`.
//!
//! Text form: `a/b`, `a/b+e`, `a/b-e` (canonical: reduced, positive
//! denominator, denominator always written).

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Sign of the formal infinitesimal part. Ordering `MinusEps < None < PlusEps`
/// matches the numeric order of `-eps < 0 < +eps`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EpsSign {
    MinusEps,
    None,
    PlusEps,
}

impl EpsSign {
    pub fn flip(self) -> Self {
        match self {
            EpsSign::MinusEps => EpsSign::PlusEps,
            EpsSign::None => EpsSign::None,
            EpsSign::PlusEps => EpsSign::MinusEps,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            EpsSign::MinusEps => -1,
            EpsSign::None => 0,
            EpsSign::PlusEps => 1,
        }
    }
}

/// A rational number optionally displaced by an infinitesimal: `value + eps`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PerturbedRational {
    value: BigRational,
    eps: EpsSign,
}

impl PerturbedRational {
    pub fn new(value: BigRational, eps: EpsSign) -> Self {
        PerturbedRational { value, eps }
    }

    pub fn rational(value: BigRational) -> Self {
        PerturbedRational { value, eps: EpsSign::None }
    }

    /// Convenience constructor from an integer pair. Panics on `den == 0`;
    /// use [`FromStr`] for untrusted input.
    pub fn from_ints(num: i64, den: i64) -> Self {
        assert!(den != 0, "denominator must be nonzero");
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn eps(&self) -> EpsSign {
        self.eps
    }

    /// True exactly for unperturbed integers.
    pub fn is_exact_integer(&self) -> bool {
        self.eps == EpsSign::None && self.value.is_integer()
    }

    /// Largest integer `<= self` in the lexicographic order. The infinitesimal
    /// matters only when the rational part is itself an integer.
    pub fn floor(&self) -> BigInt {
        let base = self.value.floor().to_integer();
        if self.value.is_integer() && self.eps == EpsSign::MinusEps {
            base - 1
        } else {
            base
        }
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        let base = self.value.ceil().to_integer();
        if self.value.is_integer() && self.eps == EpsSign::PlusEps {
            base + 1
        } else {
            base
        }
    }

    /// `k * self`. The infinitesimal sign follows the sign of `k`.
    pub fn scaled(&self, k: &BigInt) -> Self {
        let value = &self.value * BigRational::from_integer(k.clone());
        let eps = match k.sign() {
            num_bigint::Sign::Plus => self.eps,
            num_bigint::Sign::NoSign => EpsSign::None,
            num_bigint::Sign::Minus => self.eps.flip(),
        };
        PerturbedRational { value, eps }
    }

    pub fn scaled_u64(&self, k: u64) -> Self {
        self.scaled(&BigInt::from(k))
    }

    /// `self + r` for a plain rational shift; the infinitesimal is unchanged.
    pub fn shifted(&self, r: &BigRational) -> Self {
        PerturbedRational { value: &self.value + r, eps: self.eps }
    }

    /// `self mod 1`, i.e. `self - floor(self)`, in `[0, 1)`. Note
    /// `frac(n - eps) = 1 - eps`.
    pub fn fractional_part(&self) -> Self {
        let f = BigRational::from_integer(self.floor());
        PerturbedRational { value: &self.value - f, eps: self.eps }
    }

    /// Distance to the nearest integer: `min(frac, 1 - frac)`, in `[0, 1/2]`.
    pub fn nearest_integer_distance(&self) -> Self {
        let frac = self.fractional_part();
        let complement = (-frac.clone()).shifted(&BigRational::one());
        frac.min(complement)
    }

    /// Compare against a plain rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.value.cmp(r).then(self.eps.cmp(&EpsSign::None))
    }

    /// Compare against an integer.
    pub fn cmp_int(&self, n: &BigInt) -> Ordering {
        self.cmp_rational(&BigRational::from_integer(n.clone()))
    }
}

impl Neg for PerturbedRational {
    type Output = PerturbedRational;
    fn neg(self) -> PerturbedRational {
        PerturbedRational { value: -self.value, eps: self.eps.flip() }
    }
}

impl Neg for &PerturbedRational {
    type Output = PerturbedRational;
    fn neg(self) -> PerturbedRational {
        PerturbedRational { value: -self.value.clone(), eps: self.eps.flip() }
    }
}

impl PartialOrd for PerturbedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PerturbedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value).then(self.eps.cmp(&other.eps))
    }
}

impl fmt::Display for PerturbedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.value.numer(), self.value.denom())?;
        match self.eps {
            EpsSign::MinusEps => write!(f, "-e"),
            EpsSign::None => Ok(()),
            EpsSign::PlusEps => write!(f, "+e"),
        }
    }
}

impl fmt::Debug for PerturbedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PerturbedRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, eps) = if s == "e" {
            ("", EpsSign::PlusEps)
        } else if let Some(b) = s.strip_suffix("+e") {
            (b, EpsSign::PlusEps)
        } else if let Some(b) = s.strip_suffix("-e") {
            (b, EpsSign::MinusEps)
        } else {
            (s, EpsSign::None)
        };
        if body.is_empty() {
            // Bare "e" / "-e" mean a pure infinitesimal; an empty string is an error.
            return if eps == EpsSign::None {
                Err(Error::Parse { what: "perturbed rational", text: s.to_string() })
            } else {
                Ok(PerturbedRational::new(BigRational::zero(), eps))
            };
        }
        let value = parse_rational(body)?;
        Ok(PerturbedRational::new(value, eps))
    }
}

impl Serialize for PerturbedRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PerturbedRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse `a/b` or a bare integer `a` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let mk_err = || Error::Parse { what: "rational", text: s.to_string() };
    match s.split_once('/') {
        Some((n, d)) => {
            let num: BigInt = n.trim().parse().map_err(|_| mk_err())?;
            let den: BigInt = d.trim().parse().map_err(|_| mk_err())?;
            if den.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().map_err(|_| mk_err())?;
            Ok(BigRational::from_integer(num))
        }
    }
}

/// Canonical text form `a/b` (denominator always written, reduced, positive).
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// serde adapter: `BigRational` as an `a/b` string.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &BigRational,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&rational_to_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// serde adapter: `BigInt` as a decimal string (JSON numbers would silently
/// lose precision on values past 2^53).
pub mod bigint_serde {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &BigInt,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<BigInt, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.trim()
            .parse()
            .map_err(|_| serde::de::Error::custom(format!("cannot parse `{s}` as integer")))
    }
}
