//! Integer partitions read off lattice paths attached to a rotation number.
//!
//! For a rotation number `theta` and a multiplicity `m`, the positive
//! partition is the multiset of horizontal displacements between consecutive
//! integer lattice points on the *maximal* concave path from `(0,0)` to
//! `(m, floor(m*theta))` that stays on or below the line `y = theta*x`; the
//! negative partition uses the *minimal* convex path to `(m, ceil(m*theta))`
//! staying on or above the line. Both depend only on `theta mod 1`.
//!
//! The maximal concave path is the upper concave hull of the staircase points
//! `(k, floor(k*theta))`, `0 <= k <= m`; the minimal convex path is the lower
//! convex hull of the ceiling staircase. Hull edges are split at their
//! interior lattice points, so an edge with displacement `(dx, dy)`
//! contributes `gcd(dx, dy)` parts of size `dx / gcd(dx, dy)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::PerturbedRational;
use crate::{Error, Result};

/// Which side of a curve an end (or a partition) belongs to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EndSign {
    Positive,
    Negative,
}

impl EndSign {
    pub fn flip(self) -> Self {
        match self {
            EndSign::Positive => EndSign::Negative,
            EndSign::Negative => EndSign::Positive,
        }
    }
}

impl fmt::Display for EndSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndSign::Positive => "+",
            EndSign::Negative => "-",
        })
    }
}

impl FromStr for EndSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "positive" => Ok(EndSign::Positive),
            "-" | "negative" => Ok(EndSign::Negative),
            other => Err(Error::Parse { what: "end sign", text: other.to_string() }),
        }
    }
}

impl Serialize for EndSign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EndSign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A partition of a nonnegative integer, parts sorted descending.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::invalid_input("partition parts must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn has_part(&self, p: u64) -> bool {
        self.parts.contains(&p)
    }

    /// Multiset union.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Multiset intersection.
    pub fn intersection(&self, other: &Partition) -> Partition {
        let mut rhs = other.parts.clone();
        let mut parts = Vec::new();
        for &p in &self.parts {
            if let Some(pos) = rhs.iter().position(|&q| q == p) {
                rhs.swap_remove(pos);
                parts.push(p);
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strings: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", strings.join(","))
    }
}

/// Horizontal displacements along the maximal concave path under
/// `y = theta*x`. Rejects `m = 0`.
pub fn positive_partition(theta: &PerturbedRational, m: u64) -> Result<Partition> {
    if m == 0 {
        return Err(Error::ZeroMultiplicity);
    }
    Ok(positive_parts(theta, m))
}

/// Horizontal displacements along the minimal convex path over
/// `y = theta*x`. Rejects `m = 0`.
pub fn negative_partition(theta: &PerturbedRational, m: u64) -> Result<Partition> {
    if m == 0 {
        return Err(Error::ZeroMultiplicity);
    }
    Ok(negative_parts(theta, m))
}

pub fn signed_partition(theta: &PerturbedRational, m: u64, sign: EndSign) -> Result<Partition> {
    match sign {
        EndSign::Positive => positive_partition(theta, m),
        EndSign::Negative => negative_partition(theta, m),
    }
}

/// `m = 0` yields the empty partition; used internally where the recursive
/// splitting conditions need it.
pub(crate) fn positive_parts(theta: &PerturbedRational, m: u64) -> Partition {
    let theta = theta.fractional_part();
    let points: Vec<(BigInt, BigInt)> = (0..=m)
        .map(|k| (BigInt::from(k), theta.scaled_u64(k).floor()))
        .collect();
    hull_parts(&points, HullSide::Upper)
}

pub(crate) fn negative_parts(theta: &PerturbedRational, m: u64) -> Partition {
    let theta = theta.fractional_part();
    let points: Vec<(BigInt, BigInt)> = (0..=m)
        .map(|k| (BigInt::from(k), theta.scaled_u64(k).ceil()))
        .collect();
    hull_parts(&points, HullSide::Lower)
}

pub(crate) fn signed_parts(theta: &PerturbedRational, m: u64, sign: EndSign) -> Partition {
    match sign {
        EndSign::Positive => positive_parts(theta, m),
        EndSign::Negative => negative_parts(theta, m),
    }
}

enum HullSide {
    Upper,
    Lower,
}

/// Monotone-chain envelope of staircase points, split at interior lattice
/// points. O(m) after the floors/ceilings are computed.
fn hull_parts(points: &[(BigInt, BigInt)], side: HullSide) -> Partition {
    let mut stack: Vec<&(BigInt, BigInt)> = Vec::new();
    for p in points {
        while stack.len() >= 2 {
            let o = stack[stack.len() - 2];
            let a = stack[stack.len() - 1];
            let cross = (&a.0 - &o.0) * (&p.1 - &o.1) - (&a.1 - &o.1) * (&p.0 - &o.0);
            let drop_middle = match side {
                HullSide::Upper => cross >= BigInt::zero(),
                HullSide::Lower => cross <= BigInt::zero(),
            };
            if drop_middle {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(p);
    }
    let mut parts = Vec::new();
    for w in stack.windows(2) {
        let dx = (&w[1].0 - &w[0].0).to_u64().expect("x displacement fits u64");
        let dy = (&w[1].1 - &w[0].1).abs();
        let g = dy.gcd(&BigInt::from(dx)).to_u64().expect("gcd fits u64");
        for _ in 0..g {
            parts.push(dx / g);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition { parts }
}

/// An orbit/multiplicity pair is *exceptional* when its two partitions have at
/// most three parts in total.
pub fn is_exceptional(theta: &PerturbedRational, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::ZeroMultiplicity);
    }
    Ok(positive_parts(theta, m).len() + negative_parts(theta, m).len() <= 3)
}

/// Splitting conditions for the partition carried by curve ends at one orbit:
/// with `total = m`, `curve_parts` summing to `m'`, the condition holds when
/// for every `0 <= n <= m - m'` the signed partition of `m' + n` equals the
/// multiset union of `curve_parts` with the signed partition of `n`.
pub fn check_partition_conditions(
    theta: &PerturbedRational,
    total: u64,
    curve_parts: &Partition,
    sign: EndSign,
) -> Result<bool> {
    let m_prime = curve_parts.total();
    if m_prime > total {
        return Err(Error::invalid_input(format!(
            "curve parts sum to {m_prime}, exceeding total multiplicity {total}"
        )));
    }
    for n in 0..=(total - m_prime) {
        let whole = signed_parts(theta, m_prime + n, sign);
        let split = curve_parts.union(&signed_parts(theta, n, sign));
        if whole != split {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `1 in p+(m - m')` and `1 in p+(m)` agree. Requires
/// `0 < m' < m`. The negative-partition statement is this one applied to
/// `-theta`.
pub fn one_in_partition_equivalence(
    theta: &PerturbedRational,
    m: u64,
    m_prime: u64,
) -> Result<bool> {
    if m_prime == 0 || m_prime >= m {
        return Err(Error::invalid_input(format!(
            "need 0 < m' < m, got m' = {m_prime}, m = {m}"
        )));
    }
    let rest = positive_parts(theta, m - m_prime);
    let whole = positive_parts(theta, m);
    Ok(rest.has_part(1) == whole.has_part(1))
}
