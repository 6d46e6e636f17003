//! The constants ledger and the chain audit.
//!
//! A compactness-and-counting argument pins down how long a chain of
//! index-two curves can run before the books stop balancing.  This module
//! holds the bookkeeping side of that argument: the named constants and
//! their derived quantities ([`ConstantsLedger`]), the certified solver for
//! the minimal admissible chain length `q` ([`solve_min_q`]), the action-gap
//! and multiplicity-threshold constants computed from an orbit catalog
//! ([`eps_m`], [`choose_m`]), the step-by-step replay of the counting
//! argument on an explicit chain ([`audit_chain`]), and the action-difference
//! dichotomy for pairs of low-complexity orbit sets
//! ([`threshold_dichotomy`]).
//!
//! Nothing here produces curves.  The auditor takes records at face value
//! after structural validation and checks that the arithmetic a chain is
//! supposed to satisfy actually holds, exactly.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::certified::PowerSum;
use crate::exactnum::{bigint_serde, rational_serde};
use crate::index::{cz_top, ech_index};
use crate::orbits::{Catalog, OrbitSet};
use crate::score::{total_score, UCurveRecord};
use crate::{Error, Result};

/// The named constants of the chain argument, with every derived identity
/// kept exact.  `T_q = δ₂·√q` is irrational in general, so it is stored as
/// `T_q_squared = δ₂²·q` and all comparisons against `T_q` are done by
/// squaring (both sides of such comparisons are nonnegative).
///
/// Fields are public; [`validate`](Self::validate) checks the structural
/// identities and is called by every consumer.  Whether `q` satisfies the
/// four chain-length inequalities is *reported* by
/// [`chain_length_report`](Self::chain_length_report), not enforced: a
/// ledger with a hand-picked small `q` is still a legitimate object to audit
/// synthetic chains against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsLedger {
    #[serde(rename = "B0")]
    pub b0: u64,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    #[serde(with = "rational_serde")]
    pub ell: BigRational,
    #[serde(rename = "eps_BM", with = "rational_serde")]
    pub eps_bm: BigRational,
    #[serde(with = "rational_serde")]
    pub eps_prime: BigRational,
    #[serde(with = "rational_serde")]
    pub delta1: BigRational,
    #[serde(with = "rational_serde")]
    pub delta2: BigRational,
    #[serde(with = "rational_serde")]
    pub eta: BigRational,
    #[serde(with = "rational_serde")]
    pub hbar: BigRational,
    #[serde(with = "bigint_serde")]
    pub p0: BigInt,
    #[serde(with = "bigint_serde")]
    pub q: BigInt,
    #[serde(rename = "T_q_squared", with = "rational_serde")]
    pub t_q_squared: BigRational,
}

impl ConstantsLedger {
    /// Builds a ledger from the independent inputs, deriving `B`, `ε′`, `q`
    /// (via [`solve_min_q`]) and `T_q²`.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        b0: u64,
        big_m: u64,
        ell: BigRational,
        eta: BigRational,
        hbar: BigRational,
        eps_bm: BigRational,
        delta1: BigRational,
        delta2: BigRational,
        p0: BigInt,
    ) -> Result<Self> {
        let eps_prime = eta.clone().min(eps_bm.clone() / BigInt::from(2));
        let q = solve_min_q(&delta1, &delta2, &ell, &eps_prime, &p0)?;
        let t_q_squared = &delta2 * &delta2 * BigRational::from_integer(q.clone());
        let ledger = ConstantsLedger {
            b0,
            b: b0.checked_mul(4).ok_or_else(|| Error::Overflow("B = 4·B0".into()))?,
            big_m,
            ell,
            eps_bm,
            eps_prime,
            delta1,
            delta2,
            eta,
            hbar,
            p0,
            q,
            t_q_squared,
        };
        ledger.validate()?;
        Ok(ledger)
    }

    /// Checks the structural identities between the constants.
    pub fn validate(&self) -> Result<()> {
        if self.b0 == 0 {
            return Err(Error::InvalidLedger("B0 must be a positive integer".into()));
        }
        if self.b != 4 * self.b0 {
            return Err(Error::InvalidLedger("B must equal 4·B0".into()));
        }
        if self.big_m < 3 {
            return Err(Error::InvalidLedger("M must be at least 3".into()));
        }
        if self.big_m <= self.b0 {
            return Err(Error::InvalidLedger("M must exceed B0".into()));
        }
        for (name, v) in [
            ("ell", &self.ell),
            ("eps_BM", &self.eps_bm),
            ("eps_prime", &self.eps_prime),
            ("delta1", &self.delta1),
            ("delta2", &self.delta2),
            ("eta", &self.eta),
            ("hbar", &self.hbar),
        ] {
            if !v.is_positive() {
                return Err(Error::InvalidLedger(format!("{name} must be positive")));
            }
        }
        if self.eps_bm >= self.ell {
            return Err(Error::InvalidLedger("eps_BM must be smaller than ell".into()));
        }
        let half_bm = &self.eps_bm / BigInt::from(2);
        if self.eps_prime != self.eta.clone().min(half_bm) {
            return Err(Error::InvalidLedger(
                "eps_prime must equal min(eta, eps_BM/2)".into(),
            ));
        }
        if !self.p0.is_positive() {
            return Err(Error::InvalidLedger("p0 must be a positive integer".into()));
        }
        if self.q <= self.p0 {
            return Err(Error::InvalidLedger("q must exceed p0".into()));
        }
        let expected = &self.delta2 * &self.delta2 * BigRational::from_integer(self.q.clone());
        if self.t_q_squared != expected {
            return Err(Error::InvalidLedger("T_q_squared must equal delta2²·q".into()));
        }
        Ok(())
    }

    /// Whether the ledger's own `q` passes each of the four chain-length
    /// inequalities, certified.
    pub fn chain_length_report(&self) -> Result<[bool; 4]> {
        let sums =
            chain_length_inequalities(&self.delta1, &self.delta2, &self.ell, &self.eps_prime, &self.p0);
        let q = BigRational::from_integer(self.q.clone());
        let mut out = [false; 4];
        for (slot, sum) in out.iter_mut().zip(&sums) {
            *slot = sum.sign_at(&q)? == Ordering::Greater;
        }
        Ok(out)
    }

    /// `0 ≤ x` and `x ≤ T_q`, decided exactly by comparing squares.
    pub fn within_t_q(&self, x: &BigRational) -> bool {
        !x.is_negative() && x * x <= self.t_q_squared
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let ledger: ConstantsLedger = serde_json::from_str(json)?;
        ledger.validate()?;
        Ok(ledger)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger serialization cannot fail")
    }
}

/// The four polynomial-in-`q^{1/30}` inequalities that an admissible chain
/// length must satisfy, as power sums that are required to be positive.
/// Exponents are in thirtieths: `q^{1/2} = x^15`, `q^{2/3} = x^20`,
/// `q^{4/5} = x^24`, `q^{5/6} = x^25`.
pub fn chain_length_inequalities(
    delta1: &BigRational,
    delta2: &BigRational,
    ell: &BigRational,
    eps_prime: &BigRational,
    p0: &BigInt,
) -> [PowerSum; 4] {
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));
    let d1d2 = delta1 * delta2;
    // q^{2/3} > 4δ₂q½/ℓ + 6δ₁δ₂q½ + 9δ₂q½/ε′
    let first = PowerSum::term(20, r(1))
        .with_term(15, -(r(4) * delta2 / ell + r(6) * &d1d2 + r(9) * delta2 / eps_prime));
    // q^{4/5} > 7q^{2/3} + 4δ₂q½/ℓ + 4δ₁δ₂q½ + 7δ₂q½/ε′
    let second = PowerSum::term(24, r(1))
        .with_term(20, r(-7))
        .with_term(15, -(r(4) * delta2 / ell + r(4) * &d1d2 + r(7) * delta2 / eps_prime));
    // q^{5/6} > 8q^{4/5} + 8q^{2/3} + 2δ₂q½/ℓ + 4δ₁δ₂q½ + 8δ₂q½/ε′
    let third = PowerSum::term(25, r(1))
        .with_term(24, r(-8))
        .with_term(20, r(-8))
        .with_term(15, -(r(2) * delta2 / ell + r(4) * &d1d2 + r(8) * delta2 / eps_prime));
    // q − p₀ > q^{5/6} + q^{4/5} + q^{2/3} + δ₂q½/ε′
    let fourth = PowerSum::term(30, r(1))
        .with_term(25, r(-1))
        .with_term(24, r(-1))
        .with_term(20, r(-1))
        .with_term(15, -(delta2 / eps_prime))
        .with_term(0, -BigRational::from_integer(p0.clone()));
    [first, second, third, fourth]
}

fn satisfies_all(sums: &[PowerSum; 4], q: &BigInt, start_bits: u64) -> Result<bool> {
    let qr = BigRational::from_integer(q.clone());
    for sum in sums {
        if sum.sign_at_from(&qr, start_bits)? != Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal integer `q > p0` passing all four chain-length inequalities.
///
/// The satisfied-set is found by doubling from `p0 + 1` until a satisfying
/// point appears, then binary search; the result `q*` is certified to
/// satisfy all four inequalities while `q* − 1` fails at least one.
pub fn solve_min_q(
    delta1: &BigRational,
    delta2: &BigRational,
    ell: &BigRational,
    eps_prime: &BigRational,
    p0: &BigInt,
) -> Result<BigInt> {
    for (name, v) in [("delta1", delta1), ("delta2", delta2), ("ell", ell), ("eps_prime", eps_prime)]
    {
        if !v.is_positive() {
            return Err(Error::invalid_input(format!("{name} must be positive")));
        }
    }
    if !p0.is_positive() {
        return Err(Error::invalid_input("p0 must be a positive integer"));
    }
    let sums = chain_length_inequalities(delta1, delta2, ell, eps_prime, p0);
    let mut lo = p0.clone();
    let mut hi = p0 + BigInt::one();
    while !satisfies_all(&sums, &hi, 32)? {
        lo = hi.clone();
        hi *= 2;
    }
    // Invariant: hi satisfies, lo does not (or is the excluded p0 itself).
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&hi + &lo) / 2;
        if satisfies_all(&sums, &mid, 32)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// All action values attainable by orbit sets over `actions` with total
/// action at most `cap`; `per_orbit_cap` bounds each multiplicity when set.
fn attainable_actions(
    actions: &[BigRational],
    per_orbit_cap: Option<u64>,
    cap: &BigRational,
) -> BTreeSet<BigRational> {
    let mut sums = BTreeSet::new();
    sums.insert(BigRational::zero());
    for a in actions {
        let prev: Vec<BigRational> = sums.iter().cloned().collect();
        for s in prev {
            let mut k = 1u64;
            loop {
                if per_orbit_cap.is_some_and(|m| k > m) {
                    break;
                }
                let v = &s + a * BigInt::from(k);
                if v > *cap {
                    break;
                }
                sums.insert(v);
                k += 1;
            }
        }
        if sums.len() > 2_000_000 {
            // Defensive: the caller controls the cap; refuse to grind
            // through astronomically fine catalogs instead of hanging.
            break;
        }
    }
    sums
}

/// The action-gap constant for multiplicity threshold `M`: the smallest
/// positive gap realized by either of the two enumerated families — distances
/// between bounded-multiplicity action sums and arbitrary attainable actions,
/// and values `|d + z·A(γ)|` with `d` a difference of bounded sums and `z`
/// an integer weight capped through `action_cap`.
pub fn eps_m(catalog: &Catalog, big_m: u64, action_cap: &BigRational) -> Result<BigRational> {
    if catalog.is_empty() {
        return Err(Error::InvalidCatalog("empty catalog".into()));
    }
    if big_m == 0 {
        return Err(Error::invalid_input("multiplicity threshold must be positive"));
    }
    if !action_cap.is_positive() {
        return Err(Error::invalid_input("action cap must be positive"));
    }
    let actions: Vec<BigRational> = catalog.orbits().map(|o| o.action.clone()).collect();
    let bounded = attainable_actions(&actions, Some(big_m), action_cap);
    let all = attainable_actions(&actions, None, action_cap);

    let mut best: Option<BigRational> = None;
    let mut consider = |v: BigRational| {
        if v.is_positive() && best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    };
    for s in &bounded {
        for a in &all {
            consider((s - a).abs());
        }
    }

    let max_bounded = bounded.iter().max().cloned().unwrap_or_else(BigRational::zero);
    let weight_cap = action_cap + &max_bounded;
    let mut differences = BTreeSet::new();
    for s1 in &bounded {
        for s2 in &bounded {
            differences.insert(s1 - s2);
        }
    }
    for a in &actions {
        let z_max = (&weight_cap / a).floor().to_integer();
        let mut z = -z_max.clone();
        while z <= z_max {
            let shift = a * &z;
            for d in &differences {
                consider((d + &shift).abs());
            }
            z += 1;
        }
    }
    best.ok_or_else(|| Error::invalid_input("no positive action gaps within the cap"))
}

/// Largest denominator among the rational parts of the catalog's rotation
/// numbers (1 if all are integers).
pub fn rotation_denominator_bound(catalog: &Catalog) -> Result<u64> {
    if catalog.is_empty() {
        return Err(Error::InvalidCatalog("empty catalog".into()));
    }
    let mut best = BigInt::one();
    for orbit in catalog.orbits() {
        let denom = orbit.rotation.value().denom().clone();
        if denom > best {
            best = denom;
        }
    }
    best.to_u64().ok_or_else(|| Error::Overflow("rotation denominator bound".into()))
}

/// Smallest admissible multiplicity threshold for a catalog: at least 3,
/// strictly above the rotation-denominator bound, and strictly above
/// `2/θ̄` for every rotation class with nonzero fractional part `θ̄`
/// (distance of the rational part to the nearest integer).
pub fn choose_m(catalog: &Catalog) -> Result<u64> {
    let b0 = rotation_denominator_bound(catalog)?;
    let mut m = 3u64.max(b0.checked_add(1).ok_or_else(|| Error::Overflow("M".into()))?);
    let one = BigRational::one();
    for orbit in catalog.orbits() {
        let r = orbit.rotation.value();
        let frac = r - r.floor();
        if frac.is_zero() {
            continue;
        }
        let theta_bar = frac.clone().min(&one - &frac);
        let least = (BigRational::from_integer(BigInt::from(2)) / theta_bar)
            .floor()
            .to_integer()
            + BigInt::one();
        let least = least.to_u64().ok_or_else(|| Error::Overflow("M".into()))?;
        m = m.max(least);
    }
    Ok(m)
}

/// One link of a chain audit plus the ledger it is audited against.  Step
/// `k` (0-based) is the curve from generator `p0+1+k` down to `p0+k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub steps: Vec<UCurveRecord>,
    pub ledger: ConstantsLedger,
}

impl ChainRecord {
    pub fn new(steps: Vec<UCurveRecord>, ledger: ConstantsLedger, catalog: &Catalog) -> Result<Self> {
        let chain = ChainRecord { steps, ledger };
        chain.validate(catalog)?;
        Ok(chain)
    }

    /// Chain condition, null homology labels, per-record validity, ledger
    /// consistency, and the length identity `q − p0 = #steps`.
    pub fn validate(&self, catalog: &Catalog) -> Result<()> {
        self.ledger.validate()?;
        if self.steps.is_empty() {
            return Err(Error::InvalidChain("chain has no steps".into()));
        }
        let span = &self.ledger.q - &self.ledger.p0;
        if span != BigInt::from(self.steps.len()) {
            return Err(Error::InvalidChain(format!(
                "ledger spans {span} generators but the chain has {} steps",
                self.steps.len()
            )));
        }
        for (k, step) in self.steps.iter().enumerate() {
            step.validate(catalog)?;
            if k > 0 && step.beta != self.steps[k - 1].alpha {
                return Err(Error::InvalidChain(format!(
                    "step {k} starts from a generator that step {} does not produce",
                    k - 1
                )));
            }
        }
        let mut sets: Vec<&OrbitSet> = vec![&self.steps[0].beta];
        sets.extend(self.steps.iter().map(|s| &s.alpha));
        for set in sets {
            if set.homology_class(catalog)?.iter().any(|&c| c != 0) {
                return Err(Error::InvalidChain(
                    "all chain generators must have null homology label".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("chain serialization cannot fail")
    }
}

/// Step classes of the counting argument: `G0` = action rise at least `ε′`;
/// among low-energy steps, `G1`/`G2` have total score zero and `J₀` 1/2
/// respectively, `G3` has positive total score.  Low-energy steps fitting
/// none of those patterns are counted as `Unclassified` (an honest chain has
/// none).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GClass {
    G0,
    G1,
    G2,
    G3,
    Unclassified,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepAudit {
    /// Absolute generator index `i ∈ {p0+1, …, q}` this step lands on.
    #[serde(with = "bigint_serde")]
    pub index: BigInt,
    #[serde(with = "rational_serde")]
    pub action_rise: BigRational,
    pub low_energy: bool,
    #[serde(with = "bigint_serde")]
    pub j0: BigInt,
    #[serde(with = "bigint_serde")]
    pub t: BigInt,
    pub class: GClass,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub g0: u64,
    pub g1: u64,
    pub g2: u64,
    pub g3: u64,
    pub unclassified: u64,
}

impl ClassCounts {
    pub fn total(&self) -> u64 {
        self.g0 + self.g1 + self.g2 + self.g3 + self.unclassified
    }
}

/// Outcomes of the aggregate checks, with the exact quantities they were
/// decided on.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditChecks {
    /// Every step fell into one of the four classes.
    pub classes_exhaustive: bool,
    /// `|G0| ≤ T_q/ε′`, compared via squares.
    pub g0_within_budget: bool,
    /// `Σ (J₀ − I)` over the chain equals the boundary difference of
    /// `2⟨c₁, ·⟩ + CZ^top` between the bottom and top generators.
    pub telescoping_holds: bool,
    #[serde(with = "bigint_serde")]
    pub telescoping_lhs: BigInt,
    #[serde(with = "bigint_serde")]
    pub telescoping_rhs: BigInt,
    /// `Σ J₀ ≤ 2(q − p0) + 2δ₁T_q`.
    pub j0_sum_within_budget: bool,
    #[serde(with = "bigint_serde")]
    pub j0_sum: BigInt,
    /// `|G3| < q^{2/3}`, `|G1| < q^{4/5}`, `|G2| < q^{5/6}`.
    pub g3_within_bound: bool,
    pub g1_within_bound: bool,
    pub g2_within_bound: bool,
    /// The chain-length gap inequality
    /// `q − p0 > q^{5/6} + q^{4/5} + q^{2/3} + δ₂√q/ε′` at the ledger's `q`.
    pub length_gap_holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditReport {
    pub steps: Vec<StepAudit>,
    pub counts: ClassCounts,
    pub checks: AuditChecks,
}

impl AuditReport {
    pub fn all_checks_pass(&self) -> bool {
        let c = &self.checks;
        c.classes_exhaustive
            && c.g0_within_budget
            && c.telescoping_holds
            && c.j0_sum_within_budget
            && c.g3_within_bound
            && c.g1_within_bound
            && c.g2_within_bound
            && c.length_gap_holds
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Key/value TSV rendering of the counts and check verdicts.
    pub fn tsv_summary(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(k);
            out.push('\t');
            out.push_str(&v);
            out.push('\n');
        };
        line("steps", self.counts.total().to_string());
        line("g0", self.counts.g0.to_string());
        line("g1", self.counts.g1.to_string());
        line("g2", self.counts.g2.to_string());
        line("g3", self.counts.g3.to_string());
        line("unclassified", self.counts.unclassified.to_string());
        let verdict = |ok: bool| if ok { "pass".into() } else { "FAIL".into() };
        let c = &self.checks;
        line("classes_exhaustive", verdict(c.classes_exhaustive));
        line("g0_within_budget", verdict(c.g0_within_budget));
        line("telescoping_holds", verdict(c.telescoping_holds));
        line("telescoping_lhs", c.telescoping_lhs.to_string());
        line("telescoping_rhs", c.telescoping_rhs.to_string());
        line("j0_sum", c.j0_sum.to_string());
        line("j0_sum_within_budget", verdict(c.j0_sum_within_budget));
        line("g3_within_bound", verdict(c.g3_within_bound));
        line("g1_within_bound", verdict(c.g1_within_bound));
        line("g2_within_bound", verdict(c.g2_within_bound));
        line("length_gap_holds", verdict(c.length_gap_holds));
        line("all_checks", verdict(self.all_checks_pass()));
        out
    }
}

/// `2⟨c₁, ·⟩ + CZ^top` of a generator — the boundary term of the telescoping
/// identity.
fn boundary_term(set: &OrbitSet, catalog: &Catalog) -> Result<BigInt> {
    Ok(BigInt::from(2 * set.chern_pairing(catalog)?) + cz_top(set, catalog)?)
}

/// Replays the counting argument on an explicit chain: classifies every step
/// into `G0`–`G3` and verifies the aggregate identities and bounds against
/// the ledger.  Nothing is asserted; every verdict lands in the report.
pub fn audit_chain(chain: &ChainRecord, catalog: &Catalog) -> Result<AuditReport> {
    chain.validate(catalog)?;
    let ledger = &chain.ledger;

    let mut steps = Vec::with_capacity(chain.steps.len());
    let mut counts = ClassCounts::default();
    let mut j0_sum = BigInt::zero();
    let mut telescoping_lhs = BigInt::zero();
    for (k, rec) in chain.steps.iter().enumerate() {
        let rise = rec.alpha.action(catalog)? - rec.beta.action(catalog)?;
        let low_energy = rise < ledger.eps_prime;
        let score = total_score(rec, catalog, ledger.big_m)?;
        let i = ech_index(&rec.alpha, &rec.beta, &rec.rel, catalog)?;
        j0_sum += &score.j0;
        telescoping_lhs += &score.j0 - &i;
        let class = if !low_energy {
            GClass::G0
        } else if score.t.is_positive() {
            GClass::G3
        } else if score.t.is_zero() && score.j0 == BigInt::one() {
            GClass::G1
        } else if score.t.is_zero() && score.j0 == BigInt::from(2) {
            GClass::G2
        } else {
            GClass::Unclassified
        };
        match class {
            GClass::G0 => counts.g0 += 1,
            GClass::G1 => counts.g1 += 1,
            GClass::G2 => counts.g2 += 1,
            GClass::G3 => counts.g3 += 1,
            GClass::Unclassified => counts.unclassified += 1,
        }
        steps.push(StepAudit {
            index: &ledger.p0 + BigInt::from(k + 1),
            action_rise: rise,
            low_energy,
            j0: score.j0,
            t: score.t,
            class,
        });
    }

    // |G0|·ε′ ≤ T_q, squared to stay rational.
    let g0_action = BigRational::from_integer(BigInt::from(counts.g0)) * &ledger.eps_prime;
    let g0_within_budget = &g0_action * &g0_action <= ledger.t_q_squared;

    let telescoping_rhs = boundary_term(&chain.steps[0].beta, catalog)?
        - boundary_term(&chain.steps.last().expect("validated nonempty").alpha, catalog)?;
    let telescoping_holds = telescoping_lhs == telescoping_rhs;

    // Σ J₀ ≤ 2(q − p0) + 2δ₁T_q  ⟺  D ≤ 0 or D² ≤ 4δ₁²T_q² with
    // D = Σ J₀ − 2(q − p0).
    let excess = &j0_sum - BigInt::from(2) * (&ledger.q - &ledger.p0);
    let j0_sum_within_budget = if excess.is_positive() {
        let e = BigRational::from_integer(excess);
        let budget =
            BigRational::from_integer(BigInt::from(4)) * &ledger.delta1 * &ledger.delta1 * &ledger.t_q_squared;
        &e * &e <= budget
    } else {
        true
    };

    // |G3| < q^{2/3} ⟺ |G3|³ < q², and likewise for the other two: the
    // classes are integers, so clearing the fractional power is exact.
    let count_bound = |count: u64, pow_count: u32, pow_q: u32| -> bool {
        BigInt::from(count).pow(pow_count) < ledger.q.clone().pow(pow_q)
    };
    let g3_within_bound = count_bound(counts.g3, 3, 2);
    let g1_within_bound = count_bound(counts.g1, 5, 4);
    let g2_within_bound = count_bound(counts.g2, 6, 5);

    let sums = chain_length_inequalities(
        &ledger.delta1,
        &ledger.delta2,
        &ledger.ell,
        &ledger.eps_prime,
        &ledger.p0,
    );
    let length_gap_holds =
        sums[3].sign_at(&BigRational::from_integer(ledger.q.clone()))? == Ordering::Greater;

    let checks = AuditChecks {
        classes_exhaustive: counts.unclassified == 0,
        g0_within_budget,
        telescoping_holds,
        telescoping_lhs,
        telescoping_rhs,
        j0_sum_within_budget,
        j0_sum,
        g3_within_bound,
        g1_within_bound,
        g2_within_bound,
        length_gap_holds,
    };
    Ok(AuditReport { steps, counts, checks })
}

/// Verdict of the action-difference dichotomy for a pair of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dichotomy {
    /// `|𝒜(α) − 𝒜(β)| ≤ h̄/2`.
    Near,
    /// `|𝒜(α) − 𝒜(β)| ≥ ε′`.
    Separated,
    /// Strictly between the two thresholds: the dichotomy fails for this
    /// ledger.
    MiddleBand,
    /// The hypotheses (action within `T_q`, `|α|+|β| ≤ 4`, complexity
    /// pattern) do not hold, so the dichotomy says nothing.
    NotApplicable,
}

impl Dichotomy {
    pub fn label(self) -> &'static str {
        match self {
            Dichotomy::Near => "near",
            Dichotomy::Separated => "separated",
            Dichotomy::MiddleBand => "dichotomy-violated",
            Dichotomy::NotApplicable => "neither-applicable",
        }
    }
}

fn high_multiplicity_support<'a>(set: &'a OrbitSet, m: u64) -> Vec<&'a str> {
    set.iter().filter(|&(_, mult)| mult > m).map(|(id, _)| id).collect()
}

/// Classifies the exact action difference of two generators against `h̄/2`
/// and `ε′`, after checking the hypotheses under which the dichotomy is
/// asserted: both actions within `T_q`, at most four orbits in total, and
/// either one side has complexity at most `M` or both sides exceed `M` only
/// at one and the same simple orbit.
pub fn threshold_dichotomy(
    alpha: &OrbitSet,
    beta: &OrbitSet,
    catalog: &Catalog,
    ledger: &ConstantsLedger,
) -> Result<Dichotomy> {
    ledger.validate()?;
    let a = alpha.action(catalog)?;
    let b = beta.action(catalog)?;
    if !ledger.within_t_q(&a) || !ledger.within_t_q(&b) {
        return Ok(Dichotomy::NotApplicable);
    }
    if alpha.cardinality() + beta.cardinality() > 4 {
        return Ok(Dichotomy::NotApplicable);
    }
    let m = ledger.big_m;
    let complexity_ok = alpha.complexity() <= m || beta.complexity() <= m || {
        let ha = high_multiplicity_support(alpha, m);
        let hb = high_multiplicity_support(beta, m);
        ha.len() == 1 && hb.len() == 1 && ha[0] == hb[0]
    };
    if !complexity_ok {
        return Ok(Dichotomy::NotApplicable);
    }
    let diff = (a - b).abs();
    if &diff * BigInt::from(2) <= ledger.hbar {
        Ok(Dichotomy::Near)
    } else if diff >= ledger.eps_prime {
        Ok(Dichotomy::Separated)
    } else {
        Ok(Dichotomy::MiddleBand)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::PerturbedRational;
    use crate::index::RelClassData;
    use crate::orbits::{OrbitKind, SimpleOrbit};
    use crate::partitions::EndSign;
    use crate::score::CurveEnd;
    use std::collections::BTreeMap;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn orbit(id: &str, action: BigRational, rotation: &str, chern: i64) -> SimpleOrbit {
        SimpleOrbit {
            id: id.into(),
            action,
            rotation: rotation.parse::<PerturbedRational>().unwrap(),
            kind: OrbitKind::Elliptic,
            chern,
            homology: vec![],
        }
    }

    fn set(pairs: &[(&str, u64)]) -> OrbitSet {
        OrbitSet::from_pairs(pairs.iter().map(|&(id, m)| (id.to_string(), m))).unwrap()
    }

    fn end(orbit: &str, sign: EndSign, cover: u64) -> CurveEnd {
        CurveEnd { orbit: orbit.into(), sign, cover }
    }

    /// Ledger with a hand-picked small q for chain tests: q − p0 = 2.
    fn small_ledger() -> ConstantsLedger {
        ConstantsLedger {
            b0: 1,
            b: 4,
            big_m: 3,
            ell: rat(1, 2),
            eps_bm: rat(1, 4),
            eps_prime: rat(1, 8),
            delta1: int(1),
            delta2: int(1),
            eta: rat(1, 2),
            hbar: rat(1, 10),
            p0: BigInt::from(1),
            q: BigInt::from(3),
            t_q_squared: int(3),
        }
    }

    /// Catalog of three low-action orbits used to build a two-step chain
    /// where each step adds one orbit via a single positive end.
    fn chain_catalog(third_action: BigRational) -> Catalog {
        Catalog::new(vec![
            orbit("u1", int(1), "e", 0),
            orbit("u2", rat(1, 16), "e", -1),
            orbit("u3", third_action, "e", 1),
        ])
        .unwrap()
    }

    /// Step adding `added` (multiplicity 1, one positive end) on top of the
    /// trivial rest; q_tau is solved so that J₀ comes out as requested.
    fn growth_step(base: &OrbitSet, added: &str, chern: i64, j0_target: i64) -> UCurveRecord {
        let alpha = base.union(&set(&[(added, 1)]));
        let trivial: BTreeMap<String, u64> =
            base.iter().map(|(id, m)| (id.to_string(), m)).collect();
        let q_tau = j0_target + chern;
        let i = chern + q_tau + 1; // all rotations ε: Σcz over one fresh cover-1 orbit
        UCurveRecord {
            alpha,
            beta: base.clone(),
            genus: 0,
            ends: vec![end(added, EndSign::Positive, 1)],
            trivial_cylinders: trivial,
            rel: RelClassData::new(chern, q_tau),
            declared_i: i,
        }
    }

    fn two_step_chain(third_action: BigRational) -> (Catalog, ChainRecord) {
        let catalog = chain_catalog(third_action);
        let base = set(&[("u1", 1)]);
        let step1 = growth_step(&base, "u2", -1, 2);
        let step2 = growth_step(&step1.alpha, "u3", 1, 3);
        let chain =
            ChainRecord::new(vec![step1, step2], small_ledger(), &catalog).expect("valid chain");
        (catalog, chain)
    }

    #[test]
    fn ledger_validates_and_round_trips() {
        let ledger = small_ledger();
        ledger.validate().unwrap();
        let back = ConstantsLedger::from_json(&ledger.to_json()).unwrap();
        assert_eq!(back, ledger);
    }

    #[test]
    fn ledger_rejects_broken_identities() {
        let mut ledger = small_ledger();
        ledger.b = 5;
        assert!(ledger.validate().is_err());

        let mut ledger = small_ledger();
        ledger.eps_prime = int(1);
        assert!(ledger.validate().is_err());

        let mut ledger = small_ledger();
        ledger.big_m = 1;
        assert!(ledger.validate().is_err());

        let mut ledger = small_ledger();
        ledger.q = BigInt::from(1);
        assert!(ledger.validate().is_err());

        let mut ledger = small_ledger();
        ledger.t_q_squared = int(7);
        assert!(ledger.validate().is_err());
    }

    #[test]
    fn assembled_ledger_passes_all_chain_length_checks() {
        let ledger = ConstantsLedger::assemble(
            1,
            3,
            int(1),
            int(1),
            int(1),
            rat(1, 2),
            int(1),
            int(1),
            BigInt::from(1),
        )
        .unwrap();
        assert_eq!(ledger.eps_prime, rat(1, 4));
        assert_eq!(ledger.chain_length_report().unwrap(), [true; 4]);
        assert!(ledger.q > BigInt::from(10).pow(20));
    }

    #[test]
    fn solver_result_is_a_boundary_point() {
        let q = solve_min_q(&int(1), &int(1), &int(1), &int(1), &BigInt::from(1)).unwrap();
        let sums = chain_length_inequalities(&int(1), &int(1), &int(1), &int(1), &BigInt::from(1));
        assert!(satisfies_all(&sums, &q, 64).unwrap());
        assert!(!satisfies_all(&sums, &(&q - 1), 64).unwrap());
        // The third inequality forces q^{1/30} a bit past 8.
        assert!(q > BigInt::from(8).pow(30));
        assert!(q < BigInt::from(9).pow(30));
    }

    #[test]
    fn solver_rejects_nonpositive_inputs() {
        assert!(solve_min_q(&int(0), &int(1), &int(1), &int(1), &BigInt::from(1)).is_err());
        assert!(solve_min_q(&int(1), &int(1), &int(1), &int(1), &BigInt::from(0)).is_err());
    }

    #[test]
    fn action_gap_single_unit_orbit() {
        let catalog = Catalog::new(vec![orbit("a", int(1), "e", 0)]).unwrap();
        assert_eq!(eps_m(&catalog, 2, &int(5)).unwrap(), int(1));
    }

    #[test]
    fn action_gap_two_orbit_catalog() {
        let catalog =
            Catalog::new(vec![orbit("a", int(1), "e", 0), orbit("b", rat(3, 2), "e", 0)]).unwrap();
        assert_eq!(eps_m(&catalog, 1, &int(4)).unwrap(), rat(1, 2));
    }

    #[test]
    fn action_gap_thirds() {
        let catalog = Catalog::new(vec![orbit("a", rat(2, 3), "e", 0)]).unwrap();
        assert_eq!(eps_m(&catalog, 3, &int(3)).unwrap(), rat(2, 3));
    }

    #[test]
    fn action_gap_rejects_empty_catalog() {
        let catalog = Catalog::new(vec![]).unwrap();
        assert!(matches!(eps_m(&catalog, 2, &int(5)), Err(Error::InvalidCatalog(_))));
    }

    #[test]
    fn threshold_choice_follows_rotation_classes() {
        let catalog = Catalog::new(vec![orbit("a", int(1), "1/3+e", 0)]).unwrap();
        assert_eq!(choose_m(&catalog).unwrap(), 7);

        let catalog = Catalog::new(vec![SimpleOrbit {
            id: "h".into(),
            action: int(1),
            rotation: "1/2".parse().unwrap(),
            kind: OrbitKind::NegativeHyperbolic,
            chern: 0,
            homology: vec![],
        }])
        .unwrap();
        assert_eq!(choose_m(&catalog).unwrap(), 5);

        let catalog = Catalog::new(vec![orbit("a", int(1), "e", 0)]).unwrap();
        assert_eq!(choose_m(&catalog).unwrap(), 3);
    }

    #[test]
    fn two_step_chain_audit_balances() {
        let (catalog, chain) = two_step_chain(rat(1, 16));
        let report = audit_chain(&chain, &catalog).unwrap();
        assert_eq!(report.counts, ClassCounts { g0: 0, g1: 0, g2: 1, g3: 1, unclassified: 0 });
        let c = &report.checks;
        assert!(c.classes_exhaustive);
        assert!(c.telescoping_holds);
        assert_eq!(c.telescoping_lhs, BigInt::from(-2));
        assert_eq!(c.telescoping_rhs, BigInt::from(-2));
        assert_eq!(c.j0_sum, BigInt::from(5));
        assert!(c.j0_sum_within_budget);
        assert!(c.g0_within_budget && c.g1_within_bound && c.g2_within_bound && c.g3_within_bound);
        // Hand-picked q = 3 is far below the certified chain-length bound.
        assert!(!c.length_gap_holds);
        assert!(!report.all_checks_pass());
        assert!(report.tsv_summary().contains("telescoping_holds\tpass"));
    }

    #[test]
    fn action_jump_is_counted_as_g0() {
        let (catalog, chain) = two_step_chain(int(1)); // rise 1 ≥ ε′ = 1/8
        let report = audit_chain(&chain, &catalog).unwrap();
        assert_eq!(report.counts.g0, 1);
        assert_eq!(report.steps[1].class, GClass::G0);
        assert!(!report.steps[1].low_energy);
    }

    #[test]
    fn chain_condition_violation_is_rejected() {
        let catalog = chain_catalog(rat(1, 16));
        let base = set(&[("u1", 1)]);
        let step1 = growth_step(&base, "u2", -1, 2);
        let step2 = growth_step(&base, "u3", 1, 3); // skips u2: breaks the chain
        let err = ChainRecord::new(vec![step1, step2], small_ledger(), &catalog).unwrap_err();
        assert!(matches!(err, Error::InvalidChain(_)));
    }

    #[test]
    fn chain_length_must_match_ledger_span() {
        let catalog = chain_catalog(rat(1, 16));
        let base = set(&[("u1", 1)]);
        let step1 = growth_step(&base, "u2", -1, 2);
        let err = ChainRecord::new(vec![step1], small_ledger(), &catalog).unwrap_err();
        assert!(matches!(err, Error::InvalidChain(_)));
    }

    #[test]
    fn dichotomy_examples() {
        let catalog = Catalog::new(vec![
            orbit("a", rat(1, 4), "e", 0),
            orbit("b", rat(1, 4) + rat(1, 8), "e", 0),
            orbit("c", rat(5, 16), "e", 0),
        ])
        .unwrap();
        let ledger = small_ledger(); // ε′ = 1/8, h̄ = 1/10, T_q² = 3
        let a = set(&[("a", 1)]);
        let b = set(&[("b", 1)]);
        let c = set(&[("c", 1)]);
        assert_eq!(threshold_dichotomy(&a, &a, &catalog, &ledger).unwrap(), Dichotomy::Near);
        // |1/4 − 3/8| = 1/8 = ε′ exactly: boundary is separated.
        assert_eq!(threshold_dichotomy(&a, &b, &catalog, &ledger).unwrap(), Dichotomy::Separated);
        // |1/4 − 5/16| = 1/16: above h̄/2 = 1/20, below ε′.
        assert_eq!(threshold_dichotomy(&a, &c, &catalog, &ledger).unwrap(), Dichotomy::MiddleBand);
    }

    #[test]
    fn dichotomy_hypothesis_failures() {
        let catalog = Catalog::new(vec![
            orbit("a", rat(1, 4), "e", 0),
            orbit("b", rat(1, 8), "e", 0),
            orbit("c", rat(1, 16), "e", 0),
            orbit("d", rat(1, 32), "e", 0),
            orbit("e5", rat(1, 64), "e", 0),
            orbit("big", int(100), "e", 0),
        ])
        .unwrap();
        let ledger = small_ledger();
        // |α| + |β| = 5.
        let alpha = set(&[("a", 1), ("b", 1), ("c", 1)]);
        let beta = set(&[("d", 1), ("e5", 1)]);
        assert_eq!(
            threshold_dichotomy(&alpha, &beta, &catalog, &ledger).unwrap(),
            Dichotomy::NotApplicable
        );
        // Action beyond T_q.
        let huge = set(&[("big", 1)]);
        assert_eq!(
            threshold_dichotomy(&huge, &huge, &catalog, &ledger).unwrap(),
            Dichotomy::NotApplicable
        );
        // Both sides of complexity > M at different orbits (actions stay
        // within T_q: 9/16 and 9/32 against T_q = √3).
        let alpha = set(&[("c", 9)]);
        let beta = set(&[("d", 9)]);
        assert_eq!(
            threshold_dichotomy(&alpha, &beta, &catalog, &ledger).unwrap(),
            Dichotomy::NotApplicable
        );
        // Same high orbit on both sides is admissible; equal actions → near.
        assert_eq!(
            threshold_dichotomy(&alpha, &alpha, &catalog, &ledger).unwrap(),
            Dichotomy::Near
        );
    }

    #[test]
    fn unknown_ids_error_in_dichotomy() {
        let catalog = Catalog::new(vec![orbit("a", rat(1, 4), "e", 0)]).unwrap();
        let ledger = small_ledger();
        let ghost = set(&[("ghost", 1)]);
        assert!(matches!(
            threshold_dichotomy(&ghost, &ghost, &catalog, &ledger),
            Err(Error::UnknownOrbit(_))
        ));
    }
}
