//! Score calculus for index-2 curve records: component classifiers, orbit and
//! total scores, per-orbit contributions, the T′ and K variants, record
//! validation against the partition conditions, and the Birkhoff-section
//! eligibility report.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::index::{e_gamma, ech_index, j0, j0_topological, RelClassData};
use crate::orbits::{Catalog, OrbitKind, OrbitSet};
use crate::partitions::{
    check_partition_conditions, negative_parts, positive_parts, EndSign, Partition,
};
use crate::{Error, Result};

/// One puncture of the nontrivial component: which orbit it covers, on which
/// side, and with what covering multiplicity.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CurveEnd {
    pub orbit: String,
    pub sign: EndSign,
    pub cover: u64,
}

/// A combinatorial record of a U-curve C = C₀ + C₁: the orbit sets it runs
/// between, the genus and ends of the nontrivial component C₁, the trivial
/// cylinder multiplicities of C₀, relative-class data, and the declared ECH
/// index.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct UCurveRecord {
    pub alpha: OrbitSet,
    pub beta: OrbitSet,
    #[serde(default)]
    pub genus: u32,
    #[serde(default)]
    pub ends: Vec<CurveEnd>,
    #[serde(default, rename = "trivial", skip_serializing_if = "BTreeMap::is_empty")]
    pub trivial_cylinders: BTreeMap<String, u64>,
    #[serde(flatten)]
    pub rel: RelClassData,
    #[serde(rename = "I")]
    pub declared_i: i64,
}

impl UCurveRecord {
    /// Validating constructor; see [`UCurveRecord::validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: OrbitSet,
        beta: OrbitSet,
        genus: u32,
        ends: Vec<CurveEnd>,
        trivial_cylinders: BTreeMap<String, u64>,
        rel: RelClassData,
        declared_i: i64,
        catalog: &Catalog,
    ) -> Result<Self> {
        let record =
            Self::new_unchecked(alpha, beta, genus, ends, trivial_cylinders, rel, declared_i);
        record.validate(catalog)?;
        Ok(record)
    }

    /// Builds the record without validation, for deliberately broken inputs
    /// in negative tests.
    #[allow(clippy::too_many_arguments)]
    pub fn new_unchecked(
        alpha: OrbitSet,
        beta: OrbitSet,
        genus: u32,
        ends: Vec<CurveEnd>,
        mut trivial_cylinders: BTreeMap<String, u64>,
        rel: RelClassData,
        declared_i: i64,
    ) -> Self {
        trivial_cylinders.retain(|_, &mut m| m > 0);
        UCurveRecord { alpha, beta, genus, ends, trivial_cylinders, rel, declared_i }
    }

    pub fn from_json(json: &str, catalog: &Catalog) -> Result<Self> {
        let record: UCurveRecord = serde_json::from_str(json)?;
        record.validate(catalog)?;
        Ok(record)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn trivial_multiplicity(&self, orbit: &str) -> u64 {
        self.trivial_cylinders.get(orbit).copied().unwrap_or(0)
    }

    pub fn ends_at<'a>(
        &'a self,
        orbit: &'a str,
        sign: EndSign,
    ) -> impl Iterator<Item = &'a CurveEnd> {
        self.ends.iter().filter(move |e| e.orbit == orbit && e.sign == sign)
    }

    /// Distinct orbits carrying at least one end of C₁.
    pub fn orbits_with_ends(&self) -> impl Iterator<Item = &str> {
        self.ends
            .iter()
            .map(|e| e.orbit.as_str())
            .collect::<BTreeSet<_>>()
            .into_iter()
    }

    /// Multiset of end covers at one orbit and sign, as a partition.
    pub fn end_partition(&self, orbit: &str, sign: EndSign) -> Result<Partition> {
        Partition::new(self.ends_at(orbit, sign).map(|e| e.cover).collect())
    }

    fn orbit_side_total(&self, orbit: &str, sign: EndSign) -> u64 {
        self.trivial_multiplicity(orbit)
            + self.ends_at(orbit, sign).map(|e| e.cover).sum::<u64>()
    }

    /// Structural checks: every end has positive cover and a catalog orbit;
    /// the side multiplicities decompose as trivial cylinders plus end
    /// covers; the declared index equals the computed ECH index; index-2
    /// records run between ECH generators; and the end partitions satisfy
    /// the splitting conditions at every orbit with ends, for all splits up
    /// to the trivial-cylinder multiplicity.
    pub fn validate(&self, catalog: &Catalog) -> Result<()> {
        for end in &self.ends {
            if end.cover == 0 {
                return Err(Error::InvalidRecord(format!(
                    "end at {} has zero cover",
                    end.orbit
                )));
            }
            catalog.get(&end.orbit)?;
        }
        for id in self.trivial_cylinders.keys() {
            catalog.get(id)?;
        }

        let mut involved: BTreeSet<&str> = self.alpha.support().collect();
        involved.extend(self.beta.support());
        involved.extend(self.ends.iter().map(|e| e.orbit.as_str()));
        involved.extend(self.trivial_cylinders.keys().map(String::as_str));
        for orbit in involved {
            for (side, sign) in [(&self.alpha, EndSign::Positive), (&self.beta, EndSign::Negative)]
            {
                let declared = side.multiplicity(orbit);
                let built = self.orbit_side_total(orbit, sign);
                if declared != built {
                    return Err(Error::InvalidRecord(format!(
                        "orbit {orbit}: {sign} side multiplicity {declared} != trivial + end covers {built}"
                    )));
                }
            }
        }

        let index = ech_index(&self.alpha, &self.beta, &self.rel, catalog)?;
        if index != BigInt::from(self.declared_i) {
            return Err(Error::InvalidRecord(format!(
                "declared index {} != computed ECH index {index}",
                self.declared_i
            )));
        }
        if self.declared_i == 2
            && !(self.alpha.is_ech_generator(catalog)?
                && self.beta.is_ech_generator(catalog)?)
        {
            return Err(Error::InvalidRecord(
                "an index-2 record must run between ECH generators".into(),
            ));
        }

        for orbit in self.orbits_with_ends().collect::<Vec<_>>() {
            let theta = &catalog.get(orbit)?.rotation;
            for (sign, total) in [
                (EndSign::Positive, self.alpha.multiplicity(orbit)),
                (EndSign::Negative, self.beta.multiplicity(orbit)),
            ] {
                let parts = self.end_partition(orbit, sign)?;
                if parts.is_empty() {
                    continue;
                }
                if !check_partition_conditions(theta, total, &parts, sign)? {
                    return Err(Error::InvalidRecord(format!(
                        "orbit {orbit}: {sign} end covers {parts} violate the partition conditions"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Does the record's class data reproduce the topological J₀? Holds exactly
/// when the declared (I, rel, ends) are mutually consistent.
pub fn is_index_consistent(curve: &UCurveRecord, catalog: &Catalog) -> Result<bool> {
    let lhs = j0(&curve.alpha, &curve.beta, &curve.rel, catalog)?;
    Ok(lhs == BigInt::from(j0_topological(curve)))
}

fn require_threshold(m_threshold: u64) -> Result<()> {
    if m_threshold < 3 {
        return Err(Error::invalid_input("the multiplicity threshold M must be >= 3"));
    }
    Ok(())
}

/// s(γ,α): multiplicity above one and no part equal to one in p⁺.
pub fn is_special_component(gamma: &str, alpha: &OrbitSet, catalog: &Catalog) -> Result<bool> {
    let m = alpha.multiplicity(gamma);
    if m <= 1 {
        return Ok(false);
    }
    let theta = &catalog.get(gamma)?.rotation;
    Ok(!positive_parts(theta, m).has_part(1))
}

/// p⁺(γ,α): the positive partition is the single part (m) and m ≥ M.
pub fn is_p_plus_component(
    gamma: &str,
    alpha: &OrbitSet,
    catalog: &Catalog,
    m_threshold: u64,
) -> Result<bool> {
    require_threshold(m_threshold)?;
    let m = alpha.multiplicity(gamma);
    if m < m_threshold {
        return Ok(false);
    }
    let theta = &catalog.get(gamma)?.rotation;
    Ok(positive_parts(theta, m).parts() == [m])
}

/// p⁻(γ,α): the negative partition is the single part (m) and m ≥ M.
pub fn is_p_minus_component(
    gamma: &str,
    alpha: &OrbitSet,
    catalog: &Catalog,
    m_threshold: u64,
) -> Result<bool> {
    require_threshold(m_threshold)?;
    let m = alpha.multiplicity(gamma);
    if m < m_threshold {
        return Ok(false);
    }
    let theta = &catalog.get(gamma)?.rotation;
    Ok(negative_parts(theta, m).parts() == [m])
}

/// S(α) = p⁺(α) + s(α) − p⁻(α), summed over the support.
pub fn orbit_score(alpha: &OrbitSet, catalog: &Catalog, m_threshold: u64) -> Result<i64> {
    require_threshold(m_threshold)?;
    let mut total = 0i64;
    for (gamma, _) in alpha.iter() {
        total += i64::from(is_p_plus_component(gamma, alpha, catalog, m_threshold)?);
        total += i64::from(is_special_component(gamma, alpha, catalog)?);
        total -= i64::from(is_p_minus_component(gamma, alpha, catalog, m_threshold)?);
    }
    Ok(total)
}

/// Total-score summary of one record.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TotalScore {
    #[serde(with = "crate::exactnum::bigint_serde")]
    pub j0: BigInt,
    /// y = J₀ − 2.
    #[serde(with = "crate::exactnum::bigint_serde")]
    pub y: BigInt,
    /// S = S(α) − S(β).
    pub s: i64,
    /// T = 3y + S.
    #[serde(with = "crate::exactnum::bigint_serde")]
    pub t: BigInt,
    /// T′ = 2y + S.
    #[serde(with = "crate::exactnum::bigint_serde")]
    pub t_prime: BigInt,
}

pub fn total_score(
    curve: &UCurveRecord,
    catalog: &Catalog,
    m_threshold: u64,
) -> Result<TotalScore> {
    let j0 = j0(&curve.alpha, &curve.beta, &curve.rel, catalog)?;
    let y = j0.clone() - 2;
    let s = orbit_score(&curve.alpha, catalog, m_threshold)?
        - orbit_score(&curve.beta, catalog, m_threshold)?;
    let t = BigInt::from(3) * &y + s;
    let t_prime = BigInt::from(2) * &y + s;
    Ok(TotalScore { j0, y, s, t, t_prime })
}

/// S_γ = (p⁺(γ,α) + s(γ,α) + p⁻(γ,β)) − (p⁺(γ,β) + s(γ,β) + p⁻(γ,α)).
pub fn s_gamma(
    curve: &UCurveRecord,
    gamma: &str,
    catalog: &Catalog,
    m_threshold: u64,
) -> Result<i64> {
    let a = &curve.alpha;
    let b = &curve.beta;
    let plus = i64::from(is_p_plus_component(gamma, a, catalog, m_threshold)?)
        + i64::from(is_special_component(gamma, a, catalog)?)
        + i64::from(is_p_minus_component(gamma, b, catalog, m_threshold)?);
    let minus = i64::from(is_p_plus_component(gamma, b, catalog, m_threshold)?)
        + i64::from(is_special_component(gamma, b, catalog)?)
        + i64::from(is_p_minus_component(gamma, a, catalog, m_threshold)?);
    Ok(plus - minus)
}

/// T_γ = S_γ + 3e_γ.
pub fn t_gamma(
    curve: &UCurveRecord,
    gamma: &str,
    catalog: &Catalog,
    m_threshold: u64,
) -> Result<i64> {
    Ok(s_gamma(curve, gamma, catalog, m_threshold)? + 3 * e_gamma(curve, gamma))
}

/// T′_γ = S_γ + 2e_γ.
pub fn t_prime_gamma(
    curve: &UCurveRecord,
    gamma: &str,
    catalog: &Catalog,
    m_threshold: u64,
) -> Result<i64> {
    Ok(s_gamma(curve, gamma, catalog, m_threshold)? + 2 * e_gamma(curve, gamma))
}

/// The K bookkeeping quantity: K(α) counts (negatively) the orbits of
/// multiplicity above one, and K = K(α) − K(β) + 2y.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct KScore {
    pub k_alpha: i64,
    pub k_beta: i64,
    #[serde(with = "crate::exactnum::bigint_serde")]
    pub y: BigInt,
    #[serde(with = "crate::exactnum::bigint_serde")]
    pub k: BigInt,
    /// K ≥ −8 holds on the records the counting argument admits; a failure
    /// here is a warning, not an error.
    pub meets_coarse_bound: bool,
}

fn k_of_set(set: &OrbitSet) -> i64 {
    -(set.iter().filter(|&(_, m)| m > 1).count() as i64)
}

pub fn k_score(curve: &UCurveRecord, catalog: &Catalog) -> Result<KScore> {
    let j0 = j0(&curve.alpha, &curve.beta, &curve.rel, catalog)?;
    let y = j0 - 2;
    let k_alpha = k_of_set(&curve.alpha);
    let k_beta = k_of_set(&curve.beta);
    let k = BigInt::from(k_alpha - k_beta) + BigInt::from(2) * &y;
    let meets_coarse_bound = k >= BigInt::from(-8);
    Ok(KScore { k_alpha, k_beta, y, k, meets_coarse_bound })
}

/// Combinatorially checkable parts of the Birkhoff-section criterion.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BirkhoffReport {
    pub at_least_two_ends: bool,
    pub genus_zero: bool,
    pub no_repeated_same_sign_ends: bool,
    pub no_positive_hyperbolic_ends: bool,
    /// The compactness condition is analytic and cannot be read off a
    /// record.
    pub compactness: &'static str,
}

impl BirkhoffReport {
    pub fn combinatorial_conditions_hold(&self) -> bool {
        self.at_least_two_ends
            && self.genus_zero
            && self.no_repeated_same_sign_ends
            && self.no_positive_hyperbolic_ends
    }
}

pub fn birkhoff_eligibility(curve: &UCurveRecord, catalog: &Catalog) -> Result<BirkhoffReport> {
    let mut no_repeated = true;
    let mut no_pos_hyp = true;
    for orbit in curve.orbits_with_ends().collect::<Vec<_>>() {
        for sign in [EndSign::Positive, EndSign::Negative] {
            if curve.ends_at(orbit, sign).count() > 1 {
                no_repeated = false;
            }
        }
        if catalog.get(orbit)?.kind == OrbitKind::PositiveHyperbolic {
            no_pos_hyp = false;
        }
    }
    Ok(BirkhoffReport {
        at_least_two_ends: curve.ends.len() >= 2,
        genus_zero: curve.genus == 0,
        no_repeated_same_sign_ends: no_repeated,
        no_positive_hyperbolic_ends: no_pos_hyp,
        compactness: "not combinatorially decidable",
    })
}
