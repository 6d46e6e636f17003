//! Index formulas: Conley–Zehnder indices (plain and δ-weighted), the ECH
//! index and its ambiguity, J₀ and its topological form, the weighted
//! Fredholm index, winding identities, and the automatic-transversality
//! hypothesis predicate.
//!
//! Two Conley–Zehnder conventions coexist deliberately: [`cz`] applies
//! ⌊θ⌋+⌈θ⌉ verbatim (including at exact integers), while [`weighted_cz`]
//! realizes the spectral-gap convention through an explicit weight δ. The two
//! agree at δ = 0 whenever θ is not an exact integer; at exact integers they
//! differ by one and are kept as separate codepaths rather than reconciled.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::PerturbedRational;
use crate::orbits::{Catalog, OrbitSet};
use crate::partitions::EndSign;
use crate::score::UCurveRecord;
use crate::{Error, Result};

/// Relative homology class data: the caller-supplied integers c_τ(Z) and
/// Q_τ(Z), plus optional per-coordinate evaluators for pairing a class
/// difference with c₁(ξ) and 2PD(Γ). Empty evaluators mean the pairing
/// vanishes identically (torsion c₁, Γ = 0).
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct RelClassData {
    #[serde(rename = "ctau", default)]
    pub c_tau: i64,
    #[serde(rename = "qtau", default)]
    pub q_tau: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c1_eval: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pd_eval: Vec<i64>,
}

impl RelClassData {
    pub fn new(c_tau: i64, q_tau: i64) -> Self {
        RelClassData { c_tau, q_tau, c1_eval: Vec::new(), pd_eval: Vec::new() }
    }

    pub fn zero() -> Self {
        RelClassData::default()
    }
}

/// Conley–Zehnder index ⌊θ⌋ + ⌈θ⌉ in the extended order.
pub fn cz(theta: &PerturbedRational) -> BigInt {
    theta.floor() + theta.ceil()
}

/// Σ_{k=1..m} cz(kθ): the iterate sum entering the ECH index.
pub fn cz_iterate_sum(theta: &PerturbedRational, m: u64) -> BigInt {
    let mut total = BigInt::zero();
    for k in 1..=m {
        total += cz(&theta.scaled_u64(k));
    }
    total
}

/// Σ over orbits of cz(m·θ): the Conley–Zehnder index of each top iterate.
pub fn cz_top(alpha: &OrbitSet, catalog: &Catalog) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for (id, m) in alpha.iter() {
        total += cz(&catalog.get(id)?.rotation.scaled_u64(m));
    }
    Ok(total)
}

/// ECH index I = c_τ + Q_τ + Σ_α Σ_{k≤m} cz(kθ) − Σ_β Σ_{k≤n} cz(kθ).
pub fn ech_index(
    alpha: &OrbitSet,
    beta: &OrbitSet,
    rel: &RelClassData,
    catalog: &Catalog,
) -> Result<BigInt> {
    let mut total = BigInt::from(rel.c_tau) + BigInt::from(rel.q_tau);
    for (id, m) in alpha.iter() {
        total += cz_iterate_sum(&catalog.get(id)?.rotation, m);
    }
    for (id, m) in beta.iter() {
        total -= cz_iterate_sum(&catalog.get(id)?.rotation, m);
    }
    Ok(total)
}

/// ⟨Z−W, c₁(ξ) + 2PD(Γ)⟩ as a linear functional of the class-difference
/// vector. Empty evaluators contribute zero; a nonempty evaluator must match
/// the vector's dimension.
pub fn index_ambiguity(delta_class: &[i64], rel: &RelClassData) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for eval in [&rel.c1_eval, &rel.pd_eval] {
        if eval.is_empty() {
            continue;
        }
        if eval.len() != delta_class.len() {
            return Err(Error::DimensionMismatch { want: eval.len(), got: delta_class.len() });
        }
        for (v, e) in delta_class.iter().zip(eval) {
            total += BigInt::from(*v) * BigInt::from(*e);
        }
    }
    Ok(total)
}

/// J₀ = I − (2c_τ + cz_top(α) − cz_top(β)).
pub fn j0(
    alpha: &OrbitSet,
    beta: &OrbitSet,
    rel: &RelClassData,
    catalog: &Catalog,
) -> Result<BigInt> {
    let i = ech_index(alpha, beta, rel, catalog)?;
    Ok(i - BigInt::from(2 * rel.c_tau) - cz_top(alpha, catalog)? + cz_top(beta, catalog)?)
}

/// e_γ: twice the number of ends at covers of γ on each side, minus one per
/// side that has ends but no trivial cylinder over γ.
pub fn e_gamma(curve: &UCurveRecord, orbit: &str) -> i64 {
    let trivial = curve.trivial_multiplicity(orbit) > 0;
    let mut total = 0i64;
    for sign in [EndSign::Positive, EndSign::Negative] {
        let ends = curve.ends_at(orbit, sign).count() as i64;
        if ends > 0 {
            total += 2 * ends - i64::from(!trivial);
        }
    }
    total
}

/// Topological side of the J₀ identity: 2g − 2 + Σ_γ e_γ.
pub fn j0_topological(curve: &UCurveRecord) -> i64 {
    let mut total = 2 * i64::from(curve.genus) - 2;
    for id in curve.orbits_with_ends() {
        total += e_gamma(curve, id);
    }
    total
}

/// One eigenvalue datum of an asymptotic-operator spectrum window.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub eigenvalue: PerturbedRational,
    pub winding: i64,
    pub multiplicity: u8,
}

/// Spectrum of an asymptotic operator near zero, either the default rotation
/// model (eigenvalues w − θ with winding w, each of multiplicity two) or an
/// explicit validated window.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumModel {
    Rotation { theta: PerturbedRational },
    Explicit { entries: Vec<SpectrumEntry> },
}

impl SpectrumModel {
    pub fn rotation(theta: PerturbedRational) -> Self {
        SpectrumModel::Rotation { theta }
    }

    pub fn explicit(entries: Vec<SpectrumEntry>) -> Result<Self> {
        let model = SpectrumModel::Explicit { entries };
        model.validate()?;
        Ok(model)
    }

    /// Monotone-window axioms for explicit spectra: eigenvalues strictly
    /// increasing, multiplicities in {1,2}, windings nondecreasing without
    /// skips, and every winding other than the window's first and last
    /// carrying total multiplicity exactly two.
    pub fn validate(&self) -> Result<()> {
        let entries = match self {
            SpectrumModel::Rotation { .. } => return Ok(()),
            SpectrumModel::Explicit { entries } => entries,
        };
        if entries.is_empty() {
            return Err(Error::invalid_input("explicit spectrum must be nonempty"));
        }
        for e in entries {
            if !(1..=2).contains(&e.multiplicity) {
                return Err(Error::invalid_input("eigenvalue multiplicity must be 1 or 2"));
            }
        }
        for w in entries.windows(2) {
            if w[0].eigenvalue >= w[1].eigenvalue {
                return Err(Error::invalid_input("eigenvalues must be strictly increasing"));
            }
            let jump = w[1].winding - w[0].winding;
            if !(0..=1).contains(&jump) {
                return Err(Error::invalid_input(
                    "windings must be nondecreasing without skips",
                ));
            }
        }
        let first = entries.first().unwrap().winding;
        let last = entries.last().unwrap().winding;
        for w in first..=last {
            let mult: u32 = entries
                .iter()
                .filter(|e| e.winding == w)
                .map(|e| u32::from(e.multiplicity))
                .sum();
            let interior = w != first && w != last;
            if (interior && mult != 2) || mult > 2 {
                return Err(Error::invalid_input(format!(
                    "winding {w} carries multiplicity {mult}, expected 2"
                )));
            }
        }
        Ok(())
    }

    /// wind(ν^{<δ}): winding of the largest eigenvalue below δ.
    fn wind_below(&self, delta: &BigRational) -> Result<i64> {
        match self {
            SpectrumModel::Rotation { theta } => {
                // Largest integer w with w − θ < δ is ⌈θ+δ⌉ − 1.
                let t = theta.shifted(delta);
                (t.ceil() - BigInt::from(1))
                    .to_i64()
                    .ok_or_else(|| Error::Overflow("winding".into()))
            }
            SpectrumModel::Explicit { entries } => entries
                .iter()
                .rev()
                .find(|e| e.eigenvalue.cmp_rational(delta) == std::cmp::Ordering::Less)
                .map(|e| e.winding)
                .ok_or_else(|| Error::WindowTooSmall("no eigenvalue on that side of delta".into())),
        }
    }

    /// wind(ν^{≥δ}): winding of the smallest eigenvalue at or above δ.
    fn wind_at_or_above(&self, delta: &BigRational) -> Result<i64> {
        match self {
            SpectrumModel::Rotation { theta } => {
                let t = theta.shifted(delta);
                t.ceil().to_i64().ok_or_else(|| Error::Overflow("winding".into()))
            }
            SpectrumModel::Explicit { entries } => entries
                .iter()
                .find(|e| e.eigenvalue.cmp_rational(delta) != std::cmp::Ordering::Less)
                .map(|e| e.winding)
                .ok_or_else(|| Error::WindowTooSmall("no eigenvalue on that side of delta".into())),
        }
    }

    /// Any eigenvalue in the half-open interval [lo, hi)?
    pub fn has_eigenvalue_in_closed_open(&self, lo: &BigRational, hi: &BigRational) -> bool {
        if lo >= hi {
            return false;
        }
        match self {
            SpectrumModel::Rotation { theta } => {
                // Need an integer w with θ+lo ≤ w < θ+hi.
                let w = theta.shifted(lo).ceil();
                theta.shifted(hi).cmp_int(&w) == std::cmp::Ordering::Greater
            }
            SpectrumModel::Explicit { entries } => entries.iter().any(|e| {
                e.eigenvalue.cmp_rational(lo) != std::cmp::Ordering::Less
                    && e.eigenvalue.cmp_rational(hi) == std::cmp::Ordering::Less
            }),
        }
    }

    /// Any eigenvalue in the half-open interval (lo, hi]?
    pub fn has_eigenvalue_in_open_closed(&self, lo: &BigRational, hi: &BigRational) -> bool {
        if lo >= hi {
            return false;
        }
        match self {
            SpectrumModel::Rotation { theta } => {
                // Need an integer w with θ+lo < w ≤ θ+hi.
                let w = theta.shifted(lo).floor() + 1;
                theta.shifted(hi).cmp_int(&w) != std::cmp::Ordering::Less
            }
            SpectrumModel::Explicit { entries } => entries.iter().any(|e| {
                e.eigenvalue.cmp_rational(lo) == std::cmp::Ordering::Greater
                    && e.eigenvalue.cmp_rational(hi) != std::cmp::Ordering::Greater
            }),
        }
    }
}

/// p^δ = wind(ν^{≥δ}) − wind(ν^{<δ}) ∈ {0,1}.
pub fn p_delta(spec: &SpectrumModel, delta: &BigRational) -> Result<i64> {
    let p = spec.wind_at_or_above(delta)? - spec.wind_below(delta)?;
    if !(0..=1).contains(&p) {
        return Err(Error::invalid_input(format!("p^delta = {p} outside {{0,1}}")));
    }
    Ok(p)
}

/// Weighted Conley–Zehnder index CZ^δ = 2·wind(ν^{<δ}) + p^δ.
pub fn weighted_cz(spec: &SpectrumModel, delta: &BigRational) -> Result<i64> {
    let below = spec.wind_below(delta)?;
    Ok(2 * below + p_delta(spec, delta)?)
}

/// One puncture of a curve: sign, covering multiplicity, the spectrum of the
/// asymptotic operator of the *covered iterate*, and the winding of the
/// asymptotic eigenvalue μ in the reference trivialization.
#[derive(Clone, Debug)]
pub struct Puncture {
    pub orbit: String,
    pub sign: EndSign,
    pub cover: u64,
    pub spectrum: SpectrumModel,
    pub winding: i64,
}

impl Puncture {
    pub fn new(
        orbit: impl Into<String>,
        sign: EndSign,
        cover: u64,
        spectrum: SpectrumModel,
        winding: i64,
    ) -> Result<Self> {
        if cover == 0 {
            return Err(Error::ZeroMultiplicity);
        }
        spectrum.validate()?;
        Ok(Puncture { orbit: orbit.into(), sign, cover, spectrum, winding })
    }

    /// Rotation-model puncture at the `cover`-fold iterate of a simple orbit.
    pub fn from_simple_rotation(
        orbit: impl Into<String>,
        sign: EndSign,
        cover: u64,
        simple_rotation: &PerturbedRational,
        winding: i64,
    ) -> Result<Self> {
        Puncture::new(
            orbit,
            sign,
            cover,
            SpectrumModel::rotation(simple_rotation.scaled_u64(cover)),
            winding,
        )
    }

    /// Weight used for this puncture's CZ term: −δ at positive punctures,
    /// +δ at negative ones.
    fn signed_delta(&self, delta: &BigRational) -> BigRational {
        match self.sign {
            EndSign::Positive => -delta.clone(),
            EndSign::Negative => delta.clone(),
        }
    }

    pub fn weighted_cz(&self, delta: &BigRational) -> Result<i64> {
        weighted_cz(&self.spectrum, &self.signed_delta(delta))
    }

    pub fn p_value(&self, delta: &BigRational) -> Result<i64> {
        p_delta(&self.spectrum, &self.signed_delta(delta))
    }

    /// The exponential-weight gap condition: positive punctures admit no
    /// eigenvalue in [−δ, 0), negative ones none in (0, δ].
    fn check_gap(&self, delta: &BigRational) -> Result<()> {
        let zero = BigRational::zero();
        let violated = match self.sign {
            EndSign::Positive => {
                self.spectrum.has_eigenvalue_in_closed_open(&-delta.clone(), &zero)
            }
            EndSign::Negative => self.spectrum.has_eigenvalue_in_open_closed(&zero, delta),
        };
        if violated {
            Err(Error::GapViolation(format!(
                "orbit {}: spectrum meets the forbidden {} interval at delta {}",
                self.orbit,
                match self.sign {
                    EndSign::Positive => "[-delta, 0)",
                    EndSign::Negative => "(0, delta]",
                },
                delta,
            )))
        } else {
            Ok(())
        }
    }
}

/// Weighted Fredholm index
/// ind_δ = −2 + 2g + m₊ + m₋ + Σ CZ^{−δ}(γ⁺) − Σ CZ^{δ}(γ⁻),
/// after checking δ ≥ 0 and the spectral-gap condition at every puncture.
pub fn fredholm_index_delta(
    genus: u32,
    punctures: &[Puncture],
    delta: &BigRational,
) -> Result<i64> {
    if delta.is_negative() {
        return Err(Error::invalid_input("delta must be nonnegative"));
    }
    for p in punctures {
        p.check_gap(delta)?;
    }
    let mut ind = -2 + 2 * i64::from(genus) + punctures.len() as i64;
    for p in punctures {
        match p.sign {
            EndSign::Positive => ind += p.weighted_cz(delta)?,
            EndSign::Negative => ind -= p.weighted_cz(delta)?,
        }
    }
    Ok(ind)
}

/// Winding identities and the index-vs-winding inequality for one curve.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct WindRelations {
    pub wind_inf: i64,
    pub wind_pi: i64,
    pub gamma_count: usize,
    pub gamma_odd: usize,
    pub ind_delta: i64,
    /// 2·wind_π ≤ ind_δ − 2 + 2g + #Γ − #Γ^odd.
    pub inequality_holds: bool,
    /// wind_π counts zeros, each positive, so a negative value marks an
    /// inconsistent record.
    pub wind_pi_nonnegative: bool,
}

/// wind_∞ = Σ wind(μ⁺) − Σ wind(μ⁻), wind_π = wind_∞ − 2 + 2g + #Γ, with
/// #Γ^odd counted from weighted-CZ parities.
pub fn wind_relations(
    genus: u32,
    punctures: &[Puncture],
    delta: &BigRational,
) -> Result<WindRelations> {
    let ind_delta = fredholm_index_delta(genus, punctures, delta)?;
    let mut wind_inf = 0i64;
    let mut gamma_odd = 0usize;
    for p in punctures {
        match p.sign {
            EndSign::Positive => wind_inf += p.winding,
            EndSign::Negative => wind_inf -= p.winding,
        }
        if p.weighted_cz(delta)? % 2 != 0 {
            gamma_odd += 1;
        }
    }
    let gamma_count = punctures.len();
    let wind_pi = wind_inf - 2 + 2 * i64::from(genus) + gamma_count as i64;
    let bound = ind_delta - 2 + 2 * i64::from(genus) + gamma_count as i64 - gamma_odd as i64;
    Ok(WindRelations {
        wind_inf,
        wind_pi,
        gamma_count,
        gamma_odd,
        ind_delta,
        inequality_holds: 2 * wind_pi <= bound,
        wind_pi_nonnegative: wind_pi >= 0,
    })
}

/// Hypotheses under which transversality is automatic: genus zero, weighted
/// index two, and every p-value equal to one.
pub fn automatic_transversality_hypotheses(genus: u32, ind_delta: i64, p_values: &[i64]) -> bool {
    genus == 0 && ind_delta == 2 && p_values.iter().all(|&p| p == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_rational;
    use crate::orbits::{OrbitKind, SimpleOrbit};

    fn pr(s: &str) -> PerturbedRational {
        s.parse().unwrap()
    }

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn catalog() -> Catalog {
        let mk = |id: &str, rotation: &str, kind| SimpleOrbit {
            id: id.into(),
            action: rat("1"),
            rotation: pr(rotation),
            kind,
            chern: 0,
            homology: Vec::new(),
        };
        Catalog::new(vec![
            mk("u", "0+e", OrbitKind::Elliptic),
            mk("t", "1/3+e", OrbitKind::Elliptic),
            mk("h", "1/2", OrbitKind::NegativeHyperbolic),
            mk("w", "1/2-e", OrbitKind::Elliptic),
        ])
        .unwrap()
    }

    fn set(pairs: &[(&str, u64)]) -> OrbitSet {
        OrbitSet::from_pairs(pairs.iter().map(|&(id, m)| (id, m))).unwrap()
    }

    #[test]
    fn cz_examples() {
        assert_eq!(cz(&pr("5/2")), BigInt::from(5));
        assert_eq!(cz(&pr("2")), BigInt::from(4));
        assert_eq!(cz(&pr("1/2-e")), BigInt::from(1));
        assert_eq!(cz(&pr("0+e")), BigInt::from(1));
        assert_eq!(cz(&pr("0-e")), BigInt::from(-1));
    }

    #[test]
    fn cz_top_examples() {
        let cat = catalog();
        assert_eq!(cz_top(&OrbitSet::empty(), &cat).unwrap(), BigInt::zero());
        // 6 · (1/3+e) = 2+e: floor 2, ceil 3.
        assert_eq!(cz_top(&set(&[("t", 6)]), &cat).unwrap(), BigInt::from(5));
        assert_eq!(cz_top(&set(&[("h", 1), ("u", 2)]), &cat).unwrap(), BigInt::from(2));
    }

    #[test]
    fn ech_index_examples() {
        let cat = catalog();
        let a = set(&[("t", 2), ("h", 1)]);
        assert_eq!(
            ech_index(&a, &a, &RelClassData::zero(), &cat).unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            ech_index(&set(&[("u", 1)]), &OrbitSet::empty(), &RelClassData::new(1, 1), &cat)
                .unwrap(),
            BigInt::from(3)
        );
        assert_eq!(
            ech_index(&set(&[("w", 2)]), &OrbitSet::empty(), &RelClassData::zero(), &cat)
                .unwrap(),
            BigInt::from(2)
        );
    }

    #[test]
    fn ambiguity_examples() {
        let rel = RelClassData::zero();
        assert_eq!(index_ambiguity(&[0, 0], &rel).unwrap(), BigInt::zero());
        assert_eq!(index_ambiguity(&[3, -1, 7], &rel).unwrap(), BigInt::zero());
        let rel = RelClassData { c1_eval: vec![2], pd_eval: vec![4], ..RelClassData::zero() };
        assert_eq!(index_ambiguity(&[1], &rel).unwrap(), BigInt::from(6));
        assert!(index_ambiguity(&[1, 0], &rel).is_err());
    }

    #[test]
    fn ambiguity_is_index_difference() {
        // I(α,β,Z) − I(α,β,W) = ⟨Z−W, c₁+2PD⟩: with the class-difference
        // folded into c_τ/Q_τ shifts matching the evaluators.
        let cat = catalog();
        let a = set(&[("t", 3)]);
        let b = set(&[("u", 1)]);
        let rel_z = RelClassData { c_tau: 2, q_tau: 5, c1_eval: vec![1], pd_eval: vec![2] };
        let shift = index_ambiguity(&[4], &rel_z).unwrap();
        let rel_w = RelClassData {
            c_tau: rel_z.c_tau,
            q_tau: rel_z.q_tau - shift.to_i64().unwrap(),
            ..rel_z.clone()
        };
        let iz = ech_index(&a, &b, &rel_z, &cat).unwrap();
        let iw = ech_index(&a, &b, &rel_w, &cat).unwrap();
        assert_eq!(iz - iw, shift);
    }

    #[test]
    fn j0_examples() {
        let cat = catalog();
        let a = set(&[("t", 2)]);
        assert_eq!(j0(&a, &a, &RelClassData::zero(), &cat).unwrap(), BigInt::zero());
        assert_eq!(
            j0(&set(&[("u", 1)]), &OrbitSet::empty(), &RelClassData::new(1, 1), &cat).unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            j0(&set(&[("u", 2)]), &OrbitSet::empty(), &RelClassData::zero(), &cat).unwrap(),
            BigInt::from(1)
        );
    }

    #[test]
    fn weighted_cz_rotation_examples() {
        let zero = BigRational::zero();
        assert_eq!(
            weighted_cz(&SpectrumModel::rotation(pr("1/3+e")), &zero).unwrap(),
            1
        );
        assert_eq!(
            weighted_cz(&SpectrumModel::rotation(pr("0-e")), &rat("-1/2")).unwrap(),
            -1
        );
        // Exact-integer rotation at δ = 0: the weighted convention reads one
        // below the plain one (2θ−1 versus 2θ).
        assert_eq!(weighted_cz(&SpectrumModel::rotation(pr("2")), &zero).unwrap(), 3);
        assert_eq!(cz(&pr("2")), BigInt::from(4));
    }

    #[test]
    fn weighted_cz_matches_plain_at_zero() {
        let zero = BigRational::zero();
        for s in ["1/3+e", "1/3-e", "5/2", "-7/3", "0+e", "0-e", "4+e", "1/2"] {
            let theta = pr(s);
            let w = weighted_cz(&SpectrumModel::rotation(theta.clone()), &zero).unwrap();
            assert_eq!(BigInt::from(w), cz(&theta), "theta {s}");
        }
    }

    #[test]
    fn weighted_cz_explicit() {
        let entries = vec![
            SpectrumEntry { eigenvalue: pr("-1"), winding: 0, multiplicity: 2 },
            SpectrumEntry { eigenvalue: pr("1"), winding: 1, multiplicity: 2 },
        ];
        let spec = SpectrumModel::explicit(entries).unwrap();
        assert_eq!(weighted_cz(&spec, &BigRational::zero()).unwrap(), 1);
        // Window exhausted on either side.
        assert!(weighted_cz(&spec, &rat("-2")).is_err());
        assert!(weighted_cz(&spec, &rat("2")).is_err());
    }

    #[test]
    fn explicit_model_validation() {
        let entry = |ev: &str, w: i64, m: u8| SpectrumEntry {
            eigenvalue: pr(ev),
            winding: w,
            multiplicity: m,
        };
        assert!(SpectrumModel::explicit(vec![]).is_err());
        assert!(SpectrumModel::explicit(vec![entry("0", 0, 3)]).is_err());
        // Decreasing eigenvalues.
        assert!(SpectrumModel::explicit(vec![entry("1", 0, 2), entry("0", 1, 2)]).is_err());
        // Winding skip.
        assert!(SpectrumModel::explicit(vec![entry("0", 0, 2), entry("1", 2, 2)]).is_err());
        // Interior winding with multiplicity 1.
        assert!(SpectrumModel::explicit(vec![
            entry("-1", 0, 2),
            entry("0", 1, 1),
            entry("1", 2, 2),
        ])
        .is_err());
        // Split double eigenvalue is fine.
        assert!(SpectrumModel::explicit(vec![
            entry("-1", 0, 1),
            entry("-1/2", 0, 1),
            entry("1", 1, 2),
        ])
        .is_ok());
    }

    fn plain_puncture(sign: EndSign, theta: &str, winding: i64) -> Puncture {
        Puncture::new("x", sign, 1, SpectrumModel::rotation(pr(theta)), winding).unwrap()
    }

    #[test]
    fn fredholm_examples() {
        let delta = rat("1/4");
        // CZ^{-1/4}(3/2) = 2⌈3/2 − 1/4⌉ − 1 = 3; CZ^{1/4}(1/2) = 1.
        let punctures = vec![
            plain_puncture(EndSign::Positive, "3/2", 1),
            plain_puncture(EndSign::Negative, "1/2", 1),
        ];
        assert_eq!(fredholm_index_delta(0, &punctures, &delta).unwrap(), 2);

        // Equal weighted CZ on both sides of a cylinder: index 0.
        let punctures = vec![
            plain_puncture(EndSign::Positive, "1/2", 0),
            plain_puncture(EndSign::Negative, "1/2", 0),
        ];
        assert_eq!(fredholm_index_delta(0, &punctures, &delta).unwrap(), 0);

        // g = 1, single positive end with CZ^{-δ} = 1.
        let punctures = vec![plain_puncture(EndSign::Positive, "1/2", 0)];
        assert_eq!(fredholm_index_delta(1, &punctures, &delta).unwrap(), 2);
    }

    #[test]
    fn fredholm_gap_condition() {
        // Rotation 1+e puts the eigenvalue −e in [−δ, 0) for every δ > 0.
        let p = plain_puncture(EndSign::Positive, "1+e", 0);
        assert!(matches!(
            fredholm_index_delta(0, &[p.clone()], &rat("1/4")),
            Err(Error::GapViolation(_))
        ));
        // δ = 0 empties both forbidden intervals.
        assert!(fredholm_index_delta(0, &[p], &BigRational::zero()).is_ok());
        // An exact-zero eigenvalue is allowed: [−δ, 0) excludes 0.
        let p = plain_puncture(EndSign::Positive, "1", 0);
        assert!(fredholm_index_delta(0, &[p], &rat("1/4")).is_ok());
        // Negative weights are rejected outright.
        let p = plain_puncture(EndSign::Positive, "3/2", 0);
        assert!(fredholm_index_delta(0, &[p], &rat("-1")).is_err());
        // Negative puncture with an eigenvalue in (0, δ].
        let p = plain_puncture(EndSign::Negative, "1-e", 0);
        assert!(matches!(
            fredholm_index_delta(0, &[p], &rat("1/4")),
            Err(Error::GapViolation(_))
        ));
    }

    #[test]
    fn wind_relation_examples() {
        let delta = rat("1/4");
        // Cylinder with matching windings: wind_inf = wind_pi = 0.
        let punctures = vec![
            plain_puncture(EndSign::Positive, "3/2", 1),
            plain_puncture(EndSign::Negative, "1/2", 1),
        ];
        let w = wind_relations(0, &punctures, &delta).unwrap();
        assert_eq!((w.wind_inf, w.wind_pi), (0, 0));
        assert_eq!((w.gamma_count, w.gamma_odd), (2, 2));
        assert_eq!(w.ind_delta, 2);
        // Equality case: 2·0 = 2 − 2 + 0 + 2 − 2.
        assert!(w.inequality_holds);
        assert!(w.wind_pi_nonnegative);

        // Plane-like record with wind(μ⁺) = 0: wind_pi = −1, flagged.
        let punctures = vec![plain_puncture(EndSign::Positive, "1/2", 0)];
        let w = wind_relations(0, &punctures, &delta).unwrap();
        assert_eq!(w.wind_pi, -1);
        assert!(!w.wind_pi_nonnegative);
    }

    #[test]
    fn transversality_hypotheses() {
        assert!(automatic_transversality_hypotheses(0, 2, &[1, 1]));
        assert!(!automatic_transversality_hypotheses(1, 2, &[1, 1]));
        assert!(!automatic_transversality_hypotheses(0, 2, &[1, 0]));
        assert!(!automatic_transversality_hypotheses(0, 4, &[1, 1]));
        assert!(automatic_transversality_hypotheses(0, 2, &[]));
    }

    #[test]
    fn p_values_from_rotation_model_are_one() {
        for s in ["1/3+e", "0-e", "5/2", "2"] {
            let spec = SpectrumModel::rotation(pr(s));
            assert_eq!(p_delta(&spec, &BigRational::zero()).unwrap(), 1);
            assert_eq!(p_delta(&spec, &rat("1/3")).unwrap(), 1);
        }
    }
}
