//! Orbit catalogs and multiplicity sets.
//!
//! A catalog lists simple orbits with exact rational actions and perturbed
//! rotation numbers; an orbit set is a finitely supported map from orbit id
//! to positive multiplicity. Actions stay exact end to end because the gap
//! thresholds downstream are minima of differences — floating point would
//! fabricate or destroy gaps.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exactnum::{rational_serde, EpsSign, PerturbedRational};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Elliptic,
    PositiveHyperbolic,
    NegativeHyperbolic,
}

impl OrbitKind {
    pub fn is_hyperbolic(self) -> bool {
        matches!(self, OrbitKind::PositiveHyperbolic | OrbitKind::NegativeHyperbolic)
    }
}

impl fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitKind::Elliptic => "elliptic",
            OrbitKind::PositiveHyperbolic => "positive_hyperbolic",
            OrbitKind::NegativeHyperbolic => "negative_hyperbolic",
        })
    }
}

/// One simple orbit. `chern` and `homology` are optional bookkeeping labels:
/// `chern` is the orbit's contribution per multiplicity to relative
/// first-Chern-class evaluations (used by the telescoping audit), `homology`
/// an integer homology-class label carried through unchanged.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SimpleOrbit {
    pub id: String,
    #[serde(with = "rational_serde")]
    pub action: BigRational,
    pub rotation: PerturbedRational,
    pub kind: OrbitKind,
    #[serde(default)]
    pub chern: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homology: Vec<i64>,
}

impl SimpleOrbit {
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::invalid_input("orbit id must be nonempty"));
        }
        if self.action <= BigRational::zero() {
            return Err(Error::invalid_input(format!(
                "orbit {}: action must be positive",
                self.id
            )));
        }
        let r = &self.rotation;
        let ok = match self.kind {
            // Nondegeneracy of all iterates is modeled by the rotation number
            // never being an exact integer.
            OrbitKind::Elliptic => !r.is_exact_integer(),
            OrbitKind::PositiveHyperbolic => r.is_exact_integer(),
            OrbitKind::NegativeHyperbolic => {
                r.eps() == EpsSign::None && *r.value().denom() == BigInt::from(2)
            }
        };
        if !ok {
            return Err(Error::invalid_input(format!(
                "orbit {}: rotation {} is incompatible with kind {}",
                self.id, r, self.kind
            )));
        }
        Ok(())
    }
}

/// Immutable catalog of simple orbits, keyed by id.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Catalog {
    orbits: BTreeMap<String, SimpleOrbit>,
}

#[derive(Serialize, Deserialize)]
struct CatalogWire {
    orbits: Vec<SimpleOrbit>,
}

impl Catalog {
    pub fn new(orbits: Vec<SimpleOrbit>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for orbit in orbits {
            orbit.validate()?;
            let id = orbit.id.clone();
            if map.insert(id.clone(), orbit).is_some() {
                return Err(Error::invalid_input(format!("duplicate orbit id {id}")));
            }
        }
        Ok(Catalog { orbits: map })
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let wire: CatalogWire = serde_json::from_str(json)?;
        Catalog::new(wire.orbits)
    }

    pub fn to_json(&self) -> String {
        let wire = CatalogWire { orbits: self.orbits.values().cloned().collect() };
        serde_json::to_string_pretty(&wire).expect("catalog serializes")
    }

    pub fn get(&self, id: &str) -> Result<&SimpleOrbit> {
        self.orbits.get(id).ok_or_else(|| Error::UnknownOrbit(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.orbits.contains_key(id)
    }

    pub fn orbits(&self) -> impl Iterator<Item = &SimpleOrbit> {
        self.orbits.values()
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
}

/// Finitely supported multiplicity function on catalog orbits; all stored
/// multiplicities are >= 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct OrbitSet {
    mult: BTreeMap<String, u64>,
}

impl<'de> Deserialize<'de> for OrbitSet {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let mult = BTreeMap::<String, u64>::deserialize(deserializer)?;
        OrbitSet::new(mult).map_err(serde::de::Error::custom)
    }
}

impl OrbitSet {
    pub fn new(mult: BTreeMap<String, u64>) -> Result<Self> {
        if mult.values().any(|&m| m == 0) {
            return Err(Error::ZeroMultiplicity);
        }
        Ok(OrbitSet { mult })
    }

    pub fn empty() -> Self {
        OrbitSet::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut mult = BTreeMap::new();
        for (id, m) in pairs {
            let id = id.into();
            if mult.insert(id.clone(), m).is_some() {
                return Err(Error::invalid_input(format!("repeated orbit id {id}")));
            }
        }
        OrbitSet::new(mult)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let mult = serde_json::from_str(json)?;
        OrbitSet::new(mult)
    }

    /// Multiplicity of `id`, zero when absent.
    pub fn multiplicity(&self, id: &str) -> u64 {
        self.mult.get(id).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.mult.iter().map(|(id, &m)| (id.as_str(), m))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.mult.keys().map(String::as_str)
    }

    /// Number of distinct orbits |α|.
    pub fn cardinality(&self) -> usize {
        self.mult.len()
    }

    /// Largest multiplicity (0 for the empty set).
    pub fn complexity(&self) -> u64 {
        self.mult.values().copied().max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    /// Pointwise sum of multiplicities.
    pub fn union(&self, other: &OrbitSet) -> OrbitSet {
        let mut mult = self.mult.clone();
        for (id, m) in &other.mult {
            *mult.entry(id.clone()).or_insert(0) += m;
        }
        OrbitSet { mult }
    }

    fn resolve(&self, catalog: &Catalog) -> Result<()> {
        for id in self.mult.keys() {
            catalog.get(id)?;
        }
        Ok(())
    }

    /// Total action Σ mᵢ·A(γᵢ), exact.
    pub fn action(&self, catalog: &Catalog) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (id, m) in &self.mult {
            total += catalog.get(id)?.action.clone() * BigRational::from_integer(BigInt::from(*m));
        }
        Ok(total)
    }

    /// Every hyperbolic orbit carries multiplicity 1.
    pub fn is_ech_generator(&self, catalog: &Catalog) -> Result<bool> {
        for (id, m) in &self.mult {
            if catalog.get(id)?.kind.is_hyperbolic() && *m != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Even iff an even number of distinct positive-hyperbolic orbits appear.
    pub fn grading_parity(&self, catalog: &Catalog) -> Result<Parity> {
        let mut count = 0usize;
        for id in self.mult.keys() {
            if catalog.get(id)?.kind == OrbitKind::PositiveHyperbolic {
                count += 1;
            }
        }
        Ok(if count % 2 == 0 { Parity::Even } else { Parity::Odd })
    }

    /// Σ mᵢ·chern(γᵢ): the multiplicity-weighted Chern label.
    pub fn chern_pairing(&self, catalog: &Catalog) -> Result<i64> {
        let mut total = 0i64;
        for (id, m) in &self.mult {
            let c = catalog.get(id)?.chern;
            let term = c
                .checked_mul(*m as i64)
                .and_then(|t| total.checked_add(t))
                .ok_or_else(|| Error::Overflow("chern pairing".into()))?;
            total = term;
        }
        Ok(total)
    }

    /// Σ mᵢ·homology(γᵢ), componentwise; vectors of different lengths are
    /// zero-extended.
    pub fn homology_class(&self, catalog: &Catalog) -> Result<Vec<i64>> {
        self.resolve(catalog)?;
        let dim = self
            .mult
            .keys()
            .map(|id| catalog.get(id).map(|o| o.homology.len()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        let mut total = vec![0i64; dim];
        for (id, m) in &self.mult {
            for (i, &h) in catalog.get(id)?.homology.iter().enumerate() {
                total[i] = h
                    .checked_mul(*m as i64)
                    .and_then(|t| total[i].checked_add(t))
                    .ok_or_else(|| Error::Overflow("homology class".into()))?;
            }
        }
        Ok(total)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}
