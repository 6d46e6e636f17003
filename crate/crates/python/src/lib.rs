//! Python bindings: exact partition, index, score, constants, and chain
//! auditing over JSON-friendly inputs.  Rotation numbers and rationals cross
//! the boundary as strings ("1/3+e", "5/2"); orbit multisets as dicts;
//! catalogs, records, and chains as the same JSON the CLI consumes.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ech_kit::auditor;
use ech_kit::exactnum::{parse_rational, rational_to_string, PerturbedRational};
use ech_kit::index::{self, RelClassData};
use ech_kit::orbits::{Catalog as CoreCatalog, OrbitSet};
use ech_kit::partitions::{signed_partition, EndSign};
use ech_kit::score::{total_score, UCurveRecord};
use ech_kit::synth;
use num_bigint::BigInt;
use num_rational::BigRational;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn theta_of(s: &str) -> PyResult<PerturbedRational> {
    s.parse().map_err(err)
}

fn rational_of(s: &str) -> PyResult<BigRational> {
    parse_rational(s).map_err(err)
}

fn sign_of(s: &str) -> PyResult<EndSign> {
    match s {
        "+" => Ok(EndSign::Positive),
        "-" => Ok(EndSign::Negative),
        other => Err(PyValueError::new_err(format!("sign must be '+' or '-', got {other:?}"))),
    }
}

/// An orbit catalog, constructed from its JSON form.
#[pyclass(frozen)]
struct Catalog {
    inner: CoreCatalog,
}

#[pymethods]
impl Catalog {
    #[new]
    fn new(json: &str) -> PyResult<Self> {
        Ok(Catalog { inner: CoreCatalog::from_json(json).map_err(err)? })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// Orbit ids, sorted.
    fn ids(&self) -> Vec<String> {
        self.inner.orbits().map(|o| o.id.clone()).collect()
    }

    /// Multiplicity threshold M derived from the rotation numbers.
    fn choose_m(&self) -> PyResult<u64> {
        auditor::choose_m(&self.inner).map_err(err)
    }

    /// Smallest action gap among orbit-set families within the cap.
    fn eps_m(&self, big_m: u64, action_cap: &str) -> PyResult<String> {
        let cap = rational_of(action_cap)?;
        Ok(rational_to_string(&auditor::eps_m(&self.inner, big_m, &cap).map_err(err)?))
    }
}

/// Signed partition of multiplicity `m` at rotation number `theta`.
#[pyfunction]
fn partition(theta: &str, m: u64, sign: &str) -> PyResult<Vec<u64>> {
    let parts = signed_partition(&theta_of(theta)?, m, sign_of(sign)?).map_err(err)?;
    Ok(parts.parts().to_vec())
}

/// Conley-Zehnder index 2*floor(theta)+1.
#[pyfunction]
fn cz(theta: &str) -> PyResult<BigInt> {
    Ok(index::cz(&theta_of(theta)?))
}

/// Sum of the Conley-Zehnder indices of the first `m` iterates.
#[pyfunction]
fn cz_iterate_sum(theta: &str, m: u64) -> PyResult<BigInt> {
    Ok(index::cz_iterate_sum(&theta_of(theta)?, m))
}

fn orbit_set_of(mult: BTreeMap<String, u64>) -> PyResult<OrbitSet> {
    OrbitSet::new(mult).map_err(err)
}

/// ECH index of the pair (alpha, beta) with relative-class data (ctau, qtau).
#[pyfunction]
#[pyo3(signature = (catalog, alpha, beta, ctau = 0, qtau = 0))]
fn ech_index(
    catalog: &Catalog,
    alpha: BTreeMap<String, u64>,
    beta: BTreeMap<String, u64>,
    ctau: i64,
    qtau: i64,
) -> PyResult<BigInt> {
    let rel = RelClassData::new(ctau, qtau);
    index::ech_index(&orbit_set_of(alpha)?, &orbit_set_of(beta)?, &rel, &catalog.inner)
        .map_err(err)
}

/// J0 index of the pair (alpha, beta) with relative-class data (ctau, qtau).
#[pyfunction]
#[pyo3(signature = (catalog, alpha, beta, ctau = 0, qtau = 0))]
fn j0(
    catalog: &Catalog,
    alpha: BTreeMap<String, u64>,
    beta: BTreeMap<String, u64>,
    ctau: i64,
    qtau: i64,
) -> PyResult<BigInt> {
    let rel = RelClassData::new(ctau, qtau);
    index::j0(&orbit_set_of(alpha)?, &orbit_set_of(beta)?, &rel, &catalog.inner).map_err(err)
}

/// Scores of one curve record: {"j0", "y", "s", "t", "t_prime"}.
#[pyfunction]
#[pyo3(signature = (catalog, record_json, big_m = None))]
fn score<'py>(
    py: Python<'py>,
    catalog: &Catalog,
    record_json: &str,
    big_m: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let record = UCurveRecord::from_json(record_json, &catalog.inner).map_err(err)?;
    let m = match big_m {
        Some(m) => m,
        None => auditor::choose_m(&catalog.inner).map_err(err)?,
    };
    let s = total_score(&record, &catalog.inner, m).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("j0", s.j0)?;
    out.set_item("y", s.y)?;
    out.set_item("s", s.s)?;
    out.set_item("t", s.t)?;
    out.set_item("t_prime", s.t_prime)?;
    Ok(out)
}

/// Weighted Fredholm index of rotation-model punctures given as
/// (sign, cover, theta, winding) tuples.
#[pyfunction]
#[pyo3(signature = (genus, punctures, delta = "0"))]
fn fredholm_index(
    genus: u32,
    punctures: Vec<(String, u64, String, i64)>,
    delta: &str,
) -> PyResult<i64> {
    let delta = rational_of(delta)?;
    let mut built = Vec::with_capacity(punctures.len());
    for (i, (sign, cover, theta, winding)) in punctures.iter().enumerate() {
        built.push(
            index::Puncture::from_simple_rotation(
                format!("p{i}"),
                sign_of(sign)?,
                *cover,
                &theta_of(theta)?,
                *winding,
            )
            .map_err(err)?,
        );
    }
    index::fredholm_index_delta(genus, &built, &delta).map_err(err)
}

/// Smallest integer q > p0 satisfying the four chain-length inequalities.
#[pyfunction]
fn solve_min_q(
    delta1: &str,
    delta2: &str,
    ell: &str,
    eps_prime: &str,
    p0: BigInt,
) -> PyResult<BigInt> {
    auditor::solve_min_q(
        &rational_of(delta1)?,
        &rational_of(delta2)?,
        &rational_of(ell)?,
        &rational_of(eps_prime)?,
        &p0,
    )
    .map_err(err)
}

/// Audits a chain (JSON) against a catalog; returns the report as JSON.
#[pyfunction]
fn audit_chain(catalog: &Catalog, chain_json: &str) -> PyResult<String> {
    let chain = auditor::ChainRecord::from_json(chain_json).map_err(err)?;
    Ok(auditor::audit_chain(&chain, &catalog.inner).map_err(err)?.to_json())
}

/// Deterministic synthetic chain for demos and tests; returns
/// (catalog_json, chain_json).
#[pyfunction]
#[pyo3(signature = (seed, length, big_m = 4, eps_prime = "1/8"))]
fn synth_chain(
    seed: u64,
    length: usize,
    big_m: u64,
    eps_prime: &str,
) -> PyResult<(String, String)> {
    let eps = rational_of(eps_prime)?;
    let (catalog, chain) = synth::random_chain(seed, length, big_m, eps).map_err(err)?;
    Ok((catalog.to_json(), chain.to_json()))
}

#[pymodule]
fn ech_kit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Catalog>()?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(cz, m)?)?;
    m.add_function(wrap_pyfunction!(cz_iterate_sum, m)?)?;
    m.add_function(wrap_pyfunction!(ech_index, m)?)?;
    m.add_function(wrap_pyfunction!(j0, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(fredholm_index, m)?)?;
    m.add_function(wrap_pyfunction!(solve_min_q, m)?)?;
    m.add_function(wrap_pyfunction!(audit_chain, m)?)?;
    m.add_function(wrap_pyfunction!(synth_chain, m)?)?;
    Ok(())
}
