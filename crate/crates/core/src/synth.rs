//! Deterministic synthetic data and exhaustive sweeps.
//!
//! Everything downstream of the core calculators needs inputs: randomized
//! catalogs and curve records for the identity checks, chains with known
//! step classes (and chains with deliberately planted defects) for the
//! audit, the exhaustive single-orbit configuration space for the score
//! bounds, and rotation-model puncture samples for the winding inequality.
//! All generators are seeded and reproducible; "random" always means
//! "pseudo-random from the given seed".

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::auditor::{choose_m, ChainRecord, ConstantsLedger};
use crate::exactnum::PerturbedRational;
use crate::index::{e_gamma, ech_index, j0, j0_topological, Puncture, RelClassData};
use crate::orbits::{Catalog, OrbitKind, OrbitSet, SimpleOrbit};
use crate::partitions::{
    check_partition_conditions, is_exceptional, negative_partition, positive_partition, EndSign,
    Partition,
};
use crate::score::{s_gamma, t_gamma, t_prime_gamma, CurveEnd, UCurveRecord};
use crate::{Error, Result};

fn rat_u(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn to_i64(v: BigInt, what: &str) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::Overflow(what.into()))
}

/// All reduced rotation numbers `a/b ± ε` with `0 ≤ a < b ≤ max_denominator`.
pub fn rotation_grid(max_denominator: u64) -> Vec<PerturbedRational> {
    let mut grid = Vec::new();
    for b in 1..=max_denominator {
        for a in 0..b {
            if num_integer::gcd(a, b) != 1 && a != 0 {
                continue;
            }
            if a == 0 && b != 1 {
                continue;
            }
            for suffix in ["+e", "-e"] {
                let text = format!("{a}/{b}{suffix}");
                grid.push(text.parse().expect("grid rotation parses"));
            }
        }
    }
    grid
}

// ---------------------------------------------------------------------------
// Random catalogs and records
// ---------------------------------------------------------------------------

const ROTATION_CHOICES: &[&str] = &[
    "e", "-e", "1/2+e", "1/2-e", "1/3+e", "1/3-e", "2/3+e", "2/3-e", "1/4+e", "3/4-e", "1/5+e",
    "2/5-e", "3/5+e", "5/6-e", "1/6+e", "4/3+e", "-1/2-e", "7/5+e",
];

fn random_catalog_with(rng: &mut ChaCha8Rng, size: usize) -> Result<Catalog> {
    let mut orbits = Vec::with_capacity(size);
    for i in 0..size {
        let rotation: PerturbedRational =
            ROTATION_CHOICES[rng.random_range(0..ROTATION_CHOICES.len())].parse()?;
        orbits.push(SimpleOrbit {
            id: format!("g{i:02}"),
            action: rat_u(rng.random_range(1..=9), rng.random_range(1..=9)),
            rotation,
            kind: OrbitKind::Elliptic,
            chern: rng.random_range(-2..=2),
            homology: vec![],
        });
    }
    Catalog::new(orbits)
}

/// A seeded catalog of elliptic orbits with assorted rotation numbers.
pub fn random_catalog(seed: u64, size: usize) -> Result<Catalog> {
    random_catalog_with(&mut ChaCha8Rng::seed_from_u64(seed), size)
}

/// Seeded valid records over one random catalog.  Ends always realize the
/// full signed partition of the orbit multiplicity (so the partition
/// conditions hold with no trivial cylinder at end-bearing orbits), and the
/// relative-class data is solved so that the `J₀` of the record equals its
/// topological value.
pub fn random_consistent_records(seed: u64, count: usize) -> Result<(Catalog, Vec<UCurveRecord>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let catalog = random_catalog_with(&mut rng, 12)?;
    let ids: Vec<String> = catalog.orbits().map(|o| o.id.clone()).collect();
    let mut records = Vec::with_capacity(count);
    for _ in 0..count {
        records.push(random_record(&mut rng, &catalog, &ids)?);
    }
    Ok((catalog, records))
}

fn random_record(rng: &mut ChaCha8Rng, catalog: &Catalog, ids: &[String]) -> Result<UCurveRecord> {
    let mut n_alpha = rng.random_range(0..=2usize);
    let n_beta = rng.random_range(0..=2usize);
    let n_trivial = rng.random_range(0..=2usize);
    let n_through = rng.random_range(0..=1usize);
    if n_alpha + n_beta + n_trivial + n_through == 0 {
        n_alpha = 1;
    }
    // Disjoint orbit groups drawn from a rotated view of the catalog.
    let start = rng.random_range(0..ids.len());
    let mut pool = (0..ids.len()).map(|k| ids[(start + k) % ids.len()].clone());

    let mut alpha_map = BTreeMap::new();
    let mut beta_map = BTreeMap::new();
    let mut trivial = BTreeMap::new();
    let mut ends = Vec::new();
    let push_ends = |id: &str, parts: &Partition, sign: EndSign, ends: &mut Vec<CurveEnd>| {
        for &cover in parts.parts() {
            ends.push(CurveEnd { orbit: id.to_string(), sign, cover });
        }
    };

    for _ in 0..n_alpha {
        let id = pool.next().expect("catalog is larger than any group draw");
        let m = rng.random_range(1..=5u64);
        let theta = &catalog.get(&id)?.rotation;
        push_ends(&id, &positive_partition(theta, m)?, EndSign::Positive, &mut ends);
        alpha_map.insert(id, m);
    }
    for _ in 0..n_beta {
        let id = pool.next().expect("pool");
        let m = rng.random_range(1..=5u64);
        let theta = &catalog.get(&id)?.rotation;
        push_ends(&id, &negative_partition(theta, m)?, EndSign::Negative, &mut ends);
        beta_map.insert(id, m);
    }
    for _ in 0..n_trivial {
        let id = pool.next().expect("pool");
        let m = rng.random_range(1..=5u64);
        alpha_map.insert(id.clone(), m);
        beta_map.insert(id.clone(), m);
        trivial.insert(id, m);
    }
    for _ in 0..n_through {
        let id = pool.next().expect("pool");
        let ma = rng.random_range(1..=5u64);
        let mb = rng.random_range(1..=5u64);
        let theta = &catalog.get(&id)?.rotation;
        push_ends(&id, &positive_partition(theta, ma)?, EndSign::Positive, &mut ends);
        push_ends(&id, &negative_partition(theta, mb)?, EndSign::Negative, &mut ends);
        alpha_map.insert(id.clone(), ma);
        beta_map.insert(id, mb);
    }

    let alpha = OrbitSet::new(alpha_map)?;
    let beta = OrbitSet::new(beta_map)?;
    let genus = rng.random_range(0..=3u32);
    let c_tau = alpha.chern_pairing(catalog)? - beta.chern_pairing(catalog)?;
    solve_record(alpha, beta, genus, ends, trivial, c_tau, None, catalog)
}

/// Builds the record with `q_tau` chosen to hit `j0_target` (or, when it is
/// `None`, the topological value of `J₀` computed from the record shape).
#[allow(clippy::too_many_arguments)]
fn solve_record(
    alpha: OrbitSet,
    beta: OrbitSet,
    genus: u32,
    ends: Vec<CurveEnd>,
    trivial: BTreeMap<String, u64>,
    c_tau: i64,
    j0_target: Option<i64>,
    catalog: &Catalog,
) -> Result<UCurveRecord> {
    let rel0 = RelClassData::new(c_tau, 0);
    let probe = UCurveRecord::new_unchecked(
        alpha.clone(),
        beta.clone(),
        genus,
        ends.clone(),
        trivial.clone(),
        rel0.clone(),
        0,
    );
    let target = match j0_target {
        Some(t) => BigInt::from(t),
        None => BigInt::from(j0_topological(&probe)),
    };
    // J₀ is linear in q_tau with unit slope.
    let q_tau = to_i64(target - j0(&alpha, &beta, &rel0, catalog)?, "q_tau")?;
    let rel = RelClassData::new(c_tau, q_tau);
    let declared = to_i64(ech_index(&alpha, &beta, &rel, catalog)?, "declared index")?;
    UCurveRecord::new(alpha, beta, genus, ends, trivial, rel, declared, catalog)
}

// ---------------------------------------------------------------------------
// Synthetic chains
// ---------------------------------------------------------------------------

/// Builds chains step by step with known step classes.  Steps come in four
/// recipes; each solves the relative-class data for the `J₀` it wants:
///
/// * [`step_low`](Self::step_low) — a fresh multiplicity-one orbit appears
///   via one positive end; the action rise is below `ε′` and the score
///   change is zero, so `J₀ = 2` lands in `G2` and `J₀ = 3` in `G3`.
/// * [`step_jump`](Self::step_jump) — same shape with action rise at least
///   `ε′`: class `G0` regardless of `J₀`.
/// * [`step_build_high`](Self::step_build_high) — a fresh orbit of
///   multiplicity at least `M` appears through cover-one positive ends.
///   The new orbit is a `p⁻`-component (score change −1), so with `J₀ = 3`
///   the step total is `T = 2 > 0`: class `G3`.  The orbit is remembered
///   for later swaps.
/// * [`step_swap_high`](Self::step_swap_high) — a remembered high orbit is
///   consumed by a single high-multiplicity negative end while a fresh
///   down-rotation orbit of the same multiplicity appears through a single
///   positive end.  The score change is +3, so `J₀ = 1` gives `T = 0`:
///   class `G1`.
pub struct ChainSynth {
    rng: ChaCha8Rng,
    orbits: Vec<SimpleOrbit>,
    current: OrbitSet,
    high: Vec<(String, u64)>,
    steps: Vec<UCurveRecord>,
    eps_prime: BigRational,
    big_m: u64,
    next_id: usize,
}

impl ChainSynth {
    pub fn new(seed: u64, big_m: u64, eps_prime: BigRational) -> Result<Self> {
        if big_m < 3 {
            return Err(Error::invalid_input("the multiplicity threshold M must be >= 3"));
        }
        if !eps_prime.is_positive() {
            return Err(Error::invalid_input("eps_prime must be positive"));
        }
        Ok(ChainSynth {
            rng: ChaCha8Rng::seed_from_u64(seed),
            orbits: Vec::new(),
            current: OrbitSet::empty(),
            high: Vec::new(),
            steps: Vec::new(),
            eps_prime,
            big_m,
            next_id: 0,
        })
    }

    fn catalog(&self) -> Result<Catalog> {
        Catalog::new(self.orbits.clone())
    }

    fn mint(&mut self, rotation: &str, action: BigRational, chern: i64) -> Result<String> {
        let id = format!("c{:03}", self.next_id);
        self.next_id += 1;
        self.orbits.push(SimpleOrbit {
            id: id.clone(),
            action,
            rotation: rotation.parse()?,
            kind: OrbitKind::Elliptic,
            chern,
            homology: vec![],
        });
        Ok(id)
    }

    /// Per-cover action such that `copies` covers rise by less than `ε′`.
    fn low_rise(&mut self, copies: u64) -> BigRational {
        let k = self.rng.random_range(1..=7u64);
        &self.eps_prime * rat_u(k, 8 * copies)
    }

    fn trivial_of_current(&self) -> BTreeMap<String, u64> {
        self.current.iter().map(|(id, m)| (id.to_string(), m)).collect()
    }

    fn push_step(
        &mut self,
        alpha: OrbitSet,
        ends: Vec<CurveEnd>,
        trivial: BTreeMap<String, u64>,
        j0_target: i64,
    ) -> Result<()> {
        let catalog = self.catalog()?;
        let beta = self.current.clone();
        let c_tau = alpha.chern_pairing(&catalog)? - beta.chern_pairing(&catalog)?;
        let record = solve_record(
            alpha.clone(),
            beta,
            0,
            ends,
            trivial,
            c_tau,
            Some(j0_target),
            &catalog,
        )?;
        self.steps.push(record);
        self.current = alpha;
        Ok(())
    }

    /// Pre-populates the bottom generator with `count` high-multiplicity
    /// orbits available for swaps.  Only valid before any step is taken.
    pub fn seed_high_orbits(&mut self, count: usize) -> Result<()> {
        if !self.steps.is_empty() {
            return Err(Error::invalid_input("the base generator is fixed once steps exist"));
        }
        for _ in 0..count {
            let id = self.mint("e", BigRational::one(), 0)?;
            self.current = self.current.union(&OrbitSet::from_pairs([(id.clone(), self.big_m)])?);
            self.high.push((id, self.big_m));
        }
        Ok(())
    }

    pub fn step_low(&mut self, j0_target: i64) -> Result<()> {
        let action = self.low_rise(1);
        self.fresh_orbit_step(action, j0_target)
    }

    pub fn step_jump(&mut self, j0_target: i64) -> Result<()> {
        let k = self.rng.random_range(0..=8u64);
        let action = &self.eps_prime * rat_u(8 + k, 8);
        self.fresh_orbit_step(action, j0_target)
    }

    fn fresh_orbit_step(&mut self, action: BigRational, j0_target: i64) -> Result<()> {
        let chern = self.rng.random_range(-1..=1);
        let id = self.mint("e", action, chern)?;
        let alpha = self.current.union(&OrbitSet::from_pairs([(id.clone(), 1)])?);
        let ends = vec![CurveEnd { orbit: id, sign: EndSign::Positive, cover: 1 }];
        let trivial = self.trivial_of_current();
        self.push_step(alpha, ends, trivial, j0_target)
    }

    pub fn step_build_high(&mut self) -> Result<()> {
        let mult = self.big_m + self.rng.random_range(0..=2u64);
        let action = self.low_rise(mult);
        let chern = self.rng.random_range(-1..=1);
        let id = self.mint("e", action, chern)?;
        let alpha = self.current.union(&OrbitSet::from_pairs([(id.clone(), mult)])?);
        let ends = (0..mult)
            .map(|_| CurveEnd { orbit: id.clone(), sign: EndSign::Positive, cover: 1 })
            .collect();
        let trivial = self.trivial_of_current();
        self.high.push((id, mult));
        self.push_step(alpha, ends, trivial, 3)
    }

    /// Consumes one remembered high orbit; returns false when none is left.
    pub fn step_swap_high(&mut self) -> Result<bool> {
        let Some((u_id, mult)) = self.high.pop() else {
            return Ok(false);
        };
        let u_action = self
            .orbits
            .iter()
            .find(|o| o.id == u_id)
            .expect("high orbit was minted here")
            .action
            .clone();
        let k = self.rng.random_range(1..=7u64);
        let d_action = &u_action + &self.eps_prime * rat_u(k, 8 * mult);
        let chern = self.rng.random_range(-1..=1);
        let d_id = self.mint("-e", d_action, chern)?;
        let mut alpha_map: BTreeMap<String, u64> = self
            .current
            .iter()
            .filter(|&(id, _)| id != u_id)
            .map(|(id, m)| (id.to_string(), m))
            .collect();
        alpha_map.insert(d_id.clone(), mult);
        let alpha = OrbitSet::new(alpha_map)?;
        let mut trivial = self.trivial_of_current();
        trivial.remove(&u_id);
        let ends = vec![
            CurveEnd { orbit: d_id, sign: EndSign::Positive, cover: mult },
            CurveEnd { orbit: u_id, sign: EndSign::Negative, cover: mult },
        ];
        self.push_step(alpha, ends, trivial, 1)?;
        Ok(true)
    }

    /// Assembles the catalog and a ledger spanning exactly the built steps.
    pub fn finish(self) -> Result<(Catalog, ChainRecord)> {
        if self.steps.is_empty() {
            return Err(Error::invalid_input("a chain needs at least one step"));
        }
        let catalog = Catalog::new(self.orbits.clone())?;
        let len = self.steps.len();
        let q = BigInt::from(1 + len as u64);
        let ledger = ConstantsLedger {
            b0: 1,
            b: 4,
            big_m: self.big_m,
            ell: &self.eps_prime * BigInt::from(4),
            eps_bm: &self.eps_prime * BigInt::from(3),
            eps_prime: self.eps_prime.clone(),
            delta1: BigRational::one(),
            delta2: BigRational::one(),
            eta: self.eps_prime.clone(),
            hbar: &self.eps_prime / BigInt::from(2),
            p0: BigInt::one(),
            q: q.clone(),
            t_q_squared: BigRational::from_integer(q),
        };
        let chain = ChainRecord::new(self.steps, ledger, &catalog)?;
        Ok((catalog, chain))
    }
}

/// A seeded chain mixing all four step recipes.
pub fn random_chain(
    seed: u64,
    length: usize,
    big_m: u64,
    eps_prime: BigRational,
) -> Result<(Catalog, ChainRecord)> {
    let mut synth = ChainSynth::new(seed, big_m, eps_prime)?;
    for _ in 0..length {
        match synth.rng.random_range(0..100u32) {
            0..40 => synth.step_low(2)?,
            40..60 => synth.step_low(3)?,
            60..70 => {
                let j0_target = synth.rng.random_range(1..=3);
                synth.step_jump(j0_target)?;
            }
            70..85 => synth.step_build_high()?,
            _ => {
                if !synth.step_swap_high()? {
                    synth.step_build_high()?;
                }
            }
        }
    }
    synth.finish()
}

/// Rewrites one step's boundary pairing by `shift`, keeping the record
/// internally valid.  The declared index follows the shift, while `J₀`
/// moves by `−shift`, so the telescoping identity breaks by `−2·shift`.
pub fn plant_boundary_shift(
    chain: &mut ChainRecord,
    catalog: &Catalog,
    step: usize,
    shift: i64,
) -> Result<()> {
    if shift == 0 {
        return Err(Error::invalid_input("a zero shift plants nothing"));
    }
    let rec = chain
        .steps
        .get_mut(step)
        .ok_or_else(|| Error::invalid_input("step index out of range"))?;
    rec.rel.c_tau = rec
        .rel
        .c_tau
        .checked_add(shift)
        .ok_or_else(|| Error::Overflow("boundary shift".into()))?;
    rec.declared_i = to_i64(
        ech_index(&rec.alpha, &rec.beta, &rec.rel, catalog)?,
        "declared index",
    )?;
    rec.validate(catalog)
}

/// Inflates one step's intersection term by `excess`, keeping the record
/// internally valid; `J₀` and the index grow by `excess`, overrunning the
/// chain's `J₀` budget when `excess` is large.
pub fn plant_index_excess(
    chain: &mut ChainRecord,
    catalog: &Catalog,
    step: usize,
    excess: i64,
) -> Result<()> {
    if excess == 0 {
        return Err(Error::invalid_input("a zero excess plants nothing"));
    }
    let rec = chain
        .steps
        .get_mut(step)
        .ok_or_else(|| Error::invalid_input("step index out of range"))?;
    rec.rel.q_tau = rec
        .rel
        .q_tau
        .checked_add(excess)
        .ok_or_else(|| Error::Overflow("index excess".into()))?;
    rec.declared_i = to_i64(
        ech_index(&rec.alpha, &rec.beta, &rec.rel, catalog)?,
        "declared index",
    )?;
    rec.validate(catalog)
}

/// Which chain-audit class a crowded chain should overflow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrowdTarget {
    G0Budget,
    G1Bound,
    G2Bound,
    G3Bound,
}

/// A valid chain whose step-class counts violate the targeted aggregate
/// bound: every class bound compares an integer count against a fractional
/// power of `q = #steps + 1`, so packing enough steps of one class into a
/// short chain overruns it.
pub fn crowded_class_chain(seed: u64, target: CrowdTarget) -> Result<(Catalog, ChainRecord)> {
    match target {
        CrowdTarget::G0Budget => {
            // |G0|·ε′ ≤ T_q fails for two jumps with ε′ = 1: 2 > √3.
            let mut synth = ChainSynth::new(seed, 3, BigRational::one())?;
            synth.step_jump(2)?;
            synth.step_jump(2)?;
            synth.finish()
        }
        CrowdTarget::G1Bound => {
            // |G1|⁵ < q⁴ fails at 4⁵ = 1024 ≥ 5⁴ = 625.
            let mut synth = ChainSynth::new(seed, 3, rat_u(1, 8))?;
            synth.seed_high_orbits(4)?;
            for _ in 0..4 {
                synth.step_swap_high()?;
            }
            synth.finish()
        }
        CrowdTarget::G2Bound => {
            // |G2|⁶ < q⁵ fails at 4⁶ = 4096 ≥ 5⁵ = 3125.
            let mut synth = ChainSynth::new(seed, 3, rat_u(1, 8))?;
            for _ in 0..4 {
                synth.step_low(2)?;
            }
            synth.finish()
        }
        CrowdTarget::G3Bound => {
            // |G3|³ < q² fails at 3³ = 27 ≥ 4² = 16.
            let mut synth = ChainSynth::new(seed, 3, rat_u(1, 8))?;
            for _ in 0..3 {
                synth.step_low(3)?;
            }
            synth.finish()
        }
    }
}

// ---------------------------------------------------------------------------
// Exhaustive single-orbit configurations
// ---------------------------------------------------------------------------

/// One admissible way a curve can meet a single orbit: trivial-cylinder
/// multiplicity plus the cover multisets of its positive and negative ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitConfig {
    pub rotation: PerturbedRational,
    pub trivial: u64,
    pub positive_covers: Vec<u64>,
    pub negative_covers: Vec<u64>,
}

/// The per-orbit score data of one configuration.
#[derive(Clone, Debug)]
pub struct ConfigScore {
    pub config: OrbitConfig,
    pub m_threshold: u64,
    pub multiplicity_alpha: u64,
    pub multiplicity_beta: u64,
    pub s: i64,
    pub e: i64,
    pub t: i64,
    pub t_prime: i64,
}

/// Enumerates and scores every single-orbit configuration over the rotation
/// grid: end covers realize an exact signed partition on each side (the
/// necessary form), then the full partition-condition sweep and the
/// non-exceptional surrogate at multiplicities ≥ M filter the space.
pub fn single_orbit_scores(
    max_denominator: u64,
    max_side_total: u64,
    max_trivial: u64,
) -> Result<Vec<ConfigScore>> {
    let grid = rotation_grid(max_denominator);
    let per_theta: Vec<Vec<ConfigScore>> = grid
        .par_iter()
        .map(|theta| theta_scores(theta, max_side_total, max_trivial))
        .collect::<Result<_>>()?;
    Ok(per_theta.concat())
}

fn theta_scores(
    theta: &PerturbedRational,
    max_side_total: u64,
    max_trivial: u64,
) -> Result<Vec<ConfigScore>> {
    let catalog = Catalog::new(vec![SimpleOrbit {
        id: "g".into(),
        action: BigRational::one(),
        rotation: theta.clone(),
        kind: OrbitKind::Elliptic,
        chern: 0,
        homology: vec![],
    }])?;
    let m_threshold = choose_m(&catalog)?;
    let mut out = Vec::new();
    for covered_pos in 0..=max_side_total {
        let pos_parts =
            if covered_pos == 0 { Partition::empty() } else { positive_partition(theta, covered_pos)? };
        for covered_neg in 0..=max_side_total {
            if covered_pos == 0 && covered_neg == 0 {
                continue;
            }
            let neg_parts = if covered_neg == 0 {
                Partition::empty()
            } else {
                negative_partition(theta, covered_neg)?
            };
            for trivial in 0..=max_trivial {
                let mult_alpha = trivial + covered_pos;
                let mult_beta = trivial + covered_neg;
                if !check_partition_conditions(theta, mult_alpha, &pos_parts, EndSign::Positive)? {
                    continue;
                }
                if !check_partition_conditions(theta, mult_beta, &neg_parts, EndSign::Negative)? {
                    continue;
                }
                if mult_alpha >= m_threshold && is_exceptional(theta, mult_alpha)? {
                    continue;
                }
                if mult_beta >= m_threshold && is_exceptional(theta, mult_beta)? {
                    continue;
                }
                out.push(score_config(
                    theta,
                    &catalog,
                    m_threshold,
                    trivial,
                    &pos_parts,
                    &neg_parts,
                    mult_alpha,
                    mult_beta,
                )?);
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn score_config(
    theta: &PerturbedRational,
    catalog: &Catalog,
    m_threshold: u64,
    trivial: u64,
    pos_parts: &Partition,
    neg_parts: &Partition,
    mult_alpha: u64,
    mult_beta: u64,
) -> Result<ConfigScore> {
    let gamma = "g";
    let side = |m: u64| -> Result<OrbitSet> {
        if m == 0 {
            Ok(OrbitSet::empty())
        } else {
            OrbitSet::from_pairs([(gamma.to_string(), m)])
        }
    };
    let alpha = side(mult_alpha)?;
    let beta = side(mult_beta)?;
    let mut ends = Vec::new();
    for &cover in pos_parts.parts() {
        ends.push(CurveEnd { orbit: gamma.into(), sign: EndSign::Positive, cover });
    }
    for &cover in neg_parts.parts() {
        ends.push(CurveEnd { orbit: gamma.into(), sign: EndSign::Negative, cover });
    }
    let mut trivial_map = BTreeMap::new();
    if trivial > 0 {
        trivial_map.insert(gamma.to_string(), trivial);
    }
    let rel = RelClassData::zero();
    let declared = to_i64(ech_index(&alpha, &beta, &rel, catalog)?, "declared index")?;
    let record =
        UCurveRecord::new(alpha, beta, 0, ends, trivial_map, rel, declared, catalog)?;
    Ok(ConfigScore {
        config: OrbitConfig {
            rotation: theta.clone(),
            trivial,
            positive_covers: pos_parts.parts().to_vec(),
            negative_covers: neg_parts.parts().to_vec(),
        },
        m_threshold,
        multiplicity_alpha: mult_alpha,
        multiplicity_beta: mult_beta,
        s: s_gamma(&record, gamma, catalog, m_threshold)?,
        e: e_gamma(&record, gamma),
        t: t_gamma(&record, gamma, catalog, m_threshold)?,
        t_prime: t_prime_gamma(&record, gamma, catalog, m_threshold)?,
    })
}

/// Which per-orbit score bound a violation falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScoreBoundKind {
    /// `T_γ ≥ 3`, with the stated equality profile.
    EndScore,
    /// High-multiplicity positive end: `T_γ ≥ 5` (unique end) / `≥ 8`.
    HighPositive,
    /// High-multiplicity negative end: `T_γ ≥ 4` (unique end) / `≥ 7`.
    HighNegative,
    /// `T′_γ ≥ 1`.
    EndScorePrime,
}

/// Checks every applicable per-orbit score bound, including the equality
/// profiles, returning one entry per violated clause.
pub fn score_bound_violations(cs: &ConfigScore) -> Vec<(ScoreBoundKind, String)> {
    let mut out = Vec::new();
    let cfg = &cs.config;
    let n_ends = cfg.positive_covers.len() + cfg.negative_covers.len();
    let describe = || {
        format!(
            "θ={}, m0={}, +{:?}, -{:?}, M={}",
            cfg.rotation, cfg.trivial, cfg.positive_covers, cfg.negative_covers, cs.m_threshold
        )
    };

    if cs.t < 3 {
        out.push((ScoreBoundKind::EndScore, format!("t={} < 3 at {}", cs.t, describe())));
    } else if cs.t == 3 {
        let unique_positive_simple =
            cfg.positive_covers == [1] && cfg.negative_covers.is_empty();
        let unique_negative = cfg.positive_covers.is_empty() && cfg.negative_covers.len() == 1;
        if !(cfg.trivial == 0 && n_ends == 1 && (unique_positive_simple || unique_negative)) {
            out.push((
                ScoreBoundKind::EndScore,
                format!("t=3 without the unique-end profile at {}", describe()),
            ));
        }
    }

    if cfg.positive_covers.iter().any(|&c| c >= cs.m_threshold) {
        if n_ends == 1 {
            if cs.t < 5 {
                out.push((
                    ScoreBoundKind::HighPositive,
                    format!("t={} < 5 at {}", cs.t, describe()),
                ));
            } else if cs.t == 5 && cfg.trivial == 1 {
                out.push((
                    ScoreBoundKind::HighPositive,
                    format!("t=5 with m0=1 at {}", describe()),
                ));
            }
        } else if cs.t < 8 {
            out.push((
                ScoreBoundKind::HighPositive,
                format!("t={} < 8 at {}", cs.t, describe()),
            ));
        } else if cs.t == 8
            && !(cfg.positive_covers.len() == 1
                && cfg.negative_covers.len() == 1
                && cfg.trivial == 0)
        {
            out.push((
                ScoreBoundKind::HighPositive,
                format!("t=8 without the paired-end profile at {}", describe()),
            ));
        }
    }

    if cfg.negative_covers.iter().any(|&c| c >= cs.m_threshold) {
        if n_ends == 1 {
            if cs.t < 4 {
                out.push((
                    ScoreBoundKind::HighNegative,
                    format!("t={} < 4 at {}", cs.t, describe()),
                ));
            } else if cs.t == 4 && cfg.trivial != 0 {
                out.push((
                    ScoreBoundKind::HighNegative,
                    format!("t=4 with m0>0 at {}", describe()),
                ));
            }
        } else if cs.t < 7 {
            out.push((
                ScoreBoundKind::HighNegative,
                format!("t={} < 7 at {}", cs.t, describe()),
            ));
        } else if cs.t == 7
            && !(cfg.positive_covers == [1]
                && cfg.negative_covers.len() == 1
                && cfg.trivial == 0)
        {
            out.push((
                ScoreBoundKind::HighNegative,
                format!("t=7 without the simple-positive profile at {}", describe()),
            ));
        }
    }

    if cs.t_prime < 1 {
        out.push((
            ScoreBoundKind::EndScorePrime,
            format!("t'={} < 1 at {}", cs.t_prime, describe()),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Partition facts over the irrational grid
// ---------------------------------------------------------------------------

/// Exhaustively checks the three partition facts over the irrational-model
/// grid: the one-part duality (1 is in exactly one of `p±(m)`), disjointness
/// of `p+` and `p−` for `m > 1`, and the exceptional-pair localization
/// (`m·{θ} < 2` or `m·(1−{θ}) < 2`).  Returns a description per failure.
pub fn partition_fact_failures(max_denominator: u64, max_multiplicity: u64) -> Result<Vec<String>> {
    let grid = rotation_grid(max_denominator);
    let per_theta: Vec<Vec<String>> = grid
        .par_iter()
        .map(|theta| {
            let mut fails = Vec::new();
            for m in 1..=max_multiplicity {
                let plus = positive_partition(theta, m)?;
                let minus = negative_partition(theta, m)?;
                // Both partitions of 1 are (1); the duality is a statement
                // about m ≥ 2, like disjointness.
                if m > 1 && plus.has_part(1) == minus.has_part(1) {
                    fails.push(format!("one-part duality fails at θ={theta}, m={m}"));
                }
                if m > 1 && !plus.intersection(&minus).is_empty() {
                    fails.push(format!("partitions share a part at θ={theta}, m={m}"));
                }
                if is_exceptional(theta, m)? {
                    let scaled_frac = theta.fractional_part().scaled_u64(m);
                    let below_two =
                        scaled_frac.cmp_int(&BigInt::from(2)) == std::cmp::Ordering::Less;
                    let above_complement = scaled_frac
                        .cmp_rational(&BigRational::from_integer(BigInt::from(m) - 2))
                        == std::cmp::Ordering::Greater;
                    if !(below_two || above_complement) {
                        fails.push(format!(
                            "exceptional pair away from an integer at θ={theta}, m={m}"
                        ));
                    }
                }
            }
            Ok(fails)
        })
        .collect::<Result<_>>()?;
    Ok(per_theta.concat())
}

// ---------------------------------------------------------------------------
// Rotation-model puncture samples
// ---------------------------------------------------------------------------

/// A seeded batch of rotation-model puncture configurations with windings
/// inside the allowed extremal range (at or below the top eigenvalue winding
/// at positive punctures, at or above the bottom one at negative punctures).
pub fn random_puncture_configs(
    seed: u64,
    count: usize,
) -> Result<Vec<(u32, Vec<Puncture>, BigRational)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let genus = rng.random_range(0..=2u32);
        let n = rng.random_range(1..=4usize);
        let mut specs = Vec::with_capacity(n);
        for _ in 0..n {
            let den = rng.random_range(1..=9u64);
            let num = rng.random_range(0..den);
            let shift = rng.random_range(0..=2u64);
            let eps = if rng.random_bool(0.5) { "+e" } else { "-e" };
            let theta: PerturbedRational =
                format!("{}/{}{}", num + shift * den, den, eps).parse()?;
            let sign = if rng.random_bool(0.5) { EndSign::Positive } else { EndSign::Negative };
            let cover = rng.random_range(1..=4u64);
            specs.push((theta, sign, cover));
        }
        // A positive weight must keep every shifted rotation off the
        // integers; half the smallest rational distance works, and zero is
        // forced when a total rotation has an integer rational part.
        let mut min_distance: Option<BigRational> = None;
        let mut force_zero = false;
        for (theta, _, cover) in &specs {
            let value = theta.scaled_u64(*cover);
            let frac = value.value() - value.value().floor();
            let distance = frac.clone().min(BigRational::one() - &frac);
            if distance.is_zero() {
                force_zero = true;
            } else if min_distance.as_ref().is_none_or(|d| distance < *d) {
                min_distance = Some(distance);
            }
        }
        let delta = match (force_zero, min_distance, rng.random_bool(0.5)) {
            (false, Some(d), true) => d / BigInt::from(2),
            _ => BigRational::zero(),
        };
        let mut punctures = Vec::with_capacity(n);
        for (i, (theta, sign, cover)) in specs.iter().enumerate() {
            let total = theta.scaled_u64(*cover);
            let slack = rng.random_range(0..=2i64);
            let winding = match sign {
                EndSign::Positive => to_i64(total.shifted(&-delta.clone()).floor(), "winding")? - slack,
                EndSign::Negative => to_i64(total.shifted(&delta).ceil(), "winding")? + slack,
            };
            punctures.push(Puncture::from_simple_rotation(
                format!("p{i}"),
                *sign,
                *cover,
                theta,
                winding,
            )?);
        }
        out.push((genus, punctures, delta));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auditor::{audit_chain, GClass};
    use crate::index::wind_relations;
    use crate::score::total_score;

    #[test]
    fn rotation_grid_counts_reduced_fractions() {
        // Σ φ(b) for b ≤ 12 is 46, doubled for the two perturbation signs.
        assert_eq!(rotation_grid(12).len(), 92);
        assert_eq!(rotation_grid(1).len(), 2);
    }

    #[test]
    fn random_records_are_index_consistent() {
        let (catalog, records) = random_consistent_records(7, 150).unwrap();
        assert_eq!(records.len(), 150);
        for rec in &records {
            assert!(crate::score::is_index_consistent(rec, &catalog).unwrap());
        }
    }

    #[test]
    fn record_generation_is_deterministic() {
        let (_, a) = random_consistent_records(3, 40).unwrap();
        let (_, b) = random_consistent_records(3, 40).unwrap();
        assert_eq!(a, b);
        let (_, c) = random_consistent_records(4, 40).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn score_sum_identity_holds_on_random_records() {
        let (catalog, records) = random_consistent_records(21, 60).unwrap();
        for rec in &records {
            let score = total_score(rec, &catalog, 5).unwrap();
            let orbits: std::collections::BTreeSet<&str> =
                rec.alpha.support().chain(rec.beta.support()).collect();
            let mut t_sum = 0i64;
            let mut tp_sum = 0i64;
            for gamma in orbits {
                t_sum += t_gamma(rec, gamma, &catalog, 5).unwrap();
                tp_sum += t_prime_gamma(rec, gamma, &catalog, 5).unwrap();
            }
            let g = i64::from(rec.genus);
            assert_eq!(score.t, BigInt::from(6 * g - 12 + t_sum));
            assert_eq!(score.t_prime, BigInt::from(4 * g - 8 + tp_sum));
        }
    }

    #[test]
    fn chain_steps_land_in_their_classes() {
        let mut synth = ChainSynth::new(5, 4, rat_u(1, 8)).unwrap();
        synth.step_low(2).unwrap();
        synth.step_low(3).unwrap();
        synth.step_jump(2).unwrap();
        synth.step_build_high().unwrap();
        assert!(synth.step_swap_high().unwrap());
        let (catalog, chain) = synth.finish().unwrap();
        let report = audit_chain(&chain, &catalog).unwrap();
        let classes: Vec<GClass> = report.steps.iter().map(|s| s.class).collect();
        assert_eq!(
            classes,
            vec![GClass::G2, GClass::G3, GClass::G0, GClass::G3, GClass::G1]
        );
        assert!(report.checks.telescoping_holds);
        assert!(report.checks.classes_exhaustive);
    }

    #[test]
    fn random_chains_telescope() {
        for seed in 0..8 {
            let (catalog, chain) = random_chain(seed, 30, 4, rat_u(1, 8)).unwrap();
            let report = audit_chain(&chain, &catalog).unwrap();
            assert!(report.checks.telescoping_holds, "seed {seed}");
            assert!(report.checks.classes_exhaustive, "seed {seed}");
        }
    }

    #[test]
    fn chain_generation_is_deterministic() {
        let (_, a) = random_chain(9, 25, 4, rat_u(1, 8)).unwrap();
        let (_, b) = random_chain(9, 25, 4, rat_u(1, 8)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn planted_boundary_shift_breaks_telescoping() {
        let (catalog, mut chain) = random_chain(13, 20, 4, rat_u(1, 8)).unwrap();
        plant_boundary_shift(&mut chain, &catalog, 7, 3).unwrap();
        let report = audit_chain(&chain, &catalog).unwrap();
        assert!(!report.checks.telescoping_holds);
        assert_eq!(
            report.checks.telescoping_lhs,
            &report.checks.telescoping_rhs - BigInt::from(6)
        );
    }

    #[test]
    fn planted_index_excess_breaks_the_j0_budget() {
        let (catalog, mut chain) = random_chain(17, 20, 4, rat_u(1, 8)).unwrap();
        let excess = 5 * chain.steps.len() as i64 + 20;
        plant_index_excess(&mut chain, &catalog, 3, excess).unwrap();
        let report = audit_chain(&chain, &catalog).unwrap();
        assert!(!report.checks.j0_sum_within_budget);
    }

    #[test]
    fn crowded_chains_overflow_their_bounds() {
        let (catalog, chain) = crowded_class_chain(1, CrowdTarget::G0Budget).unwrap();
        let report = audit_chain(&chain, &catalog).unwrap();
        assert!(!report.checks.g0_within_budget);

        let (catalog, chain) = crowded_class_chain(2, CrowdTarget::G1Bound).unwrap();
        let report = audit_chain(&chain, &catalog).unwrap();
        assert_eq!(report.counts.g1, 4);
        assert!(!report.checks.g1_within_bound);

        let (catalog, chain) = crowded_class_chain(3, CrowdTarget::G2Bound).unwrap();
        let report = audit_chain(&chain, &catalog).unwrap();
        assert!(!report.checks.g2_within_bound);

        let (catalog, chain) = crowded_class_chain(4, CrowdTarget::G3Bound).unwrap();
        let report = audit_chain(&chain, &catalog).unwrap();
        assert!(!report.checks.g3_within_bound);
    }

    #[test]
    fn single_orbit_sweep_has_no_bound_violations_on_a_small_grid() {
        let scores = single_orbit_scores(4, 6, 2).unwrap();
        assert!(!scores.is_empty());
        let mut violations = Vec::new();
        for cs in &scores {
            violations.extend(score_bound_violations(cs));
        }
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn known_configuration_scores_match_hand_values() {
        let scores = single_orbit_scores(3, 6, 3).unwrap();
        let theta: PerturbedRational = "1/3+e".parse().unwrap();
        let found = scores
            .iter()
            .find(|cs| {
                cs.config.rotation == theta
                    && cs.config.trivial == 3
                    && cs.config.positive_covers == [3]
                    && cs.config.negative_covers.is_empty()
            })
            .expect("configuration present");
        assert_eq!(found.m_threshold, 7);
        assert_eq!(found.multiplicity_alpha, 6);
        assert_eq!(found.multiplicity_beta, 3);
        assert_eq!(found.e, 2);
        assert_eq!(found.s, 0);
        assert_eq!(found.t, 6);
        assert_eq!(found.t_prime, 4);
    }

    #[test]
    fn partition_facts_hold_on_a_small_grid() {
        let fails = partition_fact_failures(8, 12).unwrap();
        assert!(fails.is_empty(), "{fails:?}");
    }

    #[test]
    fn puncture_samples_satisfy_the_winding_inequality() {
        let configs = random_puncture_configs(31, 300).unwrap();
        assert_eq!(configs.len(), 300);
        for (genus, punctures, delta) in &configs {
            let rel = wind_relations(*genus, punctures, delta).unwrap();
            assert!(rel.inequality_holds);
            if *genus == 0 && rel.ind_delta == 2 && rel.wind_pi >= 0 {
                assert_eq!(rel.wind_pi, 0);
            }
        }
    }
}
