//! `ech-kit`: exact calculators and verification suites on the command line.
//!
//! All behavior is flag-driven; the only environment hook is
//! `ECH_KIT_THREADS`, which caps the worker pool the suites use internally.
//! Exit codes: 0 success, 1 verification failure, 2 input or usage error.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ech_kit::auditor::{audit_chain, choose_m, eps_m, solve_min_q, ChainRecord, ConstantsLedger};
use ech_kit::exactnum::{parse_rational, rational_to_string, PerturbedRational};
use ech_kit::index::{cz, cz_iterate_sum, ech_index, fredholm_index_delta, j0, Puncture,
    RelClassData};
use ech_kit::orbits::{Catalog, OrbitSet};
use ech_kit::partitions::{signed_partition, EndSign};
use ech_kit::score::{t_gamma, t_prime_gamma, total_score, UCurveRecord};
use ech_kit::synth::{
    partition_fact_failures, random_chain, random_consistent_records, rotation_grid,
    score_bound_violations, single_orbit_scores, ScoreBoundKind,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "ech-kit", version, about = "Exact ECH index, partition, and chain-audit tools")]
struct Cli {
    /// Output format for tables and reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Signed partition of a multiplicity at a rotation number.
    Partition {
        /// Rotation number, e.g. "1/3+e", "2/5", "e".
        #[arg(long)]
        theta: String,
        /// Multiplicity to partition.
        #[arg(long)]
        m: u64,
        /// Partition side: "+" or "-".
        #[arg(long)]
        sign: String,
    },
    /// Conley-Zehnder index 2*floor(theta)+1, or its iterate sum.
    Cz {
        #[arg(long)]
        theta: String,
        /// Sum the indices of iterates 1..=N instead.
        #[arg(long, value_name = "N")]
        sum_to: Option<u64>,
    },
    /// ECH index of a pair of orbit sets with relative-class data.
    Index(PairingArgs),
    /// J0 index of a pair of orbit sets with relative-class data.
    J0(PairingArgs),
    /// Scores (J0, y, S, T, T') of one curve record, with per-orbit rows.
    Score {
        #[arg(long)]
        catalog: PathBuf,
        /// Curve record JSON file.
        #[arg(long)]
        record: PathBuf,
        /// Multiplicity threshold; computed from the catalog when omitted.
        #[arg(long)]
        big_m: Option<u64>,
    },
    /// Weighted Fredholm index of a rotation-model puncture configuration.
    Fredholm {
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// JSON array of {"sign","cover","theta","winding"} entries.
        #[arg(long)]
        punctures: PathBuf,
        /// Spectral weight, a nonnegative rational such as "1/20".
        #[arg(long, default_value = "0")]
        delta: String,
    },
    /// Derived constants: minimal chain length, action gaps, thresholds.
    #[command(subcommand)]
    Constants(ConstantsCommand),
    /// Replays the counting argument over a chain of curve records.
    Audit {
        #[arg(long)]
        catalog: PathBuf,
        /// Chain JSON file (steps plus constants ledger).
        #[arg(long)]
        chain: PathBuf,
    },
    /// Runs a named verification suite and reports counterexamples.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Largest multiplicity (or side total, for the score suites).
        #[arg(long)]
        max_m: Option<u64>,
        /// Largest rotation-number denominator on the sweep grid.
        #[arg(long)]
        max_den: Option<u64>,
        /// Largest trivial-cylinder multiplicity in the score sweeps.
        #[arg(long)]
        max_trivial: Option<u64>,
        /// Sample count for the randomized suites.
        #[arg(long)]
        count: Option<u64>,
        /// Seed for the randomized suites; fixed seed, identical bytes.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct PairingArgs {
    #[arg(long)]
    catalog: PathBuf,
    /// Orbit multiset as inline JSON, e.g. '{"a":2,"b":1}'.
    #[arg(long)]
    alpha: String,
    /// Orbit multiset as inline JSON.
    #[arg(long)]
    beta: String,
    /// Pairing of the relative class with the trivialization cycle.
    #[arg(long, default_value_t = 0)]
    ctau: i64,
    /// Self-intersection term of the relative class.
    #[arg(long, default_value_t = 0)]
    qtau: i64,
}

#[derive(Subcommand)]
enum ConstantsCommand {
    /// Smallest integer q > p0 satisfying the four chain-length inequalities.
    SolveQ {
        #[arg(long, default_value = "1")]
        delta1: String,
        #[arg(long, default_value = "1")]
        delta2: String,
        #[arg(long, default_value = "1")]
        ell: String,
        #[arg(long, default_value = "1")]
        eps_prime: String,
        #[arg(long, default_value = "1")]
        p0: String,
    },
    /// Smallest action gap among bounded-multiplicity orbit-set families.
    EpsM {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        big_m: u64,
        /// Action bound for the enumerated families; defaults to the
        /// ledger's T_q (rounded up to an integer) when a ledger is given.
        #[arg(long)]
        action_cap: Option<String>,
        /// Constants ledger JSON, used only to default the action cap.
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Multiplicity threshold M for a catalog.
    ChooseM {
        #[arg(long)]
        catalog: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    #[value(name = "lemma-2.10")]
    PartitionFacts,
    #[value(name = "lemma-3.9")]
    EndScore,
    #[value(name = "lemma-3.10")]
    HighPositive,
    #[value(name = "lemma-3.11")]
    HighNegative,
    #[value(name = "lemma-3.14")]
    EndScorePrime,
    #[value(name = "tsum")]
    TSum,
    #[value(name = "telescoping")]
    Telescoping,
    #[value(name = "all")]
    All,
}

#[derive(Serialize)]
struct SuiteReport {
    suite: &'static str,
    checked: u64,
    violations: Vec<String>,
    pass: bool,
}

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    if let Err(message) = init_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("ECH_KIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .map_err(|_| format!("ECH_KIT_THREADS must be a positive integer, got {raw:?}"))?;
    if threads == 0 {
        return Err("ECH_KIT_THREADS must be a positive integer, got \"0\"".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> CliResult<u8> {
    let format = cli.format;
    match cli.command {
        Command::Partition { theta, m, sign } => {
            let theta: PerturbedRational = theta.parse()?;
            let sign = parse_sign(&sign)?;
            let parts = signed_partition(&theta, m, sign)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string(parts.parts())?),
                Format::Tsv => {
                    println!("part");
                    for p in parts.parts() {
                        println!("{p}");
                    }
                }
            }
            Ok(0)
        }
        Command::Cz { theta, sum_to } => {
            let theta: PerturbedRational = theta.parse()?;
            let value = match sum_to {
                None => cz(&theta),
                Some(m) => cz_iterate_sum(&theta, m),
            };
            print_scalar(format, "cz", &value.to_string());
            Ok(0)
        }
        Command::Index(args) => {
            let (catalog, alpha, beta, rel) = load_pairing(&args)?;
            let value = ech_index(&alpha, &beta, &rel, &catalog)?;
            print_scalar(format, "index", &value.to_string());
            Ok(0)
        }
        Command::J0(args) => {
            let (catalog, alpha, beta, rel) = load_pairing(&args)?;
            let value = j0(&alpha, &beta, &rel, &catalog)?;
            print_scalar(format, "j0", &value.to_string());
            Ok(0)
        }
        Command::Score { catalog, record, big_m } => {
            let catalog = load_catalog(&catalog)?;
            let record = UCurveRecord::from_json(&read(&record)?, &catalog)?;
            let m_threshold = match big_m {
                Some(m) => m,
                None => choose_m(&catalog)?,
            };
            run_score(format, &record, &catalog, m_threshold)?;
            Ok(0)
        }
        Command::Fredholm { genus, punctures, delta } => {
            let delta = parse_rational(&delta)?;
            let punctures = load_punctures(&punctures)?;
            let value = fredholm_index_delta(genus, &punctures, &delta)?;
            print_scalar(format, "ind_delta", &value.to_string());
            Ok(0)
        }
        Command::Constants(cmd) => {
            run_constants(format, cmd)?;
            Ok(0)
        }
        Command::Audit { catalog, chain } => {
            let catalog = load_catalog(&catalog)?;
            let chain = ChainRecord::from_json(&read(&chain)?)?;
            let report = audit_chain(&chain, &catalog)?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Tsv => {
                    println!("key\tvalue");
                    print!("{}", report.tsv_summary());
                }
            }
            Ok(if report.all_checks_pass() { 0 } else { 1 })
        }
        Command::Verify { suite, max_m, max_den, max_trivial, count, seed } => {
            let bounds = SuiteBounds { max_m, max_den, max_trivial, count, seed };
            let suites: Vec<Suite> = match suite {
                Suite::All => vec![
                    Suite::PartitionFacts,
                    Suite::EndScore,
                    Suite::HighPositive,
                    Suite::HighNegative,
                    Suite::EndScorePrime,
                    Suite::TSum,
                    Suite::Telescoping,
                ],
                one => vec![one],
            };
            let reports =
                suites.into_iter().map(|s| run_suite(s, &bounds)).collect::<CliResult<Vec<_>>>()?;
            let all_pass = reports.iter().all(|r| r.pass);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
                Format::Tsv => {
                    println!("suite\tchecked\tviolations\tstatus");
                    for r in &reports {
                        println!(
                            "{}\t{}\t{}\t{}",
                            r.suite,
                            r.checked,
                            r.violations.len(),
                            if r.pass { "pass" } else { "FAIL" }
                        );
                    }
                    for r in &reports {
                        for v in &r.violations {
                            eprintln!("violation[{}]: {v}", r.suite);
                        }
                    }
                }
            }
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

fn parse_sign(s: &str) -> CliResult<EndSign> {
    match s {
        "+" => Ok(EndSign::Positive),
        "-" => Ok(EndSign::Negative),
        other => Err(format!("sign must be \"+\" or \"-\", got {other:?}").into()),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn load_catalog(path: &Path) -> CliResult<Catalog> {
    Ok(Catalog::from_json(&read(path)?)?)
}

fn load_pairing(args: &PairingArgs) -> CliResult<(Catalog, OrbitSet, OrbitSet, RelClassData)> {
    let catalog = load_catalog(&args.catalog)?;
    let alpha = OrbitSet::from_json(&args.alpha)?;
    let beta = OrbitSet::from_json(&args.beta)?;
    Ok((catalog, alpha, beta, RelClassData::new(args.ctau, args.qtau)))
}

fn print_scalar(format: Format, key: &str, value: &str) {
    match format {
        Format::Json => println!("{value}"),
        Format::Tsv => println!("{key}\n{value}"),
    }
}

fn run_score(
    format: Format,
    record: &UCurveRecord,
    catalog: &Catalog,
    m_threshold: u64,
) -> CliResult<()> {
    let score = total_score(record, catalog, m_threshold)?;
    let orbits: BTreeSet<&str> =
        record.alpha.support().chain(record.beta.support()).collect();
    let mut per_orbit = Vec::new();
    for gamma in orbits {
        per_orbit.push((
            gamma.to_string(),
            t_gamma(record, gamma, catalog, m_threshold)?,
            t_prime_gamma(record, gamma, catalog, m_threshold)?,
        ));
    }
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct OrbitRow {
                orbit: String,
                t: i64,
                t_prime: i64,
            }
            #[derive(Serialize)]
            struct ScoreOut {
                m_threshold: u64,
                j0: String,
                y: String,
                s: i64,
                t: String,
                t_prime: String,
                orbits: Vec<OrbitRow>,
            }
            let out = ScoreOut {
                m_threshold,
                j0: score.j0.to_string(),
                y: score.y.to_string(),
                s: score.s,
                t: score.t.to_string(),
                t_prime: score.t_prime.to_string(),
                orbits: per_orbit
                    .into_iter()
                    .map(|(orbit, t, t_prime)| OrbitRow { orbit, t, t_prime })
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Format::Tsv => {
            println!("key\tvalue");
            println!("m_threshold\t{m_threshold}");
            println!("j0\t{}", score.j0);
            println!("y\t{}", score.y);
            println!("s\t{}", score.s);
            println!("t\t{}", score.t);
            println!("t_prime\t{}", score.t_prime);
            println!("orbit\tt\tt_prime");
            for (orbit, t, t_prime) in per_orbit {
                println!("{orbit}\t{t}\t{t_prime}");
            }
        }
    }
    Ok(())
}

#[derive(serde::Deserialize)]
struct PunctureSpec {
    sign: String,
    cover: u64,
    theta: String,
    winding: i64,
}

fn load_punctures(path: &Path) -> CliResult<Vec<Puncture>> {
    let specs: Vec<PunctureSpec> = serde_json::from_str(&read(path)?)?;
    let mut out = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let theta: PerturbedRational = spec.theta.parse()?;
        out.push(Puncture::from_simple_rotation(
            format!("p{i}"),
            parse_sign(&spec.sign)?,
            spec.cover,
            &theta,
            spec.winding,
        )?);
    }
    Ok(out)
}

fn run_constants(format: Format, cmd: ConstantsCommand) -> CliResult<()> {
    match cmd {
        ConstantsCommand::SolveQ { delta1, delta2, ell, eps_prime, p0 } => {
            let q = solve_min_q(
                &parse_rational(&delta1)?,
                &parse_rational(&delta2)?,
                &parse_rational(&ell)?,
                &parse_rational(&eps_prime)?,
                &p0.parse::<BigInt>().map_err(|e| format!("p0: {e}"))?,
            )?;
            print_scalar(format, "q", &q.to_string());
        }
        ConstantsCommand::EpsM { catalog, big_m, action_cap, ledger } => {
            let catalog = load_catalog(&catalog)?;
            let cap = match (action_cap, ledger) {
                (Some(cap), _) => parse_rational(&cap)?,
                (None, Some(path)) => {
                    let ledger = ConstantsLedger::from_json(&read(&path)?)?;
                    BigRational::from_integer(integer_at_least_sqrt(&ledger.t_q_squared))
                }
                (None, None) => {
                    return Err("eps-m needs --action-cap or --ledger to bound the sweep".into())
                }
            };
            let gap = eps_m(&catalog, big_m, &cap)?;
            print_scalar(format, "eps_m", &rational_to_string(&gap));
        }
        ConstantsCommand::ChooseM { catalog } => {
            let catalog = load_catalog(&catalog)?;
            print_scalar(format, "big_m", &choose_m(&catalog)?.to_string());
        }
    }
    Ok(())
}

/// Smallest nonnegative integer n with n^2 >= x.
fn integer_at_least_sqrt(x: &BigRational) -> BigInt {
    let mut n = (x.numer() / x.denom()).sqrt();
    while BigRational::from_integer(&n * &n) < *x {
        n += BigInt::one();
    }
    n
}

struct SuiteBounds {
    max_m: Option<u64>,
    max_den: Option<u64>,
    max_trivial: Option<u64>,
    count: Option<u64>,
    seed: u64,
}

fn run_suite(suite: Suite, bounds: &SuiteBounds) -> CliResult<SuiteReport> {
    match suite {
        Suite::PartitionFacts => {
            let max_den = bounds.max_den.unwrap_or(30);
            let max_m = bounds.max_m.unwrap_or(30);
            let violations = partition_fact_failures(max_den, max_m)?;
            let checked = rotation_grid(max_den).len() as u64 * max_m;
            Ok(report("lemma-2.10", checked, violations))
        }
        Suite::EndScore => score_suite("lemma-3.9", ScoreBoundKind::EndScore, bounds),
        Suite::HighPositive => score_suite("lemma-3.10", ScoreBoundKind::HighPositive, bounds),
        Suite::HighNegative => score_suite("lemma-3.11", ScoreBoundKind::HighNegative, bounds),
        Suite::EndScorePrime => score_suite("lemma-3.14", ScoreBoundKind::EndScorePrime, bounds),
        Suite::TSum => {
            let count = bounds.count.unwrap_or(10_000);
            let (catalog, records) = random_consistent_records(bounds.seed, count as usize)?;
            let mut violations = Vec::new();
            for (k, rec) in records.iter().enumerate() {
                let score = total_score(rec, &catalog, 4)?;
                let orbits: BTreeSet<&str> =
                    rec.alpha.support().chain(rec.beta.support()).collect();
                let mut t_sum = 0i64;
                let mut tp_sum = 0i64;
                for gamma in orbits {
                    t_sum += t_gamma(rec, gamma, &catalog, 4)?;
                    tp_sum += t_prime_gamma(rec, gamma, &catalog, 4)?;
                }
                let g = i64::from(rec.genus);
                if score.t != BigInt::from(6 * g - 12 + t_sum)
                    || score.t_prime != BigInt::from(4 * g - 8 + tp_sum)
                {
                    violations.push(format!(
                        "record {k}: T={}, T'={} vs per-orbit sums {t_sum}, {tp_sum}",
                        score.t, score.t_prime
                    ));
                }
            }
            Ok(report("tsum", count, violations))
        }
        Suite::Telescoping => {
            let count = bounds.count.unwrap_or(100);
            let mut violations = Vec::new();
            for k in 0..count {
                let length = (k as usize % 50) + 1;
                let (catalog, chain) = random_chain(
                    bounds.seed.wrapping_add(k),
                    length,
                    4,
                    BigRational::new(BigInt::one(), BigInt::from(8)),
                )?;
                let audit = audit_chain(&chain, &catalog)?;
                if !audit.checks.telescoping_holds {
                    violations.push(format!(
                        "chain {k}: lhs {} != rhs {}",
                        audit.checks.telescoping_lhs, audit.checks.telescoping_rhs
                    ));
                }
            }
            Ok(report("telescoping", count, violations))
        }
        Suite::All => unreachable!("expanded by the caller"),
    }
}

fn score_suite(
    name: &'static str,
    kind: ScoreBoundKind,
    bounds: &SuiteBounds,
) -> CliResult<SuiteReport> {
    let scores = single_orbit_scores(
        bounds.max_den.unwrap_or(12),
        bounds.max_m.unwrap_or(12),
        bounds.max_trivial.unwrap_or(4),
    )?;
    let violations = scores
        .iter()
        .flat_map(score_bound_violations)
        .filter(|(k, _)| *k == kind)
        .map(|(_, msg)| msg)
        .collect();
    Ok(report(name, scores.len() as u64, violations))
}

fn report(suite: &'static str, checked: u64, violations: Vec<String>) -> SuiteReport {
    let pass = violations.is_empty();
    SuiteReport { suite, checked, violations, pass }
}
