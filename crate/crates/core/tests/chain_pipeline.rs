//! End-to-end chain auditing through the JSON interfaces.

use ech_kit::auditor::{audit_chain, ChainRecord, ConstantsLedger};
use ech_kit::orbits::Catalog;
use ech_kit::synth::{plant_boundary_shift, random_chain};
use num_rational::BigRational;

fn eighth() -> BigRational {
    BigRational::new(1.into(), 8.into())
}

#[test]
fn chains_survive_a_json_round_trip() {
    let (catalog, chain) = random_chain(41, 24, 4, eighth()).unwrap();
    let catalog2 = Catalog::from_json(&catalog.to_json()).unwrap();
    let chain2 = ChainRecord::from_json(&chain.to_json()).unwrap();
    chain2.validate(&catalog2).unwrap();
    assert_eq!(chain2.to_json(), chain.to_json());

    let before = audit_chain(&chain, &catalog).unwrap();
    let after = audit_chain(&chain2, &catalog2).unwrap();
    assert_eq!(before.to_json(), after.to_json());
    assert!(before.checks.telescoping_holds);
}

#[test]
fn audit_report_summaries_expose_every_check() {
    let (catalog, chain) = random_chain(43, 12, 4, eighth()).unwrap();
    let report = audit_chain(&chain, &catalog).unwrap();
    let tsv = report.tsv_summary();
    for key in [
        "classes_exhaustive",
        "g0_within_budget",
        "telescoping_holds",
        "j0_sum_within_budget",
        "g3_within_bound",
        "g1_within_bound",
        "g2_within_bound",
        "length_gap_holds",
    ] {
        assert!(
            tsv.lines().any(|l| l.starts_with(&format!("{key}\t"))),
            "missing {key} in:\n{tsv}"
        );
    }
    assert_eq!(report.counts.total(), chain.steps.len() as u64);
}

#[test]
fn planted_defects_survive_serialization_and_are_flagged() {
    let (catalog, mut chain) = random_chain(47, 18, 4, eighth()).unwrap();
    plant_boundary_shift(&mut chain, &catalog, 9, -2).unwrap();
    let reloaded = ChainRecord::from_json(&chain.to_json()).unwrap();
    reloaded.validate(&catalog).unwrap();
    let report = audit_chain(&reloaded, &catalog).unwrap();
    assert!(!report.checks.telescoping_holds);
    assert!(!report.all_checks_pass());
}

#[test]
fn ledger_round_trips_and_validates() {
    let (_, chain) = random_chain(53, 6, 3, eighth()).unwrap();
    let ledger = ConstantsLedger::from_json(&chain.ledger.to_json()).unwrap();
    ledger.validate().unwrap();
    assert_eq!(ledger, chain.ledger);

    let mut broken = ledger;
    broken.b = 5;
    assert!(broken.validate().is_err());
}
