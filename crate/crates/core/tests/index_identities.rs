//! Cross-module identities: CZ weights, index ambiguity, topological J₀,
//! score sums, and the winding inequality, exercised through synthetic data.

mod common;

use std::collections::BTreeSet;

use ech_kit::index::{cz, index_ambiguity, weighted_cz, RelClassData, SpectrumModel};
use ech_kit::partitions::{negative_partition, positive_partition};
use ech_kit::score::{is_index_consistent, t_gamma, t_prime_gamma, total_score};
use ech_kit::synth::{random_consistent_records, random_puncture_configs};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn unweighted_cz_agrees_with_zero_weight() {
    for theta in common::rotation_grid(10, &[-1, 1]) {
        for cover in 1..=6u64 {
            let total = theta.scaled_u64(cover);
            let plain = cz(&total);
            let weighted =
                weighted_cz(&SpectrumModel::rotation(total), &BigRational::zero()).unwrap();
            assert_eq!(plain, BigInt::from(weighted), "theta {theta}, cover {cover}");
        }
    }
}

#[test]
fn negative_partition_mirrors_positive_at_negated_angle() {
    for theta in common::rotation_grid(10, &[-1, 0, 1]) {
        for m in 1..=12 {
            let minus = negative_partition(&theta, m).unwrap();
            let mirrored = positive_partition(&-&theta, m).unwrap();
            assert_eq!(minus, mirrored, "theta {theta}, m {m}");
        }
    }
}

#[test]
fn synthetic_records_reproduce_topological_j0_and_score_sums() {
    let (catalog, records) = random_consistent_records(11, 200).unwrap();
    for rec in &records {
        assert!(is_index_consistent(rec, &catalog).unwrap());
        for m_threshold in [3u64, 5, 9] {
            let score = total_score(rec, &catalog, m_threshold).unwrap();
            let orbits: BTreeSet<&str> =
                rec.alpha.support().chain(rec.beta.support()).collect();
            let mut t_sum = 0i64;
            let mut tp_sum = 0i64;
            for gamma in orbits {
                t_sum += t_gamma(rec, gamma, &catalog, m_threshold).unwrap();
                tp_sum += t_prime_gamma(rec, gamma, &catalog, m_threshold).unwrap();
            }
            let g = i64::from(rec.genus);
            assert_eq!(score.t, BigInt::from(6 * g - 12 + t_sum));
            assert_eq!(score.t_prime, BigInt::from(4 * g - 8 + tp_sum));
        }
    }
}

#[test]
fn winding_bound_holds_on_sampled_puncture_configs() {
    use ech_kit::index::wind_relations;
    for (genus, punctures, delta) in random_puncture_configs(5, 400).unwrap() {
        let rel = wind_relations(genus, &punctures, &delta).unwrap();
        assert!(rel.inequality_holds);
        assert!(2 * rel.wind_pi <= rel.ind_delta - 2 + 2 * i64::from(genus));
    }
}

proptest! {
    // The ambiguity pairing is additive in the class argument.
    #[test]
    fn ambiguity_is_linear_in_the_class(
        c1 in prop::collection::vec(-50i64..=50, 4),
        pd in prop::collection::vec(-50i64..=50, 4),
        v in prop::collection::vec(-100i64..=100, 4),
        w in prop::collection::vec(-100i64..=100, 4),
    ) {
        let mut rel = RelClassData::new(0, 0);
        rel.c1_eval = c1;
        rel.pd_eval = pd;
        let sum: Vec<i64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        let lhs = index_ambiguity(&sum, &rel).unwrap();
        let rhs = index_ambiguity(&v, &rel).unwrap() + index_ambiguity(&w, &rel).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    // Partition parts always sum to the multiplicity and stay sorted.
    #[test]
    fn partitions_are_weakly_decreasing_and_sum(
        num in 0u64..=40,
        den in 1u64..=12,
        eps in -1i8..=1,
        m in 1u64..=24,
    ) {
        prop_assume!(num < den || den == 1);
        let suffix = match eps { -1 => "-e", 1 => "+e", _ => "" };
        let theta: ech_kit::exactnum::PerturbedRational =
            format!("{num}/{den}{suffix}").parse().unwrap();
        for parts in [
            positive_partition(&theta, m).unwrap(),
            negative_partition(&theta, m).unwrap(),
        ] {
            prop_assert_eq!(parts.total(), m);
            prop_assert!(parts.parts().windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
