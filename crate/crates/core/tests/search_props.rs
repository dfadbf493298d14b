mod common;

use amiforge::arith::SigmaSieve;
use amiforge::families::{check, FamilySpec};
use amiforge::search::{enumerate, SearchConfig};
use proptest::prelude::*;

fn specs() -> Vec<FamilySpec> {
    common::oracle_specs(3)
}

#[test]
fn enlarging_the_limit_keeps_earlier_tuples() {
    let sieve = SigmaSieve::build(150).unwrap();
    for spec in specs() {
        let small = enumerate(&SearchConfig::new(spec.clone(), 60, &sieve).with_workers(1)).unwrap().tuples();
        let large = enumerate(&SearchConfig::new(spec.clone(), 150, &sieve).with_workers(1)).unwrap().tuples();
        let expected: Vec<_> = large.iter().filter(|t| t.iter().all(|&n| n <= 60)).cloned().collect();
        assert_eq!(small, expected, "{spec}");
    }
}

#[test]
fn records_pass_check() {
    let sieve = SigmaSieve::build(120).unwrap();
    for spec in specs() {
        for r in enumerate(&SearchConfig::new(spec.clone(), 120, &sieve)).unwrap().records {
            assert!(check(&spec, &r.tuple).unwrap().is_member(), "{spec} {:?}", r.tuple);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matches_brute_force_at_random_limits(limit in 1u64..45, pick in 0usize..1000, workers in 1usize..5) {
        let all = specs();
        let spec = &all[pick % all.len()];
        let sieve = SigmaSieve::build(limit.max(2)).unwrap();
        let fast = enumerate(&SearchConfig::new(spec.clone(), limit, &sieve).with_workers(workers)).unwrap().tuples();
        prop_assert_eq!(fast, common::brute_force(spec, limit));
    }
}
