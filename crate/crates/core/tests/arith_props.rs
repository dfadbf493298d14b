use amiforge::arith::{
    abundancy, aliquot, factorize, gcd_list, is_prime, lcm_list, sigma, zeta_estimate, Factorization, SigmaSieve,
};
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use proptest::prelude::*;

fn naive_sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

#[test]
fn sieve_agrees_with_factorization() {
    let s = SigmaSieve::build(100_000).unwrap();
    for n in 1..=100_000 {
        assert_eq!(s.get(n), Some(sigma(n).unwrap()), "n = {n}");
    }
}

#[test]
fn sigma_matches_divisor_sum_for_small_n() {
    for n in 1..=3000 {
        assert_eq!(sigma(n).unwrap(), naive_sigma(n), "n = {n}");
    }
}

#[test]
fn abundancy_is_sum_of_reciprocal_divisors() {
    // σ(n)/n = Σ_{d|n} 1/d, in exact rationals.
    for n in 1..=10_000u64 {
        let direct: Ratio<u64> = (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| Ratio::new(1, d))
            .fold(Ratio::from_integer(0), |a, b| a + b);
        assert_eq!(abundancy(n).unwrap().as_ratio(), direct, "n = {n}");
    }
}

#[test]
fn zeta_brackets_an_independent_partial_sum() {
    // ζ(s) − Σ_{n<=N} n^{-s} lies in [1/((s−1)(N+1)^{s−1}), 1/((s−1)N^{s−1})].
    for s in [2u32, 3, 5, 7] {
        let z = zeta_estimate(s, 1e-10).unwrap();
        let n = 20_000u32;
        let partial: f64 = (1..=n).rev().map(|k| (k as f64).powi(-(s as i32))).sum();
        let lo = partial + 1.0 / ((s - 1) as f64 * ((n + 1) as f64).powi(s as i32 - 1));
        let hi = partial + 1.0 / ((s - 1) as f64 * (n as f64).powi(s as i32 - 1));
        assert!(z.upper() >= lo - 1e-12 && z.lower() <= hi + 1e-12, "s = {s}: {z:?} vs [{lo}, {hi}]");
        assert!(z.error <= 1e-10);
    }
    let z3 = zeta_estimate(3, 1e-12).unwrap();
    assert!((z3.value - 1.202_056_903_159_594_3).abs() <= z3.error + 1e-15);
}

proptest! {
    #[test]
    fn sigma_is_multiplicative(a in 1u64..50_000, b in 1u64..50_000) {
        prop_assume!(a.gcd(&b) == 1);
        prop_assert_eq!(sigma(a * b).unwrap(), sigma(a).unwrap() * sigma(b).unwrap());
    }

    #[test]
    fn factorization_reconstructs(n in 1u64..u64::MAX / 2) {
        let f = factorize(n).unwrap();
        let back: BigUint = f.factors().iter().map(|&(p, e)| BigUint::from(p).pow(e)).product();
        prop_assert_eq!(back, BigUint::from(n));
        prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(f.factors().iter().all(|&(p, e)| e >= 1 && is_prime(p)));
        let round: Factorization = f.to_string().parse().unwrap();
        prop_assert_eq!(round.value(), n);
    }

    #[test]
    fn lcm_times_gcd_is_product(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let g = gcd_list(&[a, b]).unwrap();
        let l = lcm_list(&[a, b]).unwrap();
        prop_assert_eq!(g as u128 * l as u128, a as u128 * b as u128);
    }

    #[test]
    fn aliquot_is_sigma_minus_n(n in 1u64..10_000_000) {
        prop_assert_eq!(aliquot(n).unwrap() + n, sigma(n).unwrap());
    }
}
