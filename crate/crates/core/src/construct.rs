//! Multiamicable tuples from equal-σ seeds.
//!
//! If σ(N₁) = … = σ(Nₖ), σ(a)/a = (α₁N₁ + … + αₖNₖ)/σ(N₁) and a is coprime
//! to every Nᵢ, then (aN₁, …, aNₖ) is (α₁, …, αₖ)-multiamicable because σ is
//! multiplicative.

use std::collections::HashMap;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorize, sigma, ArithError, Rational, SigmaSieve};
use crate::families::{self, FamilyError, FamilySpec};
use crate::search::SigmaBuckets;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("seeds N{i}={ni} and N{j}={nj} have σ={si} and σ={sj}")]
    UnequalSigma { i: usize, j: usize, ni: u64, nj: u64, si: u64, sj: u64 },
    #[error("seed target {0} is below 1, but σ(a)/a >= 1 for every a")]
    TargetBelowOne(Rational),
    #[error("sieve covers n <= {have} but the seed search needs n <= {needed}")]
    SieveCoverage { needed: u64, have: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SeedTuple {
    pub alphas: Vec<u64>,
    pub ns: Vec<u64>,
    /// (α₁N₁ + … + αₖNₖ)/σ(N₁) in lowest terms.
    pub target: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructedTuple {
    pub seed: SeedTuple,
    pub a: u64,
    pub tuple: Vec<u64>,
}

fn target_of(alphas: &[u64], ns: &[u64], s: u64) -> Result<Rational, ConstructError> {
    let mut weighted: u64 = 0;
    for (&a, &n) in alphas.iter().zip(ns) {
        weighted = a
            .checked_mul(n)
            .and_then(|x| weighted.checked_add(x))
            .ok_or(ArithError::Overflow("Σ αᵢNᵢ"))?;
    }
    Ok(Rational::new(weighted, s)?)
}

/// Checks that the seeds share one σ value and returns the reduced target.
pub fn seed_ratio(alphas: &[u64], ns: &[u64]) -> Result<SeedTuple, ConstructError> {
    FamilySpec::Multiamicable { alphas: alphas.to_vec() }.validate()?;
    if ns.len() != alphas.len() {
        return Err(FamilyError::LengthMismatch { expected: alphas.len(), got: ns.len() }.into());
    }
    let sigmas = ns.iter().map(|&n| sigma(n)).collect::<Result<Vec<_>, _>>()?;
    if let Some(j) = sigmas.iter().position(|&s| s != sigmas[0]) {
        return Err(ConstructError::UnequalSigma {
            i: 1,
            j: j + 1,
            ni: ns[0],
            nj: ns[j],
            si: sigmas[0],
            sj: sigmas[j],
        });
    }
    let target = target_of(alphas, ns, sigmas[0])?;
    if target.numer() < target.denom() {
        return Err(ConstructError::TargetBelowOne(target));
    }
    Ok(SeedTuple { alphas: alphas.to_vec(), ns: ns.to_vec(), target })
}

fn abundancy_is(a: u64, target: &Rational) -> bool {
    match factorize(a).and_then(|f| f.sigma()) {
        Ok(s) => s as u128 * target.denom() as u128 == a as u128 * target.numer() as u128,
        Err(_) => false,
    }
}

const CHUNK: u64 = 4096;

/// Every a <= `bound` with σ(a)/a = `target` and gcd(a, c) = 1 for each c in
/// `coprime_to`, ascending. Only multiples of the target's denominator can
/// qualify, so only those are tested.
pub fn find_multipliers(target: &Rational, bound: u64, coprime_to: &[u64]) -> Vec<u64> {
    if target.numer() < target.denom() || bound == 0 {
        return Vec::new();
    }
    let step = target.denom();
    let count = bound / step;
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(count);
            (lo..=hi)
                .map(|i| i * step)
                .filter(|&a| coprime_to.iter().all(|&n| a.gcd(&n) == 1) && abundancy_is(a, target))
                .collect()
        })
        .collect();
    parts.concat()
}

fn build(seed: &SeedTuple, a: u64) -> Result<ConstructedTuple, ConstructError> {
    let tuple = seed
        .ns
        .iter()
        .map(|&n| n.checked_mul(a).ok_or(ArithError::Overflow("a·N")))
        .collect::<Result<Vec<_>, _>>()?;
    let sa = sigma(a)?;
    for (&n, &t) in seed.ns.iter().zip(&tuple) {
        let lhs = sigma(t)? as u128;
        let rhs = sa as u128 * sigma(n)? as u128;
        if lhs != rhs {
            return Err(ConstructError::Internal(format!("σ({t}) = {lhs} but σ({a})σ({n}) = {rhs}")));
        }
    }
    if !families::is_multiamicable(&tuple, &seed.alphas)? {
        return Err(ConstructError::Internal(format!(
            "a={a} on seeds {:?} gave {tuple:?}, which is not multiamicable",
            seed.ns
        )));
    }
    Ok(ConstructedTuple { seed: seed.clone(), a, tuple })
}

/// (aN₁, …, aNₖ) for every admissible multiplier a <= `a_bound`, each
/// re-verified.
pub fn construct_multiamicable(alphas: &[u64], ns: &[u64], a_bound: u64) -> Result<Vec<ConstructedTuple>, ConstructError> {
    let seed = seed_ratio(alphas, ns)?;
    construct_from_seed(&seed, a_bound)
}

pub fn construct_from_seed(seed: &SeedTuple, a_bound: u64) -> Result<Vec<ConstructedTuple>, ConstructError> {
    find_multipliers(&seed.target, a_bound, &seed.ns)
        .into_iter()
        .map(|a| build(seed, a))
        .collect()
}

/// Strictly increasing k-tuples of equal σ with every Nᵢ <= `n_limit` and
/// target >= 1, ordered by σ and then lexicographically.
pub fn find_seed_tuples(sieve: &SigmaSieve, alphas: &[u64], n_limit: u64) -> Result<Vec<SeedTuple>, ConstructError> {
    FamilySpec::Multiamicable { alphas: alphas.to_vec() }.validate()?;
    let k = alphas.len();
    if k < 2 {
        return Err(FamilyError::InvalidParameter("seed tuples need k >= 2".into()).into());
    }
    if n_limit > sieve.limit() {
        return Err(ConstructError::SieveCoverage { needed: n_limit, have: sieve.limit() });
    }
    let buckets = SigmaBuckets::new(sieve, n_limit);
    let mut out = Vec::new();
    let mut idx = Vec::with_capacity(k);
    for (s, members) in buckets.iter() {
        if members.len() < k {
            continue;
        }
        combinations(members.len(), k, &mut idx, &mut |ix| {
            let ns: Vec<u64> = ix.iter().map(|&i| members[i]).collect();
            let target = target_of(alphas, &ns, s)?;
            if target.numer() >= target.denom() {
                out.push(SeedTuple { alphas: alphas.to_vec(), ns, target });
            }
            Ok(())
        })?;
    }
    Ok(out)
}

fn combinations<F>(n: usize, k: usize, idx: &mut Vec<usize>, f: &mut F) -> Result<(), ConstructError>
where
    F: FnMut(&[usize]) -> Result<(), ConstructError>,
{
    if idx.len() == k {
        return f(idx);
    }
    let start = idx.last().map_or(0, |&i| i + 1);
    for i in start..n {
        idx.push(i);
        combinations(n, k, idx, f)?;
        idx.pop();
    }
    Ok(())
}

/// Multipliers grouped by abundancy, for applying many seeds at one bound.
#[derive(Clone, Debug)]
pub struct MultiplierIndex {
    bound: u64,
    by_target: HashMap<Rational, Vec<u64>>,
}

impl MultiplierIndex {
    pub fn build(bound: u64) -> Result<Self, ConstructError> {
        let mut by_target: HashMap<Rational, Vec<u64>> = HashMap::new();
        for a in 1..=bound {
            let r = Rational::new(factorize(a)?.sigma()?, a)?;
            by_target.entry(r).or_default().push(a);
        }
        Ok(MultiplierIndex { bound, by_target })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Same result as [`find_multipliers`] at this index's bound.
    pub fn multipliers(&self, target: &Rational, coprime_to: &[u64]) -> Vec<u64> {
        self.by_target
            .get(target)
            .map(|v| v.iter().copied().filter(|&a| coprime_to.iter().all(|&n| a.gcd(&n) == 1)).collect())
            .unwrap_or_default()
    }

    pub fn construct(&self, seed: &SeedTuple) -> Result<Vec<ConstructedTuple>, ConstructError> {
        self.multipliers(&seed.target, &seed.ns).into_iter().map(|a| build(seed, a)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn seed_ratio_examples() {
        assert_eq!(seed_ratio(&[1, 2], &[104, 116]).unwrap().target, r(8, 5));
        assert_eq!(seed_ratio(&[1, 2], &[7380, 7776]).unwrap().target, r(1, 1));
        let err = seed_ratio(&[1, 1], &[6, 10]).unwrap_err();
        assert_eq!(err, ConstructError::UnequalSigma { i: 1, j: 2, ni: 6, nj: 10, si: 12, sj: 18 });
        assert!(err.to_string().contains("σ=12") && err.to_string().contains("σ=18"));
    }

    #[test]
    fn target_below_one_is_rejected() {
        // 12/σ(12) = 12/28
        assert!(seed_ratio(&[1, 1], &[6, 11]).is_ok());
        assert!(matches!(seed_ratio(&[1], &[12]), Err(ConstructError::TargetBelowOne(_))));
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(find_multipliers(&r(8, 5), 20, &[104, 116]), vec![15]);
        assert_eq!(find_multipliers(&r(1, 1), 100, &[]), vec![1]);
        assert_eq!(find_multipliers(&r(2, 1), 10, &[]), vec![6]);
        assert_eq!(find_multipliers(&r(2, 1), 10_000, &[]), vec![6, 28, 496, 8128]);
    }

    #[test]
    fn construct_examples() {
        let got = construct_multiamicable(&[1, 2], &[104, 116], 20).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].tuple, vec![1560, 1740]);
        let got = construct_multiamicable(&[3, 1], &[1183, 1331], 1100).unwrap();
        assert_eq!(got.iter().map(|c| (c.a, c.tuple.clone())).collect::<Vec<_>>(), vec![(1080, vec![1277640, 1437480])]);
        let got = construct_multiamicable(&[1, 2], &[7380, 7776], 1).unwrap();
        assert_eq!(got[0].tuple, vec![7380, 7776]);
        assert_eq!(got[0].a, 1);
    }

    #[test]
    fn seed_search_examples() {
        let sieve = SigmaSieve::build(2300).unwrap();
        let seeds = find_seed_tuples(&sieve, &[1, 2], 120).unwrap();
        assert!(seeds.iter().any(|s| s.ns == [104, 116]));
        assert!(find_seed_tuples(&sieve, &[1, 2], 10).unwrap().is_empty());
        let seeds = find_seed_tuples(&sieve, &[2, 1], 2300).unwrap();
        assert!(seeds.iter().any(|s| s.ns == [2140, 2272]));
    }

    #[test]
    fn index_matches_direct_scan() {
        let index = MultiplierIndex::build(3000).unwrap();
        for (t, c) in [(r(8, 5), vec![104, 116]), (r(35, 12), vec![629, 683]), (r(2, 1), vec![]), (r(3, 1), vec![])] {
            assert_eq!(index.multipliers(&t, &c), find_multipliers(&t, 3000, &c));
        }
    }
}
