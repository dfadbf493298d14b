//! Naive reference enumerations shared by the integration suites.

#![allow(dead_code)]

use amiforge::families::{is_member, FamilySpec};

fn tuples(k: usize, limit: u64, strict: bool, f: &mut dyn FnMut(&[u64])) {
    fn go(k: usize, limit: u64, strict: bool, cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let start = match cur.last() {
            Some(&l) if strict => l + 1,
            Some(&l) => l,
            None => 1,
        };
        for n in start..=limit {
            cur.push(n);
            go(k, limit, strict, cur, f);
            cur.pop();
        }
    }
    go(k, limit, strict, &mut Vec::with_capacity(k), f);
}

/// Every tuple in canonical order with elements <= `limit`, tested one by
/// one with the membership predicate.
pub fn brute_force(spec: &FamilySpec, limit: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut keep = |t: &[u64]| {
        if is_member(spec, t).expect("oracle predicate") {
            out.push(t.to_vec());
        }
    };
    match spec {
        FamilySpec::AmicableNumber => (2..=limit).for_each(|n| keep(&[n])),
        FamilySpec::CohenPair { alpha, beta } | FamilySpec::AlphaBeta { alpha, beta } => {
            for m in 1..=limit {
                for n in 1..=limit {
                    if alpha != beta || m <= n {
                        keep(&[m, n]);
                    }
                }
            }
        }
        FamilySpec::Multiamicable { alphas } => tuples(alphas.len(), limit, true, &mut keep),
        other => tuples(other.k(), limit, false, &mut keep),
    }
    out
}

/// The family specs exercised by the equivalence suites, for k <= `max_k`.
pub fn oracle_specs(max_k: usize) -> Vec<FamilySpec> {
    let mut v = vec![
        FamilySpec::Perfect,
        FamilySpec::AmicableNumber,
        FamilySpec::AmicablePair,
        FamilySpec::CohenPair { alpha: 1, beta: 1 },
        FamilySpec::CohenPair { alpha: 1, beta: 2 },
        FamilySpec::CohenPair { alpha: 2, beta: 1 },
        FamilySpec::AlphaBeta { alpha: 1, beta: 1 },
        FamilySpec::AlphaBeta { alpha: 1, beta: 2 },
        FamilySpec::AlphaBeta { alpha: 1, beta: 3 },
        FamilySpec::AlphaBeta { alpha: 2, beta: 1 },
        FamilySpec::Multiamicable { alphas: vec![2] },
        FamilySpec::Multiamicable { alphas: vec![1, 1] },
        FamilySpec::Multiamicable { alphas: vec![1, 2] },
        FamilySpec::Multiamicable { alphas: vec![2, 1] },
    ];
    if max_k >= 3 {
        v.push(FamilySpec::Multiamicable { alphas: vec![1, 1, 1] });
        v.push(FamilySpec::Multiamicable { alphas: vec![1, 2, 3] });
    }
    for k in 1..=max_k {
        if k >= 2 {
            v.push(FamilySpec::Dickson { k });
            v.push(FamilySpec::Yanney { k });
        }
        v.push(FamilySpec::Gm { k });
        v.push(FamilySpec::Wgm { k });
        v.push(FamilySpec::Feebly { k });
        for p in 1..=3 {
            v.push(FamilySpec::Wpm { k, p });
            v.push(FamilySpec::Whm { k, p });
            for q in 1..=3 {
                v.push(FamilySpec::Pm { k, p, q });
                v.push(FamilySpec::Hm { k, p, q });
                if p >= 2 {
                    v.push(FamilySpec::Mp { k, p, q });
                }
            }
        }
    }
    v
}
