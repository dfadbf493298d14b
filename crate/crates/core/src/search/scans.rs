//! Harnesses for the open MP(2, 2) question and the multiamicable census.

use std::time::Instant;

use serde::Serialize;

use super::{enumerate, SearchConfig, SearchError, SearchReport, SigmaBuckets};
use crate::arith::SigmaSieve;
use crate::families::{self, CheckOutcome, FamilySpec, Provenance};

/// Pairs m ≤ n ≤ `limit` with σ(m) = σ(n) and σ(m)² = m² + n².
///
/// These are exactly the MP(2, 2) pairs with equal σ, so the report is
/// labelled with that family. `scanned` counts the equal-σ pairs examined.
pub fn scan_open_question(sieve: &SigmaSieve, limit: u64) -> Result<SearchReport, SearchError> {
    let started = Instant::now();
    if limit == 0 {
        return Err(SearchError::Config("limit must be at least 1".into()));
    }
    if sieve.limit() < limit {
        return Err(SearchError::SieveCoverage { needed: limit, have: sieve.limit() });
    }
    let spec = FamilySpec::Mp { k: 2, p: 2, q: 2 };
    let buckets = SigmaBuckets::new(sieve, limit);
    let mut records = Vec::new();
    let mut scanned = 0;
    for (s, members) in buckets.iter() {
        let s2 = s as u128 * s as u128;
        for (i, &m) in members.iter().enumerate() {
            for &n in &members[i..] {
                scanned += 1;
                if m as u128 * m as u128 + n as u128 * n as u128 != s2 {
                    continue;
                }
                match families::check_as(&spec, &[m, n], Provenance::Found)? {
                    CheckOutcome::Member(r) => records.push(r),
                    CheckOutcome::Mismatch(x) => {
                        return Err(SearchError::Internal(format!("({m}, {n}): {}", x.violation)))
                    }
                }
            }
        }
    }
    records.sort();
    Ok(SearchReport { spec, limit, records, scanned, elapsed: started.elapsed() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub limit: u64,
    pub count: usize,
}

/// Number of (α₁,…,αₖ)-multiamicable tuples whose smallest member is at
/// most each limit. The other members are bounded by σ(n₁)/min α; a larger
/// sieve is built when `sieve` does not reach that far.
pub fn conjecture_census(
    sieve: &SigmaSieve,
    alphas: &[u64],
    limits: &[u64],
    workers: usize,
) -> Result<Vec<CensusRow>, SearchError> {
    let spec = FamilySpec::Multiamicable { alphas: alphas.to_vec() };
    spec.validate()?;
    if limits.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SearchError::Config("census limits must be strictly increasing".into()));
    }
    let Some(&top) = limits.last() else {
        return Ok(Vec::new());
    };
    if top == 0 {
        return Err(SearchError::Config("limit must be at least 1".into()));
    }
    if sieve.limit() < top {
        return Err(SearchError::SieveCoverage { needed: top, have: sieve.limit() });
    }
    let max_sigma = sieve.values()[..top as usize].iter().copied().max().unwrap_or(1);
    let min_alpha = *alphas.iter().min().expect("validated non-empty");
    let bound = (max_sigma / min_alpha).max(top);
    let wider;
    let sieve = if bound > sieve.limit() {
        wider = SigmaSieve::build(bound)?;
        &wider
    } else {
        sieve
    };
    let report = enumerate(&SearchConfig::new(spec, bound, sieve).with_workers(workers))?;
    Ok(limits
        .iter()
        .map(|&limit| CensusRow {
            limit,
            count: report.records.iter().filter(|r| r.tuple[0] <= limit).count(),
        })
        .collect())
}
