//! Bounded exhaustive enumeration for every family, the embedded example
//! tables, and the scan harnesses for the open question and the conjecture.
//!
//! Searches run over an immutable σ sieve. The outer loop range is split
//! into contiguous blocks processed on a dedicated rayon pool; each block
//! sorts its own output and a final merge sorts globally, so reports are
//! identical for any worker count.

mod buckets;
mod kernels;
mod scans;
mod tables;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, SigmaSieve};
use crate::families::{self, CheckOutcome, FamilyError, FamilySpec, Provenance, TupleRecord};

pub use buckets::SigmaBuckets;
pub(crate) use buckets::solve_weighted;
use kernels::{wgm_accepts, Equation};
pub use scans::{conjecture_census, scan_open_question, CensusRow};
pub use tables::{table_fixtures, verify_tables, SeedFixture, TableFixture, TableReport, TableRow};

/// Largest element bound accepted by default.
pub const DEFAULT_MAX_LIMIT: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("sieve covers n <= {have} but the search needs n <= {needed}")]
    SieveCoverage { needed: u64, have: u64 },
    #[error("search limit {limit} exceeds the cap of {cap}")]
    LimitTooLarge { limit: u64, cap: u64 },
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Debug)]
pub struct SearchConfig<'a> {
    pub spec: FamilySpec,
    /// Bound on every tuple element.
    pub limit: u64,
    pub workers: usize,
    pub sieve: &'a SigmaSieve,
}

impl<'a> SearchConfig<'a> {
    pub fn new(spec: FamilySpec, limit: u64, sieve: &'a SigmaSieve) -> Self {
        SearchConfig {
            spec,
            limit,
            workers: default_workers(),
            sieve,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub spec: FamilySpec,
    pub limit: u64,
    /// Sorted lexicographically by tuple.
    pub records: Vec<TupleRecord>,
    /// Leaf candidates examined; independent of the worker count.
    pub scanned: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn tuples(&self) -> Vec<Vec<u64>> {
        self.records.iter().map(|r| r.tuple.clone()).collect()
    }
}

type Block = Result<(Vec<Vec<u64>>, u64), SearchError>;

/// Runs `f` over contiguous sub-ranges of `lo..=hi` and concatenates the
/// results in range order.
pub(crate) fn run_blocks<F>(lo: u64, hi: u64, workers: usize, f: F) -> Block
where
    F: Fn(u64, u64) -> Block + Sync + Send,
{
    if lo > hi {
        return Ok((Vec::new(), 0));
    }
    let len = (hi - lo + 1) as u128;
    let n_blocks = (workers as u128 * 16).min(len).max(1);
    let blocks: Vec<(u64, u64)> = (0..n_blocks)
        .map(|b| {
            let a = lo as u128 + len * b / n_blocks;
            let z = lo as u128 + len * (b + 1) / n_blocks - 1;
            (a as u64, z as u64)
        })
        .collect();
    let parts: Vec<Block> = if workers <= 1 {
        blocks.iter().map(|&(a, z)| f(a, z)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| SearchError::Internal(e.to_string()))?;
        pool.install(|| blocks.par_iter().map(|&(a, z)| f(a, z)).collect())
    };
    let mut out = Vec::new();
    let mut scanned = 0;
    for part in parts {
        let (mut tuples, s) = part?;
        tuples.sort_unstable();
        out.append(&mut tuples);
        scanned += s;
    }
    Ok((out, scanned))
}

/// Every tuple with elements `<= config.limit` satisfying the family
/// predicate, in canonical order: non-decreasing elements for symmetric
/// families, strictly increasing for multiamicable tuples, and role order
/// (m, n) for the asymmetric pair families.
pub fn enumerate(config: &SearchConfig<'_>) -> Result<SearchReport, SearchError> {
    enumerate_capped(config, DEFAULT_MAX_LIMIT)
}

pub fn enumerate_capped(config: &SearchConfig<'_>, cap: u64) -> Result<SearchReport, SearchError> {
    let started = Instant::now();
    let spec = &config.spec;
    spec.validate()?;
    if config.limit == 0 {
        return Err(SearchError::Config("limit must be at least 1".into()));
    }
    if config.workers == 0 {
        return Err(SearchError::Config("workers must be at least 1".into()));
    }
    if config.limit > cap {
        return Err(SearchError::LimitTooLarge { limit: config.limit, cap });
    }
    if config.sieve.limit() < config.limit {
        return Err(SearchError::SieveCoverage { needed: config.limit, have: config.sieve.limit() });
    }
    let (mut tuples, scanned) = scan(config)?;
    tuples.sort_unstable();
    tuples.dedup();
    let records = tuples
        .into_iter()
        .map(|t| match families::check_as(spec, &t, Provenance::Found)? {
            CheckOutcome::Member(r) => Ok(r),
            CheckOutcome::Mismatch(m) => Err(SearchError::Internal(format!(
                "search emitted {:?} for {spec} but {}",
                m.tuple, m.violation
            ))),
        })
        .collect::<Result<Vec<_>, SearchError>>()?;
    Ok(SearchReport {
        spec: spec.clone(),
        limit: config.limit,
        records,
        scanned,
        elapsed: started.elapsed(),
    })
}

fn scan(config: &SearchConfig<'_>) -> Block {
    let sieve = config.sieve;
    let sig = sieve.indexed();
    let limit = config.limit;
    let workers = config.workers;
    match &config.spec {
        FamilySpec::Perfect => run_blocks(1, limit, workers, |a, z| {
            let hits = (a..=z)
                .filter(|&n| sig[n as usize] as u128 == 2 * n as u128)
                .map(|n| vec![n])
                .collect();
            Ok((hits, z - a + 1))
        }),
        FamilySpec::AmicableNumber => run_blocks(2, limit, workers, |a, z| {
            let mut hits = Vec::new();
            for n in a..=z {
                let s = sig[n as usize];
                let partner = s - n;
                if partner != n && sieve.sigma(partner)? == s {
                    hits.push(vec![n]);
                }
            }
            Ok((hits, z - a + 1))
        }),
        FamilySpec::AmicablePair => run_blocks(1, limit, workers, |a, z| {
            let mut hits = Vec::new();
            for m in a..=z {
                let s = sig[m as usize];
                let n = s - m;
                if n >= m && n <= limit && sig[n as usize] == s {
                    hits.push(vec![m, n]);
                }
            }
            Ok((hits, z - a + 1))
        }),
        &FamilySpec::CohenPair { alpha, beta } => run_blocks(1, limit, workers, move |a, z| {
            let mut hits = Vec::new();
            for m in a..=z {
                let s = sig[m as usize] - m;
                if s == 0 || !s.is_multiple_of(alpha) {
                    continue;
                }
                let n = s / alpha;
                if n > limit || (alpha == beta && n < m) {
                    continue;
                }
                if (sig[n as usize] - n) as u128 == beta as u128 * m as u128 {
                    hits.push(vec![m, n]);
                }
            }
            Ok((hits, z - a + 1))
        }),
        &FamilySpec::AlphaBeta { alpha, beta } => run_blocks(1, limit, workers, move |a, z| {
            let mut hits = Vec::new();
            for n in a..=z {
                let an = alpha.checked_mul(n).ok_or(ArithError::Overflow("α·n"))?;
                let m = sieve.aliquot(an)?;
                if m == 0 || m > limit || (alpha == beta && m > n) {
                    continue;
                }
                let bm = beta.checked_mul(m).ok_or(ArithError::Overflow("β·m"))?;
                if sieve.aliquot(bm)? == n {
                    hits.push(vec![m, n]);
                }
            }
            Ok((hits, z - a + 1))
        }),
        FamilySpec::Multiamicable { alphas } => bucket_scan(config, alphas, 1, true),
        FamilySpec::Dickson { k } => bucket_scan(config, &vec![1; *k], 1, false),
        FamilySpec::Yanney { k } => bucket_scan(config, &vec![1; *k], *k as u64 - 1, false),
        &FamilySpec::Pm { k, p, q } => {
            let leaf = if p == 1 {
                LinearIndex::build(sig, limit, k, |n, s| Some(s as i128 - q as i128 * n as i128))
                    .map(Leaf::Linear)
                    .unwrap_or(Leaf::Brute(Equation::Pm { p, q }))
            } else {
                Leaf::Brute(Equation::Pm { p, q })
            };
            tuple_scan(config, k, leaf)
        }
        &FamilySpec::Mp { k, p, q } => {
            let leaf = LinearIndex::build(sig, limit, k, |n, s| {
                let a = (s as i128).checked_pow(p)?;
                let b = (n as i128).checked_pow(p)?.checked_mul(q as i128)?;
                a.checked_sub(b)
            });
            let leaf = leaf.map(Leaf::Linear).unwrap_or(Leaf::Brute(Equation::Mp { p, q }));
            tuple_scan(config, k, leaf)
        }
        &FamilySpec::Wpm { k, p } => tuple_scan(config, k, Leaf::Brute(Equation::Wpm { p })),
        &FamilySpec::Gm { k } => tuple_scan(config, k, Leaf::Brute(Equation::Gm)),
        &FamilySpec::Hm { k, p, q } => tuple_scan(config, k, Leaf::Brute(Equation::Hm { p, q })),
        &FamilySpec::Whm { k, p } => tuple_scan(config, k, Leaf::Brute(Equation::Whm { p })),
        &FamilySpec::Wgm { k } => tuple_scan(config, k, Leaf::Wgm),
        &FamilySpec::Feebly { k } => tuple_scan(config, k, Leaf::Feebly(FeeblyIndex::build(sig, limit))),
    }
}

/// Finds weighted tuples inside each σ-bucket: Σ weights[i]·ni = scale·σ.
fn bucket_scan(config: &SearchConfig<'_>, weights: &[u64], scale: u64, strict: bool) -> Block {
    let buckets = SigmaBuckets::new(config.sieve, config.limit);
    let k = weights.len();
    if buckets.is_empty() {
        return Ok((Vec::new(), 0));
    }
    run_blocks(0, buckets.len() as u64 - 1, config.workers, |a, z| {
        let mut hits = Vec::new();
        let mut scanned = 0;
        for i in a..=z {
            let (s, members) = buckets.bucket(i as usize);
            if strict && members.len() < k {
                continue;
            }
            scanned += solve_weighted(members, weights, s as u128 * scale as u128, strict, &mut hits);
        }
        Ok((hits, scanned))
    })
}

/// Separable equations Σ f(ni) = 0: the last element is looked up by value.
struct LinearIndex {
    values: Vec<i128>,
    by_value: HashMap<i128, Vec<u64>>,
}

impl LinearIndex {
    /// `None` when some |f(n)|·k could overflow `i128`.
    fn build(sig: &[u64], limit: u64, k: usize, f: impl Fn(u64, u64) -> Option<i128>) -> Option<Self> {
        let bound = i128::MAX / (k as i128 + 1);
        let mut values = vec![0i128; limit as usize + 1];
        let mut by_value: HashMap<i128, Vec<u64>> = HashMap::new();
        for n in 1..=limit {
            let v = f(n, sig[n as usize])?;
            if v.checked_abs()? > bound {
                return None;
            }
            values[n as usize] = v;
            by_value.entry(v).or_default().push(n);
        }
        Some(LinearIndex { values, by_value })
    }
}

/// Σ ni/σ(ni) = 1 with the last ratio looked up in lowest terms.
struct FeeblyIndex {
    by_ratio: HashMap<(u64, u64), Vec<u64>>,
}

impl FeeblyIndex {
    fn build(sig: &[u64], limit: u64) -> Self {
        let mut by_ratio: HashMap<(u64, u64), Vec<u64>> = HashMap::new();
        for n in 1..=limit {
            let s = sig[n as usize];
            let g = num_integer::gcd(n, s);
            by_ratio.entry((n / g, s / g)).or_default().push(n);
        }
        FeeblyIndex { by_ratio }
    }
}

enum Leaf {
    Brute(Equation),
    Wgm,
    Linear(LinearIndex),
    Feebly(FeeblyIndex),
}

fn tuple_scan(config: &SearchConfig<'_>, k: usize, leaf: Leaf) -> Block {
    let sig = config.sieve.indexed();
    let limit = config.limit;
    run_blocks(1, limit, config.workers, |a, z| {
        let mut walk = TupleWalk {
            sig,
            limit,
            k,
            leaf: &leaf,
            prefix: Vec::with_capacity(k),
            sigmas: Vec::with_capacity(k),
            hits: Vec::new(),
            scanned: 0,
        };
        for n in a..=z {
            walk.push(n);
            walk.descend();
            walk.pop();
        }
        Ok((walk.hits, walk.scanned))
    })
}

struct TupleWalk<'a> {
    sig: &'a [u64],
    limit: u64,
    k: usize,
    leaf: &'a Leaf,
    prefix: Vec<u64>,
    sigmas: Vec<u64>,
    hits: Vec<Vec<u64>>,
    scanned: u64,
}

impl TupleWalk<'_> {
    fn push(&mut self, n: u64) {
        self.prefix.push(n);
        self.sigmas.push(self.sig[n as usize]);
    }

    fn pop(&mut self) {
        self.prefix.pop();
        self.sigmas.pop();
    }

    fn test_leaf(&mut self) {
        self.scanned += 1;
        let ok = match self.leaf {
            Leaf::Brute(eq) => eq.accepts(&self.prefix, &self.sigmas),
            Leaf::Wgm => wgm_accepts(&self.prefix, &self.sigmas),
            Leaf::Linear(idx) => idx.values[self.prefix[0] as usize] == 0,
            Leaf::Feebly(_) => Equation::Feebly.accepts(&self.prefix, &self.sigmas),
        };
        if ok {
            self.hits.push(self.prefix.clone());
        }
    }

    fn descend(&mut self) {
        let depth = self.prefix.len();
        if depth == self.k {
            self.test_leaf();
            return;
        }
        let last = *self.prefix.last().expect("non-empty prefix");
        if depth + 1 == self.k && self.lookup_last(last) {
            return;
        }
        for n in last..=self.limit {
            self.push(n);
            self.descend();
            self.pop();
        }
    }

    /// Completes the tuple by index lookup when the leaf supports it.
    fn lookup_last(&mut self, last: u64) -> bool {
        match self.leaf {
            Leaf::Linear(idx) => {
                self.scanned += 1;
                let partial: i128 = self.prefix.iter().map(|&n| idx.values[n as usize]).sum();
                if let Some(cands) = idx.by_value.get(&-partial) {
                    let from = cands.partition_point(|&n| n < last);
                    for &n in &cands[from..] {
                        let mut t = self.prefix.clone();
                        t.push(n);
                        self.hits.push(t);
                    }
                }
                true
            }
            Leaf::Feebly(idx) => {
                let Some((num, den)) = ratio_sum(&self.prefix, &self.sigmas) else {
                    return false;
                };
                self.scanned += 1;
                if num >= den {
                    return true;
                }
                let (rn, rd) = (den - num, den);
                let g = num_integer::gcd(rn, rd);
                let key = (u64::try_from(rn / g), u64::try_from(rd / g));
                if let (Ok(kn), Ok(kd)) = key {
                    if let Some(cands) = idx.by_ratio.get(&(kn, kd)) {
                        let from = cands.partition_point(|&n| n < last);
                        for &n in &cands[from..] {
                            let mut t = self.prefix.clone();
                            t.push(n);
                            self.hits.push(t);
                        }
                    }
                }
                true
            }
            _ => false,
        }
    }
}

/// Σ ni/σ(ni) in lowest terms, or `None` on `u128` overflow.
fn ratio_sum(ns: &[u64], sig: &[u64]) -> Option<(u128, u128)> {
    let mut acc = (0u128, 1u128);
    for (&n, &s) in ns.iter().zip(sig) {
        let (a, b) = acc;
        let num = a.checked_mul(s as u128)?.checked_add((n as u128).checked_mul(b)?)?;
        let den = b.checked_mul(s as u128)?;
        let g = num_integer::gcd(num, den);
        acc = (num / g, den / g);
    }
    Some(acc)
}
