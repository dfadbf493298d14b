//! Counting functions for amicable and multiamicable numbers, the mean-value
//! bounds Σ σᵏ(n)/nᵏ <= ζ(2)ᵏ ζ(2k−1) x, and the Pomerance upper curve.

use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{zeta_estimate, ArithError, Rational, SigmaSieve};
use crate::families::FamilyError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("sieve covers n <= {have} but the count needs n <= {needed}")]
    SieveCoverage { needed: u64, have: u64 },
    #[error("invalid argument: {0}")]
    Argument(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountSeries {
    pub checkpoints: Vec<u64>,
    pub counts: Vec<u64>,
    /// counts[i] / checkpoints[i].
    pub ratios: Vec<Rational>,
}

impl CountSeries {
    fn from_sorted(checkpoints: &[u64], keys: impl Iterator<Item = u64>) -> Result<Self, DensityError> {
        let keys: Vec<u64> = keys.collect();
        let counts: Vec<u64> = checkpoints
            .iter()
            .map(|&x| keys.partition_point(|&k| k <= x) as u64)
            .collect();
        let ratios = counts
            .iter()
            .zip(checkpoints)
            .map(|(&c, &x)| Rational::new(c, x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CountSeries { checkpoints: checkpoints.to_vec(), counts, ratios })
    }

    /// CSV with header `x,count,ratio,bound`; the bound column is left empty
    /// when `bound` is `None`.
    pub fn write_csv<W: Write>(&self, mut out: W, bound: Option<fn(f64) -> f64>) -> io::Result<()> {
        writeln!(out, "x,count,ratio,bound")?;
        for ((x, c), r) in self.checkpoints.iter().zip(&self.counts).zip(&self.ratios) {
            let b = bound.map(|f| format!("{}", f(*x as f64))).unwrap_or_default();
            writeln!(out, "{x},{c},{r},{b}")?;
        }
        Ok(())
    }
}

fn check_checkpoints(checkpoints: &[u64], sieve: &SigmaSieve) -> Result<(), DensityError> {
    if checkpoints.is_empty() {
        return Err(DensityError::Argument("no checkpoints".into()));
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DensityError::Argument("checkpoints must be positive and strictly increasing".into()));
    }
    let top = *checkpoints.last().unwrap();
    if top > sieve.limit() {
        return Err(DensityError::SieveCoverage { needed: top, have: sieve.limit() });
    }
    Ok(())
}

/// A(x) together with every counted amicable number and its partner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmicableCount {
    pub series: CountSeries,
    /// (n, σ(n) − n) for each counted n, ascending in n.
    pub members: Vec<(u64, u64)>,
}

/// Counts n <= x with s(n) ≠ n and σ(s(n)) = σ(n); perfect numbers are not
/// counted. Partners beyond the sieve are handled by factorization.
pub fn count_amicable(sieve: &SigmaSieve, checkpoints: &[u64]) -> Result<AmicableCount, DensityError> {
    check_checkpoints(checkpoints, sieve)?;
    let top = *checkpoints.last().unwrap();
    let sig = sieve.indexed();
    let mut members = Vec::new();
    for n in 2..=top {
        let s = sig[n as usize];
        let m = s - n;
        if m != n && sieve.sigma(m)? == s {
            members.push((n, m));
        }
    }
    let series = CountSeries::from_sorted(checkpoints, members.iter().map(|&(n, _)| n))?;
    Ok(AmicableCount { series, members })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiamicableCount {
    pub alpha: u64,
    pub beta: u64,
    pub series: CountSeries,
    /// (m, n) with m < n, ascending in m.
    pub pairs: Vec<(u64, u64)>,
}

/// M(x): pairs m < n with σ(m) = σ(n) = αm + βn and m <= x. The partner is
/// recovered as n = (σ(m) − αm)/β, so n is not bounded by x.
pub fn count_multiamicable_pairs(
    sieve: &SigmaSieve,
    alpha: u64,
    beta: u64,
    checkpoints: &[u64],
) -> Result<MultiamicableCount, DensityError> {
    if alpha == 0 || beta == 0 {
        return Err(FamilyError::InvalidParameter("α and β must be positive".into()).into());
    }
    check_checkpoints(checkpoints, sieve)?;
    let top = *checkpoints.last().unwrap();
    let sig = sieve.indexed();
    let mut pairs = Vec::new();
    for m in 1..=top {
        let s = sig[m as usize] as u128;
        let am = alpha as u128 * m as u128;
        if s <= am || !(s - am).is_multiple_of(beta as u128) {
            continue;
        }
        let n = (s - am) / beta as u128;
        let Ok(n) = u64::try_from(n) else { continue };
        if n > m && sieve.sigma(n)? as u128 == s {
            pairs.push((m, n));
        }
    }
    let series = CountSeries::from_sorted(checkpoints, pairs.iter().map(|&(m, _)| m))?;
    Ok(MultiamicableCount { alpha, beta, series, pairs })
}

/// An unreduced fraction numer/denom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSum {
    pub numer: BigUint,
    pub denom: BigUint,
}

impl ExactSum {
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.numer, &self.denom)
    }
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = num.bits() as i64 - den.bits() as i64 - 64;
    let q = if shift >= 0 { num / (den << shift as u64) } else { (num << (-shift) as u64) / den };
    q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(shift as i32)
}

/// Σ over `leaves` of a/b by binary splitting: the result's denominator is
/// the product of all b, so two sums over the same denominators are equal
/// exactly when their numerators are.
fn split_sum(leaves: &[(BigUint, BigUint)]) -> (BigUint, BigUint) {
    match leaves.len() {
        0 => (BigUint::zero(), BigUint::one()),
        1 => leaves[0].clone(),
        n => {
            let (p1, q1) = split_sum(&leaves[..n / 2]);
            let (p2, q2) = split_sum(&leaves[n / 2..]);
            (p1 * &q2 + p2 * &q1, q1 * q2)
        }
    }
}

/// Σ_{n<=x} σ(n)ᵏ/nᵏ exactly.
pub fn lemma_sum_exact(sieve: &SigmaSieve, x: u64, k: u32) -> Result<ExactSum, DensityError> {
    if x > sieve.limit() {
        return Err(DensityError::SieveCoverage { needed: x, have: sieve.limit() });
    }
    let sig = sieve.indexed();
    let leaves: Vec<(BigUint, BigUint)> = (1..=x)
        .map(|n| (BigUint::from(sig[n as usize]).pow(k), BigUint::from(n).pow(k)))
        .collect();
    let (numer, denom) = split_sum(&leaves);
    Ok(ExactSum { numer, denom })
}

/// Σ_{u<=x} ⌊x/u⌋/u, the k = 1 sum regrouped by divisor. Its denominator is
/// x!, the same as [`lemma_sum_exact`] at k = 1.
pub fn lemma_rearranged(x: u64) -> ExactSum {
    let leaves: Vec<(BigUint, BigUint)> = (1..=x).map(|u| (BigUint::from(x / u), BigUint::from(u))).collect();
    let (numer, denom) = split_sum(&leaves);
    ExactSum { numer, denom }
}

/// Largest x for which [`lemma_sum_check`] evaluates the sum exactly.
pub const EXACT_LEMMA_LIMIT: u64 = 100_000;

const ZETA_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub x: u64,
    pub k: u32,
    /// The sum rounded to the nearest double.
    pub lhs: f64,
    /// Whether `lhs` came from an exact rational sum.
    pub exact: bool,
    /// Bound on |lhs − true sum| when not exact.
    pub lhs_error: f64,
    pub rhs: f64,
    /// Certified bound on |rhs − true bound|.
    pub rhs_error: f64,
    pub margin: f64,
    /// lhs < rhs − rhs_error, decided exactly when the sum is exact.
    pub holds: bool,
    #[serde(skip)]
    pub lhs_fraction: Option<ExactSum>,
}

/// ζ(2)·x for k = 1, ζ(2)ᵏ ζ(2k−1)·x for k >= 2, with a certified error.
pub fn lemma_bound(x: u64, k: u32) -> Result<(f64, f64), DensityError> {
    if k == 0 {
        return Err(DensityError::Argument("k must be at least 1".into()));
    }
    let z2 = zeta_estimate(2, ZETA_EPS)?;
    let mut parts = vec![z2; k as usize];
    if k >= 2 {
        parts.push(zeta_estimate(2 * k - 1, ZETA_EPS)?);
    }
    let xf = x as f64;
    let value = parts.iter().map(|z| z.value).product::<f64>() * xf;
    let lower = parts.iter().map(|z| z.lower()).product::<f64>() * xf;
    let upper = parts.iter().map(|z| z.upper()).product::<f64>() * xf;
    // Each product and the final scaling round once; 2(k+2) ulps covers them.
    let slack = 2.0 * (k as f64 + 2.0) * f64::EPSILON * upper;
    let error = (value - lower).max(upper - value) + slack;
    Ok((value, error))
}

/// Exact comparison num/den < v for finite v > 0.
fn fraction_below(num: &BigUint, den: &BigUint, v: f64) -> bool {
    let bits = v.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let rhs = den * BigUint::from(mant);
    if e >= 0 {
        *num < rhs << e as u64
    } else {
        (num << (-e) as u64) < rhs
    }
}

/// Checks Σ_{n<=x} σᵏ(n)/nᵏ against its mean-value bound. Exact up to
/// [`EXACT_LEMMA_LIMIT`]; beyond that a compensated double sum is used and
/// `exact` is false.
pub fn lemma_sum_check(sieve: &SigmaSieve, x: u64, k: u32) -> Result<BoundReport, DensityError> {
    if x == 0 {
        return Err(DensityError::Argument("x must be at least 1".into()));
    }
    let (rhs, rhs_error) = lemma_bound(x, k)?;
    let rhs_lower = rhs - rhs_error;
    if x <= EXACT_LEMMA_LIMIT {
        let sum = lemma_sum_exact(sieve, x, k)?;
        let lhs = sum.to_f64();
        let holds = fraction_below(&sum.numer, &sum.denom, rhs_lower);
        return Ok(BoundReport {
            x,
            k,
            lhs,
            exact: true,
            lhs_error: 0.0,
            rhs,
            rhs_error,
            margin: rhs - lhs,
            holds,
            lhs_fraction: Some(sum),
        });
    }
    if x > sieve.limit() {
        return Err(DensityError::SieveCoverage { needed: x, have: sieve.limit() });
    }
    let sig = sieve.indexed();
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for n in 1..=x {
        let t = (sig[n as usize] as f64 / n as f64).powi(k as i32);
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    }
    let lhs = sum + comp;
    // Each term carries at most (k + 1) roundings; the compensated sum adds
    // a few more ulps of the total.
    let lhs_error = ((k as f64 + 1.0) + 4.0) * f64::EPSILON * lhs;
    Ok(BoundReport {
        x,
        k,
        lhs,
        exact: false,
        lhs_error,
        rhs,
        rhs_error,
        margin: rhs - lhs,
        holds: lhs + lhs_error < rhs_lower,
        lhs_fraction: None,
    })
}

/// x / e^{√(ln x)}.
pub fn pomerance_bound(x: f64) -> f64 {
    x / x.ln().sqrt().exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PomeranceRow {
    pub x: u64,
    pub count: u64,
    pub ratio: Rational,
    pub bound: f64,
    /// A(x)·e^{√(ln x)}/x.
    pub normalized: f64,
}

/// A(x) next to the Pomerance curve. Nothing is asserted: the bound is an
/// asymptotic statement.
pub fn pomerance_curve(sieve: &SigmaSieve, checkpoints: &[u64]) -> Result<Vec<PomeranceRow>, DensityError> {
    let counts = count_amicable(sieve, checkpoints)?.series;
    Ok(counts
        .checkpoints
        .iter()
        .zip(&counts.counts)
        .zip(&counts.ratios)
        .map(|((&x, &count), &ratio)| {
            let bound = pomerance_bound(x as f64);
            PomeranceRow { x, count, ratio, bound, normalized: count as f64 / bound }
        })
        .collect())
}

pub fn write_pomerance_csv<W: Write>(rows: &[PomeranceRow], mut out: W) -> io::Result<()> {
    writeln!(out, "x,count,ratio,bound")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.x, r.count, r.ratio, r.bound)?;
    }
    Ok(())
}
