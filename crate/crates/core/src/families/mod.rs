//! Exact membership predicates for every amicability family.
//!
//! Each predicate recomputes σ by factorization and compares both sides of
//! the defining equation with unbounded integers or rationals, so a verdict
//! never depends on machine word size. [`check`] dispatches on a
//! [`FamilySpec`] and, on failure, reports the first equation that breaks.

mod spec;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, factorize, ArithError};

pub use spec::{FamilyKind, FamilyParams, FamilySpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters: {0}")]
    InvalidParameter(String),
    #[error("expected a tuple of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("tuple must not be empty")]
    EmptyTuple,
    #[error("1 has aliquot sum 0, so amicable-number is undefined there")]
    AliquotZero,
}

/// Where a verified tuple came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Found,
    Constructed,
    Table,
}

/// A tuple whose membership in `spec` has been verified.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TupleRecord {
    pub spec: FamilySpec,
    pub tuple: Vec<u64>,
    pub sigmas: Vec<u64>,
    pub provenance: Provenance,
}

/// The first defining equality that fails, with both sides rendered exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: LHS {} ≠ RHS {}", self.relation, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub spec: FamilySpec,
    pub tuple: Vec<u64>,
    pub sigmas: Vec<u64>,
    pub violation: Violation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Member(TupleRecord),
    Mismatch(Mismatch),
}

impl CheckOutcome {
    pub fn is_member(&self) -> bool {
        matches!(self, CheckOutcome::Member(_))
    }
}

type Verdict = Result<Option<Violation>, FamilyError>;

fn compare<T: PartialEq + fmt::Display>(relation: impl Into<String>, lhs: T, rhs: T) -> Option<Violation> {
    if lhs == rhs {
        None
    } else {
        Some(Violation {
            relation: relation.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn sigmas_of(tuple: &[u64]) -> Result<Vec<u64>, FamilyError> {
    if tuple.is_empty() {
        return Err(FamilyError::EmptyTuple);
    }
    tuple.iter().map(|&n| Ok(arith::sigma(n)?)).collect()
}

fn total(tuple: &[u64]) -> BigUint {
    tuple.iter().map(|&n| big(n)).sum()
}

fn holds(v: Verdict) -> Result<bool, FamilyError> {
    v.map(|v| v.is_none())
}

// ---- per-family equations over precomputed σ values ----

fn dickson_eq(tuple: &[u64], sigmas: &[u64]) -> Option<Violation> {
    let sum = total(tuple);
    sigmas.iter().enumerate().find_map(|(i, &s)| {
        compare(format!("σ(n{}) = n1+…+nk", i + 1), big(s), sum.clone())
    })
}

fn yanney_eq(tuple: &[u64], sigmas: &[u64]) -> Option<Violation> {
    let sum = total(tuple);
    let km1 = big(tuple.len() as u64 - 1);
    sigmas.iter().enumerate().find_map(|(i, &s)| {
        compare(format!("(k-1)·σ(n{}) = n1+…+nk", i + 1), &km1 * big(s), sum.clone())
    })
}

fn multiamicable_eq(tuple: &[u64], sigmas: &[u64], alphas: &[u64]) -> Option<Violation> {
    if let Some(v) = sigmas
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, &s)| compare(format!("σ(n1) = σ(n{})", i + 1), sigmas[0], s))
    {
        return Some(v);
    }
    let weighted: BigUint = tuple.iter().zip(alphas).map(|(&n, &a)| big(n) * big(a)).sum();
    compare("σ(n1) = α1·n1+…+αk·nk", big(sigmas[0]), weighted)
}

fn cohen_eq(m: u64, n: u64, sm: u64, sn: u64, alpha: u64, beta: u64) -> Option<Violation> {
    compare("σ(m) − m = α·n", big(sm - m), big(alpha) * big(n))
        .or_else(|| compare("σ(n) − n = β·m", big(sn - n), big(beta) * big(m)))
}

fn alpha_beta_eq(m: u64, n: u64, alpha: u64, beta: u64) -> Verdict {
    let an = alpha.checked_mul(n).ok_or(ArithError::Overflow("α·n"))?;
    let bm = beta.checked_mul(m).ok_or(ArithError::Overflow("β·m"))?;
    if let Some(v) = compare("s(α·n) = m", arith::aliquot(an)?, m) {
        return Ok(Some(v));
    }
    Ok(compare("s(β·m) = n", arith::aliquot(bm)?, n))
}

fn pm_eq(tuple: &[u64], sigmas: &[u64], p: u32, q: u64) -> Option<Violation> {
    let lhs: BigUint = sigmas.iter().map(|&s| big(s).pow(p)).sum();
    let rhs = big(q) * total(tuple).pow(p);
    compare("Σ σ(ni)^p = q·(Σ ni)^p", lhs, rhs)
}

fn wpm_eq(tuple: &[u64], sigmas: &[u64], p: u32) -> Option<Violation> {
    let lhs: BigUint = tuple.iter().zip(sigmas).map(|(&n, &s)| big(n) * big(s).pow(p)).sum();
    let rhs = total(tuple).pow(p + 1);
    compare("Σ ni·σ(ni)^p = (Σ ni)^(p+1)", lhs, rhs)
}

fn gm_eq(tuple: &[u64], sigmas: &[u64]) -> Option<Violation> {
    let lhs: BigUint = sigmas.iter().map(|&s| big(s)).product();
    let rhs = total(tuple).pow(tuple.len() as u32);
    compare("Π σ(ni) = (Σ ni)^k", lhs, rhs)
}

/// Π σ(ni)^ni = S^S with S = Σ ni, decided on prime-exponent vectors so the
/// powers themselves are never formed.
fn wgm_eq(tuple: &[u64], sigmas: &[u64]) -> Verdict {
    let sum: u128 = tuple.iter().map(|&n| n as u128).sum();
    let sum = u64::try_from(sum).map_err(|_| ArithError::Overflow("tuple sum"))?;
    let mut lhs: BTreeMap<u64, u128> = BTreeMap::new();
    for (&n, &s) in tuple.iter().zip(sigmas) {
        for &(p, e) in factorize(s)?.factors() {
            *lhs.entry(p).or_default() += n as u128 * e as u128;
        }
    }
    let rhs: BTreeMap<u64, u128> = factorize(sum)?
        .factors()
        .iter()
        .map(|&(p, e)| (p, sum as u128 * e as u128))
        .collect();
    let primes: std::collections::BTreeSet<u64> = lhs.keys().chain(rhs.keys()).copied().collect();
    Ok(primes.into_iter().find_map(|p| {
        compare(
            format!("exponent of {p} in Π σ(ni)^ni = exponent in S^S"),
            lhs.get(&p).copied().unwrap_or(0),
            rhs.get(&p).copied().unwrap_or(0),
        )
    }))
}

fn hm_eq(tuple: &[u64], sigmas: &[u64], p: u32, q: u64) -> Option<Violation> {
    let recip: BigRational = sigmas.iter().map(|&s| ratio(BigUint::one(), big(s).pow(p))).sum();
    let lhs = recip * BigRational::from_integer(total(tuple).pow(p).into());
    compare("(Σ 1/σ(ni)^p)·(Σ ni)^p = q", lhs, BigRational::from_integer(big(q).into()))
}

fn whm_eq(tuple: &[u64], sigmas: &[u64], p: u32) -> Option<Violation> {
    let weighted: BigRational = tuple
        .iter()
        .zip(sigmas)
        .map(|(&n, &s)| ratio(big(n).pow(p), big(s).pow(p)))
        .sum();
    let lhs = weighted * BigRational::from_integer(total(tuple).pow(p).into());
    let rhs: BigUint = tuple.iter().map(|&n| big(n).pow(p)).sum();
    compare("(Σ ni^p/σ(ni)^p)·(Σ ni)^p = Σ ni^p", lhs, BigRational::from_integer(rhs.into()))
}

fn feebly_eq(tuple: &[u64], sigmas: &[u64]) -> Option<Violation> {
    let lhs: BigRational = tuple.iter().zip(sigmas).map(|(&n, &s)| ratio(big(n), big(s))).sum();
    compare("Σ ni/σ(ni) = 1", lhs, BigRational::one())
}

fn mp_eq(tuple: &[u64], sigmas: &[u64], p: u32, q: u64) -> Option<Violation> {
    let lhs: BigUint = sigmas.iter().map(|&s| big(s).pow(p)).sum();
    let rhs: BigUint = big(q) * tuple.iter().map(|&n| big(n).pow(p)).sum::<BigUint>();
    compare("Σ σ(ni)^p = q·Σ ni^p", lhs, rhs)
}

fn require_len(tuple: &[u64], expected: usize) -> Result<(), FamilyError> {
    if tuple.len() != expected {
        return Err(FamilyError::LengthMismatch { expected, got: tuple.len() });
    }
    Ok(())
}

fn positive(name: &str, v: u64) -> Result<(), FamilyError> {
    if v == 0 {
        return Err(FamilyError::InvalidParameter(format!("{name} must be at least 1")));
    }
    Ok(())
}

// ---- public predicates ----

/// σ(n) = 2n.
pub fn is_perfect(n: u64) -> Result<bool, FamilyError> {
    Ok(arith::sigma(n)? as u128 == 2 * n as u128)
}

/// σ(m) = σ(n) = m + n. With m = n this is the perfect-number condition.
pub fn is_amicable_pair(m: u64, n: u64) -> Result<bool, FamilyError> {
    let t = [m, n];
    Ok(dickson_eq(&t, &sigmas_of(&t)?).is_none())
}

/// σ(σ(n) − n) = σ(n), i.e. `n` belongs to some amicable pair. Perfect
/// numbers satisfy the equation with themselves; `exclude_perfect` drops them.
pub fn is_amicable_number(n: u64, exclude_perfect: bool) -> Result<bool, FamilyError> {
    holds(amicable_number_eq(n, exclude_perfect).map(|(v, _)| v))
}

fn amicable_number_eq(n: u64, exclude_perfect: bool) -> Result<(Option<Violation>, u64), FamilyError> {
    if n == 0 {
        return Err(ArithError::Zero.into());
    }
    if n == 1 {
        return Err(FamilyError::AliquotZero);
    }
    let s = arith::sigma(n)?;
    let partner = s - n;
    if exclude_perfect && partner == n {
        return Ok((
            Some(Violation {
                relation: "n is not perfect".into(),
                lhs: s.to_string(),
                rhs: format!("2·{n}"),
            }),
            s,
        ));
    }
    Ok((compare("σ(σ(n) − n) = σ(n)", arith::sigma(partner)?, s), s))
}

/// σ(n1) = … = σ(nk) = n1 + … + nk.
pub fn is_dickson_tuple(tuple: &[u64]) -> Result<bool, FamilyError> {
    if tuple.len() < 2 {
        return Err(FamilyError::InvalidParameter("dickson needs k >= 2".into()));
    }
    Ok(dickson_eq(tuple, &sigmas_of(tuple)?).is_none())
}

/// (k − 1)·σ(ni) = n1 + … + nk for every i; for triples this is
/// 2σ(n1) = 2σ(n2) = 2σ(n3) = n1 + n2 + n3.
pub fn is_yanney_tuple(tuple: &[u64]) -> Result<bool, FamilyError> {
    if tuple.len() < 2 {
        return Err(FamilyError::InvalidParameter("yanney needs k >= 2".into()));
    }
    Ok(yanney_eq(tuple, &sigmas_of(tuple)?).is_none())
}

/// σ(m) − m = αn and σ(n) − n = βm.
pub fn is_cohen_pair(m: u64, n: u64, alpha: u64, beta: u64) -> Result<bool, FamilyError> {
    positive("alpha", alpha)?;
    positive("beta", beta)?;
    let s = sigmas_of(&[m, n])?;
    Ok(cohen_eq(m, n, s[0], s[1], alpha, beta).is_none())
}

/// σ(n1) = … = σ(nk) = α1·n1 + … + αk·nk, for any ordering of the tuple.
pub fn is_multiamicable(tuple: &[u64], alphas: &[u64]) -> Result<bool, FamilyError> {
    require_len(tuple, alphas.len())?;
    alphas.iter().try_for_each(|&a| positive("alpha", a))?;
    Ok(multiamicable_eq(tuple, &sigmas_of(tuple)?, alphas).is_none())
}

/// m = s(αn) and n = s(βm).
pub fn is_alpha_beta_pair(m: u64, n: u64, alpha: u64, beta: u64) -> Result<bool, FamilyError> {
    positive("alpha", alpha)?;
    positive("beta", beta)?;
    if m == 0 || n == 0 {
        return Err(ArithError::Zero.into());
    }
    holds(alpha_beta_eq(m, n, alpha, beta))
}

/// Σ σ(ni)^p = q·(Σ ni)^p.
pub fn is_pm(tuple: &[u64], p: u32, q: u64) -> Result<bool, FamilyError> {
    positive("p", p as u64)?;
    positive("q", q)?;
    Ok(pm_eq(tuple, &sigmas_of(tuple)?, p, q).is_none())
}

/// Σ ni·σ(ni)^p = (Σ ni)^(p+1).
pub fn is_wpm(tuple: &[u64], p: u32) -> Result<bool, FamilyError> {
    positive("p", p as u64)?;
    Ok(wpm_eq(tuple, &sigmas_of(tuple)?, p).is_none())
}

/// Π σ(ni) = (Σ ni)^k.
pub fn is_gm(tuple: &[u64]) -> Result<bool, FamilyError> {
    Ok(gm_eq(tuple, &sigmas_of(tuple)?).is_none())
}

/// Π σ(ni)^ni = (Σ ni)^(Σ ni).
pub fn is_wgm(tuple: &[u64]) -> Result<bool, FamilyError> {
    holds(wgm_eq(tuple, &sigmas_of(tuple)?))
}

/// (Σ 1/σ(ni)^p)·(Σ ni)^p = q.
pub fn is_hm(tuple: &[u64], p: u32, q: u64) -> Result<bool, FamilyError> {
    positive("p", p as u64)?;
    positive("q", q)?;
    Ok(hm_eq(tuple, &sigmas_of(tuple)?, p, q).is_none())
}

/// (Σ ni^p/σ(ni)^p)·(Σ ni)^p = Σ ni^p.
pub fn is_whm(tuple: &[u64], p: u32) -> Result<bool, FamilyError> {
    positive("p", p as u64)?;
    Ok(whm_eq(tuple, &sigmas_of(tuple)?, p).is_none())
}

/// Σ ni/σ(ni) = 1.
pub fn is_feebly(tuple: &[u64]) -> Result<bool, FamilyError> {
    Ok(feebly_eq(tuple, &sigmas_of(tuple)?).is_none())
}

/// Σ σ(ni)^p = q·Σ ni^p, defined for p >= 2.
pub fn is_mp(tuple: &[u64], p: u32, q: u64) -> Result<bool, FamilyError> {
    if p < 2 {
        return Err(FamilyError::InvalidParameter(format!("mp needs p >= 2, got {p}")));
    }
    positive("q", q)?;
    Ok(mp_eq(tuple, &sigmas_of(tuple)?, p, q).is_none())
}

/// Checks `tuple` against `spec`, returning a record with σ values filled in
/// or the first violated equality.
pub fn check(spec: &FamilySpec, tuple: &[u64]) -> Result<CheckOutcome, FamilyError> {
    check_as(spec, tuple, Provenance::Found)
}

pub fn check_as(spec: &FamilySpec, tuple: &[u64], provenance: Provenance) -> Result<CheckOutcome, FamilyError> {
    spec.validate()?;
    require_len(tuple, spec.k())?;
    let sigmas = sigmas_of(tuple)?;
    let violation = match spec {
        FamilySpec::AmicablePair | FamilySpec::Dickson { .. } => dickson_eq(tuple, &sigmas),
        FamilySpec::Perfect => compare("σ(n) = 2n", big(sigmas[0]), big(2) * big(tuple[0])),
        FamilySpec::AmicableNumber => amicable_number_eq(tuple[0], true)?.0,
        FamilySpec::Yanney { .. } => yanney_eq(tuple, &sigmas),
        FamilySpec::CohenPair { alpha, beta } => {
            cohen_eq(tuple[0], tuple[1], sigmas[0], sigmas[1], *alpha, *beta)
        }
        FamilySpec::Multiamicable { alphas } => multiamicable_eq(tuple, &sigmas, alphas),
        FamilySpec::AlphaBeta { alpha, beta } => alpha_beta_eq(tuple[0], tuple[1], *alpha, *beta)?,
        FamilySpec::Pm { p, q, .. } => pm_eq(tuple, &sigmas, *p, *q),
        FamilySpec::Wpm { p, .. } => wpm_eq(tuple, &sigmas, *p),
        FamilySpec::Gm { .. } => gm_eq(tuple, &sigmas),
        FamilySpec::Wgm { .. } => wgm_eq(tuple, &sigmas)?,
        FamilySpec::Hm { p, q, .. } => hm_eq(tuple, &sigmas, *p, *q),
        FamilySpec::Whm { p, .. } => whm_eq(tuple, &sigmas, *p),
        FamilySpec::Feebly { .. } => feebly_eq(tuple, &sigmas),
        FamilySpec::Mp { p, q, .. } => mp_eq(tuple, &sigmas, *p, *q),
    };
    Ok(match violation {
        None => CheckOutcome::Member(TupleRecord {
            spec: spec.clone(),
            tuple: tuple.to_vec(),
            sigmas,
            provenance,
        }),
        Some(violation) => CheckOutcome::Mismatch(Mismatch {
            spec: spec.clone(),
            tuple: tuple.to_vec(),
            sigmas,
            violation,
        }),
    })
}

/// Predicate form of [`check`].
pub fn is_member(spec: &FamilySpec, tuple: &[u64]) -> Result<bool, FamilyError> {
    check(spec, tuple).map(|o| o.is_member())
}
