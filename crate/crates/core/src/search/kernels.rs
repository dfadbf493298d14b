//! Leaf tests for the tuple scans.
//!
//! These are written independently of the predicates in `families`: the
//! rational equations are cleared of denominators and evaluated in checked
//! `u128` first, falling back to `BigUint` only when a value overflows.

use num_bigint::BigUint;
use num_traits::Pow;

use crate::arith::factorize;

pub(crate) trait Exact: Sized + PartialEq {
    fn from_u64(v: u64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn pow(&self, e: u32) -> Option<Self>;
}

impl Exact for u128 {
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn pow(&self, e: u32) -> Option<Self> {
        self.checked_pow(e)
    }
}

impl Exact for BigUint {
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn pow(&self, e: u32) -> Option<Self> {
        Some(Pow::pow(self, e))
    }
}

fn sum<T: Exact>(vals: impl IntoIterator<Item = Option<T>>) -> Option<T> {
    vals.into_iter().try_fold(T::from_u64(0), |acc, v| acc.add(&v?))
}

fn product<T: Exact>(vals: impl IntoIterator<Item = Option<T>>) -> Option<T> {
    vals.into_iter().try_fold(T::from_u64(1), |acc, v| acc.mul(&v?))
}

fn tuple_sum<T: Exact>(ns: &[u64]) -> Option<T> {
    sum(ns.iter().map(|&n| Some(T::from_u64(n))))
}

/// Which equation a leaf is tested against.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Equation {
    Pm { p: u32, q: u64 },
    Wpm { p: u32 },
    Gm,
    Hm { p: u32, q: u64 },
    Whm { p: u32 },
    Feebly,
    Mp { p: u32, q: u64 },
}

impl Equation {
    fn eval<T: Exact>(self, ns: &[u64], sig: &[u64]) -> Option<bool> {
        let s = tuple_sum::<T>(ns)?;
        let k = ns.len();
        Some(match self {
            Equation::Pm { p, q } => {
                let lhs = sum(sig.iter().map(|&x| T::from_u64(x).pow(p)))?;
                lhs == T::from_u64(q).mul(&s.pow(p)?)?
            }
            Equation::Wpm { p } => {
                let lhs = sum(ns.iter().zip(sig).map(|(&n, &x)| T::from_u64(x).pow(p)?.mul(&T::from_u64(n))))?;
                lhs == s.pow(p + 1)?
            }
            Equation::Gm => product(sig.iter().map(|&x| Some(T::from_u64(x))))? == s.pow(k as u32)?,
            Equation::Hm { p, q } => {
                // S^p · Σ_i Π_{j≠i} σj^p = q · Π σj^p
                let cross = sum((0..k).map(|i| {
                    product(sig.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| T::from_u64(x).pow(p)))
                }))?;
                let all = product(sig.iter().map(|&x| T::from_u64(x).pow(p)))?;
                s.pow(p)?.mul(&cross)? == T::from_u64(q).mul(&all)?
            }
            Equation::Whm { p } => {
                // S^p · Σ_i ni^p Π_{j≠i} σj^p = (Σ ni^p) · Π σj^p
                let cross = sum((0..k).map(|i| {
                    let others = product(
                        sig.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| T::from_u64(x).pow(p)),
                    )?;
                    T::from_u64(ns[i]).pow(p)?.mul(&others)
                }))?;
                let all = product(sig.iter().map(|&x| T::from_u64(x).pow(p)))?;
                let npow = sum(ns.iter().map(|&n| T::from_u64(n).pow(p)))?;
                s.pow(p)?.mul(&cross)? == npow.mul(&all)?
            }
            Equation::Feebly => {
                // Σ_i ni Π_{j≠i} σj = Π σj
                let cross = sum((0..k).map(|i| {
                    let others =
                        product(sig.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| Some(T::from_u64(x))))?;
                    T::from_u64(ns[i]).mul(&others)
                }))?;
                cross == product(sig.iter().map(|&x| Some(T::from_u64(x))))?
            }
            Equation::Mp { p, q } => {
                let lhs = sum(sig.iter().map(|&x| T::from_u64(x).pow(p)))?;
                let npow = sum(ns.iter().map(|&n| T::from_u64(n).pow(p)))?;
                lhs == T::from_u64(q).mul(&npow)?
            }
        })
    }

    pub(crate) fn accepts(self, ns: &[u64], sig: &[u64]) -> bool {
        match self.eval::<u128>(ns, sig) {
            Some(v) => v,
            None => self.eval::<BigUint>(ns, sig).expect("big integers do not overflow"),
        }
    }
}

/// Π σ(ni)^ni = S^S. A logarithmic comparison rejects almost every
/// candidate; survivors are settled by stripping the primes of S out of
/// each σ(ni) and comparing exponent counts.
pub(crate) fn wgm_accepts(ns: &[u64], sig: &[u64]) -> bool {
    let s: u64 = ns.iter().sum();
    let lhs_log: f64 = ns.iter().zip(sig).map(|(&n, &x)| n as f64 * (x as f64).ln()).sum();
    let rhs_log = s as f64 * (s as f64).ln();
    if (lhs_log - rhs_log).abs() > 1e-10 * (rhs_log.abs() + 1.0) {
        return false;
    }
    let Ok(fs) = factorize(s) else { return false };
    let mut counts = vec![0u128; fs.factors().len()];
    for (&n, &x) in ns.iter().zip(sig) {
        let mut rest = x;
        for (slot, &(p, _)) in counts.iter_mut().zip(fs.factors()) {
            while rest % p == 0 {
                rest /= p;
                *slot += n as u128;
            }
        }
        if rest != 1 {
            return false;
        }
    }
    counts
        .iter()
        .zip(fs.factors())
        .all(|(&c, &(_, e))| c == s as u128 * e as u128)
}
