//! Integer and rational arithmetic: factorization, divisor sums, the σ
//! sieve, gcd/lcm of lists and ζ(s) with a certified error.

mod factor;
mod rational;
mod sieve;
mod zeta;

use num_integer::Integer;
use thiserror::Error;

pub use factor::{factorize, is_prime, Factorization};
pub use rational::Rational;
pub use sieve::{SigmaSieve, DEFAULT_SIEVE_BUDGET};
pub use zeta::{zeta_approx, zeta_estimate, ZetaEstimate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithError {
    #[error("expected a positive integer, got 0")]
    Zero,
    #[error("expected a non-empty list")]
    EmptyList,
    #[error("{0} overflows 64-bit arithmetic")]
    Overflow(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("sieve limit {limit} needs {needed} bytes, over the {budget}-byte budget")]
    SieveBudget { limit: u64, needed: u64, budget: u64 },
    #[error("zeta(s) needs s >= 2, got {0}")]
    ZetaArgument(u32),
    #[error("tolerance {0} is not attainable (must be finite and at least 1e-13)")]
    Tolerance(f64),
    #[error("malformed `{0}`: {1}")]
    Parse(String, String),
}

/// σ(n), the sum of all divisors of `n`.
pub fn sigma(n: u64) -> Result<u64, ArithError> {
    factorize(n)?.sigma()
}

/// σ(n), reading from `sieve` when it covers `n`.
pub fn sigma_with(n: u64, sieve: Option<&SigmaSieve>) -> Result<u64, ArithError> {
    match sieve {
        Some(s) => s.sigma(n),
        None => sigma(n),
    }
}

/// s(n) = σ(n) − n, the sum of proper divisors.
pub fn aliquot(n: u64) -> Result<u64, ArithError> {
    Ok(sigma(n)? - n)
}

/// σ(n)/n in lowest terms.
pub fn abundancy(n: u64) -> Result<Rational, ArithError> {
    Rational::new(sigma(n)?, n)
}

fn check_list(values: &[u64]) -> Result<(), ArithError> {
    if values.is_empty() {
        return Err(ArithError::EmptyList);
    }
    if values.contains(&0) {
        return Err(ArithError::Zero);
    }
    Ok(())
}

pub fn gcd_list(values: &[u64]) -> Result<u64, ArithError> {
    check_list(values)?;
    Ok(values.iter().fold(0, |g, &v| g.gcd(&v)))
}

/// Least common multiple; overflow is an error rather than a wrap.
pub fn lcm_list(values: &[u64]) -> Result<u64, ArithError> {
    check_list(values)?;
    values.iter().try_fold(1u64, |l, &v| {
        (l / l.gcd(&v))
            .checked_mul(v)
            .ok_or(ArithError::Overflow("lcm"))
    })
}
