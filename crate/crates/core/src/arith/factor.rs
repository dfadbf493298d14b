//! Prime factorization by trial division, backed by a deterministic
//! Miller–Rabin test.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::ArithError;

/// Witness set that makes Miller–Rabin deterministic for every `u64`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime-power decomposition of a positive integer.
///
/// Primes are strictly increasing and every exponent is at least one, so
/// two factorizations are equal exactly when their values are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs in any order.
    /// Repeated primes are merged; zero exponents are dropped.
    pub fn from_prime_powers<I>(powers: I) -> Result<Self, ArithError>
    where
        I: IntoIterator<Item = (u64, u32)>,
    {
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for (p, e) in powers {
            if !is_prime(p) {
                return Err(ArithError::NotPrime(p));
            }
            if e == 0 {
                continue;
            }
            factors.push((p, e));
        }
        factors.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        let mut value: u64 = 1;
        for &(p, e) in &merged {
            let pe = p.checked_pow(e).ok_or(ArithError::Overflow("prime power"))?;
            value = value
                .checked_mul(pe)
                .ok_or(ArithError::Overflow("factored value"))?;
        }
        Ok(Factorization {
            value,
            factors: merged,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Exponent of `p` in the value (zero when `p` does not divide it).
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// σ(n) = Π (1 + p + … + pᵉ), with checked arithmetic.
    pub fn sigma(&self) -> Result<u64, ArithError> {
        let mut total: u64 = 1;
        for &(p, e) in &self.factors {
            let mut term: u64 = 1;
            let mut pk: u64 = 1;
            for _ in 0..e {
                pk = pk.checked_mul(p).ok_or(ArithError::Overflow("sigma"))?;
                term = term.checked_add(pk).ok_or(ArithError::Overflow("sigma"))?;
            }
            total = total
                .checked_mul(term)
                .ok_or(ArithError::Overflow("sigma"))?;
        }
        Ok(total)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Parses products of prime powers such as `2^3*13`, `2^2*3^2*5*41` or a
/// plain `1`. A `·` is accepted in place of `*`.
impl FromStr for Factorization {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| ArithError::Parse(s.to_string(), why.to_string());
        let body = s.trim();
        if body.is_empty() {
            return Err(bad("empty"));
        }
        if body == "1" {
            return Ok(Factorization {
                value: 1,
                factors: Vec::new(),
            });
        }
        let mut powers = Vec::new();
        for part in body.split(['*', '·']) {
            let part = part.trim();
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim()),
                None => (part, "1"),
            };
            let p: u64 = base.parse().map_err(|_| bad("base is not an integer"))?;
            let e: u32 = exp
                .parse()
                .map_err(|_| bad("exponent is not an integer"))?;
            if !is_prime(p) {
                return Err(bad(&format!("{p} is not prime")));
            }
            powers.push((p, e));
        }
        Factorization::from_prime_powers(powers)
    }
}

/// Factors `n` by trial division over 2, 3 and 6k ± 1, stopping early once
/// the unfactored part is prime.
pub fn factorize(n: u64) -> Result<Factorization, ArithError> {
    if n == 0 {
        return Err(ArithError::Zero);
    }
    let mut rest = n;
    let mut factors = Vec::new();
    for p in [2u64, 3] {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    let mut p: u64 = 5;
    let mut step = 2;
    // Above this size a Miller–Rabin call is cheaper than the remaining divisions.
    const PRIMALITY_SHORTCUT: u64 = 1 << 24;
    let mut check_prime = rest >= PRIMALITY_SHORTCUT;
    while rest > 1 {
        if p.checked_mul(p).is_none_or(|sq| sq > rest) {
            break;
        }
        if check_prime && is_prime(rest) {
            break;
        }
        check_prime = false;
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
            check_prime = rest >= PRIMALITY_SHORTCUT;
        }
        p += step;
        step = 6 - step;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { value: n, factors })
}
