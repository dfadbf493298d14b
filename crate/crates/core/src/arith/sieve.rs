use std::io::{self, Write};

use super::{factorize, ArithError};

/// Default memory ceiling for a sieve table: 2 GiB.
pub const DEFAULT_SIEVE_BUDGET: u64 = 2 << 30;

/// Precomputed σ(n) for `1 <= n <= limit`. Immutable once built and safe to
/// share between worker threads.
#[derive(Clone, Debug)]
pub struct SigmaSieve {
    // table[0] is a placeholder so that table[n] = σ(n).
    table: Vec<u64>,
}

impl SigmaSieve {
    /// Divisor-accumulation sieve under the default budget.
    pub fn build(limit: u64) -> Result<Self, ArithError> {
        Self::build_with_budget(limit, DEFAULT_SIEVE_BUDGET)
    }

    pub fn build_with_budget(limit: u64, budget: u64) -> Result<Self, ArithError> {
        if limit == 0 {
            return Err(ArithError::Zero);
        }
        let needed = limit
            .checked_add(1)
            .and_then(|len| len.checked_mul(std::mem::size_of::<u64>() as u64))
            .unwrap_or(u64::MAX);
        if needed > budget {
            return Err(ArithError::SieveBudget {
                limit,
                needed,
                budget,
            });
        }
        let len = limit as usize;
        let mut table = vec![0u64; len + 1];
        for d in 1..=len {
            let mut m = d;
            while m <= len {
                table[m] += d as u64;
                m += d;
            }
        }
        Ok(SigmaSieve { table })
    }

    pub fn limit(&self) -> u64 {
        (self.table.len() - 1) as u64
    }

    /// σ(n) when `n` is covered by the table.
    #[inline]
    pub fn get(&self, n: u64) -> Option<u64> {
        if n == 0 {
            return None;
        }
        self.table.get(n as usize).copied()
    }

    /// σ(n), falling back to factorization beyond the table.
    pub fn sigma(&self, n: u64) -> Result<u64, ArithError> {
        match self.get(n) {
            Some(s) => Ok(s),
            None => factorize(n)?.sigma(),
        }
    }

    /// s(n) = σ(n) − n.
    pub fn aliquot(&self, n: u64) -> Result<u64, ArithError> {
        Ok(self.sigma(n)? - n)
    }

    /// The table indexed directly by n; entry 0 is a placeholder.
    pub(crate) fn indexed(&self) -> &[u64] {
        &self.table
    }

    /// Entries for n = 1 ..= limit.
    pub fn values(&self) -> &[u64] {
        &self.table[1..]
    }

    /// Writes the table as CSV with header `n,sigma`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n,sigma")?;
        for (n, s) in self.table.iter().enumerate().skip(1) {
            writeln!(out, "{n},{s}")?;
        }
        Ok(())
    }
}
