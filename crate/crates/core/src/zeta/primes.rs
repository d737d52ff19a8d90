//! Prime counting by an odd-only sieve of Eratosthenes.

use crate::error::{Error, Result};

/// Default upper limit of the sieve.
pub const DEFAULT_SIEVE_BUDGET: f64 = 1e8;

/// Primality of all numbers up to `limit`, with per-word prefix counts so
/// that `π(x)` is a constant-time lookup. Immutable once built.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    /// bit `i` set ⇔ `2i + 1` is prime
    odd: Vec<u64>,
    /// number of odd primes in words `0..w`
    prefix: Vec<u32>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let n_odd = (limit / 2 + 1) as usize; // odd numbers 1, 3, …, ≤ limit (+1 slack)
        let words = n_odd.div_ceil(64);
        let mut odd = vec![!0u64; words];
        // 1 is not prime
        odd[0] &= !1;
        // clear bits past the limit
        let valid = if limit % 2 == 1 {
            limit / 2 + 1
        } else {
            limit / 2
        } as usize;
        for i in valid..words * 64 {
            odd[i / 64] &= !(1u64 << (i % 64));
        }
        let mut p = 3u64;
        while p * p <= limit {
            let i = (p / 2) as usize;
            if odd[i / 64] >> (i % 64) & 1 == 1 {
                let mut m = p * p;
                while m <= limit {
                    let j = (m / 2) as usize;
                    odd[j / 64] &= !(1u64 << (j % 64));
                    m += 2 * p;
                }
            }
            p += 2;
        }
        let mut prefix = Vec::with_capacity(words + 1);
        let mut acc = 0u32;
        prefix.push(0);
        for w in &odd {
            acc += w.count_ones();
            prefix.push(acc);
        }
        PrimeTable { limit, odd, prefix }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `π(x)`, the number of primes `≤ x`.
    pub fn pi(&self, x: f64) -> Result<u64> {
        if !(x >= 0.0) {
            return Err(Error::domain("prime_pi", x, "x >= 0"));
        }
        let n = x.floor();
        if n > self.limit as f64 {
            return Err(Error::Budget {
                what: "prime_pi argument",
                requested: x,
                budget: self.limit as f64,
            });
        }
        let n = n as u64;
        if n < 2 {
            return Ok(0);
        }
        // odd numbers ≤ n have indices 0..=(n−1)/2
        let last = ((n - 1) / 2) as usize;
        let w = last / 64;
        let bits = last % 64;
        let mask = if bits == 63 {
            !0
        } else {
            (1u64 << (bits + 1)) - 1
        };
        let odd_primes = self.prefix[w] as u64 + (self.odd[w] & mask).count_ones() as u64;
        Ok(odd_primes + 1)
    }
}

/// `π(x)` with a freshly built sieve; errors above [`DEFAULT_SIEVE_BUDGET`].
pub fn prime_pi(x: f64) -> Result<u64> {
    if !(x >= 0.0) {
        return Err(Error::domain("prime_pi", x, "x >= 0"));
    }
    if x > DEFAULT_SIEVE_BUDGET {
        return Err(Error::Budget {
            what: "prime_pi argument",
            requested: x,
            budget: DEFAULT_SIEVE_BUDGET,
        });
    }
    PrimeTable::new(x.floor().max(2.0) as u64).pi(x)
}
