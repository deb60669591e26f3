//! Prime sieves and prime-indexed tables.

use crate::error::{Error, Result};

/// Default upper limit for prime generation.
pub const DEFAULT_SIEVE_LIMIT: u64 = 100_000_000;

const SEGMENT: usize = 1 << 18;

/// All primes `p <= limit`, by a segmented sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root);
    let mut primes = Vec::with_capacity(estimate_prime_count(limit));
    let mut segment = vec![true; SEGMENT];
    let mut low = 2u64;
    while low <= limit {
        let high = (low + SEGMENT as u64 - 1).min(limit);
        let len = (high - low + 1) as usize;
        segment[..len].fill(true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let mut start = (low.div_ceil(p) * p).max(p * p);
            while start <= high {
                segment[(start - low) as usize] = false;
                start += p;
            }
        }
        primes.extend(
            segment[..len]
                .iter()
                .enumerate()
                .filter(|(_, &is_prime)| is_prime)
                .map(|(i, _)| low + i as u64),
        );
        low = high + 1;
    }
    primes
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn estimate_prime_count(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize
}

/// Primes up to `limit` together with a smallest-prime-factor table, for
/// factoring and for extending prime values multiplicatively.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    smallest_factor: Vec<u32>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > DEFAULT_SIEVE_LIMIT {
            return Err(Error::Range {
                what: "prime table limit",
                requested: limit as f64,
                limit: DEFAULT_SIEVE_LIMIT,
            });
        }
        let n = limit as usize;
        let mut smallest_factor = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if smallest_factor[i] == 0 {
                smallest_factor[i] = i as u32;
                primes.push(i as u64);
            }
            let spf = smallest_factor[i];
            for &p in &primes {
                let m = i * p as usize;
                if p as u32 > spf || m > n {
                    break;
                }
                smallest_factor[m] = p as u32;
            }
        }
        Ok(Self {
            limit,
            primes,
            smallest_factor,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of primes `<= x`.
    pub fn prime_count(&self, x: f64) -> usize {
        if x < 2.0 {
            return 0;
        }
        let bound = x.floor() as u64;
        self.primes.partition_point(|&p| p <= bound)
    }

    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    pub fn smallest_factor(&self, n: u64) -> u64 {
        self.smallest_factor[n as usize] as u64
    }

    pub fn check(&self, what: &'static str, x: f64) -> Result<()> {
        if x > self.limit as f64 {
            Err(Error::Range {
                what,
                requested: x,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// Λ(n) for 0 <= n <= limit (Λ(0) = Λ(1) = 0).
pub fn von_mangoldt_table(limit: u64) -> Vec<f64> {
    let mut table = vec![0.0f64; limit as usize + 1];
    for p in primes_up_to(limit) {
        let log_p = (p as f64).ln();
        let mut pk = p;
        loop {
            table[pk as usize] = log_p;
            match pk.checked_mul(p) {
                Some(next) if next <= limit => pk = next,
                _ => break,
            }
        }
    }
    table
}
