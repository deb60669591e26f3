//! Counts of quadratic non-residues below q^{u/4}.

use crate::arith::{is_prime, legendre_symbol};
use crate::error::{Error, Result};
use crate::sieve::DEFAULT_SIEVE_LIMIT;
use crate::spectral::{spectrum_bounds, BoundMode};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Census {
    pub q: u64,
    pub u: f64,
    pub x: f64,
    pub count: u64,
    pub ratio: f64,
    /// min(δ₀, 1/4 - (log u)²)
    pub bound_coefficient: f64,
    pub bound: f64,
    pub exceeds_bound: bool,
    /// 0.4 <= count/x <= 0.6
    pub in_band: bool,
}

fn check_prime(q: u64) -> Result<()> {
    if q < 3 || !is_prime(q) {
        return Err(Error::domain("q", q, "odd primes"));
    }
    if q > DEFAULT_SIEVE_LIMIT {
        return Err(Error::Range {
            what: "census modulus",
            requested: q as f64,
            limit: DEFAULT_SIEVE_LIMIT,
        });
    }
    Ok(())
}

/// Number of n <= y with (n|q) = -1.
pub fn nonresidue_count(q: u64, y: f64) -> Result<u64> {
    check_prime(q)?;
    let top = if y >= 1.0 { y.floor() as u64 } else { 0 };
    Ok((1..=top).filter(|&n| legendre_symbol(n, q) == -1).count() as u64)
}

pub fn nonresidue_census(q: u64, u: f64) -> Result<Census> {
    check_prime(q)?;
    let bound_coefficient = spectrum_bounds(BoundMode::Cor18 { u })?;
    let x = (q as f64).powf(u / 4.0);
    let count = nonresidue_count(q, x)?;
    let bound = bound_coefficient * x;
    let ratio = count as f64 / x;
    Ok(Census {
        q,
        u,
        x,
        count,
        ratio,
        bound_coefficient,
        bound,
        exceeds_bound: count as f64 >= bound,
        in_band: (0.4..=0.6).contains(&ratio),
    })
}

pub fn next_prime(n: u64) -> u64 {
    let mut m = n.max(2);
    while !is_prime(m) {
        m += 1;
    }
    m
}

/// The first prime at or above start + step·j for j = 0..count.
pub fn census_primes(start: u64, step: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|j| next_prime(start + step * j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_period_is_half() {
        for q in [3u64, 5, 13, 101, 10007] {
            assert_eq!(nonresidue_count(q, (q - 1) as f64).unwrap(), (q - 1) / 2);
        }
    }

    #[test]
    fn bottom_of_range_has_zero_bound() {
        let c = nonresidue_census(10007, (-0.5f64).exp()).unwrap();
        assert_eq!(c.bound, 0.0);
        assert!(c.exceeds_bound);
    }

    #[test]
    fn composite_rejected() {
        assert!(nonresidue_census(10005, 1.0).is_err());
        assert!(nonresidue_census(10007, 0.5).is_err());
    }

    #[test]
    fn monotone_in_u() {
        let mut last = 0;
        for i in 0..=20 {
            let u = (-0.5f64).exp() + (1.0 - (-0.5f64).exp()) * i as f64 / 20.0;
            let c = nonresidue_census(99991, u.min(1.0)).unwrap();
            assert!(c.count >= last);
            last = c.count;
        }
    }

    #[test]
    fn deterministic_primes() {
        let ps = census_primes(10_000, 4_500, 20);
        assert_eq!(ps[0], 10007);
        assert!(ps.iter().all(|&p| p < 100_000 && is_prime(p)));
    }
}
