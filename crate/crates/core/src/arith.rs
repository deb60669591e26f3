//! Elementary integer arithmetic used throughout the crate.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Prime factorization by trial division, primes in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    if n <= 1 {
        return factors;
    }
    for p in [2u64, 3] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    let mut d = 5u64;
    while d * d <= n {
        for p in [d, d + 2] {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
        }
        d += 6;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let current = divs.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let f = factorize(n);
    f.len() == 1 && f[0].1 == 1
}

/// Multiplicative order of `a` modulo `m`, given the factorization of the group order.
pub fn multiplicative_order(a: u64, m: u64, group_order: u64) -> u64 {
    let mut order = group_order;
    for (p, _) in factorize(group_order) {
        while order % p == 0 && pow_mod(a, order / p, m) == 1 {
            order /= p;
        }
    }
    order
}

/// Smallest primitive root modulo an odd prime power.
pub fn smallest_primitive_root(prime: u64, prime_power: u64) -> u64 {
    let group_order = prime_power / prime * (prime - 1);
    let primes_of_order: Vec<u64> = factorize(group_order).iter().map(|f| f.0).collect();
    (2..prime_power)
        .find(|&g| {
            g % prime != 0
                && primes_of_order
                    .iter()
                    .all(|&r| pow_mod(g, group_order / r, prime_power) != 1)
        })
        .unwrap_or(1)
}

/// Legendre symbol (a | p) for an odd prime p, via the Jacobi reciprocity algorithm.
pub fn legendre_symbol(a: u64, p: u64) -> i8 {
    let mut a = a % p;
    let mut n = p;
    let mut sign = 1i8;
    if a == 0 {
        return 0;
    }
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_and_phi() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(9_999_991), vec![(9_999_991, 1)]);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(60), 16);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(smallest_primitive_root(5, 5), 2);
        assert_eq!(smallest_primitive_root(7, 7), 3);
        assert_eq!(smallest_primitive_root(3, 9), 2);
        assert_eq!(smallest_primitive_root(13, 13), 2);
        assert_eq!(smallest_primitive_root(29, 841), 2);
    }

    #[test]
    fn legendre_matches_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 101, 10007] {
            for a in 0..200u64 {
                let euler = pow_mod(a, (p - 1) / 2, p);
                let expected = match euler {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(legendre_symbol(a, p), expected, "({a}|{p})");
            }
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(inverse_mod(3, 7), Some(5));
        assert_eq!(inverse_mod(2, 4), None);
        assert_eq!(inverse_mod(5, 1), Some(0));
    }
}
