//! Dirichlet characters: canonical unit-group bases, Conrey labels, exact values,
//! conductors, and (twisted) partial sums.

use crate::arith::{euler_phi, factorize, gcd, inverse_mod, lcm, pow_mod, smallest_primitive_root};
use crate::error::{Error, Result};
use crate::sieve::DEFAULT_SIEVE_LIMIT;
use crate::summation::{sum_complex, PairwiseSum};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

const NOT_A_UNIT: u32 = u32::MAX;

/// Generators of (Z/qZ)^* in the canonical (Conrey) layout.
#[derive(Debug, Clone)]
pub struct UnitGroupBasis {
    modulus: u64,
    factors: Vec<(u64, u32)>,
    generators: Vec<u64>,
    generator_orders: Vec<u64>,
    components: Vec<LocalComponent>,
}

/// One prime-power factor with its discrete-log tables (one table per generator slot).
#[derive(Debug, Clone)]
struct LocalComponent {
    prime_power: u64,
    first_slot: usize,
    logs: Vec<Vec<u32>>,
}

impl UnitGroupBasis {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 || modulus > DEFAULT_SIEVE_LIMIT {
            return Err(Error::InvalidModulus(modulus));
        }
        let factors = factorize(modulus);
        let mut generators = Vec::new();
        let mut generator_orders = Vec::new();
        let mut components = Vec::new();

        for &(p, e) in &factors {
            let pe = p.pow(e);
            let first_slot = generators.len();
            let cofactor = modulus / pe;
            // lift a local generator g to the residue ≡ g mod p^e, ≡ 1 mod q/p^e
            let lift = |g: u64| -> u64 {
                if cofactor == 1 {
                    return g % modulus;
                }
                let inv = inverse_mod(cofactor % pe, pe).expect("coprime cofactor");
                let t = ((g + pe - 1) % pe) * inv % pe;
                (1 + cofactor * t) % modulus
            };
            let mut logs = Vec::new();
            if p == 2 {
                match e {
                    1 => {}
                    2 => {
                        generators.push(lift(3));
                        generator_orders.push(2);
                        let mut table = vec![NOT_A_UNIT; 4];
                        table[1] = 0;
                        table[3] = 1;
                        logs.push(table);
                    }
                    _ => {
                        let half_order = pe / 4;
                        generators.push(lift(pe - 1));
                        generators.push(lift(5));
                        generator_orders.push(2);
                        generator_orders.push(half_order);
                        let mut sign_table = vec![NOT_A_UNIT; pe as usize];
                        let mut five_table = vec![NOT_A_UNIT; pe as usize];
                        let mut power = 1u64;
                        for a in 0..half_order {
                            sign_table[power as usize] = 0;
                            five_table[power as usize] = a as u32;
                            let neg = (pe - power) as usize;
                            sign_table[neg] = 1;
                            five_table[neg] = a as u32;
                            power = power * 5 % pe;
                        }
                        logs.push(sign_table);
                        logs.push(five_table);
                    }
                }
            } else {
                let g = smallest_primitive_root(p, pe);
                let order = pe / p * (p - 1);
                generators.push(lift(g));
                generator_orders.push(order);
                let mut table = vec![NOT_A_UNIT; pe as usize];
                let mut power = 1u64;
                for a in 0..order {
                    table[power as usize] = a as u32;
                    power = power * g % pe;
                }
                logs.push(table);
            }
            components.push(LocalComponent {
                prime_power: pe,
                first_slot,
                logs,
            });
        }

        Ok(Self {
            modulus,
            factors,
            generators,
            generator_orders,
            components,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.generator_orders
    }

    pub fn group_order(&self) -> u64 {
        self.generator_orders.iter().product()
    }

    /// Exponent vector of `n` against the generators, or `None` if gcd(n, q) > 1.
    pub fn discrete_log(&self, n: u64) -> Option<Vec<u64>> {
        let mut out = vec![0u64; self.generators.len()];
        for comp in &self.components {
            let r = (n % comp.prime_power) as usize;
            for (k, table) in comp.logs.iter().enumerate() {
                let l = table[r];
                if l == NOT_A_UNIT {
                    return None;
                }
                out[comp.first_slot + k] = l as u64;
            }
        }
        if gcd(n % self.modulus.max(1), self.modulus) != 1 && self.modulus > 1 {
            return None;
        }
        Some(out)
    }

    /// Σ_j weights[j]·log_j(n) mod `order`, or `None` off the units.
    fn weighted_log(&self, n: u64, weights: &[u64], order: u64) -> Option<u64> {
        let mut acc: u128 = 0;
        for comp in &self.components {
            let r = (n % comp.prime_power) as usize;
            for (k, table) in comp.logs.iter().enumerate() {
                let l = table[r];
                if l == NOT_A_UNIT {
                    return None;
                }
                acc += weights[comp.first_slot + k] as u128 * l as u128;
            }
        }
        if self.modulus > 1 && self.components.iter().any(|c| c.logs.is_empty() && n % c.prime_power % 2 == 0) {
            return None;
        }
        Some((acc % order as u128) as u64)
    }
}

/// An exact character value: zero, or e(num/order).
#[derive(Debug, Clone, Copy, Serialize)]
pub enum CharValue {
    Zero,
    Root { num: u64, order: u64 },
}

impl CharValue {
    pub fn is_zero(self) -> bool {
        matches!(self, CharValue::Zero)
    }

    /// Reduced (numerator, denominator) of the angle as a fraction of a full turn.
    pub fn angle(self) -> Option<(u64, u64)> {
        match self {
            CharValue::Zero => None,
            CharValue::Root { num, order } => {
                let g = gcd(num, order);
                Some((num / g, order / g))
            }
        }
    }

    pub fn mul(self, other: CharValue) -> CharValue {
        match (self, other) {
            (CharValue::Root { num: a, order: m }, CharValue::Root { num: b, order: n }) => {
                let l = lcm(m, n);
                let num = ((a as u128 * (l / m) as u128 + b as u128 * (l / n) as u128) % l as u128) as u64;
                CharValue::Root { num, order: l }
            }
            _ => CharValue::Zero,
        }
    }

    pub fn conj(self) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root { num, order } => CharValue::Root {
                num: (order - num % order) % order,
                order,
            },
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root { num, order } => root_of_unity(num, order),
        }
    }
}

impl PartialEq for CharValue {
    fn eq(&self, other: &Self) -> bool {
        self.angle() == other.angle()
    }
}

/// e(num/order), exact at multiples of a quarter turn.
pub fn root_of_unity(num: u64, order: u64) -> Complex64 {
    let num = num % order;
    if (4 * num) % order == 0 {
        return match 4 * num / order {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    // reduce to |angle| <= π for accuracy
    let signed = if 2 * num > order {
        num as f64 - order as f64
    } else {
        num as f64
    };
    let theta = 2.0 * PI * signed / order as f64;
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

#[derive(Debug, Clone)]
pub struct Character {
    basis: Arc<UnitGroupBasis>,
    conrey: u64,
    exponents: Vec<u64>,
    weights: Vec<u64>,
    order: u64,
    parity: u8,
    conductor: u64,
}

/// Serialized form: {q, conrey, order, parity, conductor, primitive}.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CharacterSummary {
    pub q: u64,
    pub conrey: u64,
    pub order: u64,
    pub parity: u8,
    pub conductor: u64,
    pub primitive: bool,
}

impl Character {
    pub fn new(basis: Arc<UnitGroupBasis>, conrey: u64) -> Result<Self> {
        let q = basis.modulus;
        let label = conrey % q;
        let exponents = basis
            .discrete_log(label)
            .ok_or_else(|| Error::domain("Conrey label", conrey, "residues coprime to the modulus"))?;
        let mut order = 1u64;
        let mut local_orders = Vec::with_capacity(exponents.len());
        for (&e, &o) in exponents.iter().zip(&basis.generator_orders) {
            let ord = o / gcd(e, o);
            local_orders.push(ord);
            order = lcm(order, ord);
        }
        let weights = exponents
            .iter()
            .zip(&basis.generator_orders)
            .map(|(&e, &o)| {
                let g = gcd(e, o);
                ((e / g) as u128 * (order / (o / g)) as u128 % order as u128) as u64
            })
            .collect();
        let conductor = local_conductor(&basis, &exponents);
        let mut chi = Self {
            basis,
            conrey: if q == 1 { 1 } else { label },
            exponents,
            weights,
            order,
            parity: 0,
            conductor,
        };
        chi.parity = match chi.value(q.saturating_sub(1).max(1)) {
            CharValue::Root { num, order } if num % order != 0 => 1,
            _ => 0,
        };
        Ok(chi)
    }

    pub fn from_label(q: u64, conrey: u64) -> Result<Self> {
        Self::new(Arc::new(UnitGroupBasis::new(q)?), conrey)
    }

    pub fn modulus(&self) -> u64 {
        self.basis.modulus
    }

    pub fn conrey(&self) -> u64 {
        self.conrey
    }

    pub fn basis(&self) -> &Arc<UnitGroupBasis> {
        &self.basis
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// 𝔞 = (1 - χ(-1))/2.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.basis.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// (order, parity, conductor, is_primitive)
    pub fn invariants(&self) -> (u64, u8, u64, bool) {
        (self.order, self.parity, self.conductor, self.is_primitive())
    }

    pub fn summary(&self) -> CharacterSummary {
        CharacterSummary {
            q: self.modulus(),
            conrey: self.conrey,
            order: self.order,
            parity: self.parity,
            conductor: self.conductor,
            primitive: self.is_primitive(),
        }
    }

    pub fn value(&self, n: u64) -> CharValue {
        let q = self.basis.modulus;
        if q == 1 {
            return CharValue::Root { num: 0, order: 1 };
        }
        if gcd(n % q, q) != 1 {
            return CharValue::Zero;
        }
        match self.basis.weighted_log(n, &self.weights, self.order) {
            Some(num) => CharValue::Root {
                num,
                order: self.order,
            },
            None => CharValue::Zero,
        }
    }

    /// χ(n) for signed n.
    pub fn value_signed(&self, n: i64) -> CharValue {
        let q = self.modulus() as i64;
        self.value(n.rem_euclid(q) as u64)
    }

    pub fn evaluate(&self, n: u64) -> Complex64 {
        self.value(n).to_complex()
    }

    /// Angle numerators χ(n) = e(num/order) for n = 0..q, with `None` off the units.
    pub fn angle_table(&self) -> Vec<Option<u64>> {
        (0..self.modulus())
            .map(|n| match self.value(n) {
                CharValue::Zero => None,
                CharValue::Root { num, .. } => Some(num),
            })
            .collect()
    }

    /// Complex values χ(n) for n = 0..q.
    pub fn value_table(&self) -> Vec<Complex64> {
        let roots = self.roots();
        self.angle_table()
            .into_iter()
            .map(|a| a.map_or(Complex64::new(0.0, 0.0), |num| roots[num as usize]))
            .collect()
    }

    fn roots(&self) -> Vec<Complex64> {
        (0..self.order).map(|j| root_of_unity(j, self.order)).collect()
    }

    pub fn conjugate(&self) -> Character {
        let q = self.modulus();
        let inverse = inverse_mod(self.conrey % q, q).unwrap_or(1);
        Character::new(self.basis.clone(), if q == 1 { 1 } else { inverse }).expect("inverse label is a unit")
    }

    /// Product character χψ (same modulus).
    pub fn product(&self, other: &Character) -> Result<Character> {
        if self.modulus() != other.modulus() {
            return Err(Error::domain("modulus", other.modulus(), "the same modulus"));
        }
        let q = self.modulus();
        Character::new(self.basis.clone(), crate::arith::mul_mod(self.conrey, other.conrey, q))
    }

    /// Power character χ^k.
    pub fn power(&self, k: u64) -> Character {
        let q = self.modulus();
        Character::new(self.basis.clone(), pow_mod(self.conrey, k, q).max(1)).expect("powers of units are units")
    }

    /// Conductor by brute force: the least f | q with χ(n) = 1 whenever n ≡ 1 (mod f), gcd(n, q) = 1.
    pub fn conductor_brute_force(&self) -> u64 {
        let q = self.modulus();
        for f in crate::arith::divisors(q) {
            let induced = (1..=q)
                .step_by(f as usize)
                .filter(|&n| gcd(n, q) == 1)
                .all(|n| matches!(self.value(n), CharValue::Root { num: 0, .. }));
            if induced {
                return f;
            }
        }
        q
    }

    /// Gauss sum τ(χ) = Σ_a χ(a) e(a/q).
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus();
        let table = self.value_table();
        sum_complex((1..=q).map(|a| table[(a % q) as usize] * root_of_unity(a, q)))
    }
}

fn local_conductor(basis: &UnitGroupBasis, exponents: &[u64]) -> u64 {
    let mut conductor = 1u64;
    for (comp, &(p, e)) in basis.components.iter().zip(&basis.factors) {
        let slot = comp.first_slot;
        let local = if p == 2 {
            match e {
                1 => 1,
                2 => {
                    if exponents[slot] % 2 == 1 {
                        4
                    } else {
                        1
                    }
                }
                _ => {
                    let half_order = basis.generator_orders[slot + 1];
                    let a = exponents[slot + 1];
                    let ord = half_order / gcd(a, half_order);
                    if ord > 1 {
                        4 * ord
                    } else if exponents[slot] % 2 == 1 {
                        4
                    } else {
                        1
                    }
                }
            }
        } else {
            let group_order = basis.generator_orders[slot];
            let ord = group_order / gcd(exponents[slot], group_order);
            if ord == 1 {
                1
            } else {
                // p-part of the local order is p^{c-1}
                let mut c = p;
                let mut o = ord;
                while o % p == 0 {
                    o /= p;
                    c *= p;
                }
                c
            }
        };
        conductor *= local;
    }
    conductor
}

pub fn unit_group_basis(q: u64) -> Result<UnitGroupBasis> {
    UnitGroupBasis::new(q)
}

/// All φ(q) characters mod q in ascending Conrey label order.
pub fn enumerate_characters(q: u64) -> Result<Vec<Character>> {
    let basis = Arc::new(UnitGroupBasis::new(q)?);
    if q == 1 {
        return Ok(vec![Character::new(basis, 1)?]);
    }
    (1..q)
        .filter(|&m| gcd(m, q) == 1)
        .map(|m| Character::new(basis.clone(), m))
        .collect()
}

pub fn primitive_characters(q: u64) -> Result<Vec<Character>> {
    Ok(enumerate_characters(q)?
        .into_iter()
        .filter(|c| c.is_primitive())
        .collect())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PartialSum {
    pub x: f64,
    pub value: Complex64,
    pub phi: f64,
    /// x/|value| when φ = 0 and value ≠ 0.
    pub n: Option<f64>,
}

impl PartialSum {
    fn new(x: f64, value: Complex64, phi: f64) -> Self {
        let n = if phi == 0.0 && value.norm() > 0.0 {
            Some(x / value.norm())
        } else {
            None
        };
        Self { x, value, phi, n }
    }
}

/// S(x, χ) = Σ_{n ≤ x} χ(n), exact by counting values in each angle class.
pub fn partial_sum(chi: &Character, x: f64) -> PartialSum {
    let q = chi.modulus();
    let top = if x >= 1.0 { x.floor() as u64 } else { 0 };
    let angles = chi.angle_table();
    let k = chi.order() as usize;
    let mut period = vec![0u64; k];
    for a in angles.iter().skip(1).chain(angles.iter().take(1)) {
        if let Some(j) = a {
            period[*j as usize] += 1;
        }
    }
    let full = top / q;
    let rem = top % q;
    let mut counts: Vec<u128> = period.iter().map(|&c| c as u128 * full as u128).collect();
    for n in 1..=rem {
        if let Some(j) = angles[n as usize] {
            counts[j as usize] += 1;
        }
    }
    let value = sum_complex(
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(j, &c)| root_of_unity(j as u64, k as u64) * c as f64),
    );
    PartialSum::new(x, value, 0.0)
}

/// S(x, χ_φ) = Σ_{n ≤ x} χ(n) n^{-iφ}.
pub fn twisted_partial_sum(chi: &Character, phi: f64, x: f64) -> PartialSum {
    if phi == 0.0 {
        return partial_sum(chi, x);
    }
    let q = chi.modulus();
    let top = if x >= 1.0 { x.floor() as u64 } else { 0 };
    let table = chi.value_table();
    let mut acc = PairwiseSum::complex();
    for n in 1..=top {
        let v = table[(n % q) as usize];
        if v.re == 0.0 && v.im == 0.0 {
            acc.add(Complex64::new(0.0, 0.0));
            continue;
        }
        let (s, c) = (-phi * (n as f64).ln()).sin_cos();
        acc.add(v * Complex64::new(c, s));
    }
    PartialSum::new(x, acc.total(), phi)
}

/// Parse "q.conrey".
pub fn parse_label(label: &str) -> Result<(u64, u64)> {
    let (q, m) = label
        .split_once('.')
        .ok_or_else(|| Error::Parse(format!("expected <q>.<conrey>, got {label:?}")))?;
    let q = q.trim().parse().map_err(|_| Error::Parse(format!("bad modulus {q:?}")))?;
    let m = m.trim().parse().map_err(|_| Error::Parse(format!("bad Conrey label {m:?}")))?;
    Ok((q, m))
}

pub fn phi(q: u64) -> u64 {
    euler_phi(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::multiplicative_order;
    use proptest::prelude::*;

    #[test]
    fn basis_small_moduli() {
        let b5 = unit_group_basis(5).unwrap();
        assert_eq!(b5.generators(), &[2]);
        assert_eq!(b5.generator_orders(), &[4]);

        let b1 = unit_group_basis(1).unwrap();
        assert!(b1.generators().is_empty());
        assert_eq!(b1.group_order(), 1);

        let b8 = unit_group_basis(8).unwrap();
        assert_eq!(b8.generators(), &[7, 5]);
        assert_eq!(b8.generator_orders(), &[2, 2]);

        assert!(matches!(unit_group_basis(0), Err(Error::InvalidModulus(0))));
    }

    #[test]
    fn basis_invariants_up_to_500() {
        for q in 1..=500u64 {
            let b = unit_group_basis(q).unwrap();
            assert_eq!(b.group_order(), euler_phi(q), "q = {q}");
            for (&g, &o) in b.generators().iter().zip(b.generator_orders()) {
                assert_eq!(multiplicative_order(g, q, euler_phi(q)), o, "q = {q}, g = {g}");
            }
            let twos = b.factors().iter().find(|f| f.0 == 2).map_or(0, |f| f.1);
            if twos >= 3 {
                let two_slots = b.generator_orders().iter().take(2).copied().collect::<Vec<_>>();
                assert_eq!(two_slots, vec![2, 1 << (twos - 2)]);
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let c5 = enumerate_characters(5).unwrap();
        assert_eq!(c5.len(), 4);
        assert_eq!(c5.iter().filter(|c| c.is_primitive()).count(), 3);
        assert_eq!(c5[0].conrey(), 1);
        assert!(c5[0].is_principal());

        let c1 = enumerate_characters(1).unwrap();
        assert_eq!(c1.len(), 1);
        assert_eq!(c1[0].evaluate(7), Complex64::new(1.0, 0.0));

        let c12 = enumerate_characters(12).unwrap();
        assert_eq!(c12.len(), 4);
        let prim: Vec<_> = c12.iter().filter(|c| c.is_primitive()).collect();
        assert_eq!(prim.len(), 1);
        assert_eq!(prim[0].conductor(), 12);
    }

    #[test]
    fn legendre_mod_5_is_conrey_4() {
        let chi = Character::from_label(5, 4).unwrap();
        assert_eq!(chi.invariants(), (2, 0, 5, true));
        assert_eq!(chi.evaluate(2), Complex64::new(-1.0, 0.0));
        for n in 0..50u64 {
            let legendre = crate::arith::legendre_symbol(n, 5) as f64;
            assert_eq!(chi.evaluate(n), Complex64::new(legendre, 0.0));
        }
    }

    #[test]
    fn mod_4_character() {
        let chi = Character::from_label(4, 3).unwrap();
        assert_eq!(chi.invariants(), (2, 1, 4, true));
        assert_eq!(chi.evaluate(3), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn principal_characters_have_conductor_one() {
        for q in [2u64, 7, 12, 60] {
            let chi = Character::from_label(q, 1).unwrap();
            assert_eq!(chi.conductor(), 1);
            assert!(!chi.is_primitive() || q == 1);
        }
    }

    #[test]
    fn values_vanish_off_units_and_are_periodic() {
        let chi = Character::from_label(60, 7).unwrap();
        for n in 0..300u64 {
            assert_eq!(chi.value(n).is_zero(), gcd(n, 60) != 1);
            assert_eq!(chi.value(n), chi.value(n + 60));
        }
    }

    #[test]
    fn conductor_minimality_and_orthogonality_up_to_200() {
        for q in 1..=200u64 {
            for chi in enumerate_characters(q).unwrap() {
                assert_eq!(chi.conductor(), chi.conductor_brute_force(), "q={q} m={}", chi.conrey());
                if !chi.is_principal() {
                    let s = partial_sum(&chi, q as f64).value;
                    assert!(s.norm() < 1e-12, "q={q} m={} sum={s}", chi.conrey());
                }
            }
        }
    }

    #[test]
    fn order_and_power_relation() {
        for chi in enumerate_characters(63).unwrap() {
            for n in 1..63u64 {
                if gcd(n, 63) != 1 {
                    continue;
                }
                let v = chi.value(n);
                let mut acc = CharValue::Root { num: 0, order: 1 };
                for _ in 0..chi.order() {
                    acc = acc.mul(v);
                }
                assert_eq!(acc, CharValue::Root { num: 0, order: 1 });
            }
        }
    }

    #[test]
    fn conjugate_values() {
        for chi in enumerate_characters(91).unwrap() {
            let bar = chi.conjugate();
            for n in 0..91u64 {
                assert_eq!(bar.value(n), chi.value(n).conj());
            }
        }
    }

    #[test]
    fn gauss_sum_magnitude() {
        for q in [3u64, 4, 5, 7, 8, 11, 12, 13, 24, 25] {
            for chi in primitive_characters(q).unwrap() {
                let tau = chi.gauss_sum();
                assert!((tau.norm() - (q as f64).sqrt()).abs() < 1e-12, "q={q}");
            }
        }
    }

    #[test]
    fn partial_sums() {
        let chi = Character::from_label(5, 4).unwrap();
        assert_eq!(partial_sum(&chi, 3.0).value, Complex64::new(-1.0, 0.0));
        assert_eq!(partial_sum(&chi, 1.0).value, Complex64::new(1.0, 0.0));
        assert_eq!(partial_sum(&chi, 0.5).value, Complex64::new(0.0, 0.0));
        let s = partial_sum(&chi, 1e6);
        assert_eq!(s.value, Complex64::new(0.0, 0.0));
        assert_eq!(s.n, None);
        let s = partial_sum(&chi, 1e6 + 1.0);
        assert_eq!(s.n, Some(1e6 + 1.0));
    }

    #[test]
    fn twisted_sums() {
        let chi = Character::from_label(5, 4).unwrap();
        let s = twisted_partial_sum(&chi, 1.0, 3.0).value;
        let expected = Complex64::new(1.0, 0.0) - Complex64::new(0.0, -(2f64.ln())).exp()
            - Complex64::new(0.0, -(3f64.ln())).exp();
        assert!((s - expected).norm() < 1e-15);
        assert!((s.re + 0.2240).abs() < 1e-4 && (s.im - 1.5296).abs() < 1e-4);
        for x in [0.0, 7.0, 123.4] {
            let a = twisted_partial_sum(&chi, 0.0, x);
            let b = partial_sum(&chi, x);
            assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
            assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
        }
        assert_eq!(twisted_partial_sum(&chi, 0.7, 0.9).value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn partial_sum_against_direct_sum() {
        for chi in enumerate_characters(36).unwrap() {
            for x in [1.0, 17.5, 36.0, 1000.0, 12345.0] {
                let direct: Complex64 = (1..=x as u64).map(|n| chi.evaluate(n)).sum();
                let s = partial_sum(&chi, x).value;
                assert!((s - direct).norm() < 1e-9);
                assert!(s.norm() <= x + 1e-9);
            }
        }
    }

    #[test]
    fn label_parsing() {
        assert_eq!(parse_label("5.4").unwrap(), (5, 4));
        assert!(parse_label("5").is_err());
    }

    proptest! {
        #[test]
        fn complete_multiplicativity(q in 1u64..300, m in 1u64..300, a in 0u64..100_000, b in 0u64..100_000) {
            let m = (1..=q).map(|d| (m + d) % q.max(1)).find(|&c| gcd(c, q) == 1).unwrap_or(1);
            let chi = Character::from_label(q, m.max(1)).unwrap();
            prop_assert_eq!(chi.value(a * b), chi.value(a).mul(chi.value(b)));
        }
    }

    #[test]
    fn multiplicativity_ten_thousand_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        let chars: Vec<Character> = [60u64, 97, 128, 105]
            .iter()
            .flat_map(|&q| enumerate_characters(q).unwrap())
            .collect();
        for _ in 0..10_000 {
            let chi = &chars[rng.gen_range(0..chars.len())];
            let (a, b) = (rng.gen_range(0..1_000_000u64), rng.gen_range(0..1_000_000u64));
            assert_eq!(chi.value(a * b), chi.value(a).mul(chi.value(b)));
        }
    }
}
