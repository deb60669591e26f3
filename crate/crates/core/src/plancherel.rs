//! Gaussian-weighted integrals of twisted character sums against the matching
//! integrals of L along the line Re s = 1 - λ, computed by independent routes.

use crate::dirichlet::Character;
use crate::error::{Error, Result};
use crate::lfunction::LEvaluator;
use crate::quad::{adaptive_simpson, GaussLegendre};
use crate::special::erfc;
use crate::summation::{sum_complex, PairwiseSum};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct PlancherelCase {
    pub chi: Character,
    pub phi: f64,
    pub lambda: f64,
    pub t: f64,
    /// target for each side's truncation and quadrature error
    pub tolerance: f64,
}

impl PlancherelCase {
    pub fn new(chi: Character, phi: f64, lambda: f64, t: f64) -> Result<Self> {
        let case = Self {
            chi,
            phi,
            lambda,
            t,
            tolerance: 1e-9,
        };
        case.validate()?;
        Ok(case)
    }

    fn validate(&self) -> Result<()> {
        if self.chi.is_principal() {
            return Err(Error::domain("character", "principal", "nonprincipal characters"));
        }
        if !(0.0..=0.5).contains(&self.lambda) {
            return Err(Error::domain("λ", self.lambda, "[0, 1/2]"));
        }
        if !(self.t > 0.0) {
            return Err(Error::domain("T", self.t, "(0, ∞)"));
        }
        Ok(())
    }
}

/// ∫_{log n}^∞ e^{(λ-1)y - Ty²/2} dy in closed form.
pub fn gaussian_tail_integral(log_n: f64, lambda: f64, t: f64) -> f64 {
    let a = (1.0 - lambda) / t;
    (PI / (2.0 * t)).sqrt() * ((1.0 - lambda).powi(2) / (2.0 * t)).exp() * erfc((t / 2.0).sqrt() * (log_n + a))
}

/// √(2πT) Σ_{n>N} ∫_{log n}^∞ ... <= √(2πT) e^{λ²/(2T)} √(π/(2T)) erfc(√(T/2)(log N - λ/T)).
pub fn lhs_tail_bound(n: u64, lambda: f64, t: f64) -> f64 {
    let log_n = (n as f64).ln();
    (2.0 * PI * t).sqrt() * (lambda * lambda / (2.0 * t)).exp() * (PI / (2.0 * t)).sqrt()
        * erfc((t / 2.0).sqrt() * (log_n - lambda / t))
}

/// Smallest power-of-two-ish cutoff with tail bound below `tol`.
pub fn choose_n_max(lambda: f64, t: f64, tol: f64) -> Result<u64> {
    let limit = crate::sieve::DEFAULT_SIEVE_LIMIT;
    let mut lo = 1u64;
    let mut hi = 2u64;
    while lhs_tail_bound(hi, lambda, t) >= tol {
        lo = hi;
        hi *= 2;
        if hi > limit {
            return Err(Error::Tolerance {
                target: tol,
                achieved: lhs_tail_bound(limit, lambda, t),
            });
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if lhs_tail_bound(mid, lambda, t) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Residue-class sums W_a = Σ_{n<=N, n≡a (q)} n^{-iφ} I(n), shared by all characters mod q.
#[derive(Debug, Clone)]
pub struct PlancherelKernel {
    pub q: u64,
    pub phi: f64,
    pub lambda: f64,
    pub t: f64,
    pub n_max: u64,
    pub tail_bound: f64,
    residue_sums: Vec<Complex64>,
    abs_total: f64,
}

impl PlancherelKernel {
    pub fn new(q: u64, phi: f64, lambda: f64, t: f64, tol: f64) -> Result<Self> {
        let n_max = choose_n_max(lambda, t, tol)?;
        let mut sums: Vec<PairwiseSum<Complex64>> = (0..q).map(|_| PairwiseSum::complex()).collect();
        let mut abs_total = 0.0;
        for n in 1..=n_max {
            let ln = (n as f64).ln();
            let weight = gaussian_tail_integral(ln, lambda, t);
            abs_total += weight;
            let twist = if phi == 0.0 {
                Complex64::new(weight, 0.0)
            } else {
                Complex64::from_polar(weight, -phi * ln)
            };
            sums[(n % q) as usize].add(twist);
        }
        Ok(Self {
            q,
            phi,
            lambda,
            t,
            n_max,
            tail_bound: lhs_tail_bound(n_max, lambda, t),
            residue_sums: sums.iter().map(|s| s.total()).collect(),
            abs_total,
        })
    }

    pub fn apply(&self, chi: &Character) -> Result<LhsValue> {
        if chi.modulus() != self.q {
            return Err(Error::domain("modulus", chi.modulus(), "the kernel modulus"));
        }
        let table = chi.value_table();
        let scale = (2.0 * PI * self.t).sqrt();
        let value = sum_complex(table.iter().zip(&self.residue_sums).map(|(v, w)| v * w)) * scale;
        Ok(LhsValue {
            value,
            error_bound: self.tail_bound + 16.0 * f64::EPSILON * scale * self.abs_total,
            n_max: self.n_max,
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LhsValue {
    pub value: Complex64,
    pub error_bound: f64,
    pub n_max: u64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RhsValue {
    pub value: Complex64,
    pub error_bound: f64,
    pub xi_max: f64,
    pub evaluations: usize,
}

/// √(2πT) ∫ S(e^y, χ_φ) e^{-y} e^{λy - Ty²/2} dy via closed-form erfc terms.
pub fn lhs_gaussian_sum(case: &PlancherelCase) -> Result<LhsValue> {
    case.validate()?;
    PlancherelKernel::new(case.chi.modulus(), case.phi, case.lambda, case.t, case.tolerance)?.apply(&case.chi)
}

/// ∫ L(1-λ+iφ+iξ, χ)/(1-λ+iξ) e^{-ξ²/(2T)} dξ by adaptive Simpson on |ξ| <= 10√T.
pub fn rhs_l_integral(case: &PlancherelCase) -> Result<RhsValue> {
    rhs_l_integral_with(case, 10.0 * case.t.sqrt())
}

pub fn rhs_l_integral_with(case: &PlancherelCase, xi_max: f64) -> Result<RhsValue> {
    case.validate()?;
    let ev = LEvaluator::new(case.chi.clone());
    let sigma = 1.0 - case.lambda;
    let mut l_max = 0.0f64;
    let mut l_err = 0.0f64;
    let integrand = |xi: f64| -> Result<Complex64> {
        let l = ev.l_value(Complex64::new(sigma, case.phi + xi))?;
        l_max = l_max.max(l.value.norm());
        l_err = l_err.max(l.error_bound);
        Ok(l.value / Complex64::new(sigma, xi) * (-xi * xi / (2.0 * case.t)).exp())
    };
    let quad = adaptive_simpson(integrand, -xi_max, xi_max, case.tolerance, 40)?;
    // Gaussian tail beyond ξ_max, with |L| bounded by twice the largest value seen
    let tail = 2.0 * l_max.max(1.0) / sigma.max(xi_max) * (2.0 * PI * case.t).sqrt() * erfc(xi_max / (2.0 * case.t).sqrt());
    Ok(RhsValue {
        value: quad.value,
        error_bound: quad.error_estimate + tail + l_err * 2.0 * xi_max,
        xi_max,
        evaluations: quad.evaluations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PlancherelReport {
    pub q: u64,
    pub conrey: u64,
    pub phi: f64,
    pub lambda: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub n_max: u64,
    pub xi_max: f64,
    pub lhs_error: f64,
    pub rhs_error: f64,
}

pub fn relative_residual(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / (1.0 + lhs.norm() + rhs.norm())
}

pub fn plancherel_check(case: &PlancherelCase) -> Result<PlancherelReport> {
    let lhs = lhs_gaussian_sum(case)?;
    let rhs = rhs_l_integral(case)?;
    Ok(report(case, lhs, rhs))
}

pub fn report(case: &PlancherelCase, lhs: LhsValue, rhs: RhsValue) -> PlancherelReport {
    PlancherelReport {
        q: case.chi.modulus(),
        conrey: case.chi.conrey(),
        phi: case.phi,
        lambda: case.lambda,
        t: case.t,
        lhs: lhs.value,
        rhs: rhs.value,
        residual: relative_residual(lhs.value, rhs.value),
        n_max: lhs.n_max,
        xi_max: rhs.xi_max,
        lhs_error: lhs.error_bound,
        rhs_error: rhs.error_bound,
    }
}

/// The left side by direct quadrature of the step function S(e^y, χ_φ) e^{-y} e^{λy - Ty²/2},
/// one Gauss–Legendre panel per interval [log n, log(n+1)].
pub fn lhs_by_quadrature(case: &PlancherelCase, n_max: u64) -> Result<Complex64> {
    case.validate()?;
    let gl = GaussLegendre::new(20);
    let q = case.chi.modulus();
    let table = case.chi.value_table();
    let mut running = Complex64::new(0.0, 0.0);
    let mut acc = PairwiseSum::complex();
    for n in 1..=n_max {
        let ln = (n as f64).ln();
        running += table[(n % q) as usize] * Complex64::from_polar(1.0, -case.phi * ln);
        let a = ln;
        let b = ((n + 1) as f64).ln();
        let w = gl.integrate(a, b, |y| ((case.lambda - 1.0) * y - case.t * y * y / 2.0).exp());
        acc.add(running * w);
    }
    Ok(acc.total() * (2.0 * PI * case.t).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi3() -> Character {
        Character::from_label(3, 2).unwrap()
    }

    #[test]
    fn single_term_closed_form() {
        let (lambda, t) = (0.1, 1.0);
        let gl = GaussLegendre::new(40);
        let numeric = gl.integrate_composite(0.0, 12.0, 24, |y| ((lambda - 1.0) * y - t * y * y / 2.0).exp());
        assert!((gaussian_tail_integral(0.0, lambda, t) - numeric).abs() < 1e-14);
    }

    #[test]
    fn erfc_sum_matches_quadrature() {
        let case = PlancherelCase::new(chi3(), 0.0, 0.1, 1.0).unwrap();
        let lhs = lhs_gaussian_sum(&case).unwrap();
        let oracle = lhs_by_quadrature(&case, lhs.n_max).unwrap();
        assert!((lhs.value - oracle).norm() < 1e-8);
        assert!(lhs.error_bound < 1e-9);
    }

    #[test]
    fn identity_mod_3() {
        let case = PlancherelCase::new(chi3(), 0.0, 0.1, 1.0).unwrap();
        let r = plancherel_check(&case).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
        assert!((r.lhs - r.rhs).norm() <= 10.0 * (r.lhs_error + r.rhs_error) + 1e-9);
    }

    #[test]
    fn lambda_zero_and_twist() {
        let chi = Character::from_label(5, 2).unwrap();
        let case = PlancherelCase::new(chi, -1.7, 0.0, 0.25).unwrap();
        let r = plancherel_check(&case).unwrap();
        assert!(r.residual < 1e-6, "{r:?}");
    }

    #[test]
    fn large_t_concentrates_near_zero() {
        let a = lhs_gaussian_sum(&PlancherelCase::new(chi3(), 0.0, 0.25, 25.0).unwrap()).unwrap();
        let b = lhs_gaussian_sum(&PlancherelCase::new(chi3(), 0.0, 0.25, 100.0).unwrap()).unwrap();
        // only n = 1 matters and √(2πT)·I(1) → π/ … tends to the half-Gaussian mass π
        assert!(a.n_max <= 4 && b.n_max <= 4);
        assert!((b.value.re - PI).abs() < (a.value.re - PI).abs());
    }

    #[test]
    fn doubling_xi_max_stays_within_tail() {
        let case = PlancherelCase::new(chi3(), 0.3, 0.25, 1.0).unwrap();
        let a = rhs_l_integral(&case).unwrap();
        let b = rhs_l_integral_with(&case, 2.0 * a.xi_max).unwrap();
        assert!((a.value - b.value).norm() <= a.error_bound + b.error_bound);
    }

    #[test]
    fn conjugation() {
        let chi = Character::from_label(5, 2).unwrap();
        let a = plancherel_check(&PlancherelCase::new(chi.clone(), 0.3, 0.1, 1.0).unwrap()).unwrap();
        let b = plancherel_check(&PlancherelCase::new(chi.conjugate(), -0.3, 0.1, 1.0).unwrap()).unwrap();
        assert!((a.lhs.conj() - b.lhs).norm() < 1e-12);
        assert!((a.rhs.conj() - b.rhs).norm() < 1e-8);
    }

    #[test]
    fn rejects_bad_cases() {
        assert!(PlancherelCase::new(Character::from_label(5, 1).unwrap(), 0.0, 0.1, 1.0).is_err());
        assert!(PlancherelCase::new(chi3(), 0.0, 0.7, 1.0).is_err());
    }
}
