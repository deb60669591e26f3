//! Dirichlet L-functions through the Hurwitz zeta function and Euler–Maclaurin
//! summation, the completed function ξ(s, χ), and logarithmic-derivative balances.

use crate::dirichlet::Character;
use crate::error::{Error, Result};
use crate::sieve::{von_mangoldt_table, PrimeTable};
use crate::special::{bernoulli_over_factorial, digamma, ln_gamma};
use crate::summation::{sum_f64, PairwiseSum};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

const EPS: f64 = f64::EPSILON;

/// Euler–Maclaurin parameters. `shift_terms = None` picks N = max(50, ⌈2|Im s|⌉).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HurwitzParams {
    pub shift_terms: Option<usize>,
    pub bernoulli_terms: usize,
    pub target_abs_error: f64,
}

impl Default for HurwitzParams {
    fn default() -> Self {
        Self {
            shift_terms: None,
            bernoulli_terms: 20,
            target_abs_error: 1e-12,
        }
    }
}

impl HurwitzParams {
    pub fn shift_for(&self, im: f64) -> usize {
        self.shift_terms.unwrap_or_else(|| 50usize.max((2.0 * im.abs()).ceil() as usize))
    }

    fn validate(&self) -> Result<()> {
        if self.bernoulli_terms == 0 || self.bernoulli_terms > 30 {
            return Err(Error::domain("Bernoulli terms", self.bernoulli_terms, "1..=30"));
        }
        if self.shift_terms == Some(0) {
            return Err(Error::domain("shift terms", 0, "positive integers"));
        }
        Ok(())
    }
}

/// Rectangle {σ_min <= Re s <= σ_max, |Im s| <= t_max} where evaluation is supported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_max: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self {
            sigma_min: -1.0,
            sigma_max: 3.0,
            t_max: 50.0,
        }
    }
}

impl Window {
    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_min - 1e-12 && s.re <= self.sigma_max + 1e-12 && s.im.abs() <= self.t_max + 1e-12
    }

    pub fn check(&self, s: Complex64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::Window { re: s.re, im: s.im })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluated {
    pub value: Complex64,
    pub error_bound: f64,
}

/// (w^{1-s} - 1)/(s - 1), stable near s = 1.
fn pole_difference(w: f64, s: Complex64) -> Complex64 {
    let lw = w.ln();
    let u = (Complex64::new(1.0, 0.0) - s) * lw;
    let ratio = if u.norm() < 1e-4 {
        Complex64::new(1.0, 0.0) + u / 2.0 + u * u / 6.0 + u * u * u / 24.0
    } else {
        let em = Complex64::new(
            libm::expm1(u.re) * u.im.cos() - 2.0 * (0.5 * u.im).sin().powi(2),
            u.re.exp() * u.im.sin(),
        );
        em / u
    };
    -lw * ratio
}

/// Correction Σ_{k=1}^{B} c_k (s)_{2k-1} w^{-2k+1} (to be multiplied by w^{-s}),
/// the bound multiplier |c_{B+1} (s)_{2B+1}| |s+2B+1|/(σ+2B+1) (times w^{-σ-2B-1}),
/// and Σ |terms| for rounding control.
struct Corrections {
    /// (s)_{2k-1} c_k for k = 1..=B
    coeffs: Vec<Complex64>,
    tail_coeff: f64,
}

impl Corrections {
    fn new(s: Complex64, b: usize) -> Self {
        let table = bernoulli_over_factorial();
        let mut coeffs = Vec::with_capacity(b);
        let mut poch = s;
        for k in 1..=b {
            coeffs.push(poch * table[k]);
            // (s)_{2k+1} = (s)_{2k-1} (s + 2k - 1)(s + 2k)
            poch = poch * (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
        }
        let tail_coeff = (poch * table[b + 1]).norm() * (s + (2 * b + 1) as f64).norm() / (s.re + (2 * b + 1) as f64);
        Self { coeffs, tail_coeff }
    }

    /// Σ_k coeffs[k] w^{-2k+1}
    fn series(&self, w: f64) -> (Complex64, f64) {
        let inv = 1.0 / w;
        let inv2 = inv * inv;
        let mut p = inv;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for c in &self.coeffs {
            let term = c * p;
            acc += term;
            abs += term.norm();
            p *= inv2;
        }
        (acc, abs)
    }
}

/// ζ(s, a) = Σ_{n>=0} (n+a)^{-s}, continued by Euler–Maclaurin.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Evaluated> {
    hurwitz_zeta_with(s, a, &HurwitzParams::default())
}

pub fn hurwitz_zeta_with(s: Complex64, a: f64, params: &HurwitzParams) -> Result<Evaluated> {
    params.validate()?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain("Hurwitz shift a", a, "(0, 1]"));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("ζ(s, a) at s = 1".into()));
    }
    let b = params.bernoulli_terms;
    if s.re + (2 * b + 1) as f64 <= 0.0 {
        return Err(Error::domain("Re s", s.re, "Re s > -(2B+1)"));
    }
    let n = params.shift_for(s.im);
    let mut acc = PairwiseSum::complex();
    let mut abs = 0.0;
    for k in 0..n {
        let term = (-s * (k as f64 + a).ln()).exp();
        abs += term.norm();
        acc.add(term);
    }
    let w = n as f64 + a;
    let w_s = (-s * w.ln()).exp();
    let corr = Corrections::new(s, b);
    let (series, series_abs) = corr.series(w);
    let pole = pole_difference(w, s) + 1.0 / (s - 1.0);
    let value = acc.total() + pole + w_s * (0.5 + series);
    let truncation = corr.tail_coeff * w.powf(-s.re - (2 * b + 1) as f64);
    let rounding = 8.0 * EPS * (abs + pole.norm() + w_s.norm() * (0.5 + series_abs));
    Ok(Evaluated {
        value,
        error_bound: truncation + rounding,
    })
}

/// Evaluator for L(s, χ) = Σ_a χ(a) Σ_{n>=0} (nq + a)^{-s} on a window.
#[derive(Debug, Clone)]
pub struct LEvaluator {
    chi: Character,
    params: HurwitzParams,
    window: Window,
    /// (a, χ(a)) over units a in [1, q]
    units: Vec<(u64, Complex64)>,
    log_q_over_pi: f64,
}

impl LEvaluator {
    pub fn new(chi: Character) -> Self {
        Self::with(chi, HurwitzParams::default(), Window::default())
    }

    pub fn with(chi: Character, params: HurwitzParams, window: Window) -> Self {
        let q = chi.modulus();
        let table = chi.value_table();
        let units = (1..=q)
            .map(|a| (a, table[(a % q) as usize]))
            .filter(|(_, v)| v.norm() > 0.0)
            .collect();
        let log_q_over_pi = (q as f64 / PI).ln();
        Self {
            chi,
            params,
            window,
            units,
            log_q_over_pi,
        }
    }

    pub fn character(&self) -> &Character {
        &self.chi
    }

    pub fn params(&self) -> &HurwitzParams {
        &self.params
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn with_params(&self, params: HurwitzParams) -> Self {
        Self { params, ..self.clone() }
    }

    pub fn l_value(&self, s: Complex64) -> Result<Evaluated> {
        self.window.check(s)?;
        Ok(self.row(s.re, s.im, 0.0, 1)?[0])
    }

    /// L(σ + i(t0 + jh)) for j in 0..count, sharing rotations across the row.
    pub fn l_row(&self, sigma: f64, t0: f64, h: f64, count: usize) -> Result<Vec<Evaluated>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let t_end = t0 + h * (count - 1) as f64;
        self.window.check(Complex64::new(sigma, t0))?;
        self.window.check(Complex64::new(sigma, t_end))?;
        self.row(sigma, t0, h, count)
    }

    fn row(&self, sigma: f64, t0: f64, h: f64, count: usize) -> Result<Vec<Evaluated>> {
        self.params.validate()?;
        let q = self.chi.modulus();
        let qf = q as f64;
        let principal = self.chi.is_principal();
        let t_end = t0 + h * (count.max(1) - 1) as f64;
        let n = self.params.shift_for(t0.abs().max(t_end.abs()));
        let b = self.params.bernoulli_terms;
        if sigma + (2 * b + 1) as f64 <= 0.0 {
            return Err(Error::domain("Re s", sigma, "Re s > -(2B+1)"));
        }

        // main sum over m = kq + a < Nq with rotating phases
        let mut amps = Vec::with_capacity(n * self.units.len());
        let mut logs = Vec::with_capacity(n * self.units.len());
        for k in 0..n {
            for &(a, v) in &self.units {
                let m = (k as u64 * q + a) as f64;
                let lm = m.ln();
                amps.push(v * (-sigma * lm).exp());
                logs.push(lm);
            }
        }
        let abs_main: f64 = amps.iter().map(|a| a.norm()).sum();
        let rot: Vec<Complex64> = logs.iter().map(|&l| Complex64::from_polar(1.0, -h * l)).collect();
        let mut phases: Vec<Complex64> = Vec::new();

        // tail data for each unit a: w = N + a/q, base Nq + a
        let tails: Vec<(f64, f64, Complex64)> = self
            .units
            .iter()
            .map(|&(a, v)| (n as f64 + a as f64 / qf, (n as u64 * q + a) as f64, v))
            .collect();

        const RESEED: usize = 128;
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            let t = t0 + h * j as f64;
            let s = Complex64::new(sigma, t);
            if principal && (s - 1.0).norm() == 0.0 {
                return Err(Error::Pole("L(s, χ₀) at s = 1".into()));
            }
            if j % RESEED == 0 {
                phases = logs.iter().map(|&l| Complex64::from_polar(1.0, -t * l)).collect();
            }
            let mut main = PairwiseSum::complex();
            for ((a, p), r) in amps.iter().zip(phases.iter_mut()).zip(&rot) {
                main.add(a * *p);
                *p *= r;
            }

            let corr = Corrections::new(s, b);
            let q_s = (-s * qf.ln()).exp();
            let near_pole = (s - 1.0).norm() < 0.1;
            let mut tail = PairwiseSum::complex();
            let mut tail_abs = 0.0;
            let mut truncation = 0.0;
            for &(w, base, v) in &tails {
                let base_s = (-s * base.ln()).exp(); // (Nq + a)^{-s} = q^{-s} w^{-s}
                let (series, series_abs) = corr.series(w);
                let pole = if near_pole {
                    q_s * pole_difference(w, s)
                } else {
                    base_s * w / (s - 1.0)
                };
                let term = v * (base_s * (0.5 + series) + pole);
                tail_abs += base_s.norm() * (0.5 + series_abs) + pole.norm();
                truncation += corr.tail_coeff * qf.powf(-sigma) * w.powf(-sigma - (2 * b + 1) as f64);
                tail.add(term);
            }
            let mut value = main.total() + tail.total();
            if near_pole && principal {
                // Σ_a χ₀(a) q^{-s}/(s-1)
                value += q_s * self.units.len() as f64 / (s - 1.0);
            }
            let rounding = 8.0 * EPS * (abs_main + tail_abs);
            out.push(Evaluated {
                value,
                error_bound: truncation + rounding,
            });
        }
        Ok(out)
    }

    /// log of (q/π)^{(s+𝔞)/2} Γ((s+𝔞)/2).
    pub fn log_gamma_factor(&self, s: Complex64) -> Complex64 {
        let z = (s + self.chi.parity() as f64) / 2.0;
        z * self.log_q_over_pi + ln_gamma(z)
    }

    pub fn xi_from_l(&self, s: Complex64, l: Complex64) -> Complex64 {
        self.log_gamma_factor(s).exp() * l
    }

    /// ξ(s, χ) = (q/π)^{(s+𝔞)/2} Γ((s+𝔞)/2) L(s, χ) for primitive nonprincipal χ.
    ///
    /// Near s = -𝔞, where the Γ pole meets the trivial zero, ξ is taken as its mean
    /// over a small circle (ξ is entire there).
    pub fn xi_value(&self, s: Complex64) -> Result<Complex64> {
        self.require_primitive()?;
        let pole = Complex64::new(-(self.chi.parity() as f64), 0.0);
        if (s - pole).norm() < 0.02 {
            const POINTS: usize = 32;
            let radius = 0.1;
            let mut acc = PairwiseSum::complex();
            for j in 0..POINTS {
                let w = s + Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / POINTS as f64);
                let l = self.row(w.re, w.im, 0.0, 1)?[0].value;
                acc.add(self.xi_from_l(w, l));
            }
            self.window.check(s)?;
            return Ok(acc.total() / POINTS as f64);
        }
        let l = self.l_value(s)?;
        Ok(self.xi_from_l(s, l.value))
    }

    pub fn require_primitive(&self) -> Result<()> {
        if !self.chi.is_primitive() {
            return Err(Error::domain("character", self.label(), "primitive characters"));
        }
        if self.chi.is_principal() {
            return Err(Error::domain("character", self.label(), "nonprincipal characters"));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!("{}.{}", self.chi.modulus(), self.chi.conrey())
    }

    /// L'(s)/L(s) by a central difference of step 1e-5.
    pub fn log_derivative(&self, s: Complex64) -> Result<Complex64> {
        let h = 1e-5;
        let l = self.l_value(s)?.value;
        let plus = self.l_value(s + h)?.value;
        let minus = self.l_value(s - h)?.value;
        Ok((plus - minus) / (2.0 * h) / l)
    }
}

pub fn l_value(chi: &Character, s: Complex64) -> Result<Evaluated> {
    LEvaluator::new(chi.clone()).l_value(s)
}

pub fn xi_value(chi: &Character, s: Complex64) -> Result<Complex64> {
    LEvaluator::new(chi.clone()).xi_value(s)
}

/// Σ_{n<=n_max} χ(n) n^{-s} with tail bound n_max^{1-σ}/(σ-1), for Re s > 1.
pub fn dirichlet_series(chi: &Character, s: Complex64, n_max: u64) -> Result<Evaluated> {
    if s.re <= 1.0 {
        return Err(Error::domain("Re s", s.re, "(1, ∞)"));
    }
    let q = chi.modulus();
    let table = chi.value_table();
    let mut acc = PairwiseSum::complex();
    let mut abs = 0.0;
    for n in 1..=n_max {
        let v = table[(n % q) as usize];
        if v.norm() == 0.0 {
            continue;
        }
        let term = v * (-s * (n as f64).ln()).exp();
        abs += term.norm();
        acc.add(term);
    }
    Ok(Evaluated {
        value: acc.total(),
        error_bound: (n_max as f64).powf(1.0 - s.re) / (s.re - 1.0) + 8.0 * EPS * abs,
    })
}

/// A nontrivial zero ρ = β + iγ used in explicit-formula sums.
pub trait ZeroLike {
    fn rho(&self) -> Complex64;
}

impl ZeroLike for Complex64 {
    fn rho(&self) -> Complex64 {
        *self
    }
}

/// Closed-form ∫_{d}^{∞} (log q + log(A + v)) / v² dv with A = 2 + |t|.
pub fn zero_density_tail_integral(q: f64, t: f64, d: f64) -> f64 {
    let a = 2.0 + t.abs();
    (q.ln() + (a + d).ln()) / d + ((a + d) / d).ln() / a
}

/// Estimate of Σ over zeros with |γ| > t_cover of weight(σ0 - ½)/|s0 - ρ|², zeros at
/// density c log(q(2+|u|)), placed on the critical line.
pub fn zero_tail_estimate(q: f64, s0: Complex64, t_cover: f64, density: f64, weight: f64) -> f64 {
    let up = t_cover - s0.im;
    let down = t_cover + s0.im;
    density * weight * (zero_density_tail_integral(q, s0.im, up) + zero_density_tail_integral(q, s0.im, down))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExplicitFormulaBalance {
    pub lambda: f64,
    pub t: f64,
    pub lhs: f64,
    pub lhs_tail_bound: f64,
    pub rhs: f64,
    pub residual: f64,
    /// ½log(q/π) + ½Re ψ((s0+𝔞)/2) - Σ_ρ Re 1/(s0-ρ) - tail
    pub rhs_exact: f64,
    pub residual_exact: f64,
    pub zero_sum: f64,
    pub zero_tail: f64,
    pub zeros_used: usize,
    pub t_cover: f64,
    pub von_mangoldt_sum: f64,
    pub gap_to_inverse_lambda: f64,
}

/// Balance -Re L'/L(1+λ+it) against ½log(q(1+|t|)) - Σ_ρ Re 1/(s0-ρ).
pub fn explicit_formula_balance<Z: ZeroLike>(
    chi: &Character,
    lambda: f64,
    t: f64,
    zeros: &[Z],
    t_cover: f64,
    density: f64,
    n_max: u64,
) -> Result<ExplicitFormulaBalance> {
    let evaluator = LEvaluator::new(chi.clone());
    evaluator.require_primitive()?;
    if !(lambda > 0.0 && lambda <= 0.5) {
        return Err(Error::domain("λ", lambda, "(0, 1/2]"));
    }
    if zeros.is_empty() && t_cover <= 0.0 || t_cover <= t.abs() {
        return Err(Error::Coverage {
            needed: t.abs() + 1.0,
            available: t_cover,
        });
    }
    let s0 = Complex64::new(1.0 + lambda, t);
    let q = chi.modulus();
    let lambda_table = von_mangoldt_table(n_max);
    let chi_table = chi.value_table();
    let mut acc = PairwiseSum::<f64>::new();
    for (n, &lam) in lambda_table.iter().enumerate() {
        if lam == 0.0 {
            continue;
        }
        let v = chi_table[n % q as usize];
        let ln = (n as f64).ln();
        acc.add(lam * (v * Complex64::from_polar((-s0.re * ln).exp(), -t * ln)).re);
    }
    let lhs = acc.total();
    // |Σ_{n>N} Λ(n)χ(n)n^{-s0}| <= Σ_{n>N} Λ(n) n^{-1-λ} ~ N^{-λ}/λ
    let lhs_tail_bound = (n_max as f64).powf(-lambda) / lambda;

    let zero_sum = sum_f64(
        zeros
            .iter()
            .map(|z| z.rho())
            .filter(|r| r.im.abs() <= t_cover)
            .map(|r| (1.0 / (s0 - r)).re),
    );
    let zeros_used = zeros.iter().filter(|z| z.rho().im.abs() <= t_cover).count();
    let zero_tail = zero_tail_estimate(q as f64, s0, t_cover, density, s0.re - 0.5);
    let rhs = 0.5 * (q as f64 * (1.0 + t.abs())).ln() - zero_sum - zero_tail;
    let z = (s0 + chi.parity() as f64) / 2.0;
    let rhs_exact = 0.5 * (q as f64 / PI).ln() + 0.5 * digamma(z).re - zero_sum - zero_tail;
    let vm = von_mangoldt_sum_from_table(&lambda_table, lambda);
    Ok(ExplicitFormulaBalance {
        lambda,
        t,
        lhs,
        lhs_tail_bound,
        rhs,
        residual: (lhs - rhs).abs(),
        rhs_exact,
        residual_exact: (lhs - rhs_exact).abs(),
        zero_sum,
        zero_tail,
        zeros_used,
        t_cover,
        von_mangoldt_sum: vm.value,
        gap_to_inverse_lambda: vm.gap_to_inverse_lambda,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VonMangoldtSum {
    pub lambda: f64,
    pub n_max: u64,
    pub partial: f64,
    pub tail_model: f64,
    pub value: f64,
    pub gap_to_inverse_lambda: f64,
}

/// Σ_n Λ(n) n^{-1-λ}: direct sum to n_max plus N^{-λ}/λ - (ψ(N) - N) N^{-1-λ}.
pub fn von_mangoldt_sum(lambda: f64, n_max: u64) -> Result<VonMangoldtSum> {
    if !(lambda > 0.0) {
        return Err(Error::domain("λ", lambda, "(0, ∞)"));
    }
    if n_max > crate::sieve::DEFAULT_SIEVE_LIMIT {
        return Err(Error::Range {
            what: "von Mangoldt cutoff",
            requested: n_max as f64,
            limit: crate::sieve::DEFAULT_SIEVE_LIMIT,
        });
    }
    Ok(von_mangoldt_sum_from_table(&von_mangoldt_table(n_max), lambda))
}

fn von_mangoldt_sum_from_table(table: &[f64], lambda: f64) -> VonMangoldtSum {
    let n_max = (table.len() - 1) as u64;
    let mut acc = PairwiseSum::<f64>::new();
    let mut psi = PairwiseSum::<f64>::new();
    for (n, &lam) in table.iter().enumerate() {
        if lam > 0.0 {
            acc.add(lam * (n as f64).powf(-1.0 - lambda));
            psi.add(lam);
        }
    }
    let nf = n_max as f64;
    let partial = acc.total();
    let tail_model = nf.powf(-lambda) / lambda - (psi.total() - nf) * nf.powf(-1.0 - lambda);
    let value = partial + tail_model;
    VonMangoldtSum {
        lambda,
        n_max,
        partial,
        tail_model,
        value,
        gap_to_inverse_lambda: (value - 1.0 / lambda).abs(),
    }
}

/// -ζ'/ζ(s) from the Hurwitz evaluator (a = 1), by a central difference.
pub fn zeta_log_derivative(s: Complex64) -> Result<Complex64> {
    let h = 1e-5;
    let z = hurwitz_zeta(s, 1.0)?.value;
    let plus = hurwitz_zeta(s + h, 1.0)?.value;
    let minus = hurwitz_zeta(s - h, 1.0)?.value;
    Ok(-(plus - minus) / (2.0 * h) / z)
}

/// Primes-up-to helper kept for callers that already own a table.
pub fn chebyshev_psi(table: &PrimeTable, x: f64) -> f64 {
    let mut acc = PairwiseSum::<f64>::new();
    for &p in table.primes() {
        if p as f64 > x {
            break;
        }
        let lp = (p as f64).ln();
        let mut pk = p as f64;
        while pk <= x {
            acc.add(lp);
            pk *= p as f64;
        }
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::{enumerate_characters, primitive_characters};
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hurwitz_reference_values() {
        let z2 = hurwitz_zeta(c(2.0, 0.0), 1.0).unwrap();
        assert!((z2.value.re - PI * PI / 6.0).abs() < 1e-13 && z2.error_bound < 1e-12);
        let half = hurwitz_zeta(c(2.0, 0.0), 0.5).unwrap().value;
        assert!((half.re - 3.0 * PI * PI / 6.0).abs() < 1e-12);
        let z0 = hurwitz_zeta(c(0.0, 0.0), 1.0).unwrap();
        assert!((z0.value - c(-0.5, 0.0)).norm() <= z0.error_bound.max(1e-13));
        // 30-digit references
        let v = hurwitz_zeta(c(0.3, 20.0), 0.37).unwrap();
        assert!((v.value - c(1.70301511541006382, 2.72821080627311783)).norm() < 1e-12);
        let v = hurwitz_zeta(c(-0.8, -3.0), 0.9).unwrap();
        assert!((v.value - c(0.25059405489686294, -0.18287998052603354)).norm() < 1e-12);
    }

    #[test]
    fn hurwitz_errors() {
        assert!(matches!(hurwitz_zeta(c(1.0, 0.0), 0.5), Err(Error::Pole(_))));
        assert!(hurwitz_zeta(c(2.0, 0.0), 0.0).is_err());
        assert!(hurwitz_zeta(c(2.0, 0.0), 1.5).is_err());
    }

    #[test]
    fn near_pole_continuity() {
        let s = c(1.0 + 1e-7, 0.0);
        let a = hurwitz_zeta(s, 1.0).unwrap().value;
        // ζ(s) = 1/(s-1) + γ + O(s-1)
        assert!((a.re - 1.0 / (s.re - 1.0) - 0.5772156649015329).abs() < 1e-6);
    }

    #[test]
    fn l_values_mod_4() {
        let chi = crate::dirichlet::Character::from_label(4, 3).unwrap();
        let ev = LEvaluator::new(chi);
        let catalan = ev.l_value(c(2.0, 0.0)).unwrap();
        assert!((catalan.value.re - 0.915965594177219015).abs() < 1e-12);
        let leibniz = ev.l_value(c(1.0, 0.0)).unwrap();
        assert!((leibniz.value.re - PI / 4.0).abs() < 1e-12);
        let v = ev.l_value(c(0.5, 3.0)).unwrap().value;
        assert!((v - c(1.46851058346012069, 0.19169891968453042)).norm() < 1e-12);
    }

    #[test]
    fn complex_character_reference() {
        // χ mod 5 with χ(2) = i
        let chi = crate::dirichlet::Character::from_label(5, 2).unwrap();
        assert!((chi.evaluate(2) - c(0.0, 1.0)).norm() < 1e-15);
        let v = l_value(&chi, c(-0.5, 10.0)).unwrap().value;
        assert!((v - c(3.62332571542735921, 11.62302401456986128)).norm() < 1e-11);
    }

    #[test]
    fn principal_pole() {
        let chi = crate::dirichlet::Character::from_label(7, 1).unwrap();
        assert!(matches!(l_value(&chi, c(1.0, 0.0)), Err(Error::Pole(_))));
        // L(s, χ₀ mod 7) = (1 - 7^{-s}) ζ(s)
        let s = c(0.4, 7.0);
        let expected = (1.0 - (-s * 7f64.ln()).exp()) * hurwitz_zeta(s, 1.0).unwrap().value;
        assert!((l_value(&chi, s).unwrap().value - expected).norm() < 1e-12);
        let s = c(1.05, 0.0);
        let expected = (1.0 - (-s * 7f64.ln()).exp()) * hurwitz_zeta(s, 1.0).unwrap().value;
        assert!((l_value(&chi, s).unwrap().value - expected).norm() < 1e-11);
    }

    #[test]
    fn window_is_enforced() {
        let chi = crate::dirichlet::Character::from_label(4, 3).unwrap();
        assert!(matches!(l_value(&chi, c(0.5, 51.0)), Err(Error::Window { .. })));
        assert!(matches!(l_value(&chi, c(-1.5, 0.0)), Err(Error::Window { .. })));
    }

    #[test]
    fn rows_match_pointwise_evaluation() {
        let chi = crate::dirichlet::Character::from_label(13, 5).unwrap();
        let ev = LEvaluator::new(chi);
        let row = ev.l_row(0.3, -20.0, 0.05, 801).unwrap();
        for (j, r) in row.iter().enumerate().step_by(37) {
            let t = -20.0 + 0.05 * j as f64;
            let p = ev.l_value(c(0.3, t)).unwrap();
            assert!((r.value - p.value).norm() < 1e-11, "t = {t}");
        }
    }

    #[test]
    fn agrees_with_dirichlet_series() {
        for q in [3u64, 8, 15, 28] {
            for chi in enumerate_characters(q).unwrap().into_iter().filter(|c| !c.is_principal()) {
                let s = c(2.0, 4.5);
                let h = l_value(&chi, s).unwrap();
                let d = dirichlet_series(&chi, s, 100_000).unwrap();
                assert!((h.value - d.value).norm() <= h.error_bound + d.error_bound);
            }
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for chi in primitive_characters(11).unwrap() {
            let bar = chi.conjugate();
            let s = c(0.2, 13.0);
            let a = l_value(&chi, s).unwrap().value;
            let b = l_value(&bar, s.conj()).unwrap().value;
            assert!((a.conj() - b).norm() < 1e-12);
        }
    }

    #[test]
    fn functional_equation_magnitude() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for q in [3u64, 4, 5, 7, 13] {
            for chi in primitive_characters(q).unwrap() {
                let bar = chi.conjugate();
                for _ in 0..10 {
                    let s = c(rng.gen_range(-1.0..2.0), rng.gen_range(-40.0..40.0));
                    let a = xi_value(&chi, s).unwrap().norm();
                    let b = xi_value(&bar, c(1.0, 0.0) - s).unwrap().norm();
                    assert!((a - b).abs() <= 1e-8 * a.max(1e-300).max(b), "q={q} s={s}");
                }
            }
        }
    }

    #[test]
    fn xi_is_finite_at_the_gamma_pole() {
        // even χ: Γ((s)/2) has a pole at s = 0 cancelled by L(0, χ) = 0
        let chi = crate::dirichlet::Character::from_label(5, 4).unwrap();
        let ev = LEvaluator::new(chi);
        let at = ev.xi_value(c(0.0, 0.0)).unwrap();
        let near = ev.xi_value(c(0.03, 0.0)).unwrap();
        assert!(at.norm().is_finite());
        assert!((at - near).norm() < 0.05 * at.norm());
        // functional equation for a real character: ξ(0) = ξ(1)
        let one = ev.xi_value(c(1.0, 0.0)).unwrap();
        assert!((at.norm() - one.norm()).abs() < 1e-10 * one.norm());
    }

    #[test]
    fn xi_requires_primitive() {
        let chi = crate::dirichlet::Character::from_label(12, 5).unwrap();
        assert!(!chi.is_primitive());
        assert!(xi_value(&chi, c(0.5, 1.0)).is_err());
    }

    #[test]
    fn von_mangoldt_series() {
        let v = von_mangoldt_sum(0.5, 1_000_000).unwrap();
        assert!((v.value - 1.5052354).abs() < 1e-3, "{}", v.value);
        let minus = zeta_log_derivative(c(1.5, 0.0)).unwrap().re;
        assert!((minus - 1.5052354).abs() < 1e-6);
    }

    #[test]
    fn tail_integral_matches_quadrature() {
        let (q, t, d) = (4.0f64, 3.0f64, 47.0f64);
        let a = 2.0 + t;
        let (numeric, _) = crate::quad::adaptive_simpson_real(
            |u| {
                let v = d / u; // substitute v = d/u, u in (0,1]
                (q.ln() + (a + v).ln()) / (v * v) * d / (u * u)
            },
            1e-9,
            1.0,
            1e-12,
            50,
        )
        .unwrap();
        assert!((numeric - zero_density_tail_integral(q, t, d)).abs() < 1e-8);
    }

    #[test]
    fn coverage_is_checked() {
        let chi = crate::dirichlet::Character::from_label(4, 3).unwrap();
        let none: Vec<Complex64> = Vec::new();
        assert!(matches!(
            explicit_formula_balance(&chi, 0.5, 0.0, &none, 0.0, 0.5, 1000),
            Err(Error::Coverage { .. })
        ));
    }
}
