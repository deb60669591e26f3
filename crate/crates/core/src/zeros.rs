//! Counting and locating nontrivial zeros of L(s, χ), and the zero-sum
//! identities and audits built on them.

use crate::contour::{winding_number, Rect, TrackingOptions};
use crate::dirichlet::{partial_sum, Character};
use crate::error::{Error, Result};
use crate::lfunction::{zero_density_tail_integral, zero_tail_estimate, LEvaluator};
use crate::multfn::{find_phi_and_m, CompletelyMultiplicativeFunction};
use crate::sieve::PrimeTable;
use crate::summation::{sum_f64, PairwiseSum};
use num_complex::Complex64;
use serde::{Serialize, Serializer};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroMethod {
    GridNewton,
    ArgumentPrincipleRefined,
}

impl ZeroMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ZeroMethod::GridNewton => "grid+newton",
            ZeroMethod::ArgumentPrincipleRefined => "argument-principle-refined",
        }
    }
}

impl Serialize for ZeroMethod {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroRecord {
    pub q: u64,
    pub conrey: u64,
    pub beta: f64,
    pub gamma: f64,
    pub residual: f64,
    pub method: ZeroMethod,
}

impl ZeroRecord {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.beta, self.gamma)
    }
}

impl crate::lfunction::ZeroLike for ZeroRecord {
    fn rho(&self) -> Complex64 {
        ZeroRecord::rho(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Region {
    Rectangle(Rect),
    Disk { center: Complex64, radius: f64 },
}

impl Region {
    pub fn contains(&self, s: Complex64) -> bool {
        match self {
            Region::Rectangle(r) => r.contains(s),
            Region::Disk { center, radius } => (s - center).norm() < *radius,
        }
    }

    /// Smallest strip box [0,1] x [c - r, c + r] holding every nontrivial zero of a disk.
    pub fn strip_box(&self) -> Rect {
        match self {
            Region::Rectangle(r) => *r,
            Region::Disk { center, radius } => Rect {
                sigma1: 0.0,
                sigma2: 1.0,
                t1: center.im - radius,
                t2: center.im + radius,
            },
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub spacing: f64,
    pub retry_spacing: f64,
    pub newton_step: f64,
    pub residual_tolerance: f64,
    pub max_iterations: usize,
    pub perturbation_attempts: usize,
    pub tracking: TrackingOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            spacing: 0.05,
            retry_spacing: 0.01,
            newton_step: 1e-6,
            residual_tolerance: 1e-10,
            max_iterations: 50,
            perturbation_attempts: 5,
            tracking: TrackingOptions::default(),
        }
    }
}

/// Zero search for one primitive character.
#[derive(Debug, Clone)]
pub struct ZeroFinder {
    evaluator: LEvaluator,
    options: SearchOptions,
}

impl ZeroFinder {
    pub fn new(chi: Character) -> Result<Self> {
        Self::with(LEvaluator::new(chi), SearchOptions::default())
    }

    pub fn with(evaluator: LEvaluator, options: SearchOptions) -> Result<Self> {
        evaluator.require_primitive()?;
        Ok(Self { evaluator, options })
    }

    pub fn evaluator(&self) -> &LEvaluator {
        &self.evaluator
    }

    fn check_rect(&self, rect: &Rect) -> Result<()> {
        let w = self.evaluator.window();
        for corner in rect.corners() {
            w.check(corner)?;
        }
        Ok(())
    }

    /// Winding number of ξ around the rectangle, perturbing outward when the contour
    /// runs through a zero.
    pub fn count_zeros(&self, rect: &Rect) -> Result<i64> {
        self.check_rect(rect)?;
        let window = *self.evaluator.window();
        let mut last_distance = 0.0;
        for attempt in 0..=self.options.perturbation_attempts {
            let delta = if attempt == 0 {
                0.0
            } else {
                1e-3 * attempt as f64 * std::f64::consts::SQRT_2
            };
            let mut r = rect.expand(delta);
            r.sigma1 = r.sigma1.max(window.sigma_min);
            r.sigma2 = r.sigma2.min(window.sigma_max);
            r.t1 = r.t1.max(-window.t_max);
            r.t2 = r.t2.min(window.t_max);
            match winding_number(|s| self.evaluator.xi_value(s), &r, &self.options.tracking) {
                Ok(w) => return Ok(w.winding),
                Err(Error::ContourHitsZero { distance, .. }) => last_distance = distance,
                Err(e) => return Err(e),
            }
        }
        Err(Error::ContourHitsZero {
            attempts: self.options.perturbation_attempts,
            distance: last_distance,
        })
    }

    fn l(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.evaluator.l_value(s)?.value)
    }

    /// Newton on L with a central-difference derivative; returns the root and |L| there.
    pub fn newton(&self, start: Complex64) -> Option<(Complex64, f64)> {
        let h = self.options.newton_step;
        let window = self.evaluator.window();
        let mut s = start;
        let mut value = self.l(s).ok()?;
        let mut polished = false;
        for _ in 0..self.options.max_iterations {
            let derivative = (self.l(s + h).ok()? - self.l(s - h).ok()?) / (2.0 * h);
            if derivative.norm() == 0.0 {
                return None;
            }
            let mut step = value / derivative;
            if step.norm() > 0.5 {
                step *= 0.5 / step.norm();
            }
            s -= step;
            if !window.contains(s) {
                return None;
            }
            value = self.l(s).ok()?;
            if value.norm() <= self.options.residual_tolerance {
                if polished || step.norm() < 1e-12 {
                    return Some((s, value.norm()));
                }
                polished = true;
            }
        }
        if value.norm() <= self.options.residual_tolerance {
            Some((s, value.norm()))
        } else {
            None
        }
    }

    fn scan(&self, rect: &Rect, spacing: f64, method: ZeroMethod) -> Result<Vec<ZeroRecord>> {
        let cols = ((rect.sigma2 - rect.sigma1) / spacing).round().max(1.0) as usize + 1;
        let rows = ((rect.t2 - rect.t1) / spacing).round().max(1.0) as usize + 1;
        let ds = (rect.sigma2 - rect.sigma1) / (cols - 1) as f64;
        let dt = (rect.t2 - rect.t1) / (rows - 1) as f64;
        let mut grid = vec![vec![0.0f64; rows]; cols];
        for (i, column) in grid.iter_mut().enumerate() {
            let sigma = rect.sigma1 + ds * i as f64;
            let row = self.evaluator.l_row(sigma, rect.t1, dt, rows)?;
            for (slot, v) in column.iter_mut().zip(row) {
                *slot = v.value.norm();
            }
        }
        let chi = self.evaluator.character();
        let mut found: Vec<ZeroRecord> = Vec::new();
        for i in 0..cols {
            for j in 0..rows {
                let v = grid[i][j];
                let mut is_min = true;
                'nb: for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let (ni, nj) = (i as i64 + di, j as i64 + dj);
                        if ni < 0 || nj < 0 || ni >= cols as i64 || nj >= rows as i64 {
                            continue;
                        }
                        if grid[ni as usize][nj as usize] < v {
                            is_min = false;
                            break 'nb;
                        }
                    }
                }
                if !is_min {
                    continue;
                }
                let seed = Complex64::new(rect.sigma1 + ds * i as f64, rect.t1 + dt * j as f64);
                if let Some((rho, residual)) = self.newton(seed) {
                    // the margin keeps the trivial zero at s = 0 of even characters out
                    if rho.re <= 1e-6 || rho.re >= 1.0 - 1e-6 || !rect.contains(rho) {
                        continue;
                    }
                    if found.iter().any(|z| (z.rho() - rho).norm() < 1e-6) {
                        continue;
                    }
                    found.push(ZeroRecord {
                        q: chi.modulus(),
                        conrey: chi.conrey(),
                        beta: rho.re,
                        gamma: rho.im,
                        residual,
                        method,
                    });
                }
            }
        }
        sort_zeros(&mut found);
        Ok(found)
    }

    /// Grid scan plus Newton, checked against the winding number (one finer retry).
    pub fn locate(&self, rect: &Rect) -> Result<Vec<ZeroRecord>> {
        self.check_rect(rect)?;
        let expected = self.count_zeros(rect)?;
        let first = self.scan(rect, self.options.spacing, ZeroMethod::GridNewton)?;
        if first.len() as i64 == expected {
            return Ok(first);
        }
        let second = self.scan(rect, self.options.retry_spacing, ZeroMethod::ArgumentPrincipleRefined)?;
        if second.len() as i64 == expected {
            return Ok(second);
        }
        Err(Error::IncompleteSearch {
            located: second.len(),
            expected,
        })
    }

    /// All zeros with |γ| <= height in the critical strip.
    pub fn zeros_to_height(&self, height: f64) -> Result<Vec<ZeroRecord>> {
        self.locate(&Rect::new(0.0, 1.0, -height, height)?)
    }
}

pub fn sort_zeros(zeros: &mut [ZeroRecord]) {
    zeros.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
}

pub fn count_zeros_argument_principle(chi: &Character, rect: &Rect) -> Result<i64> {
    ZeroFinder::new(chi.clone())?.count_zeros(rect)
}

pub fn locate_zeros(chi: &Character, rect: &Rect) -> Result<Vec<ZeroRecord>> {
    ZeroFinder::new(chi.clone())?.locate(rect)
}

fn zeros_within(zeros: &[ZeroRecord], t_cover: f64) -> impl Iterator<Item = Complex64> + '_ {
    zeros.iter().map(|z| z.rho()).filter(move |r| r.im.abs() <= t_cover)
}

#[derive(Debug, Clone, Serialize)]
pub struct HadamardCheck {
    pub lambda: f64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub log_gap: f64,
    /// log of Π |s1-ρ|/|s0-ρ| over the omitted zeros, estimated from the density
    pub log_tail: f64,
    /// |log|ξ(s1)/ξ(s0)| - log Π|s1-ρ|/|s0-ρ| - log_tail|
    pub xi_identity_gap: f64,
    pub lemma_bound: f64,
    pub lemma_constant: f64,
    pub lemma_holds: bool,
    pub zeros_used: usize,
    pub t_cover: f64,
}

/// Compare |L(1-λ+it)/L(1+λ+it)| with (q(1+|t|))^λ Π_ρ |s1-ρ|/|s0-ρ|.
pub fn hadamard_ratio_check(
    chi: &Character,
    lambda: f64,
    t: f64,
    zeros: &[ZeroRecord],
    t_cover: f64,
    density: f64,
    lemma_constant: f64,
) -> Result<HadamardCheck> {
    let ev = LEvaluator::new(chi.clone());
    ev.require_primitive()?;
    if !(lambda > 0.0 && lambda <= 0.5) {
        return Err(Error::domain("λ", lambda, "(0, 1/2]"));
    }
    if t_cover < t.abs() + 20.0 {
        return Err(Error::Coverage {
            needed: t.abs() + 20.0,
            available: t_cover,
        });
    }
    let q = chi.modulus() as f64;
    let s0 = Complex64::new(1.0 + lambda, t);
    let s1 = Complex64::new(1.0 - lambda, t);
    let l0 = ev.l_value(s0)?.value;
    let l1 = ev.l_value(s1)?.value;
    let lhs = (l1 / l0).norm();
    let log_product = sum_f64(zeros_within(zeros, t_cover).map(|r| ((s1 - r).norm() / (s0 - r).norm()).ln()));
    // far zeros on the half line: log|s1-ρ|/|s0-ρ| ≈ -λ/d²
    let log_tail = -zero_tail_estimate(q, s0, t_cover, density, lambda);
    let rhs = (q * (1.0 + t.abs())).powf(lambda) * log_product.exp();
    let log_gap = (lhs.ln() - rhs.ln()).abs();
    let xi_ratio = (ev.xi_value(s1)? / ev.xi_value(s0)?).norm();
    let xi_identity_gap = (xi_ratio.ln() - log_product - log_tail).abs();
    let lemma_sum = sum_f64(zeros_within(zeros, t_cover).map(|r| 2.0 * lambda * lambda / (s0 - r).norm_sqr()));
    let lemma_tail = 2.0 * lambda * lambda * density * {
        let up = t_cover - t;
        let down = t_cover + t;
        zero_density_tail_integral(q, t, up) + zero_density_tail_integral(q, t, down)
    };
    let lemma_bound = (lemma_sum + lemma_tail).exp() / lambda;
    Ok(HadamardCheck {
        lambda,
        t,
        lhs,
        rhs,
        log_gap,
        log_tail,
        xi_identity_gap,
        lemma_bound,
        lemma_constant,
        lemma_holds: l1.norm() <= lemma_constant * lemma_bound,
        zeros_used: zeros_within(zeros, t_cover).count(),
        t_cover,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Prop34Value {
    pub value: f64,
    pub truncated: f64,
    pub tail: f64,
    pub zeros_used: usize,
}

/// Σ_ρ λ/|1+λ+iφ+iξ-ρ|² over supplied zeros with |γ| <= t_cover, plus a density tail.
pub fn prop34_functional<Z: crate::lfunction::ZeroLike>(
    q: u64,
    lambda: f64,
    phi: f64,
    shift: f64,
    zeros: &[Z],
    t_cover: f64,
    density: f64,
) -> Result<Prop34Value> {
    let s = Complex64::new(1.0 + lambda, phi + shift);
    if !zeros.is_empty() && t_cover <= s.im.abs() {
        return Err(Error::Coverage {
            needed: s.im.abs(),
            available: t_cover,
        });
    }
    let mut acc = PairwiseSum::<f64>::new();
    let mut used = 0;
    for z in zeros {
        let r = z.rho();
        if r.im.abs() <= t_cover {
            acc.add(lambda / (s - r).norm_sqr());
            used += 1;
        }
    }
    let tail = if density > 0.0 && t_cover > s.im.abs() {
        lambda
            * density
            * (zero_density_tail_integral(q as f64, s.im, t_cover - s.im)
                + zero_density_tail_integral(q as f64, s.im, t_cover + s.im))
    } else {
        0.0
    };
    let truncated = acc.total();
    Ok(Prop34Value {
        value: truncated + tail,
        truncated,
        tail,
        zeros_used: used,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiskAudit {
    pub q: u64,
    pub conrey: u64,
    pub order: u64,
    pub x: f64,
    pub sum: Complex64,
    /// x/|S(x, χ)|, absent when the sum vanishes
    pub n: Option<f64>,
    pub phi: f64,
    pub l_param: f64,
    pub radius: f64,
    pub count_phi_disk: usize,
    pub count_one_disk: usize,
    pub threshold_main: f64,
    pub threshold_order: f64,
    pub required_main: u64,
    pub required_order: u64,
    pub c: f64,
    pub x_in_range: bool,
    pub n_in_range: bool,
    pub l_in_range_main: bool,
    pub l_in_range_order: bool,
    pub hypothesis_main: bool,
    pub hypothesis_order: bool,
    pub vacuous: bool,
    pub conclusion_main: Option<bool>,
    pub conclusion_order: Option<bool>,
}

/// Zeros in the disks |s - (1+iφ)| < L log q/(log x)² and |s - 1| < L log q/(log x)², with
/// the hypothesis ranges of the large-sum theorems checked and reported.
pub fn disk_count_audit(chi: &Character, x: f64, l_param: f64, c: f64) -> Result<DiskAudit> {
    let finder = ZeroFinder::new(chi.clone())?;
    let q = chi.modulus();
    let qf = q as f64;
    let log_x = x.ln();
    let s = partial_sum(chi, x);
    let n = s.n;
    let table = Arc::new(PrimeTable::new((x.ceil() as u64).max(2))?);
    let f = CompletelyMultiplicativeFunction::character(table, chi);
    let phi = find_phi_and_m(&f, x)?.phi;
    let radius = l_param * qf.ln() / (log_x * log_x);

    let count = |center: Complex64| -> Result<usize> {
        let region = Region::Disk { center, radius };
        let b = region.strip_box();
        let window = finder.evaluator().window();
        if b.t1 < -window.t_max || b.t2 > window.t_max {
            return Err(Error::Window {
                re: center.re,
                im: if b.t2 > window.t_max { b.t2 } else { b.t1 },
            });
        }
        let zeros = finder.locate(&b)?;
        Ok(zeros.iter().filter(|z| region.contains(z.rho())).count())
    };
    let count_phi_disk = count(Complex64::new(1.0, phi))?;
    let count_one_disk = count(Complex64::new(1.0, 0.0))?;

    let k = chi.order() as f64;
    let n_val = n.unwrap_or(f64::INFINITY);
    let x_in_range = x >= qf.ln().sqrt().exp() && x <= qf.sqrt();
    let n_in_range = n_val >= 1.0 && n_val <= log_x.powf(0.01);
    let l_in_range_main = l_param <= log_x / 2.0 && l_param >= c * n_val.powi(6);
    let l_in_range_order = l_param <= log_x / 2.0 && l_param >= (c * n_val).powf(2.0 * k * k);
    let hypothesis_main = x_in_range && n_in_range && l_in_range_main && chi.is_primitive();
    let hypothesis_order = x_in_range && n_in_range && l_in_range_order && chi.is_primitive();
    let threshold_main = l_param / 360.0;
    let threshold_order = l_param / 400.0;
    Ok(DiskAudit {
        q,
        conrey: chi.conrey(),
        order: chi.order(),
        x,
        sum: s.value,
        n,
        phi,
        l_param,
        radius,
        count_phi_disk,
        count_one_disk,
        threshold_main,
        threshold_order,
        required_main: threshold_main.ceil() as u64,
        required_order: threshold_order.ceil() as u64,
        c,
        x_in_range,
        n_in_range,
        l_in_range_main,
        l_in_range_order,
        hypothesis_main,
        hypothesis_order,
        vacuous: !(hypothesis_main || hypothesis_order),
        conclusion_main: hypothesis_main.then_some(count_phi_disk as f64 >= threshold_main),
        conclusion_order: hypothesis_order.then_some(count_one_disk as f64 >= threshold_order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi4() -> Character {
        Character::from_label(4, 3).unwrap()
    }

    #[test]
    fn first_zero_mod_4() {
        let finder = ZeroFinder::new(chi4()).unwrap();
        assert_eq!(finder.count_zeros(&Rect::new(0.0, 1.0, 0.0, 5.0).unwrap()).unwrap(), 0);
        let zeros = finder.locate(&Rect::new(0.0, 1.0, 0.0, 10.0).unwrap()).unwrap();
        assert_eq!(zeros.len(), 1);
        assert!((zeros[0].beta - 0.5).abs() < 1e-6);
        assert!((zeros[0].gamma - 6.020948904697597).abs() < 1e-8);
        assert!(zeros[0].residual <= 1e-10);
    }

    #[test]
    fn right_half_plane_is_zero_free() {
        let finder = ZeroFinder::new(Character::from_label(7, 3).unwrap()).unwrap();
        assert_eq!(finder.count_zeros(&Rect::new(2.0, 3.0, -10.0, 10.0).unwrap()).unwrap(), 0);
    }

    #[test]
    fn real_character_zeros_are_symmetric() {
        let finder = ZeroFinder::new(Character::from_label(5, 4).unwrap()).unwrap();
        let zeros = finder.zeros_to_height(12.0).unwrap();
        let n = zeros.len();
        assert!(n >= 2);
        for (a, b) in zeros.iter().zip(zeros.iter().rev()) {
            assert!((a.gamma + b.gamma).abs() < 1e-8);
        }
    }

    #[test]
    fn conjugate_character_zeros() {
        let chi = Character::from_label(5, 2).unwrap();
        let a = ZeroFinder::new(chi.clone()).unwrap().zeros_to_height(10.0).unwrap();
        let b = ZeroFinder::new(chi.conjugate()).unwrap().zeros_to_height(10.0).unwrap();
        assert_eq!(a.len(), b.len());
        for z in &a {
            assert!(b.iter().any(|w| (w.rho() - z.rho().conj()).norm() < 1e-8));
        }
    }

    #[test]
    fn prop34_hand_values() {
        let none: Vec<Complex64> = Vec::new();
        assert_eq!(prop34_functional(4, 0.25, 0.0, 0.0, &none, 0.0, 0.0).unwrap().value, 0.0);
        let one = vec![Complex64::new(0.5, 0.0)];
        let v = prop34_functional(4, 0.25, 0.3, 0.2, &one, 10.0, 0.0).unwrap().value;
        let expected = 0.25 / Complex64::new(0.75, 0.5).norm_sqr();
        assert!((v - expected).abs() < 1e-15);
    }

    #[test]
    fn disk_threshold_arithmetic() {
        assert_eq!((360.0f64 / 360.0).ceil() as u64, 1);
        let chi = Character::from_label(5, 4).unwrap();
        let x = 5f64.sqrt();
        let audit = disk_count_audit(&chi, x, x.ln() / 2.0, 1.0).unwrap();
        assert_eq!(audit.count_phi_disk, 0);
        assert!(audit.vacuous);
        assert!(matches!(disk_count_audit(&chi, x, 360.0, 1.0), Err(Error::Window { .. })));
    }

    #[test]
    fn region_containment() {
        let d = Region::Disk {
            center: Complex64::new(0.5, 0.0),
            radius: 30.0,
        };
        let b = d.strip_box();
        assert_eq!((b.t1, b.t2), (-30.0, 30.0));
        assert!(d.contains(Complex64::new(0.5, 29.0)));
    }
}
