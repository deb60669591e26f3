//! Completely multiplicative functions on the unit disc: the prime-sum distance,
//! the maximiser (φ, M) of the truncated Euler product on 1 + 1/log x + it,
//! Halász-type mean value bounds and the slow-variation probes.

use crate::dirichlet::Character;
use crate::error::{Error, Result};
use crate::sieve::PrimeTable;
use crate::summation::{sum_f64, PairwiseSum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// Something with prime values of modulus at most one, extended completely multiplicatively.
pub trait Multiplicative: Sync {
    fn table(&self) -> &PrimeTable;

    fn label(&self) -> String;

    /// f(p) for every prime p <= x, in ascending order of p.
    fn prime_values(&self, x: f64) -> Result<Vec<Complex64>>;

    /// True when every prime value is real.
    fn is_real(&self) -> bool {
        false
    }

    fn limit(&self) -> u64 {
        self.table().limit()
    }

    /// f(n) for 0 <= n <= x (f(0) = 0), built from smallest prime factors.
    fn values(&self, x: f64) -> Result<Vec<Complex64>> {
        let table = self.table();
        table.check("multiplicative function argument", x)?;
        let top = if x >= 1.0 { x.floor() as usize } else { 0 };
        let pv = self.prime_values(x)?;
        let mut out = vec![Complex64::new(0.0, 0.0); top + 1];
        if top == 0 {
            return Ok(out);
        }
        out[1] = Complex64::new(1.0, 0.0);
        for (p, v) in table.primes().iter().zip(&pv) {
            out[*p as usize] = *v;
        }
        for n in 4..=top {
            let p = table.smallest_factor(n as u64) as usize;
            if p != n {
                out[n] = out[p] * out[n / p];
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct CompletelyMultiplicativeFunction {
    table: Arc<PrimeTable>,
    label: String,
    prime_values: Vec<Complex64>,
    real: bool,
}

impl CompletelyMultiplicativeFunction {
    pub fn from_prime_fn<F: FnMut(u64) -> Complex64>(table: Arc<PrimeTable>, label: impl Into<String>, mut f: F) -> Result<Self> {
        let prime_values: Vec<Complex64> = table.primes().iter().map(|&p| f(p)).collect();
        if let Some((p, v)) = table.primes().iter().zip(&prime_values).find(|(_, v)| v.norm() > 1.0 + 1e-12) {
            return Err(Error::domain("|f(p)|", format!("{} at p = {p}", v.norm()), "[0, 1]"));
        }
        let real = prime_values.iter().all(|v| v.im == 0.0);
        Ok(Self {
            table,
            label: label.into(),
            prime_values,
            real,
        })
    }

    pub fn one(table: Arc<PrimeTable>) -> Self {
        Self::from_prime_fn(table, "one", |_| Complex64::new(1.0, 0.0)).expect("unimodular")
    }

    /// f(n) = n^{iα}.
    pub fn n_to_i(table: Arc<PrimeTable>, alpha: f64) -> Self {
        Self::from_prime_fn(table, format!("ntoi:{alpha}"), |p| Complex64::from_polar(1.0, alpha * (p as f64).ln()))
            .expect("unimodular")
    }

    pub fn character(table: Arc<PrimeTable>, chi: &Character) -> Self {
        let values = chi.value_table();
        let q = chi.modulus();
        Self::from_prime_fn(table, format!("char:{}.{}", q, chi.conrey()), |p| values[(p % q) as usize])
            .expect("character values lie on the unit disc")
    }

    /// Random ±1 prime values drawn from ChaCha8 seeded with `seed`.
    pub fn random_sign(table: Arc<PrimeTable>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_prime_fn(table, format!("randpm:{seed}"), |_| {
            Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0)
        })
        .expect("unimodular")
    }

    /// Parse `one`, `ntoi:<α>`, `char:<q>.<conrey>` or `randpm:<seed>`.
    pub fn parse(spec: &str, table: Arc<PrimeTable>) -> Result<Self> {
        let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
        match kind.trim() {
            "one" => Ok(Self::one(table)),
            "ntoi" => {
                let alpha = arg.parse().map_err(|_| Error::Parse(format!("bad exponent in {spec:?}")))?;
                Ok(Self::n_to_i(table, alpha))
            }
            "char" => {
                let (q, m) = crate::dirichlet::parse_label(arg)?;
                Ok(Self::character(table, &Character::from_label(q, m)?))
            }
            "randpm" => {
                let seed = arg.parse().map_err(|_| Error::Parse(format!("bad seed in {spec:?}")))?;
                Ok(Self::random_sign(table, seed))
            }
            _ => Err(Error::Parse(format!("unknown function spec {spec:?}"))),
        }
    }

    pub fn shared_table(&self) -> &Arc<PrimeTable> {
        &self.table
    }
}

impl Multiplicative for CompletelyMultiplicativeFunction {
    fn table(&self) -> &PrimeTable {
        &self.table
    }

    fn label(&self) -> String {
        self.label.clone()
    }

    fn prime_values(&self, x: f64) -> Result<Vec<Complex64>> {
        self.table.check("prime value cutoff", x)?;
        Ok(self.prime_values[..self.table.prime_count(x)].to_vec())
    }

    fn is_real(&self) -> bool {
        self.real
    }
}

/// f_φ(n) = f(n) n^{-iφ}.
pub struct Twisted<'a> {
    pub inner: &'a dyn Multiplicative,
    pub phi: f64,
}

impl Multiplicative for Twisted<'_> {
    fn table(&self) -> &PrimeTable {
        self.inner.table()
    }

    fn label(&self) -> String {
        format!("{}*n^(-{}i)", self.inner.label(), self.phi)
    }

    fn prime_values(&self, x: f64) -> Result<Vec<Complex64>> {
        let primes = self.table().primes();
        Ok(self
            .inner
            .prime_values(x)?
            .into_iter()
            .zip(primes)
            .map(|(v, &p)| v * Complex64::from_polar(1.0, -self.phi * (p as f64).ln()))
            .collect())
    }

    fn is_real(&self) -> bool {
        self.phi == 0.0 && self.inner.is_real()
    }
}

/// Pointwise product f₁f₂.
pub struct Product<'a> {
    pub left: &'a dyn Multiplicative,
    pub right: &'a dyn Multiplicative,
}

impl Multiplicative for Product<'_> {
    fn table(&self) -> &PrimeTable {
        if self.left.limit() <= self.right.limit() {
            self.left.table()
        } else {
            self.right.table()
        }
    }

    fn label(&self) -> String {
        format!("({})*({})", self.left.label(), self.right.label())
    }

    fn prime_values(&self, x: f64) -> Result<Vec<Complex64>> {
        let a = self.left.prime_values(x)?;
        let b = self.right.prime_values(x)?;
        Ok(a.into_iter().zip(b).map(|(u, v)| u * v).collect())
    }

    fn is_real(&self) -> bool {
        self.left.is_real() && self.right.is_real()
    }
}

/// Power f^k.
pub struct Power<'a> {
    pub inner: &'a dyn Multiplicative,
    pub k: u32,
}

impl Multiplicative for Power<'_> {
    fn table(&self) -> &PrimeTable {
        self.inner.table()
    }

    fn label(&self) -> String {
        format!("({})^{}", self.inner.label(), self.k)
    }

    fn prime_values(&self, x: f64) -> Result<Vec<Complex64>> {
        Ok(self.inner.prime_values(x)?.into_iter().map(|v| v.powu(self.k)).collect())
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }
}

/// 𝔻(f, g; x)² = Σ_{p<=x} (1 - Re f(p) conj g(p)) / p.
pub fn distance_sq(f: &dyn Multiplicative, g: &dyn Multiplicative, x: f64) -> Result<f64> {
    let a = f.prime_values(x)?;
    let b = g.prime_values(x)?;
    let primes = f.table().primes();
    Ok(sum_f64(
        a.iter()
            .zip(&b)
            .zip(primes)
            .map(|((u, v), &p)| (1.0 - (u * v.conj()).re) / p as f64),
    ))
}

/// 𝔻(f, n^{it}; x)².
pub fn distance_sq_to_twist(f: &dyn Multiplicative, t: f64, x: f64) -> Result<f64> {
    let a = f.prime_values(x)?;
    let primes = f.table().primes();
    Ok(sum_f64(a.iter().zip(primes).map(|(u, &p)| {
        let lp = (p as f64).ln();
        (1.0 - (u * Complex64::from_polar(1.0, -t * lp)).re) / p as f64
    })))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Σ_{n<=n_max} f(n) n^{-s} with the tail bound Σ_{n>n_max} n^{-σ} <= n_max^{1-σ}/(σ-1).
pub fn truncated_f(f: &dyn Multiplicative, s: Complex64, n_max: u64) -> Result<SeriesValue> {
    if s.re <= 1.0 {
        return Err(Error::domain("Re s", s.re, "(1, ∞)"));
    }
    let values = f.values(n_max as f64)?;
    let mut acc = PairwiseSum::complex();
    for (n, v) in values.iter().enumerate().skip(1) {
        if v.re != 0.0 || v.im != 0.0 {
            let ln = (n as f64).ln();
            acc.add(v * Complex64::from_polar((-s.re * ln).exp(), -s.im * ln));
        }
    }
    let tail_bound = (n_max as f64).powf(1.0 - s.re) / (s.re - 1.0);
    Ok(SeriesValue {
        value: acc.total(),
        tail_bound,
    })
}

/// x^{-1} Σ_{n<=x} f(n).
pub fn mean_value(f: &dyn Multiplicative, x: f64) -> Result<Complex64> {
    let values = f.values(x)?;
    let mut acc = PairwiseSum::complex();
    for v in values.iter().skip(1) {
        acc.add(*v);
    }
    Ok(acc.total() / x)
}

/// Means y^{-1} Σ_{n<=y} over an ascending list of cutoffs, from one table.
fn means_at(values: &[Complex64], cutoffs: &[f64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoffs.len());
    let mut running = Complex64::new(0.0, 0.0);
    let mut next = 1usize;
    for &y in cutoffs {
        let top = (y.floor() as usize).min(values.len().saturating_sub(1));
        let mut segment = PairwiseSum::complex();
        while next <= top {
            segment.add(values[next]);
            next += 1;
        }
        running += segment.total();
        out.push(running / y);
    }
    out
}

/// Euler-product data at σ = 1 + 1/log x: coefficients a_p = f(p) p^{-σ} and log p.
struct EulerProduct {
    coeffs: Vec<Complex64>,
    logs: Vec<f64>,
}

impl EulerProduct {
    fn new(f: &dyn Multiplicative, x: f64) -> Result<Self> {
        let sigma = 1.0 + 1.0 / x.ln();
        let pv = f.prime_values(x)?;
        let primes = f.table().primes();
        let logs: Vec<f64> = primes[..pv.len()].iter().map(|&p| (p as f64).ln()).collect();
        let coeffs = pv.iter().zip(&logs).map(|(v, &lp)| v * (-sigma * lp).exp()).collect();
        Ok(Self { coeffs, logs })
    }

    /// log |Π_p (1 - a_p p^{-it})^{-1}|.
    fn log_abs(&self, t: f64) -> f64 {
        let mut total = 0.0;
        let mut block = 1.0;
        for (k, (a, &lp)) in self.coeffs.iter().zip(&self.logs).enumerate() {
            let w = a * Complex64::from_polar(1.0, -t * lp);
            block *= (Complex64::new(1.0, 0.0) - w).norm_sqr();
            if k % 32 == 31 {
                total += block.ln();
                block = 1.0;
            }
        }
        -0.5 * (total + block.ln())
    }

    /// log |F| at t0 + j h for j in 0..count, by rotating each p^{-it} with reseeding.
    fn log_abs_row(&self, t0: f64, h: f64, count: usize) -> Vec<f64> {
        const RESEED: usize = 256;
        let blocks: Vec<usize> = (0..count.div_ceil(RESEED)).collect();
        blocks
            .par_iter()
            .flat_map_iter(|&b| {
                let start = b * RESEED;
                let len = RESEED.min(count - start);
                let ts = t0 + start as f64 * h;
                let mut w: Vec<Complex64> = self
                    .coeffs
                    .iter()
                    .zip(&self.logs)
                    .map(|(a, &lp)| a * Complex64::from_polar(1.0, -ts * lp))
                    .collect();
                let rot: Vec<Complex64> = self.logs.iter().map(|&lp| Complex64::from_polar(1.0, -h * lp)).collect();
                let mut row = Vec::with_capacity(len);
                for _ in 0..len {
                    let mut total = 0.0;
                    let mut block = 1.0;
                    for (k, (wp, r)) in w.iter_mut().zip(&rot).enumerate() {
                        let d = Complex64::new(1.0 - wp.re, -wp.im);
                        block *= d.norm_sqr();
                        *wp *= r;
                        if k % 32 == 31 {
                            total += block.ln();
                            block = 1.0;
                        }
                    }
                    row.push(-0.5 * (total + block.ln()));
                }
                row
            })
            .collect()
    }
}

/// log|F(1 + 1/log x + it)| from the Euler product over p <= x.
pub fn log_abs_euler_product(f: &dyn Multiplicative, x: f64, t: f64) -> Result<f64> {
    Ok(EulerProduct::new(f, x)?.log_abs(t))
}

/// log|F(1 + 1/log x + it)| - (log log x - 𝔻(f, n^{it}; x)²).
pub fn dirichlet_series_gap(f: &dyn Multiplicative, x: f64, t: f64) -> Result<f64> {
    let log_f = log_abs_euler_product(f, x, t)?;
    Ok(log_f - (x.ln().ln() - distance_sq_to_twist(f, t, x)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct HalaszData {
    pub x: f64,
    pub phi: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub log_abs_f: f64,
    pub grid_step: f64,
    pub refined: bool,
    #[serde(skip)]
    pub grid_trace: Vec<(f64, f64)>,
}

impl HalaszData {
    /// Largest |F| seen on the grid.
    pub fn grid_max(&self) -> f64 {
        self.grid_trace.iter().map(|&(_, v)| v).fold(0.0, f64::max)
    }
}

/// Locate φ maximising |F(1 + 1/log x + it)| on |t| <= log x and set M = 𝔻(f, n^{iφ}; x)².
///
/// Grid step 1/(10 log x), then golden-section refinement to |Δt| < 1e-6. Ties go
/// to the smallest |t|, then to negative t.
pub fn find_phi_and_m(f: &dyn Multiplicative, x: f64) -> Result<HalaszData> {
    if !(x >= 2.0) {
        return Err(Error::DegenerateGrid(format!("x = {x} leaves no primes in the Euler product")));
    }
    f.table().check("Euler product cutoff", x)?;
    let log_x = x.ln();
    let h = 1.0 / (10.0 * log_x);
    let half = (log_x / h + 1e-9).floor() as usize;
    let euler = EulerProduct::new(f, x)?;

    // grid values for j = -half..=half
    let grid: Vec<(f64, f64)> = if f.is_real() {
        let right = euler.log_abs_row(0.0, h, half + 1);
        let mut g: Vec<(f64, f64)> = (1..=half).rev().map(|j| (-(j as f64) * h, right[j])).collect();
        g.extend(right.iter().enumerate().map(|(j, &v)| (j as f64 * h, v)));
        g
    } else {
        let row = euler.log_abs_row(-(half as f64) * h, h, 2 * half + 1);
        row.iter()
            .enumerate()
            .map(|(j, &v)| ((j as f64 - half as f64) * h, v))
            .collect()
    };

    let better = |(t, v): (f64, f64), (bt, bv): (f64, f64)| -> bool {
        if v != bv {
            return v > bv;
        }
        if t.abs() != bt.abs() {
            return t.abs() < bt.abs();
        }
        t < bt
    };
    let mut best = grid[0];
    for &point in &grid[1..] {
        if better(point, best) {
            best = point;
        }
    }

    let lo = (best.0 - h).max(-log_x);
    let hi = (best.0 + h).min(log_x);
    let (t_ref, v_ref) = golden_section_max(|t| euler.log_abs(t), lo, hi, 1e-6);
    let noise = 1e-12 * (1.0 + best.1.abs());
    let (phi, log_abs_f, refined) = if v_ref > best.1 + noise {
        (t_ref, v_ref, true)
    } else {
        (best.0, best.1, false)
    };
    let m = distance_sq_to_twist(f, phi, x)?.max(0.0);
    Ok(HalaszData {
        x,
        phi,
        m,
        log_abs_f,
        grid_step: h,
        refined,
        grid_trace: grid.into_iter().map(|(t, v)| (t, v.exp())).collect(),
    })
}

fn golden_section_max<F: FnMut(f64) -> f64>(mut g: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    while b - a > tol {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, g(t))
}

#[derive(Debug, Clone, Serialize)]
pub struct HalaszBound {
    pub phi: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub observed: f64,
    pub bound: f64,
    pub ratio: f64,
    /// observed / ((M+1)e^{-M}/(1+|φ|)), the ratio against the leading term alone.
    pub main_term_ratio: f64,
}

/// |x^{-1}Σ_{n<=x} f(n)| against (M+1)e^{-M}/(1+|φ|) + (log x)^{-(2-√3)}.
pub fn halasz_bound(f: &dyn Multiplicative, x: f64) -> Result<HalaszBound> {
    let data = find_phi_and_m(f, x)?;
    let observed = mean_value(f, x)?.norm();
    Ok(halasz_from_data(&data, observed))
}

pub fn halasz_from_data(data: &HalaszData, observed: f64) -> HalaszBound {
    let main = (data.m + 1.0) * (-data.m).exp() / (1.0 + data.phi.abs());
    let bound = main + data.x.ln().powf(-(2.0 - 3f64.sqrt()));
    HalaszBound {
        phi: data.phi,
        m: data.m,
        observed,
        bound,
        ratio: observed / bound,
        main_term_ratio: observed / main,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlowVariation {
    pub phi: f64,
    pub hal2_residual: f64,
    pub hal3_delta: f64,
    pub hal3_reference: f64,
}

/// Compare the mean of f with that of f_φ at x, and the mean of f_φ at x with that at z.
pub fn slow_variation_probe(f: &dyn Multiplicative, x: f64, z: f64) -> Result<SlowVariation> {
    if !(z >= x.sqrt() && z <= x * x) {
        return Err(Error::domain("z", z, "[√x, x²]"));
    }
    let data = find_phi_and_m(f, x)?;
    let phi = data.phi;
    let twisted = Twisted { inner: f, phi };
    let values = twisted.values(x.max(z))?;
    let (lo, hi) = if x <= z { (x, z) } else { (z, x) };
    let means = means_at(&values, &[lo, hi]);
    let (mean_x, mean_z) = if x <= z { (means[0], means[1]) } else { (means[1], means[0]) };
    let plain = mean_value(f, x)?;
    let x_to_iphi = Complex64::from_polar(1.0, phi * x.ln());
    let hal2_residual = (plain - x_to_iphi / Complex64::new(1.0, phi) * mean_x).norm();
    let hal3_delta = (mean_x - mean_z).norm();
    let hal3_reference = ((1.0 + (x / z).ln().abs()) / x.ln()).powf(1.0 - 2.0 / std::f64::consts::PI);
    Ok(SlowVariation {
        phi,
        hal2_residual,
        hal3_delta,
        hal3_reference,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub y: f64,
    pub mean: Complex64,
    pub guarantee: f64,
    pub lambda: f64,
    pub phi: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub lower: f64,
    pub grid_points: usize,
}

/// Search y in [x^{1/(λe^λ)}, x], λ = M + log(1+|φ|) + c, for the largest |y^{-1}Σ_{n<=y} f(n)|.
pub fn prop61_witness(f: &dyn Multiplicative, x: f64, c: f64) -> Result<Witness> {
    let data = find_phi_and_m(f, x)?;
    witness_with_data(f, x, c, &data)
}

pub fn witness_with_data(f: &dyn Multiplicative, x: f64, c: f64, data: &HalaszData) -> Result<Witness> {
    let lambda = data.m + (1.0 + data.phi.abs()).ln() + c;
    let scale = lambda * lambda.exp();
    if !(scale >= 1.0) {
        return Err(Error::DegenerateGrid(format!("λe^λ = {scale} < 1 gives an empty range")));
    }
    let lower = x.powf(1.0 / scale);
    if lower > x {
        return Err(Error::DegenerateGrid(format!("lower end {lower} exceeds x = {x}")));
    }
    let points = (10.0 * scale).ceil() as usize;
    let first_int = lower.ceil().max(1.0);
    let integers = if x >= first_int { (x.floor() - first_int) as usize + 1 } else { 0 };
    let cutoffs: Vec<f64> = if points >= integers && integers > 0 {
        let mut v: Vec<f64> = (0..integers).map(|k| first_int + k as f64).collect();
        if *v.last().unwrap() < x {
            v.push(x);
        }
        v
    } else if points <= 1 {
        vec![x]
    } else {
        let ratio = x.ln() - lower.ln();
        (0..points)
            .map(|k| {
                if k + 1 == points {
                    x
                } else {
                    (lower.ln() + ratio * k as f64 / (points - 1) as f64).exp()
                }
            })
            .collect()
    };
    let values = f.values(x)?;
    let means = means_at(&values, &cutoffs);
    let mut best = 0usize;
    for (k, mean) in means.iter().enumerate() {
        if mean.norm() >= means[best].norm() {
            best = k;
        }
    }
    Ok(Witness {
        y: cutoffs[best],
        mean: means[best],
        guarantee: (-data.m).exp() / Complex64::new(1.0, data.phi).norm(),
        lambda,
        phi: data.phi,
        m: data.m,
        lower,
        grid_points: cutoffs.len(),
    })
}
