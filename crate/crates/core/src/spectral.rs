//! The function H(z) = (2/z) ∫_{e^{-1/2}}^1 (1 - e^{-zu}) du/u, its zeros, and the
//! constants δ₀, δ₁ with the bound functions built from them.

use crate::contour::{winding_number, Rect, TrackingOptions};
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

const SERIES_RADIUS: f64 = 0.1;

fn lower() -> f64 {
    (-0.5f64).exp()
}

fn panels_for(z: Complex64) -> usize {
    // keep |z| times the panel width around 6 so 20 nodes resolve the oscillation
    ((z.norm() * (1.0 - lower()) / 6.0).ceil() as usize).max(1)
}

/// G(z) = ∫_{e^{-1/2}}^1 (1 - e^{-zu}) du/u, so that H = 2G/z.
pub fn g_integral(z: Complex64) -> Complex64 {
    let gl = GaussLegendre::new(20);
    gl.integrate_composite_complex(lower(), 1.0, panels_for(z), |u| (1.0 - (-z * u).exp()) / u)
}

/// G'(z) = ∫ e^{-zu} du = (e^{-za} - e^{-z})/z, with the limit 1 - a at z = 0.
pub fn g_derivative(z: Complex64) -> Complex64 {
    let a = lower();
    if z.norm() < 1e-8 {
        return Complex64::new(1.0 - a, 0.0) - z * (1.0 - a * a) / 2.0;
    }
    ((-z * a).exp() - (-z).exp()) / z
}

/// Taylor series 2 Σ (-1)^{m+1} z^{m-1} (1 - e^{-m/2}) / (m·m!), summed until terms drop below 1e-17.
pub fn h_taylor(z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zpow = Complex64::new(1.0, 0.0);
    let mut fact = 1.0;
    for m in 1..400u32 {
        let mf = m as f64;
        fact *= mf;
        let coeff = -(-mf / 2.0).exp_m1() / (mf * fact);
        let term = zpow * coeff;
        if m % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
        if term.norm() < 1e-17 * acc.norm().max(1e-300) && m > 3 {
            break;
        }
        zpow *= z;
    }
    acc * 2.0
}

pub fn h_eval(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        h_taylor(z)
    } else {
        g_integral(z) * 2.0 / z
    }
}

/// H'(z) = (2/z)(G' - G/z); at small |z| by differentiating the series.
pub fn h_derivative(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zpow = Complex64::new(1.0, 0.0);
        let mut fact = 2.0;
        for m in 2..60u32 {
            let mf = m as f64;
            if m > 2 {
                fact *= mf;
            }
            let coeff = -(-mf / 2.0).exp_m1() / (mf * fact) * (mf - 1.0);
            let term = zpow * coeff;
            if m % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
            zpow *= z;
        }
        return acc * 2.0;
    }
    (g_derivative(z) - g_integral(z) / z) * 2.0 / z
}

/// The asymptotic location -log(πk) + 2πi(k + 1/4).
pub fn asymptotic_zero(k: u32) -> Complex64 {
    let kf = k as f64;
    Complex64::new(-(PI * kf).ln(), 2.0 * PI * (kf + 0.25))
}

/// Box used to certify a single zero in the k-th strip.
pub fn strip_box(k: u32) -> Rect {
    let kf = k as f64;
    Rect {
        sigma1: -(PI * kf).ln() - 3.0,
        sigma2: 0.0,
        t1: 2.0 * PI * kf - PI,
        t2: 2.0 * PI * kf + PI,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HZeroMethod {
    #[serde(rename = "newton")]
    Newton,
    #[serde(rename = "grid+newton")]
    GridNewton,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HZero {
    pub k: u32,
    pub z: Complex64,
    pub residual: f64,
    pub asymptotic_gap: f64,
    /// winding number of H around the strip box
    pub winding: i64,
    pub method: HZeroMethod,
}

fn newton(mut z: Complex64) -> Complex64 {
    for _ in 0..60 {
        let g = g_integral(z);
        let step = g / g_derivative(z);
        let step = if step.norm() > 1.0 { step / step.norm() } else { step };
        z -= step;
        if step.norm() < 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

fn in_strip(z: Complex64, rect: &Rect) -> bool {
    rect.contains(z) && z.im > rect.t1 && z.im < rect.t2
}

fn grid_seed(rect: &Rect) -> Complex64 {
    let (nx, ny) = (60, 60);
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for i in 1..nx {
        for j in 1..ny {
            let z = Complex64::new(
                rect.sigma1 + (rect.sigma2 - rect.sigma1) * i as f64 / nx as f64,
                rect.t1 + (rect.t2 - rect.t1) * j as f64 / ny as f64,
            );
            let v = g_integral(z).norm();
            if v < best.0 {
                best = (v, z);
            }
        }
    }
    best.1
}

pub fn find_h_zero(k: u32) -> Result<HZero> {
    if k == 0 {
        return Err(Error::domain("k", k, "positive integers"));
    }
    let rect = strip_box(k);
    let seed = asymptotic_zero(k);
    let mut z = newton(seed);
    let mut method = HZeroMethod::Newton;
    if !in_strip(z, &rect) {
        z = newton(grid_seed(&rect));
        method = HZeroMethod::GridNewton;
        if !in_strip(z, &rect) {
            return Err(Error::IncompleteSearch {
                located: 0,
                expected: 1,
            });
        }
    }
    let winding = winding_number(|s| Ok(g_integral(s)), &rect, &TrackingOptions::default())?.winding;
    Ok(HZero {
        k,
        z,
        residual: h_eval(z).norm(),
        asymptotic_gap: (z - seed).norm(),
        winding,
        method,
    })
}

/// Zeros z_1, ..., z_K in the upper half plane, in ascending order of imaginary part.
pub fn find_h_zeros(count: u32) -> Result<Vec<HZero>> {
    if count > 200 {
        return Err(Error::domain("K", count, "K <= 200"));
    }
    (1..=count).into_par_iter().map(find_h_zero).collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumConstants {
    pub delta0: f64,
    pub delta1: f64,
    /// ∫_1^{√e} log t/(t+1) dt
    pub integral: f64,
    pub integral_error: f64,
    pub delta0_error: f64,
    pub delta1_error: f64,
}

fn log_over_t_plus_one(panels: usize) -> f64 {
    let gl = GaussLegendre::new(20);
    gl.integrate_composite(1.0, 0.5f64.exp(), panels, |t| t.ln() / (t + 1.0))
}

pub fn delta_constants() -> SpectrumConstants {
    let coarse = log_over_t_plus_one(4);
    let fine = log_over_t_plus_one(8);
    let err = (fine - coarse).abs() + 4.0 * f64::EPSILON;
    let l = (1.0 + 0.5f64.exp()).ln();
    SpectrumConstants {
        delta0: 1.0 - l + 2.0 * fine,
        delta1: 1.0 - 2.0 * l + 4.0 * fine,
        integral: fine,
        integral_error: err,
        delta0_error: 2.0 * err + 4.0 * f64::EPSILON,
        delta1_error: 4.0 * err + 8.0 * f64::EPSILON,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum BoundMode {
    /// max(|δ₁|, 1/2 + 2(log α)²)
    Prop71 { alpha: f64 },
    /// min(δ₀, 1/4 - (log u)²)
    Cor18 { u: f64 },
}

fn check_range(name: &'static str, v: f64) -> Result<()> {
    let lo = lower() * (1.0 - 4.0 * f64::EPSILON);
    if !(v >= lo && v <= 1.0) {
        return Err(Error::domain(name, v, "[1/√e, 1]"));
    }
    Ok(())
}

pub fn spectrum_bounds(mode: BoundMode) -> Result<f64> {
    let c = delta_constants();
    match mode {
        BoundMode::Prop71 { alpha } => {
            check_range("α", alpha)?;
            Ok(c.delta1.abs().max(0.5 + 2.0 * alpha.ln().powi(2)))
        }
        BoundMode::Cor18 { u } => {
            check_range("u", u)?;
            // (log u)² can exceed 1/4 by rounding at the left endpoint
            Ok(c.delta0.min(0.25 - u.ln().powi(2)).max(0.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn value_at_zero() {
        let expected = 2.0 * (1.0 - lower());
        assert!((h_eval(c(0.0, 0.0)).re - expected).abs() < 1e-15);
        assert!((h_eval(c(0.0, 0.0)).re - 0.786939).abs() < 1e-6);
    }

    #[test]
    fn reference_values() {
        // mpmath quad at 30 digits
        assert!((h_eval(c(-1.0, 0.0)) - c(1.21089303895523486, 0.0)).norm() < 1e-13);
        let v = h_eval(c(3.0, 4.0));
        assert!((v - c(0.13295479761701078, -0.17279314648176118)).norm() < 1e-13);
    }

    #[test]
    fn series_and_quadrature_agree() {
        assert!((h_taylor(c(-1.0, 0.0)) - g_integral(c(-1.0, 0.0)) * 2.0 / c(-1.0, 0.0)).norm() < 1e-12);
        for z in [c(0.099, 0.0), c(0.05, -0.08), c(-0.1, 0.0), c(0.0, 0.1)] {
            let q = g_integral(z) * 2.0 / z;
            assert!((h_taylor(z) - q).norm() < 1e-13, "{z}");
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for z in [c(0.03, 0.02), c(-1.5, 7.0), c(2.0, -3.0)] {
            let h = 1e-6;
            let fd = (h_eval(z + h) - h_eval(z - h)) / (2.0 * h);
            assert!((h_derivative(z) - fd).norm() < 1e-7, "{z}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for z in [c(-2.0, 5.0), c(0.3, 0.04), c(1.0, -9.0)] {
            assert!((h_eval(z.conj()) - h_eval(z).conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn first_zero() {
        let seed = asymptotic_zero(1);
        assert!((seed - c(-1.1447, 7.8540)).norm() < 1e-4);
        let z = find_h_zero(1).unwrap();
        assert!((z.z - c(-0.565139996435, 7.93022735694)).norm() < 1e-9);
        assert!(z.residual < 1e-10);
        assert_eq!(z.winding, 1);
        assert!(h_eval(z.z.conj()).norm() < 1e-10);
    }

    #[test]
    fn tenth_zero() {
        let z = find_h_zero(10).unwrap();
        assert!((z.z - c(-3.89902508634, 64.2679872586)).norm() < 1e-9);
        assert!((z.asymptotic_gap - 0.4714).abs() < 1e-3);
    }

    #[test]
    fn constants() {
        let k = delta_constants();
        assert!((k.delta0 - 0.171500493141536).abs() < 1e-13);
        assert!((k.delta1 + 0.656999013716928).abs() < 1e-13);
        assert!((k.delta1 - (2.0 * k.delta0 - 1.0)).abs() < 1e-12);
        let doubled = log_over_t_plus_one(16);
        assert!((doubled - k.integral).abs() <= k.integral_error);
    }

    #[test]
    fn bound_modes() {
        let k = delta_constants();
        assert_eq!(spectrum_bounds(BoundMode::Prop71 { alpha: 1.0 }).unwrap(), k.delta1.abs());
        assert_eq!(spectrum_bounds(BoundMode::Cor18 { u: 1.0 }).unwrap(), k.delta0);
        assert_eq!(spectrum_bounds(BoundMode::Cor18 { u: lower() }).unwrap(), 0.0);
        assert!(spectrum_bounds(BoundMode::Cor18 { u: 0.5 }).is_err());
        assert!(spectrum_bounds(BoundMode::Prop71 { alpha: 1.1 }).is_err());
    }

    #[test]
    fn count_limit() {
        assert!(find_h_zeros(201).is_err());
    }
}
