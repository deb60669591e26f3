//! Large partial sums of products and powers of multiplicative functions.

use super::config::Constants;
use crate::error::{Error, Result};
use crate::multfn::{distance_sq_to_twist, find_phi_and_m, mean_value, witness_with_data, Multiplicative, Power, Product, Witness};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ProductSearch {
    pub f1: String,
    pub f2: String,
    pub x1: f64,
    pub x2: f64,
    pub eta: f64,
    pub mean1: Complex64,
    pub mean2: Complex64,
    pub hypothesis_ok: bool,
    pub phi1: f64,
    pub phi2: f64,
    /// φ₁ + φ₂, the twist carried to the product
    pub phi: f64,
    pub big_x: f64,
    pub distance1: f64,
    pub distance2: f64,
    /// 𝔻(f₁f₂, n^{iφ}; X)
    pub distance_product: f64,
    pub triangle_ok: bool,
    pub x: f64,
    pub mean: Complex64,
    pub mean_abs: f64,
    pub xi_report: f64,
    pub x_floor: f64,
    pub conclusion_ok: Option<bool>,
    pub constants: Constants,
    pub witness: Witness,
}

fn check_x(what: &'static str, x: f64) -> Result<()> {
    if !(x >= 2.0) {
        return Err(Error::domain(what, x, "[2, ∞)"));
    }
    Ok(())
}

/// Verify |x_j^{-1} Σ_{n<=x_j} f_j(n)| >= η, then search for a large mean of f₁f₂ below
/// X = min(x₁, x₂). A failed hypothesis leaves the report in report-only mode.
pub fn product_large_sum_search(
    f1: &dyn Multiplicative,
    f2: &dyn Multiplicative,
    x1: f64,
    x2: f64,
    eta: f64,
    constants: &Constants,
) -> Result<ProductSearch> {
    check_x("x₁", x1)?;
    check_x("x₂", x2)?;
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::domain("η", eta, "(0, 1]"));
    }
    let mean1 = mean_value(f1, x1)?;
    let mean2 = mean_value(f2, x2)?;
    let hypothesis_ok = mean1.norm() >= eta && mean2.norm() >= eta;
    let phi1 = find_phi_and_m(f1, x1)?.phi;
    let phi2 = find_phi_and_m(f2, x2)?.phi;
    let phi = phi1 + phi2;
    let big_x = x1.min(x2);

    let product = Product { left: f1, right: f2 };
    let distance1 = distance_sq_to_twist(f1, phi1, big_x)?.max(0.0).sqrt();
    let distance2 = distance_sq_to_twist(f2, phi2, big_x)?.max(0.0).sqrt();
    let distance_product = distance_sq_to_twist(&product, phi, big_x)?.max(0.0).sqrt();

    let data = find_phi_and_m(&product, big_x)?;
    let witness = witness_with_data(&product, big_x, constants.c_witness, &data)?;
    let xi_report = constants.c_xi * eta.powi(6);
    let x_floor = big_x.powf(xi_report);
    let mean_abs = witness.mean.norm();
    Ok(ProductSearch {
        f1: f1.label(),
        f2: f2.label(),
        x1,
        x2,
        eta,
        mean1,
        mean2,
        hypothesis_ok,
        phi1,
        phi2,
        phi,
        big_x,
        distance1,
        distance2,
        distance_product,
        triangle_ok: distance_product <= distance1 + distance2 + 1e-12,
        x: witness.y,
        mean: witness.mean,
        mean_abs,
        xi_report,
        x_floor,
        conclusion_ok: hypothesis_ok.then_some(witness.y >= x_floor && mean_abs >= xi_report),
        constants: *constants,
        witness,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerSearch {
    pub f: String,
    pub k: u32,
    pub x: f64,
    pub eta: f64,
    pub mean: Complex64,
    pub hypothesis_ok: bool,
    pub phi: f64,
    pub distance: f64,
    /// 𝔻(f^k, n^{ikφ}; x), at most k times the distance above
    pub distance_power: f64,
    pub triangle_ok: bool,
    pub exponent: f64,
    pub y_floor: f64,
    pub y: f64,
    pub power_mean: Complex64,
    pub power_mean_abs: f64,
    pub y_ok: bool,
    pub mean_ok: bool,
    pub conclusion_ok: Option<bool>,
    pub constants: Constants,
    pub witness: Witness,
}

/// From |x^{-1} Σ f(n)| >= η look for y >= x^{cη^{2k²}} with a large mean of f^k.
pub fn power_large_sum_search(f: &dyn Multiplicative, x: f64, eta: f64, k: u32, constants: &Constants) -> Result<PowerSearch> {
    check_x("x", x)?;
    if k == 0 {
        return Err(Error::domain("k", k, "positive integers"));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::domain("η", eta, "(0, 1]"));
    }
    let mean = mean_value(f, x)?;
    let hypothesis_ok = mean.norm() >= eta;
    let phi = find_phi_and_m(f, x)?.phi;
    let power = Power { inner: f, k };
    let distance = distance_sq_to_twist(f, phi, x)?.max(0.0).sqrt();
    let distance_power = distance_sq_to_twist(&power, k as f64 * phi, x)?.max(0.0).sqrt();
    let data = find_phi_and_m(&power, x)?;
    let witness = witness_with_data(&power, x, constants.c_witness, &data)?;
    let exponent = constants.c_power * eta.powf(2.0 * (k * k) as f64);
    let y_floor = x.powf(exponent);
    let power_mean_abs = witness.mean.norm();
    let y_ok = witness.y >= y_floor;
    let mean_ok = power_mean_abs >= exponent;
    Ok(PowerSearch {
        f: f.label(),
        k,
        x,
        eta,
        mean,
        hypothesis_ok,
        phi,
        distance,
        distance_power,
        triangle_ok: distance_power <= k as f64 * distance + 1e-12,
        exponent,
        y_floor,
        y: witness.y,
        power_mean: witness.mean,
        power_mean_abs,
        y_ok,
        mean_ok,
        conclusion_ok: hypothesis_ok.then_some(y_ok && mean_ok),
        constants: *constants,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::Character;
    use crate::multfn::CompletelyMultiplicativeFunction as Cmf;
    use crate::sieve::PrimeTable;
    use std::sync::Arc;

    fn table(n: u64) -> Arc<PrimeTable> {
        Arc::new(PrimeTable::new(n).unwrap())
    }

    #[test]
    fn legendre_squared_is_coprimality() {
        let t = table(10_000);
        let chi = Cmf::character(t.clone(), &Character::from_label(5, 4).unwrap());
        let r = product_large_sum_search(&chi, &chi, 10_000.0, 10_000.0, 0.01, &Constants::default()).unwrap();
        let prod = Product { left: &chi, right: &chi };
        assert!((mean_value(&prod, 1e4).unwrap().re - 0.8).abs() < 1e-3);
        assert!(r.triangle_ok);
        assert!(r.mean_abs >= 0.8);
    }

    #[test]
    fn opposite_twists_cancel() {
        let t = table(10_000);
        let a = Cmf::n_to_i(t.clone(), 0.3);
        let b = Cmf::n_to_i(t, -0.3);
        let r = product_large_sum_search(&a, &b, 10_000.0, 10_000.0, 0.5, &Constants::default()).unwrap();
        assert!((r.mean - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(r.phi.abs() < 1e-3);
    }

    #[test]
    fn order_four_squared() {
        let t = table(10_000);
        let chi = Character::from_label(13, 5).unwrap();
        assert_eq!(chi.order(), 4);
        let f = Cmf::character(t, &chi);
        let r = power_large_sum_search(&f, 10_000.0, 0.01, 2, &Constants::default()).unwrap();
        assert!(r.triangle_ok);
        assert!(r.y_ok);
        assert!(r.witness.y <= 10_000.0);
    }
}
