//! Special functions: complementary error function, complex log-gamma and
//! digamma, and the Bernoulli coefficients used by Euler–Maclaurin.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// erfc for real arguments (rational approximations, relative error near one ulp).
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// log Γ(z) for complex z away from the non-positive integers.
///
/// Lanczos (g = 7, nine terms) on Re z >= 1/2, reflection elsewhere. The
/// imaginary part is a continuous branch on each half plane but is not
/// normalised to the principal branch of log Γ; callers only use `exp`,
/// magnitudes, or argument differences.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let sin_pi_z = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - sin_pi_z.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// ψ(z) = Γ'(z)/Γ(z): upward recurrence to Re z >= 12, then the asymptotic series.
pub fn digamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // ψ(1-z) - ψ(z) = π cot(πz)
        let pz = z * PI;
        return digamma(Complex64::new(1.0, 0.0) - z) - PI * pz.cos() / pz.sin();
    }
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 12.0 {
        shift -= z.inv();
        z += 1.0;
    }
    let inv2 = (z * z).inv();
    // Σ B_{2k} / (2k z^{2k}), k = 1..8
    const B: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let mut tail = Complex64::new(0.0, 0.0);
    let mut pow = inv2;
    for (k, &b) in B.iter().enumerate() {
        tail += pow * (b / (2.0 * (k + 1) as f64));
        pow *= inv2;
    }
    shift + z.ln() - 0.5 * z.inv() - tail
}

/// B_{2k}/(2k)! for k = 0..=32 (index 0 holds B_0 = 1).
///
/// Uses B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}.
pub fn bernoulli_over_factorial() -> &'static [f64; 33] {
    static TABLE: OnceLock<[f64; 33]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0f64; 33];
        table[0] = 1.0;
        let two_pi = 2.0 * PI;
        for (k, slot) in table.iter_mut().enumerate().skip(1) {
            let zeta = even_zeta(2 * k as u32);
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta / two_pi.powi(2 * k as i32);
        }
        table
    })
}

fn even_zeta(s: u32) -> f64 {
    match s {
        2 => PI * PI / 6.0,
        4 => PI.powi(4) / 90.0,
        6 => PI.powi(6) / 945.0,
        _ => (1..=2000u32).rev().map(|n| (n as f64).powi(-(s as i32))).sum(),
    }
}
