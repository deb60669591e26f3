//! Cross-module properties over corpora of characters and random multiplicative functions.

use charzero::dirichlet::{primitive_characters, Character};
use charzero::lfunction::l_value;
use charzero::multfn::{
    dirichlet_series_gap, distance_sq, find_phi_and_m, halasz_from_data, mean_value, prop61_witness,
    slow_variation_probe, truncated_f, CompletelyMultiplicativeFunction as Cmf, Multiplicative,
};
use charzero::plancherel::{plancherel_check, PlancherelCase};
use charzero::sieve::PrimeTable;
use charzero::spectral::{find_h_zeros, h_eval};
use charzero::zeros::ZeroFinder;
use charzero::contour::Rect;
use charzero::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::{Arc, OnceLock};

const SEED: u64 = 0x5eed_c0de;

fn table(limit: u64) -> Arc<PrimeTable> {
    static T5: OnceLock<Arc<PrimeTable>> = OnceLock::new();
    static T6: OnceLock<Arc<PrimeTable>> = OnceLock::new();
    match limit {
        100_000 => T5.get_or_init(|| Arc::new(PrimeTable::new(100_000).unwrap())).clone(),
        1_000_000 => T6.get_or_init(|| Arc::new(PrimeTable::new(1_000_000).unwrap())).clone(),
        n => Arc::new(PrimeTable::new(n).unwrap()),
    }
}

/// Prime values uniform on the unit circle.
fn random_unimodular(t: Arc<PrimeTable>, seed: u64) -> Cmf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Cmf::from_prime_fn(t, format!("circle:{seed}"), |_| {
        Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
    })
    .unwrap()
}

#[test]
fn halasz_ratio_on_random_signs() {
    let t = table(100_000);
    let x = 1e5;
    let mut worst: f64 = 0.0;
    for j in 0..200 {
        let f = Cmf::random_sign(t.clone(), SEED + j);
        let data = find_phi_and_m(&f, x).unwrap();
        let b = halasz_from_data(&data, mean_value(&f, x).unwrap().norm());
        assert!(data.phi.abs() <= x.ln());
        assert!(data.log_abs_f.exp() >= data.grid_max() * (1.0 - 1e-12));
        worst = worst.max(b.ratio);
    }
    println!("max Halász ratio over 200 random ±1 functions at x = 1e5: {worst:.4}");
    assert!(worst <= 20.0);
}

#[test]
fn log_euler_product_tracks_distance() {
    let t = table(1_000_000);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for j in 0..12 {
        let f: Box<dyn Multiplicative> = match j % 3 {
            0 => Box::new(Cmf::random_sign(t.clone(), SEED + j)),
            1 => Box::new(random_unimodular(t.clone(), SEED + j)),
            _ => Box::new(Cmf::character(t.clone(), &Character::from_label(7, 3).unwrap())),
        };
        for x in [1e4, 1e5, 1e6] {
            for _ in 0..3 {
                let s: f64 = rng.gen_range(-1.0..1.0);
                let tt = s * f64::ln(x);
                let gap = dirichlet_series_gap(f.as_ref(), x, tt).unwrap();
                assert!(gap.abs() <= 2.0, "{} x={x} t={tt}: {gap}", f.label());
            }
        }
    }
}

#[test]
fn distance_triangle_inequality() {
    let t = table(10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut max_violation = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let seeds: [u64; 3] = rng.gen();
        let kinds: [u8; 3] = [rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..3)];
        let make = |k: u8, s: u64| -> Cmf {
            match k {
                0 => Cmf::random_sign(t.clone(), s),
                1 => random_unimodular(t.clone(), s),
                _ => Cmf::n_to_i(t.clone(), (s % 2000) as f64 / 1000.0 - 1.0),
            }
        };
        let f = make(kinds[0], seeds[0]);
        let g = make(kinds[1], seeds[1]);
        let h = make(kinds[2], seeds[2]);
        let x: f64 = rng.gen_range(10.0..10_000.0);
        let d = |a: &Cmf, b: &Cmf| distance_sq(a, b, x).unwrap().max(0.0).sqrt();
        let v = d(&f, &h) - d(&f, &g) - d(&g, &h);
        max_violation = max_violation.max(v);
    }
    assert!(max_violation <= 1e-12, "{max_violation}");
}

#[test]
fn distance_symmetric_and_monotone() {
    let t = table(10_000);
    let f = random_unimodular(t.clone(), 1);
    let g = Cmf::character(t, &Character::from_label(11, 2).unwrap());
    let mut last = 0.0;
    for x in [2.0, 10.0, 100.0, 1000.0, 10_000.0] {
        let a = distance_sq(&f, &g, x).unwrap();
        assert_eq!(a, distance_sq(&g, &f, x).unwrap());
        assert!(a >= last && a >= 0.0);
        last = a;
    }
}

#[test]
fn series_matches_l_function() {
    let t = table(100_000);
    let chi = Character::from_label(5, 4).unwrap();
    let f = Cmf::character(t, &chi);
    let s = Complex64::new(2.0, 0.0);
    let series = truncated_f(&f, s, 100_000).unwrap();
    let l = l_value(&chi, s).unwrap();
    assert!(series.tail_bound < 1e-4);
    assert!((series.value - l.value).norm() <= series.tail_bound + l.error_bound);
    // the character sum cancels in blocks of 5, so the true truncation error is far smaller
    assert!((series.value - l.value).norm() < 1e-10);
}

#[test]
fn legendre_five_probes() {
    let t = table(100_000);
    let f = Cmf::character(t, &Character::from_label(5, 4).unwrap());
    let data = find_phi_and_m(&f, 1e4).unwrap();
    let direct = distance_sq(&f, &Cmf::n_to_i(f.shared_table().clone(), data.phi), 1e4).unwrap();
    assert!((data.m - direct).abs() < 1e-12);
    let sv = slow_variation_probe(&f, 1e4, 1e5).unwrap();
    assert!(sv.hal3_delta.is_finite());
    assert!(sv.hal3_delta <= 10.0 * sv.hal3_reference);
    let w = prop61_witness(&f, 1e4, 3.0).unwrap();
    assert!(w.y >= w.lower && w.y <= 1e4);
    assert!(w.mean.norm() >= w.guarantee / 50.0);
}

#[test]
fn twist_witness() {
    let t = table(100_000);
    let f = Cmf::n_to_i(t, 1.0);
    let w = prop61_witness(&f, 1e5, 3.0).unwrap();
    // the mean at y = x alone is about |1/(1+i)|, and the search maximises over y
    assert!(w.mean.norm() >= std::f64::consts::FRAC_1_SQRT_2 - 0.01);
    assert!(w.mean.norm() >= w.guarantee / 2.0);
}

#[test]
fn plancherel_conjugation_on_a_sample() {
    for (q, m) in [(5u64, 2u64), (7, 3), (8, 5), (11, 2)] {
        let chi = Character::from_label(q, m).unwrap();
        for (phi, lambda, tt) in [(0.3, 0.25, 0.25), (-1.7, 0.5, 4.0)] {
            let a = plancherel_check(&PlancherelCase::new(chi.clone(), phi, lambda, tt).unwrap()).unwrap();
            let b = plancherel_check(&PlancherelCase::new(chi.conjugate(), -phi, lambda, tt).unwrap()).unwrap();
            assert!((a.lhs.conj() - b.lhs).norm() <= 1e-10 * (1.0 + a.lhs.norm()));
            assert!((a.rhs.conj() - b.rhs).norm() <= 1e-8 * (1.0 + a.rhs.norm()));
        }
    }
}

#[test]
fn conjugate_characters_have_conjugate_zeros() {
    let chi = Character::from_label(5, 2).unwrap();
    let up = ZeroFinder::new(chi.clone()).unwrap().locate(&Rect::new(0.0, 1.0, 0.5, 15.0).unwrap()).unwrap();
    let down = ZeroFinder::new(chi.conjugate())
        .unwrap()
        .locate(&Rect::new(0.0, 1.0, -15.0, -0.5).unwrap())
        .unwrap();
    assert_eq!(up.len(), down.len());
    for z in &up {
        assert!(down.iter().any(|w| (w.rho() - z.rho().conj()).norm() < 1e-8));
    }
}

#[test]
fn h_zero_strips_through_fifty() {
    let zeros = find_h_zeros(50).unwrap();
    for z in &zeros {
        assert_eq!(z.winding, 1, "k = {}", z.k);
        assert!(z.z.re < 0.0);
        assert!(z.residual <= 1e-10);
        assert!(h_eval(z.z.conj()).norm() <= 1e-10);
    }
    assert!(zeros.windows(2).all(|w| w[0].z.im < w[1].z.im));
}

#[test]
fn primitive_counts() {
    // number of primitive characters mod q is multiplicative with p -> p - 2, p^2 -> (p-1)^2
    assert_eq!(primitive_characters(7).unwrap().len(), 5);
    assert_eq!(primitive_characters(9).unwrap().len(), 4);
    assert_eq!(primitive_characters(8).unwrap().len(), 2);
    assert_eq!(primitive_characters(4).unwrap().len(), 1);
    assert_eq!(primitive_characters(63).unwrap().len(), 20);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_conjugate_symmetry(re in -8.0f64..4.0, im in -60.0f64..60.0) {
        let z = Complex64::new(re, im);
        let a = h_eval(z.conj());
        let b = h_eval(z).conj();
        prop_assert!((a - b).norm() <= 1e-13 * (1.0 + a.norm()));
    }

    #[test]
    fn distance_terms_bounded(seed in any::<u64>(), x in 2.0f64..5000.0) {
        let t = table(5000);
        let f = random_unimodular(t.clone(), seed);
        let g = Cmf::random_sign(t.clone(), seed ^ 0xff);
        let d = distance_sq(&f, &g, x).unwrap();
        let cap: f64 = t.primes().iter().take_while(|&&p| p as f64 <= x).map(|&p| 2.0 / p as f64).sum();
        prop_assert!(d >= -1e-15 && d <= cap + 1e-12);
        prop_assert!(distance_sq(&f, &f, x).unwrap().abs() < 1e-12);
    }
}
