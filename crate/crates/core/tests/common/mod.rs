#![allow(dead_code)]

use annulus_core::{Laurent, C64};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn cx(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn unit_box(rng: &mut ChaCha8Rng) -> C64 {
    cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Laurent polynomial with coefficients in the unit box on `[lo, hi]`.
pub fn random_laurent(rng: &mut ChaCha8Rng, lo: i32, hi: i32) -> Laurent {
    Laurent::from_terms((lo..=hi).map(|n| (n, unit_box(rng))))
}

/// Polynomial `c·∏(z − a_k)` with root moduli log-uniform in `[lo, hi]`.
pub fn random_rooted(rng: &mut ChaCha8Rng, degree: usize, lo: f64, hi: f64) -> Laurent {
    let roots: Vec<C64> = (0..degree)
        .map(|_| {
            let m = rng.gen_range(lo.ln()..hi.ln()).exp();
            Complex::from_polar(m, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    let lead = Complex::from_polar(
        rng.gen_range(0.5..2.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    Laurent::from_roots(&roots).scale(lead)
}

/// Uniform point of `A_r` in radius and angle.
pub fn annulus_point(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    let rho = rng.gen_range(r..1.0);
    let rho = if rho <= r { (r + 1.0) / 2.0 } else { rho };
    Complex::from_polar(rho, rng.gen_range(0.0..std::f64::consts::TAU))
}
