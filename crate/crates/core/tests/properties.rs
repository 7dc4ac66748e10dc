//! Invariants checked on generated inputs.

mod common;

use annulus_core::fock::{abelianization, index_word, monomial_norm_sq, word_index};
use annulus_core::linalg::CMat;
use annulus_core::pick::{grid, psd_check};
use annulus_core::*;
use common::cx;
use proptest::prelude::*;

fn ctx(r: f64) -> Context {
    Context::new(r).unwrap()
}

fn coeff() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| cx(a, b))
}

fn laurent(lo: i32, hi: i32) -> impl Strategy<Value = Laurent> {
    prop::collection::vec(coeff(), (hi - lo + 1) as usize)
        .prop_map(move |cs| Laurent::from_slice(lo, &cs))
}

fn point(r: f64) -> impl Strategy<Value = C64> {
    (r + 0.01..0.99f64, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| C64::from_polar(m, t))
}

fn radius() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.3, 0.5, 0.8])
}

fn nonzero_poly(deg: usize) -> impl Strategy<Value = Laurent> {
    prop::collection::vec(coeff(), deg + 1)
        .prop_filter("leading term", move |cs| cs[deg].norm() > 0.1)
        .prop_map(|cs| Laurent::from_slice(0, &cs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_is_hermitian(r in radius(), seed in any::<u64>()) {
        let c = ctx(r);
        let mut rng = common::rng(seed);
        let l = common::annulus_point(&mut rng, r);
        let m = common::annulus_point(&mut rng, r);
        let a = kernel_eval(KernelId::AnnulusPick, l.into(), m.into(), &c).unwrap();
        let b = kernel_eval(KernelId::AnnulusPick, m.into(), l.into(), &c).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn annulus_kernel_is_scaled_drury_arveson(r in radius(), seed in any::<u64>()) {
        let c = ctx(r);
        let mut rng = common::rng(seed);
        let l = common::annulus_point(&mut rng, r);
        let m = common::annulus_point(&mut rng, r);
        let k = kernel_eval(KernelId::AnnulusPick, l.into(), m.into(), &c).unwrap();
        let ul = embed_point(l, &c).unwrap();
        let um = embed_point(m, &c).unwrap();
        let da = kernel_eval(KernelId::DruryArveson2, KernelPoint::Ball(ul), KernelPoint::Ball(um), &c).unwrap();
        let scale = (1.0 - r * r) / (1.0 + r * r);
        prop_assert!((k - da * scale).norm() <= 1e-10 * k.norm().max(1.0));
    }

    #[test]
    fn reflection_is_isometric_involution(r in radius(), f in laurent(-4, 4)) {
        let c = ctx(r);
        let g = f.reflect_to_disk0(&c);
        prop_assert!((g.norm_sq(&c) - f.norm_sq(&c)).abs() <= 1e-12 * f.norm_sq(&c).max(1.0));
        prop_assert!((&g.reflect_to_disk0(&c) - &f).max_abs_coeff() <= 1e-12);
    }

    #[test]
    fn multiplication_is_pointwise(r in radius(), f in laurent(-3, 3), g in laurent(-2, 4), z in point(0.3)) {
        let c = ctx(r);
        prop_assume!(c.contains(z));
        let lhs = (&f * &g).eval_at(z).unwrap();
        let rhs = f.eval_at(z).unwrap() * g.eval_at(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0));
    }

    #[test]
    fn reproducing_identity(r in radius(), f in laurent(-5, 5), seed in any::<u64>()) {
        let c = ctx(r);
        let lambda = common::annulus_point(&mut common::rng(seed), r);
        let chk = f.reproducing_check(lambda, &c).unwrap();
        prop_assert!(chk.within_bound());
    }

    #[test]
    fn inner_factors_preserve_moments(r in radius(), f in nonzero_poly(3), k in 1i32..4) {
        let c = ctx(r);
        let shifted = f.shift(k);
        prop_assert!(moments_equal(&shifted, &f, &c));
    }

    #[test]
    fn classical_factorization_reassembles(f in nonzero_poly(4)) {
        let c = ctx(0.5);
        let fac = poly_inner_outer(&f, &c).unwrap();
        prop_assert!(fac.reassembly_error(&f).unwrap() <= 1e-8 * f.max_abs_coeff().max(1.0));
        prop_assert!(fac.boundary_modulus_defect(64).unwrap() <= 1e-9);
        let fr = fejer_riesz_outer(&autocorrelation(&f), &c).unwrap();
        let scale = fac.outer.coeff(0).norm() / fac.outer.coeff(0);
        let outer = fac.outer.scale(scale);
        prop_assert!((&fr - &outer).max_abs_coeff() <= 1e-7 * f.max_abs_coeff().max(1.0));
    }

    #[test]
    fn embedding_is_linear(f in laurent(-3, 3), g in laurent(-3, 3), a in coeff()) {
        let c = ctx(0.5);
        let sum = &f.scale(a) + &g;
        let ef = da_embedding_coeffs(&f, &c, 12);
        let eg = da_embedding_coeffs(&g, &c, 12);
        let es = da_embedding_coeffs(&sum, &c, 12);
        for i in 0..=12 {
            for j in 0..=12 - i {
                let d = es.get(i, j) - (ef.get(i, j) * a + eg.get(i, j));
                prop_assert!(d.norm() <= 1e-13);
            }
        }
    }

    #[test]
    fn fock_norm_matches_drury_arveson(f in laurent(-2, 2), m in 1usize..8) {
        let c = ctx(0.5);
        let e = da_embedding_coeffs(&f, &c, m);
        let nc = NcSeries::lift(&e, m).unwrap();
        let mut da = 0.0;
        for i in 0..=m {
            for j in 0..=m - i {
                da += e.get(i, j).norm_sqr() / monomial_norm_sq::<f64>(i, j);
            }
        }
        prop_assert!((nc.norm_sq() - da).abs() <= 1e-12 * da.max(1.0));
    }

    #[test]
    fn isometry_gap_within_tail(r in radius(), f in laurent(-3, 3)) {
        let c = ctx(r);
        let chk = da_isometry_check(&f, &c, 60).unwrap();
        prop_assert!(chk.gap <= chk.tail_bound + 1e-10);
    }

    #[test]
    fn json_round_trip(f in laurent(-4, 4)) {
        let s = serde_json::to_string(&f).unwrap();
        let back: Laurent = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn words_and_indices_agree(idx in 0usize..4095) {
        let w = index_word(idx);
        prop_assert_eq!(word_index(&w), idx);
        let (i, j) = abelianization(idx);
        prop_assert_eq!(i, w.iter().filter(|&&l| l == 1).count());
        prop_assert_eq!(j, w.iter().filter(|&&l| l == 2).count());
    }

    #[test]
    fn psd_agrees_with_minors_2x2(a in -2.0..2.0f64, d in -2.0..2.0f64, b in coeff()) {
        let m = CMat::from_rows(&[vec![cx(a, 0.0), b], vec![b.conj(), cx(d, 0.0)]]);
        let det = a * d - b.norm_sqr();
        // stay clear of the tolerance band
        prop_assume!(det.abs() > 1e-6 && a.abs() > 1e-6 && d.abs() > 1e-6);
        let minors = a > 0.0 && d > 0.0 && det > 0.0;
        prop_assert_eq!(psd_check(&m, 1e-10).unwrap().psd, minors);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn psd_agrees_with_minors_3x3(v in prop::collection::vec(coeff(), 9), shift in -1.0..2.0f64) {
        // B·B^* − shift·I with an exact Sylvester test on all principal minors
        let bm = |i: usize, j: usize| v[3 * i + j];
        let m = CMat::from_fn(3, 3, |i, j| {
            let mut s = cx(0.0, 0.0);
            for k in 0..3 {
                s += bm(i, k) * bm(j, k).conj();
            }
            if i == j { s - cx(shift, 0.0) } else { s }
        });
        let e = |i: usize, j: usize| m.to_rows()[i][j];
        let det2 = |i: usize, j: usize| (e(i, i) * e(j, j) - e(i, j) * e(j, i)).re;
        let det3 = (e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0)))
            .re;
        let all = [e(0, 0).re, e(1, 1).re, e(2, 2).re, det2(0, 1), det2(0, 2), det2(1, 2), det3];
        prop_assume!(all.iter().all(|x| x.abs() > 1e-4));
        let minors = all.iter().all(|x| *x > 0.0);
        prop_assert_eq!(psd_check(&m, 1e-10).unwrap().psd, minors);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cyclicity_residual_monotone_and_bounded(f in nonzero_poly(2)) {
        let c = ctx(0.5);
        let mut prev = f64::INFINITY;
        for d in [1, 2, 4, 8] {
            let res = cyclicity_residual(&f, &c, d).unwrap();
            prop_assert!(res.residual >= res.lower_bound - 1e-9);
            prop_assert!(res.residual <= prev + 1e-9);
            prev = res.residual;
        }
    }

    #[test]
    fn nested_grids_raise_pick_bound(f in laurent(0, 2)) {
        prop_assume!(!f.is_zero());
        let c = ctx(0.5);
        let coarse = mult_norm_bounds(&f, &c, 8).unwrap();
        let fine = mult_norm_bounds(&f, &c, 16).unwrap();
        prop_assert!(fine.lower >= coarse.lower - 1e-8 * coarse.upper.max(1.0));
        prop_assert!(fine.lower <= fine.upper * (1.0 + 1e-8));
    }
}

#[test]
fn grid_is_inside_annulus() {
    for r in [0.3, 0.5, 0.8] {
        let c = ctx(r);
        assert!(grid(&c, 40).iter().all(|&z| c.contains(z)));
    }
}

#[test]
fn single_precision_smoke() {
    let c = Context32::new(0.5).unwrap();
    let f = Laurent32::from_real(-1, &[1.0, 2.0]);
    assert!((f.norm_sq(&c) - 8.0).abs() < 1e-5);
    let fac = factor_subinner_free_outer(&Laurent32::from_real(0, &[-2.0, 1.0]), &c).unwrap();
    assert!((fac.evidence.h_at_z0.re - (2.0 - 0.5f32.sqrt())).abs() < 1e-5);
    let chk = da_isometry_check(&Laurent32::one(), &c, 30).unwrap();
    assert!((chk.lhs - 0.6).abs() < 1e-5);
}
