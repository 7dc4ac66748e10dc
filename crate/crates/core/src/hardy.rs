//! Classical inner–outer factorization of polynomials in `H²(D)` by root
//! reflection, its `H²(D₀)` mirror through `z ↦ r/z`, and Fejér–Riesz
//! spectral factorization as an independent route to the outer factor.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::context::AnnulusContext;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{hessenberg_eigenvalues, CMat};
use crate::rational::RationalFn;
use crate::scalar::{cis, from_usize, lit, modulus, real, unit_phase, Cx, Scalar};

/// Relative distance under which companion eigenvalues are merged.
const CLUSTER_TOL: f64 = 1e-6;
/// Roots with modulus `>= 1 - BOUNDARY_TOL` belong to the outer factor.
const BOUNDARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct PolyRoots<T: Scalar> {
    #[serde(with = "crate::cxser")]
    pub leading: Cx<T>,
    #[serde(with = "crate::cxser::vec")]
    pub roots: Vec<Cx<T>>,
}

impl<T: Scalar> PolyRoots<T> {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// `leading · ∏ (z − root)`.
    pub fn reconstruct(&self) -> LaurentPoly<T> {
        LaurentPoly::from_roots(&self.roots).scale(self.leading)
    }
}

/// Roots of a polynomial (support in `[0, ∞)`) from the eigenvalues of the
/// companion matrix of its monic normalization, Newton-polished and with
/// near-coincident roots merged.
pub fn poly_roots<T: Scalar>(p: &LaurentPoly<T>) -> Result<PolyRoots<T>> {
    let (lo, hi) = p.support().ok_or(Error::ZeroPolynomial)?;
    if lo < 0 {
        return Err(Error::WrongSubspace {
            what: "p",
            space: "polynomials",
        });
    }
    let leading = p.coeff(hi);
    let mut roots = vec![Complex::zero(); lo as usize];
    let q = p.shift(-lo);
    let d = (hi - lo) as usize;
    if d > 0 {
        let coeffs = q.dense(0, d as i32);
        let companion = CMat::from_fn(d, d, |i, j| {
            if i == 0 {
                -coeffs[d - 1 - j] / leading
            } else if i == j + 1 {
                Complex::one()
            } else {
                Complex::zero()
            }
        });
        let mut found = hessenberg_eigenvalues(&companion)?;
        for z in &mut found {
            *z = newton_polish(&coeffs, *z);
        }
        roots.extend(refine_multiple(&coeffs, cluster(found)));
    }
    Ok(PolyRoots { leading, roots })
}

fn horner<T: Scalar>(coeffs: &[Cx<T>], z: Cx<T>) -> (Cx<T>, Cx<T>) {
    let mut p = Complex::zero();
    let mut dp = Complex::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn newton_polish<T: Scalar>(coeffs: &[Cx<T>], mut z: Cx<T>) -> Cx<T> {
    let (mut pz, mut dpz) = horner(coeffs, z);
    for _ in 0..8 {
        if dpz.is_zero() || pz.is_zero() {
            break;
        }
        let next = z - pz / dpz;
        let (pn, dpn) = horner(coeffs, next);
        if modulus(pn) >= modulus(pz) {
            break;
        }
        z = next;
        pz = pn;
        dpz = dpn;
    }
    z
}

/// Re-polishes each cluster of multiplicity `k` as a simple root of the
/// `(k−1)`-th derivative.
fn refine_multiple<T: Scalar>(coeffs: &[Cx<T>], roots: Vec<Cx<T>>) -> Vec<Cx<T>> {
    let mut out = Vec::with_capacity(roots.len());
    let mut i = 0;
    while i < roots.len() {
        let k = roots[i..].iter().take_while(|&&z| z == roots[i]).count();
        let mut deriv = coeffs.to_vec();
        for _ in 1..k {
            deriv = deriv
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * from_usize::<T>(j))
                .collect();
        }
        let z = if k > 1 {
            newton_polish(&deriv, roots[i])
        } else {
            roots[i]
        };
        out.extend(std::iter::repeat_n(z, k));
        i += k;
    }
    out
}

fn cluster<T: Scalar>(mut roots: Vec<Cx<T>>) -> Vec<Cx<T>> {
    let tol = lit::<T>(CLUSTER_TOL);
    let mut out = Vec::with_capacity(roots.len());
    while let Some(seed) = roots.pop() {
        let radius = tol * modulus(seed).max(T::one());
        let (members, rest): (Vec<_>, Vec<_>) = roots
            .into_iter()
            .partition(|&z| modulus(z - seed) <= radius);
        roots = rest;
        let k = members.len() + 1;
        let mean = members.iter().fold(seed, |acc, &z| acc + z) / from_usize::<T>(k);
        out.extend(std::iter::repeat_n(mean, k));
    }
    out.sort_by(|a, b| {
        modulus(*a)
            .partial_cmp(&modulus(*b))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(
                a.arg()
                    .partial_cmp(&b.arg())
                    .unwrap_or(std::cmp::Ordering::Equal),
            )
    });
    out
}

/// Inner–outer pair of a one-sided polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DiskFactorization<T: Scalar> {
    /// Unimodular constant × monomial × finite Blaschke product.
    pub inner: RationalFn<T>,
    pub outer: LaurentPoly<T>,
    /// Unimodular constant carried by the inner factor.
    #[serde(with = "crate::cxser")]
    pub phase: Cx<T>,
    /// Radius of the circle on which `|inner| = 1` (1 on `D`, `r` on `D₀`).
    pub circle_radius: T,
    /// Zeros of the input absorbed by the inner factor.
    #[serde(with = "crate::cxser::vec")]
    pub inner_zeros: Vec<Cx<T>>,
}

impl<T: Scalar> DiskFactorization<T> {
    /// Max coefficient error of `inner · outer` against `p` (including the
    /// series division remainder).
    pub fn reassembly_error(&self, p: &LaurentPoly<T>) -> Result<T> {
        let (prod, rem) = self.inner.times_poly(&self.outer)?;
        Ok((&prod - p).max_abs_coeff().max(rem))
    }

    /// `max | |inner| − 1 |` over `n` equally spaced points of the circle.
    pub fn boundary_modulus_defect(&self, n: usize) -> Result<T> {
        let two_pi = T::PI() + T::PI();
        let mut worst = T::zero();
        for k in 0..n {
            let z = cis(two_pi * from_usize(k) / from_usize(n)) * real(self.circle_radius);
            worst = worst.max((modulus(self.inner.eval_at(z)?) - T::one()).abs());
        }
        Ok(worst)
    }
}

/// Classical inner–outer factorization in `H²(D)` of a polynomial.
///
/// Interior zeros `0 < |a| < 1` go to the Blaschke product, the zero at the
/// origin to `z^m`, and everything on or outside the circle to the outer
/// factor, which is normalized to `outer(0) > 0`.
pub fn poly_inner_outer<T: Scalar>(
    p: &LaurentPoly<T>,
    _ctx: &AnnulusContext<T>,
) -> Result<DiskFactorization<T>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_disk_analytic() {
        return Err(Error::WrongSubspace {
            what: "p",
            space: "H²(D)",
        });
    }
    let pr = poly_roots(p)?;
    let edge = T::one() - lit(BOUNDARY_TOL);
    let mut zero_mult = 0i32;
    let mut interior = Vec::new();
    let mut exterior = Vec::new();
    for &a in &pr.roots {
        if a.is_zero() {
            zero_mult += 1;
        } else if modulus(a) < edge {
            interior.push(a);
        } else {
            exterior.push(a);
        }
    }
    let one = LaurentPoly::<T>::one();
    let blaschke_den = interior.iter().fold(one.clone(), |acc, &a| {
        &acc * &LaurentPoly::from_slice(0, &[Complex::one(), -a.conj()])
    });
    let raw_outer =
        (&blaschke_den * &LaurentPoly::from_roots(&exterior)).scale(real(modulus(pr.leading)));
    let u = unit_phase(raw_outer.coeff(0)).conj();
    let outer = raw_outer.scale(u);
    let phase = unit_phase(pr.leading) / u;
    let num = LaurentPoly::from_roots(&interior)
        .shift(zero_mult)
        .scale(phase);
    let mut inner_zeros = vec![Complex::zero(); zero_mult as usize];
    inner_zeros.extend(interior);
    Ok(DiskFactorization {
        inner: RationalFn {
            num,
            den: blaschke_den,
        },
        outer,
        phase,
        circle_radius: T::one(),
        inner_zeros,
    })
}

/// Inner–outer factorization in `H²(D₀)`: reflect with `z ↦ r/z`, factor in
/// `H²(D)`, reflect both factors back.
pub fn disk0_inner_outer<T: Scalar>(
    p: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
) -> Result<DiskFactorization<T>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_disk0_analytic() {
        return Err(Error::WrongSubspace {
            what: "p",
            space: "H²(D₀)",
        });
    }
    let fac = poly_inner_outer(&p.reflect_to_disk0(ctx), ctx)?;
    Ok(DiskFactorization {
        inner: fac.inner.reflect_to_disk0(ctx),
        outer: fac.outer.reflect_to_disk0(ctx),
        phase: fac.phase,
        circle_radius: ctx.r,
        inner_zeros: fac
            .inner_zeros
            .iter()
            .filter(|a| !a.is_zero())
            .map(|&a| a.inv() * ctx.r)
            .collect(),
    })
}

/// `q_n = Σ_l p_{l+n} conj(p_l)`, so `Σ q_n e^{inθ} = |p(e^{iθ})|²`.
pub fn autocorrelation<T: Scalar>(p: &LaurentPoly<T>) -> BTreeMap<i32, Cx<T>> {
    let mut q = BTreeMap::new();
    let span = p.span() as i32;
    for n in -span..=span {
        let mut acc = Complex::zero();
        for (l, pl) in p.terms() {
            acc += p.coeff(l + n) * pl.conj();
        }
        q.insert(n, acc);
    }
    q
}

/// Outer polynomial `h` with `|h|² = Σ q_n e^{inθ}` on the circle and
/// `h(0) > 0`, by rooting `z^d Σ q_n z^n` and keeping the root of each
/// `(a, 1/ā)` pair that lies on or outside the circle.
pub fn fejer_riesz_outer<T: Scalar>(
    autocorr: &BTreeMap<i32, Cx<T>>,
    ctx: &AnnulusContext<T>,
) -> Result<LaurentPoly<T>> {
    let get = |n: i32| autocorr.get(&n).copied().unwrap_or_else(Complex::zero);
    let scale = autocorr.values().fold(T::zero(), |m, c| m.max(modulus(*c)));
    for (&n, &c) in autocorr {
        if modulus(c - get(-n).conj()) > ctx.tol_exact * scale.max(T::one()) {
            return Err(Error::DomainMismatch(format!(
                "autocorrelation not Hermitian at n = {n}"
            )));
        }
    }
    let d = autocorr
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&n, _)| n.abs())
        .max()
        .ok_or(Error::ZeroPolynomial)?;
    let trig = LaurentPoly::from_terms((-d..=d).map(|n| (n, get(n))));
    let grid = 2048usize;
    let two_pi = T::PI() + T::PI();
    let mut min_val = T::infinity();
    for k in 0..grid {
        let v = trig
            .eval_at(cis(two_pi * from_usize(k) / from_usize(grid)))?
            .re;
        min_val = min_val.min(v);
    }
    if min_val < -ctx.tol_exact * scale {
        return Err(Error::NotNonnegative(min_val.to_f64().unwrap_or(f64::NAN)));
    }
    let q0 = get(0).re;
    if d == 0 {
        return Ok(LaurentPoly::constant(real(q0.sqrt())));
    }
    let mut roots = poly_roots(&trig.shift(d))?.roots;
    roots.sort_by(|a, b| {
        modulus(*b)
            .partial_cmp(&modulus(*a))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    roots.truncate(d as usize);
    let monic = LaurentPoly::from_roots(&roots);
    let mag = (q0 / monic.terms().map(|(_, c)| c.norm_sqr()).sum::<T>()).sqrt();
    let u = unit_phase(monic.coeff(0)).conj();
    Ok(monic.scale(u * mag))
}

#[cfg(test)]
mod tests {
    use super::*;

    type L = LaurentPoly<f64>;

    fn c(re: f64) -> Cx<f64> {
        Complex::new(re, 0.0)
    }

    fn ctx() -> AnnulusContext<f64> {
        AnnulusContext::new(0.5).unwrap()
    }

    fn close(a: &L, b: &L, tol: f64) -> bool {
        (a - b).max_abs_coeff() <= tol
    }

    #[test]
    fn roots_examples() {
        let r = poly_roots(&L::from_real(0, &[-0.5, 1.0])).unwrap();
        assert_eq!(r.leading, c(1.0));
        assert!((r.roots[0] - c(0.5)).norm() < 1e-15);
        let r = poly_roots(&L::monomial(2, c(1.0))).unwrap();
        assert_eq!(r.roots, vec![c(0.0), c(0.0)]);
        let r = poly_roots(&L::from_real(0, &[1.0, -2.5, 1.0])).unwrap();
        assert!((r.roots[0] - c(0.5)).norm() < 1e-14);
        assert!((r.roots[1] - c(2.0)).norm() < 1e-14);
        assert_eq!(poly_roots(&L::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn repeated_roots_are_merged() {
        // (z - 0.5)^2 (z + 1)
        let p = L::from_roots(&[c(0.5), c(0.5), c(-1.0)]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.roots.len(), 3);
        assert_eq!(r.roots[0], r.roots[1]);
        assert!((r.roots[0] - c(0.5)).norm() < 1e-12);
        assert!(close(&r.reconstruct(), &p, 1e-12));
    }

    #[test]
    fn inner_outer_examples() {
        let k = ctx();
        let p = L::from_real(0, &[-0.5, 1.0]);
        let f = poly_inner_outer(&p, &k).unwrap();
        assert!(close(&f.outer, &L::from_real(0, &[1.0, -0.5]), 1e-14));
        assert!(close(&f.inner.num, &p, 1e-14));
        assert!(close(&f.inner.den, &L::from_real(0, &[1.0, -0.5]), 1e-14));
        assert!(f.boundary_modulus_defect(720).unwrap() < 1e-12);

        let z = L::monomial(1, c(1.0));
        let f = poly_inner_outer(&z, &k).unwrap();
        assert_eq!(f.outer, L::one());
        assert_eq!(f.inner.num, z);

        let p = L::from_real(0, &[-2.0, 1.0]);
        let f = poly_inner_outer(&p, &k).unwrap();
        assert!(close(&f.outer, &L::from_real(0, &[2.0, -1.0]), 1e-14));
        assert!((f.phase - c(-1.0)).norm() < 1e-15);
        assert!(f.reassembly_error(&p).unwrap() < 1e-14);
    }

    #[test]
    fn boundary_roots_stay_outer() {
        let k = ctx();
        let p = L::from_real(0, &[-1.0, 1.0]);
        let f = poly_inner_outer(&p, &k).unwrap();
        assert!(f.inner.is_polynomial() || f.inner.den == L::one());
        assert!(close(&f.outer, &L::from_real(0, &[1.0, -1.0]), 1e-14));
    }

    #[test]
    fn fejer_riesz_examples() {
        let k = ctx();
        let q: BTreeMap<i32, Cx<f64>> = [(-1, c(-0.5)), (0, c(1.25)), (1, c(-0.5))]
            .into_iter()
            .collect();
        let h = fejer_riesz_outer(&q, &k).unwrap();
        assert!(close(&h, &L::from_real(0, &[1.0, -0.5]), 1e-14));
        let one: BTreeMap<i32, Cx<f64>> = [(0, c(1.0))].into_iter().collect();
        assert_eq!(fejer_riesz_outer(&one, &k).unwrap(), L::one());
        let p = L::from_real(0, &[1.0, -2.5, 1.0]);
        let h = fejer_riesz_outer(&autocorrelation(&p), &k).unwrap();
        let fac = poly_inner_outer(&p, &k).unwrap();
        assert!(close(&h, &fac.outer, 1e-12));
    }

    #[test]
    fn fejer_riesz_rejects_negative() {
        let k = ctx();
        let q: BTreeMap<i32, Cx<f64>> = [(-1, c(1.0)), (0, c(1.0)), (1, c(1.0))]
            .into_iter()
            .collect();
        assert!(matches!(
            fejer_riesz_outer(&q, &k),
            Err(Error::NotNonnegative(_))
        ));
    }

    #[test]
    fn disk0_examples() {
        let k = ctx();
        let p = L::monomial(-1, c(1.0));
        let f = disk0_inner_outer(&p, &k).unwrap();
        assert!(close(&f.outer, &L::constant(c(2.0)), 1e-14));
        assert!(close(&f.inner.num, &L::monomial(-1, c(0.5)), 1e-14));
        assert!(f.reassembly_error(&p).unwrap() < 1e-14);
        assert!(f.boundary_modulus_defect(720).unwrap() < 1e-12);

        let f = disk0_inner_outer(&L::one(), &k).unwrap();
        assert_eq!(f.outer, L::one());

        // z^{-1} - 2: reflected 2z - 2 has its zero on the circle, so the
        // input is already outer in the D₀ sense
        let p = L::from_real(-1, &[1.0, -2.0]);
        let f = disk0_inner_outer(&p, &k).unwrap();
        assert!(f.reassembly_error(&p).unwrap() < 1e-13);
        let root = 1.0 / 2.0; // zero of z^{-1} - 2
        assert!(root >= k.r);
        assert!(f.inner_zeros.is_empty());
        assert!(disk0_inner_outer(&L::monomial(1, c(1.0)), &k).is_err());
    }
}
