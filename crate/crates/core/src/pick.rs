//! Pick matrices and positivity certificates for multiplier norms.

use serde::{Deserialize, Serialize};

use crate::context::AnnulusContext;
use crate::error::{Error, Result};
use crate::kernels::{plane_kernel, KernelId};
use crate::laurent::{LaurentPoly, Space};
use crate::linalg::{cholesky_succeeds, hermitian_min_eigenvalue, CMat};
use crate::rational::RationalFn;
use crate::scalar::{cis, from_usize, lit, modulus, real, Cx, Scalar};
use crate::supnorm::BoundaryMax;

/// Number of radii in the certification grid (half near each boundary circle).
pub const GRID_RADII: usize = 8;
const MAX_BISECTIONS: usize = 60;
const HERMITIAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    /// `t_star` is a certified lower bound: the Pick matrix at `t_star` has a
    /// negative eigenvalue.
    LowerBoundOnMultNorm,
    /// The Pick matrix at `t_star` is positive semidefinite.
    PsdWitness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PickCertificate<T: Scalar> {
    #[serde(with = "crate::cxser::vec")]
    pub points: Vec<Cx<T>>,
    pub t_star: T,
    pub min_eigenvalue: T,
    pub grid_size: usize,
    pub bound_kind: BoundKind,
    /// The Pick matrix at `t_star`. Not serialized (quadratic in the grid).
    #[serde(skip)]
    pub matrix: Option<CMat<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PsdResult<T: Scalar> {
    pub psd: bool,
    pub min_eigenvalue: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MultNormBounds<T: Scalar> {
    pub lower: T,
    pub upper: T,
    /// Boundary supremum of `|φ|`, with the circle and angle where it occurs.
    pub sup_norm: T,
    pub sup_radius: T,
    pub sup_theta: T,
    /// True when the support is one-sided and the upper bound is exact.
    pub one_sided: bool,
    pub certificate: PickCertificate<T>,
}

/// `[t²·target(λ_i,λ_j) − φ(λ_i)·conj(φ(λ_j))·source(λ_i,λ_j)]`.
pub fn pick_matrix<T: Scalar>(
    phi_values: &[Cx<T>],
    points: &[Cx<T>],
    target: KernelId,
    source: KernelId,
    t: T,
    ctx: &AnnulusContext<T>,
) -> Result<CMat<T>> {
    let parts = PickParts::new(phi_values, points, target, source, ctx)?;
    Ok(parts.at(t))
}

struct PickParts<T: Scalar> {
    target: CMat<T>,
    source: CMat<T>,
}

impl<T: Scalar> PickParts<T> {
    fn new(
        phi_values: &[Cx<T>],
        points: &[Cx<T>],
        target: KernelId,
        source: KernelId,
        ctx: &AnnulusContext<T>,
    ) -> Result<Self> {
        if phi_values.len() != points.len() {
            return Err(Error::DomainMismatch(format!(
                "{} values for {} points",
                phi_values.len(),
                points.len()
            )));
        }
        for &p in points {
            for id in [target, source] {
                let ok = match id {
                    KernelId::AnnulusPick | KernelId::DruryArveson2 => ctx.contains(p),
                    KernelId::Szego => modulus(p) < T::one(),
                    KernelId::Disk0Szego => modulus(p) > ctx.r,
                };
                if !ok {
                    return Err(Error::PointOutsideDomain {
                        kernel: id.name(),
                        point: format!("{p}"),
                    });
                }
            }
        }
        let n = points.len();
        let r = ctx.r;
        let tm = CMat::from_fn(n, n, |i, j| plane_kernel(target, points[i], points[j], r));
        let sm = CMat::from_fn(n, n, |i, j| {
            phi_values[i] * phi_values[j].conj() * plane_kernel(source, points[i], points[j], r)
        });
        Ok(PickParts {
            target: tm,
            source: sm,
        })
    }

    fn at(&self, t: T) -> CMat<T> {
        let n = self.target.rows();
        let t2 = t * t;
        CMat::from_fn(n, n, |i, j| self.target[(i, j)] * t2 - self.source[(i, j)])
    }
}

/// Eigenvalue positivity test relative to the largest diagonal entry.
pub fn psd_check<T: Scalar>(m: &CMat<T>, tol: T) -> Result<PsdResult<T>> {
    if !m.is_square() {
        return Err(Error::DomainMismatch("matrix is not square".into()));
    }
    let scale = m.max_diag().abs().max(T::min_positive_value());
    let defect = m.hermitian_defect();
    if defect > lit::<T>(HERMITIAN_TOL) * scale.max(T::one()) {
        return Err(Error::NotHermitian(defect.to_f64().unwrap_or(f64::NAN)));
    }
    if m.rows() == 0 {
        return Ok(PsdResult {
            psd: true,
            min_eigenvalue: T::infinity(),
        });
    }
    let min_eigenvalue = hermitian_min_eigenvalue(m);
    Ok(PsdResult {
        psd: min_eigenvalue >= -tol * m.max_diag().max(T::zero()),
        min_eigenvalue,
    })
}

/// Deterministic certification grid: four radii approaching the outer circle
/// geometrically, their images under `z ↦ r/z` near the inner circle, and
/// `grid_size` equally spaced angles. Grids with `n | m` angles are nested.
pub fn grid<T: Scalar>(ctx: &AnnulusContext<T>, grid_size: usize) -> Vec<Cx<T>> {
    let width = T::one() - ctx.r;
    let outer = GRID_RADII / 2;
    let nearest = width * lit(2e-3);
    let farthest = width * lit(0.25);
    let ratio = (farthest / nearest).powf(T::one() / from_usize::<T>(outer - 1));
    let mut radii = Vec::with_capacity(GRID_RADII);
    let mut delta = nearest;
    for _ in 0..outer {
        let rho = T::one() - delta;
        radii.push(rho);
        radii.push(ctx.r / rho);
        delta *= ratio;
    }
    let two_pi = T::PI() + T::PI();
    let mut pts = Vec::with_capacity(radii.len() * grid_size);
    for &rho in &radii {
        for j in 0..grid_size {
            pts.push(cis(two_pi * from_usize(j) / from_usize(grid_size)) * real(rho));
        }
    }
    pts
}

/// Largest `t` in `[0, bracket]` found by bisection at which the Pick
/// matrix is not positive semidefinite. The multiplier norm exceeds it.
fn certify_lower<T: Scalar>(
    parts: &PickParts<T>,
    points: Vec<Cx<T>>,
    grid_size: usize,
    bracket: T,
    ctx: &AnnulusContext<T>,
) -> PickCertificate<T> {
    let psd = |t: T| {
        let m = parts.at(t);
        let shift = ctx.tol_psd * m.max_diag().max(T::zero());
        cholesky_succeeds(&m, shift)
    };
    let (mut lo, mut hi) = (T::zero(), bracket);
    if psd(lo) {
        hi = lo;
    } else if !psd(hi) {
        lo = hi;
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= ctx.tol_numeric {
            break;
        }
        let mid = (lo + hi) * lit(0.5);
        if psd(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let m = parts.at(lo);
    let min_eigenvalue = if m.rows() > 0 {
        hermitian_min_eigenvalue(&m)
    } else {
        T::zero()
    };
    let bound_kind = if min_eigenvalue < T::zero() {
        BoundKind::LowerBoundOnMultNorm
    } else {
        BoundKind::PsdWitness
    };
    PickCertificate {
        points,
        t_star: lo,
        min_eigenvalue,
        grid_size,
        bound_kind,
        matrix: Some(m),
    }
}

fn bounds_from<T: Scalar, F: Fn(Cx<T>) -> Result<Cx<T>>>(
    eval: F,
    sup: BoundaryMax<T>,
    one_sided: bool,
    ctx: &AnnulusContext<T>,
    grid_size: usize,
) -> Result<MultNormBounds<T>> {
    let points = grid(ctx, grid_size);
    let values = points
        .iter()
        .map(|&z| eval(z))
        .collect::<Result<Vec<_>>>()?;
    let parts = PickParts::new(
        &values,
        &points,
        KernelId::AnnulusPick,
        KernelId::AnnulusPick,
        ctx,
    )?;
    let sqrt2 = T::SQRT_2();
    let certificate = certify_lower(&parts, points, grid_size, sqrt2 * sup.value + T::one(), ctx);
    let upper = if one_sided {
        sup.value
    } else {
        sqrt2 * sup.value
    };
    Ok(MultNormBounds {
        lower: certificate.t_star,
        upper,
        sup_norm: sup.value,
        sup_radius: sup.radius,
        sup_theta: sup.theta,
        one_sided,
        certificate,
    })
}

/// Pick lower bound and sandwich upper bound for the multiplier norm of `φ`
/// on `H²(A_r)`. For one-sided support the upper bound is the boundary
/// supremum itself.
pub fn mult_norm_bounds<T: Scalar>(
    phi: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
    grid_size: usize,
) -> Result<MultNormBounds<T>> {
    if grid_size == 0 {
        return Err(Error::InvalidContext("grid_size must be at least 1".into()));
    }
    let one_sided = phi.is_disk_analytic() || phi.is_disk0_analytic();
    let sup = RationalFn::from(phi.clone()).sup_norm(ctx)?;
    bounds_from(|z| phi.eval_at(z), sup, one_sided, ctx, grid_size)
}

/// As [`mult_norm_bounds`] for a quotient of Laurent polynomials without
/// poles on the closed annulus.
pub fn mult_norm_bounds_rational<T: Scalar>(
    phi: &RationalFn<T>,
    ctx: &AnnulusContext<T>,
    grid_size: usize,
) -> Result<MultNormBounds<T>> {
    if grid_size == 0 {
        return Err(Error::InvalidContext("grid_size must be at least 1".into()));
    }
    let sup = phi.sup_norm(ctx)?;
    let one_sided = rational_one_sided(phi, ctx)?;
    bounds_from(|z| phi.eval_at(z), sup, one_sided, ctx, grid_size)
}

/// Whether `φ = num/den` is holomorphic on `D` or on `D₀`.
pub(crate) fn rational_one_sided<T: Scalar>(
    phi: &RationalFn<T>,
    ctx: &AnnulusContext<T>,
) -> Result<bool> {
    if phi.is_polynomial() {
        return Ok(phi.num.is_disk_analytic() || phi.num.is_disk0_analytic());
    }
    let d = &phi.den;
    let lo = d.support_min().unwrap_or(0);
    let roots = crate::hardy::poly_roots(&d.shift(-lo))?.roots;
    // poles of num/den: roots of den plus, for negative powers, the origin
    let analytic_on_disk =
        roots.iter().all(|&a| modulus(a) >= T::one()) && phi.num.shift(-lo).is_disk_analytic();
    let analytic_on_disk0 = roots.iter().all(|&a| modulus(a) <= ctx.r) && {
        let hi = d.support_max().unwrap_or(0);
        phi.num.shift(-hi).is_disk0_analytic()
    };
    Ok(analytic_on_disk || analytic_on_disk0)
}

/// `‖f‖_{H²(D₀)}/(1−r²) + sup|g|`: an upper bound for the norm of `f + g`
/// as a multiplier from `H²(D)` into `H²(A_r)`.
pub fn mixed_multiplier_bound<T: Scalar>(
    f: &LaurentPoly<T>,
    g: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
) -> Result<T> {
    if !f.is_disk0_analytic() {
        return Err(Error::WrongSubspace {
            what: "f",
            space: "H²(D₀)",
        });
    }
    if !g.is_disk_analytic() {
        return Err(Error::WrongSubspace {
            what: "g",
            space: "H^∞(D)",
        });
    }
    let fnorm = f.norm_in(ctx, Space::Disk0Hardy)?;
    let gsup = if g.is_zero() {
        T::zero()
    } else {
        RationalFn::from(g.clone()).sup_norm(ctx)?.value
    };
    Ok(fnorm / (T::one() - ctx.r * ctx.r) + gsup)
}

/// Pick lower bound for the multiplier norm of `f + g` from `H²(D)` into
/// `H²(A_r)`: target kernel `k_r`, source kernel the Szegő kernel.
pub fn mixed_pick_lower<T: Scalar>(
    f: &LaurentPoly<T>,
    g: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
    grid_size: usize,
) -> Result<PickCertificate<T>> {
    let phi = f + g;
    let points = grid(ctx, grid_size);
    let values = points
        .iter()
        .map(|&z| phi.eval_at(z))
        .collect::<Result<Vec<_>>>()?;
    let parts = PickParts::new(
        &values,
        &points,
        KernelId::AnnulusPick,
        KernelId::Szego,
        ctx,
    )?;
    let bracket = mixed_multiplier_bound(f, g, ctx)? * lit(2.0) + T::one();
    Ok(certify_lower(&parts, points, grid_size, bracket, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    type L = LaurentPoly<f64>;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Complex::new(re, im)
    }

    fn ctx() -> AnnulusContext<f64> {
        AnnulusContext::new(0.5).unwrap()
    }

    #[test]
    fn psd_examples() {
        let id = CMat::<f64>::identity(3);
        let r = psd_check(&id, 1e-10).unwrap();
        assert!(r.psd && (r.min_eigenvalue - 1.0).abs() < 1e-14);
        let m = CMat::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(1.0, 0.0)],
        ]);
        let r = psd_check(&m, 1e-10).unwrap();
        assert!(!r.psd && (r.min_eigenvalue + 1.0).abs() < 1e-14);
        let bad = CMat::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert!(matches!(
            psd_check(&bad, 1e-10),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn pick_matrix_examples() {
        let k = ctx();
        let m = pick_matrix(
            &[c(0.0, 0.0)],
            &[c(0.7, 0.0)],
            KernelId::AnnulusPick,
            KernelId::AnnulusPick,
            1.0,
            &k,
        )
        .unwrap();
        assert!(m[(0, 0)].re > 0.0);
        let pts = grid(&k, 12);
        let vals: Vec<_> = pts.clone();
        let m = pick_matrix(
            &vals,
            &pts,
            KernelId::AnnulusPick,
            KernelId::AnnulusPick,
            1.0,
            &k,
        )
        .unwrap();
        assert!(psd_check(&m, 1e-10).unwrap().psd);
        let pts = [c(0.6, 0.0), c(0.8, 0.0)];
        // the point 0.8 alone forces t > 0.8; at 0.9 the 2×2 matrix is still PSD
        let m = pick_matrix(
            &pts,
            &pts,
            KernelId::AnnulusPick,
            KernelId::AnnulusPick,
            0.8,
            &k,
        )
        .unwrap();
        assert!(!psd_check(&m, 1e-10).unwrap().psd);
        let m = pick_matrix(
            &pts,
            &pts,
            KernelId::AnnulusPick,
            KernelId::AnnulusPick,
            0.9,
            &k,
        )
        .unwrap();
        assert!(psd_check(&m, 1e-10).unwrap().psd);
        assert!(pick_matrix(&pts[..1], &pts, KernelId::Szego, KernelId::Szego, 1.0, &k).is_err());
    }

    #[test]
    fn grid_is_inside_and_nested() {
        let k = ctx();
        let g = grid(&k, 40);
        assert_eq!(g.len(), 40 * GRID_RADII);
        assert!(g.iter().all(|&z| k.contains(z)));
        let h = grid(&k, 20);
        for z in &h {
            assert!(g.iter().any(|w| (w - z).norm() < 1e-15));
        }
    }

    #[test]
    fn mult_norm_examples() {
        let k = ctx();
        let b = mult_norm_bounds(&L::monomial(1, c(1.0, 0.0)), &k, 16).unwrap();
        assert!(b.lower <= 1.0 + 1e-9 && (b.upper - 1.0).abs() < 1e-12);
        assert!(b.lower > 0.95);
        let b = mult_norm_bounds(&L::monomial(-1, c(1.0, 0.0)), &k, 16).unwrap();
        assert!((b.upper - 2.0).abs() < 1e-12);
        assert!(b.lower <= 2.0 + 1e-9);
        let b = mult_norm_bounds(&L::one(), &k, 16).unwrap();
        assert!((b.upper - 1.0).abs() < 1e-12 && (b.lower - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mixed_bound_examples() {
        let k = ctx();
        assert!((mixed_multiplier_bound(&L::zero(), &L::one(), &k).unwrap() - 1.0).abs() < 1e-12);
        let v = mixed_multiplier_bound(&L::monomial(-1, c(1.0, 0.0)), &L::zero(), &k).unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-12);
        assert!(mixed_multiplier_bound(&L::monomial(1, c(1.0, 0.0)), &L::zero(), &k).is_err());
        let f = L::from_real(-2, &[0.3, -0.4]);
        let g = L::from_real(0, &[0.0, 0.5, 0.2]);
        let cert = mixed_pick_lower(&f, &g, &k, 12).unwrap();
        assert!(cert.t_star <= mixed_multiplier_bound(&f, &g, &k).unwrap() + 1e-9);
    }
}
