//! The four reproducing kernels in play and the map `u: A_r → B₂`.

use num_complex::Complex;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::context::AnnulusContext;
use crate::error::{Error, Result};
use crate::scalar::{modulus, Cx, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelId {
    /// `k_r(λ,μ) = (1−r²)/((1−λμ̄)(1−r²/(λμ̄)))` on `A_r`.
    AnnulusPick,
    /// `1/(1−λμ̄)` on the unit disk.
    Szego,
    /// `1/(1−r²/(λμ̄))` on `{|z| > r}`.
    Disk0Szego,
    /// `1/(1−⟨z,w⟩)` on the unit ball of `C²`.
    DruryArveson2,
}

impl KernelId {
    pub fn name(self) -> &'static str {
        match self {
            KernelId::AnnulusPick => "annulus Pick",
            KernelId::Szego => "Szegő",
            KernelId::Disk0Szego => "D₀ Szegő",
            KernelId::DruryArveson2 => "Drury-Arveson",
        }
    }
}

/// Argument of a kernel: a point of the plane or of `C²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelPoint<T: Scalar> {
    Plane(Cx<T>),
    Ball([Cx<T>; 2]),
}

impl<T: Scalar> From<Cx<T>> for KernelPoint<T> {
    fn from(z: Cx<T>) -> Self {
        KernelPoint::Plane(z)
    }
}

fn in_domain<T: Scalar>(id: KernelId, p: &KernelPoint<T>, ctx: &AnnulusContext<T>) -> bool {
    match (id, p) {
        (KernelId::AnnulusPick, KernelPoint::Plane(z)) => ctx.contains(*z),
        (KernelId::Szego, KernelPoint::Plane(z)) => modulus(*z) < T::one(),
        (KernelId::Disk0Szego, KernelPoint::Plane(z)) => modulus(*z) > ctx.r,
        (KernelId::DruryArveson2, KernelPoint::Ball([a, b])) => {
            a.norm_sqr() + b.norm_sqr() < T::one()
        }
        _ => false,
    }
}

/// Closed-form kernel evaluation `k(λ, μ)`.
pub fn kernel_eval<T: Scalar>(
    id: KernelId,
    lambda: KernelPoint<T>,
    mu: KernelPoint<T>,
    ctx: &AnnulusContext<T>,
) -> Result<Cx<T>> {
    for p in [&lambda, &mu] {
        if !in_domain(id, p, ctx) {
            return Err(Error::PointOutsideDomain {
                kernel: id.name(),
                point: format!("{p:?}"),
            });
        }
    }
    let one: Cx<T> = Complex::one();
    Ok(match (lambda, mu) {
        (KernelPoint::Plane(l), KernelPoint::Plane(m)) => plane_kernel(id, l, m, ctx.r),
        (KernelPoint::Ball([a1, a2]), KernelPoint::Ball([b1, b2])) => {
            one / (one - (a1 * b1.conj() + a2 * b2.conj()))
        }
        _ => unreachable!("domain check rejects mixed arguments"),
    })
}

/// Kernel value for plane points without domain checks.
#[inline]
pub(crate) fn plane_kernel<T: Scalar>(id: KernelId, l: Cx<T>, m: Cx<T>, r: T) -> Cx<T> {
    let one: Cx<T> = Complex::one();
    let p = l * m.conj();
    let r2 = r * r;
    match id {
        KernelId::AnnulusPick => {
            Complex::new(T::one() - r2, T::zero()) / ((one - p) * (one - p.inv() * r2))
        }
        KernelId::Szego => one / (one - p),
        KernelId::Disk0Szego => one / (one - p.inv() * r2),
        KernelId::DruryArveson2 => {
            let [a1, a2] = embed_point_unchecked(l, r);
            let [b1, b2] = embed_point_unchecked(m, r);
            one / (one - (a1 * b1.conj() + a2 * b2.conj()))
        }
    }
}

pub(crate) fn embed_point_unchecked<T: Scalar>(z: Cx<T>, r: T) -> [Cx<T>; 2] {
    let s = (r * r + T::one()).sqrt();
    [z / s, z.inv() * (r / s)]
}

/// `u(z) = (z/√(r²+1), (r/√(r²+1))/z)`, mapping `A_r` into the unit ball of `C²`.
pub fn embed_point<T: Scalar>(z: Cx<T>, ctx: &AnnulusContext<T>) -> Result<[Cx<T>; 2]> {
    if z == Complex::new(T::zero(), T::zero()) {
        return Err(Error::ZeroPoint);
    }
    Ok(embed_point_unchecked(z, ctx.r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn annulus_kernel_value() {
        let ctx = AnnulusContext::new(0.5).unwrap();
        let k = kernel_eval(
            KernelId::AnnulusPick,
            c(0.7, 0.0).into(),
            c(0.7, 0.0).into(),
            &ctx,
        )
        .unwrap();
        // 0.75 / ((1 - 0.49)(1 - 0.25/0.49))
        let expect = 0.75 / (0.51 * (1.0 - 0.25 / 0.49));
        assert!((k.re - expect).abs() < 1e-14 && k.im == 0.0);
        assert!((expect - 3.00245).abs() < 1e-5);
    }

    #[test]
    fn domain_errors() {
        let ctx = AnnulusContext::new(0.5).unwrap();
        assert!(kernel_eval(
            KernelId::AnnulusPick,
            c(0.2, 0.0).into(),
            c(0.7, 0.0).into(),
            &ctx
        )
        .is_err());
        assert!(kernel_eval(
            KernelId::Szego,
            c(1.2, 0.0).into(),
            c(0.7, 0.0).into(),
            &ctx
        )
        .is_err());
        assert!(kernel_eval(
            KernelId::Szego,
            c(0.1, 0.0).into(),
            c(0.7, 0.0).into(),
            &ctx
        )
        .is_ok());
        assert!(kernel_eval(
            KernelId::Disk0Szego,
            c(2.0, 0.0).into(),
            c(0.7, 0.0).into(),
            &ctx
        )
        .is_ok());
        assert!(kernel_eval(
            KernelId::DruryArveson2,
            c(0.7, 0.0).into(),
            c(0.7, 0.0).into(),
            &ctx
        )
        .is_err());
        let ball = KernelPoint::Ball([c(0.5, 0.0), c(0.0, 0.5)]);
        assert!(kernel_eval(KernelId::DruryArveson2, ball, ball, &ctx).is_ok());
        assert!(kernel_eval(KernelId::AnnulusPick, ball, ball, &ctx).is_err());
    }

    #[test]
    fn embed_point_examples() {
        let ctx = AnnulusContext::new(0.5).unwrap();
        let u = embed_point(c(0.5f64.sqrt(), 0.0), &ctx).unwrap();
        assert!((u[0].norm_sqr() + u[1].norm_sqr() - 0.8).abs() < 1e-15);
        let v = embed_point(c(0.6, 0.8), &ctx).unwrap();
        assert!((v[0].norm_sqr() + v[1].norm_sqr() - 1.0).abs() < 1e-15);
        assert_eq!(embed_point(c(0.0, 0.0), &ctx), Err(Error::ZeroPoint));
    }
}
