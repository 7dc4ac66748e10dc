use num_complex::Complex;
use num_traits::Zero;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::context::AnnulusContext;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::{cis, from_usize, lit, modulus, real, Cx, Scalar};
use crate::supnorm::{circle_sup, BoundaryMax};

/// Quotient `num / den` of Laurent polynomials. Used for finite Blaschke
/// products (times unimodular constants and monomials) and their reflections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct RationalFn<T: Scalar> {
    pub num: LaurentPoly<T>,
    pub den: LaurentPoly<T>,
}

impl<T: Scalar> From<LaurentPoly<T>> for RationalFn<T> {
    fn from(p: LaurentPoly<T>) -> Self {
        RationalFn {
            num: p,
            den: LaurentPoly::one(),
        }
    }
}

impl<T: Scalar> RationalFn<T> {
    pub fn new(num: LaurentPoly<T>, den: LaurentPoly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DomainMismatch("zero denominator".into()));
        }
        Ok(RationalFn { num, den })
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == LaurentPoly::one()
    }

    pub fn eval_at(&self, z: Cx<T>) -> Result<Cx<T>> {
        let d = self.den.eval_at(z)?;
        if d.is_zero() {
            return Err(Error::UnboundedMultiplier(format!("pole at {z}")));
        }
        Ok(self.num.eval_at(z)? / d)
    }

    pub fn reflect_to_disk0(&self, ctx: &AnnulusContext<T>) -> Self {
        RationalFn {
            num: self.num.reflect_to_disk0(ctx),
            den: self.den.reflect_to_disk0(ctx),
        }
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        RationalFn {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// `self · p` reduced to a Laurent polynomial by exact series division.
    /// Returns the product and the division remainder magnitude.
    pub fn times_poly(&self, p: &LaurentPoly<T>) -> Result<(LaurentPoly<T>, T)> {
        let prod = &self.num * p;
        if self.is_polynomial() {
            return Ok((prod, T::zero()));
        }
        // normalize so the divisor has a nonzero constant term
        let (lo, hi) = self.den.support().unwrap_or((0, 0));
        let shift = if lo > 0 {
            lo
        } else if hi < 0 {
            hi
        } else {
            0
        };
        let (q, rem) = prod.shift(-shift).div_series(&self.den.shift(-shift))?;
        Ok((q, rem))
    }

    /// Errors if a pole lies on the closed annulus `r ≤ |z| ≤ 1`.
    pub fn check_poles(&self, ctx: &AnnulusContext<T>) -> Result<()> {
        if self.is_polynomial() {
            return Ok(());
        }
        let lo = self.den.support_min().unwrap_or(0);
        for root in crate::hardy::poly_roots(&self.den.shift(-lo))?.roots {
            let m = modulus(root);
            if m >= ctx.r * (T::one() - ctx.tol_numeric) && m <= T::one() + ctx.tol_numeric {
                return Err(Error::UnboundedMultiplier(format!(
                    "pole {root} on the closed annulus"
                )));
            }
        }
        Ok(())
    }

    /// `‖φ·h‖²` in `H²(A_r)`. Exact when `φ·h` is a Laurent polynomial;
    /// otherwise the nonnegative and negative Laurent coefficients are read
    /// off by FFT on `|z| = 1` and `|z| = r` respectively, doubling the
    /// sample count until the top quarter of the spectrum is negligible.
    pub fn product_norm_sq(&self, h: &LaurentPoly<T>, ctx: &AnnulusContext<T>) -> Result<T> {
        if let Ok((prod, rem)) = self.times_poly(h) {
            let scale = prod
                .max_abs_coeff()
                .max(h.max_abs_coeff())
                .max(T::min_positive_value());
            if rem <= lit::<T>(64.0) * T::epsilon() * scale {
                return Ok(prod.norm_sq(ctx));
            }
        }
        self.check_poles(ctx)?;
        let g = |z: Cx<T>| -> Result<Cx<T>> {
            Ok(self.num.eval_at(z)? * h.eval_at(z)? / self.den.eval_at(z)?)
        };
        let mut planner = FftPlanner::<T>::new();
        let two_pi = T::PI() + T::PI();
        let mut n = 1usize << 12;
        loop {
            let fft = planner.plan_fft_forward(n);
            let mut spectra = Vec::with_capacity(2);
            for rho in [T::one(), ctx.r] {
                let mut buf = (0..n)
                    .map(|k| g(cis(two_pi * from_usize(k) / from_usize(n)) * real(rho)))
                    .collect::<Result<Vec<_>>>()?;
                fft.process(&mut buf);
                let inv = T::one() / from_usize::<T>(n);
                spectra.push(
                    buf.into_iter()
                        .map(|c| c.norm_sqr() * inv * inv)
                        .collect::<Vec<T>>(),
                );
            }
            // nonnegative powers from the unit circle, negative from |z| = r
            let (pos, neg) = (&spectra[0], &spectra[1]);
            let half = n / 2;
            let total: T =
                pos[..half].iter().copied().sum::<T>() + neg[half..].iter().copied().sum::<T>();
            let tail: T = pos[half / 2..half].iter().copied().sum::<T>()
                + neg[half..half + half / 2].iter().copied().sum::<T>();
            if tail <= T::epsilon() * T::epsilon() * total || n >= 1 << 20 {
                return Ok(total);
            }
            n *= 2;
        }
    }

    /// Largest value of `|φ|` on the boundary circles `|z| = r` and `|z| = 1`.
    /// Errors if a pole lies on the closed annulus.
    pub fn sup_norm(&self, ctx: &AnnulusContext<T>) -> Result<BoundaryMax<T>> {
        self.check_poles(ctx)?;
        let r = ctx.r;
        let f = |z: Cx<T>| {
            let d = self.den.eval_at(z).unwrap_or_else(|_| Complex::zero());
            self.num.eval_at(z).unwrap_or_else(|_| Complex::zero()) / d
        };
        Ok(circle_sup(f, &[r, T::one()]))
    }
}
