//! Finitely supported Laurent polynomials `f = Σ c_n z^n` and the weighted
//! inner products of `H²(A_r)`, `H²(D)` and `H²(D₀)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::context::AnnulusContext;
use crate::error::{Error, Result};
use crate::scalar::{lit, modulus, Cx, Scalar};

/// Which Hilbert space norm to use in [`LaurentPoly::inner_product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Space {
    /// `H²(A_r)`: weights `w_n = 1` for `n >= 0` and `r^{2n}` for `n < 0`.
    Annulus,
    /// `H²(D)`: unit weights, support must lie in `[0, ∞)`.
    DiskHardy,
    /// `H²(D₀)` over `{|z| > r}`: weights `r^{2n}`, support in `(-∞, 0]`.
    Disk0Hardy,
}

/// `z^n` for integer `n` by repeated squaring.
pub fn cpowi<T: Scalar>(z: Cx<T>, n: i32) -> Cx<T> {
    let mut base = if n < 0 { z.inv() } else { z };
    let mut e = n.unsigned_abs();
    let mut acc = Complex::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

/// Laurent polynomial with finitely many nonzero complex coefficients.
///
/// Only literal zeros are pruned, so algebraic identities between
/// coefficient sequences hold exactly.
#[derive(Clone, PartialEq, Default)]
pub struct LaurentPoly<T: Scalar> {
    coeffs: BTreeMap<i32, Cx<T>>,
}

impl<T: Scalar> fmt::Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{n}")?;
        }
        Ok(())
    }
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, Complex::one())
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(n: i32, c: Cx<T>) -> Self {
        Self::from_terms([(n, c)])
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i32, Cx<T>)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, c) in terms {
            *coeffs.entry(n).or_insert_with(Complex::zero) += c;
        }
        let mut p = LaurentPoly { coeffs };
        p.prune();
        p
    }

    /// Real coefficients `re[k]` at exponent `start + k`.
    pub fn from_real(start: i32, re: &[f64]) -> Self {
        Self::from_terms(
            re.iter()
                .enumerate()
                .map(|(k, &c)| (start + k as i32, Complex::new(lit(c), T::zero()))),
        )
    }

    /// Complex coefficients `cs[k]` at exponent `start + k`.
    pub fn from_slice(start: i32, cs: &[Cx<T>]) -> Self {
        Self::from_terms(cs.iter().enumerate().map(|(k, &c)| (start + k as i32, c)))
    }

    /// Monic polynomial `∏ (z − a)`.
    pub fn from_roots(roots: &[Cx<T>]) -> Self {
        roots.iter().fold(Self::one(), |acc, &a| {
            &acc * &Self::from_slice(0, &[-a, Complex::one()])
        })
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: i32) -> Cx<T> {
        self.coeffs.get(&n).copied().unwrap_or_else(Complex::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Cx<T>)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(support_min, support_max)`, `None` for the zero function.
    pub fn support(&self) -> Option<(i32, i32)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn support_min(&self) -> Option<i32> {
        self.support().map(|s| s.0)
    }

    pub fn support_max(&self) -> Option<i32> {
        self.support().map(|s| s.1)
    }

    /// `support_max − support_min`, 0 for the zero function.
    pub fn span(&self) -> usize {
        self.support().map_or(0, |(lo, hi)| (hi - lo) as usize)
    }

    /// Support contained in `[0, ∞)` (the zero function qualifies).
    pub fn is_disk_analytic(&self) -> bool {
        self.support_min().is_none_or(|lo| lo >= 0)
    }

    /// Support contained in `(-∞, 0]` (the zero function qualifies).
    pub fn is_disk0_analytic(&self) -> bool {
        self.support_max().is_none_or(|hi| hi <= 0)
    }

    /// Dense coefficients over `[lo, hi]`.
    pub fn dense(&self, lo: i32, hi: i32) -> Vec<Cx<T>> {
        (lo..=hi).map(|n| self.coeff(n)).collect()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .values()
            .fold(T::zero(), |m, &c| m.max(modulus(c)))
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::from_terms(self.terms().map(|(n, c)| (n, c * s)))
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&n, &c)| (n + k, c)).collect(),
        }
    }

    /// `f(1/z)` (no rescaling).
    pub fn flip(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&n, &c)| (-n, c)).collect(),
        }
    }

    /// `Σ c_n z^n` by Horner's rule on `z^{support_min} · P(z)`.
    pub fn eval_at(&self, z: Cx<T>) -> Result<Cx<T>> {
        let Some((lo, hi)) = self.support() else {
            return Ok(Complex::zero());
        };
        if z.is_zero() && lo < 0 {
            return Err(Error::ZeroBaseWithNegativePowers);
        }
        let mut acc: Cx<T> = Complex::zero();
        for n in (lo..=hi).rev() {
            acc = acc * z + self.coeff(n);
        }
        Ok(if lo == 0 { acc } else { acc * cpowi(z, lo) })
    }

    /// Coefficient convolution.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out: BTreeMap<i32, Cx<T>> = BTreeMap::new();
        for (&n, &a) in &self.coeffs {
            for (&m, &b) in &other.coeffs {
                *out.entry(n + m).or_insert_with(Complex::zero) += a * b;
            }
        }
        let mut p = LaurentPoly { coeffs: out };
        p.prune();
        p
    }

    fn check_space(&self, space: Space, what: &'static str) -> Result<()> {
        match space {
            Space::Annulus => Ok(()),
            Space::DiskHardy if self.is_disk_analytic() => Ok(()),
            Space::DiskHardy => Err(Error::WrongSubspace {
                what,
                space: "H²(D)",
            }),
            Space::Disk0Hardy if self.is_disk0_analytic() => Ok(()),
            Space::Disk0Hardy => Err(Error::WrongSubspace {
                what,
                space: "H²(D₀)",
            }),
        }
    }

    /// `Σ w_n f_n conj(g_n)` with the weights of `space`.
    pub fn inner_product(&self, g: &Self, ctx: &AnnulusContext<T>, space: Space) -> Result<Cx<T>> {
        self.check_space(space, "f")?;
        g.check_space(space, "g")?;
        let mut acc: Cx<T> = Complex::zero();
        for (&n, &a) in &self.coeffs {
            if let Some(&b) = g.coeffs.get(&n) {
                let w = match space {
                    Space::DiskHardy => T::one(),
                    Space::Annulus | Space::Disk0Hardy => ctx.weight(n),
                };
                acc += a * b.conj() * w;
            }
        }
        Ok(acc)
    }

    /// `‖f‖²_{A_r}`.
    pub fn norm_sq(&self, ctx: &AnnulusContext<T>) -> T {
        self.coeffs
            .iter()
            .map(|(&n, c)| ctx.weight(n) * c.norm_sqr())
            .sum()
    }

    /// `‖f‖_{A_r}`.
    pub fn norm(&self, ctx: &AnnulusContext<T>) -> T {
        self.norm_sq(ctx).sqrt()
    }

    /// Norm in a chosen space (support checked).
    pub fn norm_in(&self, ctx: &AnnulusContext<T>, space: Space) -> Result<T> {
        Ok(self.inner_product(self, ctx, space)?.re.sqrt())
    }

    /// `f(r/z)`: coefficient `c_n` moves to exponent `-n` scaled by `r^n`.
    /// An isometric involution of `H²(A_r)`.
    pub fn reflect_to_disk0(&self, ctx: &AnnulusContext<T>) -> Self {
        Self::from_terms(self.terms().map(|(n, c)| (-n, c * ctx.r.powi(n))))
    }

    /// Moments `⟨z^n f, f⟩_{A_r}` for `|n| <= window`.
    pub fn moment_vector(&self, ctx: &AnnulusContext<T>, window: usize) -> Result<Moments<T>> {
        let span = self.span();
        if window < span {
            return Err(Error::WindowTooSmall { window, span });
        }
        let w = window as i32;
        let mut values = BTreeMap::new();
        for n in -w..=w {
            let mut acc: Cx<T> = Complex::zero();
            // Σ_j w_j f_{j-n} conj(f_j)
            for (&j, &fj) in &self.coeffs {
                if let Some(&fjn) = self.coeffs.get(&(j - n)) {
                    acc += fjn * fj.conj() * ctx.weight(j);
                }
            }
            values.insert(n, acc);
        }
        Ok(Moments { window, values })
    }

    /// Truncation to `[-K, K]` of the Laurent expansion of `k_λ = k_r(·, λ)`.
    pub fn kernel_expansion(lambda: Cx<T>, ctx: &AnnulusContext<T>) -> Result<Self> {
        if !ctx.contains(lambda) {
            return Err(ctx.outside(lambda));
        }
        let k = ctx.kernel_window as i32;
        let lc = lambda.conj();
        Ok(Self::from_terms((-k..=k).map(|n| {
            let c = cpowi(lc, n);
            (n, if n < 0 { c * ctx.r.powi(-2 * n) } else { c })
        })))
    }

    /// Compares `f(λ)` with `⟨f, k_λ⟩` and reports a bound on their
    /// difference: the truncation tail `‖f‖·‖k_λ − k_λ^K‖` plus a rounding
    /// allowance proportional to the magnitude of the summed terms.
    pub fn reproducing_check(
        &self,
        lambda: Cx<T>,
        ctx: &AnnulusContext<T>,
    ) -> Result<ReproducingCheck<T>> {
        let kl = Self::kernel_expansion(lambda, ctx)?;
        let direct = self.eval_at(lambda)?;
        let via_kernel = self.inner_product(&kl, ctx, Space::Annulus)?;
        let m = modulus(lambda);
        let k = ctx.kernel_window as i32;
        let q_out = m * m;
        let q_in = (ctx.r / m) * (ctx.r / m);
        let tail_sq = q_out.powi(k + 1) / (T::one() - q_out) + q_in.powi(k + 1) / (T::one() - q_in);
        let tail = self.norm(ctx) * tail_sq.sqrt();
        let magnitude: T = self.terms().map(|(n, c)| modulus(c) * m.powi(n)).sum();
        let rounding = lit::<T>(64.0)
            * T::epsilon()
            * magnitude.max(T::one())
            * lit::<T>(ctx.kernel_window as f64).max(T::one()).sqrt();
        Ok(ReproducingCheck {
            direct,
            via_kernel,
            error: modulus(direct - via_kernel),
            tail_bound: tail,
            rounding_bound: rounding,
        })
    }

    /// Exact division by `den` when `den` has support in `[0, ∞)` with
    /// `den(0) != 0` (ascending series division) or support in `(-∞, 0]`
    /// with nonzero constant term (descending). Returns the quotient and the
    /// max modulus of the remainder.
    pub fn div_series(&self, den: &Self) -> Result<(Self, T)> {
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(Error::DomainMismatch(
                "divisor has zero constant term".into(),
            ));
        }
        if den.is_disk0_analytic() && !den.is_disk_analytic() {
            let (q, rem) = self.flip().div_series(&den.flip())?;
            return Ok((q.flip(), rem));
        }
        if !den.is_disk_analytic() {
            return Err(Error::DomainMismatch("divisor must be one-sided".into()));
        }
        let Some((lo, hi)) = self.support() else {
            return Ok((Self::zero(), T::zero()));
        };
        let e = den.support_max().unwrap_or(0);
        let dcoef: Vec<Cx<T>> = den.dense(0, e);
        let qlen = (hi - lo - e + 1).max(0) as usize;
        let mut q: Vec<Cx<T>> = Vec::with_capacity(qlen);
        for k in 0..qlen {
            let mut acc = self.coeff(lo + k as i32);
            for j in 1..=(e as usize).min(k) {
                acc -= dcoef[j] * q[k - j];
            }
            q.push(acc / d0);
        }
        let quotient = Self::from_slice(lo, &q);
        let rem = self - &(&quotient * den);
        Ok((quotient, rem.max_abs_coeff()))
    }
}

impl<'a, T: Scalar> Mul<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn mul(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        self.multiply(rhs)
    }
}

impl<'a, T: Scalar> Add<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn add(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl<'a, T: Scalar> Sub<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn sub(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms().map(|(n, c)| (n, -c))))
    }
}

impl<T: Scalar> Neg for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly::from_terms(self.terms().map(|(n, c)| (n, -c)))
    }
}

/// Outcome of [`LaurentPoly::reproducing_check`].
#[derive(Debug, Clone, Copy)]
pub struct ReproducingCheck<T: Scalar> {
    pub direct: Cx<T>,
    pub via_kernel: Cx<T>,
    pub error: T,
    pub tail_bound: T,
    pub rounding_bound: T,
}

impl<T: Scalar> ReproducingCheck<T> {
    pub fn bound(&self) -> T {
        self.tail_bound + self.rounding_bound
    }

    pub fn within_bound(&self) -> bool {
        self.error <= self.bound()
    }
}

/// Restriction of the moment functional `P_f(φ) = ⟨φ f, f⟩` to the monomials
/// `z^n`, `|n| <= window`.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments<T: Scalar> {
    pub window: usize,
    pub values: BTreeMap<i32, Cx<T>>,
}

impl<T: Scalar> Moments<T> {
    pub fn get(&self, n: i32) -> Cx<T> {
        self.values.get(&n).copied().unwrap_or_else(Complex::zero)
    }

    /// Max entrywise distance to another moment vector over the union of windows.
    pub fn max_diff(&self, other: &Self) -> T {
        let w = self.window.max(other.window) as i32;
        (-w..=w)
            .map(|n| modulus(self.get(n) - other.get(n)))
            .fold(T::zero(), T::max)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
struct TermJson<T: Scalar> {
    n: i32,
    re: T,
    im: T,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
struct LaurentJson<T: Scalar> {
    coeffs: Vec<TermJson<T>>,
}

impl<T: Scalar> Serialize for LaurentPoly<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson {
            coeffs: self
                .terms()
                .map(|(n, c)| TermJson {
                    n,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for LaurentPoly<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LaurentJson::<T>::deserialize(d)?;
        let mut coeffs = BTreeMap::new();
        for t in raw.coeffs {
            if coeffs.insert(t.n, Complex::new(t.re, t.im)).is_some() {
                return Err(serde::de::Error::custom(format!(
                    "duplicate exponent {}",
                    t.n
                )));
            }
        }
        let mut p = LaurentPoly { coeffs };
        p.prune();
        Ok(p)
    }
}
