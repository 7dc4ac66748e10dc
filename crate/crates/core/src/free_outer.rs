//! Subinner and free outer tests, moment functionals, the subinner/free
//! outer factorization on the decidable paths, and cyclicity residuals.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::context::AnnulusContext;
use crate::error::{Error, Result};
use crate::extremal::{extremal_search, ExtremalResult};
use crate::hardy::{disk0_inner_outer, poly_inner_outer, poly_roots, DiskFactorization};
use crate::kernels::{plane_kernel, KernelId};
use crate::laurent::LaurentPoly;
use crate::linalg::{least_squares, CMat};
use crate::pick::{mult_norm_bounds_rational, rational_one_sided};
use crate::rational::RationalFn;
use crate::scalar::{cis, from_usize, lit, modulus, real, Cx, Scalar};

/// Grid size used by [`is_subinner`] when the multiplier norm needs a Pick
/// certificate.
pub const DEFAULT_GRID: usize = 40;
/// Restarts used when factorization falls back to the heuristic search.
pub const DEFAULT_RESTARTS: usize = 20;
/// Restarts of the small search attached to undecided free outer tests.
pub const UNDECIDED_RESTARTS: usize = 4;
/// Root moduli at least `1 − BOUNDARY_TOL` count as outside the disk.
const BOUNDARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorPath {
    DiskAnalytic,
    Disk0Analytic,
    HeuristicSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultNormMethod {
    /// Exact: the multiplier norm of a one-sided function is its boundary sup.
    BoundarySup,
    /// Pick lower bound and `√2·sup` upper bound.
    PickGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MultNormEvidence<T: Scalar> {
    pub lower: T,
    pub upper: T,
    pub method: MultNormMethod,
}

/// Max entrywise gap between the moment vectors of `f` and `g` over the
/// larger of the two support spans.
pub fn moment_match_residual<T: Scalar>(
    f: &LaurentPoly<T>,
    g: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
) -> T {
    let window = f.span().max(g.span());
    let mf = f
        .moment_vector(ctx, window)
        .expect("window covers the span");
    let mg = g
        .moment_vector(ctx, window)
        .expect("window covers the span");
    mf.max_diff(&mg)
}

/// Whether `f` and `g` induce the same moment functional `φ ↦ ⟨φf, f⟩` on
/// Laurent polynomial multipliers. Tolerance `tol_exact` relative to
/// `max(1, ‖f‖², ‖g‖²)`.
pub fn moments_equal<T: Scalar>(
    f: &LaurentPoly<T>,
    g: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
) -> bool {
    let scale = f.norm_sq(ctx).max(g.norm_sq(ctx)).max(T::one());
    moment_match_residual(f, g, ctx) <= ctx.tol_exact * scale
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SubinnerEvidence<T: Scalar> {
    pub mult_norm: MultNormEvidence<T>,
    /// False when the Pick bounds straddle 1.
    pub mult_norm_decided: bool,
    pub norm_phi_h: T,
    pub norm_h: T,
    pub norm_equality_residual: T,
    /// `|φ| = 1` on the unit circle, reported when `φ` is holomorphic on `D`.
    pub classical_inner: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SubinnerTest<T: Scalar> {
    pub flag: bool,
    pub evidence: SubinnerEvidence<T>,
}

/// Tests `‖φ‖_Mult = 1` and `‖φh‖ = ‖h‖`, with Pick certification on a
/// grid of [`DEFAULT_GRID`] angles when `φ` has two-sided support.
pub fn is_subinner<T: Scalar>(
    phi: &RationalFn<T>,
    h: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
) -> Result<SubinnerTest<T>> {
    is_subinner_on_grid(phi, h, ctx, DEFAULT_GRID)
}

pub fn is_subinner_on_grid<T: Scalar>(
    phi: &RationalFn<T>,
    h: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
    grid_size: usize,
) -> Result<SubinnerTest<T>> {
    if h.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let sup = phi.sup_norm(ctx)?.value;
    let one = T::one();
    let tol = ctx.tol_exact;
    let (mult_norm, decided, mult_ok) = if rational_one_sided(phi, ctx)? {
        let ev = MultNormEvidence {
            lower: sup,
            upper: sup,
            method: MultNormMethod::BoundarySup,
        };
        (ev, true, (sup - one).abs() <= tol)
    } else {
        let b = mult_norm_bounds_rational(phi, ctx, grid_size)?;
        let ev = MultNormEvidence {
            lower: b.lower,
            upper: b.upper,
            method: MultNormMethod::PickGrid,
        };
        // ‖φh‖ = ‖h‖ already forces ‖φ‖_Mult ≥ 1, so only ≤ 1 is at stake
        let ok = b.upper <= one + tol;
        let decided = ok || b.lower > one + tol;
        (ev, decided, ok)
    };
    let norm_h = h.norm(ctx);
    let norm_phi_h = phi.product_norm_sq(h, ctx)?.sqrt();
    let residual = (norm_phi_h - norm_h).abs();
    let norm_ok = residual <= tol * norm_h.max(one);
    Ok(SubinnerTest {
        flag: mult_ok && norm_ok,
        evidence: SubinnerEvidence {
            mult_norm,
            mult_norm_decided: decided,
            norm_phi_h,
            norm_h,
            norm_equality_residual: residual,
            classical_inner: classical_inner(phi)?,
        },
    })
}

/// `Some(|φ| ≡ 1 on the unit circle)` when `φ` is holomorphic on `D`.
fn classical_inner<T: Scalar>(phi: &RationalFn<T>) -> Result<Option<bool>> {
    let lo = phi.den.support_min().unwrap_or(0);
    let roots = if phi.is_polynomial() {
        Vec::new()
    } else {
        poly_roots(&phi.den.shift(-lo))?.roots
    };
    let edge = T::one() - lit(BOUNDARY_TOL);
    let holomorphic =
        roots.iter().all(|&a| modulus(a) > edge) && phi.num.shift(-lo).is_disk_analytic();
    if !holomorphic {
        return Ok(None);
    }
    let two_pi = T::PI() + T::PI();
    let n = 720;
    for k in 0..n {
        let z = cis(two_pi * from_usize(k) / from_usize(n));
        if (modulus(phi.eval_at(z)?) - T::one()).abs() > lit(1e-9) {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    True,
    False,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FreeOuterTest<T: Scalar> {
    pub verdict: Verdict,
    pub path: Option<FactorPath>,
    pub reason: String,
    /// A zero inside the relevant disk, when the verdict is false.
    #[serde(with = "crate::cxser::option")]
    pub witness_root: Option<Cx<T>>,
    /// Small heuristic search attached to undecided verdicts.
    pub heuristic: Option<ExtremalResult<T>>,
}

impl<T: Scalar> FreeOuterTest<T> {
    pub fn flag(&self) -> Option<bool> {
        match self.verdict {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Undecided => None,
        }
    }
}

/// Zero of the polynomial `p` (support in `[0, ∞)`) inside the open disk.
fn interior_root<T: Scalar>(p: &LaurentPoly<T>) -> Result<Option<Cx<T>>> {
    let edge = T::one() - lit(BOUNDARY_TOL);
    Ok(poly_roots(p)?
        .roots
        .into_iter()
        .find(|&a| modulus(a) < edge))
}

/// Free outer test. Decidable when `f` is holomorphic on `D` (outer in the
/// classical sense) or on `D₀` (via `z ↦ r/z`); otherwise undecided.
pub fn is_free_outer<T: Scalar>(
    f: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
) -> Result<FreeOuterTest<T>> {
    if f.is_zero() {
        return Ok(FreeOuterTest {
            verdict: Verdict::False,
            path: None,
            reason: "the zero function is not free outer".into(),
            witness_root: None,
            heuristic: None,
        });
    }
    if f.is_disk_analytic() {
        return Ok(match interior_root(f)? {
            None => FreeOuterTest {
                verdict: Verdict::True,
                path: Some(FactorPath::DiskAnalytic),
                reason: "holomorphic on D with all zeros in |z| >= 1".into(),
                witness_root: None,
                heuristic: None,
            },
            Some(a) => FreeOuterTest {
                verdict: Verdict::False,
                path: Some(FactorPath::DiskAnalytic),
                reason: format!("zero {a} inside the unit disk"),
                witness_root: Some(a),
                heuristic: None,
            },
        });
    }
    if f.is_disk0_analytic() {
        return Ok(match interior_root(&f.reflect_to_disk0(ctx))? {
            None => FreeOuterTest {
                verdict: Verdict::True,
                path: Some(FactorPath::Disk0Analytic),
                reason: format!("holomorphic on D0 with all zeros in |z| <= {}", ctx.r),
                witness_root: None,
                heuristic: None,
            },
            Some(a) => {
                let z = if a == Complex::new(T::zero(), T::zero()) {
                    Complex::new(T::infinity(), T::zero())
                } else {
                    a.inv() * ctx.r
                };
                let reason = if z.re.is_finite() {
                    format!("zero {z} in |z| > {}", ctx.r)
                } else {
                    "vanishes at infinity".to_string()
                };
                FreeOuterTest {
                    verdict: Verdict::False,
                    path: Some(FactorPath::Disk0Analytic),
                    reason,
                    witness_root: z.re.is_finite().then_some(z),
                    heuristic: None,
                }
            }
        });
    }
    let n = f.span().max(reach(f));
    let search = extremal_search(f, ctx, n, UNDECIDED_RESTARTS)?;
    Ok(FreeOuterTest {
        verdict: Verdict::Undecided,
        path: Some(FactorPath::HeuristicSearch),
        reason: "two-sided support: no decision procedure, heuristic evidence only".into(),
        witness_root: None,
        heuristic: Some(search),
    })
}

fn reach<T: Scalar>(f: &LaurentPoly<T>) -> usize {
    let (lo, hi) = f.support().unwrap_or((0, 0));
    lo.unsigned_abs().max(hi.unsigned_abs()) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FactorEvidence<T: Scalar> {
    pub mult_norm_certificate: Option<MultNormEvidence<T>>,
    pub norm_equality_residual: T,
    pub moment_match_residual: T,
    pub moments_equal: bool,
    #[serde(with = "crate::cxser")]
    pub h_at_z0: Cx<T>,
    pub reassembly_error: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FactorizationResult<T: Scalar> {
    pub subinner: RationalFn<T>,
    pub free_outer: LaurentPoly<T>,
    pub path: FactorPath,
    pub evidence: FactorEvidence<T>,
    pub certified: bool,
    pub search: Option<ExtremalResult<T>>,
}

/// Subinner/free outer factorization `f = φ·h` with `h(z₀) > 0`.
///
/// Holomorphic on `D`: the classical inner–outer factors, rephased.
/// Holomorphic on `D₀`: the same through `z ↦ r/z`. Otherwise a heuristic
/// search with [`DEFAULT_RESTARTS`] restarts, never certified.
pub fn factor_subinner_free_outer<T: Scalar>(
    f: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
) -> Result<FactorizationResult<T>> {
    factor_with_restarts(f, ctx, DEFAULT_RESTARTS)
}

pub fn factor_with_restarts<T: Scalar>(
    f: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
    restarts: usize,
) -> Result<FactorizationResult<T>> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let analytic = if f.is_disk_analytic() {
        Some((poly_inner_outer(f, ctx)?, FactorPath::DiskAnalytic))
    } else if f.is_disk0_analytic() {
        Some((disk0_inner_outer(f, ctx)?, FactorPath::Disk0Analytic))
    } else {
        None
    };
    let (subinner, free_outer, path, search) = match analytic {
        Some((DiskFactorization { inner, outer, .. }, path)) => {
            let hz = outer.eval_at(ctx.z0)?;
            let u = if hz.norm_sqr() > T::zero() {
                hz.conj() / modulus(hz)
            } else {
                Complex::new(T::one(), T::zero())
            };
            (inner.scale(u.conj()), outer.scale(u), path, None)
        }
        None => {
            let res = extremal_search(f, ctx, f.span().max(reach(f)), restarts)?;
            let h = res.best_h.clone();
            (
                RationalFn {
                    num: f.clone(),
                    den: h.clone(),
                },
                h,
                FactorPath::HeuristicSearch,
                Some(res),
            )
        }
    };
    let certified = path != FactorPath::HeuristicSearch;
    let (reassembled, rem) = subinner
        .times_poly(&free_outer)
        .unwrap_or_else(|_| (LaurentPoly::zero(), T::infinity()));
    let reassembly_error = (&reassembled - f).max_abs_coeff().max(rem);
    let norm_h = free_outer.norm(ctx);
    let norm_phi_h = if certified {
        subinner.product_norm_sq(&free_outer, ctx)?.sqrt()
    } else {
        f.norm(ctx)
    };
    let mult_norm_certificate = if certified {
        let s = subinner.sup_norm(ctx)?.value;
        Some(MultNormEvidence {
            lower: s,
            upper: s,
            method: MultNormMethod::BoundarySup,
        })
    } else {
        None
    };
    let moment_match_residual = moment_match_residual(f, &free_outer, ctx);
    Ok(FactorizationResult {
        evidence: FactorEvidence {
            mult_norm_certificate,
            norm_equality_residual: (norm_phi_h - norm_h).abs(),
            moment_match_residual,
            moments_equal: moments_equal(f, &free_outer, ctx),
            h_at_z0: free_outer.eval_at(ctx.z0)?,
            reassembly_error,
        },
        subinner,
        free_outer,
        path,
        certified,
        search,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CyclicityResult<T: Scalar> {
    pub degree: usize,
    /// `min ‖p·f − 1‖` over `p` supported in `[−degree, degree]`.
    pub residual: T,
    /// `max 1/√k_r(λ,λ)` over zeros `λ` of `f` in `A_r`; 0 if there are none.
    pub lower_bound: T,
    #[serde(with = "crate::cxser::vec")]
    pub interior_roots: Vec<Cx<T>>,
}

/// Distance from `1` to `{p·f}` in `H²(A_r)`, `p` ranging over Laurent
/// polynomials of degree at most `degree` in `z` and `1/z`.
pub fn cyclicity_residual<T: Scalar>(
    f: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
    degree: usize,
) -> Result<CyclicityResult<T>> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if degree == 0 {
        return Err(Error::InvalidContext("degree must be at least 1".into()));
    }
    let (smin, smax) = f.support().expect("nonzero");
    let d = degree as i32;
    let (lo, hi) = ((-d + smin).min(0), (d + smax).max(0));
    let rows = (hi - lo + 1) as usize;
    let cols = (2 * d + 1) as usize;
    let sqrt_w: Vec<T> = (lo..=hi).map(|n| ctx.weight(n).sqrt()).collect();
    let a = CMat::from_fn(rows, cols, |i, j| {
        let n = lo + i as i32;
        let k = j as i32 - d;
        f.coeff(n - k) * sqrt_w[i]
    });
    let mut b = vec![Complex::new(T::zero(), T::zero()); rows];
    b[(-lo) as usize] = real(sqrt_w[(-lo) as usize]);
    let (_, residual) = least_squares(&a, &b)?;

    let roots = poly_roots(&f.shift(-smin))?.roots;
    let interior_roots: Vec<Cx<T>> = roots.into_iter().filter(|&z| ctx.contains(z)).collect();
    let lower_bound = interior_roots
        .iter()
        .map(|&z| T::one() / plane_kernel(KernelId::AnnulusPick, z, z, ctx.r).re.sqrt())
        .fold(T::zero(), T::max);
    Ok(CyclicityResult {
        degree,
        residual,
        lower_bound,
        interior_roots,
    })
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

    #[test]
    fn moments_examples() {
        let k = ctx();
        assert!(moments_equal(
            &L::from_real(0, &[-0.5, 1.0]),
            &L::from_real(0, &[1.0, -0.5]),
            &k
        ));
        assert!(moments_equal(&L::monomial(1, c(1.0)), &L::one(), &k));
        let f = L::from_real(-2, &[0.3, 0.0, 1.0, -0.2]);
        assert!(moments_equal(&f, &f, &k));
        assert!(!moments_equal(&L::monomial(-1, c(1.0)), &L::one(), &k));
    }

    #[test]
    fn subinner_examples() {
        let k = ctx();
        let z = RationalFn::from(L::monomial(1, c(1.0)));
        assert!(is_subinner(&z, &L::one(), &k).unwrap().flag);
        let half = RationalFn::from(L::from_real(0, &[0.5, 0.5]));
        let t = is_subinner(&half, &L::one(), &k).unwrap();
        assert!(!t.flag);
        assert_eq!(t.evidence.classical_inner, Some(false));
        assert!(
            is_subinner(&RationalFn::from(L::one()), &L::one(), &k)
                .unwrap()
                .flag
        );
        let b =
            RationalFn::new(L::from_real(0, &[-0.5, 1.0]), L::from_real(0, &[1.0, -0.5])).unwrap();
        let t = is_subinner(&b, &L::from_real(0, &[1.0, 0.3]), &k).unwrap();
        assert!(t.flag && t.evidence.classical_inner == Some(true));
        let pole = RationalFn::new(L::one(), L::from_real(0, &[-0.7, 1.0])).unwrap();
        assert!(matches!(
            is_subinner(&pole, &L::one(), &k),
            Err(Error::UnboundedMultiplier(_))
        ));
    }

    #[test]
    fn free_outer_examples() {
        let k = ctx();
        assert_eq!(
            is_free_outer(&L::from_real(0, &[-2.0, 1.0]), &k)
                .unwrap()
                .flag(),
            Some(true)
        );
        let t = is_free_outer(&L::from_real(0, &[-0.25, 1.0]), &k).unwrap();
        assert_eq!(t.flag(), Some(false));
        assert!((t.witness_root.unwrap() - c(0.25)).norm() < 1e-12);
        assert_eq!(is_free_outer(&L::one(), &k).unwrap().flag(), Some(true));
        assert_eq!(
            is_free_outer(&L::from_real(0, &[-1.0, 1.0]), &k)
                .unwrap()
                .flag(),
            Some(true)
        );
        assert_eq!(
            is_free_outer(&L::monomial(-1, c(1.0)), &k).unwrap().flag(),
            Some(false)
        );
        assert_eq!(
            is_free_outer(&L::from_real(-1, &[1.0, -2.0]), &k)
                .unwrap()
                .flag(),
            Some(true)
        );
        let mixed = is_free_outer(&L::from_real(-1, &[0.2, 1.0, 0.3]), &k).unwrap();
        assert_eq!(mixed.verdict, Verdict::Undecided);
        assert!(mixed.heuristic.is_some());
    }

    #[test]
    fn factorization_examples() {
        let k = ctx();
        let f = L::from_real(0, &[-0.25, 1.0]);
        let res = factor_subinner_free_outer(&f, &k).unwrap();
        assert_eq!(res.path, FactorPath::DiskAnalytic);
        assert!(res.certified);
        assert!(res.evidence.reassembly_error < 1e-12);
        assert!(res.evidence.norm_equality_residual < 1e-12);
        assert!(res.evidence.moments_equal);
        assert!(res.evidence.h_at_z0.re > 0.0 && res.evidence.h_at_z0.im.abs() < 1e-12);
        assert!((&res.free_outer - &L::from_real(0, &[1.0, -0.25])).max_abs_coeff() < 1e-12);

        let res = factor_subinner_free_outer(&L::one(), &k).unwrap();
        assert_eq!(res.free_outer, L::one());

        let res = factor_subinner_free_outer(&L::from_real(0, &[-2.0, 1.0]), &k).unwrap();
        assert!((&res.free_outer - &L::from_real(0, &[2.0, -1.0])).max_abs_coeff() < 1e-12);
        assert!((res.evidence.h_at_z0.re - (2.0 - 0.5f64.sqrt())).abs() < 1e-12);

        assert!(matches!(
            factor_subinner_free_outer(&L::zero(), &k),
            Err(Error::ZeroFunction)
        ));
    }

    #[test]
    fn cyclicity_examples() {
        let k = ctx();
        let z = cyclicity_residual(&L::monomial(1, c(1.0)), &k, 1).unwrap();
        assert!(z.residual < 1e-14 && z.lower_bound == 0.0);
        let near = cyclicity_residual(&L::from_real(0, &[-0.7, 1.0]), &k, 10).unwrap();
        let k07 = 0.75 / (0.51 * (1.0 - 0.25 / 0.49));
        assert!((near.lower_bound - 1.0 / f64::sqrt(k07)).abs() < 1e-12);
        assert!(near.residual >= near.lower_bound - 1e-9);
        let far = cyclicity_residual(&L::from_real(0, &[-0.25, 1.0]), &k, 20).unwrap();
        assert!(far.residual < 1e-5);
    }
}
