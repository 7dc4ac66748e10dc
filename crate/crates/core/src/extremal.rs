//! Heuristic search for the free outer factor of a general Laurent
//! polynomial: maximize `|h(z₀)|` over `h` with the same moment functional
//! as `f`. Multi-start penalized ascent followed by Gauss–Newton restoration
//! onto the constraint set. Never a certificate.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::context::AnnulusContext;
use crate::error::{Error, Result};
use crate::laurent::{cpowi, LaurentPoly};
use crate::linalg::{least_squares, CMat};
use crate::scalar::{lit, modulus, Cx, Scalar};

pub const PENALTIES: [f64; 3] = [10.0, 1e3, 1e5];
const STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;
const ASCENT_ITERS: usize = 4000;
const ATTEMPTS: usize = 6;
const RESTORE_ITERS: usize = 60;
/// Relative moment mismatch under which a candidate counts as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RestartOutcome<T: Scalar> {
    pub value: T,
    pub feasibility: T,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ExtremalResult<T: Scalar> {
    pub best_h: LaurentPoly<T>,
    /// `|best_h(z₀)|`.
    pub value: T,
    /// `max_n |⟨zⁿh,h⟩ − ⟨zⁿf,f⟩|` at `best_h`.
    pub feasibility: T,
    pub feasible: bool,
    pub best_restart: usize,
    pub n: usize,
    pub restarts: Vec<RestartOutcome<T>>,
    pub certified: bool,
}

/// Search data: coefficient range `[−N, N]`, weights and target moments.
struct Problem<T: Scalar> {
    n: i32,
    weights: Vec<T>,
    z0_pows: Vec<Cx<T>>,
    target: Vec<Cx<T>>,
    scale: T,
}

impl<T: Scalar> Problem<T> {
    fn new(f: &LaurentPoly<T>, ctx: &AnnulusContext<T>, n: usize) -> Result<Self> {
        let n = n as i32;
        let moments = f.moment_vector(ctx, 2 * n as usize)?;
        Ok(Problem {
            n,
            weights: (-n..=n).map(|k| ctx.weight(k)).collect(),
            z0_pows: (-n..=n).map(|k| cpowi(ctx.z0, k)).collect(),
            target: (-2 * n..=2 * n).map(|k| moments.get(k)).collect(),
            scale: f.norm_sq(ctx).max(T::one()),
        })
    }

    fn dim(&self) -> usize {
        (2 * self.n + 1) as usize
    }

    /// `h_k` for `k` in `[−N, N]`, zero outside.
    fn at(&self, h: &[Cx<T>], k: i32) -> Cx<T> {
        if k < -self.n || k > self.n {
            Complex::zero()
        } else {
            h[(k + self.n) as usize]
        }
    }

    fn w(&self, k: i32) -> T {
        if k < -self.n || k > self.n {
            T::zero()
        } else {
            self.weights[(k + self.n) as usize]
        }
    }

    fn eval_z0(&self, h: &[Cx<T>]) -> Cx<T> {
        h.iter().zip(&self.z0_pows).map(|(a, p)| *a * *p).sum()
    }

    /// `D_m = ⟨z^m h, h⟩ − ⟨z^m f, f⟩` for `m` in `[−2N, 2N]`.
    fn defects(&self, h: &[Cx<T>]) -> Vec<Cx<T>> {
        (-2 * self.n..=2 * self.n)
            .enumerate()
            .map(|(idx, m)| {
                let mut acc: Cx<T> = Complex::zero();
                for j in -self.n..=self.n {
                    acc += self.at(h, j - m) * self.at(h, j).conj() * self.w(j);
                }
                acc - self.target[idx]
            })
            .collect()
    }

    fn objective(&self, h: &[Cx<T>], rho: T) -> T {
        let pen: T = self.defects(h).iter().map(|d| d.norm_sqr()).sum();
        self.eval_z0(h).norm_sqr() - rho * pen
    }

    /// Wirtinger derivative `∂/∂conj(h_k)` of the objective.
    fn gradient(&self, h: &[Cx<T>], rho: T) -> Vec<Cx<T>> {
        let hz = self.eval_z0(h);
        let d = self.defects(h);
        (-self.n..=self.n)
            .map(|k| {
                let mut pen: Cx<T> = Complex::zero();
                for (idx, m) in (-2 * self.n..=2 * self.n).enumerate() {
                    pen += d[idx] * self.at(h, k + m) * self.w(k + m)
                        + d[idx].conj() * self.at(h, k - m) * self.w(k);
                }
                hz * self.z0_pows[(k + self.n) as usize].conj() - pen * rho
            })
            .collect()
    }

    fn feasibility(&self, h: &[Cx<T>]) -> T {
        self.defects(h)
            .iter()
            .map(|d| modulus(*d))
            .fold(T::zero(), T::max)
    }

    /// Gradient ascent with an adaptive step in the coordinates
    /// `y_k = √w_k h_k`, where the unpenalized norm is Euclidean.
    fn ascend(&self, h: &mut Vec<Cx<T>>, rho: T) {
        let mut step = T::one() / (rho * self.scale + T::one());
        let mut val = self.objective(h, rho);
        for _ in 0..ASCENT_ITERS {
            let g = self.gradient(h, rho);
            let mut improved = false;
            for _ in 0..40 {
                let trial: Vec<Cx<T>> = h
                    .iter()
                    .zip(&g)
                    .zip(&self.weights)
                    .map(|((a, gk), w)| *a + *gk * (step / *w))
                    .collect();
                let tv = self.objective(&trial, rho);
                if tv > val {
                    let gain = tv - val;
                    *h = trial;
                    val = tv;
                    step *= lit(1.5);
                    improved = gain > T::epsilon() * val.abs().max(T::one());
                    break;
                }
                step *= lit(0.5);
            }
            if !improved {
                break;
            }
        }
    }

    /// Damped Gauss–Newton on the real and imaginary parts of the defects.
    fn restore(&self, h: &mut Vec<Cx<T>>) -> Result<()> {
        let dim = self.dim();
        let tol = lit::<T>(FEASIBILITY_TOL) * self.scale;
        for _ in 0..RESTORE_ITERS {
            let d = self.defects(h);
            if d.iter().map(|x| modulus(*x)).fold(T::zero(), T::max) <= tol * lit(1e-2) {
                break;
            }
            // unknowns: Re h_k then Im h_k; rows: Re D_m, Im D_m (m ≠ 0)
            let mut rows: Vec<Vec<Cx<T>>> = Vec::new();
            let mut rhs = Vec::new();
            for (idx, m) in (-2 * self.n..=2 * self.n).enumerate() {
                let mut dre = vec![T::zero(); 2 * dim];
                let mut dim_ = vec![T::zero(); 2 * dim];
                for k in -self.n..=self.n {
                    let a = self.at(h, k + m).conj() * self.w(k + m);
                    let b = self.at(h, k - m) * self.w(k);
                    let dx = a + b;
                    let i = Complex::new(T::zero(), T::one());
                    let dy = i * a - i * b;
                    let col = (k + self.n) as usize;
                    dre[col] = dx.re;
                    dre[dim + col] = dy.re;
                    dim_[col] = dx.im;
                    dim_[dim + col] = dy.im;
                }
                rows.push(
                    dre.into_iter()
                        .map(|x| Complex::new(x, T::zero()))
                        .collect(),
                );
                rhs.push(Complex::new(-d[idx].re, T::zero()));
                if m != 0 {
                    rows.push(
                        dim_.into_iter()
                            .map(|x| Complex::new(x, T::zero()))
                            .collect(),
                    );
                    rhs.push(Complex::new(-d[idx].im, T::zero()));
                }
            }
            let jnorm = rows
                .iter()
                .flatten()
                .map(|z| z.norm_sqr())
                .sum::<T>()
                .sqrt();
            let damp = jnorm * lit(1e-8);
            for c in 0..2 * dim {
                let mut row = vec![Complex::zero(); 2 * dim];
                row[c] = Complex::new(damp, T::zero());
                rows.push(row);
                rhs.push(Complex::zero());
            }
            let (delta, _) = least_squares(&CMat::from_rows(&rows), &rhs)?;
            for (k, hk) in h.iter_mut().enumerate() {
                *hk += Complex::new(delta[k].re, delta[dim + k].re);
            }
        }
        Ok(())
    }
}

/// Multi-start penalized ascent of `|h(z₀)|²` over `h` supported in
/// `[−N, N]` subject to `⟨zⁿh,h⟩ = ⟨zⁿf,f⟩`. Restart `i` draws its start
/// from a ChaCha stream seeded with `seed + i·stride`; the best feasible
/// candidate wins, ties going to the lowest restart index.
pub fn extremal_search<T: Scalar>(
    f: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
    n: usize,
    restarts: usize,
) -> Result<ExtremalResult<T>> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if restarts == 0 {
        return Err(Error::InvalidContext("restarts must be at least 1".into()));
    }
    let reach = f
        .support_min()
        .unwrap_or(0)
        .unsigned_abs()
        .max(f.support_max().unwrap_or(0).unsigned_abs()) as usize;
    if n < f.span() || n < reach {
        return Err(Error::WindowTooSmall {
            window: n,
            span: f.span().max(reach),
        });
    }
    // work with f/‖f‖ so the penalty weights mean the same at every scale
    let fnorm = f.norm(ctx);
    let unit = f.scale(Complex::new(T::one() / fnorm, T::zero()));
    let prob = Problem::new(&unit, ctx, n)?;
    let tol = lit::<T>(FEASIBILITY_TOL) * f.norm_sq(ctx).max(T::one());
    let mut outcomes = Vec::with_capacity(restarts);
    let mut best: Option<(usize, Vec<Cx<T>>, T, T)> = None;
    for i in 0..restarts {
        let mut rng =
            ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_add((i as u64).wrapping_mul(STRIDE)));
        let mut attempt = 0;
        let (h, feas, value) = loop {
            let mut h: Vec<Cx<T>> = (0..prob.dim())
                .map(|_| Complex::new(lit(rng.gen_range(-1.0..1.0)), lit(rng.gen_range(-1.0..1.0))))
                .collect();
            let norm: T = h
                .iter()
                .zip(&prob.weights)
                .map(|(a, w)| a.norm_sqr() * *w)
                .sum::<T>()
                .sqrt();
            for a in &mut h {
                *a /= norm;
            }
            for rho in PENALTIES {
                prob.ascend(&mut h, lit(rho));
            }
            prob.restore(&mut h)?;
            let feas = prob.feasibility(&h) * fnorm * fnorm;
            let value = modulus(prob.eval_z0(&h)) * fnorm;
            attempt += 1;
            // a stalled penalty phase gets a fresh draw from the same stream
            if feas <= tol || attempt >= ATTEMPTS {
                break (h, feas, value);
            }
        };
        let feasible = feas <= tol;
        outcomes.push(RestartOutcome {
            value,
            feasibility: feas,
            feasible,
        });
        let better = match &best {
            None => true,
            Some((_, _, bv, bf)) => {
                let best_feasible = *bf <= tol;
                match (feasible, best_feasible) {
                    (true, false) => true,
                    (false, true) => false,
                    (true, true) => value > *bv,
                    (false, false) => feas < *bf,
                }
            }
        };
        if better {
            best = Some((i, h, value, feas));
        }
    }
    let (best_restart, h, value, feasibility) = best.expect("at least one restart");
    let hz = prob.eval_z0(&h);
    let phase = if hz.is_zero() {
        Complex::new(T::one(), T::zero())
    } else {
        hz.conj() / modulus(hz)
    };
    let best_h = LaurentPoly::from_terms(
        h.iter()
            .enumerate()
            .map(|(k, a)| (k as i32 - prob.n, *a * phase * fnorm)),
    );
    Ok(ExtremalResult {
        best_h,
        value,
        feasibility,
        feasible: feasibility <= tol,
        best_restart,
        n,
        restarts: outcomes,
        certified: false,
    })
}
