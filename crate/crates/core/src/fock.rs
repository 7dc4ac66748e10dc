//! Embedding of `H²(A_r)` into Drury–Arveson space on the ball of `C²`
//! through `u`, its lift to the full Fock space on two letters, and the
//! left-outer residual of the lift.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::context::AnnulusContext;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::{lit, Cx, Scalar};

/// Longest word used by the Fock-space routines (`2¹³ − 1` words).
pub const MAX_WORD_LEN: usize = 12;

/// `‖z₁ⁱz₂ʲ‖²` in Drury–Arveson space: `i!·j!/(i+j)!`.
pub fn monomial_norm_sq<T: Scalar>(i: usize, j: usize) -> T {
    T::one() / binomial(i + j, i)
}

/// `C(n, k)` in floating point.
pub fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    let k = k.min(n - k);
    let mut acc = T::one();
    for t in 0..k {
        acc = acc * lit::<T>((n - t) as f64) / lit::<T>((t + 1) as f64);
    }
    acc
}

/// Taylor coefficients `b[i][j] = ⟨F, z₁ⁱz₂ʲ⟩` for `0 ≤ i, j ≤ M` of the
/// function `F` on the ball with `F∘u = c·f`, `c = (1−r²)/(1+r²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DaEmbedding<T: Scalar> {
    pub r: T,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(with = "rows")]
    pub b: Vec<Vec<Cx<T>>>,
    /// Bound on the Drury–Arveson norm mass of the coefficients outside
    /// `[0, M]²`.
    pub tail_bound: T,
}

mod rows {
    use num_complex::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::cxser::CxJson;
    use crate::scalar::Scalar;

    pub fn serialize<S: Serializer, T: Scalar>(
        b: &[Vec<Complex<T>>],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<CxJson<T>>> = b
            .iter()
            .map(|r| r.iter().map(|z| CxJson::from(*z)).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(
        d: D,
    ) -> Result<Vec<Vec<Complex<T>>>, D::Error> {
        let rows = Vec::<Vec<CxJson<T>>>::deserialize(d)?;
        Ok(rows
            .into_iter()
            .map(|r| r.into_iter().map(Complex::from).collect())
            .collect())
    }
}

impl<T: Scalar> DaEmbedding<T> {
    pub fn get(&self, i: usize, j: usize) -> Cx<T> {
        if i > self.m || j > self.m {
            Complex::new(T::zero(), T::zero())
        } else {
            self.b[i][j]
        }
    }

    /// `Σ_{i,j ≤ M} |b[i][j]|²·(i+j)!/(i!·j!)`.
    pub fn da_norm_sq(&self) -> T {
        let mut acc = T::zero();
        for (i, row) in self.b.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                if z.norm_sqr() > T::zero() {
                    acc += z.norm_sqr() * binomial(i + j, i);
                }
            }
        }
        acc
    }
}

/// `b[i][j] = c·r^j·(1+r²)^{−(i+j)/2}·w_{i−j}·a_{i−j}`, where `a_k` are
/// the Laurent coefficients of `f` and `w_k` the `H²(A_r)` weights.
pub fn da_embedding_coeffs<T: Scalar>(
    f: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
    m: usize,
) -> DaEmbedding<T> {
    let r = ctx.r;
    let one = T::one();
    let r2 = r * r;
    let c = (one - r2) / (one + r2);
    let inv_s = one / (one + r2).sqrt();
    let mut b = vec![vec![Complex::new(T::zero(), T::zero()); m + 1]; m + 1];
    for (k, a) in f.terms() {
        let wa = a * (c * ctx.weight(k));
        let kappa = k.unsigned_abs() as usize;
        for s in 0..=m.saturating_sub(kappa) {
            let (i, j) = if k >= 0 {
                (s + kappa, s)
            } else {
                (s, s + kappa)
            };
            if i > m || j > m {
                continue;
            }
            b[i][j] = wa * (r.powi(j as i32) * inv_s.powi((i + j) as i32));
        }
    }
    DaEmbedding {
        r,
        m,
        tail_bound: tail_bound(f, ctx, m),
        b,
    }
}

/// Geometric bound on `Σ |b[i][j]|²·C(i+j, i)` over the pairs on the
/// diagonals of `f` that fall outside `[0, M]²`.
fn tail_bound<T: Scalar>(f: &LaurentPoly<T>, ctx: &AnnulusContext<T>, m: usize) -> T {
    let r2 = ctx.r * ctx.r;
    let one = T::one();
    let c = (one - r2) / (one + r2);
    let base = r2 / ((one + r2) * (one + r2));
    let mut total = T::zero();
    for (k, a) in f.terms() {
        let kappa = k.unsigned_abs() as usize;
        let amp = (a * (c * ctx.weight(k))).norm_sqr();
        let jshift = if k >= 0 { 0 } else { kappa as i32 };
        // first omitted index along the diagonal: s = M − κ + 1
        let first = (m + 1).saturating_sub(kappa);
        let term = |s: usize| -> T {
            amp * r2.powi(s as i32 + jshift)
                * (one + r2).powi(-((2 * s + kappa) as i32))
                * binomial(2 * s + kappa, s)
        };
        let ratio = |s: usize| -> T {
            let kf = lit::<T>(kappa as f64);
            let sf = lit::<T>(s as f64);
            let extra = (kf * kf - kf - lit::<T>(2.0) * sf - lit::<T>(2.0)).max(T::zero())
                / ((sf + one) * (sf + kf + one));
            base * (lit::<T>(4.0) + extra)
        };
        let mut s = first;
        let mut acc = T::zero();
        while ratio(s) >= one {
            acc += term(s);
            s += 1;
        }
        acc += term(s) / (one - ratio(s));
        total += acc;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct IsometryCheck<T: Scalar> {
    pub lhs: T,
    pub rhs: T,
    pub gap: T,
    pub tail_bound: T,
    /// `gap ≤ tail_bound + tol_numeric`.
    pub within_bound: bool,
}

/// Compares the Drury–Arveson norm of the truncated embedding with
/// `c·‖f‖²_{A_r}`.
pub fn da_isometry_check<T: Scalar>(
    f: &LaurentPoly<T>,
    ctx: &AnnulusContext<T>,
    m: usize,
) -> Result<IsometryCheck<T>> {
    if let Some((lo, hi)) = f.support() {
        let reach = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
        if reach > m {
            return Err(Error::TruncationTooSmall(format!(
                "M = {m} leaves the diagonal of z^{} entirely outside the window",
                if hi.unsigned_abs() as usize > m {
                    hi
                } else {
                    lo
                }
            )));
        }
    }
    let emb = da_embedding_coeffs(f, ctx, m);
    let r2 = ctx.r * ctx.r;
    let c = (T::one() - r2) / (T::one() + r2);
    let lhs = emb.da_norm_sq();
    let rhs = c * f.norm_sq(ctx);
    let gap = (lhs - rhs).abs();
    Ok(IsometryCheck {
        lhs,
        rhs,
        gap,
        tail_bound: emb.tail_bound,
        within_bound: gap <= emb.tail_bound + ctx.tol_numeric,
    })
}

/// Word `w` over `{1, 2}` as a heap index: `∅ ↦ 0`, `w1 ↦ 2i+1`, `w2 ↦ 2i+2`.
pub fn word_index(word: &[u8]) -> usize {
    word.iter().fold(0, |i, &l| 2 * i + l as usize)
}

pub fn index_word(mut idx: usize) -> Vec<u8> {
    let mut w = Vec::new();
    while idx > 0 {
        let letter = if idx % 2 == 1 { 1 } else { 2 };
        w.push(letter);
        idx = (idx - letter as usize) / 2;
    }
    w.reverse();
    w
}

/// `(number of 1s, number of 2s)`.
pub fn abelianization(idx: usize) -> (usize, usize) {
    let w = index_word(idx);
    let ones = w.iter().filter(|&&l| l == 1).count();
    (ones, w.len() - ones)
}

/// Noncommutative lift `F̂(w) = b[α(w)]` on words of length at most
/// `max_len`, indexed by [`word_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct NcSeries<T: Scalar> {
    pub max_len: usize,
    pub coeffs: Vec<Cx<T>>,
}

impl<T: Scalar> NcSeries<T> {
    pub fn lift(emb: &DaEmbedding<T>, max_len: usize) -> Result<Self> {
        if max_len > MAX_WORD_LEN {
            return Err(Error::InvalidContext(format!(
                "word length {max_len} exceeds {MAX_WORD_LEN}"
            )));
        }
        if max_len > emb.m {
            return Err(Error::TruncationTooSmall(format!(
                "word length {max_len} exceeds M = {}",
                emb.m
            )));
        }
        let n = (1usize << (max_len + 1)) - 1;
        let coeffs = (0..n)
            .map(|idx| {
                let (i, j) = abelianization(idx);
                emb.get(i, j)
            })
            .collect();
        Ok(NcSeries { max_len, coeffs })
    }

    pub fn get(&self, word: &[u8]) -> Cx<T> {
        self.coeffs[word_index(word)]
    }

    pub fn norm_sq(&self) -> T {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LeftOuterResidual<T: Scalar> {
    #[serde(rename = "m_G")]
    pub m_g: usize,
    /// Residual at degree `m_G`.
    pub residual: T,
    pub by_degree: Vec<T>,
    /// Number of word coefficients of `G` at degree `m_G`.
    pub unknowns: usize,
    pub truncation: usize,
}

/// `Γ(s) = ⟨F, sF⟩`-type correlations: `Σ_v F̂(sv)·conj(F̂(v))` over
/// `|sv| ≤ M`, which depend on `s` only through `α(s) = (s₁, s₂)`.
fn shift_correlations<T: Scalar>(emb: &DaEmbedding<T>) -> Vec<Vec<Cx<T>>> {
    let m = emb.m;
    let mut gamma = vec![vec![Complex::new(T::zero(), T::zero()); m + 1]; m + 1];
    for s1 in 0..=m {
        for s2 in 0..=m - s1 {
            let budget = m - s1 - s2;
            let mut acc = Complex::new(T::zero(), T::zero());
            for p in 0..=budget {
                for q in 0..=budget - p {
                    let lo = emb.get(p, q);
                    if lo.norm_sqr() == T::zero() {
                        continue;
                    }
                    acc += emb.get(p + s1, q + s2) * lo.conj() * binomial::<T>(p + q, p);
                }
            }
            gamma[s1][s2] = acc;
        }
    }
    gamma
}

/// Distance from the vacuum to `{G·F̂ : G a free polynomial of degree ≤ m_G}`
/// in the Fock space, with `F̂` the lift of the truncated embedding, for
/// every degree `0..=m_G`.
///
/// The Gram matrix of `{u·F̂}` is supported on comparable pairs of words, so
/// eliminating descendants before ancestors produces no fill; only the
/// root's Schur complement is needed.
pub fn left_outer_residual<T: Scalar>(
    emb: &DaEmbedding<T>,
    ctx: &AnnulusContext<T>,
    m_g: usize,
) -> Result<LeftOuterResidual<T>> {
    if m_g > MAX_WORD_LEN {
        return Err(Error::InvalidContext(format!(
            "m_G = {m_g} exceeds the word cap {MAX_WORD_LEN}"
        )));
    }
    if emb.m < m_g {
        return Err(Error::TruncationTooSmall(format!(
            "M = {} is below m_G = {m_g}",
            emb.m
        )));
    }
    let _ = ctx;
    let gamma = shift_correlations(emb);
    let vacuum = emb.get(0, 0);
    let mut by_degree = Vec::with_capacity(m_g + 1);
    for deg in 0..=m_g {
        let pivot = root_schur_complement(&gamma, deg);
        let captured = if pivot > T::zero() {
            vacuum.norm_sqr() / pivot
        } else {
            T::zero()
        };
        by_degree.push((T::one() - captured).max(T::zero()).sqrt());
    }
    Ok(LeftOuterResidual {
        m_g,
        residual: *by_degree.last().expect("degree 0 present"),
        by_degree,
        unknowns: (1usize << (m_g + 1)) - 1,
        truncation: emb.m,
    })
}

/// Root pivot after eliminating all words of length `1..=deg` from the
/// Gram matrix `H(u, us) = conj(Γ(α(s)))`, `H(us, u) = Γ(α(s))`.
fn root_schur_complement<T: Scalar>(gamma: &[Vec<Cx<T>>], deg: usize) -> T {
    let n = (1usize << (deg + 1)) - 1;
    let depth = |idx: usize| usize::BITS as usize - 1 - (idx + 1).leading_zeros() as usize;
    let diag0 = gamma[0][0].re;
    let mut diag = vec![diag0; n];
    // anc[x][d] = H(x, ancestor of x at depth d)
    let mut anc: Vec<Vec<Cx<T>>> = (0..n)
        .map(|x| {
            let word = index_word(x);
            (0..word.len())
                .map(|d| {
                    let s = &word[d..];
                    let ones = s.iter().filter(|&&l| l == 1).count();
                    gamma[ones][s.len() - ones]
                })
                .collect()
        })
        .collect();
    let tiny = diag0.abs() * lit::<T>(1e-13);
    for x in (1..n).rev() {
        let p = diag[x];
        if !(p > tiny) {
            continue;
        }
        let row = std::mem::take(&mut anc[x]);
        // ancestors of x, shallowest first
        let mut chain = Vec::with_capacity(row.len());
        let mut a = x;
        while a > 0 {
            a = (a - 1) / 2;
            chain.push(a);
        }
        chain.reverse();
        debug_assert_eq!(chain.len(), depth(x));
        for (dp, &ap) in chain.iter().enumerate() {
            let hxap = row[dp];
            diag[ap] -= hxap.norm_sqr() / p;
            for d in 0..dp {
                anc[ap][d] -= hxap.conj() * row[d] / p;
            }
        }
    }
    diag[0]
}
