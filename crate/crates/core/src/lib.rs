//! Function theory on the annulus `A_r = {r < |z| < 1}` with the Pick kernel
//! `k_r`: Laurent polynomial arithmetic in `H²(A_r)`, kernels and Pick
//! certificates for multiplier norms, classical inner–outer factorization,
//! subinner/free outer factorization, and the Drury–Arveson and Fock
//! embeddings.
//!
//! Everything is generic over the real scalar `T: Scalar` (`f32` or `f64`);
//! the aliases below fix `T = f64`.

pub mod context;
pub mod cxser;
pub mod error;
pub mod extremal;
pub mod fock;
pub mod free_outer;
pub mod hardy;
pub mod kernels;
pub mod laurent;
pub mod linalg;
pub mod pick;
pub mod rational;
pub mod scalar;
pub mod supnorm;

pub use context::AnnulusContext;
pub use error::{Error, Result};
pub use extremal::{extremal_search, ExtremalResult};
pub use fock::{
    da_embedding_coeffs, da_isometry_check, left_outer_residual, DaEmbedding, NcSeries,
};
pub use free_outer::{
    cyclicity_residual, factor_subinner_free_outer, is_free_outer, is_subinner, moments_equal,
    FactorPath, FactorizationResult, Verdict,
};
pub use hardy::{
    autocorrelation, disk0_inner_outer, fejer_riesz_outer, poly_inner_outer, poly_roots,
    DiskFactorization, PolyRoots,
};
pub use kernels::{embed_point, kernel_eval, KernelId, KernelPoint};
pub use laurent::{LaurentPoly, Moments, Space};
pub use pick::{
    mixed_multiplier_bound, mixed_pick_lower, mult_norm_bounds, pick_matrix, psd_check,
    PickCertificate,
};
pub use rational::RationalFn;
pub use scalar::{Cx, Scalar};

pub type C64 = num_complex::Complex<f64>;
pub type Laurent = LaurentPoly<f64>;
pub type Context = AnnulusContext<f64>;
pub type Rational = RationalFn<f64>;
pub type Factorization = FactorizationResult<f64>;
pub type Embedding = DaEmbedding<f64>;

pub type Laurent32 = LaurentPoly<f32>;
pub type Context32 = AnnulusContext<f32>;
