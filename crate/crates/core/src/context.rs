use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, modulus, real, Cx, Scalar};

/// Radius of the annulus `A_r = {r < |z| < 1}` together with the normalization
/// point, kernel truncation window and tolerances used by every operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct AnnulusContext<T: Scalar> {
    pub r: T,
    #[serde(with = "crate::cxser")]
    pub z0: Cx<T>,
    pub kernel_window: usize,
    pub tol_exact: T,
    pub tol_psd: T,
    pub tol_numeric: T,
    pub seed: u64,
}

impl<T: Scalar> AnnulusContext<T> {
    /// Context with the default normalization point `z0 = sqrt(r)` and
    /// default tolerances. Fails unless `0 < r < 1`.
    pub fn new(r: T) -> Result<Self> {
        let ctx = AnnulusContext {
            r,
            z0: real(r.sqrt()),
            kernel_window: 60,
            tol_exact: lit(1e-9),
            tol_psd: lit(1e-10),
            tol_numeric: lit(1e-10),
            seed: 42,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn with_z0(mut self, z0: Cx<T>) -> Result<Self> {
        self.z0 = z0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_kernel_window(mut self, k: usize) -> Result<Self> {
        self.kernel_window = k;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let (zero, one) = (T::zero(), T::one());
        if !(self.r > zero && self.r < one) {
            return Err(Error::InvalidContext(format!(
                "r = {} not in (0, 1)",
                self.r
            )));
        }
        let m = modulus(self.z0);
        if !(m > self.r && m < one) {
            return Err(Error::InvalidContext(format!(
                "normalization point {} not in the annulus",
                self.z0
            )));
        }
        if self.kernel_window < 1 {
            return Err(Error::InvalidContext("kernel window must be >= 1".into()));
        }
        for (name, tol) in [
            ("tol_exact", self.tol_exact),
            ("tol_psd", self.tol_psd),
            ("tol_numeric", self.tol_numeric),
        ] {
            if !(tol >= zero) {
                return Err(Error::InvalidContext(format!("{name} must be >= 0")));
            }
        }
        Ok(())
    }

    /// Whether `z` lies in the open annulus.
    pub fn contains(&self, z: Cx<T>) -> bool {
        let m = modulus(z);
        m > self.r && m < T::one()
    }

    /// Weight `w_n` of the monomial `z^n` in `‖·‖²_{A_r}`: 1 for `n >= 0`,
    /// `r^{2n}` for `n < 0`.
    #[inline]
    pub fn weight(&self, n: i32) -> T {
        if n >= 0 {
            T::one()
        } else {
            self.r.powi(2 * n)
        }
    }

    pub(crate) fn outside(&self, z: Cx<T>) -> Error {
        Error::PointOutsideAnnulus {
            point: format!("{z}"),
            r: self.r.to_f64().unwrap_or(f64::NAN),
        }
    }
}
