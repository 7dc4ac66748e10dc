//! Real scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point real type: `f32` or `f64`.
///
/// Every tolerance in the crate is expressed in this type, so the default
/// tolerances only make sense for `f64`; `f32` works for the algebra but will
/// not meet the 1e-9-level checks.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + rustfft::FftNum
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over a [`Scalar`].
pub type Cx<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("usize representable in scalar type")
}

#[inline]
pub fn cx<T: Scalar>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub fn real<T: Scalar>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

/// `|z|` computed with `hypot`.
#[inline]
pub fn modulus<T: Scalar>(z: Cx<T>) -> T {
    z.re.hypot(z.im)
}

/// Unimodular `z/|z|`, or 1 for `z = 0`.
pub fn unit_phase<T: Scalar>(z: Cx<T>) -> Cx<T> {
    let m = modulus(z);
    if m == T::zero() {
        Complex::new(T::one(), T::zero())
    } else {
        z / m
    }
}

/// Unit complex number `e^{iθ}`.
#[inline]
pub fn cis<T: Scalar>(theta: T) -> Cx<T> {
    Complex::new(theta.cos(), theta.sin())
}
