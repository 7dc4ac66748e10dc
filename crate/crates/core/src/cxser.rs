//! Serde helpers encoding complex numbers as `{"re": .., "im": ..}`.

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Scalar;

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct CxJson<T: Scalar> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> From<Complex<T>> for CxJson<T> {
    fn from(z: Complex<T>) -> Self {
        CxJson { re: z.re, im: z.im }
    }
}

impl<T: Scalar> From<CxJson<T>> for Complex<T> {
    fn from(z: CxJson<T>) -> Self {
        Complex::new(z.re, z.im)
    }
}

pub fn serialize<S: Serializer, T: Scalar>(z: &Complex<T>, s: S) -> Result<S::Ok, S::Error> {
    CxJson::from(*z).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(d: D) -> Result<Complex<T>, D::Error> {
    CxJson::<T>::deserialize(d).map(Complex::from)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer, T: Scalar>(v: &[Complex<T>], s: S) -> Result<S::Ok, S::Error> {
        let items: Vec<CxJson<T>> = v.iter().map(|z| CxJson::from(*z)).collect();
        items.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(
        d: D,
    ) -> Result<Vec<Complex<T>>, D::Error> {
        let items = Vec::<CxJson<T>>::deserialize(d)?;
        Ok(items.into_iter().map(Complex::from).collect())
    }
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer, T: Scalar>(
        v: &Option<Complex<T>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        v.map(CxJson::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(
        d: D,
    ) -> Result<Option<Complex<T>>, D::Error> {
        Ok(Option::<CxJson<T>>::deserialize(d)?.map(Complex::from))
    }
}
