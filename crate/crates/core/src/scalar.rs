//! Numeric traits the library is generic over.
//!
//! [`Scalar`] is any ordered field (floats, or exact rationals such as
//! `num_rational::BigRational`). Graph construction, surgery, minimum cuts and
//! the linear (p = 2) torsion solve only need this. Everything involving
//! fractional powers needs [`Real`].

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Num + Signed + Clone + PartialOrd + Debug + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

pub trait Real: Scalar + Float + FloatConst + Copy {}

impl<T> Real for T where T: Scalar + Float + FloatConst + Copy {}

/// Converts an `f64` constant into the scalar type.
///
/// Panics only if the scalar cannot represent finite `f64` values, which does
/// not happen for any supported type.
pub fn cast<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("scalar type must represent f64 constants")
}

pub fn from_usize<S: Scalar>(n: usize) -> S {
    S::from_usize(n).expect("scalar type must represent integers")
}

pub(crate) fn to_f64<S: Scalar>(x: &S) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn max_of<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn min_of<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

/// `sign(x) |x|^(p-1)`, with `phi_p(0) = 0`.
pub fn phi_p<S: Real>(x: S, p: S) -> S {
    if x == S::zero() {
        S::zero()
    } else {
        x.signum() * x.abs().powf(p - S::one())
    }
}

