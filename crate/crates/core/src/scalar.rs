//! Scalar abstraction shared by every algebraic type in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar (`f32` or `f64`) with the representation tolerances
/// used by the sparse containers.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Coefficients with magnitude below this are dropped from chaos expansions.
    const REPR_EPS: Self;
    /// Two directions (or atoms) closer than this in every coordinate are merged.
    const MERGE_TOL: Self;
    /// Allowed deviation of probability weights from unit mass.
    const MASS_TOL: Self;

    /// Converts an `f64` literal. Never fails for the supported float types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite float converts to f64")
    }
}

macro_rules! impl_scalar {
    ($t:ty, $repr:expr, $merge:expr, $mass:expr) => {
        impl Scalar for $t {
            const REPR_EPS: Self = $repr;
            const MERGE_TOL: Self = $merge;
            const MASS_TOL: Self = $mass;
        }
    };
}

impl_scalar!(f64, 1e-15, 1e-12, 1e-12);
impl_scalar!(f32, 1e-7, 1e-6, 1e-5);

/// Euclidean inner product of two equally sized slices.
#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm_sq<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

/// `1 - a^k` for `a` in `[0, 1]`, accurate when `a` is close to one.
pub fn one_minus_pow<T: Scalar>(a: T, k: u32) -> T {
    if k == 0 {
        return T::zero();
    }
    if a > T::zero() {
        -(T::from_u32(k).unwrap() * a.ln()).exp_m1()
    } else {
        T::one()
    }
}

/// Exact `k!` as `u128`. Panics on overflow (k > 34).
pub fn factorial(k: u32) -> u128 {
    (1..=k as u128).product()
}

/// Exact binomial coefficient.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
