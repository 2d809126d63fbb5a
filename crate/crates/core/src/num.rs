//! Scalar abstraction for the numeric core.
//!
//! Every statistical routine in this crate is generic over [`Real`], a
//! blanket trait satisfied by `f32` and `f64`. The crate root exposes
//! `f64` type aliases for callers that do not care about genericity.

use std::fmt;
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum<T>
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for lifting an `f64` constant into the generic scalar type.
#[inline]
pub fn real<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 constant must be representable in the scalar type")
}

/// Lifts a `usize` count into the generic scalar type.
#[inline]
pub fn count<R: Real>(n: usize) -> R {
    R::from_usize(n).expect("usize count must be representable in the scalar type")
}

/// Sample mean of a slice.
pub fn mean<R: Real>(xs: &[R]) -> R {
    xs.iter().copied().sum::<R>() / count(xs.len())
}

/// Sample variance with the n-1 denominator.
pub fn sample_variance<R: Real>(xs: &[R]) -> R {
    let m = mean(xs);
    let ss: R = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    ss / count(xs.len() - 1)
}

/// Sample covariance with the n-1 denominator.
pub fn sample_covariance<R: Real>(xs: &[R], ys: &[R]) -> R {
    let mx = mean(xs);
    let my = mean(ys);
    let ss: R = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (x - mx) * (y - my))
        .sum();
    ss / count(xs.len() - 1)
}
