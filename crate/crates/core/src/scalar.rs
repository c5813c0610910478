//! Scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the library is generic over (`f32`, `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Sum
        + Send
        + Sync
        + 'static
{
}

/// Complex scalar over `T`.
pub type Cx<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in the scalar type")
}

/// Converts an index or count into `T`.
#[inline]
pub fn idx<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in the scalar type")
}

#[inline]
pub fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Cx::new(lit(re), lit(im))
}

#[inline]
pub fn creal<T: Real>(re: T) -> Cx<T> {
    Cx::new(re, T::zero())
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cx_to_f64<T: Real>(z: Cx<T>) -> (f64, f64) {
    (to_f64(z.re), to_f64(z.im))
}

#[inline]
pub fn cx_from_f64<T: Real>(z: (f64, f64)) -> Cx<T> {
    cx(z.0, z.1)
}

#[inline]
pub fn is_finite<T: Real>(z: Cx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Square root of `lambda` on the branch arg ρ ∈ [−π/2, π/2).
///
/// Negative reals map to the lower imaginary half-axis.
pub fn rho_of<T: Real>(lambda: Cx<T>) -> Cx<T> {
    let r = lambda.sqrt();
    if r.re == T::zero() && r.im > T::zero() {
        -r
    } else {
        r
    }
}

/// `cos(√λ x)`, entire in λ.
#[inline]
pub fn cos_sqrt<T: Real>(lambda: Cx<T>, x: T) -> Cx<T> {
    (lambda.sqrt() * x).cos()
}

/// `sin(√λ x)/√λ`, entire in λ; series near λ = 0.
pub fn sinc_sqrt<T: Real>(lambda: Cx<T>, x: T) -> Cx<T> {
    let rho = lambda.sqrt();
    if rho.norm() * (T::one() + x.abs()) < lit(1e-4) {
        let z = lambda * (x * x);
        let one = creal(T::one());
        let series = one - z / lit::<T>(6.0) + z * z / lit::<T>(120.0) - z * z * z / lit::<T>(5040.0);
        series * x
    } else {
        (rho * x).sin() / rho
    }
}

/// `λ^k` for a nonnegative integer power.
#[inline]
pub fn cpowi<T: Real>(lambda: Cx<T>, k: usize) -> Cx<T> {
    let mut acc = creal(T::one());
    for _ in 0..k {
        acc = acc * lambda;
    }
    acc
}

/// Relative closeness with an absolute floor of one.
#[inline]
pub fn rel_diff<T: Real>(a: Cx<T>, b: Cx<T>) -> T {
    (a - b).norm() / (T::one() + a.norm().max(b.norm()))
}
