//! Entire pairs (f₁, f₂) entering the right-end boundary condition.

use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{cx_to_f64, idx, lit, Cx, Real};

/// Growth metadata for the stability estimates: constant exponent α and optional
/// bounds `(a₁, a₂, a₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Growth<T> {
    pub alpha: Option<T>,
    pub bounds: Option<[T; 3]>,
}

/// An evaluable pair of entire functions of λ.
pub trait EntirePair<T: Real>: Send + Sync {
    fn eval(&self, lambda: Cx<T>) -> Result<(Cx<T>, Cx<T>)>;

    /// λ-derivatives; defaults to a four-point Cauchy-circle difference.
    fn eval_derivative(&self, lambda: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        circle_derivative(|z| self.eval(z), lambda)
    }

    fn growth(&self) -> Growth<T> {
        Growth::default()
    }
}

/// Derivative of a pair-valued analytic map by the trapezoid Cauchy formula on a small circle.
pub fn circle_derivative<T: Real>(
    f: impl Fn(Cx<T>) -> Result<(Cx<T>, Cx<T>)>,
    z: Cx<T>,
) -> Result<(Cx<T>, Cx<T>)> {
    let n = 8;
    let r = T::epsilon().powf(lit(0.25)) * (T::one() + z.norm()).sqrt();
    let mut d1 = Cx::new(T::zero(), T::zero());
    let mut d2 = d1;
    for k in 0..n {
        let e = Cx::from_polar(T::one(), lit::<T>(2.0) * T::PI() * idx::<T>(k) / idx::<T>(n));
        let (a, b) = f(z + e * r)?;
        d1 = d1 + a * e.conj();
        d2 = d2 + b * e.conj();
    }
    let scale = r * idx::<T>(n);
    Ok((d1 / scale, d2 / scale))
}

/// Polynomial pair, including the constant pairs (1, 0) and (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPair<T> {
    pub f1: Vec<Cx<T>>,
    pub f2: Vec<Cx<T>>,
}

impl<T: Real> PolynomialPair<T> {
    pub fn new(f1: Vec<Cx<T>>, f2: Vec<Cx<T>>) -> Self {
        Self { f1, f2 }
    }

    pub fn constant(f1: Cx<T>, f2: Cx<T>) -> Self {
        Self { f1: vec![f1], f2: vec![f2] }
    }

    /// `y^{[1]}(π) = 0`: `(f₁, f₂) = (1, 0)`.
    pub fn neumann() -> Self {
        Self::constant(Cx::new(T::one(), T::zero()), Cx::new(T::zero(), T::zero()))
    }

    /// `y(π) = 0`: `(f₁, f₂) = (0, 1)`.
    pub fn dirichlet() -> Self {
        Self::constant(Cx::new(T::zero(), T::zero()), Cx::new(T::one(), T::zero()))
    }
}

impl<T: Real> EntirePair<T> for PolynomialPair<T> {
    fn eval(&self, lambda: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        Ok((poly::eval(&self.f1, lambda), poly::eval(&self.f2, lambda)))
    }

    fn eval_derivative(&self, lambda: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        Ok((poly::eval_with_derivative(&self.f1, lambda).1, poly::eval_with_derivative(&self.f2, lambda).1))
    }
}

/// Pair given by a closure.
pub struct FnPair<F> {
    f: F,
}

impl<F> FnPair<F> {
    pub fn new(f: F) -> Self {
        Self { f }
    }
}

impl<T: Real, F> EntirePair<T> for FnPair<F>
where
    F: Fn(Cx<T>) -> (Cx<T>, Cx<T>) + Send + Sync,
{
    fn eval(&self, lambda: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        Ok((self.f)(lambda))
    }
}

/// Fails if `f₁` and `f₂` vanish together (relative to `1 + |λ|`) at any given point.
pub fn check_no_common_zero<T: Real>(f: &dyn EntirePair<T>, lambdas: &[Cx<T>], tol: T) -> Result<()> {
    for &l in lambdas {
        let (a, b) = f.eval(l)?;
        if a.norm().max(b.norm()) <= tol {
            let (re, im) = cx_to_f64(l);
            return Err(Error::InvalidInput(format!("f1 and f2 vanish together at lambda = {re}{im:+}i")));
        }
    }
    Ok(())
}
