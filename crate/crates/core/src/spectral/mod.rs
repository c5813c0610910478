//! Characteristic functions, eigenvalue location, the Weyl function, and
//! forward extraction of generalized Cauchy data.

pub(crate) mod extract;
mod roots;

pub use extract::{extract_cauchy, ExtractOptions, Extraction};
pub use roots::{
    find_eigenvalues, find_first_eigenvalues, Analytic, AnalyticFn, SearchOptions,
};

use crate::boundary::BoundaryPolyPair;
use crate::entire::EntirePair;
use crate::error::{Error, Result};
use crate::ode::{transfer, transfer_with_derivative, IntegratorConfig, Mat2};
use crate::scalar::{cx_to_f64, lit, rho_of, Cx, Real};
use crate::sigma::SigmaFunction;
use crate::subspectrum::Subspectrum;

/// `(Δ₀, Δ₁)` from the fundamental matrix at π.
fn deltas_from_transfer<T: Real>(pair: &BoundaryPolyPair<T>, lambda: Cx<T>, m: &Mat2<T>) -> (Cx<T>, Cx<T>) {
    let p1 = pair.p1(lambda);
    let p2 = pair.p2(lambda);
    (p1 * m[0][0] - p2 * m[0][1], p1 * m[1][0] - p2 * m[1][1])
}

/// `(Δ₀(λ), Δ₁(λ))` with `Δ_j = p₁ C^{[j]}(π) − p₂ S^{[j]}(π)`.
pub fn char_pair<T: Real>(sigma: &SigmaFunction<T>, pair: &BoundaryPolyPair<T>, lambda: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
    char_pair_with(sigma, pair, lambda, &IntegratorConfig::default())
}

pub fn char_pair_with<T: Real>(
    sigma: &SigmaFunction<T>,
    pair: &BoundaryPolyPair<T>,
    lambda: Cx<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<(Cx<T>, Cx<T>)> {
    let m = transfer(sigma, lambda, cfg)?;
    Ok(deltas_from_transfer(pair, lambda, &m))
}

/// `((Δ₀, Δ₁), (Δ₀′, Δ₁′))`.
pub fn char_pair_with_derivative<T: Real>(
    sigma: &SigmaFunction<T>,
    pair: &BoundaryPolyPair<T>,
    lambda: Cx<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<((Cx<T>, Cx<T>), (Cx<T>, Cx<T>))> {
    let (m, dm) = transfer_with_derivative(sigma, lambda, cfg)?;
    let ((p1, dp1), (p2, dp2)) = pair.eval_with_derivative(lambda);
    let d0 = p1 * m[0][0] - p2 * m[0][1];
    let d1 = p1 * m[1][0] - p2 * m[1][1];
    let dd0 = dp1 * m[0][0] + p1 * dm[0][0] - dp2 * m[0][1] - p2 * dm[0][1];
    let dd1 = dp1 * m[1][0] + p1 * dm[1][0] - dp2 * m[1][1] - p2 * dm[1][1];
    Ok(((d0, d1), (dd0, dd1)))
}

/// `Δ(λ) = f₁(λ)Δ₁(λ) + f₂(λ)Δ₀(λ)`.
pub fn char_delta<T: Real>(
    sigma: &SigmaFunction<T>,
    pair: &BoundaryPolyPair<T>,
    f: &dyn EntirePair<T>,
    lambda: Cx<T>,
) -> Result<Cx<T>> {
    let (d0, d1) = char_pair(sigma, pair, lambda)?;
    let (f1, f2) = f.eval(lambda)?;
    Ok(f1 * d1 + f2 * d0)
}

/// Natural magnitude of `Δ_j` at λ: the boundary-weighted size of the
/// fundamental solutions, with quasi-derivatives measured against `max(1, |ρ|)`.
fn delta_scale<T: Real>(pair: &BoundaryPolyPair<T>, lambda: Cx<T>, m: &Mat2<T>, j: usize) -> T {
    let r = rho_of(lambda).norm().max(T::one());
    let size = |y: Cx<T>, yq: Cx<T>| if j == 1 { r * y.norm() + yq.norm() } else { y.norm() + yq.norm() / r };
    pair.p1(lambda).norm() * size(m[0][0], m[1][0]) + pair.p2(lambda).norm() * size(m[0][1], m[1][1])
}

/// Relative size of `|Δ₁|` below which the Weyl function reports a pole.
pub const POLE_TOL: f64 = 1e-9;

/// Weyl function `M(λ) = Δ₀(λ)/Δ₁(λ)`.
pub fn weyl<T: Real>(sigma: &SigmaFunction<T>, pair: &BoundaryPolyPair<T>, lambda: Cx<T>) -> Result<Cx<T>> {
    let m = transfer(sigma, lambda, &IntegratorConfig::default())?;
    let (d0, d1) = deltas_from_transfer(pair, lambda, &m);
    if d1.norm() <= lit::<T>(POLE_TOL) * delta_scale(pair, lambda, &m, 1) {
        let (re, im) = cx_to_f64(lambda);
        return Err(Error::PoleProximity { re, im });
    }
    Ok(d0 / d1)
}

/// Characteristic function `Δ` of a forward problem as an analytic map, with
/// the exact λ-derivative of the discrete propagator.
pub struct CharDelta<'a, T: Real> {
    pub sigma: &'a SigmaFunction<T>,
    pub pair: &'a BoundaryPolyPair<T>,
    pub f: &'a dyn EntirePair<T>,
    pub cfg: IntegratorConfig<T>,
}

impl<'a, T: Real> CharDelta<'a, T> {
    pub fn new(sigma: &'a SigmaFunction<T>, pair: &'a BoundaryPolyPair<T>, f: &'a dyn EntirePair<T>) -> Self {
        Self { sigma, pair, f, cfg: IntegratorConfig::default() }
    }
}

impl<T: Real> Analytic<T> for CharDelta<'_, T> {
    fn value(&self, z: Cx<T>) -> Result<Cx<T>> {
        let (d0, d1) = char_pair_with(self.sigma, self.pair, z, &self.cfg)?;
        let (f1, f2) = self.f.eval(z)?;
        Ok(f1 * d1 + f2 * d0)
    }

    fn value_and_derivative(&self, z: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        let ((d0, d1), (dd0, dd1)) = char_pair_with_derivative(self.sigma, self.pair, z, &self.cfg)?;
        let (f1, f2) = self.f.eval(z)?;
        let (df1, df2) = self.f.eval_derivative(z)?;
        Ok((f1 * d1 + f2 * d0, df1 * d1 + f1 * dd1 + df2 * d0 + f2 * dd0))
    }
}

/// One component `Δ_j` (`j ∈ {0, 1}`) as an analytic map.
pub struct CharComponent<'a, T: Real> {
    pub sigma: &'a SigmaFunction<T>,
    pub pair: &'a BoundaryPolyPair<T>,
    pub j: usize,
    pub cfg: IntegratorConfig<T>,
}

impl<T: Real> Analytic<T> for CharComponent<'_, T> {
    fn value(&self, z: Cx<T>) -> Result<Cx<T>> {
        let (d0, d1) = char_pair_with(self.sigma, self.pair, z, &self.cfg)?;
        Ok(if self.j == 0 { d0 } else { d1 })
    }

    fn value_and_derivative(&self, z: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        let ((d0, d1), (dd0, dd1)) = char_pair_with_derivative(self.sigma, self.pair, z, &self.cfg)?;
        Ok(if self.j == 0 { (d0, dd0) } else { (d1, dd1) })
    }
}

/// Smallest `|Δ_{1−j}|/scale` over the given zeros of `Δ_j`.
///
/// A value well above zero certifies that Δ₀ and Δ₁ have no common zero there.
pub fn common_zero_margin<T: Real>(
    sigma: &SigmaFunction<T>,
    pair: &BoundaryPolyPair<T>,
    zeros: &Subspectrum<T>,
    j: usize,
) -> Result<T> {
    let mut margin = T::infinity();
    for &l in zeros.lambdas() {
        let m = transfer(sigma, l, &IntegratorConfig::default())?;
        let (d0, d1) = deltas_from_transfer(pair, l, &m);
        let (other, k) = if j == 1 { (d0, 0) } else { (d1, 1) };
        margin = margin.min(other.norm() / delta_scale(pair, l, &m, k));
    }
    Ok(margin)
}

/// Poles of the Weyl function on the real window: sign changes of `1/M = Δ₁/Δ₀`
/// at which `1/M` actually vanishes (sign changes through infinity are rejected).
pub fn weyl_poles<T: Real>(
    sigma: &SigmaFunction<T>,
    pair: &BoundaryPolyPair<T>,
    window: (T, T),
    opts: &SearchOptions<T>,
) -> Result<Vec<T>> {
    let cfg = IntegratorConfig::default();
    let recip = |l: T| -> Result<T> {
        let (d0, d1) = char_pair_with(sigma, pair, Cx::new(l, T::zero()), &cfg)?;
        Ok((d1 / d0).re)
    };
    roots::real_sign_change_zeros(&recip, window, opts, |l| {
        let (d0, d1) = char_pair_with(sigma, pair, Cx::new(l, T::zero()), &cfg)?;
        let m = transfer(sigma, Cx::new(l, T::zero()), &cfg)?;
        Ok(d1.norm() <= lit::<T>(1e-6) * delta_scale(pair, Cx::new(l, T::zero()), &m, 1) && d0.norm() > T::zero())
    })
}
