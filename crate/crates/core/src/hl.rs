//! Half-inverse problem on `(0, 2π)`: the potential on `(π, 2π)` and the right
//! boundary polynomials `(r₁, r₂)` are known; the full spectrum determines the
//! left half.
//!
//! The known half enters through `f₁ = −ψ(π, λ)`, `f₂ = ψ^{[1]}(π, λ)`, where
//! `ψ(2π) = r₁`, `ψ^{[1]}(2π) = −r₂`. With `z(s) = ψ(2π − s)` on the reflected
//! potential `σ̂(s) = −σ(2π − s)` one has `z^{[1]} = −ψ^{[1]}`, so
//! `z = r₁C̃ + r₂S̃` and `(f₁, f₂) = −(z(π), z^{[1]}(π))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryPolyPair, Parity};
use crate::entire::{EntirePair, Growth};
use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::moment::{basis_diagnostics, build_moment_system, BasisDiagnostics};
use crate::ode::{transfer, transfer_with_derivative, IntegratorConfig, Mat2};
use crate::reconstruction::{reconstruct_system, ReconstructOptions, Reconstruction};
use crate::scalar::{creal, idx, lit, to_f64, Cx, Real};
use crate::sigma::SigmaFunction;
use crate::spectral::{char_pair_with, char_pair_with_derivative, find_first_eigenvalues, Analytic, SearchOptions};
use crate::subspectrum::Subspectrum;

/// `(ψ(π, λ), ψ^{[1]}(π, λ))` for the right half `sigma_right` (re-based on `[0, π]`).
pub fn psi_mid<T: Real>(
    sigma_right: &SigmaFunction<T>,
    right: &BoundaryPolyPair<T>,
    lambda: Cx<T>,
) -> Result<(Cx<T>, Cx<T>)> {
    let m = transfer(&sigma_right.reflected(), lambda, &IntegratorConfig::default())?;
    let (z, zq) = propagate(&m, right.p1(lambda), right.p2(lambda));
    Ok((z, -zq))
}

fn propagate<T: Real>(m: &Mat2<T>, r1: Cx<T>, r2: Cx<T>) -> (Cx<T>, Cx<T>) {
    (r1 * m[0][0] + r2 * m[0][1], r1 * m[1][0] + r2 * m[1][1])
}

/// The entire pair generated by the known right half.
#[derive(Debug, Clone)]
pub struct HlPair<T> {
    reflected: SigmaFunction<T>,
    right: BoundaryPolyPair<T>,
    pub cfg: IntegratorConfig<T>,
}

impl<T: Real> HlPair<T> {
    pub fn new(sigma_right: &SigmaFunction<T>, right: BoundaryPolyPair<T>) -> Self {
        Self { reflected: sigma_right.reflected(), right, cfg: IntegratorConfig::default() }
    }

    pub fn r(&self) -> usize {
        self.right.p()
    }
}

impl<T: Real> EntirePair<T> for HlPair<T> {
    fn eval(&self, lambda: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        let m = transfer(&self.reflected, lambda, &self.cfg)?;
        let (z, zq) = propagate(&m, self.right.p1(lambda), self.right.p2(lambda));
        Ok((-z, -zq))
    }

    fn eval_derivative(&self, lambda: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        let (m, dm) = transfer_with_derivative(&self.reflected, lambda, &self.cfg)?;
        let ((r1, dr1), (r2, dr2)) = self.right.eval_with_derivative(lambda);
        let (a, aq) = propagate(&dm, r1, r2);
        let (b, bq) = propagate(&m, dr1, dr2);
        Ok((-(a + b), -(aq + bq)))
    }

    fn growth(&self) -> Growth<T> {
        Growth { alpha: Some(idx(self.r() - 1)), bounds: None }
    }
}

/// `f₁ = −ψ(π, λ)`, `f₂ = ψ^{[1]}(π, λ)` with growth exponent `α = r − 1`.
pub fn hl_entire_pair<T: Real>(sigma_right: &SigmaFunction<T>, right: &BoundaryPolyPair<T>) -> HlPair<T> {
    HlPair::new(sigma_right, right.clone())
}

/// The full problem on `(0, 2π)`.
#[derive(Debug, Clone)]
pub struct TwoSidedProblem<T> {
    pub sigma_full: SigmaFunction<T>,
    pub left: BoundaryPolyPair<T>,
    pub right: BoundaryPolyPair<T>,
}

impl<T: Real> TwoSidedProblem<T> {
    pub fn new(sigma_full: SigmaFunction<T>, left: BoundaryPolyPair<T>, right: BoundaryPolyPair<T>) -> Result<Self> {
        if sigma_full.cells() % 2 != 0 {
            return Err(Error::InvalidInput("the two-sided grid needs an even cell count".into()));
        }
        let x = to_f64(sigma_full.interval());
        if (x - 2.0 * std::f64::consts::PI).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("two-sided interval must be 2π, got {x}")));
        }
        Ok(Self { sigma_full, left, right })
    }

    pub fn p(&self) -> usize {
        self.left.p()
    }

    pub fn r(&self) -> usize {
        self.right.p()
    }

    /// `σ` on `[0, π]`.
    pub fn sigma_left(&self) -> Result<SigmaFunction<T>> {
        let m = self.sigma_full.cells();
        self.sigma_full.restrict(0, m / 2)
    }

    /// `σ` on `[π, 2π]`, re-based at zero.
    pub fn sigma_right(&self) -> Result<SigmaFunction<T>> {
        let m = self.sigma_full.cells();
        self.sigma_full.restrict(m / 2, m)
    }

    pub fn entire_pair(&self) -> Result<HlPair<T>> {
        Ok(HlPair::new(&self.sigma_right()?, self.right.clone()))
    }

    /// Both parities must be odd for the exclusion rule; its count is `(r − p)/2`.
    pub fn exclusion_count(&self) -> Result<usize> {
        if self.left.parity() != Parity::Odd || self.right.parity() != Parity::Odd {
            return Err(Error::ParityMismatch(format!(
                "the half-inverse driver needs odd p and r, got p = {}, r = {}",
                self.p(),
                self.r()
            )));
        }
        if self.r() < self.p() {
            return Err(Error::InvalidInput(format!("the exclusion rule needs r >= p, got p = {}, r = {}", self.p(), self.r())));
        }
        Ok((self.r() - self.p()) / 2)
    }
}

/// `Δ(λ) = f₁Δ₁ + f₂Δ₀` of the two-sided problem, split at π.
pub struct HlDelta<T: Real> {
    pub sigma_left: SigmaFunction<T>,
    pub left: BoundaryPolyPair<T>,
    pub f: HlPair<T>,
    pub cfg: IntegratorConfig<T>,
}

impl<T: Real> HlDelta<T> {
    pub fn new(problem: &TwoSidedProblem<T>) -> Result<Self> {
        Ok(Self {
            sigma_left: problem.sigma_left()?,
            left: problem.left.clone(),
            f: problem.entire_pair()?,
            cfg: IntegratorConfig::default(),
        })
    }
}

impl<T: Real> Analytic<T> for HlDelta<T> {
    fn value(&self, z: Cx<T>) -> Result<Cx<T>> {
        let (d0, d1) = char_pair_with(&self.sigma_left, &self.left, z, &self.cfg)?;
        let (f1, f2) = self.f.eval(z)?;
        Ok(f1 * d1 + f2 * d0)
    }

    fn value_and_derivative(&self, z: Cx<T>) -> Result<(Cx<T>, Cx<T>)> {
        let ((d0, d1), (dd0, dd1)) = char_pair_with_derivative(&self.sigma_left, &self.left, z, &self.cfg)?;
        let (f1, f2) = self.f.eval(z)?;
        let (df1, df2) = self.f.eval_derivative(z)?;
        Ok((f1 * d1 + f2 * d0, df1 * d1 + f1 * dd1 + df2 * d0 + f2 * dd0))
    }
}

/// Characteristic determinant of the full interval without the split:
/// `r₁φ^{[1]}(2π) + r₂φ(2π)` with `φ(0) = p₁`, `φ^{[1]}(0) = −p₂`. Equals `−Δ`.
pub fn full_interval_delta<T: Real>(problem: &TwoSidedProblem<T>, lambda: Cx<T>) -> Result<Cx<T>> {
    let m = transfer(&problem.sigma_full, lambda, &IntegratorConfig::default())?;
    let (p1, p2) = (problem.left.p1(lambda), problem.left.p2(lambda));
    let phi = p1 * m[0][0] - p2 * m[0][1];
    let phiq = p1 * m[1][0] - p2 * m[1][1];
    Ok(problem.right.p1(lambda) * phiq + problem.right.p2(lambda) * phi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HlSpectrumOptions<T> {
    /// Lower end of the search window for `Re λ`.
    pub lo: T,
    pub imag_band: T,
    pub search: SearchOptions<T>,
    /// Relative agreement required between the `count` and `count/2` runs.
    pub saturation_tol: T,
}

impl<T: Real> Default for HlSpectrumOptions<T> {
    fn default() -> Self {
        Self { lo: lit(-30.0), imag_band: lit(4.0), search: SearchOptions::default(), saturation_tol: lit(1e-9) }
    }
}

/// The first `count` eigenvalues `η_n`, verified against a `count/2` rerun and
/// checked for simplicity.
pub fn hl_spectrum<T: Real>(problem: &TwoSidedProblem<T>, count: usize, opts: &HlSpectrumOptions<T>) -> Result<Subspectrum<T>> {
    let delta = HlDelta::new(problem)?;
    let full = find_first_eigenvalues(&delta, count, opts.lo, opts.imag_band, &opts.search)?;
    let half = find_first_eigenvalues(&delta, count / 2, opts.lo, opts.imag_band, &opts.search)?;
    for (a, b) in half.lambdas().iter().zip(full.lambdas()) {
        if (*a - *b).norm() > opts.saturation_tol * (T::one() + b.norm()) {
            return Err(Error::RootLoss { lo: to_f64(opts.lo), hi: to_f64(a.re), expected: half.len() as i64, found: -1 });
        }
    }
    full.check_simple(lit(crate::moment::SIMPLE_TOL))?;
    // η = 0 is a legitimate eigenvalue here; reconstruction flags it through class 𝒜.
    Ok(full)
}

#[derive(Debug, Clone)]
pub struct HlReconstruction<T> {
    pub reconstruction: Reconstruction<T>,
    /// Diagnostics of the moment rows actually used.
    pub diagnostics: BasisDiagnostics,
    pub dropped: usize,
    /// `(r − p)/2`.
    pub exclusion_count: usize,
}

/// Left-half Cauchy data from the spectrum with the first `drop` eigenvalues removed.
pub fn hl_reconstruct<T: Real>(
    sigma_right: &SigmaFunction<T>,
    right: &BoundaryPolyPair<T>,
    p: usize,
    spectrum: &Subspectrum<T>,
    drop: usize,
    grid: UniformGrid<T>,
    opts: &ReconstructOptions<T>,
) -> Result<HlReconstruction<T>> {
    if p % 2 == 0 || right.p() % 2 == 0 {
        return Err(Error::ParityMismatch(format!("the half-inverse driver needs odd p and r, got p = {p}, r = {}", right.p())));
    }
    if right.p() < p {
        return Err(Error::InvalidInput(format!("the exclusion rule needs r >= p, got p = {p}, r = {}", right.p())));
    }
    if drop >= spectrum.len() {
        return Err(Error::InvalidInput("nothing left after dropping".into()));
    }
    let f = hl_entire_pair(sigma_right, right);
    let sub = spectrum.skip(drop);
    let system = build_moment_system(&sub, &f, p, grid)?;
    let diagnostics = basis_diagnostics(&system, opts.basis);
    let reconstruction = reconstruct_system(&system, opts)?;
    Ok(HlReconstruction { reconstruction, diagnostics, dropped: drop, exclusion_count: (right.p() - p) / 2 })
}

/// Fitted constants of the growth estimates on a set of eigenvalues:
/// `|f₁| ≤ C₁|ρ|^{r−1}`, `|f₂| ≤ C₂|ρ|^r`, `|f₁|² + |λ|⁻¹|f₂|² ≥ c|λ|^{r−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthEnvelope {
    pub c1: f64,
    pub c2: f64,
    pub c_lower: f64,
    /// `max(C₁, C₂)/c`.
    pub ratio: f64,
}

pub fn growth_envelope<T: Real>(f: &dyn EntirePair<T>, r: usize, eta: &Subspectrum<T>) -> Result<GrowthEnvelope> {
    // The bounds are stated for η ≠ 0.
    let vals: Vec<(T, T, T)> = eta
        .lambdas()
        .par_iter()
        .zip(eta.rhos())
        .filter(|(l, _)| l.norm() > lit::<T>(1e-10))
        .map(|(&l, rho)| -> Result<(T, T, T)> {
            let (f1, f2) = f.eval(l)?;
            let rr = rho.norm();
            let a = f1.norm() / rr.powi(r as i32 - 1);
            let b = f2.norm() / rr.powi(r as i32);
            let low = (f1.norm_sqr() + f2.norm_sqr() / l.norm()) / l.norm().powi(r as i32 - 1);
            Ok((a, b, low))
        })
        .collect::<Result<_>>()?;
    let c1 = vals.iter().map(|v| to_f64(v.0)).fold(0.0, f64::max);
    let c2 = vals.iter().map(|v| to_f64(v.1)).fold(0.0, f64::max);
    let c_lower = vals.iter().map(|v| to_f64(v.2)).fold(f64::INFINITY, f64::min);
    Ok(GrowthEnvelope { c1, c2, c_lower, ratio: c1.max(c2) / c_lower })
}

/// `|√η_n − (n/2 − (p+r)/4)|` for `n = 1..`.
pub fn asymptotic_deviation<T: Real>(eta: &Subspectrum<T>, p: usize, r: usize) -> Vec<f64> {
    eta.rhos()
        .iter()
        .enumerate()
        .map(|(k, rho)| {
            let n = (k + 1) as f64;
            (*rho - creal(lit::<T>(n / 2.0 - (p + r) as f64 / 4.0))).norm()
        })
        .map(to_f64)
        .collect()
}
