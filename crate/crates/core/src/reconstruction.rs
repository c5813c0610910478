//! Recovery of the generalized Cauchy data and the Weyl function from a
//! subspectrum: solve `(u, v_n) = w_n`, unpack `u`, and evaluate Δ₀, Δ₁ by the
//! representations.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cauchy::CauchyData;
use crate::entire::EntirePair;
use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::hp::HpVector;
use crate::linalg::lstsq;
use crate::moment::{build_moment_system, MomentSystem, UnknownBasis};
use crate::scalar::{cx_to_f64, lit, to_f64, Cx, Real};
use crate::spectral::POLE_TOL;
use crate::subspectrum::{ClassA, Subspectrum};

pub use crate::repr::deltas_from_cauchy;

/// Singular values below `RANK_TOL·σ_max` are discarded and count as rank loss.
pub const RANK_TOL: f64 = 1e-12;
/// `σ_min/σ_max` below which the report warns about non-uniqueness.
pub const NON_UNIQUE_RATIO: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructOptions<T> {
    pub basis: UnknownBasis,
    /// Tikhonov weight μ.
    pub reg: T,
    pub rank_tol: T,
    pub non_unique_ratio: T,
    /// Bound on `|Im ρ_n|` for the class-𝒜 report.
    pub im_bound: T,
}

impl<T: Real> Default for ReconstructOptions<T> {
    fn default() -> Self {
        Self {
            basis: UnknownBasis::Legendre(12),
            reg: T::zero(),
            rank_tol: lit(RANK_TOL),
            non_unique_ratio: lit(NON_UNIQUE_RATIO),
            im_bound: lit(10.0),
        }
    }
}

/// Facts about one solve of the normalized system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveInfo {
    pub rows: usize,
    pub dim: usize,
    pub rank: usize,
    pub min_sv: f64,
    pub max_sv: f64,
    /// `σ_min/σ_max` over `min(rows, dim)` singular values; zero when `rows < dim`.
    pub sv_ratio: f64,
    /// Euclidean residual of the normalized system.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// The rows do not determine `u`: the solution is one of many.
    NonUnique { rank: usize, dim: usize, sv_ratio: f64 },
    /// The subspectrum misses the class-𝒜 proxy.
    ClassA { max_im_rho: f64, nonzero: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub solve: SolveInfo,
    /// `max_n |(u, v_n) − w_n| / ‖v_n‖` with the exact kernels.
    pub moment_residual: f64,
    pub class_a: ClassA,
    pub warnings: Vec<Warning>,
}

impl Report {
    pub fn non_unique(&self) -> bool {
        self.warnings.iter().any(|w| matches!(w, Warning::NonUnique { .. }))
    }
}

/// Minimizer of `Σ_n |(u, v_n/‖v_n‖) − w_n/‖v_n‖|² + μ‖u‖²` over `basis`.
///
/// Does not fail on rank loss; see [`solve_moment`].
pub fn solve_moment_unchecked<T: Real>(
    system: &MomentSystem<T>,
    basis: UnknownBasis,
    reg: T,
    rank_tol: T,
) -> (HpVector<T>, SolveInfo) {
    let (g, rhs) = system.design(basis);
    let dim = g.cols();
    let sol = lstsq(&g, &rhs, reg, rank_tol);
    let max_sv = sol.singular_values.iter().copied().fold(T::zero(), T::max);
    let min_sv = sol.singular_values.iter().copied().fold(T::infinity(), T::min);
    let min_sv = if min_sv.is_finite() { min_sv } else { T::zero() };
    let ratio = if system.len() < dim || max_sv == T::zero() { T::zero() } else { min_sv / max_sv };
    let info = SolveInfo {
        rows: system.len(),
        dim,
        rank: sol.rank,
        min_sv: to_f64(min_sv),
        max_sv: to_f64(max_sv),
        sv_ratio: to_f64(ratio),
        residual: to_f64(sol.residual),
    };
    (system.synthesize(basis, &sol.x), info)
}

/// As [`solve_moment_unchecked`], failing with `RankDeficient` when the
/// normalized design has fewer than `dim` singular values above `rank_tol·σ_max`.
pub fn solve_moment<T: Real>(
    system: &MomentSystem<T>,
    basis: UnknownBasis,
    reg: T,
    rank_tol: T,
) -> Result<(HpVector<T>, SolveInfo)> {
    let (u, info) = solve_moment_unchecked(system, basis, reg, rank_tol);
    if info.rank < info.dim {
        return Err(Error::RankDeficient { rank: info.rank, dim: info.dim, ratio: info.sv_ratio });
    }
    Ok((u, info))
}

/// `u = [conj 𝒥, conj 𝒢, conj A]`.
pub fn pack_u<T: Real>(data: &CauchyData<T>) -> HpVector<T> {
    data.to_u()
}

/// Inverse of [`pack_u`].
pub fn unpack_u<T: Real>(u: &HpVector<T>) -> Result<CauchyData<T>> {
    let d = CauchyData::from_u(u);
    CauchyData::new(d.grid, d.j, d.g, d.a)
}

/// Recovered data with evaluators for Δ₀, Δ₁ and the Weyl function.
#[derive(Debug, Clone)]
pub struct Reconstruction<T> {
    pub data: CauchyData<T>,
    pub u: HpVector<T>,
    pub report: Report,
}

impl<T: Real> Reconstruction<T> {
    pub fn deltas(&self, lambda: Cx<T>) -> (Cx<T>, Cx<T>) {
        deltas_from_cauchy(&self.data, lambda)
    }

    /// `M(λ) = Δ₀/Δ₁` of the recovered data.
    pub fn weyl(&self, lambda: Cx<T>) -> Result<Cx<T>> {
        let (d0, d1) = self.deltas(lambda);
        let scale = crate::repr::natural_scale(self.data.p(), 1, lambda);
        if d1.norm() <= lit::<T>(POLE_TOL) * scale {
            let (re, im) = cx_to_f64(lambda);
            return Err(Error::PoleProximity { re, im });
        }
        Ok(d0 / d1)
    }
}

/// Solves an assembled system and reports; rank loss becomes a warning.
pub fn reconstruct_system<T: Real>(system: &MomentSystem<T>, opts: &ReconstructOptions<T>) -> Result<Reconstruction<T>> {
    if system.is_empty() {
        return Err(Error::InvalidInput("empty subspectrum".into()));
    }
    let (u, solve) = solve_moment_unchecked(system, opts.basis, opts.reg, opts.rank_tol);
    let mut warnings = Vec::new();
    if solve.rank < solve.dim || solve.sv_ratio < to_f64(opts.non_unique_ratio) {
        warnings.push(Warning::NonUnique { rank: solve.rank, dim: solve.dim, sv_ratio: solve.sv_ratio });
    }
    let class_a = system.lambdas.class_a(opts.im_bound);
    if !class_a.passes {
        warnings.push(Warning::ClassA { max_im_rho: class_a.max_im_rho, nonzero: class_a.nonzero });
    }
    let moment_residual = to_f64(system.residual(&u));
    let data = unpack_u(&u)?;
    Ok(Reconstruction { data, u, report: Report { solve, moment_residual, class_a, warnings } })
}

/// Builds the moment system for `(p, f, subspectrum)` on `grid` and solves it.
pub fn reconstruct<T: Real>(
    p: usize,
    f: &dyn EntirePair<T>,
    sub: &Subspectrum<T>,
    grid: UniformGrid<T>,
    opts: &ReconstructOptions<T>,
) -> Result<Reconstruction<T>> {
    if sub.is_empty() {
        return Err(Error::InvalidInput("empty subspectrum".into()));
    }
    let system = build_moment_system(sub, f, p, grid)?;
    reconstruct_system(&system, opts)
}

/// A reconstruction problem with a known exact subspectrum.
#[derive(Clone)]
pub struct StabilityBase<T: Real> {
    pub p: usize,
    pub f: Arc<dyn EntirePair<T>>,
    pub subspectrum: Subspectrum<T>,
    pub grid: UniformGrid<T>,
    pub opts: ReconstructOptions<T>,
}

/// One trial: errors of the perturbed reconstruction against the unperturbed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub omega: f64,
    pub trial: usize,
    pub err_u: f64,
    pub err_j: f64,
    pub err_g: f64,
    pub err_a: f64,
    /// Solver failure message, with the errors set to NaN.
    pub failure: Option<String>,
}

/// Complex Gaussian perturbation of `ρ_n` rescaled to `(Σ|ρ̃_n − ρ_n|²)^{1/2} = Ω`.
pub fn perturb<T: Real>(sub: &Subspectrum<T>, omega: T, rng: &mut ChaCha8Rng) -> Subspectrum<T> {
    let noise: Vec<Cx<T>> = (0..sub.len())
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Cx::new(lit(re), lit(im))
        })
        .collect();
    let norm = noise.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let scale = if norm > T::zero() { omega / norm } else { T::zero() };
    let rhos: Vec<Cx<T>> = sub.rhos().iter().zip(&noise).map(|(r, z)| *r + *z * scale).collect();
    Subspectrum::from_rhos(&rhos)
}

/// Deterministic generator for `(seed, level, trial)`.
pub fn trial_rng(seed: u64, level: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((level as u64) << 32) | trial as u64);
    rng
}

/// Reruns the reconstruction on perturbed subspectra; trials run in parallel and
/// rows come back ordered by `(level, trial)`.
pub fn stability_experiment<T: Real>(
    base: &StabilityBase<T>,
    omegas: &[T],
    trials: usize,
    seed: u64,
) -> Result<Vec<StabilityRow>> {
    let reference = reconstruct(base.p, base.f.as_ref(), &base.subspectrum, base.grid, &base.opts)?;
    let jobs: Vec<(usize, usize)> = (0..omegas.len()).flat_map(|l| (0..trials).map(move |t| (l, t))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(level, trial)| {
            let omega = omegas[level];
            let mut rng = trial_rng(seed, level, trial);
            let sub = perturb(&base.subspectrum, omega, &mut rng);
            let row = |e: [f64; 4], failure| StabilityRow {
                omega: to_f64(omega),
                trial,
                err_u: e[0],
                err_j: e[1],
                err_g: e[2],
                err_a: e[3],
                failure,
            };
            match reconstruct(base.p, base.f.as_ref(), &sub, base.grid, &base.opts)
                .and_then(|r| r.data.errors_against(&reference.data))
            {
                Ok(e) => row([to_f64(e.abs_u), to_f64(e.abs_j), to_f64(e.abs_g), to_f64(e.abs_a)], None),
                Err(e) => row([f64::NAN; 4], Some(e.to_string())),
            }
        })
        .collect();
    Ok(rows)
}

/// Per-level medians of `err/Ω` and the fitted constants `C` with `err ≤ C·Ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilitySummary {
    pub omega: f64,
    pub median_ratio_u: f64,
    pub c_u: f64,
    pub c_j: f64,
    pub c_g: f64,
    pub c_a: f64,
    pub failures: usize,
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Summarizes rows by Ω level; `C` is the largest observed `err/Ω`.
pub fn summarize_stability(rows: &[StabilityRow]) -> Vec<StabilitySummary> {
    let mut levels: Vec<f64> = Vec::new();
    for r in rows {
        if !levels.contains(&r.omega) {
            levels.push(r.omega);
        }
    }
    levels
        .into_iter()
        .map(|omega| {
            let ok: Vec<&StabilityRow> = rows.iter().filter(|r| r.omega == omega && r.failure.is_none()).collect();
            let failures = rows.iter().filter(|r| r.omega == omega && r.failure.is_some()).count();
            let ratio = |f: fn(&StabilityRow) -> f64| -> Vec<f64> {
                ok.iter().map(|r| if omega > 0.0 { f(r) / omega } else { f(r) }).collect()
            };
            let max = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
            StabilitySummary {
                omega,
                median_ratio_u: median(ratio(|r| r.err_u)),
                c_u: max(ratio(|r| r.err_u)),
                c_j: max(ratio(|r| r.err_j)),
                c_g: max(ratio(|r| r.err_g)),
                c_a: max(ratio(|r| r.err_a)),
                failures,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests;
