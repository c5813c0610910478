//! Forward extraction of generalized Cauchy data by fitting the integral
//! representations of Δ₀ and Δ₁ to sampled values.
//!
//! 𝒥 and 𝒢 are expanded in the orthonormal Legendre basis of `L₂(0, π)`;
//! each component gives an independent linear least-squares problem.

use rayon::prelude::*;

use crate::boundary::BoundaryPolyPair;
use crate::cauchy::CauchyData;
use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::linalg::{lstsq, svd, CMatrix};
use crate::ode::IntegratorConfig;
use crate::quadrature::{gauss_count_for, legendre_basis, GaussLegendre};
use crate::repr::{components, natural_scale, Component};
use crate::scalar::{cpowi, creal, idx, lit, rho_of, to_f64, Cx, Real};
use crate::sigma::SigmaFunction;

use super::char_pair_with;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions<T> {
    /// Legendre modes per kernel.
    pub modes: usize,
    /// Samples at `ρ = k/2`, `k = 1..=2·max_rho`.
    pub max_rho: usize,
    pub cond_limit: T,
    pub cfg: IntegratorConfig<T>,
}

impl<T: Real> Default for ExtractOptions<T> {
    fn default() -> Self {
        Self { modes: 16, max_rho: 40, cond_limit: lit(1e10), cfg: IntegratorConfig::default() }
    }
}

#[derive(Debug, Clone)]
pub struct Extraction<T> {
    pub data: CauchyData<T>,
    pub coeffs_j: Vec<Cx<T>>,
    pub coeffs_g: Vec<Cx<T>>,
    /// Largest relative residual `‖Ax − b‖/‖b‖` of the two fits (absolute if `b = 0`).
    pub residual: T,
    /// Largest condition estimate of the column-equilibrated design matrices.
    pub cond: T,
}

/// Sample points: half-integer and integer ρ, plus λ ≤ 0 near the origin.
pub(crate) fn sample_lambdas<T: Real>(max_rho: usize) -> Vec<Cx<T>> {
    let mut out: Vec<Cx<T>> = [0.0, -0.25, -1.0, -2.25, -4.0].iter().map(|&x| creal(lit(x))).collect();
    for k in 1..=2 * max_rho {
        let rho = idx::<T>(k) / lit(2.0);
        out.push(creal(rho * rho));
    }
    out
}

/// `∫₀^π φ_j(t) K(λ, t) dt` for `j < modes`.
pub(crate) fn legendre_pairings<T: Real>(
    comp: &Component,
    lambda: Cx<T>,
    modes: usize,
    rule: &(Vec<T>, Vec<T>, Vec<Vec<T>>),
) -> Vec<Cx<T>> {
    let (ts, ws, basis) = rule;
    let mut out = vec![creal(T::zero()); modes];
    for ((&t, &w), phi) in ts.iter().zip(ws).zip(basis) {
        let k = comp.kernel.eval(lambda, t) * w;
        for (o, &b) in out.iter_mut().zip(phi) {
            *o = *o + k * b;
        }
    }
    out
}

/// Gauss rule on `[0, π]` with Legendre values at its nodes.
pub(crate) fn legendre_rule<T: Real>(modes: usize, max_freq: T) -> (Vec<T>, Vec<T>, Vec<Vec<T>>) {
    let g = GaussLegendre::<T>::new(gauss_count_for(modes, max_freq));
    let (ts, ws) = g.mapped(T::zero(), T::PI());
    let basis = ts.iter().map(|&t| legendre_basis(modes, t)).collect();
    (ts, ws, basis)
}

/// Solves a column-equilibrated least-squares system; returns `(x, rel residual, cond)`.
pub(crate) fn equilibrated_solve<T: Real>(a: &CMatrix<T>, b: &[Cx<T>]) -> (Vec<Cx<T>>, T, T) {
    let cols = a.cols();
    let norms: Vec<T> = (0..cols)
        .map(|c| (0..a.rows()).map(|r| a.get(r, c).norm_sqr()).sum::<T>().sqrt())
        .map(|n| if n > T::zero() { n } else { T::one() })
        .collect();
    let scaled = CMatrix::from_fn(a.rows(), cols, |r, c| a.get(r, c) / norms[c]);
    let cond = svd(&scaled).cond();
    let sol = lstsq(&scaled, b, T::zero(), T::epsilon());
    let x: Vec<Cx<T>> = sol.x.iter().zip(&norms).map(|(v, n)| *v / *n).collect();
    let bn = b.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let rel = if bn > T::zero() { sol.residual / bn } else { sol.residual };
    (x, rel, cond)
}

/// Generalized Cauchy data of the problem `(σ, p₁, p₂)`, synthesized on `grid`.
pub fn extract_cauchy<T: Real>(
    sigma: &SigmaFunction<T>,
    pair: &BoundaryPolyPair<T>,
    grid: UniformGrid<T>,
    opts: &ExtractOptions<T>,
) -> Result<Extraction<T>> {
    let p = pair.p();
    let comps = components(p);
    let lambdas = sample_lambdas::<T>(opts.max_rho);
    let values: Vec<(Cx<T>, Cx<T>)> =
        lambdas.par_iter().map(|&l| char_pair_with(sigma, pair, l, &opts.cfg)).collect::<Result<_>>()?;
    let max_freq = lambdas.iter().map(|l| rho_of(*l).norm()).fold(T::zero(), T::max);
    let rule = legendre_rule::<T>(opts.modes, max_freq);
    let k = opts.modes;
    let mut a = vec![creal(T::zero()); p];
    let mut coeffs: [Vec<Cx<T>>; 2] = [Vec::new(), Vec::new()];
    let mut residual = T::zero();
    let mut cond = T::zero();
    for (j, comp) in comps.iter().enumerate() {
        let cols = k + comp.a_slots.len();
        let mut rows = Vec::with_capacity(lambdas.len());
        let mut rhs = Vec::with_capacity(lambdas.len());
        for (&l, v) in lambdas.iter().zip(&values) {
            let d = if j == 0 { v.0 } else { v.1 };
            let scale = natural_scale(p, j, l);
            let lm = cpowi(l, comp.power);
            let mut row: Vec<Cx<T>> = legendre_pairings(comp, l, k, &rule).into_iter().map(|x| x * lm / scale).collect();
            row.extend((0..comp.a_slots.len()).map(|n| cpowi(l, n) / scale));
            debug_assert_eq!(row.len(), cols);
            rows.push(row);
            rhs.push((d - comp.leading(l)) / scale);
        }
        let (x, res, c) = equilibrated_solve(&CMatrix::from_rows(&rows), &rhs);
        if c > opts.cond_limit {
            return Err(Error::IllConditioned { cond: to_f64(c), limit: to_f64(opts.cond_limit) });
        }
        residual = residual.max(res);
        cond = cond.max(c);
        for (n, &slot) in comp.a_slots.iter().enumerate() {
            a[slot] = x[k + n];
        }
        coeffs[j] = x[..k].to_vec();
    }
    let [cg, cj] = coeffs;
    let synth = |c: &[Cx<T>]| -> Vec<Cx<T>> {
        grid.nodes()
            .iter()
            .map(|&t| legendre_basis(k, t).iter().zip(c).fold(creal(T::zero()), |acc, (&b, &z)| acc + z * b))
            .collect()
    };
    let data = CauchyData::new(grid, synth(&cj), synth(&cg), a)?;
    Ok(Extraction { data, coeffs_j: cj, coeffs_g: cg, residual, cond })
}
