//! The moment system `(u, v_n) = w_n` in ℋ_p: the vector function `v(t, λ)`,
//! the scalar `w(λ)`, the companion system `g_n`, the ξ identity, and
//! Riesz-basis diagnostics.
//!
//! With `D` the component of the representation for Δ₁ (kernel `K₁`, power
//! `m₁`) and for Δ₀ (`K₀`, `m₀`),
//!
//! `v(t, λ) = [f₁ λ^{m₁} K₁(λ,t), f₂ λ^{m₀} K₀(λ,t), slots]`,
//!
//! where slot `k` carries `f₁ λ^n` if `A_{k+1}` multiplies `λ^n` in Δ₁ and
//! `f₂ λ^n` if it does so in Δ₀. This reproduces both parity cases literally,
//! including the slot order, and gives `(u, v) = Δ + w` with
//! `w = −(f₁·lead₁ + f₂·lead₀)`.

use rayon::prelude::*;

use crate::entire::EntirePair;
use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::hp::HpVector;
use crate::linalg::{svd, CMatrix};
use crate::quadrature::{gauss_count_for, GaussLegendre};
use crate::repr::{components, natural_scale, Component};
use crate::scalar::{cpowi, creal, lit, rho_of, Cx, Real};
use crate::spectral::extract::{legendre_pairings, legendre_rule};
use crate::subspectrum::Subspectrum;

/// Relative separation below which two eigenvalues count as equal.
pub const SIMPLE_TOL: f64 = 1e-10;

/// One row of the system: the point and the values of `f` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowSpec<T> {
    pub lambda: Cx<T>,
    pub f1: Cx<T>,
    pub f2: Cx<T>,
}

impl<T: Real> RowSpec<T> {
    pub fn new(lambda: Cx<T>, f: &dyn EntirePair<T>) -> Result<Self> {
        let (f1, f2) = f.eval(lambda)?;
        Ok(Self { lambda, f1, f2 })
    }

    /// Coefficients of the kernels in the two function slots.
    fn weights(&self, c: &[Component; 2]) -> (Cx<T>, Cx<T>) {
        (self.f1 * cpowi(self.lambda, c[1].power), self.f2 * cpowi(self.lambda, c[0].power))
    }

    /// The `p` scalar slots of `v`.
    pub fn slots(&self, p: usize) -> Vec<Cx<T>> {
        let c = components(p);
        let mut out = vec![creal(T::zero()); p];
        for (n, &k) in c[1].a_slots.iter().enumerate() {
            out[k] = self.f1 * cpowi(self.lambda, n);
        }
        for (n, &k) in c[0].a_slots.iter().enumerate() {
            out[k] = self.f2 * cpowi(self.lambda, n);
        }
        out
    }

    pub fn v(&self, p: usize, grid: UniformGrid<T>) -> HpVector<T> {
        let c = components(p);
        let (a1, a0) = self.weights(&c);
        let nodes = grid.nodes();
        let h1 = nodes.iter().map(|&t| a1 * c[1].kernel.eval(self.lambda, t)).collect();
        let h2 = nodes.iter().map(|&t| a0 * c[0].kernel.eval(self.lambda, t)).collect();
        HpVector { grid, h1, h2, h: self.slots(p) }
    }

    pub fn w(&self, p: usize) -> Cx<T> {
        let c = components(p);
        -(self.f1 * c[1].leading(self.lambda) + self.f2 * c[0].leading(self.lambda))
    }

    /// `‖v‖²` of the continuous vector, by Gauss quadrature of the kernels.
    pub fn norm_sq(&self, p: usize) -> T {
        let c = components(p);
        let (a1, a0) = self.weights(&c);
        let rho = rho_of(self.lambda);
        let rule = GaussLegendre::<T>::new(gauss_count_for(0, lit::<T>(2.0) * rho.norm()));
        let (ts, ws) = rule.mapped(T::zero(), T::PI());
        let mut k1 = T::zero();
        let mut k0 = T::zero();
        for (&t, &w) in ts.iter().zip(&ws) {
            k1 = k1 + w * c[1].kernel.eval(self.lambda, t).norm_sqr();
            k0 = k0 + w * c[0].kernel.eval(self.lambda, t).norm_sqr();
        }
        a1.norm_sqr() * k1 + a0.norm_sqr() * k0 + self.slots(p).iter().map(|z| z.norm_sqr()).sum::<T>()
    }

    /// `(u, v)` with the function parts integrated against the exact kernels.
    pub fn pair(&self, u: &HpVector<T>) -> Cx<T> {
        let p = u.p();
        let c = components(p);
        let (a1, a0) = self.weights(&c);
        let freq = rho_of(self.lambda).norm().max(T::one());
        let conj = |v: &[Cx<T>]| -> Vec<Cx<T>> { v.iter().map(|z| z.conj()).collect() };
        let i1 = u.grid.integrate_against(&conj(&u.h1), freq, |t| c[1].kernel.eval(self.lambda, t));
        let i0 = u.grid.integrate_against(&conj(&u.h2), freq, |t| c[0].kernel.eval(self.lambda, t));
        let finite: Cx<T> = u.h.iter().zip(self.slots(p)).fold(creal(T::zero()), |acc, (x, y)| acc + x.conj() * y);
        a1 * i1 + a0 * i0 + finite
    }

    /// Natural magnitude of `Δ` and `w` at this row.
    pub fn scale(&self, p: usize) -> T {
        let s = self.f1.norm() * natural_scale(p, 1, self.lambda) + self.f2.norm() * natural_scale(p, 0, self.lambda);
        s.max(T::min_positive_value())
    }
}

fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::ParityMismatch("p must be at least 1".into()));
    }
    Ok(())
}

/// `v(·, λ)` on `grid`.
pub fn build_v<T: Real>(lambda: Cx<T>, f: &dyn EntirePair<T>, p: usize, grid: UniformGrid<T>) -> Result<HpVector<T>> {
    check_p(p)?;
    Ok(RowSpec::new(lambda, f)?.v(p, grid))
}

/// `w(λ)`.
pub fn build_w<T: Real>(lambda: Cx<T>, f: &dyn EntirePair<T>, p: usize) -> Result<Cx<T>> {
    check_p(p)?;
    Ok(RowSpec::new(lambda, f)?.w(p))
}

/// `|(u, v(·,λ)) − Δ(λ) − w(λ)| / scale`, with Δ supplied by the caller.
pub fn moment_identity_check<T: Real>(
    u: &HpVector<T>,
    delta: Cx<T>,
    lambda: Cx<T>,
    f: &dyn EntirePair<T>,
) -> Result<T> {
    let p = u.p();
    check_p(p)?;
    let row = RowSpec::new(lambda, f)?;
    Ok((row.pair(u) - delta - row.w(p)).norm() / row.scale(p))
}

/// Discretization of the unknown `u` when the system is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownBasis {
    /// The first `k` orthonormal Legendre polynomials on `[0, π]` in each
    /// function slot, plus the `p` scalars: `D = 2k + p`.
    Legendre(usize),
    /// Grid samples of both functions plus the scalars: `D = 2(M+1) + p`.
    Grid,
}

#[derive(Debug, Clone)]
pub struct MomentSystem<T> {
    pub grid: UniformGrid<T>,
    pub p: usize,
    pub lambdas: Subspectrum<T>,
    pub rows: Vec<RowSpec<T>>,
    pub vs: Vec<HpVector<T>>,
    pub ws: Vec<Cx<T>>,
    pub norms: Vec<T>,
}

/// `v_n = v(·, λ_n)`, `w_n = w(λ_n)` for a simple subspectrum.
pub fn build_moment_system<T: Real>(
    sub: &Subspectrum<T>,
    f: &dyn EntirePair<T>,
    p: usize,
    grid: UniformGrid<T>,
) -> Result<MomentSystem<T>> {
    check_p(p)?;
    sub.check_simple(lit(SIMPLE_TOL))?;
    let rows: Vec<RowSpec<T>> = sub.lambdas().par_iter().map(|&l| RowSpec::new(l, f)).collect::<Result<_>>()?;
    let vs = rows.par_iter().map(|r| r.v(p, grid)).collect();
    let ws = rows.iter().map(|r| r.w(p)).collect();
    let norms: Vec<T> = rows.par_iter().map(|r| r.norm_sq(p).sqrt()).collect();
    if let Some(n) = norms.iter().position(|&x| !(x > T::zero())) {
        return Err(Error::InvalidInput(format!("row {n} of the moment system vanishes")));
    }
    Ok(MomentSystem { grid, p, lambdas: sub.clone(), rows, vs, ws, norms })
}

impl<T: Real> MomentSystem<T> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Unknown dimension for `basis`.
    pub fn dim(&self, basis: UnknownBasis) -> usize {
        match basis {
            UnknownBasis::Legendre(k) => 2 * k + self.p,
            UnknownBasis::Grid => 2 * self.grid.len() + self.p,
        }
    }

    /// Row-normalized design `G_nj = (b_j, v_n)/‖v_n‖` and right side `w_n/‖v_n‖`
    /// for an orthonormal unknown basis `{b_j}`; `u = Σ conj(y_j) b_j`.
    pub fn design(&self, basis: UnknownBasis) -> (CMatrix<T>, Vec<Cx<T>>) {
        let p = self.p;
        let c = components(p);
        let rows: Vec<Vec<Cx<T>>> = match basis {
            UnknownBasis::Legendre(k) => {
                let max_freq = self.rows.iter().map(|r| rho_of(r.lambda).norm()).fold(T::zero(), T::max);
                let rule = legendre_rule::<T>(k, max_freq);
                self.rows
                    .par_iter()
                    .zip(&self.norms)
                    .map(|(r, &n)| {
                        let (a1, a0) = r.weights(&c);
                        let mut row: Vec<Cx<T>> =
                            legendre_pairings(&c[1], r.lambda, k, &rule).into_iter().map(|x| x * a1 / n).collect();
                        row.extend(legendre_pairings(&c[0], r.lambda, k, &rule).into_iter().map(|x| x * a0 / n));
                        row.extend(r.slots(p).into_iter().map(|x| x / n));
                        row
                    })
                    .collect()
            }
            UnknownBasis::Grid => {
                let sw: Vec<T> = self.grid.trapezoid_weights().into_iter().map(|w| w.sqrt()).collect();
                self.vs
                    .par_iter()
                    .zip(&self.norms)
                    .map(|(v, &n)| {
                        let mut row: Vec<Cx<T>> = v.h1.iter().zip(&sw).map(|(x, &s)| *x * s / n).collect();
                        row.extend(v.h2.iter().zip(&sw).map(|(x, &s)| *x * s / n));
                        row.extend(v.h.iter().map(|x| *x / n));
                        row
                    })
                    .collect()
            }
        };
        let rhs = self.ws.iter().zip(&self.norms).map(|(w, &n)| *w / n).collect();
        (CMatrix::from_rows(&rows), rhs)
    }

    /// Rebuilds `u` from the solution coordinates of [`MomentSystem::design`].
    pub fn synthesize(&self, basis: UnknownBasis, y: &[Cx<T>]) -> HpVector<T> {
        let grid = self.grid;
        let p = self.p;
        let m = grid.len();
        match basis {
            UnknownBasis::Legendre(k) => {
                let nodes = grid.nodes();
                let eval = |coef: &[Cx<T>]| -> Vec<Cx<T>> {
                    nodes
                        .iter()
                        .map(|&t| {
                            crate::quadrature::legendre_basis(k, t)
                                .iter()
                                .zip(coef)
                                .fold(creal(T::zero()), |acc, (&b, z)| acc + z.conj() * b)
                        })
                        .collect()
                };
                HpVector { grid, h1: eval(&y[..k]), h2: eval(&y[k..2 * k]), h: y[2 * k..2 * k + p].iter().map(|z| z.conj()).collect() }
            }
            UnknownBasis::Grid => {
                let sw: Vec<T> = grid.trapezoid_weights().into_iter().map(|w| w.sqrt()).collect();
                let f = |seg: &[Cx<T>]| seg.iter().zip(&sw).map(|(z, &s)| z.conj() / s).collect();
                HpVector { grid, h1: f(&y[..m]), h2: f(&y[m..2 * m]), h: y[2 * m..2 * m + p].iter().map(|z| z.conj()).collect() }
            }
        }
    }

    /// `max_n |(u, v_n) − w_n| / ‖v_n‖`.
    pub fn residual(&self, u: &HpVector<T>) -> T {
        self.rows
            .par_iter()
            .zip(&self.ws)
            .zip(&self.norms)
            .map(|((r, w), &n)| (r.pair(u) - *w).norm() / n)
            .reduce(|| T::zero(), T::max)
    }

    /// The system restricted to rows `from..from+count`.
    pub fn slice(&self, from: usize, count: usize) -> Self {
        let end = (from + count).min(self.len());
        let from = from.min(end);
        Self {
            grid: self.grid,
            p: self.p,
            lambdas: Subspectrum::new(self.lambdas.lambdas()[from..end].to_vec()),
            rows: self.rows[from..end].to_vec(),
            vs: self.vs[from..end].to_vec(),
            ws: self.ws[from..end].to_vec(),
            norms: self.norms[from..end].to_vec(),
        }
    }
}

/// `g(·, λ)`: the row `v` with `(f₁, f₂)` replaced by `(Δ₀, −Δ₁)`.
pub fn build_g<T: Real>(lambda: Cx<T>, d0: Cx<T>, d1: Cx<T>, p: usize, grid: UniformGrid<T>) -> Result<HpVector<T>> {
    check_p(p)?;
    Ok(RowSpec { lambda, f1: d0, f2: -d1 }.v(p, grid))
}

/// Ratio of the second to the first singular value of `[g; v]`, with the
/// function parts weighted by the trapezoid rule.
pub fn collinearity<T: Real>(g: &HpVector<T>, v: &HpVector<T>) -> T {
    let sw: Vec<T> = g.grid.trapezoid_weights().into_iter().map(|w| w.sqrt()).collect();
    let flat = |x: &HpVector<T>| -> Vec<Cx<T>> {
        let mut out: Vec<Cx<T>> = x.h1.iter().zip(&sw).map(|(z, &s)| *z * s).collect();
        out.extend(x.h2.iter().zip(&sw).map(|(z, &s)| *z * s));
        out.extend(x.h.iter().copied());
        out
    };
    let (a, b) = (flat(g), flat(v));
    let m = CMatrix::from_fn(a.len(), 2, |r, c| if c == 0 { a[r] } else { b[r] });
    let s = svd(&m);
    let smax = s.max_sv();
    if smax == T::zero() {
        return T::zero();
    }
    s.min_sv() / smax
}

/// `max |(sin ρ_n t, sin ρ_k t)_{L₂(0,2π)} − 2(ξ_n, ξ_k)|` over all pairs, with
/// `ξ_n = [sin ρ_n t cos ρ_n π, −cos ρ_n t sin ρ_n π]` and bilinear pairings,
/// both sides by panel quadrature on `grid` (and its double on `(0, 2π)`).
pub fn xi_identity_residual<T: Real>(rhos: &[Cx<T>], grid: UniformGrid<T>) -> T {
    let long = UniformGrid::new(grid.length + grid.length, grid.cells * 2);
    let ones = |g: &UniformGrid<T>| vec![creal(T::one()); g.len()];
    let (one_s, one_l) = (ones(&grid), ones(&long));
    let pi = T::PI();
    let mut worst = T::zero();
    for (n, &a) in rhos.iter().enumerate() {
        for &b in &rhos[n..] {
            let freq = a.norm() + b.norm() + T::one();
            let lhs = long.integrate_against(&one_l, freq, |t| (a * t).sin() * (b * t).sin());
            let (ca, sa) = ((a * pi).cos(), (a * pi).sin());
            let (cb, sb) = ((b * pi).cos(), (b * pi).sin());
            let rhs = grid.integrate_against(&one_s, freq, |t| {
                (a * t).sin() * ca * (b * t).sin() * cb + (a * t).cos() * sa * (b * t).cos() * sb
            });
            worst = worst.max((lhs - rhs * lit::<T>(2.0)).norm());
        }
    }
    worst
}

/// Singular-value summary of a normalized family.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BasisDiagnostics {
    pub count: usize,
    /// Singular values of the normalized synthesis matrix, descending.
    pub singular_values: Vec<f64>,
    pub min_sv: f64,
    pub max_sv: f64,
    /// Condition number of the Gram matrix, `(max_sv/min_sv)²`.
    pub gram_cond: f64,
}

impl BasisDiagnostics {
    pub fn from_singular_values<T: Real>(count: usize, s: &[T]) -> Self {
        let mut sv: Vec<f64> = s.iter().map(|x| crate::scalar::to_f64(*x)).collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let max_sv = sv.first().copied().unwrap_or(0.0);
        let min_sv = sv.last().copied().unwrap_or(0.0);
        let gram_cond = if min_sv > 0.0 { (max_sv / min_sv).powi(2) } else { f64::INFINITY };
        Self { count, singular_values: sv, min_sv, max_sv, gram_cond }
    }

    /// `min_sv / max_sv`.
    pub fn ratio(&self) -> f64 {
        if self.max_sv > 0.0 {
            self.min_sv / self.max_sv
        } else {
            0.0
        }
    }
}

/// Diagnostics of the normalized rows of `system` in `basis`.
pub fn basis_diagnostics<T: Real>(system: &MomentSystem<T>, basis: UnknownBasis) -> BasisDiagnostics {
    let (g, _) = system.design(basis);
    BasisDiagnostics::from_singular_values(system.len(), &svd(&g).s)
}

/// Diagnostics of the normalized family `{sin ρ_n t}` in `L₂(0, length)`, from
/// its exact Gram matrix.
pub fn sine_family_diagnostics<T: Real>(rhos: &[Cx<T>], length: T) -> BasisDiagnostics {
    // ∫₀^L cos(ct) dt, entire in c.
    let icos = |c: Cx<T>| {
        let x = c * length;
        if x.norm() < lit(1e-4) {
            creal(length) * (creal(T::one()) - x * x / lit::<T>(6.0))
        } else {
            x.sin() / c
        }
    };
    let inner = |a: Cx<T>, b: Cx<T>| (icos(a.conj() - b) - icos(a.conj() + b)) / lit::<T>(2.0);
    let n = rhos.len();
    let norms: Vec<T> = rhos.iter().map(|&a| inner(a, a).re.max(T::zero()).sqrt()).collect();
    let gram = CMatrix::from_fn(n, n, |i, j| inner(rhos[i], rhos[j]) / (norms[i] * norms[j]));
    // Gram is Hermitian positive semidefinite: its singular values are the squares of those of the family.
    let s: Vec<T> = svd(&gram).s.into_iter().map(|x| x.sqrt()).collect();
    BasisDiagnostics::from_singular_values(n, &s)
}

/// Whether the Gram condition grows by at most `growth` (0.2 = 20%) each time
/// the truncation doubles.
pub fn riesz_like(curve: &[(usize, BasisDiagnostics)], growth: f64) -> bool {
    curve.windows(2).all(|w| w[1].1.gram_cond <= w[0].1.gram_cond * (1.0 + growth))
}

/// Diagnostics over the truncations `ns` of the system.
pub fn condition_curve<T: Real>(
    system: &MomentSystem<T>,
    basis: UnknownBasis,
    ns: &[usize],
) -> Vec<(usize, BasisDiagnostics)> {
    ns.iter().map(|&n| (n, basis_diagnostics(&system.slice(0, n), basis))).collect()
}
