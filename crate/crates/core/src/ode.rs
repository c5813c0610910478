//! Integration of the regularized system
//! `y′ = y^{[1]} + σy`, `(y^{[1]})′ = −σy^{[1]} − (σ² + λ)y`.
//!
//! Each σ cell is split into substeps advanced by the two-point Gauss
//! fourth-order Magnus method. The generator is traceless, so its exponential
//! is evaluated in closed form and the Wronskian is preserved to rounding.
//! λ-derivatives differentiate the discrete propagator itself.

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::scalar::{creal, cx_to_f64, is_finite, lit, Cx, Real};
use crate::sigma::SigmaFunction;

/// `[[m00, m01], [m10, m11]]`.
pub type Mat2<T> = [[Cx<T>; 2]; 2];

pub fn identity<T: Real>() -> Mat2<T> {
    let (o, z) = (creal(T::one()), creal(T::zero()));
    [[o, z], [z, o]]
}

pub fn mat_mul<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn mat_add<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat2<T> {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

fn mat_finite<T: Real>(a: &Mat2<T>) -> bool {
    a.iter().flatten().all(|z| is_finite(*z))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    /// Largest phase `|ρ|·h` advanced by one substep.
    pub max_phase: T,
    /// Extra uniform subdivision factor (convergence studies).
    pub refine: usize,
    /// Upper bound on total substeps before reporting `StepFailure`.
    pub max_steps: usize,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self { max_phase: lit(0.25), refine: 1, max_steps: 20_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// From `x = 0` towards `x = X`.
    Forward,
    /// From `x = X` towards `x = 0`.
    Backward,
}

/// Node samples of `(y, y^{[1]})`, always stored in the original orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub grid: UniformGrid<T>,
    pub y: Vec<Cx<T>>,
    pub yq: Vec<Cx<T>>,
    pub lambda: Cx<T>,
    pub direction: Direction,
}

impl<T: Real> Trajectory<T> {
    pub fn end(&self) -> (Cx<T>, Cx<T>) {
        let m = self.y.len() - 1;
        (self.y[m], self.yq[m])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    S,
    C,
}

/// `g(z) = cosh √z`, `s(z) = sinh √z / √z` and their derivatives.
fn exp_coefficients<T: Real>(z: Cx<T>, with_derivative: bool) -> (Cx<T>, Cx<T>, Cx<T>, Cx<T>) {
    let one = creal(T::one());
    if z.norm() < lit(1e-3) {
        let z2 = z * z;
        let z3 = z2 * z;
        let g = one + z / lit::<T>(2.0) + z2 / lit::<T>(24.0) + z3 / lit::<T>(720.0) + z2 * z2 / lit::<T>(40320.0);
        let s = one + z / lit::<T>(6.0) + z2 / lit::<T>(120.0) + z3 / lit::<T>(5040.0) + z2 * z2 / lit::<T>(362880.0);
        let ds = one / lit::<T>(6.0) + z / lit::<T>(60.0) + z2 / lit::<T>(1680.0) + z3 / lit::<T>(90720.0);
        return (g, s, s / lit::<T>(2.0), ds);
    }
    let mu = z.sqrt();
    let g = mu.cosh();
    let s = mu.sinh() / mu;
    if !with_derivative {
        return (g, s, s, s);
    }
    let ds = if z.norm() < lit(1e-2) {
        let z2 = z * z;
        one / lit::<T>(6.0)
            + z / lit::<T>(60.0)
            + z2 / lit::<T>(1680.0)
            + z2 * z / lit::<T>(90720.0)
            + z2 * z2 / lit::<T>(7983360.0)
    } else {
        (g - s) / (z * lit::<T>(2.0))
    };
    (g, s, s / lit::<T>(2.0), ds)
}

/// One Magnus substep with σ values `s1`, `s2` at the Gauss points.
#[inline]
fn magnus_step<T: Real>(s1: Cx<T>, s2: Cx<T>, lambda: Cx<T>, h: T, with_derivative: bool) -> (Mat2<T>, Mat2<T>) {
    let k = lit::<T>(3.0).sqrt() * h * h / lit(12.0);
    let half = h / lit(2.0);
    let d = s2 - s1;
    let o00 = (s1 + s2) * half + d * (s1 + s2) * k;
    let o01 = creal(h) + d * k * lit::<T>(2.0);
    let o10 = -(s1 * s1 + s2 * s2 + lambda * lit::<T>(2.0)) * half + d * (lambda - s1 * s2) * k * lit::<T>(2.0);
    let z = o00 * o00 + o01 * o10;
    let (g, s, dg, ds) = exp_coefficients(z, with_derivative);
    let e = [[g + s * o00, s * o01], [s * o10, g - s * o00]];
    if !with_derivative {
        return (e, e);
    }
    let do10 = d * k * lit::<T>(2.0) - creal(h);
    let dz = o01 * do10;
    let de = [
        [dz * (dg + ds * o00), dz * ds * o01],
        [dz * ds * o10 + s * do10, dz * (dg - ds * o00)],
    ];
    (e, de)
}

const GAUSS_LO: f64 = 0.5 - 0.288_675_134_594_812_9;
const GAUSS_HI: f64 = 0.5 + 0.288_675_134_594_812_9;

/// Marches the 2×2 state over all cells. Returns node states when `record`.
fn march<T: Real>(
    sigma: &SigmaFunction<T>,
    lambda: Cx<T>,
    cfg: &IntegratorConfig<T>,
    init: Mat2<T>,
    dinit: Option<Mat2<T>>,
    record: bool,
) -> Result<(Vec<(Mat2<T>, Mat2<T>)>, Mat2<T>, Mat2<T>)> {
    let fail = |reason: &str| {
        let (re, im) = cx_to_f64(lambda);
        Error::StepFailure { re, im, reason: reason.to_string() }
    };
    if !is_finite(lambda) {
        return Err(fail("lambda is not finite"));
    }
    let with_d = dinit.is_some();
    let h = sigma.grid().step();
    let rho = lambda.norm().sqrt();
    let mut state = init;
    let mut dstate = dinit.unwrap_or([[creal(T::zero()); 2]; 2]);
    let mut nodes = Vec::new();
    if record {
        nodes.reserve(sigma.cells() + 1);
        nodes.push((state, dstate));
    }
    let mut total = 0usize;
    let lo: T = lit(GAUSS_LO);
    let hi: T = lit(GAUSS_HI);
    for cell in 0..sigma.cells() {
        let (a, b) = sigma.cell(cell);
        let freq = rho.max(a.norm()).max(b.norm());
        let base = (freq * h / cfg.max_phase).ceil().to_usize().unwrap_or(usize::MAX).max(1);
        let n = base.saturating_mul(cfg.refine.max(1));
        total = total.saturating_add(n);
        if total > cfg.max_steps {
            return Err(fail("substep budget exhausted"));
        }
        let nf = lit::<T>(n as f64);
        let hs = h / nf;
        let slope = b - a;
        for j in 0..n {
            let jf = lit::<T>(j as f64);
            let s1 = a + slope * ((jf + lo) / nf);
            let s2 = a + slope * ((jf + hi) / nf);
            let (e, de) = magnus_step(s1, s2, lambda, hs, with_d);
            if with_d {
                dstate = mat_add(&mat_mul(&de, &state), &mat_mul(&e, &dstate));
            }
            state = mat_mul(&e, &state);
        }
        if !mat_finite(&state) || !mat_finite(&dstate) {
            return Err(fail("solution overflowed"));
        }
        if record {
            nodes.push((state, dstate));
        }
    }
    Ok((nodes, state, dstate))
}

/// Fundamental matrix `[[C, S], [C^{[1]}, S^{[1]}]]` at the right end.
pub fn transfer<T: Real>(sigma: &SigmaFunction<T>, lambda: Cx<T>, cfg: &IntegratorConfig<T>) -> Result<Mat2<T>> {
    march(sigma, lambda, cfg, identity(), None, false).map(|(_, m, _)| m)
}

/// Fundamental matrix and its λ-derivative at the right end.
pub fn transfer_with_derivative<T: Real>(
    sigma: &SigmaFunction<T>,
    lambda: Cx<T>,
    cfg: &IntegratorConfig<T>,
) -> Result<(Mat2<T>, Mat2<T>)> {
    let zero = [[creal(T::zero()); 2]; 2];
    march(sigma, lambda, cfg, identity(), Some(zero), false).map(|(_, m, dm)| (m, dm))
}

fn column_state<T: Real>(y0: Cx<T>, yq0: Cx<T>) -> Mat2<T> {
    let z = creal(T::zero());
    [[y0, z], [yq0, z]]
}

/// Solution and λ-derivative trajectories for initial data `(y0, yq0)` whose
/// λ-derivatives are `(dy0, dyq0)`.
#[allow(clippy::too_many_arguments)]
pub fn solve_with_derivative<T: Real>(
    sigma: &SigmaFunction<T>,
    lambda: Cx<T>,
    (y0, yq0): (Cx<T>, Cx<T>),
    (dy0, dyq0): (Cx<T>, Cx<T>),
    direction: Direction,
    cfg: &IntegratorConfig<T>,
) -> Result<(Trajectory<T>, Trajectory<T>)> {
    let (field, init, dinit) = match direction {
        Direction::Forward => (sigma.clone(), column_state(y0, yq0), column_state(dy0, dyq0)),
        Direction::Backward => (sigma.reflected(), column_state(y0, -yq0), column_state(dy0, -dyq0)),
    };
    let (nodes, _, _) = march(&field, lambda, cfg, init, Some(dinit), true)?;
    Ok(unpack(sigma.grid(), lambda, direction, &nodes))
}

fn unpack<T: Real>(
    grid: UniformGrid<T>,
    lambda: Cx<T>,
    direction: Direction,
    nodes: &[(Mat2<T>, Mat2<T>)],
) -> (Trajectory<T>, Trajectory<T>) {
    let m = nodes.len() - 1;
    let pick = |k: usize| match direction {
        Direction::Forward => (nodes[k], T::one()),
        Direction::Backward => (nodes[m - k], -T::one()),
    };
    let mut base = Trajectory { grid, y: Vec::with_capacity(m + 1), yq: Vec::with_capacity(m + 1), lambda, direction };
    let mut der = base.clone();
    for k in 0..=m {
        let ((s, ds), sign) = pick(k);
        base.y.push(s[0][0]);
        base.yq.push(s[1][0] * sign);
        der.y.push(ds[0][0]);
        der.yq.push(ds[1][0] * sign);
    }
    (base, der)
}

/// Solves the Cauchy problem with `(y, y^{[1]}) = (y0, yq0)` at the start point.
pub fn solve_cauchy_with<T: Real>(
    sigma: &SigmaFunction<T>,
    lambda: Cx<T>,
    y0: Cx<T>,
    yq0: Cx<T>,
    direction: Direction,
    cfg: &IntegratorConfig<T>,
) -> Result<Trajectory<T>> {
    let (field, init) = match direction {
        Direction::Forward => (sigma.clone(), column_state(y0, yq0)),
        Direction::Backward => (sigma.reflected(), column_state(y0, -yq0)),
    };
    let (nodes, _, _) = march(&field, lambda, cfg, init, None, true)?;
    Ok(unpack(sigma.grid(), lambda, direction, &nodes).0)
}

pub fn solve_cauchy<T: Real>(
    sigma: &SigmaFunction<T>,
    lambda: Cx<T>,
    y0: Cx<T>,
    yq0: Cx<T>,
    direction: Direction,
) -> Result<Trajectory<T>> {
    solve_cauchy_with(sigma, lambda, y0, yq0, direction, &IntegratorConfig::default())
}

/// `(S, C)` with `S(0) = 0, S^{[1]}(0) = 1` and `C(0) = 1, C^{[1]}(0) = 0`.
pub fn fundamental_pair<T: Real>(sigma: &SigmaFunction<T>, lambda: Cx<T>) -> Result<(Trajectory<T>, Trajectory<T>)> {
    let (o, z) = (creal(T::one()), creal(T::zero()));
    let s = solve_cauchy(sigma, lambda, z, o, Direction::Forward)?;
    let c = solve_cauchy(sigma, lambda, o, z, Direction::Forward)?;
    Ok((s, c))
}

/// `∂λ (y, y^{[1]})` along S or C.
pub fn lambda_derivative<T: Real>(sigma: &SigmaFunction<T>, lambda: Cx<T>, which: Which) -> Result<Trajectory<T>> {
    let (o, z) = (creal(T::one()), creal(T::zero()));
    let init = match which {
        Which::S => (z, o),
        Which::C => (o, z),
    };
    solve_with_derivative(sigma, lambda, init, (z, z), Direction::Forward, &IntegratorConfig::default()).map(|(_, d)| d)
}

/// `max_k |C S^{[1]} − C^{[1]} S − 1| / (1 + |C S^{[1]}| + |C^{[1]} S|)` over the nodes.
///
/// The denominator is the rounding scale of the two products; it is ~1 unless
/// the solutions grow exponentially.
pub fn wronskian_residual<T: Real>(s: &Trajectory<T>, c: &Trajectory<T>) -> T {
    (0..s.y.len())
        .map(|k| {
            let a = c.y[k] * s.yq[k];
            let b = c.yq[k] * s.y[k];
            (a - b - creal(T::one())).norm() / (T::one() + a.norm() + b.norm())
        })
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rho_of;
    use std::f64::consts::PI;

    fn zero(m: usize) -> SigmaFunction<f64> {
        SigmaFunction::zero(PI, m).unwrap()
    }

    fn step(m: usize) -> SigmaFunction<f64> {
        SigmaFunction::step(PI, m, m / 2, Cx::new(0.0, 0.0), Cx::new(1.0, 0.0)).unwrap()
    }

    fn c(re: f64, im: f64) -> Cx<f64> {
        Cx::new(re, im)
    }

    #[test]
    fn free_sine_at_lambda_one() {
        let t = solve_cauchy(&zero(512), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), Direction::Forward).unwrap();
        for (k, x) in t.grid.nodes().iter().enumerate() {
            assert!((t.y[k] - c(x.sin(), 0.0)).norm() < 1e-8);
            assert!((t.yq[k] - c(x.cos(), 0.0)).norm() < 1e-8);
        }
        let (y, yq) = t.end();
        assert!(y.norm() < 1e-8 && (yq + 1.0).norm() < 1e-8);
    }

    #[test]
    fn constant_sigma_shifts_quasi_derivative() {
        let cst = 0.7;
        let sigma = SigmaFunction::constant(PI, 64, c(cst, 0.0)).unwrap();
        let lambda = c(5.3, 0.4);
        let rho = rho_of(lambda);
        let t = solve_cauchy(&sigma, lambda, c(0.0, 0.0), c(1.0, 0.0), Direction::Forward).unwrap();
        for (k, &x) in t.grid.nodes().iter().enumerate() {
            let y = (rho * x).sin() / rho;
            let yq = (rho * x).cos() - y * cst;
            assert!((t.y[k] - y).norm() < 1e-12);
            assert!((t.yq[k] - yq).norm() < 1e-12);
        }
    }

    #[test]
    fn step_matches_fine_grid() {
        let coarse = transfer(&step(64), c(4.0, 0.0), &IntegratorConfig::default()).unwrap();
        let fine = transfer(&step(256), c(4.0, 0.0), &IntegratorConfig::default()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((coarse[i][j] - fine[i][j]).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn fundamental_pair_closed_forms() {
        let (s, cc) = fundamental_pair(&zero(64), c(4.0, 0.0)).unwrap();
        assert!(s.end().0.norm() < 1e-12);
        assert!((cc.end().0 - 1.0).norm() < 1e-12);
        assert!(cc.end().1.norm() < 1e-12);
        let (s, cc) = fundamental_pair(&zero(64), c(0.0, 0.0)).unwrap();
        for (k, &x) in s.grid.nodes().iter().enumerate() {
            assert!((s.y[k] - x).norm() < 1e-13 && (s.yq[k] - 1.0).norm() < 1e-13);
            assert!((cc.y[k] - 1.0).norm() < 1e-13 && cc.yq[k].norm() < 1e-13);
        }
    }

    #[test]
    fn wronskian_is_one_on_step() {
        let (s, cc) = fundamental_pair(&step(512), c(1.0, 0.0)).unwrap();
        assert!(wronskian_residual(&s, &cc) < 1e-8);
        let (s, cc) = fundamental_pair(&step(512), c(-30.0, 17.0)).unwrap();
        assert!(wronskian_residual(&s, &cc) < 1e-8);
    }

    #[test]
    fn backward_matches_forward_reversal() {
        let sigma = SigmaFunction::from_fn(PI, 128, |x| c(0.5 * x.sin(), 0.1 * x)).unwrap();
        let lambda = c(3.0, -1.0);
        let fwd = solve_cauchy(&sigma, lambda, c(1.0, 0.0), c(0.2, 0.0), Direction::Forward).unwrap();
        let (y_end, yq_end) = fwd.end();
        let back = solve_cauchy(&sigma, lambda, y_end, yq_end, Direction::Backward).unwrap();
        for k in 0..=128 {
            assert!((back.y[k] - fwd.y[k]).norm() < 1e-10 * (1.0 + fwd.y[k].norm()));
            assert!((back.yq[k] - fwd.yq[k]).norm() < 1e-10 * (1.0 + fwd.yq[k].norm()));
        }
    }

    #[test]
    fn lambda_derivative_free_sine() {
        let d = lambda_derivative(&zero(512), c(1.0, 0.0), Which::S).unwrap();
        // d/dλ [sin ρπ/ρ] at ρ = 1 equals (π cos π − sin π)/(2ρ²)·(1/ρ)... = −π/2.
        let exact = -PI / 2.0;
        assert!((d.end().0 - exact).norm() / exact.abs() < 1e-7);
    }

    #[test]
    fn lambda_derivative_matches_central_difference() {
        let sigma = step(128);
        let lambda = c(2.0, 0.5);
        let h = 1e-5;
        for which in [Which::S, Which::C] {
            let d = lambda_derivative(&sigma, lambda, which).unwrap();
            let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
            let init = if which == Which::S { (z, o) } else { (o, z) };
            let plus = solve_cauchy(&sigma, lambda + h, init.0, init.1, Direction::Forward).unwrap();
            let minus = solve_cauchy(&sigma, lambda - h, init.0, init.1, Direction::Forward).unwrap();
            let fd_y = (plus.end().0 - minus.end().0) / (2.0 * h);
            let fd_q = (plus.end().1 - minus.end().1) / (2.0 * h);
            assert!((d.end().0 - fd_y).norm() <= 1e-5 * (1.0 + fd_y.norm()));
            assert!((d.end().1 - fd_q).norm() <= 1e-5 * (1.0 + fd_q.norm()));
        }
    }

    #[test]
    fn lambda_derivative_regular_at_zero() {
        let d = lambda_derivative(&step(64), c(0.0, 0.0), Which::S).unwrap();
        assert!(d.y.iter().chain(&d.yq).all(|z| is_finite(*z)));
        let free = lambda_derivative(&zero(64), c(0.0, 0.0), Which::S).unwrap();
        // ∂λ (sin ρx/ρ) at λ = 0 is −x³/6.
        assert!((free.end().0 + PI.powi(3) / 6.0).norm() < 1e-10);
    }

    #[test]
    fn conjugate_symmetry_for_real_sigma() {
        let sigma = SigmaFunction::from_fn(PI, 64, |x| c((2.0 * x).cos(), 0.0)).unwrap();
        let lambda = c(7.5, 2.25);
        let a = transfer(&sigma, lambda, &IntegratorConfig::default()).unwrap();
        let b = transfer(&sigma, lambda.conj(), &IntegratorConfig::default()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((a[i][j] - b[i][j].conj()).norm() <= 1e-10 * (1.0 + a[i][j].norm()));
            }
        }
    }

    #[test]
    fn grid_convergence_on_piecewise_linear_sigma() {
        // Piecewise-linear σ is represented exactly on every grid, so the
        // refinement isolates the integrator; one substep per cell.
        let lambda = c(6.0, 0.0);
        let shape = |x: f64| c(0.8 * x - 0.3 + (x - PI / 2.0).abs(), 0.0);
        let cfg = IntegratorConfig { max_phase: 100.0, refine: 1, max_steps: usize::MAX };
        let end = |m: usize| transfer(&SigmaFunction::from_fn(PI, m, shape).unwrap(), lambda, &cfg).unwrap();
        let err = |m: usize| {
            let (a, b) = (end(m), end(4 * m));
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| (a[i][j] - b[i][j]).norm()).fold(0.0, f64::max)
        };
        let (e16, e32, e64) = (err(16), err(32), err(64));
        assert!(e16 / e32 >= 8.0 && e32 / e64 >= 8.0, "{e16} {e32} {e64}");
    }

    #[test]
    fn runs_in_f32() {
        let sigma = SigmaFunction::<f32>::zero(std::f32::consts::PI, 64).unwrap();
        let t = transfer(&sigma, Cx::new(1.0f32, 0.0), &IntegratorConfig::default()).unwrap();
        assert!((t[0][1].re).abs() < 1e-4);
        assert!((t[1][1].re + 1.0).abs() < 1e-4);
    }
}
