//! Sampled antiderivative σ of the distribution potential q = σ′.

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::scalar::{creal, lit, Cx, Real};

/// Smallest supported number of grid cells.
pub const MIN_CELLS: usize = 16;

/// σ sampled at `M + 1` uniform nodes of `[0, X]`, linear between nodes.
///
/// A node may carry a distinct left limit, which makes σ jump there; the
/// stored sample is the right limit. Steps aligned with nodes are thereby
/// represented exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaFunction<T> {
    grid: UniformGrid<T>,
    samples: Vec<Cx<T>>,
    left: Vec<Cx<T>>,
}

impl<T: Real> SigmaFunction<T> {
    pub fn new(interval: T, samples: Vec<Cx<T>>) -> Result<Self> {
        if samples.len() < MIN_CELLS + 1 {
            return Err(Error::InvalidInput(format!(
                "sigma needs at least {} samples, got {}",
                MIN_CELLS + 1,
                samples.len()
            )));
        }
        if !(interval > T::zero()) || !interval.is_finite() {
            return Err(Error::InvalidInput("sigma interval must be positive".into()));
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidInput("sigma samples must be finite".into()));
        }
        let grid = UniformGrid::new(interval, samples.len() - 1);
        Ok(Self { grid, left: samples.clone(), samples })
    }

    /// Declares jumps: `(k, left_limit)` for interior nodes `k`.
    pub fn with_jumps(mut self, jumps: &[(usize, Cx<T>)]) -> Result<Self> {
        for &(k, v) in jumps {
            if k == 0 || k >= self.grid.cells {
                return Err(Error::InvalidInput(format!("jump index {k} is not an interior node")));
            }
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidInput("jump value must be finite".into()));
            }
            self.left[k] = v;
        }
        Ok(self)
    }

    pub fn zero(interval: T, cells: usize) -> Result<Self> {
        Self::constant(interval, cells, creal(T::zero()))
    }

    pub fn constant(interval: T, cells: usize, c: Cx<T>) -> Result<Self> {
        Self::new(interval, vec![c; cells + 1])
    }

    pub fn from_fn(interval: T, cells: usize, f: impl Fn(T) -> Cx<T>) -> Result<Self> {
        let grid = UniformGrid::new(interval, cells);
        Self::new(interval, grid.nodes().into_iter().map(f).collect())
    }

    /// `left` on `[0, x_k)`, `right` on `[x_k, X]`.
    pub fn step(interval: T, cells: usize, k: usize, left: Cx<T>, right: Cx<T>) -> Result<Self> {
        let samples = (0..=cells).map(|i| if i < k { left } else { right }).collect();
        Self::new(interval, samples)?.with_jumps(&[(k, left)])
    }

    pub fn grid(&self) -> UniformGrid<T> {
        self.grid
    }

    pub fn interval(&self) -> T {
        self.grid.length
    }

    pub fn cells(&self) -> usize {
        self.grid.cells
    }

    pub fn samples(&self) -> &[Cx<T>] {
        &self.samples
    }

    /// Interior nodes whose left limit differs from the sample.
    pub fn jumps(&self) -> Vec<(usize, Cx<T>)> {
        (1..self.grid.cells).filter(|&k| self.left[k] != self.samples[k]).map(|k| (k, self.left[k])).collect()
    }

    /// `(σ(x_k+), σ(x_{k+1}−))` for cell `k`.
    #[inline]
    pub fn cell(&self, k: usize) -> (Cx<T>, Cx<T>) {
        (self.samples[k], self.left[k + 1])
    }

    /// Point value, right-continuous at jumps.
    pub fn eval(&self, x: T) -> Cx<T> {
        let h = self.grid.step();
        let s = (x / h).max(T::zero());
        let k = s.floor().to_usize().unwrap_or(0).min(self.grid.cells - 1);
        let theta = (s - lit::<T>(k as f64)).min(T::one());
        let (a, b) = self.cell(k);
        if theta >= T::one() && k + 1 <= self.grid.cells {
            return self.samples[k + 1];
        }
        a + (b - a) * theta
    }

    /// Exact `∫|σ|²` of the piecewise-linear representation.
    pub fn l2_norm_sq_exact(&self) -> T {
        let h = self.grid.step();
        (0..self.grid.cells)
            .map(|k| {
                let (a, b) = self.cell(k);
                (a.norm_sqr() + b.norm_sqr() + (a.conj() * b).re) * h / lit(3.0)
            })
            .sum()
    }

    /// Trapezoid `∫|σ|²` using one-sided limits on each cell.
    pub fn l2_norm_sq(&self) -> T {
        let h = self.grid.step();
        (0..self.grid.cells)
            .map(|k| {
                let (a, b) = self.cell(k);
                (a.norm_sqr() + b.norm_sqr()) * h / lit(2.0)
            })
            .sum()
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().chain(&self.left).map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// `σ̂(x) = −σ(X − x)`: the potential of the reflected system.
    pub fn reflected(&self) -> Self {
        let m = self.grid.cells;
        let samples: Vec<Cx<T>> = (0..=m).map(|k| -self.left[m - k]).collect();
        let left: Vec<Cx<T>> = (0..=m).map(|k| -self.samples[m - k]).collect();
        Self { grid: self.grid, samples, left }
    }

    /// Restriction to nodes `from..=to`, re-based at zero.
    pub fn restrict(&self, from: usize, to: usize) -> Result<Self> {
        if from >= to || to > self.grid.cells {
            return Err(Error::InvalidInput(format!("invalid restriction {from}..={to}")));
        }
        let h = self.grid.step();
        let mut samples: Vec<Cx<T>> = self.samples[from..=to].to_vec();
        let mut left: Vec<Cx<T>> = self.left[from..=to].to_vec();
        let last = to - from;
        samples[last] = left[last];
        left[0] = samples[0];
        if samples.len() < MIN_CELLS + 1 {
            return Err(Error::InvalidInput("restriction has too few cells".into()));
        }
        let grid = UniformGrid::new(h * lit::<T>(last as f64), last);
        Ok(Self { grid, samples, left })
    }

    /// Concatenation of two potentials with equal cell width; the junction
    /// takes `left`'s end as its left limit and `right`'s start as its sample.
    pub fn join(left: &Self, right: &Self) -> Result<Self> {
        let (hl, hr) = (left.grid.step(), right.grid.step());
        if (hl - hr).abs() > lit::<T>(1e-12) * hl {
            return Err(Error::InvalidInput("joined potentials need equal cell widths".into()));
        }
        let m = left.grid.cells;
        let mut samples = left.samples.clone();
        let mut lefts = left.left.clone();
        samples[m] = right.samples[0];
        samples.extend_from_slice(&right.samples[1..]);
        lefts.extend_from_slice(&right.left[1..]);
        let grid = UniformGrid::new(left.grid.length + right.grid.length, m + right.grid.cells);
        Ok(Self { grid, samples, left: lefts })
    }

    pub fn is_real(&self) -> bool {
        self.samples.iter().chain(&self.left).all(|z| z.im == T::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn too_coarse_grid_rejected() {
        assert!(SigmaFunction::<f64>::zero(PI, 8).is_err());
        assert!(SigmaFunction::<f64>::zero(PI, 16).is_ok());
    }

    #[test]
    fn step_is_exact_in_l2() {
        let s = SigmaFunction::step(PI, 64, 32, Cx::new(0.0, 0.0), Cx::new(1.0, 0.0)).unwrap();
        assert!((s.l2_norm_sq() - PI / 2.0).abs() < 1e-14);
        assert!((s.l2_norm_sq_exact() - PI / 2.0).abs() < 1e-14);
        assert_eq!(s.jumps(), vec![(32, Cx::new(0.0, 0.0))]);
    }

    #[test]
    fn trapezoid_norm_matches_weighted_samples_without_jumps() {
        let s = SigmaFunction::from_fn(PI, 40, |x| Cx::new(x.cos(), 0.3 * x)).unwrap();
        let w = s.grid().trapezoid_weights();
        let direct: f64 = s.samples().iter().zip(&w).map(|(z, w)| z.norm_sqr() * w).sum();
        assert!((s.l2_norm_sq() - direct).abs() < 1e-13);
        assert!(s.l2_norm_sq().is_finite());
    }

    #[test]
    fn reflection_is_an_involution_and_moves_jumps() {
        let s = SigmaFunction::step(PI, 32, 10, Cx::new(2.0, 0.0), Cx::new(-1.0, 0.0)).unwrap();
        let r = s.reflected();
        assert_eq!(r.reflected(), s);
        assert_eq!(r.eval(0.1), Cx::new(1.0, 0.0));
        assert_eq!(r.eval(PI - 0.1), Cx::new(-2.0, 0.0));
        assert_eq!(r.jumps().len(), 1);
        assert_eq!(r.jumps()[0].0, 22);
    }

    #[test]
    fn restriction_keeps_one_sided_limits() {
        let s = SigmaFunction::step(2.0 * PI, 64, 32, Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)).unwrap();
        let left = s.restrict(0, 32).unwrap();
        let right = s.restrict(32, 64).unwrap();
        assert!(left.samples().iter().all(|z| *z == Cx::new(1.0, 0.0)));
        assert!(right.samples().iter().all(|z| *z == Cx::new(0.0, 0.0)));
        assert!((left.interval() - PI).abs() < 1e-15);
    }

    #[test]
    fn join_inverts_restrict() {
        let s = SigmaFunction::step(2.0 * PI, 64, 48, Cx::new(0.5, 0.0), Cx::new(-1.0, 0.0))
            .unwrap()
            .with_jumps(&[(32, Cx::new(2.0, 0.0))])
            .unwrap();
        let j = SigmaFunction::join(&s.restrict(0, 32).unwrap(), &s.restrict(32, 64).unwrap()).unwrap();
        assert_eq!(j.samples(), s.samples());
        assert_eq!(j.jumps(), s.jumps());
        assert!((j.interval() - s.interval()).abs() < 1e-14);
    }
}
