//! Uniform grids, trapezoid sums, and kernel quadrature of sampled functions.

use serde::{Deserialize, Serialize};

use crate::quadrature::GaussLegendre;
use crate::scalar::{creal, idx, lit, Cx, Real};

/// Uniform grid `x_k = k·length/cells`, `k = 0..=cells`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid<T> {
    pub length: T,
    pub cells: usize,
}

/// Panel width, in cells, of the local interpolation used by [`UniformGrid::integrate_against`].
const PANEL: usize = 4;

impl<T: Real> UniformGrid<T> {
    pub fn new(length: T, cells: usize) -> Self {
        assert!(cells >= 1, "grid needs at least one cell");
        Self { length, cells }
    }

    /// Grid on `[0, π]`.
    pub fn on_pi(cells: usize) -> Self {
        Self::new(T::PI(), cells)
    }

    pub fn step(&self) -> T {
        self.length / idx(self.cells)
    }

    pub fn node(&self, k: usize) -> T {
        self.length * idx(k) / idx(self.cells)
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..=self.cells).map(|k| self.node(k)).collect()
    }

    pub fn len(&self) -> usize {
        self.cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn trapezoid_weights(&self) -> Vec<T> {
        let h = self.step();
        let mut w = vec![h; self.cells + 1];
        w[0] = h / lit(2.0);
        w[self.cells] = h / lit(2.0);
        w
    }

    /// Trapezoid sum of `samples`.
    pub fn trapezoid(&self, samples: &[Cx<T>]) -> Cx<T> {
        debug_assert_eq!(samples.len(), self.len());
        let h = self.step();
        let inner: Cx<T> = samples[1..self.cells].iter().fold(creal(T::zero()), |a, &b| a + b);
        (inner + (samples[0] + samples[self.cells]) / lit::<T>(2.0)) * h
    }

    /// Trapezoid `∫|g|²`.
    pub fn norm_sq(&self, samples: &[Cx<T>]) -> T {
        debug_assert_eq!(samples.len(), self.len());
        let h = self.step();
        let inner: T = samples[1..self.cells].iter().map(|z| z.norm_sqr()).sum();
        (inner + (samples[0].norm_sqr() + samples[self.cells].norm_sqr()) / lit(2.0)) * h
    }

    /// Trapezoid `∫ conj(g) h`.
    pub fn inner(&self, g: &[Cx<T>], h: &[Cx<T>]) -> Cx<T> {
        let prod: Vec<Cx<T>> = g.iter().zip(h).map(|(a, b)| a.conj() * b).collect();
        self.trapezoid(&prod)
    }

    /// `∫ g(t)·kernel(t) dt` for grid samples `g`, using piecewise quartic
    /// interpolation of `g` and Gauss quadrature on each panel.
    ///
    /// `freq` bounds the oscillation rate of the kernel. Exact whenever `g` is a
    /// polynomial of degree ≤ 4 and the kernel is resolved by the Gauss rule.
    pub fn integrate_against<F>(&self, g: &[Cx<T>], freq: T, kernel: F) -> Cx<T>
    where
        F: Fn(T) -> Cx<T>,
    {
        debug_assert_eq!(g.len(), self.len());
        if self.cells < PANEL {
            let vals: Vec<Cx<T>> = self.nodes().iter().zip(g).map(|(&t, &v)| v * kernel(t)).collect();
            return self.trapezoid(&vals);
        }
        let h = self.step();
        let width = h * idx(PANEL);
        let extra = (freq * width * lit(2.0)).ceil().to_usize().unwrap_or(0);
        let rule = GaussLegendre::<T>::new(8 + extra);
        let mut acc = creal(T::zero());
        let mut start = 0;
        while start < self.cells {
            let end = (start + PANEL).min(self.cells);
            let base = start.min(self.cells - PANEL);
            let (ts, ws) = rule.mapped(self.node(start), self.node(end));
            for (&t, &w) in ts.iter().zip(&ws) {
                let s = (t - self.node(base)) / h;
                let mut val = creal(T::zero());
                for i in 0..=PANEL {
                    let mut l = T::one();
                    for j in 0..=PANEL {
                        if j != i {
                            l = l * (s - idx(j)) / (idx::<T>(i) - idx(j));
                        }
                    }
                    val = val + g[base + i] * l;
                }
                acc = acc + val * kernel(t) * w;
            }
            start = end;
        }
        acc
    }
}
