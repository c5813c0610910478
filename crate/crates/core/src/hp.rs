//! Elements of ℋ_p = L₂(0,π) ⊕ L₂(0,π) ⊕ ℂ^p on a uniform grid.

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::scalar::{creal, Cx, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct HpVector<T> {
    pub grid: UniformGrid<T>,
    pub h1: Vec<Cx<T>>,
    pub h2: Vec<Cx<T>>,
    pub h: Vec<Cx<T>>,
}

impl<T: Real> HpVector<T> {
    pub fn new(grid: UniformGrid<T>, h1: Vec<Cx<T>>, h2: Vec<Cx<T>>, h: Vec<Cx<T>>) -> Result<Self> {
        for len in [h1.len(), h2.len()] {
            if len != grid.len() {
                return Err(Error::DimensionMismatch { expected: grid.len(), found: len });
            }
        }
        Ok(Self { grid, h1, h2, h })
    }

    pub fn zeros(grid: UniformGrid<T>, p: usize) -> Self {
        let z = creal(T::zero());
        Self { grid, h1: vec![z; grid.len()], h2: vec![z; grid.len()], h: vec![z; p] }
    }

    pub fn p(&self) -> usize {
        self.h.len()
    }

    pub fn norm_sq(&self) -> T {
        self.grid.norm_sq(&self.h1) + self.grid.norm_sq(&self.h2) + self.h.iter().map(|z| z.norm_sqr()).sum::<T>()
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn conj(&self) -> Self {
        let c = |v: &[Cx<T>]| v.iter().map(|z| z.conj()).collect();
        Self { grid: self.grid, h1: c(&self.h1), h2: c(&self.h2), h: c(&self.h) }
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        let m = |v: &[Cx<T>]| v.iter().map(|z| *z * s).collect();
        Self { grid: self.grid, h1: m(&self.h1), h2: m(&self.h2), h: m(&self.h) }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_compatible(self, other)?;
        let d = |a: &[Cx<T>], b: &[Cx<T>]| a.iter().zip(b).map(|(x, y)| *x - *y).collect();
        Ok(Self { grid: self.grid, h1: d(&self.h1, &other.h1), h2: d(&self.h2, &other.h2), h: d(&self.h, &other.h) })
    }
}

fn check_compatible<T: Real>(g: &HpVector<T>, h: &HpVector<T>) -> Result<()> {
    if g.grid != h.grid {
        return Err(Error::DimensionMismatch { expected: g.grid.len(), found: h.grid.len() });
    }
    if g.h.len() != h.h.len() {
        return Err(Error::DimensionMismatch { expected: g.h.len(), found: h.h.len() });
    }
    Ok(())
}

/// `(g, h)`: conjugate-linear in `g`, linear in `h`, trapezoid rule on the L₂ parts.
pub fn hp_inner<T: Real>(g: &HpVector<T>, h: &HpVector<T>) -> Result<Cx<T>> {
    check_compatible(g, h)?;
    let finite = g.h.iter().zip(&h.h).fold(creal(T::zero()), |a, (x, y)| a + x.conj() * y);
    Ok(g.grid.inner(&g.h1, &h.h1) + g.grid.inner(&g.h2, &h.h2) + finite)
}
