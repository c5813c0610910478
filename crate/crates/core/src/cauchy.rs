//! Generalized Cauchy data {𝒥, 𝒢, A₁..A_p}.

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::hp::HpVector;
use crate::scalar::{Cx, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyData<T> {
    pub grid: UniformGrid<T>,
    pub j: Vec<Cx<T>>,
    pub g: Vec<Cx<T>>,
    pub a: Vec<Cx<T>>,
}

/// Errors of recovered data against a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyErrors<T> {
    /// `‖𝒥 − 𝒥_ref‖/‖𝒥_ref‖`, or the absolute error when the reference vanishes.
    pub rel_j: T,
    pub rel_g: T,
    pub abs_j: T,
    pub abs_g: T,
    /// `max_k |A_k − A_ref,k|`.
    pub abs_a: T,
    /// `‖u − u_ref‖_{ℋ_p}`.
    pub abs_u: T,
    pub rel_u: T,
}

impl<T: Real> CauchyData<T> {
    pub fn new(grid: UniformGrid<T>, j: Vec<Cx<T>>, g: Vec<Cx<T>>, a: Vec<Cx<T>>) -> Result<Self> {
        for len in [j.len(), g.len()] {
            if len != grid.len() {
                return Err(Error::DimensionMismatch { expected: grid.len(), found: len });
            }
        }
        Ok(Self { grid, j, g, a })
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    /// `u = [conj 𝒥, conj 𝒢, conj A]`.
    pub fn to_u(&self) -> HpVector<T> {
        let c = |v: &[Cx<T>]| v.iter().map(|z| z.conj()).collect();
        HpVector { grid: self.grid, h1: c(&self.j), h2: c(&self.g), h: c(&self.a) }
    }

    /// Inverse of [`CauchyData::to_u`].
    pub fn from_u(u: &HpVector<T>) -> Self {
        let c = |v: &[Cx<T>]| v.iter().map(|z| z.conj()).collect();
        Self { grid: u.grid, j: c(&u.h1), g: c(&u.h2), a: c(&u.h) }
    }

    pub fn errors_against(&self, reference: &Self) -> Result<CauchyErrors<T>> {
        if self.grid != reference.grid {
            return Err(Error::DimensionMismatch { expected: reference.grid.len(), found: self.grid.len() });
        }
        if self.a.len() != reference.a.len() {
            return Err(Error::DimensionMismatch { expected: reference.a.len(), found: self.a.len() });
        }
        let diff = |x: &[Cx<T>], y: &[Cx<T>]| -> Vec<Cx<T>> { x.iter().zip(y).map(|(a, b)| *a - *b).collect() };
        let rel = |abs: T, norm: T| if norm > T::epsilon() { abs / norm } else { abs };
        let abs_j = self.grid.norm_sq(&diff(&self.j, &reference.j)).sqrt();
        let abs_g = self.grid.norm_sq(&diff(&self.g, &reference.g)).sqrt();
        let abs_a = self.a.iter().zip(&reference.a).map(|(x, y)| (*x - *y).norm()).fold(T::zero(), T::max);
        let du = self.to_u().sub(&reference.to_u())?;
        let abs_u = du.norm();
        Ok(CauchyErrors {
            rel_j: rel(abs_j, self.grid.norm_sq(&reference.j).sqrt()),
            rel_g: rel(abs_g, self.grid.norm_sq(&reference.g).sqrt()),
            abs_j,
            abs_g,
            abs_a,
            abs_u,
            rel_u: rel(abs_u, reference.to_u().norm()),
        })
    }
}
