//! Ordered, finite subspectra {λ_n} with their square roots ρ_n.

use crate::error::{Error, Result};
use crate::scalar::{idx, rho_of, to_f64, Cx, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct Subspectrum<T> {
    lambdas: Vec<Cx<T>>,
    rhos: Vec<Cx<T>>,
}

/// Finite-sample proxy for the asymptotic class.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ClassA {
    pub nonzero: bool,
    pub max_im_rho: f64,
    pub inv_rho_sq_sum: f64,
    pub im_bound: f64,
    pub passes: bool,
}

impl<T: Real> Subspectrum<T> {
    pub fn new(lambdas: Vec<Cx<T>>) -> Self {
        let rhos = lambdas.iter().map(|&l| rho_of(l)).collect();
        Self { lambdas, rhos }
    }

    pub fn from_rhos(rhos: &[Cx<T>]) -> Self {
        Self::new(rhos.iter().map(|r| r * r).collect())
    }

    pub fn lambdas(&self) -> &[Cx<T>] {
        &self.lambdas
    }

    pub fn rhos(&self) -> &[Cx<T>] {
        &self.rhos
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Drops the first `k` entries.
    pub fn skip(&self, k: usize) -> Self {
        Self::new(self.lambdas.iter().skip(k).copied().collect())
    }

    pub fn take(&self, n: usize) -> Self {
        Self::new(self.lambdas.iter().take(n).copied().collect())
    }

    /// Class 𝒮: pairwise separation above `tol·(1 + |λ|)`.
    pub fn check_simple(&self, tol: T) -> Result<()> {
        for i in 0..self.lambdas.len() {
            for j in (i + 1)..self.lambdas.len() {
                let scale = T::one() + self.lambdas[i].norm().max(self.lambdas[j].norm());
                if (self.lambdas[i] - self.lambdas[j]).norm() <= tol * scale {
                    return Err(Error::DuplicateEigenvalue { i, j });
                }
            }
        }
        Ok(())
    }

    /// Class 𝒜 diagnostics with `|Im ρ_n| ≤ im_bound`.
    pub fn class_a(&self, im_bound: T) -> ClassA {
        let nonzero = self.lambdas.iter().all(|l| l.norm() > T::epsilon() * idx(16));
        let max_im = self.rhos.iter().map(|r| r.im.abs()).fold(T::zero(), T::max);
        let sum: T = self.rhos.iter().map(|r| T::one() / r.norm_sqr()).sum();
        let sum = to_f64(sum);
        ClassA {
            nonzero,
            max_im_rho: to_f64(max_im),
            inv_rho_sq_sum: sum,
            im_bound: to_f64(im_bound),
            passes: nonzero && max_im <= im_bound && sum.is_finite(),
        }
    }
}
