//! Structure of the integral representations of Δ₀ and Δ₁ in terms of the
//! generalized Cauchy data:
//!
//! `Δ_j(λ) = s·λ^m K(λ, π) + λ^m ∫₀^π D(t) K(λ, t) dt + Σ_n A_{k_n} λ^n`,
//!
//! where `K` is `sin ρt/ρ` or `cos ρt`, `D` is 𝒥 (for Δ₁) or 𝒢 (for Δ₀), and
//! `s = ±1`. The branch is fixed by the parity of p.

use crate::boundary::Parity;
use crate::cauchy::CauchyData;
use crate::scalar::{cos_sqrt, cpowi, creal, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `sin(ρt)/ρ`.
    Sinc,
    /// `cos(ρt)`.
    Cos,
}

impl Kernel {
    #[inline]
    pub fn eval<T: Real>(self, lambda: Cx<T>, t: T) -> Cx<T> {
        match self {
            Kernel::Sinc => crate::scalar::sinc_sqrt(lambda, t),
            Kernel::Cos => cos_sqrt(lambda, t),
        }
    }
}

/// One of Δ₀, Δ₁.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kernel: Kernel,
    pub power: usize,
    pub lead_negative: bool,
    /// Zero-based indices into `A` multiplying `λ⁰, λ¹, …`.
    pub a_slots: Vec<usize>,
}

impl Component {
    /// `s·λ^m K(λ, π)`.
    pub fn leading<T: Real>(&self, lambda: Cx<T>) -> Cx<T> {
        let v = cpowi(lambda, self.power) * self.kernel.eval(lambda, T::PI());
        if self.lead_negative {
            -v
        } else {
            v
        }
    }

    /// `Σ_n A_{k_n} λ^n`.
    pub fn polynomial<T: Real>(&self, a: &[Cx<T>], lambda: Cx<T>) -> Cx<T> {
        self.a_slots.iter().rev().fold(creal(T::zero()), |acc, &k| acc * lambda + a[k])
    }
}

/// `[Δ₀, Δ₁]` components for index `p`.
pub fn components(p: usize) -> [Component; 2] {
    match Parity::of(p) {
        Parity::Odd => {
            let n = (p - 1) / 2;
            [
                Component { kernel: Kernel::Cos, power: n, lead_negative: false, a_slots: (0..n).map(|k| 2 * k + 1).collect() },
                Component { kernel: Kernel::Sinc, power: n + 1, lead_negative: true, a_slots: (0..=n).map(|k| 2 * k).collect() },
            ]
        }
        Parity::Even => {
            let n = p / 2;
            [
                Component { kernel: Kernel::Sinc, power: n, lead_negative: true, a_slots: (0..n).map(|k| 2 * k + 1).collect() },
                Component { kernel: Kernel::Cos, power: n, lead_negative: true, a_slots: (0..n).map(|k| 2 * k).collect() },
            ]
        }
    }
}

/// Magnitude of `Δ_j` used to scale residuals: `(1 + |ρ|)^{p−1+j} e^{|Im ρ|π}`.
pub fn natural_scale<T: Real>(p: usize, j: usize, lambda: Cx<T>) -> T {
    let rho = crate::scalar::rho_of(lambda);
    (T::one() + rho.norm()).powi((p + j) as i32 - 1) * (rho.im.abs() * T::PI()).exp()
}

/// `(Δ₀(λ), Δ₁(λ))` evaluated from generalized Cauchy data by the representations.
pub fn deltas_from_cauchy<T: Real>(data: &CauchyData<T>, lambda: Cx<T>) -> (Cx<T>, Cx<T>) {
    let freq = crate::scalar::rho_of(lambda).norm().max(T::one());
    let eval = |comp: &Component, d: &[Cx<T>]| {
        let integral = data.grid.integrate_against(d, freq, |t| comp.kernel.eval(lambda, t));
        comp.leading(lambda) + cpowi(lambda, comp.power) * integral + comp.polynomial(&data.a, lambda)
    };
    let [c0, c1] = components(data.p());
    (eval(&c0, &data.g), eval(&c1, &data.j))
}
