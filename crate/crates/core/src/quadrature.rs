//! Gauss–Legendre rules and the orthonormal Legendre basis on `[0, π]`.

use crate::scalar::{idx, lit, Real};

/// Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = idx::<T>(n);
        let tol = T::epsilon() * lit(4.0);
        for i in 0..n.div_ceil(2) {
            let mut x = (T::PI() * (idx::<T>(i) + lit(0.75)) / (nf + lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= tol {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != T::zero() {
                dp = d;
            }
            let w = lit::<T>(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> (Vec<T>, Vec<T>) {
        let half = (b - a) / lit(2.0);
        let mid = (a + b) / lit(2.0);
        let xs = self.nodes.iter().map(|&x| mid + half * x).collect();
        let ws = self.weights.iter().map(|&w| w * half).collect();
        (xs, ws)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=n {
        let kf = idx::<T>(k);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = idx::<T>(n);
    let denom = x * x - T::one();
    let d = if denom == T::zero() {
        T::zero()
    } else {
        nf * (x * p1 - p0) / denom
    };
    (p1, d)
}

/// Values of the orthonormal basis `φ_j(t) = √((2j+1)/π) P_j(2t/π − 1)`, `j < k`.
pub fn legendre_basis<T: Real>(k: usize, t: T) -> Vec<T> {
    let mut out = Vec::with_capacity(k);
    let x = lit::<T>(2.0) * t / T::PI() - T::one();
    let mut p0 = T::one();
    let mut p1 = x;
    for j in 0..k {
        let pj = match j {
            0 => T::one(),
            1 => x,
            _ => {
                let jf = idx::<T>(j);
                let p2 = ((lit::<T>(2.0) * jf - T::one()) * x * p1 - (jf - T::one()) * p0) / jf;
                p0 = p1;
                p1 = p2;
                p2
            }
        };
        let scale = ((lit::<T>(2.0) * idx::<T>(j) + T::one()) / T::PI()).sqrt();
        out.push(scale * pj);
    }
    out
}

/// Gauss node count resolving a degree-`k` polynomial times a kernel of frequency `freq` on `[0, π]`.
pub fn gauss_count_for<T: Real>(k: usize, freq: T) -> usize {
    let osc = (freq * T::PI()).ceil().to_usize().unwrap_or(0);
    k + osc + 24
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        let g = GaussLegendre::<f64>::new(7);
        for deg in 0..14 {
            let s: f64 = g.nodes.iter().zip(&g.weights).map(|(&x, &w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((s - exact).abs() < 1e-14, "degree {deg}: {s} vs {exact}");
        }
    }

    #[test]
    fn gauss_large_rule_integrates_oscillation() {
        let g = GaussLegendre::<f64>::new(gauss_count_for(0, 30.0));
        let (xs, ws) = g.mapped(0.0, PI);
        let s: f64 = xs.iter().zip(&ws).map(|(&x, &w)| w * (30.0 * x).cos() * x).sum();
        let exact = ((30.0 * PI).cos() - 1.0) / 900.0 + PI * (30.0 * PI).sin() / 30.0;
        assert!((s - exact).abs() < 1e-13);
    }

    #[test]
    fn legendre_basis_is_orthonormal() {
        let k = 10;
        let g = GaussLegendre::<f64>::new(24);
        let (xs, ws) = g.mapped(0.0, PI);
        let vals: Vec<Vec<f64>> = xs.iter().map(|&t| legendre_basis(k, t)).collect();
        for i in 0..k {
            for j in 0..k {
                let s: f64 = vals.iter().zip(&ws).map(|(v, &w)| w * v[i] * v[j]).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((s - e).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn gauss_rule_in_f32() {
        let g = GaussLegendre::<f32>::new(5);
        let s: f32 = g.nodes.iter().zip(&g.weights).map(|(&x, &w)| w * x * x).sum();
        assert!((s - 2.0 / 3.0).abs() < 1e-6);
    }
}
