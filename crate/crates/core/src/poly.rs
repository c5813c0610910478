//! Polynomial evaluation and simultaneous root finding (Aberth–Ehrlich).

use crate::scalar::{creal, idx, lit, Cx, Real};

/// Horner evaluation of `Σ c_k z^k`.
pub fn eval<T: Real>(c: &[Cx<T>], z: Cx<T>) -> Cx<T> {
    c.iter().rev().fold(creal(T::zero()), |acc, &a| acc * z + a)
}

/// Value and first derivative.
pub fn eval_with_derivative<T: Real>(c: &[Cx<T>], z: Cx<T>) -> (Cx<T>, Cx<T>) {
    let mut p = creal(T::zero());
    let mut d = creal(T::zero());
    for &a in c.iter().rev() {
        d = d * z + p;
        p = p * z + a;
    }
    (p, d)
}

/// Degree after discarding exactly-zero leading coefficients; `None` for the zero polynomial.
pub fn degree<T: Real>(c: &[Cx<T>]) -> Option<usize> {
    c.iter().rposition(|z| *z != creal(T::zero()))
}

/// All complex roots, with multiplicity.
pub fn roots<T: Real>(c: &[Cx<T>]) -> Vec<Cx<T>> {
    let Some(n) = degree(c) else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Cx<T>> = c[..=n].iter().map(|&a| a / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    let radius = T::one() + monic[..n].iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let mut z: Vec<Cx<T>> = (0..n)
        .map(|k| {
            let angle = lit::<T>(2.0) * T::PI() * idx::<T>(k) / idx::<T>(n) + lit(0.4);
            Cx::from_polar(radius * lit(0.5), angle)
        })
        .collect();
    let tol = T::epsilon() * lit(16.0);
    for _ in 0..500 {
        let mut moved = T::zero();
        for k in 0..n {
            let (p, d) = eval_with_derivative(&monic, z[k]);
            if p == creal(T::zero()) {
                continue;
            }
            let ratio = p / d;
            let repulsion = (0..n)
                .filter(|&j| j != k)
                .fold(creal(T::zero()), |acc, j| acc + (z[k] - z[j]).inv());
            let step = ratio / (creal(T::one()) - ratio * repulsion);
            z[k] = z[k] - step;
            moved = moved.max(step.norm() / (T::one() + z[k].norm()));
        }
        if moved <= tol {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        let c = [Cx::new(2.0, 0.0), Cx::new(-3.0, 0.0), Cx::new(1.0, 0.0)];
        let mut r: Vec<f64> = roots(&c).iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((r[0] - 1.0).abs() < 1e-13 && (r[1] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn roots_are_zeros_of_the_polynomial() {
        let c = [Cx::new(1.0, 2.0), Cx::new(0.0, -1.0), Cx::new(3.0, 0.0), Cx::new(-0.5, 0.25), Cx::new(1.0, 0.0)];
        let r = roots(&c);
        assert_eq!(r.len(), 4);
        for z in r {
            assert!(eval(&c, z).norm() < 1e-11, "{z}");
        }
    }

    #[test]
    fn constants_have_no_roots() {
        assert!(roots(&[Cx::new(3.0f64, 0.0)]).is_empty());
        assert!(roots(&[Cx::new(0.0f64, 0.0)]).is_empty());
        assert_eq!(degree(&[Cx::new(1.0f64, 0.0), Cx::new(0.0, 0.0)]), Some(0));
    }
}
