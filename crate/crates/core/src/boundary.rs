//! Polynomial boundary pairs (p₁, p₂) ∈ ℛ_p.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::{creal, lit, to_f64, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(p: usize) -> Self {
        if p % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Outcome of [`validate_rp`].
#[derive(Debug, Clone, PartialEq)]
pub struct RpReport {
    pub p: usize,
    pub parity: Parity,
    pub n1: usize,
    pub n2: usize,
    pub normalized: bool,
    pub coprime: bool,
    /// `min |p₂(z)| / (1 + |z|^{N₂})` over the roots `z` of p₁; `None` if p₁ is constant.
    pub coprimality_margin: Option<f64>,
}

/// Relative tolerance of the coprimality test.
pub const COPRIME_TOL: f64 = 1e-8;

/// Classifies `(a, b)` into its ℛ_p branch and checks normalization and coprimality.
pub fn validate_rp<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Result<RpReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("boundary coefficient arrays must be nonempty".into()));
    }
    let n1 = a.len() - 1;
    let n2 = b.len() - 1;
    let p = (2 * n1 + 1).max(2 * n2);
    let parity = Parity::of(p);
    let one = creal(T::one());
    let tol = lit::<T>(1e-12);
    let (lead, name, idx) = match parity {
        Parity::Odd => (a[n1], "a", n1),
        Parity::Even => (b[n2], "b", n2),
    };
    if (lead - one).norm() > tol {
        return Err(Error::NormalizationViolation(format!(
            "{name}[{idx}] must equal 1 for p = {p}, got {}{:+}i",
            to_f64(lead.re),
            to_f64(lead.im)
        )));
    }
    let roots = poly::roots(a);
    let mut margin: Option<f64> = None;
    for z in &roots {
        let scale = T::one() + z.norm().powi(n2 as i32);
        let m = to_f64(poly::eval(b, *z).norm() / scale);
        if m <= COPRIME_TOL {
            return Err(Error::CommonRoot { re: to_f64(z.re), im: to_f64(z.im) });
        }
        margin = Some(margin.map_or(m, |x: f64| x.min(m)));
    }
    Ok(RpReport { p, parity, n1, n2, normalized: true, coprime: true, coprimality_margin: margin })
}

/// Validated pair stored in canonical form: odd p ⇒ `len(a) = len(b) = N₁+1`,
/// even p ⇒ `len(a) = N₂`, `len(b) = N₂+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPolyPair<T> {
    a: Vec<Cx<T>>,
    b: Vec<Cx<T>>,
    p: usize,
}

impl<T: Real> BoundaryPolyPair<T> {
    pub fn new(a: Vec<Cx<T>>, b: Vec<Cx<T>>) -> Result<Self> {
        let report = validate_rp(&a, &b)?;
        let (la, lb) = match report.parity {
            Parity::Odd => (report.n1 + 1, report.n1 + 1),
            Parity::Even => (report.n2, report.n2 + 1),
        };
        let mut a = a;
        let mut b = b;
        a.resize(la, creal(T::zero()));
        b.resize(lb, creal(T::zero()));
        Ok(Self { a, b, p: report.p })
    }

    /// Convenience constructor for real coefficients.
    pub fn real(a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(a.iter().map(|&x| creal(lit(x))).collect(), b.iter().map(|&x| creal(lit(x))).collect())
    }

    pub fn a(&self) -> &[Cx<T>] {
        &self.a
    }

    pub fn b(&self) -> &[Cx<T>] {
        &self.b
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.p)
    }

    pub fn p1(&self, lambda: Cx<T>) -> Cx<T> {
        poly::eval(&self.a, lambda)
    }

    pub fn p2(&self, lambda: Cx<T>) -> Cx<T> {
        poly::eval(&self.b, lambda)
    }

    /// `((p₁, p₁′), (p₂, p₂′))` at `lambda`.
    pub fn eval_with_derivative(&self, lambda: Cx<T>) -> ((Cx<T>, Cx<T>), (Cx<T>, Cx<T>)) {
        (poly::eval_with_derivative(&self.a, lambda), poly::eval_with_derivative(&self.b, lambda))
    }

    pub fn report(&self) -> RpReport {
        validate_rp(&self.a, &self.b).expect("stored pair is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: &[f64]) -> Vec<Cx<f64>> {
        v.iter().map(|&x| Cx::new(x, 0.0)).collect()
    }

    #[test]
    fn constant_pair_is_p1_odd() {
        let r = validate_rp(&c(&[1.0]), &c(&[0.0])).unwrap();
        assert_eq!((r.p, r.parity, r.normalized, r.coprime), (1, Parity::Odd, true, true));
    }

    #[test]
    fn leading_coefficient_enforced() {
        assert!(matches!(validate_rp(&c(&[0.5]), &c(&[3.0])), Err(Error::NormalizationViolation(_))));
        assert!(matches!(validate_rp(&c(&[1.0]), &c(&[0.0, 0.0])), Err(Error::NormalizationViolation(_))));
    }

    #[test]
    fn common_root_detected() {
        match validate_rp(&c(&[2.0, 1.0]), &c(&[2.0, 1.0])) {
            Err(Error::CommonRoot { re, im }) => assert!((re + 2.0).abs() < 1e-10 && im.abs() < 1e-10),
            other => panic!("expected CommonRoot, got {other:?}"),
        }
    }

    #[test]
    fn canonical_padding() {
        let pair = BoundaryPolyPair::<f64>::real(&[0.5, 1.0], &[0.3]).unwrap();
        assert_eq!(pair.p(), 3);
        assert_eq!(pair.b().len(), 2);
        let even = BoundaryPolyPair::<f64>::real(&[0.5], &[-0.2, 1.0]).unwrap();
        assert_eq!((even.p(), even.parity()), (2, Parity::Even));
        assert_eq!(even.a().len(), 1);
    }

    proptest! {
        #[test]
        fn classification_is_total_and_idempotent(n1 in 0usize..4, n2 in 0usize..4, seed in -3.0f64..3.0) {
            let p = (2 * n1 + 1).max(2 * n2);
            let mut a: Vec<Cx<f64>> = (0..=n1).map(|k| Cx::new(seed + k as f64, 0.5)).collect();
            let mut b: Vec<Cx<f64>> = (0..=n2).map(|k| Cx::new(seed * 0.5 - k as f64, -0.25)).collect();
            if p % 2 == 1 { a[n1] = Cx::new(1.0, 0.0); } else { b[n2] = Cx::new(1.0, 0.0); }
            let first = validate_rp(&a, &b);
            let second = validate_rp(&a, &b);
            prop_assert_eq!(&first, &second);
            match first {
                Ok(r) => {
                    prop_assert_eq!(r.p, p);
                    prop_assert_eq!(r.parity, Parity::of(p));
                }
                Err(e) => {
                    let common = matches!(e, Error::CommonRoot { .. });
                    prop_assert!(common);
                }
            }
        }
    }
}
