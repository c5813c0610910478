//! Reference problems shared by the tests, the acceptance suite, and the CLI.

use std::f64::consts::PI;

use crate::boundary::BoundaryPolyPair;
use crate::error::Result;
use crate::hl::{hl_spectrum, HlPair, HlSpectrumOptions, TwoSidedProblem};
use crate::scalar::Cx;
use crate::sigma::SigmaFunction;
use crate::subspectrum::Subspectrum;

type C = Cx<f64>;

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

/// Shape of σ on one half, sampled on `cells` cells of `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Zero,
    /// `0` on `[0, π/2)`, `height` on `[π/2, π]`.
    Step { height: f64 },
    /// `a cos x + b sin 2x`.
    Smooth { a: f64, b: f64 },
}

impl Shape {
    pub fn sample(self, cells: usize) -> Result<SigmaFunction<f64>> {
        match self {
            Shape::Zero => SigmaFunction::zero(PI, cells),
            Shape::Step { height } => SigmaFunction::step(PI, cells, cells / 2, c(0.0), c(height)),
            Shape::Smooth { a, b } => SigmaFunction::from_fn(PI, cells, |x| c(a * x.cos() + b * (2.0 * x).sin())),
        }
    }
}

/// An inverse problem of half-inverse type: unknown left half `(σ, p₁, p₂)`,
/// known right half that generates `(f₁, f₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub name: &'static str,
    pub left: Shape,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub right: Shape,
    pub ra: Vec<f64>,
    pub rb: Vec<f64>,
}

impl Case {
    pub fn pair(&self) -> BoundaryPolyPair<f64> {
        BoundaryPolyPair::real(&self.a, &self.b).expect("corpus pair is valid")
    }

    pub fn right_pair(&self) -> BoundaryPolyPair<f64> {
        BoundaryPolyPair::real(&self.ra, &self.rb).expect("corpus pair is valid")
    }

    pub fn p(&self) -> usize {
        self.pair().p()
    }

    pub fn r(&self) -> usize {
        self.right_pair().p()
    }

    pub fn sigma_left(&self, cells: usize) -> Result<SigmaFunction<f64>> {
        self.left.sample(cells)
    }

    pub fn sigma_right(&self, cells: usize) -> Result<SigmaFunction<f64>> {
        self.right.sample(cells)
    }

    pub fn entire_pair(&self, cells: usize) -> Result<HlPair<f64>> {
        Ok(HlPair::new(&self.sigma_right(cells)?, self.right_pair()))
    }

    pub fn two_sided(&self, cells: usize) -> Result<TwoSidedProblem<f64>> {
        let full = SigmaFunction::join(&self.sigma_left(cells)?, &self.sigma_right(cells)?)?;
        TwoSidedProblem::new(full, self.pair(), self.right_pair())
    }

    /// The first `count` eigenvalues of the two-sided problem.
    pub fn spectrum(&self, cells: usize, count: usize) -> Result<Subspectrum<f64>> {
        hl_spectrum(&self.two_sided(cells)?, count, &HlSpectrumOptions::default())
    }
}

/// Inverse corpus spanning `p ∈ {1, 2, 3}` and both parities.
pub fn inverse_corpus() -> Vec<Case> {
    vec![
        Case {
            name: "step-p1-r1",
            left: Shape::Step { height: 1.0 },
            a: vec![1.0],
            b: vec![0.3],
            right: Shape::Zero,
            ra: vec![1.0],
            rb: vec![0.2],
        },
        Case {
            name: "zero-p2-r2",
            left: Shape::Zero,
            a: vec![0.5],
            b: vec![-0.4, 1.0],
            right: Shape::Zero,
            ra: vec![0.3],
            rb: vec![0.5, 1.0],
        },
        Case {
            name: "step-p3-r3",
            left: Shape::Step { height: 1.0 },
            a: vec![0.4, 1.0],
            b: vec![0.3, -0.2],
            right: Shape::Zero,
            ra: vec![0.5, 1.0],
            rb: vec![0.4, 0.7],
        },
        Case {
            name: "smooth-p1-r1",
            left: Shape::Smooth { a: 0.5, b: 0.3 },
            a: vec![1.0],
            b: vec![-0.5],
            right: Shape::Smooth { a: -0.4, b: 0.2 },
            ra: vec![1.0],
            rb: vec![0.6],
        },
        Case {
            name: "step-p2-r2",
            left: Shape::Step { height: -0.8 },
            a: vec![0.6],
            b: vec![0.2, 1.0],
            right: Shape::Zero,
            ra: vec![-0.3],
            rb: vec![0.4, 1.0],
        },
    ]
}

/// Half-inverse instances with `(p, r) = (1, 3)`: step and zero left halves.
pub fn exclusion_corpus() -> Vec<Case> {
    let base = Case {
        name: "hl-step-p1-r3",
        left: Shape::Step { height: 1.0 },
        a: vec![1.0],
        b: vec![0.3],
        right: Shape::Zero,
        ra: vec![0.5, 1.0],
        rb: vec![-0.4, 0.7],
    };
    let zero = Case { name: "hl-zero-p1-r3", left: Shape::Zero, ..base.clone() };
    vec![base, zero]
}

/// Half-inverse instances with `p = r = 1` for the asymptotics check.
pub fn asymptotics_corpus() -> Vec<Case> {
    vec![
        Case {
            name: "hl-zero-p1-r1",
            left: Shape::Zero,
            a: vec![1.0],
            b: vec![0.3],
            right: Shape::Zero,
            ra: vec![1.0],
            rb: vec![0.2],
        },
        inverse_corpus().remove(0),
    ]
}
