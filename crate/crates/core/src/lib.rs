//! Inverse Sturm–Liouville problems with distribution potentials and
//! polynomial dependence on the spectral parameter in the boundary conditions,
//! solved from subspectra.
//!
//! The core is generic over the real scalar ([`Real`]: `f32` or `f64`);
//! `f64` aliases are provided at the crate root.

pub mod boundary;
pub mod cauchy;
pub mod corpus;
pub mod entire;
pub mod error;
pub mod grid;
pub mod hl;
pub mod hp;
pub mod linalg;
pub mod moment;
pub mod ode;
pub mod poly;
pub mod quadrature;
pub mod reconstruction;
pub mod repr;
pub mod scalar;
pub mod sigma;
pub mod spectral;
pub mod subspectrum;

pub use boundary::{validate_rp, BoundaryPolyPair, Parity, RpReport};
pub use cauchy::{CauchyData, CauchyErrors};
pub use entire::{EntirePair, FnPair, Growth, PolynomialPair};
pub use error::{Error, Result};
pub use grid::UniformGrid;
pub use hp::{hp_inner, HpVector};
pub use ode::{Direction, IntegratorConfig, Trajectory, Which};
pub use scalar::{Cx, Real};
pub use sigma::SigmaFunction;
pub use subspectrum::{ClassA, Subspectrum};

pub type C64 = Cx<f64>;
pub type Grid64 = UniformGrid<f64>;
pub type Sigma64 = SigmaFunction<f64>;
pub type Pair64 = BoundaryPolyPair<f64>;
pub type Subspectrum64 = Subspectrum<f64>;
pub type HpVector64 = HpVector<f64>;
pub type CauchyData64 = CauchyData<f64>;
pub type Trajectory64 = Trajectory<f64>;
