//! Wire format, version 1. Complex numbers are `[re, im]` pairs; a bare number
//! is accepted on input as a real value.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

use subspec::entire::{EntirePair, PolynomialPair};
use subspec::hl::{HlPair, TwoSidedProblem};
use subspec::{BoundaryPolyPair, Sigma64, Subspectrum64, C64};

use crate::error::CliError;

pub const PROBLEM_SCHEMA: &str = "subspec/problem/v1";
pub const TWO_SIDED_SCHEMA: &str = "subspec/two-sided/v1";
pub const SUBSPECTRUM_SCHEMA: &str = "subspec/subspectrum/v1";

/// Intervals must match their nominal length to this absolute tolerance.
const INTERVAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireComplex {
    Pair([f64; 2]),
    Real(f64),
}

impl WireComplex {
    pub fn to_c64(self) -> C64 {
        match self {
            WireComplex::Pair([re, im]) => C64::new(re, im),
            WireComplex::Real(re) => C64::new(re, 0.0),
        }
    }
}

/// Output form of a complex number.
pub fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn pairs(zs: &[C64]) -> Vec<[f64; 2]> {
    zs.iter().map(|&z| pair(z)).collect()
}

fn complexes(v: &[WireComplex]) -> Vec<C64> {
    v.iter().map(|z| z.to_c64()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireSigma {
    pub interval: f64,
    /// Values at the `M + 1` nodes of the uniform grid.
    pub samples: Vec<WireComplex>,
    /// Nodes `k` whose left limit differs from the sample: `[k, [re, im]]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub jumps: Vec<(usize, WireComplex)>,
}

impl WireSigma {
    pub fn to_sigma(&self, nominal: f64, what: &str) -> Result<Sigma64, CliError> {
        // Written so that a NaN interval is rejected.
        let close = (self.interval - nominal).abs() <= INTERVAL_TOL;
        if !close {
            return Err(CliError::Input(format!("{what}: interval must be {nominal}, got {}", self.interval)));
        }
        let jumps: Vec<(usize, C64)> = self.jumps.iter().map(|&(k, z)| (k, z.to_c64())).collect();
        Sigma64::new(nominal, complexes(&self.samples))
            .and_then(|s| s.with_jumps(&jumps))
            .map_err(|e| CliError::Input(format!("{what}: {e}")))
    }

    #[cfg(test)]
    pub fn from_sigma(s: &Sigma64) -> Self {
        Self {
            interval: s.interval(),
            samples: s.samples().iter().map(|&z| WireComplex::Pair(pair(z))).collect(),
            jumps: s.jumps().into_iter().map(|(k, z)| (k, WireComplex::Pair(pair(z)))).collect(),
        }
    }
}

/// The entire pair `(f₁, f₂)` selecting the subspectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WireF {
    /// `(1, 0)`: `y^{[1]}(π) = 0`.
    ClosedFormNeumannRight,
    /// `(0, 1)`: `y(π) = 0`.
    ClosedFormDirichletRight,
    /// Polynomial coefficients in increasing degree.
    Polynomial { f1: Vec<WireComplex>, f2: Vec<WireComplex> },
    /// `f₁ = −ψ(π)`, `f₂ = ψ^{[1]}(π)` from a known right half, re-based on `[0, π]`.
    HlRightHalf { sigma: WireSigma, r1: Vec<WireComplex>, r2: Vec<WireComplex> },
}

impl WireF {
    pub fn to_pair(&self) -> Result<Arc<dyn EntirePair<f64>>, CliError> {
        Ok(match self {
            WireF::ClosedFormNeumannRight => Arc::new(PolynomialPair::<f64>::neumann()),
            WireF::ClosedFormDirichletRight => Arc::new(PolynomialPair::<f64>::dirichlet()),
            WireF::Polynomial { f1, f2 } => {
                if f1.is_empty() || f2.is_empty() {
                    return Err(CliError::Input("f: polynomial coefficient lists must be nonempty".into()));
                }
                Arc::new(PolynomialPair::new(complexes(f1), complexes(f2)))
            }
            WireF::HlRightHalf { sigma, r1, r2 } => {
                let s = sigma.to_sigma(PI, "f.sigma")?;
                Arc::new(HlPair::new(&s, boundary_pair(r1, r2, "f.r1/f.r2")?))
            }
        })
    }
}

fn boundary_pair(a: &[WireComplex], b: &[WireComplex], what: &str) -> Result<BoundaryPolyPair<f64>, CliError> {
    BoundaryPolyPair::new(complexes(a), complexes(b)).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

/// A problem on `[0, π]`. `sigma`, `p1`, `p2` are the forward data (and the
/// oracle for inverse runs); `p` alone suffices for a pure inverse run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireProblem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<WireSigma>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<Vec<WireComplex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p2: Option<Vec<WireComplex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    pub f: WireF,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspectrum: Option<Vec<WireComplex>>,
}

/// Validated in-memory form of [`WireProblem`].
pub struct Problem {
    pub sigma: Option<Sigma64>,
    pub pair: Option<BoundaryPolyPair<f64>>,
    pub p: usize,
    pub f: Arc<dyn EntirePair<f64>>,
    pub subspectrum: Option<Subspectrum64>,
}

impl Problem {
    /// Forward data, required by every command that evaluates the direct problem.
    pub fn forward(&self) -> Result<(&Sigma64, &BoundaryPolyPair<f64>), CliError> {
        match (&self.sigma, &self.pair) {
            (Some(s), Some(p)) => Ok((s, p)),
            _ => Err(CliError::Input("this command needs sigma, p1 and p2 in the problem file".into())),
        }
    }
}

fn check_schema(found: &Option<String>, expected: &str) -> Result<(), CliError> {
    match found {
        Some(s) if s != expected => Err(CliError::Input(format!("schema {s:?} is not {expected:?}"))),
        _ => Ok(()),
    }
}

impl WireProblem {
    pub fn validate(&self) -> Result<Problem, CliError> {
        check_schema(&self.schema, PROBLEM_SCHEMA)?;
        let sigma = self.sigma.as_ref().map(|s| s.to_sigma(PI, "sigma")).transpose()?;
        let pair = match (&self.p1, &self.p2) {
            (Some(a), Some(b)) => Some(boundary_pair(a, b, "p1/p2")?),
            (None, None) => None,
            _ => return Err(CliError::Input("p1 and p2 must be given together".into())),
        };
        let p = match (&pair, self.p) {
            (Some(pr), Some(p)) if pr.p() != p => {
                return Err(CliError::Input(format!("p = {p} disagrees with the degree {} of p1/p2", pr.p())))
            }
            (Some(pr), _) => pr.p(),
            (None, Some(p)) => p,
            (None, None) => return Err(CliError::Input("either p1/p2 or p is required".into())),
        };
        if p == 0 {
            return Err(CliError::Input("p must be at least 1".into()));
        }
        let subspectrum = self.subspectrum.as_ref().map(|v| Subspectrum64::new(complexes(v)));
        Ok(Problem { sigma, pair, p, f: self.f.to_pair()?, subspectrum })
    }
}

/// The two-sided problem on `[0, 2π]` for the half-inverse driver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireTwoSided {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub sigma: WireSigma,
    pub p1: Vec<WireComplex>,
    pub p2: Vec<WireComplex>,
    pub r1: Vec<WireComplex>,
    pub r2: Vec<WireComplex>,
    /// The full spectrum; computed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<WireComplex>>,
}

impl WireTwoSided {
    pub fn validate(&self) -> Result<(TwoSidedProblem<f64>, Option<Subspectrum64>), CliError> {
        check_schema(&self.schema, TWO_SIDED_SCHEMA)?;
        let s = self.sigma.to_sigma(2.0 * PI, "sigma")?;
        let left = boundary_pair(&self.p1, &self.p2, "p1/p2")?;
        let right = boundary_pair(&self.r1, &self.r2, "r1/r2")?;
        let prob = TwoSidedProblem::new(s, left, right).map_err(|e| CliError::Input(e.to_string()))?;
        Ok((prob, self.spectrum.as_ref().map(|v| Subspectrum64::new(complexes(v)))))
    }
}

/// A standalone subspectrum file; `spectrum.json` from `forward` has this shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireSubspectrum {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub lambdas: Vec<WireComplex>,
}

impl WireSubspectrum {
    pub fn validate(&self) -> Result<Subspectrum64, CliError> {
        check_schema(&self.schema, SUBSPECTRUM_SCHEMA)?;
        Ok(Subspectrum64::new(complexes(&self.lambdas)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_accepts_pairs_and_reals() {
        let v: Vec<WireComplex> = serde_json::from_str("[[1.5, -2], 3]").unwrap();
        assert_eq!(complexes(&v), vec![C64::new(1.5, -2.0), C64::new(3.0, 0.0)]);
        assert!(serde_json::from_str::<WireComplex>("[1, 2, 3]").is_err());
    }

    #[test]
    fn f_kinds_parse() {
        let f: WireF = serde_json::from_str(r#"{"kind": "closed_form_neumann_right"}"#).unwrap();
        assert_eq!(f, WireF::ClosedFormNeumannRight);
        let f: WireF = serde_json::from_str(r#"{"kind": "polynomial", "f1": [1], "f2": [[0, 1]]}"#).unwrap();
        assert!(matches!(f, WireF::Polynomial { .. }));
        assert!(serde_json::from_str::<WireF>(r#"{"kind": "nope"}"#).is_err());
    }

    fn zero_problem(interval: f64) -> WireProblem {
        WireProblem {
            schema: None,
            sigma: Some(WireSigma { interval, samples: vec![WireComplex::Real(0.0); 65], jumps: vec![] }),
            p1: Some(vec![WireComplex::Real(1.0)]),
            p2: Some(vec![WireComplex::Real(0.0)]),
            p: None,
            f: WireF::ClosedFormDirichletRight,
            subspectrum: None,
        }
    }

    #[test]
    fn problem_validation() {
        let p = zero_problem(PI).validate().unwrap();
        assert_eq!(p.p, 1);
        assert!(p.forward().is_ok());
        assert!(matches!(zero_problem(3.0).validate(), Err(CliError::Input(_))));
        let mut bad = zero_problem(PI);
        bad.p = Some(2);
        assert!(matches!(bad.validate(), Err(CliError::Input(_))));
        let mut bad = zero_problem(PI);
        bad.p1 = Some(vec![WireComplex::Real(2.0)]);
        assert!(matches!(bad.validate(), Err(CliError::Input(_))));
        let mut bad = zero_problem(PI);
        bad.schema = Some("other/v9".into());
        assert!(matches!(bad.validate(), Err(CliError::Input(_))));
    }

    #[test]
    fn sigma_round_trips_through_the_wire() {
        let s = Sigma64::step(PI, 16, 5, C64::new(0.0, 0.0), C64::new(1.0, 0.5)).unwrap();
        let w = WireSigma::from_sigma(&s);
        let text = serde_json::to_string(&w).unwrap();
        let back: WireSigma = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_sigma(PI, "sigma").unwrap(), s);
    }
}
