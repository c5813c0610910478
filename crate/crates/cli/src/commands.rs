//! The five verbs. Each reads its inputs, runs the library, and writes JSON or
//! CSV into the output directory.

use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use subspec::hl::{hl_reconstruct, hl_spectrum, HlSpectrumOptions};
use subspec::moment::{
    build_moment_system, condition_curve, riesz_like, sine_family_diagnostics, xi_identity_residual, BasisDiagnostics,
    UnknownBasis, SIMPLE_TOL,
};
use subspec::reconstruction::{
    reconstruct, stability_experiment, summarize_stability, ReconstructOptions, Report, StabilityBase,
    StabilitySummary, RANK_TOL,
};
use subspec::spectral::{extract_cauchy, find_first_eigenvalues, weyl, CharDelta, ExtractOptions, SearchOptions};
use subspec::{CauchyData64, CauchyErrors, ClassA, Grid64, Subspectrum64, C64};

use crate::error::CliError;
use crate::output::{num, parse_json, read_input, GridMeta, Input, Meta, OutDir, TOOL, VERSION};
use crate::schema::{pairs, Problem, WireProblem, WireSubspectrum, WireTwoSided, SUBSPECTRUM_SCHEMA};

/// Options shared by the verbs; unused ones are ignored by a verb.
#[derive(Debug, Clone)]
pub struct Common {
    pub grid: usize,
    pub eigs: usize,
    pub tol: Option<f64>,
    pub seed: u64,
    pub out: PathBuf,
    pub strict: bool,
    pub reg: f64,
    pub basis: BasisChoice,
    pub kernel_modes: usize,
    pub imag_band: f64,
    pub search_lo: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BasisChoice {
    Legendre,
    Grid,
}

impl Common {
    fn grid(&self) -> Result<Grid64, CliError> {
        if self.grid < 8 {
            return Err(CliError::Input(format!("--grid must be at least 8, got {}", self.grid)));
        }
        Ok(Grid64::on_pi(self.grid))
    }

    fn basis(&self) -> UnknownBasis {
        match self.basis {
            BasisChoice::Legendre => UnknownBasis::Legendre(self.kernel_modes),
            BasisChoice::Grid => UnknownBasis::Grid,
        }
    }

    fn reconstruct_options(&self) -> ReconstructOptions<f64> {
        ReconstructOptions { basis: self.basis(), reg: self.reg, rank_tol: self.tol.unwrap_or(RANK_TOL), ..Default::default() }
    }

    fn search(&self) -> SearchOptions<f64> {
        let mut s = SearchOptions::default();
        if let Some(t) = self.tol {
            s.verify_tol = t;
        }
        s
    }

    fn meta(&self, command: &'static str, inputs: &[&Input], interval: f64, extra: &[(&'static str, serde_json::Value)]) -> Meta {
        let mut options = BTreeMap::new();
        options.insert("grid", json!(self.grid));
        options.insert("eigs", json!(self.eigs));
        options.insert("tol", json!(self.tol));
        options.insert("reg", json!(self.reg));
        options.insert(
            "basis",
            json!(match self.basis {
                BasisChoice::Legendre => format!("legendre:{}", self.kernel_modes),
                BasisChoice::Grid => "grid".to_string(),
            }),
        );
        options.insert("imag_band", json!(self.imag_band));
        options.insert("search_lo", json!(self.search_lo));
        options.insert("strict", json!(self.strict));
        for (k, v) in extra {
            options.insert(k, v.clone());
        }
        Meta {
            tool: TOOL,
            version: VERSION,
            command,
            inputs: inputs.iter().map(|i| i.hash.clone()).collect(),
            grid: GridMeta { cells: self.grid, interval },
            options,
        }
    }
}

#[derive(Serialize)]
struct CauchyOut<'a> {
    meta: &'a Meta,
    grid: GridMeta,
    j: Vec<[f64; 2]>,
    g: Vec<[f64; 2]>,
    a: Vec<[f64; 2]>,
}

fn cauchy_out<'a>(meta: &'a Meta, d: &CauchyData64) -> CauchyOut<'a> {
    CauchyOut {
        meta,
        grid: GridMeta { cells: d.grid.cells, interval: d.grid.length },
        j: pairs(&d.j),
        g: pairs(&d.g),
        a: pairs(&d.a),
    }
}

/// Errors against the forward oracle.
#[derive(Debug, Clone, Serialize)]
struct OracleErrors {
    rel_j: f64,
    rel_g: f64,
    abs_a: f64,
    abs_u: f64,
    rel_u: f64,
}

impl From<CauchyErrors<f64>> for OracleErrors {
    fn from(e: CauchyErrors<f64>) -> Self {
        Self { rel_j: e.rel_j, rel_g: e.rel_g, abs_a: e.abs_a, abs_u: e.abs_u, rel_u: e.rel_u }
    }
}

fn load_problem(path: &Path) -> Result<(Input, Problem), CliError> {
    let input = read_input(path)?;
    let wire: WireProblem = parse_json(&input)?;
    let problem = wire.validate()?;
    Ok((input, problem))
}

/// The first `count` eigenvalues of a forward problem.
fn forward_spectrum(problem: &Problem, count: usize, c: &Common) -> Result<Subspectrum64, CliError> {
    let (sigma, pair) = problem.forward()?;
    let delta = CharDelta::new(sigma, pair, problem.f.as_ref());
    Ok(find_first_eigenvalues(&delta, count, c.search_lo, c.imag_band, &c.search())?)
}

/// Subspectrum for inverse verbs: explicit file, else the problem's own field,
/// else the first `--eigs` eigenvalues of the forward data.
fn inverse_subspectrum(problem: &Problem, file: Option<&Input>, c: &Common) -> Result<Subspectrum64, CliError> {
    if let Some(input) = file {
        let wire: WireSubspectrum = parse_json(input)?;
        return wire.validate();
    }
    if let Some(s) = &problem.subspectrum {
        return Ok(s.clone());
    }
    if problem.sigma.is_some() {
        return forward_spectrum(problem, c.eigs, c);
    }
    Err(CliError::Input("no subspectrum: pass a subspectrum file or add one to the problem".into()))
}

fn oracle(problem: &Problem, grid: Grid64) -> Result<Option<CauchyData64>, CliError> {
    match (&problem.sigma, &problem.pair) {
        (Some(s), Some(p)) => Ok(Some(extract_cauchy(s, p, grid, &ExtractOptions::default())?.data)),
        _ => Ok(None),
    }
}

fn strict_check(c: &Common, report: &Report) -> Result<(), CliError> {
    if c.strict && report.non_unique() {
        return Err(CliError::NonUnique(format!("{:?}", report.warnings)));
    }
    Ok(())
}

fn announce(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

pub fn forward(problem_path: &Path, c: &Common) -> Result<(), CliError> {
    let (input, problem) = load_problem(problem_path)?;
    let grid = c.grid()?;
    let (sigma, pair) = problem.forward()?;
    let eta = forward_spectrum(&problem, c.eigs, c)?;
    let extraction = extract_cauchy(sigma, pair, grid, &ExtractOptions::default())?;
    let weyl_samples: Vec<serde_json::Value> = (-4..=20)
        .map(|x| {
            let l = C64::new(x as f64, 1.0);
            let m = weyl(sigma, pair, l).ok().map(|m| [m.re, m.im]);
            json!({ "lambda": [l.re, l.im], "m": m })
        })
        .collect();
    let meta = c.meta("forward", &[&input], PI, &[]);
    let out = OutDir::new(&c.out)?;
    let spectrum = json!({
        "schema": SUBSPECTRUM_SCHEMA,
        "meta": meta,
        "lambdas": pairs(eta.lambdas()),
        "rhos": pairs(eta.rhos()),
        "class_a": eta.class_a(10.0),
    });
    let mut cauchy = serde_json::to_value(cauchy_out(&meta, &extraction.data)).map_err(|e| CliError::Write(e.to_string()))?;
    cauchy["extraction"] = json!({ "residual": extraction.residual, "cond": extraction.cond });
    cauchy["weyl"] = json!(weyl_samples);
    announce(&[out.json("spectrum.json", &spectrum)?, out.json("cauchy.json", &cauchy)?]);
    Ok(())
}

#[derive(Serialize)]
struct ReportOut<'a> {
    meta: &'a Meta,
    subspectrum_size: usize,
    report: &'a Report,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_errors: Option<OracleErrors>,
}

pub fn reconstruct_cmd(problem_path: &Path, sub_path: Option<&Path>, c: &Common) -> Result<(), CliError> {
    let (input, problem) = load_problem(problem_path)?;
    let sub_input = sub_path.map(read_input).transpose()?;
    let grid = c.grid()?;
    let sub = inverse_subspectrum(&problem, sub_input.as_ref(), c)?;
    let rec = reconstruct(problem.p, problem.f.as_ref(), &sub, grid, &c.reconstruct_options())?;
    let oracle_errors = match oracle(&problem, grid)? {
        Some(o) => Some(rec.data.errors_against(&o)?.into()),
        None => None,
    };
    let inputs: Vec<&Input> = std::iter::once(&input).chain(sub_input.as_ref()).collect();
    let meta = c.meta("reconstruct", &inputs, PI, &[]);
    let out = OutDir::new(&c.out)?;
    let report = ReportOut { meta: &meta, subspectrum_size: sub.len(), report: &rec.report, oracle_errors };
    announce(&[out.json("cauchy_recovered.json", &cauchy_out(&meta, &rec.data))?, out.json("report.json", &report)?]);
    strict_check(c, &rec.report)
}

#[derive(Serialize)]
struct HlReportOut<'a> {
    meta: &'a Meta,
    exclusion_count: usize,
    dropped: usize,
    rows: usize,
    spectrum: Vec<[f64; 2]>,
    diagnostics: &'a BasisDiagnostics,
    report: &'a Report,
    oracle_errors: OracleErrors,
}

pub fn hl(two_sided_path: &Path, drop: usize, c: &Common) -> Result<(), CliError> {
    let input = read_input(two_sided_path)?;
    let wire: WireTwoSided = parse_json(&input)?;
    let (prob, given) = wire.validate()?;
    let grid = c.grid()?;
    let spectrum = match given {
        Some(s) => s,
        None => {
            let opts = HlSpectrumOptions { lo: c.search_lo, imag_band: c.imag_band, search: c.search(), ..Default::default() };
            hl_spectrum(&prob, c.eigs + drop, &opts)?
        }
    };
    let sigma_left = prob.sigma_left()?;
    let rec = hl_reconstruct(&prob.sigma_right()?, &prob.right, prob.p(), &spectrum, drop, grid, &c.reconstruct_options())?;
    let reference = extract_cauchy(&sigma_left, &prob.left, grid, &ExtractOptions::default())?.data;
    let errors = rec.reconstruction.data.errors_against(&reference)?;
    let meta = c.meta("hl", &[&input], 2.0 * PI, &[("drop", json!(drop))]);
    let out = OutDir::new(&c.out)?;
    let report = HlReportOut {
        meta: &meta,
        exclusion_count: rec.exclusion_count,
        dropped: rec.dropped,
        rows: spectrum.len() - drop,
        spectrum: pairs(spectrum.lambdas()),
        diagnostics: &rec.diagnostics,
        report: &rec.reconstruction.report,
        oracle_errors: errors.into(),
    };
    announce(&[
        out.json("cauchy_recovered.json", &cauchy_out(&meta, &rec.reconstruction.data))?,
        out.json("report.json", &report)?,
    ]);
    strict_check(c, &rec.reconstruction.report)
}

#[derive(Serialize)]
struct StabilityOut<'a> {
    meta: &'a Meta,
    levels: Vec<StabilitySummary>,
    /// Largest over smallest median `‖u − ũ‖/Ω` across the nonzero Ω levels.
    median_ratio_spread: Option<f64>,
}

pub fn stability(problem_path: &Path, omegas: &[f64], trials: usize, c: &Common) -> Result<(), CliError> {
    if omegas.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(CliError::Input("--omega values must be finite and nonnegative".into()));
    }
    let (input, problem) = load_problem(problem_path)?;
    let grid = c.grid()?;
    let sub = inverse_subspectrum(&problem, None, c)?;
    let base = StabilityBase {
        p: problem.p,
        f: Arc::clone(&problem.f),
        subspectrum: sub,
        grid,
        opts: c.reconstruct_options(),
    };
    let rows = stability_experiment(&base, omegas, trials, c.seed)?;
    let levels = summarize_stability(&rows);
    let medians: Vec<f64> = levels.iter().filter(|l| l.omega > 0.0).map(|l| l.median_ratio_u).collect();
    let spread = (medians.len() >= 2).then(|| {
        medians.iter().copied().fold(f64::NEG_INFINITY, f64::max) / medians.iter().copied().fold(f64::INFINITY, f64::min)
    });
    let meta = c.meta(
        "stability",
        &[&input],
        PI,
        &[("omega", json!(omegas)), ("trials", json!(trials)), ("seed", json!(c.seed))],
    );
    let out = OutDir::new(&c.out)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![num(r.omega), r.trial.to_string(), num(r.err_u), num(r.err_j), num(r.err_g), num(r.err_a)])
        .collect();
    let header = ["omega", "trial", "err_u", "err_J", "err_G", "err_A"];
    announce(&[
        out.csv("stability.csv", &meta, &header, &table)?,
        out.json("stability_summary.json", &StabilityOut { meta: &meta, levels, median_ratio_spread: spread })?,
    ]);
    Ok(())
}

#[derive(Serialize)]
struct ClassS {
    passes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct CurvePoint {
    n: usize,
    gram_cond: f64,
    min_sv: f64,
    max_sv: f64,
}

fn curve_points(curve: &[(usize, BasisDiagnostics)]) -> Vec<CurvePoint> {
    curve
        .iter()
        .map(|(n, d)| CurvePoint { n: *n, gram_cond: d.gram_cond, min_sv: d.min_sv, max_sv: d.max_sv })
        .collect()
}

#[derive(Serialize)]
struct DiagnoseOut<'a> {
    meta: &'a Meta,
    count: usize,
    class_s: ClassS,
    class_a: ClassA,
    sine_family: Vec<CurvePoint>,
    sine_family_riesz_like: bool,
    xi_identity_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    moment_curve: Option<Vec<CurvePoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    moment_riesz_like: Option<bool>,
}

/// Relative Gram-condition growth per doubling tolerated by the bounded-curve flag.
const RIESZ_GROWTH: f64 = 0.5;

/// Truncations 8, 16, 32, ... below `n`, then `n` itself.
fn prefixes(n: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = std::iter::successors(Some(8usize), |k| Some(k * 2)).take_while(|&k| k < n).collect();
    if n > 0 {
        ns.push(n);
    }
    ns
}

pub fn diagnose(path: &Path, c: &Common) -> Result<(), CliError> {
    let input = read_input(path)?;
    let value: serde_json::Value = parse_json(&input)?;
    let grid = c.grid()?;
    let (sub, problem) = if value.get("f").is_some() {
        let wire: WireProblem = serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", input.hash.name)))?;
        let problem = wire.validate()?;
        (inverse_subspectrum(&problem, None, c)?, Some(problem))
    } else if value.get("lambdas").is_some() {
        let wire: WireSubspectrum = serde_json::from_value(value).map_err(|e| CliError::Input(format!("{}: {e}", input.hash.name)))?;
        (wire.validate()?, None)
    } else {
        return Err(CliError::Input(format!("{}: neither a problem (\"f\") nor a subspectrum (\"lambdas\")", input.hash.name)));
    };
    let simple = sub.check_simple(SIMPLE_TOL);
    let class_s = ClassS { passes: simple.is_ok(), detail: simple.as_ref().err().map(|e| e.to_string()) };
    let ns = prefixes(sub.len());
    let sine: Vec<(usize, BasisDiagnostics)> =
        ns.iter().map(|&n| (n, sine_family_diagnostics(&sub.rhos()[..n], PI))).collect();
    let (moment_curve, moment_riesz_like) = match &problem {
        Some(p) if simple.is_ok() && !sub.is_empty() => {
            let system = build_moment_system(&sub, p.f.as_ref(), p.p, grid)?;
            // Gram of the rows in ℋ_p itself; a reduced basis would measure its own truncation.
            let curve = condition_curve(&system, UnknownBasis::Grid, &ns);
            (Some(curve_points(&curve)), Some(riesz_like(&curve, RIESZ_GROWTH)))
        }
        _ => (None, None),
    };
    let meta = c.meta("diagnose", &[&input], PI, &[]);
    let out = OutDir::new(&c.out)?;
    let diag = DiagnoseOut {
        meta: &meta,
        count: sub.len(),
        class_s,
        class_a: sub.class_a(10.0),
        sine_family_riesz_like: riesz_like(&sine, RIESZ_GROWTH),
        sine_family: curve_points(&sine),
        xi_identity_residual: xi_identity_residual(sub.rhos(), grid),
        moment_curve,
        moment_riesz_like,
    };
    announce(&[out.json("diagnostics.json", &diag)?]);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefixes_end_at_n() {
        assert_eq!(prefixes(40), vec![8, 16, 32, 40]);
        assert_eq!(prefixes(16), vec![8, 16]);
        assert_eq!(prefixes(5), vec![5]);
        assert_eq!(prefixes(0), Vec::<usize>::new());
    }
}
