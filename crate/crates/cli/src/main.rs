//! `subspec`: forward spectra, inverse reconstruction from subspectra, the
//! half-inverse driver, stability experiments, and subspectrum diagnostics.
//!
//! Exit codes: 0 success, 1 write failure, 2 invalid input, 3 solver failure,
//! 4 non-unique reconstruction under `--strict`.

mod commands;
mod error;
mod output;
mod schema;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use commands::{BasisChoice, Common};

#[derive(Parser)]
#[command(name = "subspec", version, about = "Inverse Sturm-Liouville problems from subspectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Cells of the uniform grid on [0, π] for Cauchy data.
    #[arg(long, default_value_t = 128)]
    grid: usize,
    /// Number of eigenvalues to compute when none are given.
    #[arg(long, default_value_t = 40)]
    eigs: usize,
    /// Root acceptance tolerance (forward) or relative rank cutoff (inverse).
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for the stability experiment.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Exit with code 4 when the reconstruction is flagged non-unique.
    #[arg(long)]
    strict: bool,
    /// Tikhonov parameter μ of the moment least-squares problem.
    #[arg(long, default_value_t = 0.0)]
    reg: f64,
    /// Expansion of the unknown kernels.
    #[arg(long, value_enum, default_value_t = BasisChoice::Legendre)]
    basis: BasisChoice,
    /// Legendre modes per kernel for `--basis legendre`.
    #[arg(long, default_value_t = 12)]
    kernel_modes: usize,
    /// Half-width of the strip |Im λ| searched for complex eigenvalues.
    #[arg(long, default_value_t = 4.0)]
    imag_band: f64,
    /// Lower end of the eigenvalue search in Re λ.
    #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
    search_lo: f64,
}

impl From<CommonArgs> for Common {
    fn from(a: CommonArgs) -> Self {
        Common {
            grid: a.grid,
            eigs: a.eigs,
            tol: a.tol,
            seed: a.seed,
            out: a.out,
            strict: a.strict,
            reg: a.reg,
            basis: a.basis,
            kernel_modes: a.kernel_modes,
            imag_band: a.imag_band,
            search_lo: a.search_lo,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, Cauchy data and Weyl samples of a problem: spectrum.json, cauchy.json.
    Forward {
        problem: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Cauchy data from a subspectrum: cauchy_recovered.json, report.json.
    Reconstruct {
        problem: PathBuf,
        /// Subspectrum file; defaults to the problem's own or computed eigenvalues.
        subspectrum: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Left-half Cauchy data of a two-sided problem from its spectrum.
    Hl {
        two_sided: PathBuf,
        /// Eigenvalues removed from the start of the spectrum.
        #[arg(long, default_value_t = 0)]
        drop: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reconstruction errors under perturbed subspectra: stability.csv, stability_summary.json.
    Stability {
        problem: PathBuf,
        /// Perturbation sizes Ω.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 1e-2])]
        omega: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Class flags, condition curves and the ξ-identity residual: diagnostics.json.
    Diagnose {
        /// A subspectrum or a problem file.
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Forward { problem, common } => commands::forward(&problem, &common.into()),
        Command::Reconstruct { problem, subspectrum, common } => {
            commands::reconstruct_cmd(&problem, subspectrum.as_deref(), &common.into())
        }
        Command::Hl { two_sided, drop, common } => commands::hl(&two_sided, drop, &common.into()),
        Command::Stability { problem, omega, trials, common } => commands::stability(&problem, &omega, trials, &common.into()),
        Command::Diagnose { input, common } => commands::diagnose(&input, &common.into()),
    };
    if let Err(e) = result {
        eprintln!("subspec: {e}");
        std::process::exit(e.exit_code());
    }
}
