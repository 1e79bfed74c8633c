//! `polylt`: Lieb-Thirring constants, delta-potential and discretised spectra,
//! and bound verification from the command line.
//!
//! Exit status: 0 when every verdict holds, 1 when a check fails, 2 on usage
//! or validation errors.

mod commands;
mod potential_csv;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "polylt", version, about = "Lieb-Thirring constants and spectra for (-Δ)^l + V")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Emit the full JSON report.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit a CSV table.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override the command's verdict tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for random ensembles.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Constant families for given (l, γ, d).
    Constants {
        #[arg(long)]
        l: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
    /// Negative spectrum of (-∂²)^l - Σ c_j δ(x - x_j).
    Delta {
        #[arg(long)]
        l: u32,
        /// Sites as `position:strength`, comma separated.
        #[arg(long, conflicts_with = "file")]
        sites: Option<String>,
        /// CSV file with header `position,strength`.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Points at which to evaluate the eigenfunctions, comma separated.
        #[arg(long)]
        eval: Option<String>,
    },
    /// Eigenvalue of the half-line biharmonic problem with free boundary.
    Halfline,
    /// Negative spectrum of the discretised operator for a potential CSV.
    Spectrum {
        #[arg(long)]
        potential: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        l: f64,
        /// Riesz exponent; defaults to the critical value 1 - d/(2l).
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, value_enum, default_value_t = SymbolKind::Full)]
        symbol: SymbolKind,
        /// Diagonal of A for the tensor symbol, comma separated.
        #[arg(long)]
        a: Option<String>,
        /// Compare against this theorem's bound.
        #[arg(long)]
        theorem: Option<String>,
    },
    /// Identity suite, random-well ensembles or the system bound.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        gamma: Option<f64>,
        /// Diagonal of A for the system suite, comma separated.
        #[arg(long, default_value = "1,4")]
        a: String,
    },
    /// Two-delta lower-bound witness scan.
    Counterexample {
        #[arg(long)]
        l: u32,
        /// Number of geometric couplings in (1, 10].
        #[arg(long, default_value_t = 64)]
        alphas: usize,
    },
    /// Coupling sweep of the Riesz-mean ratio for V = -depth·exp(-x²/width²).
    Weyl {
        #[arg(long)]
        l: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value = "1,4,16,64")]
        alphas: String,
        #[arg(long, default_value_t = 10.0)]
        half_width: f64,
        #[arg(long, default_value_t = 128)]
        points: usize,
        #[arg(long, default_value_t = 1.0)]
        depth: f64,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
    },
    /// Ky-Fan monotonicity of the kernel family and the symbol inequalities.
    Majorization {
        #[arg(long, default_value_t = 0.577_350_269_189_625_8)]
        b: f64,
        #[arg(long, default_value = "2,1,0.5,0.25,0")]
        eps: String,
        #[arg(long, default_value_t = 161)]
        points: usize,
        #[arg(long, default_value_t = 10.0)]
        half_width: f64,
        #[arg(long, value_enum, default_value_t = Profile::Gaussian)]
        profile: Profile,
        /// Grid size per axis for the symbol inequalities.
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SymbolKind {
    Full,
    Separable,
    Tensor,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Ensemble,
    System,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Profile {
    Gaussian,
    Lorentzian,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            if cli.global.json {
                println!("{}", report::error_json(&e.to_string()));
            }
            return ExitCode::from(e.exit_code());
        }
    };
    let rendered = if cli.global.json {
        report.to_json()
    } else if cli.global.csv {
        match report.to_csv() {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    } else {
        report.to_text()
    };
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
