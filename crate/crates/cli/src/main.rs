//! `ffp`: exact period valuations, local zeta factors and the Carlitz
//! product formula from the command line.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "ffp", version, about = "Exact periods of CM local shtukas over function fields")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Carlitz periods at ∞ and at the finite places, and the regularized
    /// product formula.
    Carlitz {
        #[arg(long)]
        q: u64,
        /// Places of degree up to this bound are computed directly.
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        /// Number of `ℓ_n` past `ℓ_0`, and of factors in the ∞-adic product.
        #[arg(long, default_value_t = 2)]
        depth: u32,
    },
    /// Valuations of `Ω(E_v, φ, ψ)` from the series, the closed form and the
    /// local L-factor.
    Omega {
        /// Path to `cm.json`.
        #[arg(long)]
        cm: PathBuf,
        /// Embedding `"(i,j,k)"`.
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// `Z_v(a, s)` in `x = q_v^{-s}`, its values at `s = 0, 1` and `μ_Art,v(a)`.
    Zv {
        /// Path to `galois.json`.
        #[arg(long, conflicts_with = "cm")]
        galois: Option<PathBuf>,
        /// Path to `cm.json`; uses `a_{ψ,φ}` on the tame datum of `i(ψ)`.
        #[arg(long, requires_all = ["phi", "psi"])]
        cm: Option<PathBuf>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        psi: Option<String>,
    },
    /// The regularized sum over the finite places.
    Regularize {
        /// Path to the JSON configuration.
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let config = ffp_core::TowerConfig::from_env();
    match &cli.command {
        Command::Carlitz { q, max_degree, depth } => commands::carlitz(*q, *max_degree, *depth, config),
        Command::Omega { cm, phi, psi, depth } => commands::omega(cm, phi, psi, *depth, config),
        Command::Zv { galois, cm, phi, psi } => match (galois, cm) {
            (Some(g), None) => commands::zv_galois(g, config),
            (None, Some(c)) => commands::zv_cm(c, phi.as_deref().unwrap_or(""), psi.as_deref().unwrap_or(""), config),
            _ => Err(Failure::input("pass either --galois or --cm with --phi and --psi")),
        },
        Command::Regularize { config: path } => commands::regularize(path),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = match cli.format {
                Format::Table => out.table,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable") + "\n",
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().write_all(text.as_bytes());
            if let Some(msg) = &out.check_failure {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
