use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use damplab::channels::{ChannelKind, ChannelSpec, Side};
use damplab::sweeper::{
    cmd_evolve, cmd_fig1, cmd_verify, emit, exit, exit_code, Fig1Config, Format, StateRequest, VerifyConfig, TOL_ENV,
};
use damplab::{Error, TOL_ORACLE};

#[derive(Parser, Debug)]
#[command(
    author,
    version,
    about = "Coherence of two-qubit states under repeated damping channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve one state and report its coherence trajectory.
    Evolve {
        /// m1, m2, m3, bell, incoco, coinco, random or file:<path>
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 0.5)]
        p0: f64,
        /// Phase of the first maximally coherent part (incoco/coinco).
        #[arg(long, default_value_t = 0.0)]
        theta0: f64,
        /// Phase of the second maximally coherent part (incoco/coinco).
        #[arg(long, default_value_t = 0.0)]
        theta1: f64,
        /// ad (amplitude damping) or pd (phase damping)
        #[arg(long, default_value = "ad")]
        channel: String,
        /// Damping strength, γ or λ.
        #[arg(long)]
        param: f64,
        #[arg(long, default_value = "left")]
        side: Side,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value = "table")]
        format: Format,
        /// Seed for `--state random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep p0 for the m2 and m3 families and write the coherence as CSV.
    Fig1 {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.5, 0.8])]
        gammas: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 101)]
        p0_steps: usize,
        #[arg(long, default_value = "fig1.csv")]
        out: PathBuf,
    },
    /// Run the randomized closed-form and frozen-coherence checks.
    Verify {
        /// Number of random states.
        #[arg(long, default_value_t = 1000)]
        seeds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn tol_oracle() -> Result<f64, Error> {
    match std::env::var(TOL_ENV) {
        Ok(v) => v.trim().parse::<f64>().map_err(|e| Error::Parse {
            location: TOL_ENV.into(),
            message: e.to_string(),
        }),
        Err(_) => Ok(TOL_ORACLE),
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Evolve {
            state,
            p0,
            theta0,
            theta1,
            channel,
            param,
            side,
            n,
            format,
            seed,
            out,
        } => {
            let kind = ChannelKind::from_code(&channel, param)?;
            let request = StateRequest {
                id: state,
                p0,
                theta0,
                theta1,
                seed,
            };
            let evolution = cmd_evolve(&request, ChannelSpec::new(kind, side, n))?;
            emit(&evolution.render(format)?, out.as_deref())?;
            Ok(exit::SUCCESS)
        }
        Command::Fig1 {
            gammas,
            n,
            p0_steps,
            out,
        } => {
            let rows = cmd_fig1(&Fig1Config { gammas, n, p0_steps }, &out)?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
            Ok(exit::SUCCESS)
        }
        Command::Verify { seeds, seed, out } => {
            let cfg = VerifyConfig {
                seeds,
                base_seed: seed,
                tol_oracle: tol_oracle()?,
            };
            let report = cmd_verify(&cfg)?;
            emit(&report.render(), out.as_deref())?;
            if report.passed() {
                Ok(exit::SUCCESS)
            } else {
                for failed in report.failures() {
                    eprintln!("invariant failed: {}", failed.name);
                }
                Ok(exit::INVARIANT)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli).unwrap_or_else(|err| {
        eprintln!("error: {err}");
        exit_code(&err)
    });
    ExitCode::from(code as u8)
}
