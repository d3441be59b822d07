use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ctsim_cli::{
    emit_csv, parse_angle, reproduce_figure, run_sweep, run_verify, CliError, FigureId, RGrid,
    SweepConfig,
};
use ctsim_core::{Encoding, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "ctsim", version, about = "Controlled teleportation through lossy fibers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Vsp,
    Coherent,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F_c, F_nc, C_p and η (optionally max |S_v|) on an r grid and write CSV.
    Sweep {
        #[arg(long, value_enum)]
        encoding: EncodingArg,
        /// Comma-separated angles in [0, π/2]; accepts forms like `pi/6`.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_theta)]
        theta: Vec<f64>,
        /// Comma-separated coherent amplitudes (coherent encoding only).
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        r_start: f64,
        #[arg(long, default_value_t = 1.0)]
        r_stop: f64,
        #[arg(long, default_value_t = 0.01)]
        r_step: f64,
        /// Also maximize the Svetlichny function at every point.
        #[arg(long)]
        svetlichny: bool,
        /// Random starts of the Svetlichny maximization.
        #[arg(long, default_value_t = 64)]
        n_starts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reproduce one figure: a CSV and an SVG per panel.
    Figure {
        #[arg(long, value_enum)]
        id: FigureArg,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the oracle-equivalence checks and print PASS/FAIL per check.
    Verify,
}

fn parse_theta(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Sweep {
            encoding,
            theta,
            alpha,
            r_start,
            r_stop,
            r_step,
            svetlichny,
            n_starts,
            seed,
            out,
        } => {
            let encoding = match encoding {
                EncodingArg::Vsp => Encoding::Vsp,
                EncodingArg::Coherent => Encoding::Coherent,
            };
            let cfg = SweepConfig {
                r_grid: RGrid {
                    start: r_start,
                    stop: r_stop,
                    step: r_step,
                },
                svetlichny,
                n_starts,
                seed,
                out_path: Some(out.clone()),
                ..SweepConfig::new(encoding, theta, alpha)
            };
            let records = run_sweep(&cfg)?;
            emit_csv(&records, &out)?;
            eprintln!("wrote {} records to {}", records.len(), out.display());
            Ok(true)
        }
        Command::Figure { id, out_dir, seed } => {
            let id = match id {
                FigureArg::Fig2 => FigureId::Fig2,
                FigureArg::Fig3 => FigureId::Fig3,
                FigureArg::Fig4 => FigureId::Fig4,
                FigureArg::Fig5 => FigureId::Fig5,
                FigureArg::Fig6 => FigureId::Fig6,
            };
            for path in reproduce_figure(id, &out_dir, seed)? {
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Verify => {
            let mut all = true;
            for outcome in run_verify() {
                let tag = if outcome.passed { "PASS" } else { "FAIL" };
                println!("{tag}  {}  [{}]", outcome.name, outcome.detail);
                all &= outcome.passed;
            }
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
