//! `gaussmet`: bound curves, seeded scatter sweeps, single-state averaged
//! QFI, classical estimation demos, and Fock-oracle verification.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.

mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "gaussmet", version, about = "Gaussian-state metrology toolkit")]
struct Cli {
    /// Worker threads for sweeps (0 = automatic). Falls back to the
    /// GAUSSMET_THREADS environment variable.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate all analytic bound curves on an n_A grid.
    Bounds {
        /// Largest mode-A photon number on the grid.
        #[arg(long = "n-max")]
        n_max: f64,
        /// Number of grid points (>= 2), evenly spaced on [0, n_max].
        #[arg(long, default_value_t = 41)]
        points: usize,
        /// Output CSV path.
        #[arg(long)]
        out: std::path::PathBuf,
    },
    /// Sample a state family and tabulate (n_A, averaged QFI, E_N, coherence,
    /// purity) per state. Exits 0 only when no row is flagged.
    Sweep {
        /// Family name: general-1mode, general-2mode, separable-standard,
        /// discordant, entangled-pure, coherent, thermal, squeezed-pure.
        #[arg(long)]
        family: String,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Theta quadrature nodes (power of two, >= 16).
        #[arg(long, default_value_t = 128)]
        nodes: usize,
        /// Squeezing offset of the Bures finite difference.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        /// Output CSV path.
        #[arg(long)]
        out: std::path::PathBuf,
        /// Also dump the sampled states as flat text records, in state-id order.
        #[arg(long = "dump-states")]
        dump_states: Option<std::path::PathBuf>,
    },
    /// Averaged QFI of a single state read from a flat text record.
    Qfi {
        #[arg(long = "state-file")]
        state_file: std::path::PathBuf,
        #[arg(long, default_value_t = 128)]
        nodes: usize,
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        /// Theta-resolved CSV: (state_id, n_A, theta, H_theta).
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Summary CSV: (state_id, n_A, avg_qfi, convergence_delta).
        #[arg(long = "summary-out")]
        summary_out: Option<std::path::PathBuf>,
    },
    /// Maximum-likelihood location experiment against the Cramer-Rao bound.
    Classical {
        #[arg(long)]
        sigma: f64,
        #[arg(long = "n-samples")]
        n_samples: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path: per-block rows plus an aggregate row.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Cross-check the Gaussian formulas against the Fock-space referee.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

/// CLI failure classes, mapped onto the documented exit codes.
enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<gaussmet_core::Error> for CliError {
    fn from(e: gaussmet_core::Error) -> Self {
        use gaussmet_core::Error as E;
        match e {
            E::InvalidInput(_) | E::Parse { .. } | E::AcceptanceRate { .. } => {
                CliError::Usage(e.to_string())
            }
            E::Numerical(_) | E::Truncation { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    if let Err(e) = setup_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }

    let result = match cli.command {
        Command::Bounds { n_max, points, out } => commands::bounds(n_max, points, &out),
        Command::Sweep {
            family,
            count,
            seed,
            nodes,
            delta,
            out,
            dump_states,
        } => commands::sweep(&family, count, seed, nodes, delta, &out, dump_states.as_deref()),
        Command::Qfi {
            state_file,
            nodes,
            delta,
            out,
            summary_out,
        } => commands::qfi(&state_file, nodes, delta, out.as_deref(), summary_out.as_deref()),
        Command::Classical {
            sigma,
            n_samples,
            trials,
            seed,
            out,
        } => commands::classical(sigma, n_samples, trials, seed, out.as_deref()),
        Command::Verify { level } => commands::verify(level == VerifyLevel::Full),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn setup_threads(flag: Option<usize>) -> Result<(), String> {
    let n = flag.or_else(|| {
        std::env::var("GAUSSMET_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    match n {
        None | Some(0) => Ok(()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string()),
    }
}
