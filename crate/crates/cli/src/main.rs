//! `gauss-nmr`: factor checks with truncated Gauss sums and simulated NMR
//! pulse trains.

mod commands;
mod output;

use std::io;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};
use gauss_nmr::{Propagation, DEFAULT_THETA, DEFAULT_THRESHOLD};

use commands::{CheckArgs, FScanArgs, Failure, NmrArgs, SweepArgs, EXIT_USAGE};
use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "gauss-nmr",
    version,
    about = "Gauss-sum factor checks and NMR pulse-train simulation"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,

    /// Omit the elapsed-time field.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check one trial factor. Exit status 0 = factor, 1 = non-factor.
    Check {
        n: u64,
        l: u64,
        /// Truncation parameter; defaults to ceil(N^(1/4)).
        #[arg(value_name = "M")]
        m: Option<u64>,
        /// Exponent power.
        #[arg(value_name = "J", default_value_t = 2)]
        j: u32,
        /// Magnitude threshold used for the diagnostic cross-check.
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Use the randomised sum with this many draws (needs --seed).
        #[arg(long, requires = "seed")]
        samples: Option<usize>,
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
    },
    /// Check every trial in [L_MIN, L_MAX].
    Sweep {
        n: u64,
        l_min: u64,
        l_max: u64,
        #[arg(long)]
        primes_only: bool,
        /// Fixed truncation; defaults to ceil(N^(1/4)).
        #[arg(long = "M", value_name = "M")]
        m: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Simulate the differential-excitation pulse train for one trial.
    #[command(group(ArgGroup::new("propagation").args(["exact", "first_order"])))]
    Nmr {
        n: u64,
        l: u64,
        /// Flip angle per pulse, radians.
        #[arg(long, default_value_t = DEFAULT_THETA, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long = "M", value_name = "M")]
        m: Option<u64>,
        /// Time-ordered product of the pulses (default).
        #[arg(long)]
        exact: bool,
        /// Single combined rotation instead of the ordered product.
        #[arg(long)]
        first_order: bool,
        /// Also report the distance between the two propagators.
        #[arg(long)]
        compare: bool,
    },
    /// Scan the continuous-parameter sum over an f grid.
    #[command(allow_negative_numbers = true)]
    Fscan {
        n: u64,
        f_min: f64,
        f_max: f64,
        step: f64,
        #[arg(long = "M", value_name = "M")]
        m: Option<u64>,
    },
    /// List ghost factors at a small truncation and their suppression.
    Ghosts {
        n: u64,
        #[arg(long = "M-small", value_name = "M", default_value_t = 1)]
        m_small: u64,
        #[arg(long, default_value_t = 0.95)]
        threshold: f64,
    },
    /// Prime factors, ascending.
    Factorize { n: u64 },
    /// Count primes up to X.
    Primes { x: u64 },
}

fn run(command: Command) -> Result<output::Report, Failure> {
    match command {
        Command::Check {
            n,
            l,
            m,
            j,
            threshold,
            samples,
            seed,
        } => commands::check(CheckArgs {
            n,
            l,
            m,
            j,
            threshold,
            sample: samples.zip(seed),
        }),
        Command::Sweep {
            n,
            l_min,
            l_max,
            primes_only,
            m,
            threshold,
        } => commands::sweep_cmd(SweepArgs {
            n,
            l_min,
            l_max,
            primes_only,
            m,
            threshold,
        }),
        Command::Nmr {
            n,
            l,
            theta,
            m,
            exact: _,
            first_order,
            compare,
        } => commands::nmr(NmrArgs {
            n,
            l,
            theta,
            m,
            propagation: if first_order {
                Propagation::FirstOrder
            } else {
                Propagation::Exact
            },
            compare,
        }),
        Command::Fscan {
            n,
            f_min,
            f_max,
            step,
            m,
        } => commands::fscan(FScanArgs {
            n,
            f_min,
            f_max,
            step,
            m,
        }),
        Command::Ghosts {
            n,
            m_small,
            threshold,
        } => commands::ghosts(n, m_small, threshold),
        Command::Factorize { n } => commands::factorize_cmd(n),
        Command::Primes { x } => commands::primes(x),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let start = Instant::now();
    match run(cli.command) {
        Ok(report) => {
            let elapsed = (!cli.no_timing).then(|| start.elapsed().as_secs_f64() * 1e3);
            if let Err(e) = output::emit(
                &report,
                cli.format,
                elapsed,
                &mut io::stdout().lock(),
                &mut io::stderr(),
            ) {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            if code == EXIT_USAGE {
                eprintln!("run with --help for usage");
            }
            ExitCode::from(code as u8)
        }
    }
}
