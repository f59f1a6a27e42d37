//! Command-line front end: `paramrx single` reproduces the single-trial
//! training traces, `paramrx sweep` runs the Monte Carlo SER-vs-SNR grid.
//! Exit codes: 0 success, 1 usage error, 2 runtime/IO error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use paramrx_cli::config::{build_spec, Mode, Overrides};
use paramrx_cli::run::{run_monte_carlo, run_single_trial};
use paramrx_cli::AppError;

/// Joint channel estimation and symbol detection experiments.
///
/// Defaults reproduce the reference setup: 200-symbol 16QAM frames with one
/// pilot in ten, the standard impairment chain (IQ imbalance at both ends,
/// 5-tap FIR, Wiener phase noise), lambda = 0.001, ADAM with learning rate
/// 0.001, soft-threshold spread starting at 1.
#[derive(Parser)]
#[command(name = "paramrx", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train every method once on one shared trial and write per-method
    /// trace CSVs (default: SNR 20 dB, 20000 iterations).
    Single(SingleArgs),
    /// Monte Carlo mean-SER sweep over an SNR grid (default: 0:25:5 dB,
    /// 100 trials per SNR, 10000 iterations).
    Sweep(SweepArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat TOML experiment file; flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Training iterations per run [default: 20000 single, 10000 sweep].
    #[arg(long, value_name = "N")]
    iterations: Option<usize>,
    /// Comma-separated methods: simple, pg_<period>, proposed
    /// [default: simple,pg_500,pg_1000,pg_2000,proposed].
    #[arg(long, value_name = "LIST")]
    methods: Option<String>,
    /// Master seed for all stochastic draws [default: 0].
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory for CSV files [default: out].
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Trace cadence in iterations [default: 100].
    #[arg(long, value_name = "N")]
    trace_every: Option<usize>,
}

#[derive(Args)]
struct SingleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Signal-to-noise ratio in dB [default: 20].
    #[arg(long, value_name = "DB")]
    snr: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// SNR grid: start:stop:step (inclusive) or a comma list of dB values
    /// [default: 0:25:5].
    #[arg(long, value_name = "SPEC")]
    snr_list: Option<String>,
    /// Monte Carlo trials per SNR point [default: 100].
    #[arg(long, value_name = "N")]
    trials: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders --help/--version through the same error path.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Runtime(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Single(args) => {
            let ov = Overrides {
                config: args.common.config,
                snr: args.snr,
                iterations: args.common.iterations,
                methods: args.common.methods,
                seed: args.common.seed,
                out: args.common.out,
                trace_every: args.common.trace_every,
                ..Default::default()
            };
            let spec = build_spec(Mode::Single, &ov)?;
            let outcomes = run_single_trial(&spec)?;
            for o in outcomes {
                let flag = if o.diverged { " (diverged)" } else { "" };
                println!(
                    "{}: final SER {}{} -> {}",
                    o.method,
                    o.final_ser,
                    flag,
                    o.csv_path.display()
                );
            }
            Ok(())
        }
        Command::Sweep(args) => {
            let ov = Overrides {
                config: args.common.config,
                snr_list: args.snr_list,
                iterations: args.common.iterations,
                trials: args.trials,
                methods: args.common.methods,
                seed: args.common.seed,
                out: args.common.out,
                trace_every: args.common.trace_every,
                ..Default::default()
            };
            let spec = build_spec(Mode::Sweep, &ov)?;
            let summary = run_monte_carlo(&spec)?;
            println!(
                "swept {} SNR points x {} trials x {} methods -> {}",
                summary.snr_db.len(),
                spec.trials_per_snr,
                summary.methods.len(),
                summary.csv_path.display()
            );
            if summary.divergent_runs > 0 {
                println!("{} run(s) diverged and scored SER 1", summary.divergent_runs);
            }
            Ok(())
        }
    }
}
