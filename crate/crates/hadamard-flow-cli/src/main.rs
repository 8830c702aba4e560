//! Binary entry point: flag handling, configuration resolution, dispatch.
//!
//! Output protocol: one JSON document on stdout (pretty by default, compact
//! with `--json`), human-readable errors on stderr, exit code per outcome.
//! The truncation order resolves flag over `HADAMARD_FLOW_ORDER` over 256.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

mod commands;
mod parser;

use commands::{CliError, CommandOutput, RunConfig, EXIT_USAGE};

const ORDER_ENV: &str = "HADAMARD_FLOW_ORDER";
const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "hadamard-flow",
    version,
    about = "Diagnostics for coefficientwise multiplier semigroups on power series"
)]
struct Cli {
    /// Truncation order N (default 256; HADAMARD_FLOW_ORDER overrides the default)
    #[arg(long, global = true, value_name = "N")]
    order: Option<usize>,
    /// Real-axis tolerance for pole classification
    #[arg(long, global = true, value_name = "EPS")]
    tol: Option<f64>,
    /// Print compact single-line JSON
    #[arg(long, global = true)]
    json: bool,
    /// Write plot samples as CSV (mellin only)
    #[arg(long, global = true, value_name = "PATH")]
    emit_plot_data: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide generation for a symbol and print the verdict with its certificate
    Classify {
        /// Operator expression, e.g. "euler: i*theta^2 + (3/2)*theta"
        expr: String,
    },
    /// Apply the evolution at time t to an input coefficient sequence
    Evolve {
        expr: String,
        /// Evolution time (negative times need a group generator)
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// "exp", "geom(ratio)", or a path to a JSON coefficient array
        #[arg(long, default_value = "exp")]
        input: String,
    },
    /// Locate poles of the evolved coefficient series
    Poles {
        expr: String,
        /// Evolution time (ignored for explicit seq: symbols)
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
    },
    /// Run the full check bundle; exit 0 only if every section passes
    Verify { expr: String },
    /// Sample the Mellin-side witness seminorm and its a-priori bound
    Mellin {
        expr: String,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        /// Exhaustion region index (starts at 1)
        #[arg(long, default_value_t = 1)]
        j: usize,
        /// Decay-rate parameter of the seminorm weight
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        a: f64,
    },
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let order = match cli.order {
        Some(n) => n,
        None => match std::env::var(ORDER_ENV) {
            Ok(text) => text.parse::<usize>().map_err(|_| {
                CliError::Usage(format!("{ORDER_ENV}={text:?} is not a nonnegative integer"))
            })?,
            Err(_) => hadamard_flow::DEFAULT_TRUNCATION_ORDER,
        },
    };
    if order == 0 {
        return Err(CliError::Usage(
            "the truncation order must be at least 1".into(),
        ));
    }
    let tol = cli.tol.unwrap_or(DEFAULT_TOLERANCE);
    if !tol.is_finite() || tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "the tolerance must be a positive number, got {tol}"
        )));
    }
    Ok(RunConfig {
        order,
        tol,
        plot_path: cli.emit_plot_data.clone(),
    })
}

fn dispatch(command: &Command, config: &RunConfig) -> Result<CommandOutput, CliError> {
    match command {
        Command::Classify { expr } => commands::cmd_classify(expr),
        Command::Evolve { expr, t, input } => commands::cmd_evolve(expr, *t, input, config),
        Command::Poles { expr, t } => commands::cmd_poles(expr, *t, config),
        Command::Verify { expr } => commands::cmd_verify(expr, config),
        Command::Mellin { expr, t, j, a } => commands::cmd_mellin(expr, *t, *j, *a, config),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(EXIT_USAGE);
        }
    };
    let config = match resolve_config(&cli) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("{}", e.render());
            std::process::exit(e.exit_code());
        }
    };
    if config.plot_path.is_some() && !matches!(cli.command, Command::Mellin { .. }) {
        eprintln!("note: --emit-plot-data only takes effect with the mellin command");
    }
    match dispatch(&cli.command, &config) {
        Ok(output) => {
            let rendered = if cli.json {
                serde_json::to_string(&output.document)
            } else {
                serde_json::to_string_pretty(&output.document)
            }
            .expect("command documents are valid JSON");
            println!("{rendered}");
            std::process::exit(output.exit_code);
        }
        Err(e) => {
            eprintln!("{}", e.render());
            std::process::exit(e.exit_code());
        }
    }
}
