use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qgraph_cli::{execute, load_config, CliError, Command, Format, Overrides, RunConfig};

const COLUMNS: &str = "\
CSV columns (reals printed with 15 significant digits):
  interval    lambda,c,cp,s,sp
  dispersion  with command-params.lambda: theta_1..theta_n,phi_re,phi_im,phi_dephased
              with command-params.theta:  lambda,kind,order
  bands       record,lambda_lo,lambda_hi,edge_kind_lo,edge_kind_hi
              (record is band, point or touching)
  surface     theta_1..theta_n,count,lambda_1..lambda_K (row-major theta,
              first component slowest; short rows end in empty cells)
  tilings     theta_1,theta_2,count,lambda_1..lambda_K
  verify      check,trials,passed,max_error,tolerance,status

Exit codes: 0 success, 1 usage or config error, 2 numerical failure,
3 verify-suite failure.";

/// Band structure of periodic Schrödinger operators on quantum graphs.
#[derive(Debug, Parser)]
#[command(name = "qgraph", version, after_long_help = COLUMNS, after_help = COLUMNS)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON configuration file (optional for `verify`).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Upper end of the lambda window.
    #[arg(long, allow_negative_numbers = true)]
    lambda_max: Option<f64>,
    /// Theta-grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qgraph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let mut cfg = match (&args.config, args.command) {
        (Some(p), _) => load_config(p)?,
        (None, Command::Verify) => RunConfig::default(),
        (None, c) => {
            return Err(CliError::Usage(format!(
                "`{}` needs --config <path>",
                c.name()
            )))
        }
    };
    cfg.apply(&Overrides {
        output: args.output.clone(),
        format: args.format,
        lambda_max: args.lambda_max,
        grid: args.grid,
    })?;
    let outcome = execute(args.command, &cfg, &mut std::io::stdout().lock())?;
    if let Some(s) = &outcome.summary {
        eprintln!("{s}");
    }
    match outcome.failed_checks {
        Some((failed, checks)) => Err(CliError::VerifyFailed { failed, checks }),
        None => Ok(()),
    }
}
