use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use prodlab::cli::{
    cmd_conjecture, cmd_eval, cmd_limit, cmd_verify, parse_base_range, CmdOutcome, LimitMethod,
    OutputFormat, RunConfig,
};
use prodlab::numerics::parse_decimal_or_fraction;

/// Define, evaluate, and cross-verify infinite products of Wallis and
/// Catalan type.
#[derive(Parser)]
#[command(name = "prodlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Evaluation precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    precision: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Gamma,
    Extrapolate,
    Blocks,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a finite partial product (exact for periodic products).
    Eval {
        /// Inline specification or path to a .prod file.
        spec: String,
        /// Number of complete periods (periodic products).
        #[arg(long)]
        periods: Option<u64>,
        /// Number of blocks (block products).
        #[arg(long)]
        blocks: Option<u64>,
        /// Number of individual fractions in printed order (periodic
        /// products; finer grained than --periods).
        #[arg(long)]
        fractions: Option<u64>,
    },
    /// Evaluate the limit of an infinite product.
    Limit {
        /// Inline specification or path to a .prod file.
        spec: String,
        /// gamma | extrapolate | blocks.
        #[arg(long)]
        method: MethodArg,
        /// Period budget for the extrapolation method.
        #[arg(long)]
        periods: Option<u64>,
        /// Tail tolerance for the blocks method (fraction or decimal).
        #[arg(long)]
        tol: Option<String>,
    },
    /// Verify a product identity claim.
    Verify {
        /// Inline claim or path to a .claim file.
        claim: String,
        /// Numeric fallback tolerance (fraction or decimal).
        #[arg(long)]
        tol: Option<String>,
    },
    /// Estimate general-base limits and search for closed forms.
    Conjecture {
        /// Base or inclusive base range, e.g. `3` or `2..5`.
        #[arg(long)]
        k: String,
        /// Blocks evaluated per base.
        #[arg(long)]
        blocks: Option<u64>,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn run(cli: Cli) -> CmdOutcome {
    let config = RunConfig {
        precision: cli.precision,
        format: match cli.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Text => OutputFormat::Text,
        },
    };
    if config.precision < 8 {
        return CmdOutcome {
            stdout: String::new(),
            stderr: "precision must be at least 8 bits\n".into(),
            exit_code: 2,
        };
    }
    let parse_tol = |tol: &Option<String>| -> Result<Option<prodlab::Rational>, CmdOutcome> {
        match tol {
            None => Ok(None),
            Some(s) => match parse_decimal_or_fraction(s) {
                Some(r) if prodlab::numerics::is_positive(&r) => Ok(Some(r)),
                _ => Err(CmdOutcome {
                    stdout: String::new(),
                    stderr: format!("invalid tolerance `{s}`\n"),
                    exit_code: 2,
                }),
            },
        }
    };
    match cli.command {
        Command::Eval {
            spec,
            periods,
            blocks,
            fractions,
        } => cmd_eval(&spec, periods, blocks, fractions, &config),
        Command::Limit {
            spec,
            method,
            periods,
            tol,
        } => {
            let tol = match parse_tol(&tol) {
                Ok(t) => t,
                Err(out) => return out,
            };
            let method = match method {
                MethodArg::Gamma => LimitMethod::Gamma,
                MethodArg::Extrapolate => LimitMethod::Extrapolate,
                MethodArg::Blocks => LimitMethod::Blocks,
            };
            cmd_limit(&spec, method, periods, tol, &config)
        }
        Command::Verify { claim, tol } => {
            let tol = match parse_tol(&tol) {
                Ok(t) => t,
                Err(out) => return out,
            };
            cmd_verify(&claim, tol, &config)
        }
        Command::Conjecture { k, blocks, out } => {
            let Some(bases) = parse_base_range(&k) else {
                return CmdOutcome {
                    stdout: String::new(),
                    stderr: format!("invalid base range `{k}`; expected K or A..B\n"),
                    exit_code: 2,
                };
            };
            let outcome = cmd_conjecture(&bases, blocks, &config);
            if outcome.exit_code == 0 {
                if let Some(path) = out {
                    if let Err(e) = std::fs::write(&path, &outcome.stdout) {
                        return CmdOutcome {
                            stdout: outcome.stdout,
                            stderr: format!("cannot write {}: {e}\n", path.display()),
                            exit_code: 3,
                        };
                    }
                }
            }
            outcome
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli);
    print!("{}", outcome.stdout);
    let _ = std::io::stdout().flush();
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.exit_code as u8)
}
