use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lamsym_cli::analyze::{cmd_analyze, render_text, AnalyzeOptions};
use lamsym_cli::commands::{
    cmd_check_integral, cmd_corpus, cmd_drift, cmd_equiv, cmd_multiplier, cmd_raise,
    render_table,
};
use lamsym_cli::corpus::parse_floats;
use lamsym_cli::error::{CliError, EXIT_OK, EXIT_VERIFY};

#[derive(Parser)]
#[command(name = "lamsym", version, about = "λ-symmetries and first integrals of second-order ODEs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: λ_J, λ-symmetries, invariants, reduction and first integrals.
    Analyze {
        /// The equation, e.g. "y'' = -y'^2/y".
        ode: String,
        /// Extra factor for the symmetry ansatz; repeatable.
        #[arg(long = "basis")]
        basis: Vec<String>,
        /// Extra factor for the invariant ansatz; repeatable.
        #[arg(long = "invariant-basis")]
        invariant_basis: Vec<String>,
        /// Exponent window of the polynomial part of the ansatz.
        #[arg(long)]
        window: Option<i32>,
        #[arg(long)]
        json: bool,
    },
    /// Runs the embedded example corpus.
    Corpus {
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Decides whether two λ-symmetries, each "tau, eta, lambda", are equivalent.
    Equiv {
        ode: String,
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
    },
    /// Verifies that an expression is a first integral.
    CheckIntegral { ode: String, expr: String },
    /// Integrates the equation with RK4 and reports the relative drift of an integral.
    Drift {
        ode: String,
        expr: String,
        /// Specialization `name=expr` for a parameter or a free function; repeatable.
        #[arg(long = "bind")]
        bind: Vec<String>,
        /// Initial data "t0, y0, y'0".
        #[arg(long, default_value = "0, 1, 0")]
        ic: String,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Divergence, Jacobi last multiplier and its quadrature for a first-order system.
    Multiplier { system: String },
    /// Raises a two-dimensional system to a second-order equation in one variable.
    Raise {
        system: String,
        #[arg(long)]
        solve_for: String,
        /// The other variable expressed through the kept one and its derivative.
        #[arg(long)]
        inverse: String,
    },
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn execute(cmd: Command) -> Result<u8, CliError> {
    match cmd {
        Command::Analyze { ode, basis, invariant_basis, window, json: as_json } => {
            let opts = AnalyzeOptions { window, hints: basis, invariant_hints: invariant_basis };
            let r = cmd_analyze(&ode, &opts)?;
            if as_json {
                println!("{}", r.to_json());
            } else {
                print!("{}", render_text(&r));
            }
            Ok(EXIT_OK)
        }
        Command::Corpus { id, json: as_json } => {
            let outcomes = cmd_corpus(id.as_deref())?;
            if as_json {
                println!("{}", json(&outcomes));
            } else {
                print!("{}", render_table(&outcomes));
            }
            Ok(if outcomes.iter().all(|o| o.passed()) { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Equiv { ode, s1, s2 } => {
            let r = cmd_equiv(&ode, &s1, &s2)?;
            println!("{}", json(&r));
            Ok(EXIT_OK)
        }
        Command::CheckIntegral { ode, expr } => {
            let r = cmd_check_integral(&ode, &expr)?;
            println!("{}", json(&r));
            Ok(if r.verified { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Drift { ode, expr, bind, ic, t_end, step } => {
            let ic = match parse_floats(&ic).as_deref() {
                Some(&[t0, y0, yp0]) => (t0, y0, yp0),
                _ => return Err(CliError::BadArgument(format!("`{ic}` is not `t0, y0, yp0`"))),
            };
            let d = cmd_drift(&ode, &expr, &bind, ic, t_end, step)?;
            println!("{d:e}");
            Ok(EXIT_OK)
        }
        Command::Multiplier { system } => {
            println!("{}", json(&cmd_multiplier(&system)?));
            Ok(EXIT_OK)
        }
        Command::Raise { system, solve_for, inverse } => {
            println!("{}", json(&cmd_raise(&system, &solve_for, &inverse)?));
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}
