//! Command-line front end.
//!
//! Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 `verify` found a violation, 2 usage or configuration error,
//! 3 file or parse error, 4 runtime invariant violation.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bell::{dump, operator_value};
use crate::bounds::{best_bound, Operator};
use crate::error::{BellError, Result};
use crate::experiments::{
    figure_sweep, maximize_violation, verify_bounds_random, write_csv, Figure, Objective,
    OptimizerConfig, ParamFamily, StateSource, SweepConfig,
};
use crate::numfmt::dec;
use crate::observables::{parse_angle, read_scenario};
use crate::tensor::{ghz_state, state_file::read_state};
use crate::{Scenario, State};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "multibell",
    version,
    about = "Multipartite Bell operators and refined Tsirelson bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    #[value(name = "svetlichny+")]
    SvetlichnyPlus,
    #[value(name = "svetlichny-")]
    SvetlichnyMinus,
    Mk,
}

impl From<OperatorArg> for Operator {
    fn from(op: OperatorArg) -> Self {
        match op {
            OperatorArg::SvetlichnyPlus => Operator::Svetlichny(crate::bell::Parity::Plus),
            OperatorArg::SvetlichnyMinus => Operator::Svetlichny(crate::bell::Parity::Minus),
            OperatorArg::Mk => Operator::Mk,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    MaxSvetlichny,
    MaxMk,
    MaxGap,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::MaxSvetlichny => Objective::MaxSvetlichny,
            ObjectiveArg::MaxMk => Objective::MaxMk,
            ObjectiveArg::MaxGap => Objective::MaxGap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Planar,
    Bloch,
}

fn angle(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).ok_or_else(|| format!("not an angle: {s:?} (use radians or forms like -3pi/4)"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep α for one of the built-in figures and write a CSV.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = angle, default_value = "-pi", allow_hyphen_values = true)]
        alpha_start: f64,
        #[arg(long, value_parser = angle, default_value = "pi", allow_hyphen_values = true)]
        alpha_end: f64,
        /// `ghz` or a state file.
        #[arg(long, default_value = "ghz")]
        state: String,
    },
    /// Check the inequalities on random states and scenarios.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Evaluate an operator and its refined bound for a scenario file.
    Bounds {
        #[arg(long)]
        scenario: PathBuf,
        /// `ghz` or a state file.
        #[arg(long, default_value = "ghz")]
        state: String,
        #[arg(long, value_enum)]
        operator: OperatorArg,
    },
    /// Search for angles maximizing a violation on the GHZ state.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = FamilyArg::Planar)]
        family: FamilyArg,
        #[arg(long, default_value_t = 16)]
        multistarts: usize,
        #[arg(long, default_value_t = 20_000)]
        max_evals: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the term list of an operator, one `coeff bits` line per term.
    Polynomial {
        #[arg(long, value_enum)]
        op: OperatorArg,
        #[arg(long)]
        n: usize,
    },
}

/// Exit code for a library error.
pub fn exit_code(e: &BellError) -> i32 {
    match e {
        BellError::InvalidConfig(_)
        | BellError::OutOfRange { .. }
        | BellError::PartyOutOfRange { .. }
        | BellError::SizeCap(_) => EXIT_USAGE,
        BellError::Io(_)
        | BellError::Parse { .. }
        | BellError::InvalidState(_)
        | BellError::InvalidObservable(_)
        | BellError::DimensionMismatch { .. } => EXIT_INPUT,
        BellError::Invariant(_)
        | BellError::Overshoot { .. }
        | BellError::NonHermitianExpectation(_)
        | BellError::NotSymmetric(_)
        | BellError::NonCommutingBlocks(_)
        | BellError::NoEquivalence(_) => EXIT_INVARIANT,
    }
}

fn load_state(source: &str, n: usize) -> Result<State> {
    let state = if source == "ghz" {
        ghz_state(n)?
    } else {
        read_state(std::path::Path::new(source))?
    };
    if state.n_parties() != n {
        return Err(BellError::DimensionMismatch {
            expected: n,
            found: state.n_parties(),
        });
    }
    Ok(state)
}

fn execute<W: Write>(cmd: Command, out: &mut W) -> Result<i32> {
    match cmd {
        Command::Figure {
            id,
            samples,
            out: path,
            alpha_start,
            alpha_end,
            state,
        } => {
            let figure = Figure::from_id(id)
                .ok_or_else(|| BellError::InvalidConfig(format!("no figure {id}")))?;
            let cfg = SweepConfig {
                figure,
                alpha_start,
                alpha_end,
                samples,
                state: if state == "ghz" {
                    StateSource::Ghz
                } else {
                    StateSource::File(state.into())
                },
            };
            let rows = figure_sweep(&cfg)?;
            match path {
                Some(p) => {
                    let mut w = BufWriter::new(File::create(&p)?);
                    write_csv(&rows, &mut w)?;
                    w.flush()?;
                }
                None => write_csv(&rows, &mut *out)?,
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            seed,
            trials,
            n_min,
            n_max,
        } => {
            let report = verify_bounds_random(seed, trials, n_min, n_max)?;
            write!(out, "{}", report.to_key_value())?;
            Ok(if report.violations == 0 {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Bounds {
            scenario,
            state,
            operator,
        } => {
            let sc: Scenario = read_scenario(&scenario)?;
            let state = load_state(&state, sc.n_parties())?;
            let op = Operator::from(operator);
            let value = operator_value(&op.polynomial(sc.n_parties())?, &sc, &state)?;
            let report = best_bound(op, &sc, &state)?;
            writeln!(out, "operator={}", op.name())?;
            writeln!(out, "operator_value={}", dec(value))?;
            write!(out, "{}", report.to_key_value())?;
            if value.abs() > report.value + crate::scalar::tol::SLACK {
                return Err(BellError::Invariant(format!(
                    "|value| = {} exceeds refined bound {}",
                    value.abs(),
                    report.value
                )));
            }
            Ok(EXIT_OK)
        }
        Command::Optimize {
            n,
            objective,
            tol,
            family,
            multistarts,
            max_evals,
            seed,
        } => {
            let cfg = OptimizerConfig {
                n_parties: n,
                objective: objective.into(),
                family: match family {
                    FamilyArg::Planar => ParamFamily::Planar,
                    FamilyArg::Bloch => ParamFamily::Bloch,
                },
                multistarts,
                max_evals,
                tol,
                seed,
            };
            let r = maximize_violation(&cfg)?;
            let params: Vec<String> = r.params.iter().map(|&p| dec(p)).collect();
            writeln!(out, "objective={}", cfg.objective.name())?;
            writeln!(out, "params={}", params.join(","))?;
            writeln!(out, "value={}", dec(r.value))?;
            writeln!(out, "refined_bound={}", dec(r.refined_bound))?;
            writeln!(out, "evals={}", r.evals)?;
            writeln!(out, "converged={}", r.converged)?;
            Ok(EXIT_OK)
        }
        Command::Polynomial { op, n } => {
            let p = Operator::from(op).polynomial(n)?;
            write!(out, "{}", dump(&p))?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `argv` (program name first) and runs the command, writing data to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run_with<I, S, W, E>(argv: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    match execute(cli.command, out).and_then(|code| {
        out.flush()?;
        Ok(code)
    }) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("multibell").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn polynomial_mk3() {
        let (code, out, _) = call(&["polynomial", "--op", "mk", "--n", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "+1 001\n+1 010\n+1 100\n-1 111\n");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["polynomial", "--op", "chsh", "--n", "2"]).0, 2);
        assert_eq!(call(&["figure", "--id", "4"]).0, 2);
        assert_eq!(call(&["verify", "--bogus"]).0, 2);
        assert_eq!(call(&["verify", "--n-min", "1"]).0, 2);
        assert_eq!(call(&["polynomial", "--op", "mk", "--n", "40"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("polynomial"));
    }

    #[test]
    fn missing_scenario_exits_three() {
        let (code, _, err) = call(&[
            "bounds",
            "--scenario",
            "/nonexistent/x.txt",
            "--operator",
            "mk",
        ]);
        assert_eq!(code, 3);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn figure_to_stdout_with_fraction_angles() {
        let (code, out, _) = call(&[
            "figure",
            "--id",
            "1",
            "--samples",
            "2",
            "--alpha-start",
            "-pi/4",
            "--alpha-end",
            "pi/4",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("-0.785398163397448,5.65685424949238,5.65685424949238,"));
    }

    #[test]
    fn exit_codes_per_error() {
        assert_eq!(exit_code(&BellError::Invariant(String::new())), 4);
        assert_eq!(
            exit_code(&BellError::Parse {
                line: 1,
                msg: String::new()
            }),
            3
        );
        assert_eq!(exit_code(&BellError::InvalidConfig(String::new())), 2);
    }
}
