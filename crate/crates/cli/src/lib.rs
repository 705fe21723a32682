//! Command-line front end for `topospec-core`.
//!
//! ```text
//! topospec run <file>      run the task of a configuration file
//! topospec sweep <file>    full factorial parameter sweep
//! topospec verify          built-in oracle suite
//! topospec list            catalog and parameter schemas
//! topospec dim <config>    principal-bundle dimension
//! ```
//!
//! Exit status: 0 success, 1 configuration parse error, 2 results flagged
//! NoConvergence/NoRoots, 3–12 one per library error kind, 13 I/O,
//! 14 verify failures, 64 usage.

pub mod config;
pub mod error;
pub mod output;
pub mod tasks;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use topospec_core::configurations::catalog;

use crate::config::{RunConfig, Task};
use crate::error::{CliError, EXIT_USAGE};
use crate::tasks::Outcome;
use crate::verify::VerifyOptions;

#[derive(Debug, Parser)]
#[command(
    name = "topospec",
    version,
    about = "Topological invariants and spectra of classical configurations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the task of a configuration file.
    Run { file: PathBuf },
    /// Evaluate the invariant over the [sweep.grid] of a configuration file.
    Sweep { file: PathBuf },
    /// Run the built-in oracle suite.
    Verify {
        /// Override points_per_axis of every quadrature.
        #[arg(long)]
        points_per_axis: Option<usize>,
        /// Override refinement_levels of every quadrature.
        #[arg(long)]
        refinement_levels: Option<usize>,
        /// Negative control: negate Euler integrals.
        #[arg(long, hide = true)]
        inject_euler_sign_flip: bool,
    },
    /// List catalog configurations with their parameter schemas.
    List,
    /// Principal-bundle dimension of a catalog name or configuration file.
    Dim {
        config: String,
        /// Parameter for catalog names, as NAME=VALUE.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn main_with_args(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Run { file } => run_file(&file, false),
        Command::Sweep { file } => run_file(&file, true),
        Command::Verify {
            points_per_axis,
            refinement_levels,
            inject_euler_sign_flip,
        } => {
            let opts = VerifyOptions {
                points_per_axis,
                refinement_levels,
                inject_euler_sign_flip,
            };
            let report = verify::run(&opts, |c| emit(&c.line()));
            emit(&report.summary());
            Ok(report.exit_code())
        }
        Command::List => {
            emit(list_text().trim_end());
            Ok(0)
        }
        Command::Dim { config, params } => {
            let outcome = dim_command(&config, &params)?;
            emit(&outcome.summary);
            Ok(outcome.exit_code())
        }
    }
}

/// Prints a line to stdout; a closed pipe (`topospec verify | head`) is
/// not an error.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}").and_then(|()| out.flush());
}

/// Runs a configuration file: writes the output file (if any), prints the
/// summary line, and returns the exit status.
pub fn run_file(path: &Path, sweep_only: bool) -> Result<i32, CliError> {
    let cfg = RunConfig::load(path)?;
    if sweep_only && cfg.sweep.is_none() {
        return Err(CliError::Usage(format!(
            "{} has no [sweep] section",
            path.display()
        )));
    }
    let outcome = tasks::execute(&cfg)?;
    for line in &outcome.report {
        emit(line);
    }
    for w in &outcome.meta.warnings {
        eprintln!("warning: {w}");
    }
    match tasks::output_target(&cfg, path) {
        Some((target, format)) => {
            output::write_atomic(&target, &outcome.render(format))?;
            emit(&outcome.summary);
        }
        None => {
            emit(&outcome.summary);
            if prints_table(&cfg, &outcome) {
                emit(outcome.table.to_csv().trim_end());
            }
        }
    }
    Ok(outcome.exit_code())
}

/// Without an output file, multi-row results go to stdout after the summary.
fn prints_table(cfg: &RunConfig, outcome: &Outcome) -> bool {
    !matches!(cfg.task, Some(Task::Integrate | Task::Dim | Task::Verify))
        && !outcome.table.rows.is_empty()
}

fn dim_command(config: &str, params: &[String]) -> Result<Outcome, CliError> {
    let path = Path::new(config);
    if path.is_file() {
        if !params.is_empty() {
            return Err(CliError::Usage(
                "--param applies to catalog names, not files".into(),
            ));
        }
        let cfg = RunConfig::load(path)?;
        let c = cfg
            .configuration
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("{config} has no [configuration] section")))?;
        return tasks::dim(&c.name, &c.params);
    }
    let mut map = BTreeMap::new();
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--param expects NAME=VALUE, got `{p}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--param {k}: `{v}` is not a number")))?;
        map.insert(k.trim().to_string(), v);
    }
    tasks::dim(config, &map)
}

/// The catalog listing printed by `topospec list`.
pub fn list_text() -> String {
    let mut s = String::new();
    for entry in catalog() {
        let classes: Vec<&str> = entry.classes.iter().map(|c| c.name()).collect();
        let classes = if classes.is_empty() {
            "none (dimension counting)".to_string()
        } else {
            classes.join(", ")
        };
        s.push_str(&format!("{}\n  {}\n", entry.name, entry.summary));
        s.push_str(&format!(
            "  base dim {}, group {}, classes: {classes}\n",
            entry.base_dim, entry.group
        ));
        for p in entry.params {
            s.push_str(&format!(
                "    {:<3} {:<16} {}\n",
                p.name,
                p.range_string(),
                p.doc
            ));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        main_with_args(
            std::iter::once("topospec")
                .chain(args.iter().copied())
                .map(OsString::from),
        )
    }

    #[test]
    fn list_names_every_entry_and_parameter() {
        let s = list_text();
        for e in catalog() {
            assert!(s.contains(e.name));
            for p in e.params {
                assert!(s.contains(p.doc));
            }
        }
        assert!(s.contains("(0, inf)"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(code(&[]), EXIT_USAGE);
        assert_eq!(code(&["frobnicate"]), EXIT_USAGE);
        assert_eq!(code(&["run"]), EXIT_USAGE);
        assert_eq!(code(&["--help"]), 0);
    }

    #[test]
    fn dim_by_name() {
        assert_eq!(code(&["dim", "gravity"]), 0);
        assert_eq!(code(&["dim", "yang_mills", "--param", "k=3"]), 0);
        assert_eq!(code(&["dim", "yang_mills", "--param", "k3"]), EXIT_USAGE);
        assert_eq!(code(&["dim", "unknown_thing"]), 3);
    }

    #[test]
    fn missing_file_is_a_parse_error() {
        assert_eq!(code(&["run", "/nonexistent/cfg.toml"]), 1);
    }

    #[test]
    fn run_writes_output_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("m.toml");
        std::fs::write(
            &cfg,
            r#"
task = "integrate"
[configuration]
name = "monopole"
params = { g = 1.5 }
[integrate]
class = "chern1"
[quadrature]
points_per_axis = 32
[output]
path = "out.json"
format = "json"
"#,
        )
        .unwrap();
        assert_eq!(run_file(&cfg, false).unwrap(), 0);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("out.json")).unwrap())
                .unwrap();
        assert_eq!(v["task"], "integrate");
        assert!((v["rows"][0]["value"].as_f64().unwrap() - 3.0).abs() < 1e-7);
        assert_eq!(run_file(&cfg, true).unwrap_err().exit_code(), EXIT_USAGE);
    }
}
