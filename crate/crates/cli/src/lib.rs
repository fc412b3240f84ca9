//! Command-line front end: load instance files, run law checks and
//! evaluations, and emit reports.

pub mod commands;
pub mod report;
pub mod schema;

use std::path::Path;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use commands::{ActionCommand, BudgetFlag};
use report::Report;
use schema::{parse_instance, Instance, InstanceFile};

/// Problems with the input itself; these exit with code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Parser)]
#[command(name = "dblcat", version, about = "Check double-category laws and evaluate cobordisms")]
pub struct Cli {
    /// Omit the timestamp and elapsed time so reports are byte-identical
    /// across runs.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit a human-readable summary.
    #[arg(long, global = true)]
    pub text: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the double-category law suite on an instance file.
    Laws {
        file: String,
        /// Draws per law (sampled with the file's seed).
        #[arg(long, conflicts_with = "exhaustive")]
        budget: Option<usize>,
        /// Visit every chain of the enumeration.
        #[arg(long)]
        exhaustive: bool,
        /// Accept coherence up to the declared witnesses; without it a weak
        /// instance fails the `strictness` law.
        #[arg(long)]
        weak: bool,
    },
    /// Compose named cells left to right (`id` is the unit on the adjacent
    /// endpoint).
    Compose {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        cells: Vec<String>,
    },
    /// Evaluate every named cobordism of a file under a theory.
    Tqft {
        theory: String,
        cobordism: String,
        /// Also run the axioms A(1)–A(5).
        #[arg(long)]
        check_axioms: bool,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Check an action, compute an orbit, or check a characteristic class.
    Action {
        file: String,
        #[arg(value_enum)]
        mode: ActionMode,
        /// Object id from the file's `objects` table.
        #[arg(long)]
        seed_object: Option<String>,
        /// Draws per law, or the object-plus-morphism cap for `orbit`.
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ActionMode {
    Check,
    Orbit,
    Charclass,
}

/// Process outcome: what to print where, and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

fn load(path: &str) -> Result<InstanceFile, CliError> {
    let text = std::fs::read_to_string(Path::new(path)).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_instance(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{path}: {msg}")),
        other => other,
    })
}

fn dispatch(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Laws { file, budget, exhaustive, weak } => {
            let f = load(file)?;
            commands::laws(&[file.clone()], &f, BudgetFlag { draws: *budget, exhaustive: *exhaustive }, *weak)
        }
        Command::Compose { file, cells } => commands::compose(&[file.clone()], &load(file)?, cells),
        Command::Tqft { theory, cobordism, check_axioms, budget } => {
            let (t, c) = (load(theory)?, load(cobordism)?);
            commands::tqft(&[theory.clone(), cobordism.clone()], &t, &c, *check_axioms, *budget)
        }
        Command::Action { file, mode, seed_object, budget } => {
            let f = load(file)?;
            let Instance::Action(p) = &f.instance else {
                return Err(CliError::Input(format!(
                    "{file}: expected an `action` file, found `{}`",
                    f.instance.kind()
                )));
            };
            let mode = match mode {
                ActionMode::Check => ActionCommand::Check,
                ActionMode::Orbit => ActionCommand::Orbit,
                ActionMode::Charclass => ActionCommand::Charclass,
            };
            commands::action(&[file.clone()], &f, p, mode, seed_object.as_deref(), *budget)
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let mut report = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => return Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 2 },
    };
    if !cli.no_timestamp {
        report.elapsed_ms = Some(start.elapsed().as_millis());
        report.timestamp = Some(chrono::Utc::now().to_rfc3339());
    }
    let body = if cli.text { report.to_text() } else { report.to_json() };
    let code = if report.passed { 0 } else { 1 };
    match &cli.output {
        Some(path) => match std::fs::write(path, &body) {
            Ok(()) => Outcome { stdout: String::new(), stderr: String::new(), code },
            Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {path}: {e}\n"), code: 2 },
        },
        None => Outcome { stdout: body, stderr: String::new(), code },
    }
}
