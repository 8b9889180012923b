//! Command line front end: reads JSON bundles, runs one command and prints
//! a canonical JSON report.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub mod commands;
pub mod document;
pub mod error;

use commands::{dispatch, error_output, Output};
use document::{parse, to_canonical};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "morita", version, about = "Finite groupoids, weak equivalences and anafunctors")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PullbackMode {
    Strict,
    Weak,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks every document of the bundle.
    Validate { input: PathBuf },
    /// Weak-equivalence report for a functor.
    CheckWe { input: PathBuf, names: Vec<String> },
    CheckProperties {
        input: PathBuf,
        names: Vec<String>,
        /// Comma separated, e.g. `free,effective`. Defaults to all.
        #[arg(long)]
        props: Option<String>,
    },
    Pullback {
        input: PathBuf,
        names: Vec<String>,
        #[arg(long, value_enum, default_value_t = PullbackMode::Strict)]
        mode: PullbackMode,
    },
    ComposeAna { input: PathBuf, names: Vec<String> },
    ComposeGen { input: PathBuf, names: Vec<String> },
    Decompose { input: PathBuf, names: Vec<String> },
    QuotientFactorize { input: PathBuf, names: Vec<String> },
    /// `G ⋉ (G ×_K X)` from a `K`-action and an action groupoid whose group is `G`.
    BalancedProduct {
        input: PathBuf,
        names: Vec<String>,
        /// Images of the elements of `K`, as `k=g;k=g`.
        #[arg(long)]
        hom: Option<String>,
    },
    Anafunctorify {
        input: PathBuf,
        names: Vec<String>,
        #[arg(long)]
        equivariant: bool,
    },
    #[command(name = "normalize-2cell")]
    Normalize2cell { input: PathBuf, names: Vec<String> },
    #[command(name = "2cells-equal")]
    TwoCellsEqual { input: PathBuf, names: Vec<String> },
    /// Skeleton invariant of one groupoid, or a comparison of two.
    Skeleton { input: PathBuf, names: Vec<String> },
    /// Runs the law suite. A `suite_config` document in `input` sets the budget.
    Suite {
        input: Option<PathBuf>,
        /// `default` or `key=value` pairs, e.g. `group=4,carrier=3`.
        #[arg(long)]
        budget: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Builds the Klein four-group square, its quotient by the half turn and
    /// the projection.
    DemoKlein,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::CheckWe { .. } => "check-we",
            Command::CheckProperties { .. } => "check-properties",
            Command::Pullback { .. } => "pullback",
            Command::ComposeAna { .. } => "compose-ana",
            Command::ComposeGen { .. } => "compose-gen",
            Command::Decompose { .. } => "decompose",
            Command::QuotientFactorize { .. } => "quotient-factorize",
            Command::BalancedProduct { .. } => "balanced-product",
            Command::Anafunctorify { .. } => "anafunctorify",
            Command::Normalize2cell { .. } => "normalize-2cell",
            Command::TwoCellsEqual { .. } => "2cells-equal",
            Command::Skeleton { .. } => "skeleton",
            Command::Suite { .. } => "suite",
            Command::DemoKlein => "demo-klein",
        }
    }

    pub fn input(&self) -> Option<&Path> {
        match self {
            Command::Validate { input }
            | Command::CheckWe { input, .. }
            | Command::CheckProperties { input, .. }
            | Command::Pullback { input, .. }
            | Command::ComposeAna { input, .. }
            | Command::ComposeGen { input, .. }
            | Command::Decompose { input, .. }
            | Command::QuotientFactorize { input, .. }
            | Command::BalancedProduct { input, .. }
            | Command::Anafunctorify { input, .. }
            | Command::Normalize2cell { input, .. }
            | Command::TwoCellsEqual { input, .. }
            | Command::Skeleton { input, .. } => Some(input),
            Command::Suite { input, .. } => input.as_deref(),
            Command::DemoKlein => None,
        }
    }
}

/// Runs `command` on the contents of its input file.
pub fn execute(command: &Command) -> Output {
    let bundle = match command.input().map(|p| std::fs::read(p).map_err(CliError::from).and_then(|b| parse(&b))) {
        None => None,
        Some(Ok(b)) => Some(b),
        Some(Err(e)) => return error_output(command.name().to_string(), &e),
    };
    dispatch(command, bundle.as_ref())
}

/// Prints or writes the report and returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    let output = execute(&cli.command);
    let bytes = to_canonical(&output);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    };
    match written {
        Ok(()) => output.exit_code,
        Err(e) => {
            eprintln!("morita: {e}");
            2
        }
    }
}
