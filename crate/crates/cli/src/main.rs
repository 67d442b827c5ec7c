//! `ontorec`: load a knowledge base, train and run the paper classifier,
//! build profiles and recommendations, find communities of practice,
//! bootstrap cold-start profiles and replay logged trials.
//!
//! Records go to standard output as JSON lines (metrics as CSV);
//! diagnostics go to standard error. Exit status: 0 success, 1 usage,
//! 2 data error, 3 state error.

mod commands;
mod config;

use std::fmt;
use std::io::{self, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ontorec::ErrorClass;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    State(String),
    /// Standard output was closed early, e.g. by `head`.
    Closed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::State(_) => 3,
            CliError::Closed => 0,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::State(m) => f.write_str(m),
            CliError::Closed => f.write_str("output closed"),
        }
    }
}

impl From<ontorec::Error> for CliError {
    fn from(e: ontorec::Error) -> Self {
        let msg = e.to_string();
        match e.class() {
            ErrorClass::Argument => CliError::Usage(msg),
            ErrorClass::Data => CliError::Data(msg),
            ErrorClass::State => CliError::State(msg),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return CliError::Closed;
        }
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.io_error_kind() == Some(io::ErrorKind::BrokenPipe) {
            return CliError::Closed;
        }
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "ontorec", version, about = "Ontology-backed research paper recommender")]
struct Cli {
    /// TOML configuration file.
    #[arg(short, long, global = true, default_value = "ontorec.toml")]
    config: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and validate the knowledge base; print a summary.
    KbLoad,
    /// Train the classifier on the labelled corpus and save the model.
    Train,
    /// Classify every corpus document; print and save the paper records.
    Classify,
    /// Interest profiles from the browsing log.
    Profile(ProfileArgs),
    /// Recommendations for one user.
    Recommend(RecommendArgs),
    /// Rank the community of practice around a person.
    Cop(CopArgs),
    /// Initial profiles from publications alone.
    BootstrapNewSystem(BootstrapArgs),
    /// Initial profile for a new user from publications and the community.
    BootstrapNewUser(NewUserArgs),
    /// Replay the weekly logs and print precision and error rate per week.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct ProfileArgs {
    /// Only this user; default is every user in the log.
    #[arg(long)]
    user: Option<String>,
    #[arg(long)]
    as_of: NaiveDate,
    /// Also assert the profiles into the knowledge base and write it here.
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RecommendArgs {
    #[arg(long)]
    user: String,
    #[arg(long)]
    as_of: NaiveDate,
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Debug, Args)]
struct CopArgs {
    #[arg(long)]
    seed: String,
    #[arg(long)]
    max_depth: Option<usize>,
    /// Weight relation types by how often they occur.
    #[arg(long)]
    auto_weights: bool,
}

#[derive(Debug, Args)]
struct BootstrapArgs {
    /// Only this person; default is every person.
    #[arg(long)]
    user: Option<String>,
    #[arg(long)]
    reference_date: Option<NaiveDate>,
}

#[derive(Debug, Args)]
struct NewUserArgs {
    #[arg(long)]
    user: String,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    reference_date: Option<NaiveDate>,
    #[arg(long)]
    max_depth: Option<usize>,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// Also run with new-system bootstrap profiles.
    #[arg(long, value_enum, default_value = "off")]
    bootstrap: Switch,
    /// Add the new-user evaluation row.
    #[arg(long)]
    new_user: bool,
    /// Print one row per user instead of averages.
    #[arg(long)]
    per_user: bool,
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_ansi(io::stderr().is_terminal())
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into()),
        )
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };

    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = commands::run(&cli.config, cli.command, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) | Err(CliError::Closed) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ontorec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
