//! `lca`: check queries, scan Γ-validity, export QBF, run the tidy-room
//! benchmark.
//!
//! Exit status: 0 when the answer is TRUE (or VALID), 1 when it is FALSE
//! (or INVALID), 2 on any error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "lca",
    version,
    about = "Model checker for cognitive attitudes over belief bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide the instance's query at its initial state.
    Check {
        file: PathBuf,
        /// Check this formula instead of the file's query.
        #[arg(long)]
        query: Option<String>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Decide whether a formula holds at every state of the vocabulary.
    Validity {
        file: PathBuf,
        formula: String,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Write the closed reduction of the instance's query.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        query: Option<String>,
        #[arg(long)]
        strict_macros: bool,
        /// Hoist every quantifier into a leading prefix. QDIMACS output is
        /// always prenex.
        #[arg(long)]
        prenex: bool,
    },
    /// Time the tidy-room query for several numbers of children.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1")]
        agents: Vec<usize>,
        #[arg(long, value_enum, default_value_t = BenchBackendArg::Bdd)]
        backend: BenchBackendArg,
        #[arg(long, default_value_t = lca_core::solve::DEFAULT_NODE_BUDGET)]
        node_budget: usize,
        /// Also write the report as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct EngineArgs {
    #[arg(long, value_enum, default_value_t = Backend::Bdd)]
    backend: Backend,
    /// Let the belief and desire macros range over Γ_i instead of Γ_i⁺.
    #[arg(long)]
    strict_macros: bool,
    #[arg(long, default_value_t = lca_core::solve::DEFAULT_NODE_BUDGET)]
    node_budget: usize,
    /// Largest exponent the explicit checker may enumerate.
    #[arg(long, default_value_t = lca_core::model::DEFAULT_ENUM_CAP_EXPONENT)]
    enum_cap: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Backend {
    Bdd,
    Naive,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Qcir,
    Qdimacs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum BenchBackendArg {
    Bdd,
    Naive,
    Export,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LCA_LOG"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(verdict) => ExitCode::from(if verdict { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
