//! `sill`: typecheck, reduce and transform CP and HCP processes in `.sill` files.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sill", version, about = "Session-typed processes: CP and HCP")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Typecheck declarations; for `hproc` prints the inferred hyper-environment.
    Check {
        file: PathBuf,
        #[arg(long)]
        proc: Option<String>,
        #[arg(long)]
        show_derivation: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the deterministic reduction strategy.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        proc: Option<String>,
        /// Step limit; defaults to the termination measure bound.
        #[arg(long)]
        fuel: Option<usize>,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Explore every reduction, one node per congruence class.
    Graph {
        file: PathBuf,
        #[arg(long)]
        proc: Option<String>,
        #[arg(long)]
        dot: bool,
        #[arg(long, default_value_t = sill_core::reduction::GRAPH_BUDGET)]
        budget: usize,
    },
    /// Print the HCP image of a CP declaration.
    Translate {
        file: PathBuf,
        #[arg(long)]
        proc: Option<String>,
        #[arg(long)]
        show_derivation: bool,
        #[arg(long)]
        json: bool,
    },
    /// Split an HCP derivation into CP derivations, one per sequent.
    Disentangle {
        file: PathBuf,
        #[arg(long)]
        proc: Option<String>,
        #[arg(long)]
        show_derivation: bool,
        #[arg(long)]
        json: bool,
    },
    /// Collapse an environment into one `par` formula, or a
    /// hyper-environment into one tensor formula.
    Internalize {
        file: PathBuf,
        #[arg(long)]
        proc: Option<String>,
        #[arg(long)]
        show_derivation: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a metatheory suite on generated processes.
    Fuzz {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, value_enum, default_value_t = DialectArg::Cp)]
        dialect: DialectArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DialectArg {
    Cp,
    Hcp,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check {
            file,
            proc,
            show_derivation,
            json,
        } => commands::check(&file, proc.as_deref(), show_derivation, json),
        Command::Reduce {
            file,
            proc,
            fuel,
            trace,
            json,
        } => commands::reduce(&file, proc.as_deref(), fuel, trace, json),
        Command::Graph {
            file,
            proc,
            dot,
            budget,
        } => commands::graph(&file, proc.as_deref(), dot, budget),
        Command::Translate {
            file,
            proc,
            show_derivation,
            json,
        } => commands::translate(&file, proc.as_deref(), show_derivation, json),
        Command::Disentangle {
            file,
            proc,
            show_derivation,
            json,
        } => commands::disentangle(&file, proc.as_deref(), show_derivation, json),
        Command::Internalize {
            file,
            proc,
            show_derivation,
            json,
        } => commands::internalize(&file, proc.as_deref(), show_derivation, json),
        Command::Fuzz {
            suite,
            seed,
            count,
            dialect,
            json,
        } => {
            let dialect = match dialect {
                DialectArg::Cp => sill_core::surface::Dialect::Cp,
                DialectArg::Hcp => sill_core::surface::Dialect::Hcp,
            };
            commands::fuzz(&suite, seed, count, dialect, json)
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("{}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}
