//! Batch front end: parse input files, run one query, print a deterministic
//! report (human-readable by default, JSON with `--json`).

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "causal", version, about = "Queries over causal theories, action domains, arguments and S5 theories")]
struct Cli {
    /// Emit a JSON report with sorted keys instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest universe (in atoms) to enumerate; at most 24.
    #[arg(long, global = true, value_name = "N", default_value_t = causal_core::model::DEFAULT_MAX_ATOMS)]
    max_atoms: usize,

    /// Append wall-clock time to the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every model of a theory with its explained flag and successor count.
    Models {
        /// Theory file (`atoms:` and `rule: body |> head` lines).
        theory: PathBuf,
    },
    /// Decide a sequent by proof search and by the canonical model, and check they agree.
    Entail {
        theory: PathBuf,
        /// Sequent such as `p, q |- []r`.
        sequent: String,
        /// Write the proof, if any, to this file.
        #[arg(long, value_name = "PATH")]
        proof_out: Option<PathBuf>,
    },
    /// Print the causally explained histories of an action domain.
    Solve {
        /// Domain file (`fluents:`, `actions:`, `action`, `occurs:`, `init:`, `horizon:`).
        domain: PathBuf,
    },
    /// Translate an argument query into a box entailment and extract an argument proof.
    Pj {
        /// Basic arguments file (`arg: head <- g1, g2` lines).
        basics: PathBuf,
        /// Head of the goal argument.
        #[arg(long)]
        head: String,
        /// Comma-separated grounds of the goal argument.
        #[arg(long, default_value = "")]
        grounds: String,
    },
    /// Explained models and consequences of an S5 theory with the `C` modality.
    Turner {
        /// S5 theory file (`atoms:` and `axiom:` lines).
        #[arg(required_unless_present = "witness")]
        theory: Option<PathBuf>,
        /// Nonmodal formula to test in every explained model.
        #[arg(long, requires = "theory")]
        query: Option<String>,
        /// Also print the built-in nonmonotonicity witness.
        #[arg(long)]
        witness: bool,
    },
    /// Solve the built-in wait-then-shoot scenario.
    DemoYsp,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = std::time::Instant::now();
    let result = match &cli.command {
        Command::Models { theory } => commands::models(theory, cli.max_atoms),
        Command::Entail {
            theory,
            sequent,
            proof_out,
        } => commands::entail(theory, sequent, proof_out.as_deref(), cli.max_atoms),
        Command::Solve { domain } => commands::solve(domain, cli.max_atoms),
        Command::Pj { basics, head, grounds } => commands::pj(basics, head, grounds, cli.max_atoms),
        Command::Turner { theory, query, witness } => {
            commands::turner(theory.as_deref(), query.as_deref(), *witness)
        }
        Command::DemoYsp => commands::demo_ysp(cli.max_atoms),
    };
    match result {
        Ok(mut report) => {
            if cli.timing {
                report.elapsed = Some(start.elapsed());
            }
            print!("{}", if cli.json { report.to_json() } else { report.to_text() });
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

/// The error chain joined by `: `, skipping causes already quoted by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if out.ends_with(&text) {
            continue;
        }
        if !out.is_empty() {
            out.push_str(": ");
        }
        out.push_str(&text);
    }
    out
}
