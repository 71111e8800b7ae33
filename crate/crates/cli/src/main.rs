use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use torsionlab::job::report::{render_json, render_text};
use torsionlab::job::{parse_job, run_job, RunOptions};

#[derive(Parser)]
#[command(name = "torsionlab", version, about = "Exact adjoint twisted Alexander polynomials of 3-manifold groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a job file.
    Compute {
        file: PathBuf,
        /// Run only these tasks (labels or kinds), in this order.
        #[arg(long = "task", value_name = "NAME")]
        tasks: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Seed for the randomized tasks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also check representation validity, Wada column independence,
        /// agreement with the chain-complex torsion and reciprocity.
        #[arg(long)]
        check_invariants: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let Command::Compute { file, tasks, format, output, seed, check_invariants } = Cli::parse().command;
    let src = match std::fs::read_to_string(&file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let job = match parse_job(&src) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {}:{e}", file.display());
            return ExitCode::from(2);
        }
    };
    let report = match run_job(&job, &RunOptions { select: tasks, seed, check_invariants }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let doc = match format {
        Format::Text => render_text(&report),
        Format::Json => render_json(&report),
    };
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, doc) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{doc}"),
    }
    if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
