use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gframe::{ReportDocument, EXIT_CONCLUSION_FAILS, EXIT_INVALID, EXIT_OK};
use gframe_core::dispatch::TheoremKind;

#[derive(Parser)]
#[command(name = "gframe", version, about = "Run g-frame theorem scenarios and report verdicts")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Print the theorem ids a scenario may name, then exit.
    #[arg(long)]
    list_theorems: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario in the given files.
    Run {
        #[arg(required = true)]
        files: Vec<PathBuf>,

        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,

        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,

        /// Base seed for every scenario, replacing the one in the file.
        #[arg(long)]
        seed: Option<u64>,

        /// Leave out the timestamp and wall times.
        #[arg(long)]
        no_timestamp: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_theorems {
        for k in TheoremKind::ALL {
            println!("{:<16} {}", k.name(), k.inputs());
        }
        return ExitCode::from(EXIT_OK as u8);
    }
    let Some(Command::Run { files, report, format, seed, no_timestamp }) = cli.command else {
        eprintln!("nothing to do; try `gframe run <file>` or `gframe --list-theorems`");
        return ExitCode::from(EXIT_INVALID as u8);
    };

    let mut scenarios = Vec::new();
    for path in &files {
        match gframe::load(path) {
            Ok(s) => scenarios.extend(s),
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_INVALID as u8);
            }
        }
    }

    let mut runs = Vec::with_capacity(scenarios.len());
    for mut s in scenarios {
        if let Some(seed) = seed {
            s.seed = seed;
        }
        match gframe::run_scenario(&s) {
            Ok(r) => {
                let a = &r.aggregate;
                eprintln!(
                    "{}: {} holds, {} hypothesis fails, {} conclusion fails, {} classified",
                    r.scenario, a.conclusion_holds, a.hypothesis_fails, a.conclusion_fails, a.classified
                );
                runs.push(r);
            }
            Err(e) => {
                eprintln!("error: scenario `{}`: {e}", s.name);
                return ExitCode::from(EXIT_INVALID as u8);
            }
        }
    }

    let mut doc = ReportDocument::new(runs);
    if no_timestamp {
        doc = doc.without_timing();
    }
    let text = match format {
        Format::Json => doc.to_json().map_err(anyhow::Error::from),
        Format::Csv => doc.to_csv(),
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot render report: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    match report {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_INVALID as u8);
            }
        }
        None => print!("{text}"),
    }

    if doc.conclusion_failures() > 0 {
        ExitCode::from(EXIT_CONCLUSION_FAILS as u8)
    } else {
        ExitCode::from(EXIT_OK as u8)
    }
}
