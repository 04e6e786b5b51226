use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use quathom::job::{run_source, selftest, Diagnostic, Report};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Run quathom job files, or `selftest` for the invariant suite.
#[derive(Parser, Debug)]
#[command(name = "quathom", version)]
struct Cli {
    /// `selftest`, or one or more job files (run concurrently).
    #[arg(required = true, value_name = "SUBCOMMAND|JOBFILE")]
    inputs: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for `selftest`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run_file(path: &str) -> Report {
    match std::fs::read_to_string(path) {
        Ok(text) => run_source(&text),
        Err(err) => {
            let mut report = run_source("");
            report.diagnostics = vec![Diagnostic::error("IoError", format!("{path}: {err}"))];
            report
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let reports: Vec<Report> = if cli.inputs == ["selftest"] {
        vec![selftest(cli.seed)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = cli.inputs.iter().map(|p| s.spawn(move || run_file(p))).collect();
            handles.into_iter().map(|h| h.join().expect("job thread panicked")).collect()
        })
    };
    let rendered = match cli.format {
        Format::Json => Report::many_to_json(&reports),
        Format::Text => reports.iter().map(Report::to_text).collect::<Vec<_>>().join("\n"),
    };
    match &cli.output {
        Some(path) => {
            if let Err(err) = std::fs::write(path, rendered) {
                eprintln!("quathom: cannot write {}: {err}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if reports.iter().all(Report::is_ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
