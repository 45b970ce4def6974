//! `rkit`: batch front end over the rkit library.
//!
//! Exit status: 0 success, 1 usage error, 2 a checked identity failed,
//! 3 numeric domain error (including overflow and budget exhaustion).

mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rkit::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(_) => 3,
            _ => 1,
        }
    }
}

/// Options shared by every subcommand.
pub struct Settings {
    pub deterministic: bool,
    pub budget: Option<u128>,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let settings = Settings {
        deterministic: cli.deterministic,
        budget: cli.budget,
    };
    let start = Instant::now();
    let result = commands::run(&cli.command, &settings, &argv[1..]).and_then(|mut doc| {
        let fresh = !matches!(cli.command, args::Command::Render(_));
        if fresh && !settings.deterministic {
            doc.meta.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        let text = doc.render(cli.format())?;
        std::io::stdout().write_all(text.as_bytes())?;
        Ok(doc.failed())
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
