mod args;
mod commands;
mod config;
mod failure;

use std::io::Write as _;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Settings;
use failure::Failure;

fn run(cli: &Cli) -> Result<Option<String>, Failure> {
    let settings = Settings::resolve(&cli.shared)?;
    match &cli.command {
        Command::Train(a) => commands::train(&settings, a).map(Some),
        Command::Resolve(a) => commands::resolve_cmd(&settings, a),
        Command::Score(a) => commands::score(&settings, a).map(Some),
        Command::Inspect(a) => commands::inspect(&settings, a).map(Some),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Some(text) = out {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                    return ExitCode::from(Failure::OTHER);
                }
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
