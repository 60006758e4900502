mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use args::{Cli, Command};

pub enum CliError {
    /// Bad flags or arguments; exit 1.
    Usage(String),
    /// Failure while doing the work; exit 2.
    Runtime(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let sub = match &cli.command {
        Command::Degrade(_) => "degrade",
        Command::GenDataset(_) => "gen-dataset",
        Command::Evaluate(_) => "evaluate",
        Command::VizField(_) => "viz-field",
    };
    let result = match cli.command {
        Command::Degrade(a) => commands::run_degrade(a),
        Command::GenDataset(a) => commands::run_gen_dataset(a),
        Command::Evaluate(a) => commands::run_evaluate(a),
        Command::VizField(a) => commands::run_viz_field(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            let mut cmd = Cli::command();
            cmd.build();
            if let Some(sc) = cmd.find_subcommand_mut(sub) {
                eprintln!("\n{}\n", sc.render_usage());
            }
            eprintln!("For more information, try 'atmoturb {sub} --help'.");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
