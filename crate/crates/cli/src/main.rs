use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use orthospec::runner::{error_json, parse_scenario_for, Command};
use orthospec::Error;

#[derive(Parser, Debug)]
#[command(
    name = "orthospec",
    version,
    about = "Orthogeodesic length-spectrum lab for convex bodies on flat tori"
)]
struct Cli {
    /// spectrum, count, zeta, residues, scan, guinand, correlation, laplace or mellin
    #[arg(value_parser = parse_command)]
    command: Command,
    /// Scenario file (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Directory for the CSV and JSON reports
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; overrides `threads` in the config
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_command(s: &str) -> Result<Command, String> {
    Command::parse(s).ok_or_else(|| {
        let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
        format!(
            "unknown command `{s}`; expected one of {}",
            names.join(", ")
        )
    })
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, Error> {
    let text = std::fs::read_to_string(&cli.config).map_err(|e| Error::Config {
        path: cli.config.display().to_string(),
        message: e.to_string(),
    })?;
    let mut scenario = parse_scenario_for(&text, cli.command)?;
    if let Some(n) = cli.threads {
        scenario.set_threads(n)?;
    }
    scenario.run(&cli.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
