use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vtwist_cli::config::Format;
use vtwist_cli::{load_config, output, CliError};

#[derive(Parser)]
#[command(name = "vtwist", version, about = "Build twisted modules from a config, verify them and emit tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of the path in the config or stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Override the format given in the config.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the chain and run every requested check.
    Run { config: PathBuf },
    /// Build the chain and emit graded dimensions and mode tables.
    Tables { config: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn emit(text: &str, path: Option<PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (config_path, is_run) = match &cli.command {
        Command::Run { config } => (config, true),
        Command::Tables { config } => (config, false),
    };
    let config = load_config(config_path)?;
    let format = match cli.format {
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Csv) => Format::Csv,
        None => config.output.format,
    };
    let path = cli.output.clone().or_else(|| config.output.path.clone().map(PathBuf::from));
    if is_run {
        let report = vtwist_cli::run(&config)?;
        let text = match format {
            Format::Json => output::json(&report),
            Format::Csv => output::run_csv(&report)?,
        };
        emit(&text, path)?;
        Ok(report.exit_status)
    } else {
        let report = vtwist_cli::tables(&config)?;
        let text = match format {
            Format::Json => output::json(&report),
            Format::Csv => output::tables_report_csv(&report)?,
        };
        emit(&text, path)?;
        Ok(0)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            print!("{}", e.to_json());
            ExitCode::from(e.exit_status() as u8)
        }
    }
}
