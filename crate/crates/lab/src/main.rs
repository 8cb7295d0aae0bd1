use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wegner_lab::config::OutputFormat;
use wegner_lab::output::{DEFAULT_OUT_DIR, OUT_DIR_ENV};
use wegner_lab::presets::{preset, PRESET_NAMES};
use wegner_lab::{run, ConfigError, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(name = "wegner-lab", version, about = "Monte Carlo checks of Wegner bounds for alloy-type models")]
struct Cli {
    /// Record format; overrides the config.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo samples; overrides the config.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Directory for record files.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the experiment described by a TOML file.
    Run { config: PathBuf },
    /// Run a built-in experiment, or print it with --emit.
    Preset {
        name: String,
        #[arg(long)]
        emit: bool,
    },
    /// List the built-in experiments.
    Presets,
}

fn apply_overrides(cli: &Cli, mut config: ExperimentConfig) -> ExperimentConfig {
    if let Some(f) = cli.format {
        config.format = Some(match f {
            Format::Csv => OutputFormat::Csv,
            Format::Jsonl => OutputFormat::Jsonl,
        });
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(n) = cli.samples {
        config.samples = Some(n);
    }
    config
}

fn execute(cli: &Cli, config: ExperimentConfig) -> Result<ExitCode, ConfigError> {
    let config = apply_overrides(cli, config);
    config.validate()?;
    let out = cli
        .out
        .clone()
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let report = run(&config, Some(&out))?;
    println!("{}", serde_json::to_string(&report).expect("reports serialize"));
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => std::fs::read_to_string(config)
            .map_err(|e| ConfigError::Invalid(format!("{}: {e}", config.display())))
            .and_then(|text| ExperimentConfig::from_toml(&text))
            .and_then(|c| execute(&cli, c)),
        Command::Preset { name, emit: true } => preset(name).map(|c| {
            print!("{}", apply_overrides(&cli, c).to_toml());
            ExitCode::SUCCESS
        }),
        Command::Preset { name, emit: false } => preset(name).and_then(|c| execute(&cli, c)),
        Command::Presets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
