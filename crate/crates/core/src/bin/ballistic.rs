use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ballistic_core::scenario::{
    parse_config_with_overrides, presets, run_scenario, write_bundle, Format,
};
use ballistic_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ballistic",
    version,
    about = "Gaussian dispersion and double-slit interference as ballistic diffusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or scenario file and write its outputs.
    Simulate {
        /// Preset name (see `presets`) or path to a scenario file.
        scenario: String,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Comma-separated output formats.
        #[arg(long, default_value = "csv,pgm", value_delimiter = ',')]
        format: Vec<String>,
        /// `section.key=value`, may be repeated.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// List built-in presets.
    Presets,
    /// Print the fully resolved scenario file for a preset or path.
    Show {
        scenario: String,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn load_text(arg: &str) -> Result<String> {
    if presets::preset_text(arg).is_some() {
        return Ok(arg.to_string());
    }
    let path = Path::new(arg);
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate {
            scenario,
            out,
            format,
            overrides,
        } => {
            let formats = format
                .iter()
                .map(|f| f.parse())
                .collect::<Result<Vec<Format>>>()?;
            let scenario = parse_config_with_overrides(&load_text(&scenario)?, &overrides)?;
            let bundle = run_scenario(&scenario)?;
            if bundle.nonpositive_cells > 0 {
                eprintln!(
                    "warning: local diffusivity rule met {} non-positive density cells",
                    bundle.nonpositive_cells
                );
            }
            for p in write_bundle(&bundle, &out, &formats)? {
                println!("{}", p.display());
            }
        }
        Command::Presets => {
            for name in presets::PRESET_NAMES {
                println!("{name:6}  {}", presets::describe(name).unwrap_or(""));
            }
        }
        Command::Show {
            scenario,
            overrides,
        } => {
            let scenario = parse_config_with_overrides(&load_text(&scenario)?, &overrides)?;
            print!("{}", scenario.to_config_string());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidParameter(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
