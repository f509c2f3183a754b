use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wherald_cli::{execute, Format, Overrides};

#[derive(Parser)]
#[command(name = "wherald", version, about = "Heralded W-state scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a TOML config.
    Run {
        config: PathBuf,
        /// Report path; overrides `output` in the config.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Photon truncation per mode; overrides `n_max` in the config.
        #[arg(long)]
        nmax: Option<u8>,
        /// Reserved: every scenario is deterministic.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = FormatArg::Machine)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Machine,
    Text,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WHERALD_LOG", "warn")).init();
    let cli = Cli::parse();
    let Command::Run { config, output, nmax, seed, format } = cli.command;
    if let Some(seed) = seed {
        log::debug!("seed {seed} ignored: no stochastic path");
    }
    let overrides = Overrides {
        output,
        n_max: nmax,
        format: match format {
            FormatArg::Machine => Format::Machine,
            FormatArg::Text => Format::Text,
        },
    };
    match execute(&config, &overrides) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wherald: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
