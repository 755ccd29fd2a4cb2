use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qwalk_core::cli::{exit_code, run_command, write_outputs};
use qwalk_core::config::{ExperimentConfig, ExperimentKind, OutputFormat};

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Noisy coined quantum walks on neutral-atom gate sets")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Experiment config (TOML). Without it every default applies.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Accepted for scripts; every run is deterministic.
    #[arg(long)]
    seedless: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity per step for one walk.
    Simulate(Common),
    /// One fidelity curve per value of the gate-family parameter a.
    SweepA(Common),
    /// Steps within each tolerance.
    Tolerance(Common),
    /// Composite-fidelity gains from larger native gates.
    Composite(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (kind, common) = match args.command {
        Command::Simulate(c) => (ExperimentKind::Simulate, c),
        Command::SweepA(c) => (ExperimentKind::SweepA, c),
        Command::Tolerance(c) => (ExperimentKind::Tolerance, c),
        Command::Composite(c) => (ExperimentKind::Composite, c),
    };
    let format = common.format.map(|f| match f {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    });
    let result = (|| {
        let cfg = match &common.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        let out = common.out.clone().or_else(|| cfg.output.path.clone().map(PathBuf::from));
        let rendered = run_command(Some(kind), &cfg, format)?;
        eprintln!("{}", rendered.summary);
        if let Some(text) = write_outputs(&rendered, out.as_deref())? {
            print!("{text}");
        }
        Ok(())
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
