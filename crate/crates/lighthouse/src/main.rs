use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lighthouse::commands::{self, Command};
use lighthouse::config::RunConfig;
use lighthouse::error::CliError;
use lighthouse::output::Outputs;
use lighthouse::presets;

#[derive(Parser)]
#[command(
    name = "lighthouse",
    version,
    about = "Lighthouse spiking networks: simulation and linear stability"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Bundled preset (fig2 .. fig10); ignored when --config is given.
    #[arg(long, global = true)]
    figure: Option<String>,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the seed in the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Event-driven simulation on a graph.
    SimGraph,
    /// Simulation of the discretised field.
    SimField,
    /// Period of the synchronous orbit over alpha and row sum.
    Period,
    /// Spectrum of the synchronous orbit on a network.
    Spectrum,
    /// Master stability function over the complex plane.
    Msf,
    /// Travelling-wave periods over wave number and speed.
    Dispersion,
    /// Static/dynamic Turing instability curve and spectrum.
    Turing,
    /// Bump widths and stability over rho and alpha.
    Bump,
    /// Bump eigenvalues and the level sets of the Evans function.
    BumpSpectrum,
    /// Bumps of the firing-rate reduction.
    RateBump,
    /// Bump under a mid-run change of alpha.
    Wander,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::SimGraph => Command::SimGraph,
            Cmd::SimField => Command::SimField,
            Cmd::Period => Command::Period,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Msf => Command::Msf,
            Cmd::Dispersion => Command::Dispersion,
            Cmd::Turing => Command::Turing,
            Cmd::Bump => Command::Bump,
            Cmd::BumpSpectrum => Command::BumpSpectrum,
            Cmd::RateBump => Command::RateBump,
            Cmd::Wander => Command::Wander,
        }
    }
}

fn load(cli: &Cli) -> Result<(RunConfig, PathBuf), CliError> {
    let (mut cfg, base) = match (&cli.config, &cli.figure) {
        (Some(p), _) => {
            let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
            (RunConfig::load(p)?, base)
        }
        (None, Some(f)) => (presets::preset(f)?, PathBuf::from(".")),
        (None, None) => {
            return Err(CliError::Config(
                "either --config or --figure is required".into(),
            ))
        }
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok((cfg, base))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let (cfg, base) = load(cli)?;
    let cmd: Command = cli.cmd.into();
    let mut out = Outputs::new(&cli.out);
    let notes = commands::run(cmd, &cfg, &base, &mut out)?;
    out.manifest(
        cmd.name(),
        cli.figure.as_deref().filter(|_| cli.config.is_none()),
        &cfg,
    )?;
    for n in notes {
        println!("{n}");
    }
    println!("wrote {} to {}", out.files.join(", "), cli.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
