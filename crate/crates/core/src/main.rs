use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gpc_surrogate::harness::{cmd_build, cmd_eval, cmd_leja, cmd_study, StudyConfig};
use gpc_surrogate::Result;

#[derive(Parser)]
#[command(
    name = "gpc-surrogate",
    version,
    about = "Sparse-grid operator surrogates and convergence studies"
)]
struct Cli {
    /// Overrides the error sampling seed of the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the output directory of the config.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and save one model per budget.
    Build { config: PathBuf },
    /// Evaluate a saved model on a field CSV.
    Eval { model: PathBuf, field: PathBuf },
    /// Run a convergence study.
    Study { config: PathBuf },
    /// Export the first n Leja points.
    Leja {
        #[arg(long)]
        n: usize,
    },
}

fn load(path: &std::path::Path, seed: Option<u64>) -> Result<StudyConfig> {
    let mut cfg = StudyConfig::load(path)?;
    if let Some(s) = seed {
        cfg.error.seed = s;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let out_override = cli.out_dir.clone();
    let dir_for = |cfg: &StudyConfig| {
        out_override
            .clone()
            .unwrap_or_else(|| PathBuf::from(&cfg.output.directory))
    };
    match &cli.command {
        Command::Build { config } => {
            let cfg = load(config, cli.seed)?;
            cmd_build(&cfg, &dir_for(&cfg))?;
        }
        Command::Eval { model, field } => {
            let dir = out_override.clone().unwrap_or_else(|| PathBuf::from("."));
            let out = dir.join("eval.csv");
            cmd_eval(model, field, &out)?;
            println!("{}", out.display());
        }
        Command::Study { config } => {
            let cfg = load(config, cli.seed)?;
            let dir = dir_for(&cfg);
            let res = cmd_study(&cfg, &dir)?;
            for s in &res.slopes {
                println!(
                    "{}: fitted slope {:.3}, predicted -{:.3}",
                    s.quantity, s.slope, s.theory
                );
            }
            println!("{}", dir.join("rates.csv").display());
        }
        Command::Leja { n } => {
            let dir = out_override.clone().unwrap_or_else(|| PathBuf::from("."));
            println!("{}", cmd_leja(*n, &dir)?.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
