use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use glvar_cli::accept::accept;
use glvar_cli::figures::{self, FigureName};
use glvar_cli::source::generate_caches;
use glvar_cli::theory::{self, SumName};
use glvar_cli::{CliError, CliResult, RunConfig};

#[derive(Parser)]
#[command(name = "glvar", version, about = "Global level number variance of integrable billiards")]
struct Args {
    /// TOML run configuration (defaults to the built-in desk-scale run)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the aspect-ratio sample and the randomized checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides the configuration)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Start from the full-scale configuration instead of the desk one
    #[arg(long, global = true)]
    paper_scale: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one spectrum cache file per aspect ratio
    Generate,
    /// Reproduce a figure as CSV tables and SVG plots
    Figure {
        #[arg(value_parser = |s: &str| s.parse::<FigureName>())]
        name: FigureName,
    },
    /// Run the acceptance suite
    Accept,
    /// Evaluate one orbit sum on the configured grid
    Theory {
        #[arg(value_parser = |s: &str| s.parse::<SumName>())]
        sum: SumName,
    },
    /// Print the effective configuration as TOML
    Config,
}

fn load(args: &Args) -> CliResult<RunConfig> {
    let mut cfg = match (&args.config, args.paper_scale) {
        (Some(_), true) => {
            return Err(CliError::Config("--paper-scale and --config are mutually exclusive".into()));
        }
        (Some(path), false) => RunConfig::load(path)?,
        (None, true) => RunConfig::full_scale(),
        (None, false) => RunConfig::desk(),
    };
    if let Some(seed) = args.seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(out) = &args.out {
        cfg.output = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: &Args) -> CliResult<bool> {
    let cfg = load(args)?;
    let out = cfg.output.clone();
    let cache = out.join("cache");
    match &args.command {
        Command::Generate => {
            let s = generate_caches(&cfg, &cache)?;
            println!(
                "{} spectra in {}: {} written, {} regenerated, {} already valid",
                cfg.alphas().len(),
                cache.display(),
                s.written,
                s.regenerated,
                s.hits
            );
        }
        Command::Figure { name } => {
            let fig = figures::render(*name, &cfg, Some(&cache))?;
            fig.write(&out)?;
            for t in &fig.tables {
                println!("wrote {}", out.join(format!("{}.csv", t.name)).display());
            }
            for (n, _) in &fig.plots {
                println!("wrote {}", out.join(format!("{n}.svg")).display());
            }
            for note in &fig.notes {
                println!("note: {note}");
            }
        }
        Command::Accept => {
            let suite = accept(&cfg, Some(&cache))?;
            suite.write(&out)?;
            print!("{}", suite.report.to_text());
            return Ok(suite.report.passed());
        }
        Command::Theory { sum } => {
            let series = theory::evaluate(*sum, &cfg)?;
            std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
            let path = out.join(format!("theory-{}.csv", sum.as_str()));
            std::fs::write(&path, series.to_csv()).map_err(|e| CliError::io(&path, e))?;
            println!("wrote {}", path.display());
        }
        Command::Config => print!("{}", cfg.to_toml()),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (CliError::Config(_) | CliError::MissingPrerequisite { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
