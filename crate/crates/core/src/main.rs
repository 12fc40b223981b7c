use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zetapade::harness::{emit_outputs, read_summary, run_stages, summary_path, RunConfig, Stage};
use zetapade::Error;

#[derive(Parser, Debug)]
#[command(name = "zetapade", version, about = "Padé approximants to the Hurwitz zeta function and their asymptotic checks")]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Working precision in bits, overriding the config.
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Node construction and node-level rates.
    Nodes,
    /// Padé solve, weights, contour comparison and the Y matrix.
    Pade,
    /// Constrained equilibrium solve and certification.
    Equilibrium,
    /// Outer parametrix, Airy model and subexponential factor.
    Phase,
    /// Matching, lips and strong asymptotics.
    Parametrix,
    /// Full pipeline.
    Verify,
    /// Print the acceptance table of an earlier run of this config.
    Report,
}

fn load(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(b) = cli.bits {
        cfg.precision.bits = b;
    }
    if let Some(o) = &cli.out {
        cfg.output.dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let stages: Vec<Stage> = match cli.command {
        Command::Nodes => vec![Stage::Nodes],
        Command::Pade => vec![Stage::Pade],
        Command::Equilibrium => vec![Stage::Equilibrium],
        Command::Phase => vec![Stage::Phase],
        Command::Parametrix => vec![Stage::Parametrix],
        Command::Verify => Stage::ALL.to_vec(),
        Command::Report => {
            let path = summary_path(&cfg.output.dir, &cfg.hash());
            return match read_summary(&path) {
                Ok(s) => {
                    print!("{}", s.report.text_table());
                    ExitCode::from(s.report.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    let out = match run_stages(&cfg, &stages) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", out.report.text_table());
    match emit_outputs(&cfg, &out, &cfg.output.dir) {
        Ok(paths) => {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(out.report.exit_code() as u8)
}
