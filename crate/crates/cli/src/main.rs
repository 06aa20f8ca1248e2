//! `cellspace`: batch front end for cell-space automata experiments.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a failed check
//! (MAIN-THEOREM-VIOLATION in `analyze`, a failed replay in `verify`, a
//! failed tiling check in `tile`).

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use cellspace_core::analyzer::Schedule;
use cellspace_core::config::RuleDescriptor;
use clap::{Args, Parser, Subcommand};

use commands::Output;
use config::Overrides;

#[derive(Parser)]
#[command(name = "cellspace", version, about = "Cellular automata on cell spaces: geometry, Følner sets, tilings, entropy and Garden-of-Eden analysis")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config: {"schema": 1, "space": ..., "rule": ..., "params": ...}.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Space shorthand (z1, z2, z3, p4m, p4m:twisted, dihedral:N) or JSON.
    #[arg(long)]
    space: Option<String>,
    /// Built-in rule name (eca:90, life, majority, ...) or JSON rule.
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on every single pattern enumeration.
    #[arg(long)]
    budget_patterns: Option<u64>,
    /// Window schedule: a..=b, a..b or a comma list of Følner indices.
    #[arg(long)]
    windows: Option<Schedule>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Interior, closure and boundary of params.set under params.e.
    Geometry(Common),
    /// CSV of Følner sets: i, size, defect, boundary ratio.
    Folner(Common),
    /// Greedy tiling: centres as JSON, density table as CSV.
    Tile {
        #[command(flatten)]
        common: Common,
        /// Where to write the density CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// CSV entropy series of the image (or full shift).
    Entropy(Common),
    /// Garden-of-Eden report; --rule eca:all sweeps all elementary rules.
    Analyze(Common),
    /// Replays every witness of a saved report.
    Verify {
        report: PathBuf,
        /// Only replay the witnesses; skip recomputing the report.
        #[arg(long)]
        witnesses_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(c: &Common) -> Result<config::ExperimentConfig> {
    let o = Overrides {
        space: c.space.clone(),
        rule: c.rule.clone(),
        seed: c.seed,
        budget_patterns: c.budget_patterns,
        windows: c.windows.clone(),
    };
    config::load(c.config.as_deref(), &o)
}

fn run(cli: Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let (out, csv_path): (Output, Option<PathBuf>);
    let target: Option<PathBuf>;
    match cli.command {
        Command::Geometry(c) => {
            let cfg = load(&c)?;
            out = cfg.space.build(commands::GeometryCmd(&cfg))??;
            (target, csv_path) = (c.out, None);
        }
        Command::Folner(c) => {
            let cfg = load(&c)?;
            out = cfg.space.build(commands::FolnerCmd(&cfg))??;
            (target, csv_path) = (c.out, None);
        }
        Command::Tile { common, csv } => {
            let cfg = load(&common)?;
            out = cfg.space.build(commands::TileCmd(&cfg))??;
            (target, csv_path) = (common.out, csv);
        }
        Command::Entropy(c) => {
            let cfg = load(&c)?;
            out = cfg.space.build(commands::EntropyCmd(&cfg))??;
            (target, csv_path) = (c.out, None);
        }
        Command::Analyze(c) => {
            let cfg = load(&c)?;
            let sweep = matches!(&cfg.rule, Some(RuleDescriptor::Name(n) | RuleDescriptor::Builtin { builtin: n }) if n == "eca:all");
            out = if sweep {
                commands::eca_sweep(&cfg.params)?
            } else {
                cfg.space.build(commands::AnalyzeCmd(&cfg))??
            };
            (target, csv_path) = (c.out, None);
        }
        Command::Verify {
            report,
            witnesses_only,
            out: o,
        } => {
            let text = std::fs::read_to_string(&report).with_context(|| format!("reading {}", report.display()))?;
            let value = serde_json::from_str(&text).with_context(|| format!("parsing {}", report.display()))?;
            out = commands::verify(&value, !witnesses_only)?;
            (target, csv_path) = (o, None);
        }
    }
    write(target.as_deref(), &out.text)?;
    if let (Some(path), Some(csv)) = (csv_path, &out.csv) {
        write(Some(&path), csv)?;
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
