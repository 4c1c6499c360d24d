use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dsnn::Ablation;
use dsnn_cli::runner::{self, ParamSource, Source};
use dsnn_cli::Model;

#[derive(Parser)]
#[command(
    name = "dsnn",
    version,
    about = "Directionally selective motion detector over frame sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Process one scene or PGM directory and write the per-frame CSV.
    Run {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        model: Model,
        #[arg(long)]
        ablation: Option<Ablation>,
    },
    /// Peak responses over a parameter sweep suite.
    Sweep {
        /// Suite name (speed-sweep or gray-sweep).
        suite: String,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        model: Model,
    },
    /// Export a library scene as numbered binary PGM files.
    Gen {
        #[arg(long)]
        scene: String,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run intact, ON-blocked and OFF-blocked networks; writes three CSVs.
    Ablate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Base CSV path; `_intact`, `_on_blocked`, `_off_blocked` are appended.
        #[arg(long, default_value = "ablate.csv")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        model: Model,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Library scene name.
    #[arg(long)]
    scene: Option<String>,
    /// Directory of numbered binary PGM frames.
    #[arg(long)]
    frames: Option<PathBuf>,
}

impl SourceArgs {
    fn source(self) -> Source {
        match (self.scene, self.frames) {
            (Some(s), _) => Source::Scene(s),
            (None, Some(dir)) => Source::Frames(dir),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    /// Parameter file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Single parameter override, `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ParamArgs {
    fn resolve(self, ablation: Option<Ablation>) -> anyhow::Result<ParamSource> {
        let ps = ParamSource {
            config: None,
            overrides: self.overrides,
            ablation,
        };
        Ok(ps.with_config_file(self.config.as_deref())?)
    }
}

fn emit(out: Option<&Path>, csv: &str, summary: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            runner::write_text(path, csv)?;
            print!("{summary}");
        }
        None => {
            print!("{csv}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run {
            source,
            params,
            out,
            model,
            ablation,
        } => {
            let source = source.source();
            let report = runner::run_source(&source, &params.resolve(ablation)?, model)
                .with_context(|| format!("run failed for {source:?}"))?;
            emit(
                out.as_deref(),
                &report.to_csv(),
                &report.summary().to_string(),
            )?;
        }
        Command::Sweep {
            suite,
            params,
            out,
            model,
        } => {
            let rows = runner::run_sweep(&suite, &params.resolve(None)?, model)?;
            let csv = runner::sweep_csv(&rows, model);
            emit(out.as_deref(), &csv, &format!("cells: {}\n", rows.len()))?;
        }
        Command::Gen { scene, out } => {
            let n = runner::generate(&scene, &out)?;
            println!("wrote {n} frames to {}", out.display());
        }
        Command::Ablate {
            source,
            params,
            out,
            model,
        } => {
            let source = source.source();
            for (mode, report) in runner::run_ablations(&source, &params.resolve(None)?, model)? {
                let path = runner::ablation_path(&out, mode);
                runner::write_text(&path, &report.to_csv())?;
                println!("[{}] {}", mode, path.display());
                print!("{}", report.summary());
            }
        }
    }
    Ok(())
}
