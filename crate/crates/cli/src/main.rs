//! `fluency`: validate a corpus, extract features, evaluate classifiers and
//! print reports.
//!
//! Exit status: 0 on success, 1 on data violations or I/O failures, 2 on
//! usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use fluency_core::functionals::ExtractionMode;
use fluency_core::learn::{ModelKind, ModelSpec};
use fluency_core::pipeline::{self, RunConfig};

#[derive(Parser)]
#[command(name = "fluency", version, about = "Speech and text assessment of repeated-reading summaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check transcripts, disfluency logs, trees and ratings.
    Validate {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Write per-family feature CSVs into --out.
    Extract(RunArgs),
    /// Train and score the classifier grids on features in --out.
    Evaluate(RunArgs),
    /// Print the text rendering of the reports in --out.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
    /// Pairwise rater agreement per criterion.
    Agreement {
        #[arg(long)]
        manifest: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Preset name (is09-analog, egemaps-analog) or a JSON preset file.
    #[arg(long = "preset")]
    presets: Vec<String>,
    /// Frequency-ranked lemma list, one lemma per line.
    #[arg(long)]
    wordlist: Option<PathBuf>,
    /// Lemmas ranked beyond this count as sophisticated.
    #[arg(long, default_value_t = fluency_core::lexrich::DEFAULT_SOPHISTICATION_RANK)]
    sophistication_rank: usize,
    #[arg(long, default_value_t = -40.0, allow_negative_numbers = true)]
    silence_floor_db: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "fragment")]
    mode: ExtractionMode,
    #[arg(long)]
    out: PathBuf,
    /// Restrict the classifier families (repeatable).
    #[arg(long = "model")]
    models: Vec<ModelKind>,
    #[arg(long, default_value_t = 1.0)]
    svm_c: f64,
    /// RBF width; defaults to 1/d.
    #[arg(long)]
    svm_gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    logistic_c: f64,
    #[arg(long, default_value_t = 5)]
    knn_k: usize,
    #[arg(long)]
    tree_max_depth: Option<usize>,
    #[arg(long, default_value_t = 1)]
    tree_min_leaf: usize,
    #[arg(long, default_value_t = 100)]
    forest_trees: usize,
}

impl RunArgs {
    fn config(&self) -> anyhow::Result<RunConfig> {
        require(&self.manifest)?;
        if let Some(w) = &self.wordlist {
            require(w)?;
        }
        let mut cfg = RunConfig::new(&self.manifest, &self.out);
        if !self.presets.is_empty() {
            cfg.presets = self.presets.clone();
        }
        cfg.wordlist = self.wordlist.clone();
        cfg.sophistication_rank = self.sophistication_rank;
        cfg.silence_floor_db = self.silence_floor_db;
        cfg.seed = self.seed;
        cfg.mode = self.mode;
        let kinds = if self.models.is_empty() {
            ModelKind::ALL.to_vec()
        } else {
            self.models.clone()
        };
        cfg.models = kinds
            .into_iter()
            .map(|kind| ModelSpec {
                svm_c: self.svm_c,
                svm_gamma: self.svm_gamma,
                logistic_c: self.logistic_c,
                knn_k: self.knn_k,
                tree_max_depth: self.tree_max_depth,
                tree_min_leaf: self.tree_min_leaf,
                forest_trees: self.forest_trees,
                ..ModelSpec::new(kind)
            })
            .collect();
        Ok(cfg)
    }
}

fn require(path: &Path) -> anyhow::Result<()> {
    if !path.exists() {
        bail!("{}: no such file", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Validate { manifest } => {
            require(&manifest)?;
            let report = pipeline::validate(&manifest)?;
            print!("{}", report.render());
            return Ok(if report.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Extract(args) => {
            let cfg = args.config()?;
            let summary = pipeline::extract(&cfg)?;
            for f in &summary.files {
                println!("{}", f.display());
            }
            log::info!("extracted {} sessions (config {})", summary.sessions, cfg.config_hash());
        }
        Command::Evaluate(args) => {
            let cfg = args.config()?;
            let summary = pipeline::evaluate(&cfg)?;
            for f in &summary.files {
                println!("{}", f.display());
            }
        }
        Command::Report { out } => {
            print!("{}", pipeline::report(&out).context("reading reports")?);
        }
        Command::Agreement { manifest } => {
            require(&manifest)?;
            for (c, a) in pipeline::agreement(&manifest)? {
                println!("{c}\t{a:.4}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
