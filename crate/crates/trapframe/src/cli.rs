use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::{key_help, parse_override, RunConfig};
use crate::error::{AppError, AppResult};
use crate::report::{TOOL, VERSION};
use crate::synth::{write_corpus, CorpusKind, SynthSpec};

#[derive(Parser, Debug)]
#[command(name = "trapframe", version, about = "Frame-split audio features and two-class evaluation", after_help = key_help())]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by the pipeline commands; each overrides a config key.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// TOML run configuration
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `seed`
    #[arg(long)]
    pub seed: Option<u64>,
    /// `opening_fraction,closing_fraction`, e.g. 0.05,0.05
    #[arg(long, value_name = "A,C")]
    pub frames: Option<String>,
    /// `out_dir`
    #[arg(long)]
    pub out: Option<String>,
    /// `manifest`
    #[arg(long)]
    pub manifest: Option<String>,
    /// `features_cache`
    #[arg(long)]
    pub cache: Option<String>,
    /// `baseline_cache`
    #[arg(long)]
    pub baseline_cache: Option<String>,
    /// `iterations`
    #[arg(long)]
    pub iterations: Option<i64>,
    /// `threads`
    #[arg(long)]
    pub threads: Option<i64>,
    /// Any config key, e.g. --set classifiers='["quadratic"]'
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the 24-feature cache (and the 8-feature whole-signal cache with --baseline)
    #[command(after_help = key_help())]
    Extract {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        baseline: bool,
    },
    /// FDR ranking, t screen, J criteria and scatter-pair exports
    #[command(after_help = key_help())]
    Rank {
        #[command(flatten)]
        common: Common,
    },
    /// Principal components of the standardized features, with loadings
    #[command(after_help = key_help())]
    Pca {
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo cross-validation over classifiers and feature sets
    #[command(after_help = key_help())]
    Evaluate {
        #[command(flatten)]
        common: Common,
    },
    /// Frame features against whole-signal features under shared splits
    #[command(after_help = key_help())]
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Generate a synthetic labelled WAV corpus with a manifest
    Synth {
        /// opening-noise, opening-offset or uniform
        #[arg(long, default_value = "opening-noise")]
        kind: CorpusKind,
        #[arg(long, default_value_t = 20)]
        clips_per_class: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Destination directory
        #[arg(long)]
        out: PathBuf,
    },
}

impl Common {
    fn overrides(&self) -> AppResult<Vec<(String, toml::Value)>> {
        use toml::Value;
        let mut o = Vec::new();
        if let Some(seed) = self.seed {
            let seed = i64::try_from(seed).map_err(|_| AppError::Usage("--seed must fit in 63 bits".into()))?;
            o.push(("seed".into(), Value::Integer(seed)));
        }
        if let Some(frames) = &self.frames {
            let parsed: Vec<f64> = frames
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| AppError::Usage(format!("--frames expects two decimals A,C, got `{frames}`")))?;
            let [a, c] = parsed[..] else {
                return Err(AppError::Usage(format!("--frames expects two decimals A,C, got `{frames}`")));
            };
            o.push(("opening_fraction".into(), Value::Float(a)));
            o.push(("closing_fraction".into(), Value::Float(c)));
        }
        for (key, v) in [
            ("out_dir", &self.out),
            ("manifest", &self.manifest),
            ("features_cache", &self.cache),
            ("baseline_cache", &self.baseline_cache),
        ] {
            if let Some(v) = v {
                o.push((key.into(), Value::String(v.clone())));
            }
        }
        for (key, v) in [("iterations", self.iterations), ("threads", self.threads)] {
            if let Some(v) = v {
                o.push((key.into(), Value::Integer(v)));
            }
        }
        for s in &self.set {
            o.push(parse_override(s)?);
        }
        Ok(o)
    }

    pub fn resolve(&self) -> AppResult<RunConfig> {
        Ok(RunConfig::load(self.config.as_deref(), &self.overrides()?)?)
    }
}

fn echo(command: &str, cfg: &RunConfig) {
    println!("# {TOOL} {VERSION} {command} seed={} config_sha256={}", cfg.seed, cfg.hash());
    for line in cfg.to_toml().lines() {
        println!("#   {line}");
    }
}

fn with_pool<T>(threads: usize, f: impl FnOnce() -> T + Send) -> AppResult<T>
where
    T: Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| AppError::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn run(cli: Cli) -> AppResult<Vec<PathBuf>> {
    let (name, common) = match &cli.command {
        Command::Synth {
            kind,
            clips_per_class,
            seed,
            out,
        } => {
            let manifest = write_corpus(out, &SynthSpec::new(*kind, *clips_per_class, *seed))?;
            println!("generated {} clips", 2 * clips_per_class);
            return Ok(vec![manifest]);
        }
        Command::Extract { common, .. } => ("extract", common),
        Command::Rank { common } => ("rank", common),
        Command::Pca { common } => ("pca", common),
        Command::Evaluate { common } => ("evaluate", common),
        Command::Compare { common } => ("compare", common),
    };
    let cfg = common.resolve()?;
    echo(name, &cfg);
    with_pool(cfg.threads, || match &cli.command {
        Command::Extract { baseline, .. } => commands::extract(&cfg, *baseline),
        Command::Rank { .. } => commands::rank(&cfg),
        Command::Pca { .. } => commands::pca(&cfg),
        Command::Evaluate { .. } => commands::evaluate(&cfg),
        Command::Compare { .. } => commands::compare(&cfg),
        Command::Synth { .. } => unreachable!("handled above"),
    })?
}

/// One-line JSON error record.
pub fn error_record(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Parses arguments, runs, and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            eprintln!("{}", error_record("usage", e.to_string().trim()));
            return 2;
        }
    };
    match run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("{}", error_record(e.kind(), &e.to_string()));
            if matches!(e, AppError::FailedCells { .. }) {
                3
            } else {
                1
            }
        }
    }
}
