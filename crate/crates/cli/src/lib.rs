//! The `symdyn` command line.
//!
//! Commands run in-process through [`run`], which returns the exit status:
//! `0` success, `1` input error, `2` degenerate system, `3` refused
//! precondition, `4` a self-check failed.

pub mod cache;
pub mod config;
pub mod corpus;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use symdyn_core::empirical::{decay_report, IetOracle, LanguageOracle};
use symdyn_core::gamma::{self, HalfPower, MtCheck};
use symdyn_core::iet::{IetSystem, QuadraticFieldElement};
use symdyn_core::sft::{parse_sft, EdgeSft};
use symdyn_core::shiftspace::SelfSimilarShiftMetric;
use symdyn_core::Error;

use cache::WordCache;
use config::ConfigFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    Refused(String),
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Degenerate(_) => 2,
            CliError::Refused(_) => 3,
            CliError::CheckFailed(_) => 4,
        }
    }

    fn from_core(context: &str, e: Error) -> Self {
        let msg = format!("{context}: {e}");
        match e {
            Error::Degenerate(_) | Error::EmptySubshift(_) => CliError::Degenerate(msg),
            Error::Refused(_) => CliError::Refused(msg),
            Error::WitnessRejected(_) | Error::BracketViolation { .. } => CliError::CheckFailed(msg),
            _ => CliError::Input(msg),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Parser)]
#[command(name = "symdyn", version, about = "Expansivity constants and asymptotic pairs of symbolic systems")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// File of key=value defaults; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Args, Default)]
struct Common {
    /// Metric base λ > 1.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Include witness pairs in JSON output.
    #[arg(long)]
    witness: bool,
    /// Also write `N,product` pairs for plotting.
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact γ(σᴺ) for N = 1..n_max.
    Gamma {
        /// Edge-graph JSON or forbidden-words text.
        #[arg(long)]
        sft: PathBuf,
        /// Cross-check m(N) by bisection and replay each certificate.
        #[arg(long)]
        oracle_check: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Shortest homoclinic pair, or "none".
    Homoclinic {
        #[arg(long)]
        sft: PathBuf,
    },
    /// Homoclinic witness against boundedness of γ(σᴺ)·λ^{N/2}.
    MtCheck {
        #[arg(long, conflicts_with = "random_corpus", required_unless_present = "random_corpus")]
        sft: Option<PathBuf>,
        /// Check this many seeded random edge shifts instead of a file.
        #[arg(long)]
        random_corpus: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Horizon-limited brackets for the three-interval exchange coding.
    IetExplore {
        /// Field element p+q*sqrt2+r*sqrt3+s*sqrt6 (default sqrt2-1).
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Default sqrt3-1.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Horizon K (default 50·n_max).
        #[arg(long)]
        horizon: Option<usize>,
        /// Word-set cache root (default $SYMDYN_CACHE_DIR, else a temp dir).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Gamma,
    Homoclinic,
    MtCheck,
    IetExplore,
}

/// Flags merged over the config file and defaults.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub inputs: Vec<PathBuf>,
    pub lambda: f64,
    pub n_max: usize,
    pub horizon: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub random_corpus: Option<usize>,
    pub witness: bool,
    pub oracle_check: bool,
    pub emit_plot_data: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub threads: Option<usize>,
}

impl RunConfig {
    fn resolve(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let empty = Common::default();
        let (command, inputs, common, extra) = match &cli.command {
            Command::Gamma { sft, oracle_check, common } => {
                (CommandKind::Gamma, vec![sft.clone()], common, (*oracle_check, None, None, None, None, None, None))
            }
            Command::Homoclinic { sft } => (CommandKind::Homoclinic, vec![sft.clone()], &empty, (false, None, None, None, None, None, None)),
            Command::MtCheck { sft, random_corpus, seed, common } => (
                CommandKind::MtCheck,
                sft.iter().cloned().collect(),
                common,
                (false, *random_corpus, *seed, None, None, None, None),
            ),
            Command::IetExplore { a, b, horizon, cache_dir, common } => (
                CommandKind::IetExplore,
                Vec::new(),
                common,
                (false, None, None, a.clone(), b.clone(), *horizon, cache_dir.clone()),
            ),
        };
        let (oracle_check, random_corpus, seed, a, b, horizon, cache_dir) = extra;
        let default_n_max = match command {
            CommandKind::MtCheck => 40,
            CommandKind::IetExplore => 4,
            _ => 10,
        };
        let cfg = RunConfig {
            lambda: common.lambda.or(file.get("lambda")?).unwrap_or(2.0),
            n_max: common.n_max.or(file.get("n_max")?).unwrap_or(default_n_max),
            horizon: horizon.or(file.get("horizon")?),
            format: common.format.or(file.get("format")?).unwrap_or(Format::Csv),
            output: common.output.clone().or(file.get("output")?),
            seed: seed.or(file.get("seed")?).unwrap_or(0),
            random_corpus,
            witness: common.witness || file.flag("witness")?,
            oracle_check: oracle_check || file.flag("oracle_check")?,
            emit_plot_data: common.emit_plot_data.clone().or(file.get("emit_plot_data")?),
            cache_dir: cache_dir.or(file.get("cache_dir")?),
            a: a.or(file.get("a")?),
            b: b.or(file.get("b")?),
            threads: cli.threads.or(file.get("threads")?),
            command,
            inputs,
        };
        if !(cfg.lambda.is_finite() && cfg.lambda > 1.0) {
            return Err(CliError::Input(format!("lambda must be > 1, got {}", cfg.lambda)));
        }
        if cfg.n_max == 0 {
            return Err(CliError::Input("n_max must be at least 1".into()));
        }
        if let Some(k) = cfg.horizon {
            if k < cfg.n_max {
                return Err(CliError::Input(format!("horizon {k} is smaller than n_max {}", cfg.n_max)));
            }
        }
        Ok(cfg)
    }

    fn metric(&self) -> SelfSimilarShiftMetric {
        SelfSimilarShiftMetric::new(self.lambda).expect("lambda validated")
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let result = RunConfig::resolve(cli).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Input(format!("worker pool: {e}")))?;
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let r = pool.install(|| dispatch(&cfg, &mut o, &mut e));
        err.write_all(&e).map_err(io_error)?;
        out.write_all(&o).map_err(io_error)?;
        r
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cfg.command {
        CommandKind::Gamma => cmd_gamma(cfg, out),
        CommandKind::Homoclinic => cmd_homoclinic(cfg, out),
        CommandKind::MtCheck => cmd_mt_check(cfg, out, err),
        CommandKind::IetExplore => cmd_iet_explore(cfg, out, err),
    }
}

fn load_sft(path: &Path) -> Result<EdgeSft, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_sft(&text).map_err(|e| CliError::from_core(&path.display().to_string(), e))
}

fn io_error(e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("write failed: {e}"))
}

/// Writes to `path` atomically, or to `out`.
fn emit(bytes: &[u8], path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        None => out.write_all(bytes).map_err(io_error),
        Some(p) => {
            let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_error)?;
            tmp.write_all(bytes).map_err(io_error)?;
            tmp.persist(p).map_err(|e| io_error(e.error))?;
            Ok(())
        }
    }
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(io_error)?;
    }
    w.into_inner().map_err(io_error)
}

fn json_bytes(v: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s.into_bytes()
}

#[derive(Serialize)]
struct PlotPoint {
    #[serde(rename = "N")]
    n: usize,
    product_log_lambda: HalfPower,
}

#[derive(Serialize)]
struct PlotBracket {
    #[serde(rename = "N")]
    n: usize,
    product_lower_log_lambda: HalfPower,
    product_upper_log_lambda: HalfPower,
}

pub fn cmd_gamma(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let path = &cfg.inputs[0];
    let sft = load_sft(path)?;
    let metric = cfg.metric();
    let ctx = path.display().to_string();
    let fit = gamma::mt_fit(&sft, &metric, cfg.n_max).map_err(|e| CliError::from_core(&ctx, e))?;
    if cfg.oracle_check {
        for r in &fit.results {
            let bisected = gamma::m_of_bisect(&sft, r.n).map_err(|e| CliError::from_core(&ctx, e))?;
            let witness = r.witness.as_ref().expect("gamma_exact attaches a certificate");
            let replay = gamma::replay_separation(&sft, &metric, r.n, witness).map_err(|e| CliError::from_core(&ctx, e))?;
            if bisected != r.m || replay != Some(r.m as u64) {
                return Err(CliError::CheckFailed(format!(
                    "N = {}: scan {} / bisection {bisected} / replay {replay:?}",
                    r.n, r.m
                )));
            }
        }
    }
    let rows: Vec<_> = fit.results.iter().map(|r| r.row(&metric)).collect();
    let bytes = match cfg.format {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => {
            let mut v = serde_json::json!({
                "lambda": cfg.lambda,
                "rows": rows,
                "c_min_log_lambda": fit.c_min,
                "verdict": fit.verdict,
            });
            if cfg.witness {
                v["witnesses"] = fit
                    .results
                    .iter()
                    .map(|r| {
                        let mut w = r.witness.as_ref().map(|w| w.to_json(&sft)).unwrap_or_default();
                        w["N"] = r.n.into();
                        w
                    })
                    .collect();
            }
            json_bytes(&v)
        }
    };
    emit(&bytes, cfg.output.as_deref(), out)?;
    if let Some(p) = &cfg.emit_plot_data {
        let pts: Vec<PlotPoint> = fit
            .results
            .iter()
            .map(|r| PlotPoint {
                n: r.n,
                product_log_lambda: r.product(),
            })
            .collect();
        emit(&csv_bytes(&pts)?, Some(p), out)?;
    }
    Ok(())
}

pub fn cmd_homoclinic(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let sft = load_sft(&cfg.inputs[0])?;
    let text = match sft.find_homoclinic_pair() {
        Some(w) => json_bytes(&w.to_json(&sft)),
        None => b"none\n".to_vec(),
    };
    out.write_all(&text).map_err(io_error)
}

fn mt_line(c: &MtCheck) -> String {
    let yes = |b: bool| if b { "yes" } else { "no" };
    match (c.homoclinic_width, c.bound) {
        (Some(w), Some(bound)) => format!(
            "homoclinic: yes (W={w}); products ≤ λ^{bound}: {}",
            yes(c.products_bounded)
        ),
        _ => format!("homoclinic: no; products bounded: {}", yes(c.products_bounded)),
    }
}

pub fn cmd_mt_check(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let metric = cfg.metric();
    if let Some(count) = cfg.random_corpus {
        let systems = corpus::random_infinite_corpus(cfg.seed, count, 4, 8);
        let mut violations = Vec::new();
        for (i, s) in systems.iter().enumerate() {
            let c = gamma::mt_check(s, &metric, cfg.n_max).map_err(|e| CliError::from_core(&format!("system {i}"), e))?;
            if !c.consistent() {
                violations.push(format!("system {i}: {} {}", mt_line(&c), s.to_json()));
            }
        }
        let mut text = format!(
            "corpus: {count} systems (seed {}), N ≤ {}, violations: {}\n",
            cfg.seed,
            cfg.n_max,
            violations.len()
        );
        for v in &violations {
            text.push_str(v);
            text.push('\n');
        }
        emit(text.as_bytes(), cfg.output.as_deref(), out)?;
        return if violations.is_empty() {
            Ok(())
        } else {
            Err(CliError::CheckFailed(format!("{} equivalence violations", violations.len())))
        };
    }

    let path = &cfg.inputs[0];
    let sft = load_sft(path)?;
    if !sft.is_infinite() {
        let _ = writeln!(err, "{}: finitely many points, skipped", path.display());
        return Err(CliError::Degenerate("degenerate system: skipped".into()));
    }
    let c = gamma::mt_check(&sft, &metric, cfg.n_max).map_err(|e| CliError::from_core(&path.display().to_string(), e))?;
    let bytes = match cfg.format {
        Format::Csv => format!("{}\n", mt_line(&c)).into_bytes(),
        Format::Json => {
            let mut v = serde_json::to_value(&c).expect("serializes");
            if cfg.witness {
                if let Some(w) = sft.find_homoclinic_pair() {
                    v["witness"] = w.to_json(&sft);
                }
            }
            json_bytes(&v)
        }
    };
    emit(&bytes, cfg.output.as_deref(), out)?;
    if c.consistent() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("equivalence violated: {}", mt_line(&c))))
    }
}

fn parse_element(text: &str, name: &str) -> Result<QuadraticFieldElement, CliError> {
    text.parse()
        .map_err(|e: Error| CliError::Input(format!("--{name} {text:?}: {e}")))
}

fn cache_root(cfg: &RunConfig) -> PathBuf {
    cfg.cache_dir
        .clone()
        .or_else(|| std::env::var_os(cache::ENV_VAR).map(PathBuf::from))
        .unwrap_or_else(|| std::env::temp_dir().join("symdyn-cache"))
}

pub fn cmd_iet_explore(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let a = parse_element(cfg.a.as_deref().unwrap_or("-1+1*sqrt2"), "a")?;
    let b = parse_element(cfg.b.as_deref().unwrap_or("-1+1*sqrt3"), "b")?;
    let system = IetSystem::new(a, b).map_err(|e| CliError::from_core("iet", e))?;
    system.require_nondegenerate().map_err(|e| CliError::from_core("iet-explore", e))?;
    let k = cfg.horizon.unwrap_or(50 * cfg.n_max);
    let len = 2 * k + 1;

    let oracle = IetOracle::new(system.clone());
    let cache = WordCache::new(cache_root(cfg));
    match cache.load(&system, len) {
        Some(words) => oracle.preload(len, words),
        None => {
            let words = oracle.words(len).map_err(|e| CliError::from_core("iet", e))?;
            if let Err(e) = cache.store(&system, len, &words) {
                let _ = writeln!(err, "warning: {e}");
            }
        }
    }

    let metric = cfg.metric();
    let report = decay_report(&oracle, &metric, cfg.n_max, k, cfg.witness && cfg.format == Format::Json)
        .map_err(|e| CliError::from_core("iet-explore", e))?;
    let bytes = match cfg.format {
        Format::Csv => csv_bytes(&report.rows)?,
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("serializes");
            v["a"] = system.a().to_string().into();
            v["b"] = system.b().to_string().into();
            if !cfg.witness {
                v.as_object_mut().expect("object").remove("evidence");
            }
            json_bytes(&v)
        }
    };
    emit(&bytes, cfg.output.as_deref(), out)?;
    if let Some(p) = &cfg.emit_plot_data {
        let pts: Vec<PlotBracket> = report
            .rows
            .iter()
            .map(|r| PlotBracket {
                n: r.n,
                product_lower_log_lambda: r.product_lower_log_lambda,
                product_upper_log_lambda: r.product_upper_log_lambda,
            })
            .collect();
        emit(&csv_bytes(&pts)?, Some(p), out)?;
    }
    Ok(())
}
