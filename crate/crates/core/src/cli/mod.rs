//! JSON-configured front end. Exit codes: 0 success, 1 I/O or usage,
//! 2 schema or parameter error (with field path), 3 numerical failure
//! (with `module::operation`).

pub mod config;
pub mod export;
pub mod run;
pub mod schema;
pub mod validate;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::Parser;
use serde_json::{json, Value};

use self::config::{ExperimentConfig, Format};
use self::export::{config_hash, file_stem};
use self::validate::SchemaError;
use crate::par::{self, Execution};

pub use self::run::{compute, Artifact};
pub use self::validate::{validate, validate_value};

#[derive(Debug, Parser)]
#[command(name = "chirow", version, about = "Chiral QE-CROW transport simulator")]
struct Cli {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the document's `mode`.
    #[arg(long)]
    mode: Option<String>,
    /// Overrides `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the summary.
    #[arg(long)]
    quiet: bool,
    /// Validate only; write nothing.
    #[arg(long)]
    check: bool,
}

#[derive(Debug)]
pub enum CliError {
    Schema(Vec<SchemaError>),
    Compute(crate::Error),
    Io { path: PathBuf, source: std::io::Error },
    /// An emitted report failed its own schema.
    Report(Vec<SchemaError>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Compute(e) if e.location().is_none() => 2,
            CliError::Compute(_) | CliError::Report(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub fn lines(&self) -> Vec<String> {
        match self {
            CliError::Schema(errs) => errs.iter().map(|e| format!("schema error: {e}")).collect(),
            CliError::Compute(e) => match (e.location(), e) {
                (None, crate::Error::InvalidParameter { field, reason }) => {
                    vec![format!("schema error: params.{field}: {reason}")]
                }
                (None, e) => vec![format!("schema error: params: {e}")],
                (Some(loc), e) => vec![format!("numerical error in {loc}: {e}")],
            },
            CliError::Io { path, source } => vec![format!("i/o error: {}: {source}", path.display())],
            CliError::Report(errs) => errs.iter().map(|e| format!("report schema error in cli::run: {e}")).collect(),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Compute(e)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Reads, applies `mode` override, validates.
pub fn load(path: &Path, mode: Option<&str>) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut doc: Value = serde_json::from_str(&text).map_err(|e| {
        CliError::Schema(vec![SchemaError { path: "$".into(), message: format!("not valid JSON: {e}") }])
    })?;
    if let (Some(m), Some(obj)) = (mode, doc.as_object_mut()) {
        obj.insert("mode".into(), Value::from(m));
    }
    validate_value(&doc).map_err(CliError::Schema)
}

/// JSON report envelope for an artifact.
pub fn report(cfg: &ExperimentConfig, a: &Artifact) -> Value {
    json!({
        "mode": a.mode.as_str(),
        "units": cfg.units.as_str(),
        "config_hash": config_hash(&cfg.document),
        "result": a.result,
    })
}

/// Files written by one run, in write order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

/// Computes everything, then writes `<mode>_<hash>.{csv,json}` and a
/// `.meta.json` sidecar.
pub fn execute(cfg: &ExperimentConfig, exec: Execution) -> Result<RunOutput, CliError> {
    let start = Instant::now();
    let a = compute(cfg, exec)?;
    let hash = config_hash(&cfg.document);
    let stem = file_stem(cfg.mode.as_str(), &hash);
    let dir = &cfg.output.directory;

    let mut contents: Vec<(PathBuf, String)> = Vec::new();
    if cfg.wants(Format::Csv) {
        contents.push((dir.join(format!("{stem}.csv")), a.csv.render()));
    }
    if cfg.wants(Format::Json) {
        let r = report(cfg, &a);
        schema::validate_report(&r).map_err(CliError::Report)?;
        let mut text = serde_json::to_string_pretty(&r).expect("reports serialize");
        text.push('\n');
        contents.push((dir.join(format!("{stem}.json")), text));
    }

    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut files = Vec::new();
    for (path, text) in contents {
        fs::write(&path, text).map_err(io_err(&path))?;
        files.push(path);
    }
    let unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = json!({
        "config_hash": hash,
        "mode": cfg.mode.as_str(),
        "files": files.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy()).collect::<Vec<_>>(),
        "version": env!("CARGO_PKG_VERSION"),
        "parallel": exec == Execution::Parallel && cfg!(feature = "parallel"),
        "threads": std::env::var("CHIROW_THREADS").ok(),
        "unix_time": unix,
        "elapsed_s": start.elapsed().as_secs_f64(),
    });
    let meta_path = dir.join(format!("{stem}.meta.json"));
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n";
    fs::write(&meta_path, text).map_err(io_err(&meta_path))?;
    files.push(meta_path);
    Ok(RunOutput { files, summary: a.summary })
}

fn thread_cap() -> Option<usize> {
    std::env::var("CHIROW_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Some(n) = thread_cap() {
        par::set_thread_cap(n);
    }
    let result = load(&cli.config, cli.mode.as_deref()).and_then(|mut cfg| {
        if let Some(out) = &cli.out {
            cfg.output.directory = out.clone();
            if let Some(sw) = cfg.sweep.as_mut() {
                for p in &mut sw.points {
                    p.output.directory = out.clone();
                }
            }
        }
        if cli.check {
            return Ok(vec![format!("{}: valid {} configuration", cli.config.display(), cfg.mode)]);
        }
        let out = execute(&cfg, Execution::default())?;
        let mut lines = out.summary;
        lines.extend(out.files.iter().map(|f| format!("wrote {}", f.display())));
        Ok(lines)
    });
    match result {
        Ok(lines) => {
            if !cli.quiet {
                for l in lines {
                    println!("{l}");
                }
            }
            0
        }
        Err(e) => {
            for l in e.lines() {
                eprintln!("{l}");
            }
            e.exit_code()
        }
    }
}
