//! `rees` command-line front end.

pub mod report;
pub mod store;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rees_core::corpus;
use rees_core::density::{self, DensityGrid, DensityKind, Ladder, XGrid};
use rees_core::dependence::{self, CheckOptions, Verdict};
use rees_core::document::ModuleDocument;
use rees_core::multiplicity::{self, DiagonalVersion, FitOptions};
use rees_core::rational::{format_rational, parse_rational, to_f64};
use rees_core::{Engine, PowerCache, Strategy, TermModule};
use serde_json::{json, Value};
use thiserror::Error;

use crate::store::DiskStore;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_UNDETERMINED: u8 = 3;
pub const EXIT_INVARIANT: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rees_core::Error),

    #[error("{path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("{path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use rees_core::Error as E;
        match self {
            CliError::Core(E::NotConverged(_)) => EXIT_UNDETERMINED,
            CliError::Core(E::Invariant(_)) => EXIT_INVARIANT,
            CliError::Core(_) | CliError::Read { .. } | CliError::Usage(_) => EXIT_INPUT,
            CliError::Write { .. } => EXIT_FAILURE,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "rees", version, about = "Exact densities, multiplicities and integral dependence for term modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample density functions on an x grid and write one CSV per kind.
    Density(DensityArgs),
    /// Epsilon, diagonal and mixed multiplicities of one module.
    Multiplicity(MultiplicityArgs),
    /// Decide whether the smaller module is a reduction of the larger one.
    Check(CheckArgs),
    /// Bundled example modules.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// List the bundled modules.
    List,
    /// Print a bundled module as a JSON document.
    Export {
        name: String,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Relative tolerance for numerical cross-checks.
    #[arg(long, default_value_t = 0.05)]
    pub tol: f64,
    /// Directory for the persistent power cache.
    #[arg(long, default_value = ".rees-cache")]
    pub cache_dir: PathBuf,
    /// Keep powers in memory only.
    #[arg(long)]
    pub no_cache: bool,
    /// Write the JSON report here (`-` for stdout, replacing the summary).
    #[arg(long)]
    pub json_out: Option<PathBuf>,
    /// Run every loop sequentially.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Module document path, or `corpus:NAME`.
    #[arg(long)]
    pub module: String,
    /// Comma-separated kinds: adic, saturated, epsilon, cumulative.
    #[arg(long, value_delimiter = ',', default_value = "adic")]
    pub kind: Vec<String>,
    /// Largest Rees level; the ladder is five evenly spaced levels up to it.
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Explicit comma-separated ladder, overriding --nmax.
    #[arg(long, value_delimiter = ',')]
    pub ladder: Option<Vec<u32>>,
    /// Grid as `start:end:step` (rationals allowed, e.g. `-1:4:1/8`).
    #[arg(long)]
    pub grid: Option<String>,
    /// Fit the adic density by one polynomial per chamber.
    #[arg(long)]
    pub fit: bool,
    /// Directory for the CSV files.
    #[arg(long, default_value = ".")]
    pub csv_out: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MultiplicityArgs {
    /// Module document path, or `corpus:NAME`.
    #[arg(long)]
    pub module: String,
    /// Epsilon multiplicity, cross-checked against the epsilon density integral.
    #[arg(long)]
    pub epsilon: bool,
    /// Diagonal multiplicities (both versions) at this degree.
    #[arg(long, value_name = "C")]
    pub diagonal: Option<i64>,
    /// Mixed multiplicities from the bigraded polynomial.
    #[arg(long)]
    pub mixed: bool,
    /// Diagonal degree used by --mixed (and by the default run); defaults to d_M + 1.
    #[arg(long)]
    pub c: Option<i64>,
    /// Fit the cumulative (A[y]) bigraded polynomial for --mixed.
    #[arg(long)]
    pub cumulative: bool,
    /// Largest Rees level for epsilon and diagonal sequences.
    #[arg(long, default_value_t = 24)]
    pub nmax: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// The candidate reduction (path or `corpus:NAME`).
    #[arg(long)]
    pub sub: String,
    /// The larger module (path or `corpus:NAME`).
    #[arg(long)]
    pub sup: String,
    /// Diagonal degree; defaults to d_{N,M} + 1.
    #[arg(long)]
    pub c: Option<i64>,
    #[arg(long, default_value_t = dependence::DEFAULT_N_MAX)]
    pub nmax: u32,
    #[command(flatten)]
    pub common: Common,
}

/// Parse arguments, run, print errors to stderr and return the exit code.
pub fn run() -> u8 {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    match execute(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Density(a) => cmd_density(a, out),
        Command::Multiplicity(a) => cmd_multiplicity(a, out),
        Command::Check(a) => cmd_check(a, out),
        Command::Corpus { action } => cmd_corpus(action, out),
    }
}

struct Loaded {
    name: String,
    module: TermModule,
}

fn load_module(spec: &str) -> Result<Loaded> {
    if let Some(name) = spec.strip_prefix("corpus:") {
        let entry = corpus::find(name).ok_or_else(|| CliError::Usage(format!("no corpus module named {name:?}")))?;
        return Ok(Loaded { name: entry.name.to_string(), module: entry.module()? });
    }
    let path = Path::new(spec);
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    let doc = ModuleDocument::parse(&text).map_err(|e| with_path(path, e))?;
    let module = doc.to_module().map_err(|e| with_path(path, e))?;
    let name = doc
        .name
        .clone()
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "module".into());
    Ok(Loaded { name, module })
}

fn with_path(path: &Path, e: rees_core::Error) -> CliError {
    match e {
        rees_core::Error::Input(msg) => rees_core::Error::Input(format!("{}: {msg}", path.display())).into(),
        other => other.into(),
    }
}

fn engine(common: &Common) -> Result<Engine> {
    if !common.tol.is_finite() || common.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let cache = if common.no_cache {
        PowerCache::new()
    } else {
        PowerCache::with_store(Arc::new(DiskStore::new(&common.cache_dir)))
    };
    let strategy = if common.sequential { Strategy::Sequential } else { Strategy::Parallel };
    Ok(Engine::with_cache(cache).strategy(strategy))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source })
}

/// Emit the JSON report and, unless it went to stdout, the summary.
fn emit(out: &mut dyn Write, common: &Common, doc: &Value, summary: &str) -> Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(doc).expect("serializable"));
    let stdout_err = |source| CliError::Write { path: "<stdout>".into(), source };
    match &common.json_out {
        Some(p) if p.as_os_str() == "-" => out.write_all(text.as_bytes()).map_err(stdout_err),
        Some(p) => {
            write_file(p, &text)?;
            out.write_all(summary.as_bytes()).map_err(stdout_err)
        }
        None => out.write_all(summary.as_bytes()).map_err(stdout_err),
    }
}

/// Document names are free text; keep only filename-safe characters.
fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn parse_grid(text: &str) -> Result<XGrid> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("--grid expects start:end:step, got {text:?}")));
    }
    Ok(XGrid::new(parse_rational(parts[0])?, parse_rational(parts[1])?, parse_rational(parts[2])?)?)
}

fn cmd_density(a: DensityArgs, out: &mut dyn Write) -> Result<u8> {
    let engine = engine(&a.common)?;
    let loaded = load_module(&a.module)?;
    let m = &loaded.module;
    let mut kinds = Vec::new();
    for k in &a.kind {
        let kind: DensityKind = k.parse()?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    let ladder = match (&a.ladder, a.nmax) {
        (Some(l), _) => Ladder::new(l.clone())?,
        (None, Some(n)) => Ladder::evenly_spaced(n, 5)?,
        (None, None) => Ladder::default(),
    };
    let grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => XGrid::default_for(m),
    };
    fs::create_dir_all(&a.csv_out).map_err(|source| CliError::Write { path: a.csv_out.clone(), source })?;

    let mut grids: Vec<DensityGrid> = Vec::new();
    let mut summary = String::new();
    for kind in &kinds {
        let g = density::sample(&engine, m, *kind, &grid, &ladder)?;
        let path = a.csv_out.join(format!("{}-{}.csv", file_stem(&loaded.name), kind));
        report::write_grid_csv(&path, &g).map_err(|e| CliError::Write {
            path: path.clone(),
            source: io::Error::other(e),
        })?;
        let exact = g.extrapolated.iter().filter(|e| e.exact).count();
        summary.push_str(&format!(
            "{kind}: {} points, {exact} exact, max diagnostic {:.6}, wrote {}\n",
            g.xs.len(),
            g.max_diagnostic(),
            path.display()
        ));
        grids.push(g);
    }

    let mut fit_json = Value::Null;
    if a.fit {
        let adic = match grids.iter().find(|g| g.kind == DensityKind::Adic) {
            Some(g) => g.clone(),
            None => density::sample_adic(&engine, m, &grid, &ladder)?,
        };
        let fit = density::fit_piecewise(&adic, &density::detect_chambers(m)?, a.common.tol)?;
        for c in &fit.chambers {
            let bound = |b: Option<i64>, inf: &str| b.map_or(inf.to_string(), |v| v.to_string());
            summary.push_str(&format!(
                "chamber [{}, {}): {}{}\n",
                bound(c.lower, "-inf"),
                bound(c.upper, "inf"),
                c.polynomial,
                if c.exact { "" } else { " (approximate)" }
            ));
        }
        fit_json = report::fit_json(&fit);
    }

    let doc = report::envelope(
        "density",
        json!({
            "module": loaded.name,
            "grids": grids.iter().map(report::grid_json).collect::<Vec<_>>(),
            "fit": fit_json,
        }),
    );
    emit(out, &a.common, &doc, &summary)?;
    Ok(EXIT_OK)
}

fn default_c(m: &TermModule) -> Result<i64> {
    m.max_generator_degree()
        .map(|d| d + 1)
        .ok_or_else(|| rees_core::Error::Precondition("the zero module has no multiplicities".into()).into())
}

/// Turn a not-converged computation into a reported section instead of an abort.
fn section(r: rees_core::Result<Value>, undetermined: &mut bool) -> Result<Value> {
    match r {
        Ok(v) => Ok(v),
        Err(rees_core::Error::NotConverged(msg)) => {
            *undetermined = true;
            Ok(json!({ "status": "not-converged", "error": msg }))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_multiplicity(a: MultiplicityArgs, out: &mut dyn Write) -> Result<u8> {
    let engine = engine(&a.common)?;
    let loaded = load_module(&a.module)?;
    let m = &loaded.module;
    let all = !a.epsilon && a.diagonal.is_none() && !a.mixed;
    let mut undetermined = false;
    let mut summary = String::new();
    let mut body = serde_json::Map::new();
    body.insert("module".into(), json!(loaded.name));

    if a.epsilon || all {
        let r = multiplicity::epsilon_multiplicity(&engine, m, a.nmax)?;
        let grid = density::sample_epsilon(&engine, m, &XGrid::default_for(m), &Ladder::default())?;
        let check = multiplicity::epsilon_integral_check(&r, &grid, a.common.tol)?;
        summary.push_str(&format!(
            "epsilon: {} (estimate {} ~ {:.6}, diagnostic {:.6})\n",
            r.exact.as_ref().map_or("not settled".to_string(), format_rational),
            format_rational(&r.estimate),
            to_f64(&r.estimate),
            to_f64(&r.diagnostic),
        ));
        summary.push_str(&format!(
            "epsilon density integral: {:.6} ({})\n",
            to_f64(&check.integral),
            if check.agrees { "agrees" } else { "disagrees" }
        ));
        if !check.agrees {
            undetermined = true;
        }
        body.insert("epsilon".into(), report::epsilon_json(&r, Some(&check)));
    }

    let diagonal_c = match (a.diagonal, all) {
        (Some(c), _) => Some(c),
        (None, true) => Some(match a.c {
            Some(c) => c,
            None => default_c(m)?,
        }),
        (None, false) => None,
    };
    if let Some(c) = diagonal_c {
        let mut reports = Vec::new();
        for version in [DiagonalVersion::A, DiagonalVersion::S] {
            let r = multiplicity::diagonal_multiplicity(&engine, m, c, version, a.nmax)?;
            match &r.determined {
                Some(d) => summary.push_str(&format!(
                    "diagonal {} at c = {c}: multiplicity {}, dimension {}, from n = {}\n",
                    report::version_name(version),
                    d.multiplicity,
                    d.dimension,
                    d.n0
                )),
                None => {
                    undetermined = true;
                    summary.push_str(&format!("diagonal {} at c = {c}: undetermined\n", report::version_name(version)));
                }
            }
            reports.push(report::diagonal_json(&r));
        }
        body.insert("diagonal".into(), Value::Array(reports));
    }

    if a.mixed || all {
        let c = match a.c {
            Some(c) => c,
            None => default_c(m)?,
        };
        let r = multiplicity::mixed_multiplicities(&engine, m, c, a.cumulative, FitOptions::default());
        if let Ok(r) = &r {
            let values: Vec<String> = r.values.iter().map(|v| v.to_string()).collect();
            summary.push_str(&format!(
                "mixed at c = {c}{}: [{}], density polynomial {}\n",
                if a.cumulative { " (cumulative)" } else { "" },
                values.join(", "),
                r.density_polynomial
            ));
        } else {
            summary.push_str(&format!("mixed at c = {c}: not converged\n"));
        }
        body.insert("mixed".into(), section(r.map(|r| report::mixed_json(&r)), &mut undetermined)?);
    }

    let doc = report::envelope("multiplicity", Value::Object(body));
    emit(out, &a.common, &doc, &summary)?;
    Ok(if undetermined { EXIT_UNDETERMINED } else { EXIT_OK })
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> Result<u8> {
    let engine = engine(&a.common)?;
    let sub = load_module(&a.sub)?;
    let sup = load_module(&a.sup)?;
    let pair = dependence::validate_pair(&sub.module, &sup.module)?;
    let v = dependence::check_dependence(&engine, &pair, CheckOptions { c: a.c, n_max: a.nmax })?;
    let mut body = report::verdict_json(&v);
    if let Some(obj) = body.as_object_mut() {
        obj.insert("sub".into(), json!(sub.name));
        obj.insert("sup".into(), json!(sup.name));
    }
    let doc = report::envelope("check", body);
    emit(out, &a.common, &doc, &report::verdict_table(&v))?;
    Ok(if v.verdict == Verdict::Undetermined { EXIT_UNDETERMINED } else { EXIT_OK })
}

fn cmd_corpus(action: CorpusAction, out: &mut dyn Write) -> Result<u8> {
    let stdout_err = |source| CliError::Write { path: "<stdout>".into(), source };
    match action {
        CorpusAction::List => {
            let width = corpus::CORPUS.iter().map(|e| e.name.len()).max().unwrap_or(0);
            for e in corpus::CORPUS {
                writeln!(out, "{:<width$}  {}", e.name, e.description).map_err(stdout_err)?;
            }
        }
        CorpusAction::Export { name, out: path } => {
            let entry = corpus::find(&name).ok_or_else(|| CliError::Usage(format!("no corpus module named {name:?}")))?;
            let text = format!("{}\n", entry.document().to_json());
            match path {
                Some(p) => write_file(&p, &text)?,
                None => out.write_all(text.as_bytes()).map_err(stdout_err)?,
            }
        }
    }
    Ok(EXIT_OK)
}
