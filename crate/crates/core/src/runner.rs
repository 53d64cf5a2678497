//! Command orchestration behind the `qramsey` binary.
//!
//! A [`RunConfig`] is the union of a JSON config file and command-line
//! flags (flags win). Every JSON artifact carries the schema version and the
//! merged config. Wall-clock times are never written, so one worker and one
//! config give byte-identical output.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::Rational;
use crate::coloring::{parse_coloring, Coloring};
use crate::detector::{validate_witness, CandidateTable};
use crate::largeset::{
    find_ip_r, find_ip_r_randomized, is_ip_r_star, is_syndetic_for, is_thick_for, localize_colors,
    piecewise_syndetic_witness, GroupMode, ShapeF, WindowSet, MAX_EXHAUSTIVE_R,
};
use crate::pattern::{catalog_keys, resolve_family, Family, FamilyOptions};
use crate::rado::{columns_condition, cross_validate, parse_system, Consistency};
use crate::search::{
    export_cnf, import_assignment, parse_assignment, search_family, threshold_sweep, Certificate, CnfInstance,
    SearchConfig, SweepOptions, Verification,
};
use crate::window::{Window, WindowFamily};

pub const RESULT_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_240_917;
const DEFAULT_WITNESS_LIMIT: usize = 10;
const RANDOMIZED_IP_ATTEMPTS: usize = 2_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Detect,
    Search,
    Sweep,
    Rado,
    Largeset,
    Localize,
    ExportCnf,
    ImportSat,
    Verify,
    Catalog,
}

/// Every field is optional so a config file and flags can be overlaid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[arg(value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandName>,
    /// Catalog key or DSL text (`x; y; x+y`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Window spec such as `int:1..20`, `farey:8`, `mgrid:2,3:2`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    /// Window range for `sweep`, such as `farey:1..8`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub windows: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_nodes: Option<u64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_seconds: Option<f64>,
    /// Search threads; 0 uses every core.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_depth: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinct: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_nonzero_x: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allow_offset: Option<bool>,
    /// Sweep stops after the first exhausted window.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_at_first: Option<bool>,
    /// JSON result file (DIMACS for `export-cnf`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// CSV table written by `sweep`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Certificate file: written by `search`, read by `verify`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<PathBuf>,
    /// Directory for per-N certificates written by `sweep`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_dir: Option<PathBuf>,
    /// DIMACS file read by `import-sat`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cnf: Option<PathBuf>,
    /// SAT solver output read by `import-sat`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<PathBuf>,
    /// Coloring text `int:1..4 r=2 [0,1,1,0]`; random from `seed` if absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Most witnesses listed by `detect`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
    /// Linear system such as `x + y = z` for `rado`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    /// Largest N probed by `rado` cross-validation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    /// `add` or `mul`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Window indices of the set `A`, comma-separated.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    /// Shape elements, comma-separated rationals.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    /// Core window for the syndetic check.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_f: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ip_r: Option<usize>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Verification(_) => 1,
            RunError::Config(_) => 2,
            RunError::Io(_) => 3,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> RunError {
    RunError::Config(e.to_string())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, RunError> {
        serde_json::from_str(text).map_err(|e| RunError::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// `self` overlaid with every field set in `flags`.
    pub fn overlay(&self, flags: &RunConfig) -> RunConfig {
        let mut base = serde_json::to_value(self).expect("config serializes");
        let top = serde_json::to_value(flags).expect("config serializes");
        if let (Value::Object(b), Value::Object(t)) = (&mut base, top) {
            b.extend(t);
        }
        serde_json::from_value(base).expect("overlay of valid configs is valid")
    }

    fn family(&self) -> Result<Family, RunError> {
        let text = self.family.as_deref().ok_or_else(|| config_err("--family is required"))?;
        let options = FamilyOptions {
            distinct: self.distinct.unwrap_or(false),
            strict_nonzero_x: self.strict_nonzero_x.unwrap_or(false),
            allow_offset: self.allow_offset.unwrap_or(false),
        };
        resolve_family(text, options).map_err(config_err)
    }

    fn window(&self) -> Result<Arc<Window>, RunError> {
        let text = self.window.as_deref().ok_or_else(|| config_err("--window is required"))?;
        Ok(Arc::new(text.parse().map_err(config_err)?))
    }

    fn colors(&self) -> Result<usize, RunError> {
        match self.colors {
            Some(0) => Err(config_err("--colors must be positive")),
            Some(r) => Ok(r),
            None => Ok(2),
        }
    }

    pub fn search_config(&self) -> Result<SearchConfig, RunError> {
        let d = SearchConfig::default();
        if self.max_seconds.is_some_and(|s| s.is_nan() || s < 0.0) {
            return Err(config_err("--max-seconds must be non-negative"));
        }
        Ok(SearchConfig {
            max_nodes: self.max_nodes,
            max_seconds: self.max_seconds,
            workers: self.workers.unwrap_or(d.workers),
            split_depth: self.split_depth.unwrap_or(d.split_depth),
            symmetry: self.symmetry.unwrap_or(d.symmetry),
        })
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// The given coloring, or a seeded random one on `--window`.
    fn coloring(&self) -> Result<Coloring, RunError> {
        if let Some(text) = &self.coloring {
            let c = parse_coloring(text).map_err(config_err)?;
            if let Some(w) = &self.window {
                let w: Window = w.parse().map_err(config_err)?;
                if w != **c.window() {
                    return Err(config_err("--coloring and --window disagree"));
                }
            }
            return Ok(c);
        }
        let window = self.window()?;
        let r = self.colors()?;
        if r > crate::coloring::MAX_COLORS {
            return Err(config_err("too many colors"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed());
        let colors = (0..window.len()).map(|_| rng.gen_range(0..r) as u8).collect();
        Coloring::new(window, r, colors).map_err(config_err)
    }

    fn mode(&self) -> Result<GroupMode, RunError> {
        match self.mode.as_deref() {
            None | Some("add") => Ok(GroupMode::Add),
            Some("mul") => Ok(GroupMode::Mul),
            Some(m) => Err(config_err(format!("unknown mode {m:?}, expected add or mul"))),
        }
    }

    fn shape(&self, mode: GroupMode, default: &str) -> Result<ShapeF, RunError> {
        let text = self.shape.as_deref().unwrap_or(default);
        let elems = text
            .split(',')
            .map(|s| s.trim().parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(config_err)?;
        ShapeF::new(mode, elems).map_err(config_err)
    }
}

fn artifact(config: &RunConfig, result: Value) -> String {
    let doc = json!({
        "schema_version": RESULT_SCHEMA_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "result": result,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("result serializes");
    text.push('\n');
    text
}

fn emit(config: &RunConfig, text: &str, out: &mut dyn Write) -> Result<(), RunError> {
    if let Some(path) = &config.output {
        fs::write(path, text)?;
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

/// Runs one command, writing its artifact to `out` (and `--output`).
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), RunError> {
    let command = config.command.ok_or_else(|| config_err("no command given"))?;
    let result = match command {
        CommandName::Catalog => run_catalog(),
        CommandName::Detect => run_detect(config)?,
        CommandName::Search => run_search(config)?,
        CommandName::Sweep => run_sweep(config)?,
        CommandName::Rado => run_rado(config)?,
        CommandName::Largeset => run_largeset(config)?,
        CommandName::Localize => run_localize(config)?,
        CommandName::ExportCnf => return run_export_cnf(config, out),
        CommandName::ImportSat => run_import_sat(config, out)?,
        CommandName::Verify => return run_verify(config, out),
    };
    emit(config, &artifact(config, result), out)
}

fn run_catalog() -> Value {
    let entries: Vec<Value> = catalog_keys()
        .iter()
        .map(|(key, shape)| json!({ "key": key, "terms": shape }))
        .collect();
    Value::Array(entries)
}

fn run_detect(config: &RunConfig) -> Result<Value, RunError> {
    let family = config.family()?;
    let coloring = config.coloring()?;
    let table = CandidateTable::build(&family, coloring.window().clone()).map_err(config_err)?;
    let limit = config.limit.unwrap_or(DEFAULT_WITNESS_LIMIT);
    let witnesses = table.all_witnesses(&coloring, limit);
    debug_assert!(witnesses.iter().all(|w| validate_witness(&family, &coloring, w)));
    Ok(json!({
        "family": family,
        "coloring": coloring.to_string(),
        "candidates": table.len(),
        "monochromatic": table.monochromatic_candidates(&coloring).len(),
        "witnesses": witnesses,
    }))
}

fn run_search(config: &RunConfig) -> Result<Value, RunError> {
    let family = config.family()?;
    let window = config.window()?;
    let r = config.colors()?;
    let sc = config.search_config()?;
    let result = search_family(&family, window, r, &sc).map_err(config_err)?;
    let cert = Certificate::from_result(&result);
    if let (Some(path), Some(cert)) = (&config.certificate, &cert) {
        fs::write(path, cert.to_json())?;
    }
    Ok(json!({ "search": result, "certificate": cert }))
}

fn run_sweep(config: &RunConfig) -> Result<Value, RunError> {
    let family = config.family()?;
    let text = config.windows.as_deref().ok_or_else(|| config_err("--windows is required"))?;
    let windows: WindowFamily = text.parse().map_err(config_err)?;
    let r = config.colors()?;
    let sc = config.search_config()?;
    let opts = SweepOptions {
        stop_at_first_exhausted: config.stop_at_first.unwrap_or(false),
    };
    let mut report = threshold_sweep(&family, r, &windows, &sc, &opts).map_err(config_err)?;
    if let Some(dir) = &config.certificate_dir {
        report.write_certificates(dir, "sweep")?;
    }
    if let Some(path) = &config.csv {
        fs::write(path, report.to_csv())?;
    }
    Ok(to_value(&report))
}

fn run_rado(config: &RunConfig) -> Result<Value, RunError> {
    let text = config.system.as_deref().ok_or_else(|| config_err("--system is required"))?;
    let sys = parse_system(text).map_err(config_err)?;
    let verdict = columns_condition(&sys);
    let Some(n_max) = config.n_max else {
        return Ok(json!({ "system": sys.to_string(), "verdict": verdict }));
    };
    let report = cross_validate(&sys, config.colors()?, n_max, &config.search_config()?).map_err(config_err)?;
    if report.status == Consistency::Contradiction {
        return Err(RunError::Verification(report.note));
    }
    Ok(to_value(&report))
}

fn run_largeset(config: &RunConfig) -> Result<Value, RunError> {
    let window = config.window()?;
    let mode = config.mode()?;
    let t = config.shape(mode, if mode == GroupMode::Add { "0" } else { "1" })?;
    let text = config.set.as_deref().ok_or_else(|| config_err("--set is required"))?;
    let mut indices = Vec::new();
    for tok in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let i: usize = tok.parse().map_err(|_| config_err(format!("bad index {tok:?}")))?;
        if i >= window.len() {
            return Err(config_err(format!("index {i} outside a window of {} elements", window.len())));
        }
        indices.push(i);
    }
    let a = WindowSet::from_indices(window, indices);
    let max_f = config.max_f.unwrap_or(t.len());
    let syndetic = match &config.core {
        Some(core) => {
            let core: Window = core.parse().map_err(config_err)?;
            Some(is_syndetic_for(&a, &t, &core).map_err(config_err)?)
        }
        None => None,
    };
    let ip = match config.ip_r {
        None => Value::Null,
        Some(r) if r <= MAX_EXHAUSTIVE_R => json!({
            "r": r,
            "exhaustive": true,
            "generators": find_ip_r(&a, r, mode).map_err(config_err)?,
            "ip_star": is_ip_r_star(&a, r, mode).map_err(config_err)?,
        }),
        Some(r) => json!({
            "r": r,
            "exhaustive": false,
            "seed": config.seed(),
            "generators": find_ip_r_randomized(&a, r, mode, config.seed(), RANDOMIZED_IP_ATTEMPTS),
        }),
    };
    Ok(json!({
        "mode": mode,
        "size": a.len(),
        "shape": t,
        "thick_translate": is_thick_for(&a, &t),
        "syndetic": syndetic,
        "piecewise_syndetic_f": piecewise_syndetic_witness(&a, max_f, &t),
        "ip": ip,
    }))
}

fn run_localize(config: &RunConfig) -> Result<Value, RunError> {
    let coloring = config.coloring()?;
    let t = config.shape(GroupMode::Mul, "1,2")?;
    if t.mode() != GroupMode::Mul {
        return Err(config_err("localize needs a multiplicative shape"));
    }
    let max_f = config.max_f.unwrap_or(3);
    let report = localize_colors(&coloring, &t, max_f);
    Ok(json!({ "coloring": coloring.to_string(), "report": report }))
}

fn run_export_cnf(config: &RunConfig, out: &mut dyn Write) -> Result<(), RunError> {
    let family = config.family()?;
    let table = CandidateTable::build(&family, config.window()?).map_err(config_err)?;
    let cnf = export_cnf(&table, config.colors()?);
    let echo = serde_json::to_string(config).expect("config serializes");
    let text = format!("c config {echo}\n{}", cnf.to_dimacs());
    emit(config, &text, out)
}

fn run_import_sat(config: &RunConfig, _out: &mut dyn Write) -> Result<Value, RunError> {
    let cnf_path = config.cnf.as_ref().ok_or_else(|| config_err("--cnf is required"))?;
    let sat_path = config.assignment.as_ref().ok_or_else(|| config_err("--assignment is required"))?;
    let cnf = CnfInstance::from_dimacs(&fs::read_to_string(cnf_path)?).map_err(config_err)?;
    let assignment = parse_assignment(&fs::read_to_string(sat_path)?).map_err(config_err)?;
    let coloring = import_assignment(&cnf, &assignment).map_err(|e| RunError::Verification(e.to_string()))?;
    let table = CandidateTable::build(&cnf.family, cnf.window.clone()).map_err(config_err)?;
    if let Some(w) = table.find_witness(&coloring) {
        return Err(RunError::Verification(format!("imported coloring has a monochromatic instance: {w}")));
    }
    Ok(json!({ "family": cnf.family, "coloring": coloring.to_string(), "avoiding": true }))
}

fn run_verify(config: &RunConfig, out: &mut dyn Write) -> Result<(), RunError> {
    let path = config.certificate.as_ref().ok_or_else(|| config_err("--certificate is required"))?;
    let cert = Certificate::from_json(&fs::read_to_string(path)?).map_err(|e| RunError::Verification(e.to_string()))?;
    let verification = cert.verify().map_err(|e| RunError::Verification(e.to_string()))?;
    let (valid, detail) = match &verification {
        Verification::Valid => (true, Value::Null),
        Verification::Violated(w) => (false, json!({ "first_violating_witness": w, "text": w.to_string() })),
        Verification::Mismatch { expected, found } => (false, json!({ "expected": expected, "found": found })),
    };
    let result = json!({ "kind": cert.kind, "family": cert.family, "window": cert.window, "r": cert.r, "valid": valid, "detail": detail });
    emit(config, &artifact(config, result), out)?;
    match verification {
        Verification::Valid => Ok(()),
        Verification::Violated(w) => Err(RunError::Verification(format!("first violating witness: {w}"))),
        Verification::Mismatch { expected, found } => {
            Err(RunError::Verification(format!("re-run search found {found}, certificate records {expected}")))
        }
    }
}
