//! Subcommands. Each `*_report` function is pure: catalog and arguments in, report out.

mod charclass;
mod collapse;
mod e2;
mod scan;
mod sumcheck;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use lhslab::exactlin::FieldSpec;
use lhslab::gcoh::GResolution;
use lhslab::gmod::{GLattice, ModuleSpec};
use lhslab::lhs::{FilteredComplex, SpectralSequence, TwistedResolution};
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::catalog::Catalog;
use crate::report::Report;
use crate::CliError;

pub use charclass::{charclass_report, CharclassArgs};
pub use collapse::{collapse_report, CollapseArgs};
pub use e2::{e2_report, engine_a_table, engine_b_table, E2Args};
pub use scan::{scan_report, GroupFilter, ScanArgs};
pub use sumcheck::{sumcheck_report, SumcheckArgs};

#[derive(Debug, Parser)]
#[command(
    name = "lhslab",
    version,
    about = "LHS spectral sequences of lattice extensions"
)]
pub struct Cli {
    /// Catalog file or directory of `.jsonl` files; the built-in starter catalog by default.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Add wall-clock timings to the report (timed reports are not cached).
    #[arg(long, global = true)]
    pub timings: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Ignore LHSLAB_CACHE_DIR.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// E_2 dimension table `dim H^s(G, Hom(Λ^t L, M))`.
    E2(E2Args),
    /// Statuses of the characteristic classes `v_r^t(L)`.
    Charclass(CharclassArgs),
    /// Collapse criteria, page dimensions and the abutment check.
    Collapse(CollapseArgs),
    /// Sum and projection formulas for `L = L' ⊕ L''`.
    Sumcheck(SumcheckArgs),
    /// Characteristic classes across the catalog.
    Scan(ScanArgs),
}

/// `Q`, `F<p>` or a bare prime `p`.
pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    let attempt = match s.parse::<u32>() {
        Ok(p) => FieldSpec::prime(p),
        Err(_) => FieldSpec::parse(s),
    };
    attempt.map_err(|e| e.to_string())
}

pub fn parse_module(s: &str) -> Result<ModuleSpec, String> {
    ModuleSpec::parse(s).map_err(|e| e.to_string())
}

/// The rendered report and the process exit code.
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
    pub cache_hit: bool,
}

pub fn load_catalog(path: Option<&PathBuf>) -> Result<Catalog, CliError> {
    match path {
        Some(p) => Catalog::load(p),
        None => Catalog::starter(),
    }
}

/// Canonical configuration of a command, as hashed into the cache key.
fn config_of(cmd: &Command) -> (&'static str, Value) {
    match cmd {
        Command::E2(a) => ("e2", a.config()),
        Command::Charclass(a) => ("charclass", a.config()),
        Command::Collapse(a) => ("collapse", a.config()),
        Command::Sumcheck(a) => ("sumcheck", a.config()),
        Command::Scan(a) => ("scan", a.config()),
    }
}

/// Hashes of the catalog entries the command reads.
fn inputs_of(cmd: &Command, cat: &Catalog) -> Result<BTreeMap<String, String>, CliError> {
    let names: Vec<String> = match cmd {
        Command::E2(a) => vec![a.lattice.clone()],
        Command::Charclass(a) => vec![a.lattice.clone()],
        Command::Collapse(a) => vec![a.lattice.clone()],
        Command::Sumcheck(a) => {
            let mut v = vec![a.prime.clone(), a.second.clone()];
            if let Some(e) = cat.declared_sum(&a.prime, &a.second) {
                v.push(e.name.clone());
            }
            v
        }
        Command::Scan(a) => a
            .selected(cat)
            .into_iter()
            .map(|e| e.name.clone())
            .collect(),
    };
    names
        .into_iter()
        .map(|n| Ok((n.clone(), cat.entry(&n)?.hash())))
        .collect()
}

pub fn compute(cmd: &Command, cat: &Catalog) -> Result<Report, CliError> {
    let mut report = match cmd {
        Command::E2(a) => e2_report(cat, a)?,
        Command::Charclass(a) => charclass_report(cat, a)?,
        Command::Collapse(a) => collapse_report(cat, a)?,
        Command::Sumcheck(a) => sumcheck_report(cat, a)?,
        Command::Scan(a) => scan_report(cat, a)?,
    };
    report.inputs = inputs_of(cmd, cat)?;
    Ok(report)
}

/// Loads the catalog, consults the cache, computes and renders.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let cat = load_catalog(cli.catalog.as_ref())?;
    let (name, config) = config_of(&cli.command);
    let inputs = inputs_of(&cli.command, &cat)?;
    let cache = if cli.no_cache || cli.timings {
        Cache::disabled()
    } else {
        Cache::from_env()
    };
    let key = Cache::key(name, &config, &json!(inputs));
    let config_hash = Report::new(name, config.clone(), String::new()).config_hash();
    if let Some(text) = cache.load(&key, &config_hash) {
        let exit_code = serde_json::from_str::<Value>(&text)
            .ok()
            .and_then(|v| v["exitCode"].as_i64())
            .unwrap_or(1) as i32;
        return Ok(Outcome {
            text,
            exit_code,
            cache_hit: true,
        });
    }
    let mut report = compute(&cli.command, &cat)?;
    debug_assert_eq!(report.config_hash(), config_hash);
    let exit_code = report.exit_code();
    let text = if cli.timings {
        report.timings = Some(BTreeMap::from([(
            "totalSeconds".to_string(),
            start.elapsed().as_secs_f64(),
        )]));
        report.render()
    } else {
        let text = report.render();
        if let Err(e) = cache.store(&key, &text) {
            eprintln!("warning: could not write cache entry: {e}");
        }
        text
    };
    Ok(Outcome {
        text,
        exit_code,
        cache_hit: false,
    })
}

/// Shared setup: a twisted resolution on the preferred `G`-resolution.
pub(crate) fn twisted(lattice: &GLattice, degree: usize) -> Result<TwistedResolution, CliError> {
    let gres = GResolution::preferred(lattice.group().clone(), degree)?;
    Ok(TwistedResolution::build(lattice, gres, degree)?)
}

pub(crate) fn sequence<'a>(
    res: &'a TwistedResolution,
    spec: &ModuleSpec,
    field: FieldSpec,
) -> Result<SpectralSequence<'a>, CliError> {
    let m = spec.eval(res.lattice(), field)?;
    Ok(SpectralSequence::new(FilteredComplex::new(res, m)?)?)
}
