use std::str::FromStr;

use clap::Args;
use lhslab::decomp::{scan_lattice, verify_sum_formula, SplitResolutions, Verdict};
use lhslab::exactlin::FieldSpec;
use lhslab::gcoh::GResolution;
use lhslab::gmod::{GLattice, ModuleSpec, WedgeOrder};
use lhslab::lhs::{sah_sign, verify_sah_product, ClassStatus};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::sumcheck::sumcheck_degree;
use super::{parse_field, sequence, twisted};
use crate::catalog::{Catalog, CatalogEntry, GroupDescriptor};
use crate::report::{status_name, Report};
use crate::CliError;

/// `cyclic`, `cyclic:<n>` or `table`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupFilter {
    Cyclic(Option<usize>),
    Table,
}

impl FromStr for GroupFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cyclic" => Ok(GroupFilter::Cyclic(None)),
            "table" => Ok(GroupFilter::Table),
            _ => s
                .strip_prefix("cyclic:")
                .and_then(|n| n.parse().ok())
                .map(|n| GroupFilter::Cyclic(Some(n)))
                .ok_or_else(|| format!("unknown group filter `{s}`")),
        }
    }
}

impl std::fmt::Display for GroupFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupFilter::Cyclic(None) => write!(f, "cyclic"),
            GroupFilter::Cyclic(Some(n)) => write!(f, "cyclic:{n}"),
            GroupFilter::Table => write!(f, "table"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_parser = parse_field)]
    pub field: FieldSpec,
    #[arg(long, default_value_t = 4)]
    pub max_rank: usize,
    #[arg(long, default_value_t = 12)]
    pub max_order: usize,
    #[arg(long, default_value_t = 4)]
    pub max_page: usize,
    /// Classes `v_r^t` are computed for `t <= max_total - 1`.
    #[arg(long, default_value_t = 5)]
    pub max_total: usize,
    #[arg(long)]
    pub group: Option<GroupFilter>,
}

impl ScanArgs {
    pub fn config(&self) -> Value {
        json!({
            "field": self.field.to_string(),
            "maxRank": self.max_rank,
            "maxOrder": self.max_order,
            "maxPage": self.max_page,
            "maxTotal": self.max_total,
            "group": self.group.map(|g| g.to_string()),
        })
    }

    pub fn selected<'a>(&self, cat: &'a Catalog) -> Vec<&'a CatalogEntry> {
        cat.entries()
            .iter()
            .filter(|e| e.rank <= self.max_rank)
            .filter(|e| {
                let order = match &e.group {
                    GroupDescriptor::Cyclic(n) => *n,
                    GroupDescriptor::Table(t) => t.len(),
                };
                let kind = match (&e.group, self.group) {
                    (_, None) => true,
                    (GroupDescriptor::Cyclic(_), Some(GroupFilter::Cyclic(None))) => true,
                    (GroupDescriptor::Cyclic(n), Some(GroupFilter::Cyclic(Some(m)))) => *n == m,
                    (GroupDescriptor::Table(_), Some(GroupFilter::Table)) => true,
                    _ => false,
                };
                order <= self.max_order && kind
            })
            .collect()
    }
}

/// `d_2 = ± x · v_2` on every `E_2` basis class with `s + t <= 3`, for trivial and `L ⊗ F`
/// coefficients.
pub fn replay_product_formula(lattice: &GLattice, field: FieldSpec) -> Result<Verdict, CliError> {
    let res = twisted(lattice, 5)?;
    let mut checks = Vec::new();
    for t in 1..=lattice.rank().min(3) {
        let vseq = sequence(&res, &ModuleSpec::Wedge(t), field)?;
        for spec in [ModuleSpec::Triv, ModuleSpec::Wedge(1)] {
            let seq = sequence(&res, &spec, field)?;
            for s in 0..=3 - t {
                checks.push(verify_sah_product(&seq, &vseq, s, t)?);
            }
        }
    }
    Ok(match sah_sign(&checks) {
        Some(_) => Verdict::Pass,
        None => Verdict::Fail("d_2 differs from the product with v_2".into()),
    })
}

fn replay(
    cat: &Catalog,
    entry: &CatalogEntry,
    field: FieldSpec,
    t: usize,
    r: usize,
) -> Result<Verdict, CliError> {
    let lattice = cat.lattice(&entry.name)?;
    let mut v = if r == 2 {
        replay_product_formula(lattice, field)?
    } else {
        Verdict::Pass
    };
    if let Some([a, b]) = &entry.decomposition {
        let (_, split) = cat.split(a, b, field, WedgeOrder::PrimeFirst)?;
        let degree = sumcheck_degree(t, r);
        let gres = GResolution::preferred(split.sum.group().clone(), degree)?;
        let res = SplitResolutions::build(&split, &gres, degree)?;
        v = v.and(verify_sum_formula(&split, &res, t, r)?.verdict);
    }
    Ok(v)
}

struct Row {
    value: Value,
    hit: Option<(usize, usize)>,
    replay: Verdict,
}

fn scan_entry(cat: &Catalog, entry: &CatalogEntry, args: &ScanArgs) -> Result<Row, CliError> {
    let lattice = cat.lattice(&entry.name)?;
    let res = twisted(lattice, args.max_total + 1)?;
    let row = scan_lattice(&res, args.field, args.max_page, args.max_total)?;
    let statuses: Vec<Value> = row
        .statuses
        .iter()
        .map(|(t, r, s)| json!({"t": t, "r": r, "status": status_name(*s)}))
        .collect();
    let all_zero = row.statuses.iter().all(|(_, _, s)| *s == ClassStatus::Zero);
    let replay = match row.first_nonzero {
        Some((t, r)) => replay(cat, entry, args.field, t, r)?,
        None => Verdict::Pass,
    };
    let value = json!({
        "name": entry.name,
        "rank": entry.rank,
        "classes": statuses,
        "allZero": all_zero,
        "firstNonzero": row.first_nonzero.map(|(t, r)| json!({"t": t, "r": r})),
    });
    Ok(Row {
        value,
        hit: row.first_nonzero,
        replay,
    })
}

pub fn scan_report(cat: &Catalog, args: &ScanArgs) -> Result<Report, CliError> {
    if args.max_total < 2 || args.max_page < 2 {
        return Err(CliError::Parse(
            "--max-total and --max-page must be at least 2".into(),
        ));
    }
    let mut report = Report::new("scan", args.config(), args.field.to_string());
    let entries = args.selected(cat);
    let rows: Vec<Result<Row, CliError>> = entries
        .par_iter()
        .map(|e| scan_entry(cat, e, args))
        .collect();
    let mut values = Vec::new();
    let mut hits = Vec::new();
    report.verdict("replay", Verdict::Pass);
    for (e, row) in entries.iter().zip(rows) {
        let row = row?;
        if let Some((t, r)) = row.hit {
            hits.push(json!({"name": e.name, "t": t, "r": r}));
            report.verdict("replay", row.replay);
        }
        values.push(row.value);
    }
    report
        .tables
        .insert("evidence".into(), Value::Array(values));
    report.statuses.insert("hits".into(), Value::Array(hits));
    report
        .statuses
        .insert("scanned".into(), json!(entries.len()));
    Ok(report)
}
