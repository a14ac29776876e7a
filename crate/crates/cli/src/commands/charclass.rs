use clap::Args;
use lhslab::decomp::Verdict;
use lhslab::exactlin::FieldSpec;
use lhslab::gmod::ModuleSpec;
use lhslab::lhs::{char_class_checked, ClassStatus, LhsError};
use serde_json::{json, Value};

use super::{parse_field, sequence, twisted};
use crate::catalog::Catalog;
use crate::report::{coords, status_name, Report};
use crate::CliError;

#[derive(Debug, Clone, Args)]
pub struct CharclassArgs {
    pub lattice: String,
    #[arg(long, value_parser = parse_field)]
    pub field: FieldSpec,
    /// A single exterior degree; all of `1..=rank` by default.
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub max_page: usize,
    /// Recomputations with randomized lifts that must reproduce each class.
    #[arg(long, default_value_t = 2)]
    pub reruns: u64,
}

impl CharclassArgs {
    pub fn config(&self) -> Value {
        json!({
            "lattice": self.lattice,
            "field": self.field.to_string(),
            "t": self.t,
            "maxPage": self.max_page,
            "reruns": self.reruns,
        })
    }
}

pub fn charclass_report(cat: &Catalog, args: &CharclassArgs) -> Result<Report, CliError> {
    let lattice = cat.lattice(&args.lattice)?;
    let mut report = Report::new("charclass", args.config(), args.field.to_string());
    let degrees: Vec<usize> = match args.t {
        Some(t) if t == 0 || t > lattice.rank() => {
            return Err(CliError::Parse(format!(
                "t must lie in 1..={}",
                lattice.rank()
            )))
        }
        Some(t) => vec![t],
        None => (1..=lattice.rank()).collect(),
    };
    let mut classes = Vec::new();
    report.verdict("classIndependence", Verdict::Pass);
    if let Some(&top) = degrees.last() {
        let res = twisted(lattice, top + 2)?;
        let p = args.field.characteristic() as usize;
        for &t in &degrees {
            let seq = sequence(&res, &ModuleSpec::Wedge(t), args.field)?;
            for r in 2..=args.max_page.min(t + 1) {
                let v = match char_class_checked(&seq, t, r, args.reruns) {
                    Ok(v) => v,
                    Err(LhsError::EngineMismatch(m)) => {
                        report.verdict("classIndependence", Verdict::Fail(m));
                        break;
                    }
                    Err(e) => return Err(e.into()),
                };
                classes.push(json!({
                    "t": t,
                    "r": r,
                    "status": status_name(v.status),
                    "pageCoords": coords(&v.page_coords),
                }));
                if p > 0 && r < p {
                    let ok = v.status == ClassStatus::Zero;
                    let verdict = if ok {
                        Verdict::Pass
                    } else {
                        Verdict::Fail(format!("v_{r}^{t} ≠ 0 below the characteristic"))
                    };
                    report.verdict("lowPagesVanish", verdict);
                }
                if v.status != ClassStatus::Zero {
                    break;
                }
            }
        }
    }
    report
        .statuses
        .insert("classes".into(), Value::Array(classes));
    Ok(report)
}
