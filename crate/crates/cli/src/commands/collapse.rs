use std::collections::BTreeMap;

use clap::Args;
use lhslab::decomp::{collapse_criteria, verify_low_pages_vanish, Verdict};
use lhslab::exactlin::FieldSpec;
use lhslab::gmod::ModuleSpec;
use serde_json::{json, Value};

use super::{parse_field, parse_module, sequence, twisted};
use crate::catalog::Catalog;
use crate::report::{status_name, Report};
use crate::CliError;

#[derive(Debug, Clone, Args)]
pub struct CollapseArgs {
    pub lattice: String,
    #[arg(long, value_parser = parse_field)]
    pub field: FieldSpec,
    /// Highest total degree in the dimension tables.
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
    #[arg(long, default_value_t = 4)]
    pub max_page: usize,
    /// Extra coefficient modules whose rows are probed (repeatable).
    #[arg(long = "coeff", value_parser = parse_module, default_values_t = vec![ModuleSpec::Triv, ModuleSpec::Wedge(1)])]
    pub coeffs: Vec<ModuleSpec>,
}

impl CollapseArgs {
    pub fn config(&self) -> Value {
        let coeffs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        json!({
            "lattice": self.lattice,
            "field": self.field.to_string(),
            "maxDegree": self.max_degree,
            "maxPage": self.max_page,
            "coeffs": coeffs,
        })
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn collapse_report(cat: &Catalog, args: &CollapseArgs) -> Result<Report, CliError> {
    if args.max_degree == 0 {
        return Err(CliError::Parse("--max-degree must be at least 1".into()));
    }
    let lattice = cat.lattice(&args.lattice)?;
    let field = args.field;
    let mut report = Report::new("collapse", args.config(), field.to_string());
    let res = twisted(lattice, args.max_degree + 1)?;
    let top = args.max_degree - 1;

    let mut criteria = Vec::new();
    let mut consistent = Verdict::Pass;
    let mut collapsed = true;
    for t in 0..=lattice.rank().min(top) {
        let c = collapse_criteria(&res, field, t, args.max_page, &args.coeffs)?;
        let statuses: Vec<Value> = c
            .statuses
            .iter()
            .map(|(r, s)| json!({"r": r, "status": status_name(*s)}))
            .collect();
        let nonzero: Vec<Value> = c
            .nonzero_rows
            .iter()
            .map(|(m, r, s)| json!({"module": m, "r": r, "s": s}))
            .collect();
        criteria.push(json!({
            "t": t,
            "maxPage": c.max_page,
            "edgeClasses": statuses,
            "edgesZero": c.edges_zero,
            "e2Dim": c.e2_dim,
            "lastPageDim": c.last_dim,
            "dimsEqual": c.dims_equal,
            "rowsVanish": c.rows_vanish,
            "nonzeroRows": nonzero,
        }));
        if !c.consistent {
            consistent = consistent.and(Verdict::Fail(format!(
                "collapse criteria disagree in row {t}"
            )));
        }
        collapsed &= c.rows_vanish;
    }
    report
        .statuses
        .insert("criteria".into(), Value::Array(criteria));
    report.statuses.insert("collapsed".into(), json!(collapsed));
    report.verdict("criteriaConsistent", consistent);

    let mut modules: BTreeMap<String, ModuleSpec> = (0..=lattice.rank())
        .map(|t| (format!("wedge:{t}"), ModuleSpec::Wedge(t)))
        .collect();
    modules.extend(args.coeffs.iter().map(|c| (c.to_string(), c.clone())));
    let mut abutment = Verdict::Pass;
    let mut degenerate = true;
    let mut tables = serde_json::Map::new();
    for (name, spec) in &modules {
        let seq = sequence(&res, spec, field)?;
        let mut e2 = Vec::new();
        let mut einf = Vec::new();
        let mut totals = Vec::new();
        for n in 0..=top {
            let (graded, total) = seq.abutment(n)?;
            let mut e2_sum = 0;
            for q in 0..=lattice.rank().min(n) {
                let d2 = seq.e2(n - q, q)?.map_or(0, |s| s.dim());
                let di = seq.e_infinity(n - q, q)?.sub.dim();
                e2.push(json!([n - q, q, d2]));
                einf.push(json!([n - q, q, di]));
                e2_sum += d2;
            }
            totals.push(json!({"n": n, "graded": graded, "total": total, "e2Sum": e2_sum}));
            if graded != total {
                abutment = abutment.and(Verdict::Fail(format!("{name}: Σ E_∞ ≠ dim H^{n}")));
            }
            degenerate &= e2_sum == total;
        }
        tables.insert(
            name.clone(),
            json!({"e2": e2, "eInfinity": einf, "abutment": totals}),
        );
    }
    report
        .tables
        .insert("modules".into(), Value::Object(tables));
    report.verdict("abutment", abutment);

    let low = verify_low_pages_vanish(&res, field, &args.coeffs)?;
    report.verdict("lowPagesVanish", low.verdict);

    if is_prime(lattice.group().order()) {
        let v = if collapsed && degenerate {
            Verdict::Pass
        } else {
            Verdict::Fail("prime-order group without collapse at E_2".into())
        };
        report.verdict("primeCyclicCollapse", v);
    }
    Ok(report)
}
