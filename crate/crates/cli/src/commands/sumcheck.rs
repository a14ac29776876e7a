use std::collections::BTreeMap;

use clap::Args;
use lhslab::decomp::{
    verify_factorizations, verify_page_compatibility, verify_projection_formula,
    verify_sum_formula, Side, Split, SplitResolutions, Verdict,
};
use lhslab::exactlin::FieldSpec;
use lhslab::gcoh::GResolution;
use lhslab::gmod::WedgeOrder;
use serde_json::{json, Value};

use super::parse_field;
use crate::catalog::Catalog;
use crate::report::{coords, Report};
use crate::CliError;

#[derive(Debug, Clone, Args)]
pub struct SumcheckArgs {
    /// First summand `L'`.
    pub prime: String,
    /// Second summand `L''`.
    pub second: String,
    #[arg(long, value_parser = parse_field)]
    pub field: FieldSpec,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[arg(long, default_value_t = 2)]
    pub page: usize,
    /// Repeat with the other ordering of `Λ(L' ⊕ L'')` and require identical verdicts.
    #[arg(long)]
    pub sign_audit: bool,
}

impl SumcheckArgs {
    pub fn config(&self) -> Value {
        json!({
            "prime": self.prime,
            "second": self.second,
            "field": self.field.to_string(),
            "t": self.t,
            "page": self.page,
            "signAudit": self.sign_audit,
        })
    }
}

/// Build degree for checks on row `t` up to page `r`.
pub fn sumcheck_degree(t: usize, r: usize) -> usize {
    (t + 2).max(r + 1)
}

/// Sum formula, projection formula, page compatibility and factorizations for one split.
pub fn split_checks(
    split: &Split,
    res: &SplitResolutions,
    t: usize,
    r: usize,
) -> Result<(BTreeMap<String, Verdict>, Value), CliError> {
    let mut verdicts = BTreeMap::new();
    let sum = verify_sum_formula(split, res, t, r)?;
    verdicts.insert("sumFormula".to_string(), sum.verdict.clone());
    let proj = verify_projection_formula(split, res, t, r)?;
    verdicts.insert("projectionFormula".to_string(), proj.verdict.clone());
    let mut compat = Verdict::Pass;
    for side in [Side::Prime, Side::Second] {
        for i in 0..=t.min(split.lattice(side).rank()) {
            if i + 2 > res.side(side).degree() {
                continue;
            }
            compat = compat.and(verify_page_compatibility(split, res, side, i, r)?.verdict);
        }
    }
    verdicts.insert("pageCompatibility".to_string(), compat);
    let fact = verify_factorizations(split, r)?;
    let fv = if fact.passed() {
        Verdict::Pass
    } else {
        Verdict::Fail(fact.failures.join("; "))
    };
    verdicts.insert("factorizations".to_string(), fv);
    let sides: Vec<Value> = proj
        .sides
        .iter()
        .map(|(side, l, rr)| json!({"side": format!("{side:?}"), "lhs": coords(l), "rhs": coords(rr)}))
        .collect();
    let tables = json!({
        "sumLhs": coords(&sum.lhs),
        "sumRhs": coords(&sum.rhs),
        "reduced": coords(&sum.reduced),
        "projection": sides,
        "factorizationsChecked": fact.checked,
    });
    Ok((verdicts, tables))
}

fn run_order(
    cat: &Catalog,
    args: &SumcheckArgs,
    order: WedgeOrder,
) -> Result<(BTreeMap<String, Verdict>, Value), CliError> {
    let (_, split) = cat.split(&args.prime, &args.second, args.field, order)?;
    let degree = sumcheck_degree(args.t, args.page);
    let gres = GResolution::preferred(split.sum.group().clone(), degree)?;
    let res = SplitResolutions::build(&split, &gres, degree)?;
    split_checks(&split, &res, args.t, args.page)
}

pub fn sumcheck_report(cat: &Catalog, args: &SumcheckArgs) -> Result<Report, CliError> {
    if args.page < 2 {
        return Err(CliError::Parse("--page must be at least 2".into()));
    }
    let (declared, split) = cat.split(
        &args.prime,
        &args.second,
        args.field,
        WedgeOrder::PrimeFirst,
    )?;
    if args.t == 0 || args.t > split.sum.rank() {
        return Err(CliError::Parse(format!(
            "t must lie in 1..={}",
            split.sum.rank()
        )));
    }
    let mut report = Report::new("sumcheck", args.config(), args.field.to_string());
    report
        .statuses
        .insert("declaredSum".into(), json!(declared));
    let (verdicts, tables) = run_order(cat, args, WedgeOrder::PrimeFirst)?;
    report.tables.insert("primeFirst".into(), tables);
    if args.sign_audit {
        let (other, tables) = run_order(cat, args, WedgeOrder::SecondFirst)?;
        report.tables.insert("secondFirst".into(), tables);
        let kinds = |m: &BTreeMap<String, Verdict>| -> Vec<(String, bool, bool)> {
            m.iter()
                .map(|(k, v)| (k.clone(), v.is_pass(), matches!(v, Verdict::Fail(_))))
                .collect()
        };
        let v = if kinds(&verdicts) == kinds(&other) {
            Verdict::Pass
        } else {
            Verdict::Fail("verdicts depend on the ordering of the exterior basis".into())
        };
        report.verdict("signAudit", v);
        for (k, v) in other {
            report.verdict(k, v);
        }
    }
    for (k, v) in verdicts {
        report.verdict(k, v);
    }
    Ok(report)
}
