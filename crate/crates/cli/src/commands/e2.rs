use clap::Args;
use lhslab::decomp::Verdict;
use lhslab::exactlin::FieldSpec;
use lhslab::gcoh::{cohomology, GResolution};
use lhslab::gmod::{FGModule, GLattice, ModuleSpec};
use lhslab::lhs::{FilteredComplex, TwistedResolution};
use serde_json::{json, Value};

use super::{parse_field, parse_module};
use crate::catalog::Catalog;
use crate::report::Report;
use crate::CliError;

#[derive(Debug, Clone, Args)]
pub struct E2Args {
    pub lattice: String,
    #[arg(long, value_parser = parse_field)]
    pub field: FieldSpec,
    #[arg(long, default_value = "triv", value_parser = parse_module)]
    pub coeff: ModuleSpec,
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
    /// Also compute the table from the `δ_1` ranks of the twisted complex and compare.
    #[arg(long)]
    pub cross_check: bool,
}

impl E2Args {
    pub fn config(&self) -> Value {
        json!({
            "lattice": self.lattice,
            "field": self.field.to_string(),
            "coeff": self.coeff.to_string(),
            "maxDegree": self.max_degree,
            "crossCheck": self.cross_check,
        })
    }
}

/// `table[t][s] = dim H^s(G, Hom(Λ^t L, M))` for `s + t <= max_degree`, from group cohomology.
pub fn engine_a_table(
    lattice: &GLattice,
    field: FieldSpec,
    coeff: &ModuleSpec,
    max_degree: usize,
) -> Result<Vec<Vec<usize>>, CliError> {
    let gres = GResolution::preferred(lattice.group().clone(), max_degree + 1)?;
    let m = coeff.eval(lattice, field)?;
    let mut table = Vec::new();
    for t in 0..=lattice.rank().min(max_degree) {
        let h = FGModule::hom(&FGModule::from_lattice(&lattice.wedge_power(t), field), &m)?;
        let mut row = Vec::new();
        for s in 0..=max_degree - t {
            row.push(cohomology(&gres, &h, s)?.dim());
        }
        table.push(row);
    }
    Ok(table)
}

/// The same table from the twisted complex alone.
pub fn engine_b_table(
    lattice: &GLattice,
    field: FieldSpec,
    coeff: &ModuleSpec,
    max_degree: usize,
) -> Result<Vec<Vec<usize>>, CliError> {
    let gres = GResolution::preferred(lattice.group().clone(), max_degree + 1)?;
    let res = TwistedResolution::build(lattice, gres, max_degree + 1)?;
    let complex = FilteredComplex::new(&res, coeff.eval(lattice, field)?)?;
    Ok((0..=lattice.rank().min(max_degree))
        .map(|t| {
            (0..=max_degree - t)
                .map(|s| complex.e2_dim_from_d1(s, t))
                .collect()
        })
        .collect())
}

pub fn e2_report(cat: &Catalog, args: &E2Args) -> Result<Report, CliError> {
    let lattice = cat.lattice(&args.lattice)?;
    let mut report = Report::new("e2", args.config(), args.field.to_string());
    let a = engine_a_table(lattice, args.field, &args.coeff, args.max_degree)?;
    report.tables.insert("e2".into(), json!(a));
    if args.cross_check {
        let b = engine_b_table(lattice, args.field, &args.coeff, args.max_degree)?;
        report
            .tables
            .insert("e2FromTwistedComplex".into(), json!(b));
        let v = if a == b {
            Verdict::Pass
        } else {
            Verdict::Fail("group cohomology and the twisted complex disagree".into())
        };
        report.verdict("engineAgreement", v);
    }
    Ok(report)
}
