//! Decompositions `L = L' ⊕ L''`: the maps `C'`, `C''`, `D'`, `D''` between `Hom` modules of
//! exterior powers, and checks relating the characteristic classes and differentials of `L`
//! to those of the summands.

mod collapse;
mod maps;
mod verify;

pub use collapse::{
    collapse_criteria, edge_surjective, scan_lattice, verify_low_pages_vanish,
    verify_restriction_surjectivity, CollapseReport, LowPagesReport, RestrictionSurjectivityReport,
    ScanRow,
};
pub use maps::{
    hom_operator, verify_factorizations, DecompKind, DecompMap, FactorizationReport, Side, Split,
};
pub use verify::{
    verify_coefficient_factorization, verify_page_compatibility, verify_projection_formula,
    verify_sum_formula, CoefficientFactorizationReport, PageCompatibilityReport, ProjectionReport,
    SplitResolutions, SumFormulaReport,
};

use crate::exactlin::LinAlgError;
use crate::gcoh::GCohError;
use crate::gmod::GModError;
use crate::lhs::LhsError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompError {
    #[error("declared sum is not block diagonal in its summands")]
    NotBlockDiagonal,
    #[error(transparent)]
    Lhs(#[from] LhsError),
    #[error(transparent)]
    GCoh(#[from] GCohError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    GMod(#[from] GModError),
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// An identity that should hold failed.
    Fail(String),
    /// The hypotheses of the statement do not hold, so nothing was compared.
    Hypothesis(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    /// Failures dominate hypothesis failures, which dominate passes.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail(a), _) => Verdict::Fail(a),
            (_, Verdict::Fail(b)) => Verdict::Fail(b),
            (Verdict::Hypothesis(a), _) => Verdict::Hypothesis(a),
            (_, b) => b,
        }
    }
}
