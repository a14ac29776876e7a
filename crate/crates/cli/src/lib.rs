//! Frontend for `lhslab`: lattice catalogs, the result cache, JSON reports and the
//! subcommands behind the `lhslab` binary.

pub mod cache;
pub mod catalog;
pub mod commands;
pub mod report;

use lhslab::decomp::DecompError;
use lhslab::gcoh::GCohError;
use lhslab::gmod::GModError;
use lhslab::lhs::LhsError;

pub const TOOL_VERSION: &str = concat!("lhslab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invariant(String),
    #[error("hypothesis failure: {0}")]
    Hypothesis(String),
    #[error("engine mismatch: {0}")]
    Engine(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Hypothesis(_) => 4,
            CliError::Engine(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<GModError> for CliError {
    fn from(e: GModError) -> Self {
        match e {
            GModError::BadSpec(_) => CliError::Parse(e.to_string()),
            _ => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<GCohError> for CliError {
    fn from(e: GCohError) -> Self {
        match e {
            GCohError::GMod(g) => g.into(),
            GCohError::BadTruncation(_) | GCohError::DegreeOutOfRange { .. } => {
                CliError::Parse(e.to_string())
            }
            _ => CliError::Engine(e.to_string()),
        }
    }
}

impl From<LhsError> for CliError {
    fn from(e: LhsError) -> Self {
        match e {
            LhsError::GMod(g) => g.into(),
            LhsError::GCoh(g) => g.into(),
            LhsError::HypothesisFailure(m) => CliError::Hypothesis(m),
            LhsError::DegreeBeyondTruncation { .. } => CliError::Parse(e.to_string()),
            _ => CliError::Engine(e.to_string()),
        }
    }
}

impl From<DecompError> for CliError {
    fn from(e: DecompError) -> Self {
        match e {
            DecompError::NotBlockDiagonal => CliError::Invariant(e.to_string()),
            DecompError::Lhs(l) => l.into(),
            DecompError::GCoh(g) => g.into(),
            DecompError::GMod(g) => g.into(),
            DecompError::LinAlg(_) => CliError::Engine(e.to_string()),
        }
    }
}
