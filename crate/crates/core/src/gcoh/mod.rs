//! Group cohomology of finite groups from explicit free resolutions.

mod cochains;
mod resolution;

pub use cochains::{
    coboundary, cochain_map, cohomology, composition_pairing, cup_product, induced_on_cohomology,
    is_equivariant_pairing, restriction_cochain_map, restriction_on_cohomology, CohomologyClass,
};
pub use resolution::{GResolution, ResolutionKind, Term};

use crate::exactlin::LinAlgError;
use crate::gmod::GModError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GCohError {
    #[error("resolution must be truncated at degree >= 1, got {0}")]
    BadTruncation(usize),
    #[error("periodic resolution needs a cyclic-tagged group")]
    NotCyclic,
    #[error("degree {degree} is beyond the resolution length {max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("map is not equivariant")]
    NotEquivariant,
    #[error("operation needs the bar resolution")]
    NeedsBar,
    #[error("group mismatch")]
    GroupMismatch,
    #[error("shape mismatch")]
    ShapeMismatch,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    GMod(#[from] GModError),
}
