//! The second engine: a perturbed free resolution of `Z` over `Z[L ⋊ G]`, its filtered
//! cochain complex, spectral-sequence pages and characteristic classes.

mod charclass;
mod filtered;
mod pages;
mod twisted;

pub use charclass::{
    char_class, char_class_checked, identity_class, sah_sign, theta, verify_sah_product, CharClass,
    ClassStatus, SahCheck,
};
pub use filtered::FilteredComplex;
pub use pages::{PageCell, SpectralPage, SpectralSequence};
pub use twisted::{AugTerm, FreeChain, TwistedResolution};

use crate::exactlin::LinAlgError;
use crate::gcoh::GCohError;
use crate::gmod::GModError;
use crate::koszul::KoszulError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LhsError {
    #[error("group of the resolution and of the module differ")]
    GroupMismatch,
    #[error("degree {degree} is beyond the truncation {max}")]
    DegreeBeyondTruncation { degree: usize, max: usize },
    #[error("perturbation recursion failed for D_{k} on C_({p},{q})")]
    RecursionFailure { k: usize, p: usize, q: usize },
    #[error("engine mismatch: {0}")]
    EngineMismatch(String),
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("class does not survive to E_{r} at ({p},{q})")]
    NotOnPage { r: usize, p: usize, q: usize },
    #[error("coefficients must be the exterior power Λ^t L")]
    WrongCoefficients,
    #[error("integer overflow in the resolution")]
    Overflow,
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error(transparent)]
    GCoh(#[from] GCohError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    GMod(#[from] GModError),
}
