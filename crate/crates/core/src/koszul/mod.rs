//! Laurent and twisted group rings, and the Koszul resolution of `Z` over `Z[L]`.

mod algebra;
mod complex;
mod gaction;

pub(crate) use algebra::add_entry;
pub use algebra::{
    add_exponents, geometric_terms, Exponent, LaurentPoly, TwistedAlgebra, TwistedElement,
};
pub use complex::{mask_to_vec, vec_to_mask, KoszulChain, KoszulResolution, Subset};
pub use gaction::GActionChainData;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KoszulError {
    #[error("integer overflow in exponent or coefficient arithmetic")]
    Overflow,
}
