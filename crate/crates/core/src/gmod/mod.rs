//! Finite groups, integral lattices and field-coefficient modules.

mod group;
mod intmat;
mod lattice;
mod module;

pub use group::{FiniteGroup, GroupHom};
pub use intmat::{binomial, subset_index, subsets, IntMatrix};
pub use lattice::{
    inclusion_prime, inclusion_second, projection_prime, projection_second, GLattice,
    WedgeDecomposition, WedgeOrder,
};
pub use module::{FGModule, ModuleSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GModError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("not a representation: {0}")]
    NotARepresentation(String),
    #[error("map is not a group homomorphism")]
    NotAHomomorphism,
    #[error("modules live over different groups")]
    GroupMismatch,
    #[error("modules live over different fields")]
    FieldMismatch,
    #[error("bad module spec: {0}")]
    BadSpec(String),
}
