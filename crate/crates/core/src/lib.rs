//! Lyndon–Hochschild–Serre spectral sequences of split extensions `L ⋊ G`
//! with field coefficients, and the characteristic classes of the lattice `L`.

pub mod decomp;
pub mod exactlin;
pub mod gcoh;
pub mod gmod;
pub mod koszul;
pub mod lhs;
