//! Stable sheaf cohomology of Schur functors of the cotangent bundle on
//! projective space in prime characteristic, and Hilbert functions of
//! Koszul modules.

pub mod arith;
pub mod cli;
pub mod closed_form;
pub mod complexes;
pub mod error;
pub mod hooks;
pub mod koszul;
pub mod partitions;
pub mod schur;

pub use arith::{binom_mod_p, poly_mul, poly_reverse, rank_mod_p, CohPoly, Fp, Prime, SeriesTU, SparseMat};
pub use error::{Error, Result};
