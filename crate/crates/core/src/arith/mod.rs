//! Exact scalar arithmetic over prime fields, binomial coefficients, sparse
//! matrices and the polynomial containers shared by every engine.

mod binom;
mod dense;
mod fp;
mod gf2;
mod poly;
mod prime;
mod series;
mod sparse;

pub use binom::binom_mod_p;
pub use dense::Echelon;
pub use fp::Fp;
pub use poly::{poly_mul, poly_reverse, CohPoly};
pub use prime::Prime;
pub use series::{SeriesTU, SignedPoly};
pub use sparse::{rank_mod_p, SparseMat};
pub(crate) use sparse::packed_gf2_bytes;
