//! Exact scalars, polynomials, jets, symmetric forms and linear algebra.

pub mod field;
pub mod jet;
pub mod linalg;
pub mod poly;
pub mod symform;

pub use field::{ExtensionField, Field, FieldElement, MAX_EXTENSION_DEGREE};
pub use jet::Jet;
pub use linalg::{identity, inverse, mat_mul, mat_vec, rank, Subspace};
pub use poly::{binomial, factorial, monomials_of_degree, sym_dim, Monomial, MultiPoly};
pub use symform::{MonomialBasis, SymForm};
