//! Exact projective differential invariants of hypersurfaces: adapted
//! charts, Fubini forms, osculating-line varieties, ideal components and
//! the rank of the differential of the moduli map.

pub mod algebra;
pub mod error;
pub mod fixtures;
pub mod frames;
pub mod geometry;
pub mod moduli;
pub mod parser_io;

pub use algebra::{Field, FieldElement, Jet, Monomial, MultiPoly, Subspace, SymForm};
pub use error::{Error, Result};
pub use parser_io::{HypersurfaceSpec, Report};
