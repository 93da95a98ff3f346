//! Expression parsing, hypersurface spec files and report serialization.

pub mod parse;
pub mod report;
pub mod spec;

pub use parse::{parse_field_element, parse_homogeneous, parse_minpoly, parse_poly, ParseError, ParseErrorKind};
pub use report::{digest, Format, Report};
pub use spec::{FieldSpec, HypersurfaceSpec, SpecFile, MAX_ORDER, MIN_ORDER};
