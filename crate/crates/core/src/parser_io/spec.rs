//! Hypersurface specification files.
//!
//! A spec is a JSON document:
//!
//! ```json
//! {
//!   "variables": ["z0", "z1", "z2"],
//!   "polynomial": "z0*z2 - z1^2",
//!   "field": "Q",
//!   "point": ["1", "0", "0"],
//!   "order": 2
//! }
//! ```
//!
//! `field` is either `"Q"` or `{"minpoly": "t^3 - 5"}`; point coordinates
//! are constant expressions in the field (so may mention `t`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::parse::{parse_field_element, parse_homogeneous, parse_minpoly};
use crate::algebra::{Field, FieldElement, MultiPoly};
use crate::error::{Error, Result};

pub const MIN_ORDER: u32 = 2;
pub const MAX_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Extension { minpoly: String },
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec::Named("Q".into())
    }

    pub fn build(&self) -> Result<Field> {
        match self {
            FieldSpec::Named(name) if matches!(name.as_str(), "Q" | "QQ" | "rational") => Ok(Field::Rational),
            FieldSpec::Named(other) => Err(Error::Spec(format!("unknown field `{other}`"))),
            FieldSpec::Extension { minpoly } => Field::extension(parse_minpoly(minpoly)?),
        }
    }

    pub fn from_field(field: &Field) -> Self {
        match field {
            Field::Rational => Self::rational(),
            Field::Extension(ext) => FieldSpec::Extension { minpoly: ext.minpoly_text() },
        }
    }
}

/// On-disk form of a spec.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub variables: Vec<String>,
    pub polynomial: String,
    pub field: FieldSpec,
    pub point: Vec<String>,
    pub order: u32,
}

/// A validated hypersurface `X = Zeros(F)` with a base point `x` on it.
#[derive(Debug, Clone)]
pub struct HypersurfaceSpec {
    pub variables: Vec<String>,
    pub polynomial: MultiPoly,
    pub field: Field,
    pub point: Vec<FieldElement>,
    pub order: u32,
}

impl HypersurfaceSpec {
    /// Validates homogeneity, point dimension, `F(x) = 0` and the order range.
    pub fn new(
        variables: Vec<String>,
        polynomial: MultiPoly,
        field: Field,
        point: Vec<FieldElement>,
        order: u32,
    ) -> Result<Self> {
        if polynomial.nvars() != variables.len() {
            return Err(Error::Spec("polynomial and variable list disagree".into()));
        }
        if variables.len() < 3 {
            return Err(Error::Spec("need at least three homogeneous coordinates".into()));
        }
        match polynomial.homogeneous_degree() {
            Some(d) if d >= 2 => {}
            Some(_) => return Err(Error::Spec("defining polynomial must have degree at least 2".into())),
            None => return Err(Error::Spec("defining polynomial must be nonzero and homogeneous".into())),
        }
        if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
            return Err(Error::Spec(format!("order must lie in {MIN_ORDER}..={MAX_ORDER}, got {order}")));
        }
        if point.len() != variables.len() {
            return Err(Error::Spec(format!(
                "point has {} coordinates but there are {} variables",
                point.len(),
                variables.len()
            )));
        }
        if point.iter().all(FieldElement::is_zero) {
            return Err(Error::Spec("the zero vector is not a projective point".into()));
        }
        if let Some(bad) = polynomial.terms().map(|(_, c)| c).chain(&point).find(|c| !field.contains(c)) {
            return Err(Error::Spec(format!("element {bad} does not lie in {}", field.describe())));
        }
        let value = polynomial.eval(&point);
        if !value.is_zero() {
            return Err(Error::NotOnHypersurface(value.to_string()));
        }
        Ok(Self { variables, polynomial, field, point, order })
    }

    pub fn from_file(file: &SpecFile) -> Result<Self> {
        let field = file.field.build()?;
        let polynomial = parse_homogeneous(&file.polynomial, &file.variables, &field)?;
        let point = file
            .point
            .iter()
            .map(|s| parse_field_element(s, &field))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(file.variables.clone(), polynomial, field, point, file.order)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_file(&self) -> SpecFile {
        SpecFile {
            variables: self.variables.clone(),
            polynomial: self.polynomial.format_with(&self.variables),
            field: FieldSpec::from_field(&self.field),
            point: self.point.iter().map(ToString::to_string).collect(),
            order: self.order,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("spec serializes");
        s.push('\n');
        s
    }

    pub fn with_point(&self, point: Vec<FieldElement>) -> Result<Self> {
        Self::new(self.variables.clone(), self.polynomial.clone(), self.field.clone(), point, self.order)
    }

    pub fn with_order(&self, order: u32) -> Result<Self> {
        Self::new(self.variables.clone(), self.polynomial.clone(), self.field.clone(), self.point.clone(), order)
    }

    /// Degree of the defining polynomial.
    pub fn degree(&self) -> u32 {
        self.polynomial.homogeneous_degree().expect("validated homogeneous")
    }

    /// Dimension `n` of the hypersurface in `P^{n+1}`.
    pub fn dim(&self) -> usize {
        self.variables.len() - 2
    }
}
