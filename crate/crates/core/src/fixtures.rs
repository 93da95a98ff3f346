//! Built-in hypersurfaces and random data generators.
//!
//! The 3x3 matrix fixtures use the coordinate layout
//!
//! ```text
//! w0 w3 w8
//! w6 w1 w4
//! w5 w7 w2
//! ```

use num_bigint::BigInt;
use rand::Rng;

use crate::algebra::{monomials_of_degree, Field, FieldElement, MultiPoly, SymForm};
use crate::error::Result;
use crate::parser_io::{parse_homogeneous, HypersurfaceSpec};

pub const DET3: &str = "w0*w1*w2 + w3*w4*w5 + w6*w7*w8 - w0*w4*w7 - w2*w3*w6 - w1*w5*w8";
pub const PERM3: &str = "w0*w1*w2 + w3*w4*w5 + w6*w7*w8 + w0*w4*w7 + w2*w3*w6 + w1*w5*w8";

fn matrix_vars() -> Vec<String> {
    (0..9).map(|i| format!("w{i}")).collect()
}

fn ints(v: &[i64]) -> Vec<FieldElement> {
    v.iter().map(|&x| FieldElement::from_int(x)).collect()
}

/// The 3x3 determinant at the rank-two point `[1:1:0:..:0]`.
pub fn det3(order: u32) -> Result<HypersurfaceSpec> {
    let vars = matrix_vars();
    let f = parse_homogeneous(DET3, &vars, &Field::Rational)?;
    HypersurfaceSpec::new(vars, f, Field::Rational, ints(&[1, 1, 0, 0, 0, 0, 0, 0, 0]), order)
}

/// The 3x3 permanent at a normalized point: the first row and column are
/// all ones, `w1, w4, w7` are given and `w2` is solved from `F = 0`.
/// Returns `None` when `w1 = -1`.
pub fn perm3_point(w1: i64, w4: i64, w7: i64) -> Option<Vec<FieldElement>> {
    if w1 == -1 {
        return None;
    }
    let w2 = FieldElement::from_ratio(-(w1 + w4 + w7 + w4 * w7), w1 + 1);
    let mut p = ints(&[1, w1, 0, 1, w4, 1, 1, w7, 1]);
    p[2] = w2;
    Some(p)
}

pub fn perm3(point: Vec<FieldElement>, order: u32) -> Result<HypersurfaceSpec> {
    let vars = matrix_vars();
    let f = parse_homogeneous(PERM3, &vars, &Field::Rational)?;
    HypersurfaceSpec::new(vars, f, Field::Rational, point, order)
}

/// `count` normalized smooth points of the permanent, drawn from `rng`.
pub fn perm3_samples<R: Rng + ?Sized>(rng: &mut R, count: usize, order: u32) -> Result<Vec<HypersurfaceSpec>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (w1, w4, w7) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        let Some(p) = perm3_point(w1, w4, w7) else { continue };
        let spec = perm3(p, order)?;
        let f = &spec.polynomial;
        if (0..9).all(|i| f.derivative(i).eval(&spec.point).is_zero()) {
            continue;
        }
        out.push(spec);
    }
    Ok(out)
}

/// The Fermat cubic in `P^{n+1}` over `Q[t]/(t^3 - (n+1))` at `[t:-1:..:-1]`.
pub fn fermat(n: usize, order: u32) -> Result<HypersurfaceSpec> {
    let big_n = n as i64 + 1;
    let field = Field::extension(vec![BigInt::from(-big_n), BigInt::from(0), BigInt::from(0), BigInt::from(1)])?;
    let vars: Vec<String> = (0..n + 2).map(|i| format!("z{i}")).collect();
    let text = vars.iter().map(|v| format!("{v}^3")).collect::<Vec<_>>().join(" + ");
    let f = parse_homogeneous(&text, &vars, &field)?;
    let mut point = vec![field.generator().expect("extension has a generator")];
    point.extend((0..n + 1).map(|_| FieldElement::from_int(-1)));
    HypersurfaceSpec::new(vars, f, field, point, order)
}

/// The conic `z0 z2 - z1^2` at `[1:0:0]`.
pub fn conic(order: u32) -> Result<HypersurfaceSpec> {
    let vars: Vec<String> = (0..3).map(|i| format!("z{i}")).collect();
    let f = parse_homogeneous("z0*z2 - z1^2", &vars, &Field::Rational)?;
    HypersurfaceSpec::new(vars, f, Field::Rational, ints(&[1, 0, 0]), order)
}

/// Form of degree `deg` in `n` variables with coefficients uniform in `[-10, 10]`.
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, n: usize, deg: u32) -> SymForm {
    let terms = monomials_of_degree(n, deg)
        .into_iter()
        .map(|m| (m, FieldElement::from_int(rng.gen_range(-10..=10))));
    SymForm::new(MultiPoly::from_terms(n, terms), deg).expect("homogeneous by construction")
}

/// Like [`random_form`] but redraws until the form is nonzero and, for
/// quadrics, nondegenerate.
pub fn generic_form<R: Rng + ?Sized>(rng: &mut R, n: usize, deg: u32) -> SymForm {
    loop {
        let f = random_form(rng, n, deg);
        if f.is_zero() {
            continue;
        }
        if deg == 2 && crate::algebra::rank(&f.symmetric_matrix()).expect("square") < n {
            continue;
        }
        return f;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        assert_eq!(det3(3).unwrap().dim(), 7);
        assert_eq!(fermat(4, 3).unwrap().dim(), 4);
        let p = perm3_point(2, 3, -1).unwrap();
        assert!(perm3(p, 3).is_ok());
        assert!(perm3_point(-1, 0, 0).is_none());
    }
}
