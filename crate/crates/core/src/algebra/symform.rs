//! Homogeneous symmetric forms `P in S^d T*`, stored as polynomials in the
//! tangent coordinates `y^1..y^n`.
//!
//! The symmetric tensor of a form is recovered by dividing each monomial
//! coefficient by its multinomial count, so `P(y) = sum r_{a_1..a_d} y^{a_1}..y^{a_d}`
//! over ordered index tuples. With that convention the interior product is
//! `(v -| P)(w, ..) = P(v, w, ..)`, i.e. `(1/d)` times the directional derivative.

use std::collections::HashMap;
use std::fmt;

use super::field::FieldElement;
use super::poly::{monomials_of_degree, Monomial, MultiPoly};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct SymForm {
    degree: u32,
    poly: MultiPoly,
}

/// Fixed ordered basis of degree-`deg` monomials, with reverse lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let monomials = monomials_of_degree(nvars, degree);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self { nvars, degree, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

impl SymForm {
    /// Wraps a polynomial, checking it is homogeneous of `degree` (or zero).
    pub fn new(poly: MultiPoly, degree: u32) -> Result<Self> {
        if !poly.is_zero() && poly.homogeneous_degree() != Some(degree) {
            return Err(Error::Shape(format!("polynomial is not homogeneous of degree {degree}")));
        }
        Ok(Self { degree, poly })
    }

    /// The homogeneous component of degree `degree` of an arbitrary polynomial.
    pub fn component(poly: &MultiPoly, degree: u32) -> Self {
        Self { degree, poly: poly.homogeneous_part(degree) }
    }

    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self { degree, poly: MultiPoly::zero(nvars) }
    }

    /// Builds the form whose symmetric tensor is `tensor`, a function of a
    /// sorted index tuple.
    pub fn from_tensor(nvars: usize, degree: u32, tensor: impl Fn(&[usize]) -> FieldElement) -> Self {
        let mut poly = MultiPoly::zero(nvars);
        for m in monomials_of_degree(nvars, degree) {
            let t = tensor(&m.indices());
            if !t.is_zero() {
                let count = FieldElement::from_bigint(m.multinomial().into());
                poly.add_term(m, &t * &count);
            }
        }
        Self { degree, poly }
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Symmetric tensor coefficient `r_{a_1..a_d}` for any index order.
    pub fn tensor_coeff(&self, idx: &[usize]) -> FieldElement {
        assert_eq!(idx.len(), self.degree as usize, "index tuple has wrong length");
        let m = Monomial::from_indices(self.nvars(), idx);
        let c = self.poly.coeff(&m);
        if c.is_zero() {
            return c;
        }
        &c / &FieldElement::from_bigint(m.multinomial().into())
    }

    /// `r_ab` as a dense matrix (meaningful for degree 2).
    pub fn symmetric_matrix(&self) -> Vec<Vec<FieldElement>> {
        assert_eq!(self.degree, 2, "symmetric matrix of a non-quadratic form");
        let n = self.nvars();
        (0..n).map(|a| (0..n).map(|b| self.tensor_coeff(&[a, b])).collect()).collect()
    }

    pub fn from_symmetric_matrix(m: &[Vec<FieldElement>]) -> Self {
        let n = m.len();
        Self::from_tensor(n, 2, |idx| m[idx[0]][idx[1]].clone())
    }

    fn check_vector(&self, v: &[FieldElement]) -> Result<()> {
        if v.len() != self.nvars() {
            return Err(Error::Shape(format!(
                "vector of length {} against a form in {} variables",
                v.len(),
                self.nvars()
            )));
        }
        Ok(())
    }

    /// `sum_a v^a dP/dy^a`.
    pub fn directional_derivative(&self, v: &[FieldElement]) -> Result<MultiPoly> {
        self.check_vector(v)?;
        let mut out = MultiPoly::zero(self.nvars());
        for (a, va) in v.iter().enumerate() {
            if !va.is_zero() {
                out = &out + &self.poly.derivative(a).scale(va);
            }
        }
        Ok(out)
    }

    /// Interior product `v -| P`, lowering the degree by one.
    pub fn interior_product(&self, v: &[FieldElement]) -> Result<SymForm> {
        if self.degree == 0 {
            return Err(Error::Shape("interior product of a degree-0 form".into()));
        }
        let d = self.directional_derivative(v)?;
        let inv = FieldElement::from_ratio(1, self.degree as i64);
        Ok(SymForm { degree: self.degree - 1, poly: d.scale(&inv) })
    }

    /// Interior product with the `a`-th basis vector.
    pub fn contract_basis(&self, a: usize) -> SymForm {
        assert!(self.degree > 0 && a < self.nvars());
        let inv = FieldElement::from_ratio(1, self.degree as i64);
        SymForm { degree: self.degree - 1, poly: self.poly.derivative(a).scale(&inv) }
    }

    /// Infinitesimal `gl(T)` action, `X.P = -sum_{a,b} X[a][b] y^b dP/dy^a`.
    pub fn gl_action(&self, x: &[Vec<FieldElement>]) -> Result<SymForm> {
        let n = self.nvars();
        if x.len() != n || x.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("gl action needs a {n}x{n} matrix")));
        }
        let mut out = MultiPoly::zero(n);
        for a in 0..n {
            let da = self.poly.derivative(a);
            if da.is_zero() {
                continue;
            }
            for b in 0..n {
                if !x[a][b].is_zero() {
                    out = &out - &da.mul_monomial(&Monomial::var(n, b), &x[a][b]);
                }
            }
        }
        Ok(SymForm { degree: self.degree, poly: out })
    }

    /// `E_ab . P = -y^b dP/dy^a` for the elementary matrix with 1 at (a, b).
    pub fn gl_elementary(&self, a: usize, b: usize) -> SymForm {
        let n = self.nvars();
        let da = self.poly.derivative(a);
        SymForm { degree: self.degree, poly: -&da.mul_monomial(&Monomial::var(n, b), &FieldElement::one()) }
    }

    pub fn evaluate(&self, v: &[FieldElement]) -> Result<FieldElement> {
        self.check_vector(v)?;
        Ok(self.poly.eval(v))
    }

    /// `P(A y)`: substitutes `y^i -> sum_j A[i][j] y^j`.
    pub fn substitute_linear(&self, a: &[Vec<FieldElement>]) -> Result<SymForm> {
        let n = self.nvars();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("substitution needs a {n}x{n} matrix")));
        }
        let subs: Vec<MultiPoly> = a.iter().map(|row| MultiPoly::linear(row)).collect();
        Ok(SymForm { degree: self.degree, poly: self.poly.substitute(&subs) })
    }

    pub fn add(&self, other: &SymForm) -> SymForm {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        SymForm { degree: self.degree, poly: &self.poly + &other.poly }
    }

    pub fn scale(&self, c: &FieldElement) -> SymForm {
        SymForm { degree: self.degree, poly: self.poly.scale(c) }
    }

    pub fn neg(&self) -> SymForm {
        SymForm { degree: self.degree, poly: -&self.poly }
    }

    pub fn mul(&self, other: &SymForm) -> SymForm {
        SymForm { degree: self.degree + other.degree, poly: &self.poly * &other.poly }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> SymForm {
        SymForm { degree: self.degree + m.degree(), poly: self.poly.mul_monomial(m, &FieldElement::one()) }
    }

    /// Coefficients in the given monomial basis of matching degree.
    pub fn coefficients(&self, basis: &MonomialBasis) -> Vec<FieldElement> {
        assert_eq!(basis.degree(), self.degree, "basis degree mismatch");
        let mut out = vec![FieldElement::zero(); basis.len()];
        for (m, c) in self.poly.terms() {
            let pos = basis.position(m).expect("monomial outside basis");
            out[pos] = c.clone();
        }
        out
    }

    pub fn from_coefficients(basis: &MonomialBasis, coeffs: &[FieldElement]) -> SymForm {
        let poly = MultiPoly::from_terms(
            basis.nvars(),
            basis.monomials().iter().cloned().zip(coeffs.iter().cloned()),
        );
        SymForm { degree: basis.degree(), poly }
    }

    /// Renders with `y1, y2, ...` as variable names.
    pub fn to_y_string(&self) -> String {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("y{i}")).collect();
        self.poly.format_with(&names)
    }
}

impl fmt::Debug for SymForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymForm[{}]({})", self.degree, self.to_y_string())
    }
}

impl fmt::Display for SymForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_y_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: i64) -> FieldElement {
        FieldElement::from_int(v)
    }

    fn mono(e: &[u16], c: FieldElement) -> MultiPoly {
        MultiPoly::monomial(Monomial::new(e.to_vec()), c)
    }

    #[test]
    fn interior_product_examples() {
        let p = SymForm::new(mono(&[3, 0], fe(1)), 3).unwrap();
        let e1 = [fe(1), fe(0)];
        assert_eq!(p.interior_product(&e1).unwrap().poly(), &mono(&[2, 0], fe(1)));

        let q = SymForm::new(mono(&[2, 1], fe(1)), 3).unwrap();
        assert_eq!(q.interior_product(&e1).unwrap().poly(), &mono(&[1, 1], FieldElement::from_ratio(2, 3)));
    }

    #[test]
    fn interior_product_shape_error() {
        let p = SymForm::new(mono(&[3, 0], fe(1)), 3).unwrap();
        assert!(matches!(p.interior_product(&[fe(1)]), Err(Error::Shape(_))));
        assert!(SymForm::zero(2, 0).interior_product(&[fe(1), fe(0)]).is_err());
    }

    #[test]
    fn gl_action_examples() {
        let p = SymForm::new(mono(&[2, 0], fe(1)), 2).unwrap();
        let id = vec![vec![fe(1), fe(0)], vec![fe(0), fe(1)]];
        assert_eq!(p.gl_action(&id).unwrap().poly(), &mono(&[2, 0], fe(-2)));
        let e12 = vec![vec![fe(0), fe(1)], vec![fe(0), fe(0)]];
        assert_eq!(p.gl_action(&e12).unwrap().poly(), &mono(&[1, 1], fe(-2)));
        assert_eq!(p.gl_elementary(0, 1), p.gl_action(&e12).unwrap());
        assert!(p.gl_action(&[vec![fe(1)]]).is_err());
    }

    #[test]
    fn tensor_roundtrip() {
        // P = y1^2 y2 -> r_112 = 1/3
        let p = SymForm::new(mono(&[2, 1], fe(1)), 3).unwrap();
        assert_eq!(p.tensor_coeff(&[1, 0, 0]), FieldElement::from_ratio(1, 3));
        let q = SymForm::from_tensor(2, 3, |idx| p.tensor_coeff(idx));
        assert_eq!(p, q);
    }

    #[test]
    fn coefficient_vectors() {
        let basis = MonomialBasis::new(2, 2);
        let p = SymForm::new(&mono(&[2, 0], fe(3)) + &mono(&[0, 2], fe(-1)), 2).unwrap();
        let c = p.coefficients(&basis);
        assert_eq!(c, vec![fe(3), fe(0), fe(-1)]);
        assert_eq!(SymForm::from_coefficients(&basis, &c), p);
    }
}
