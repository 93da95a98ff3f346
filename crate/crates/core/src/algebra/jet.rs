//! Truncated multivariate power series.

use super::field::FieldElement;
use super::poly::MultiPoly;

/// A power series in variables centered at `center`, known exactly through
/// total degree `order`. Every operation discards terms above `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    center: Vec<FieldElement>,
    order: u32,
    poly: MultiPoly,
}

impl Jet {
    pub fn new(center: Vec<FieldElement>, order: u32, poly: MultiPoly) -> Self {
        assert_eq!(center.len(), poly.nvars(), "jet center has wrong dimension");
        let poly = poly.truncate(order);
        Self { center, order, poly }
    }

    /// Jet at the origin.
    pub fn at_origin(order: u32, poly: MultiPoly) -> Self {
        let n = poly.nvars();
        Self::new(vec![FieldElement::zero(); n], order, poly)
    }

    pub fn zero_like(&self) -> Self {
        Self { center: self.center.clone(), order: self.order, poly: MultiPoly::zero(self.nvars()) }
    }

    pub fn constant_like(&self, c: FieldElement) -> Self {
        Self { center: self.center.clone(), order: self.order, poly: MultiPoly::constant(self.nvars(), c) }
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn center(&self) -> &[FieldElement] {
        &self.center
    }

    /// Polynomial part in the centered variables.
    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn into_poly(self) -> MultiPoly {
        self.poly
    }

    pub fn constant_term(&self) -> FieldElement {
        self.poly.coeff(&super::poly::Monomial::one(self.nvars()))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.order, other.order, "jet order mismatch");
        assert_eq!(self.center, other.center, "jet center mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Self { center: self.center.clone(), order: self.order, poly: &self.poly + &other.poly }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Self { center: self.center.clone(), order: self.order, poly: &self.poly - &other.poly }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            center: self.center.clone(),
            order: self.order,
            poly: self.poly.mul_truncated(&other.poly, Some(self.order)),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self { center: self.center.clone(), order: self.order, poly: self.poly.scale(c) }
    }

    /// Partial derivative; the result is known one order lower.
    pub fn derivative(&self, var: usize) -> Self {
        let order = self.order.saturating_sub(1);
        Self { center: self.center.clone(), order, poly: self.poly.derivative(var).truncate(order) }
    }

    /// Multiplicative inverse of a jet with invertible constant term, by
    /// Newton iteration `h <- h (2 - u h)`.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.constant_term().inv()?;
        let mut h = self.constant_like(c0);
        let two = self.constant_like(FieldElement::from_int(2));
        let mut prec = 1u32;
        loop {
            h = h.mul(&two.sub(&self.mul(&h)));
            if prec > self.order {
                break;
            }
            prec *= 2;
        }
        Some(h)
    }

    /// Composes `outer` with the jets in `inner` (one per variable of
    /// `outer`), truncating at this order. All inner jets must share center
    /// and order.
    pub fn compose(outer: &MultiPoly, inner: &[Jet]) -> Jet {
        let first = inner.first().expect("composition needs at least one inner jet");
        for j in inner {
            first.check(j);
        }
        let subs: Vec<MultiPoly> = inner.iter().map(|j| j.poly.clone()).collect();
        let poly = outer.substitute_truncated(&subs, Some(first.order));
        Jet { center: first.center.clone(), order: first.order, poly }
    }

    /// The coordinate function `x_i - center_i` as a jet.
    pub fn variable(center: &[FieldElement], order: u32, i: usize) -> Jet {
        Jet::new(center.to_vec(), order, MultiPoly::var(center.len(), i))
    }

    /// Re-expands a polynomial around `center`: the jet of `p(center + u)`.
    pub fn expand(p: &MultiPoly, center: &[FieldElement], order: u32) -> Jet {
        let n = center.len();
        let shifted: Vec<Jet> = (0..n)
            .map(|i| {
                let mut poly = MultiPoly::var(n, i);
                poly.add_term(super::poly::Monomial::one(n), center[i].clone());
                Jet::new(center.to_vec(), order, poly)
            })
            .collect();
        Jet::compose(p, &shifted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::Monomial;

    fn fe(v: i64) -> FieldElement {
        FieldElement::from_int(v)
    }

    #[test]
    fn geometric_series_inverse() {
        // 1 / (1 - x - y) = sum (x + y)^k
        let mut p = MultiPoly::constant(2, fe(1));
        p.add_term(Monomial::var(2, 0), fe(-1));
        p.add_term(Monomial::var(2, 1), fe(-1));
        let j = Jet::at_origin(5, p);
        let inv = j.inverse().unwrap();
        assert!(j.mul(&inv).poly().eq(&MultiPoly::constant(2, fe(1))));
        assert_eq!(inv.poly().coeff(&Monomial::new(vec![2, 3])), fe(10));
    }

    #[test]
    fn expansion_around_point() {
        // p = x^2 y at (1, 2): coefficient of u_x u_y is 2*x = 2
        let p = MultiPoly::monomial(Monomial::new(vec![2, 1]), fe(1));
        let j = Jet::expand(&p, &[fe(1), fe(2)], 3);
        assert_eq!(j.constant_term(), fe(2));
        assert_eq!(j.poly().coeff(&Monomial::new(vec![1, 1])), fe(2));
        assert_eq!(j.poly().coeff(&Monomial::new(vec![2, 1])), fe(1));
        assert_eq!(j.derivative(0).order(), 2);
    }
}
