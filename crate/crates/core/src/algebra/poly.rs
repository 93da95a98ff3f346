//! Sparse multivariate polynomials over a [`FieldElement`] base.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::FieldElement;

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then larger exponents on earlier variables rank higher.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        Self(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self(e)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    /// `prod_i exps_i!`, the denominator of the multinomial count.
    pub fn factorial_product(&self) -> u128 {
        self.0.iter().map(|&e| factorial(e as u32)).product()
    }

    /// Number of ordered index tuples that collapse to this monomial.
    pub fn multinomial(&self) -> u128 {
        factorial(self.degree()) / self.factorial_product()
    }

    /// Expands the monomial into the sorted index tuple `(a_1 <= ... <= a_k)`.
    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect()
    }

    pub fn from_indices(nvars: usize, idx: &[usize]) -> Self {
        let mut e = vec![0u16; nvars];
        for &i in idx {
            e[i] += 1;
        }
        Self(e)
    }
}

pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All monomials of total degree `deg` in `nvars` variables, in descending
/// graded-lex order.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur.push(left as u16);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u16);
            rec(nvars, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(nvars, 0, deg, &mut Vec::with_capacity(nvars), &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim S^deg` of an `nvars`-dimensional space.
pub fn sym_dim(nvars: usize, deg: u32) -> usize {
    if nvars == 0 {
        return usize::from(deg == 0);
    }
    binomial(nvars as u64 + deg as u64 - 1, deg as u64) as usize
}

/// Sparse polynomial: no stored zero coefficients, all exponent vectors of
/// length `nvars`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), FieldElement::one())
    }

    pub fn monomial(m: Monomial, c: FieldElement) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, FieldElement)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(coeffs: &[FieldElement]) -> Self {
        let n = coeffs.len();
        Self::from_terms(n, coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// The common degree of all terms, if the polynomial is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let lo = self.min_degree()?;
        (self.degree() == Some(lo)).then_some(lo)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn homogeneous_part(&self, deg: u32) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|(m, _)| m.degree() == deg).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Drops all terms of total degree above `max_deg`.
    pub fn truncate(&self, max_deg: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect() }
    }

    /// Product with every term of total degree above `max_deg` discarded.
    pub fn mul_truncated(&self, other: &Self, max_deg: Option<u32>) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars);
        let cap = max_deg.unwrap_or(u32::MAX);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > cap {
                break;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > cap {
                    break;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        self.pow_truncated(exp, None)
    }

    pub fn pow_truncated(&self, exp: u32, max_deg: Option<u32>) -> Self {
        let mut result = Self::constant(self.nvars, FieldElement::one());
        for _ in 0..exp {
            result = result.mul_truncated(self, max_deg);
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * &FieldElement::from_int(e as i64));
        }
        out
    }

    /// Iterated partial derivative `d^{m} / dx^{m}`.
    pub fn derivative_multi(&self, m: &Monomial) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, c) in &self.terms {
            let Some(rest) = k.div(m) else { continue };
            let falling: i64 = k
                .0
                .iter()
                .zip(&m.0)
                .map(|(&e, &d)| ((e - d + 1)..=e).map(|x| x as i64).product::<i64>())
                .product();
            out.add_term(rest, c * &FieldElement::from_int(falling));
        }
        out
    }

    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong length");
        let mut powers: Vec<Vec<FieldElement>> = point.iter().map(|x| vec![FieldElement::one(), x.clone()]).collect();
        let mut acc = FieldElement::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &point[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            acc += &term;
        }
        acc
    }

    /// Substitutes `subs[i]` for variable `i`. All substitutes must share a
    /// variable count, which becomes the result's.
    pub fn substitute(&self, subs: &[MultiPoly]) -> Self {
        self.substitute_truncated(subs, None)
    }

    pub fn substitute_truncated(&self, subs: &[MultiPoly], max_deg: Option<u32>) -> Self {
        assert_eq!(subs.len(), self.nvars, "substitution arity mismatch");
        let target = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<MultiPoly>> =
            subs.iter().map(|s| vec![MultiPoly::constant(target, FieldElement::one()), s.clone()]).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i][powers[i].len() - 1].mul_truncated(&subs[i], max_deg);
                    powers[i].push(next);
                }
                term = term.mul_truncated(&powers[i][e as usize], max_deg);
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Fixes variable `var` to the value `c`, keeping the variable count.
    pub fn specialize(&self, var: usize, c: &FieldElement) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, x) in &self.terms {
            let mut exps = m.0.clone();
            let e = std::mem::replace(&mut exps[var], 0);
            out.add_term(Monomial(exps), x * &c.pow(e as u32));
        }
        out
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; nvars];
            for (i, &e) in m.0.iter().enumerate() {
                exps[map[i]] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Renders the polynomial with the given variable names, highest
    /// graded-lex term first. The output parses back to the same polynomial.
    pub fn format_with(&self, names: &[impl AsRef<str>]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = names[i].as_ref();
                    if e == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let (neg, coeff_text) = coefficient_text(c);
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (coeff_text, mono.is_empty()) {
                (None, true) => out.push('1'),
                (None, false) => out.push_str(&mono.join("*")),
                (Some(t), true) => out.push_str(&t),
                (Some(t), false) => {
                    out.push_str(&t);
                    out.push('*');
                    out.push_str(&mono.join("*"));
                }
            }
        }
        out
    }

    /// Default rendering with names `x0, x1, ...`.
    pub fn to_string_default(&self) -> String {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        self.format_with(&names)
    }
}

/// Sign and magnitude text of a coefficient; `None` text means the
/// magnitude is 1 and can be omitted in front of a monomial.
fn coefficient_text(c: &FieldElement) -> (bool, Option<String>) {
    if let Some(q) = c.as_rational() {
        use num_traits::{One, Signed};
        let neg = q.is_negative();
        let mag = q.abs();
        return (neg, (!mag.is_one()).then(|| mag.to_string()));
    }
    let nonzero: Vec<_> = c.coords().iter().enumerate().filter(|(_, x)| !num_traits::Zero::is_zero(*x)).collect();
    if nonzero.len() == 1 {
        let s = c.to_string();
        if let Some(rest) = s.strip_prefix('-') {
            return (true, Some(rest.to_string()));
        }
        return (false, Some(s));
    }
    (false, Some(format!("({c})")))
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_default())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.mul_truncated(rhs, None)
    }
}
