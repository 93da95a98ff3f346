//! Exact scalars: the rationals and simple extensions `Q[t]/(m(t))`.
//!
//! A [`FieldElement`] carries its coordinates in the power basis
//! `1, t, ..., t^(deg m - 1)` together with an optional handle to the
//! extension it lives in. Rational elements (no handle) mix freely with
//! elements of any extension; mixing two different extensions panics.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest minimal-polynomial degree for which irreducibility is checked.
pub const MAX_EXTENSION_DEGREE: usize = 4;

/// A simple extension `Q[t]/(m(t))` with `m` monic, integral and irreducible.
#[derive(Debug)]
pub struct ExtensionField {
    /// Coefficients of `m`, lowest degree first; the last entry is 1.
    minpoly: Vec<BigInt>,
    /// Root of `m` used for reporting and magnitude comparisons.
    embedding: Complex64,
}

impl ExtensionField {
    /// Builds the extension defined by the monic integer polynomial with
    /// coefficients `minpoly` (lowest degree first).
    pub fn new(minpoly: Vec<BigInt>) -> Result<Self> {
        let mut minpoly = minpoly;
        while minpoly.len() > 1 && minpoly.last().is_some_and(Zero::is_zero) {
            minpoly.pop();
        }
        let degree = minpoly.len().saturating_sub(1);
        if degree == 0 {
            return Err(Error::Field("minimal polynomial must have positive degree".into()));
        }
        if !minpoly[degree].is_one() {
            return Err(Error::Field("minimal polynomial must be monic".into()));
        }
        if degree > MAX_EXTENSION_DEGREE {
            return Err(Error::Field(format!(
                "minimal polynomials of degree {degree} are not supported (maximum {MAX_EXTENSION_DEGREE})"
            )));
        }
        if !is_irreducible(&minpoly) {
            return Err(Error::Field(format!(
                "minimal polynomial {} is reducible over Q",
                format_minpoly(&minpoly)
            )));
        }
        let embedding = choose_embedding(&minpoly);
        Ok(Self { minpoly, embedding })
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn embedding(&self) -> Complex64 {
        self.embedding
    }

    /// `m(t)` rendered with the generator name `t`.
    pub fn minpoly_text(&self) -> String {
        format_minpoly(&self.minpoly)
    }
}

impl PartialEq for ExtensionField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}

/// Descriptor of the base field of a computation.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Field {
    #[default]
    Rational,
    Extension(Arc<ExtensionField>),
}

impl Field {
    pub fn extension(minpoly: Vec<BigInt>) -> Result<Self> {
        Ok(Field::Extension(Arc::new(ExtensionField::new(minpoly)?)))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Field::Rational)
    }

    pub fn degree(&self) -> usize {
        match self {
            Field::Rational => 1,
            Field::Extension(ext) => ext.degree(),
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero()
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one()
    }

    /// The generator `t`; `None` over the rationals.
    pub fn generator(&self) -> Option<FieldElement> {
        match self {
            Field::Rational => None,
            Field::Extension(ext) => {
                let mut coords = vec![BigRational::zero(); ext.degree()];
                if ext.degree() == 1 {
                    // t is the rational root of t - a.
                    coords[0] = BigRational::from_integer(-ext.minpoly[0].clone());
                    return Some(FieldElement::from_coords(coords, Some(ext.clone())));
                }
                coords[1] = BigRational::one();
                Some(FieldElement::from_coords(coords, Some(ext.clone())))
            }
        }
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement::from_int(v)
    }

    /// Embeds an arbitrary element into this field, checking compatibility.
    pub fn contains(&self, e: &FieldElement) -> bool {
        match (&e.ext, self) {
            (None, _) => true,
            (Some(_), Field::Rational) => e.as_rational().is_some(),
            (Some(a), Field::Extension(b)) => a == b || e.as_rational().is_some(),
        }
    }

    /// Human-readable descriptor, e.g. `Q` or `Q[t]/(t^3 - 4)`.
    pub fn describe(&self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Extension(ext) => format!("Q[t]/({})", ext.minpoly_text()),
        }
    }
}

/// An exact element of `Q` or of a simple extension of `Q`.
#[derive(Clone)]
pub struct FieldElement {
    coords: Vec<BigRational>,
    ext: Option<Arc<ExtensionField>>,
}

impl FieldElement {
    pub fn zero() -> Self {
        Self { coords: vec![BigRational::zero()], ext: None }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(v))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self { coords: vec![q], ext: None }
    }

    /// Builds an element from power-basis coordinates, reducing modulo `m`
    /// if more than `deg m` coordinates are supplied.
    pub fn from_coords(coords: Vec<BigRational>, ext: Option<Arc<ExtensionField>>) -> Self {
        match ext {
            None => {
                let mut coords = coords;
                if coords.is_empty() {
                    coords.push(BigRational::zero());
                }
                assert!(
                    coords[1..].iter().all(Zero::is_zero),
                    "rational element with non-constant coordinates"
                );
                coords.truncate(1);
                Self { coords, ext: None }
            }
            Some(ext) => {
                let coords = reduce_mod(coords, &ext.minpoly);
                Self { coords, ext: Some(ext) }
            }
        }
    }

    /// Coordinates in the power basis, without trailing zeros (at least one entry).
    pub fn coords(&self) -> &[BigRational] {
        let mut len = self.coords.len();
        while len > 1 && self.coords[len - 1].is_zero() {
            len -= 1;
        }
        &self.coords[..len]
    }

    pub fn extension(&self) -> Option<&Arc<ExtensionField>> {
        self.ext.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        let c = self.coords();
        c.len() == 1 && c[0].is_one()
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        let c = self.coords();
        (c.len() == 1).then(|| &c[0])
    }

    /// Multiplies by the least common denominator of all coordinates, so
    /// the coordinates become integers. Returns the multiplier.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Value under the designated complex embedding.
    pub fn to_complex(&self) -> Complex64 {
        let root = self.ext.as_ref().map(|e| e.embedding).unwrap_or(Complex64::new(0.0, 0.0));
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coords.iter().rev() {
            acc = acc * root + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        acc
    }

    /// Magnitude under the designated embedding; exact for rationals via
    /// [`FieldElement::cmp_magnitude`].
    pub fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Compares `|self|` with `|other|`; exact when both are rational.
    pub fn cmp_magnitude(&self, other: &Self) -> std::cmp::Ordering {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a.abs().cmp(&b.abs()),
            _ => {
                let (a, b) = (self.magnitude(), other.magnitude());
                let scale = a.abs().max(b.abs()).max(1.0);
                if (a - b).abs() <= 1e-12 * scale {
                    std::cmp::Ordering::Equal
                } else {
                    a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
                }
            }
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self { coords: vec![q.recip()], ext: self.ext.clone() });
        }
        let ext = self.ext.as_ref().expect("non-rational element without extension");
        let m: Vec<BigRational> =
            ext.minpoly.iter().cloned().map(BigRational::from_integer).collect();
        let inv = poly_inverse_mod(self.coords(), &m)?;
        Some(Self::from_coords(inv, Some(ext.clone())))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn common_ext(&self, other: &Self) -> Option<Arc<ExtensionField>> {
        match (&self.ext, &other.ext) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                assert!(
                    Arc::ptr_eq(a, b) || a == b,
                    "arithmetic between elements of different extension fields"
                );
                Some(a.clone())
            }
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords() == other.coords()
    }
}

impl Eq for FieldElement {}

impl Default for FieldElement {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for FieldElement {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<BigRational> for FieldElement {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        if self.ext.is_none() && rhs.ext.is_none() {
            return FieldElement::from_rational(&self.coords[0] + &rhs.coords[0]);
        }
        let ext = self.common_ext(rhs);
        let len = self.coords.len().max(rhs.coords.len());
        let coords = (0..len)
            .map(|i| match (self.coords.get(i), rhs.coords.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        FieldElement::from_coords(coords, ext)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { coords: self.coords.iter().map(|c| -c).collect(), ext: self.ext.clone() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        if let Some(q) = rhs.as_rational() {
            if self.ext.is_none() {
                return FieldElement::from_rational(&self.coords[0] * q);
            }
            return FieldElement {
                coords: self.coords.iter().map(|c| c * q).collect(),
                ext: self.ext.clone(),
            };
        }
        if let Some(q) = self.as_rational() {
            return FieldElement {
                coords: rhs.coords.iter().map(|c| c * q).collect(),
                ext: rhs.ext.clone(),
            };
        }
        let ext = self.common_ext(rhs);
        let a = self.coords();
        let b = rhs.coords();
        let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        FieldElement::from_coords(prod, ext)
    }
}

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &'a FieldElement) -> FieldElement {
        let inv = rhs.inv().expect("division by zero field element");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement { (&self).$m(rhs) }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        if self.ext.is_none() && rhs.ext.is_none() {
            self.coords[0] += &rhs.coords[0];
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        if self.ext.is_none() && rhs.ext.is_none() {
            self.coords[0] -= &rhs.coords[0];
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders `c0 + c1*t + ...` using only tokens the polynomial parser accepts.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords = self.coords();
        if coords.len() == 1 {
            return write!(f, "{}", coords[0]);
        }
        let mut first = true;
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn reduce_mod(mut coords: Vec<BigRational>, minpoly: &[BigInt]) -> Vec<BigRational> {
    let deg = minpoly.len() - 1;
    for k in (deg..coords.len()).rev() {
        let c = std::mem::replace(&mut coords[k], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for (i, m) in minpoly[..deg].iter().enumerate() {
            if !m.is_zero() {
                coords[k - deg + i] -= &c * BigRational::from_integer(m.clone());
            }
        }
    }
    coords.resize(deg, BigRational::zero());
    coords
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Long division over `Q`: returns `(q, r)` with `a = q*b + r`.
fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = poly_degree(b).expect("polynomial division by zero");
    let mut r = a.to_vec();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db).max(1)];
    while let Some(dr) = poly_degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &b[db];
        for (i, bi) in b[..=db].iter().enumerate() {
            r[dr - db + i] -= &c * bi;
        }
        q[dr - db] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..len)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero)
                - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    trim(&mut out);
    out
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while poly_degree(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is the gcd; it must be a nonzero constant.
    if poly_degree(&r0) != Some(0) {
        return None;
    }
    let c = r0[0].clone();
    Some(s0.into_iter().map(|x| x / &c).collect())
}

fn format_minpoly(m: &[BigInt]) -> String {
    let coords: Vec<BigRational> = m.iter().cloned().map(BigRational::from_integer).collect();
    let mut parts = Vec::new();
    for (i, c) in coords.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        let body = match i {
            0 => format!("{mag}"),
            1 if mag.is_one() => "t".to_string(),
            1 => format!("{mag}*t"),
            _ if mag.is_one() => format!("t^{i}"),
            _ => format!("{mag}*t^{i}"),
        };
        if parts.is_empty() {
            parts.push(if neg { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{} {body}", if neg { '-' } else { '+' }));
        }
    }
    parts.join(" ")
}

fn eval_int_poly(m: &[BigInt], x: &BigRational) -> BigRational {
    m.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let limit = n.to_u64().expect("constant term too large for irreducibility check");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= limit {
        if limit.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d * d != limit {
                out.push(BigInt::from(limit / d));
            }
        }
        d += 1;
    }
    out
}

fn has_rational_root(m: &[BigInt]) -> bool {
    if m[0].is_zero() {
        return true;
    }
    // monic: rational roots are integer divisors of the constant term
    divisors(&m[0]).into_iter().any(|d| {
        [d.clone(), -d].iter().any(|r| eval_int_poly(m, &BigRational::from_integer(r.clone())).is_zero())
    })
}

/// Irreducibility over `Q` for monic integer polynomials of degree <= 4.
fn is_irreducible(m: &[BigInt]) -> bool {
    let deg = m.len() - 1;
    match deg {
        1 => true,
        2 | 3 => !has_rational_root(m),
        4 => !has_rational_root(m) && !splits_into_quadratics(m),
        _ => false,
    }
}

/// Whether a monic quartic factors as `(t^2 + a t + b)(t^2 + c t + e)` over `Z`.
fn splits_into_quadratics(m: &[BigInt]) -> bool {
    let (m0, m1, m2, m3) = (&m[0], &m[1], &m[2], &m[3]);
    for b in divisors(m0).into_iter().flat_map(|d| [d.clone(), -d]) {
        let e = m0 / &b;
        // a + c = m3, a*c = m2 - b - e
        let prod = m2 - &b - &e;
        let disc = m3 * m3 - BigInt::from(4) * &prod;
        if disc.is_negative() {
            continue;
        }
        let root = disc.sqrt();
        if &root * &root != disc {
            continue;
        }
        for sign in [1i32, -1] {
            let twice_a = m3 + &root * BigInt::from(sign);
            if twice_a.is_odd() {
                continue;
            }
            let a = &twice_a / BigInt::from(2);
            let c = m3 - &a;
            if &a * &e + &b * &c == *m1 {
                return true;
            }
        }
    }
    false
}

/// Roots of `m` by Durand-Kerner; picks the largest real root, or the root
/// with the largest imaginary part when none is real.
fn choose_embedding(m: &[BigInt]) -> Complex64 {
    let coeffs: Vec<f64> = m.iter().map(|c| c.to_f64().unwrap_or(0.0)).collect();
    let deg = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|i| seed.powu(i as u32)).collect();
    for _ in 0..500 {
        let prev = roots.clone();
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for (j, r) in prev.iter().enumerate() {
                if i != j {
                    den *= roots[i] - r;
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
        }
        if roots.iter().zip(&prev).all(|(a, b)| (a - b).norm() < 1e-15) {
            break;
        }
    }
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let real: Vec<f64> =
        roots.iter().filter(|r| r.im.abs() <= 1e-9 * scale).map(|r| r.re).collect();
    if let Some(best) = real.into_iter().reduce(f64::max) {
        return Complex64::new(best, 0.0);
    }
    roots
        .into_iter()
        .reduce(|a, b| if b.im > a.im || (b.im == a.im && b.re > a.re) { b } else { a })
        .expect("positive degree")
}
