//! Exact rank, inversion and subspaces of graded coefficient spaces.
//!
//! Rank is computed by fraction-free (Bareiss) elimination over the integers.
//! Rational rows are scaled to integer rows. A matrix over `K = Q[t]/(m)` is
//! first written as a matrix over `Q`: each row `r` becomes the coordinate
//! rows of `r, t r, .., t^{e-1} r`, whose `Q`-span is the `K`-span of the
//! rows, so the `Q`-rank is `e` times the `K`-rank.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::FieldElement;
use crate::error::{Error, Result};

/// Ring operations needed by the Bareiss recurrence.
trait BareissEntry: Clone {
    fn is_zero(&self) -> bool;
    fn one() -> Self;
    /// `(a * p - b * q) / prev`, the division being exact.
    fn step(a: &Self, p: &Self, b: &Self, q: &Self, prev: &Self) -> Self;
}

impl BareissEntry for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one() -> Self {
        One::one()
    }
    fn step(a: &Self, p: &Self, b: &Self, q: &Self, prev: &Self) -> Self {
        let num = a * p - b * q;
        if prev.is_one() {
            num
        } else {
            num / prev
        }
    }
}

#[cfg(test)]
impl BareissEntry for FieldElement {
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn one() -> Self {
        FieldElement::one()
    }
    fn step(a: &Self, p: &Self, b: &Self, q: &Self, prev: &Self) -> Self {
        let num = &(a * p) - &(b * q);
        if prev.is_one() {
            num
        } else {
            &num / prev
        }
    }
}

fn bareiss_rank<T: BareissEntry>(mut m: Vec<Vec<T>>) -> usize {
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (head, tail) = m.split_at_mut(rank + 1);
        let prow = &head[rank];
        let p = prow[col].clone();
        for row in tail.iter_mut() {
            let q = row[col].clone();
            for j in col + 1..cols {
                if q.is_zero() && row[j].is_zero() {
                    continue;
                }
                row[j] = T::step(&row[j], &p, &prow[j], &q, &prev);
            }
        }
        prev = p;
        rank += 1;
    }
    rank
}

fn check_lengths(rows: &[Vec<FieldElement>]) -> Result<usize> {
    let width = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().position(|r| r.len() != width) {
        return Err(Error::Shape(format!(
            "row {bad} has length {} but row 0 has length {width}",
            rows[bad].len()
        )));
    }
    Ok(width)
}

fn integer_rank(rows: &[Vec<BigRational>]) -> usize {
    let int_rows = rows
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(<BigInt as One>::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect();
    bareiss_rank::<BigInt>(int_rows)
}

/// Exact rank of the span of `rows`.
pub fn rank(rows: &[Vec<FieldElement>]) -> Result<usize> {
    check_lengths(rows)?;
    let ext = rows.iter().flatten().find_map(|x| x.extension().cloned());
    let Some(ext) = ext else {
        let q: Vec<Vec<BigRational>> =
            rows.iter().map(|r| r.iter().map(|x| x.as_rational().unwrap().clone()).collect()).collect();
        return Ok(integer_rank(&q));
    };
    let e = ext.degree();
    let powers: Vec<FieldElement> = (0..e)
        .map(|k| {
            let mut c = vec![BigRational::zero(); k + 1];
            c[k] = BigRational::one();
            FieldElement::from_coords(c, Some(ext.clone()))
        })
        .collect();
    let mut expanded = Vec::with_capacity(rows.len() * e);
    for row in rows {
        if row.iter().all(FieldElement::is_zero) {
            continue;
        }
        for tk in &powers {
            let mut out = Vec::with_capacity(row.len() * e);
            for x in row {
                let y = x * tk;
                let c = y.coords();
                out.extend((0..e).map(|i| c.get(i).cloned().unwrap_or_else(BigRational::zero)));
            }
            expanded.push(out);
        }
    }
    let r = integer_rank(&expanded);
    debug_assert_eq!(r % e, 0);
    Ok(r / e)
}

/// Rank by Bareiss elimination directly over the field, kept as an
/// independent check of [`rank`].
#[cfg(test)]
pub(crate) fn field_rank(rows: &[Vec<FieldElement>]) -> usize {
    let scaled = rows
        .iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(<BigInt as One>::one(), |acc, x| num_integer::Integer::lcm(&acc, &x.denominator_lcm()));
            let s = FieldElement::from_bigint(lcm);
            row.iter().map(|x| x * &s).collect()
        })
        .collect();
    bareiss_rank::<FieldElement>(scaled)
}

/// Inverse of a square matrix by Gauss-Jordan elimination; `None` if singular.
pub fn inverse(m: &[Vec<FieldElement>]) -> Option<Vec<Vec<FieldElement>>> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "inverse of a non-square matrix");
    let mut a: Vec<Vec<FieldElement>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { FieldElement::one() } else { FieldElement::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].inv()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn identity(n: usize) -> Vec<Vec<FieldElement>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { FieldElement::one() } else { FieldElement::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), k, "matrix product shape mismatch");
            (0..m)
                .map(|j| {
                    let mut acc = FieldElement::zero();
                    for (t, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[t][j].is_zero() {
                            acc += &(x * &b[t][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<FieldElement>], v: &[FieldElement]) -> Vec<FieldElement> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(FieldElement::zero(), |mut acc, (x, y)| {
                if !x.is_zero() && !y.is_zero() {
                    acc += &(x * y);
                }
                acc
            })
        })
        .collect()
}

/// Exact linear subspace of a graded coefficient space
/// `(+)_i S^{deg_i}`, given by spanning vectors in block-concatenated form.
#[derive(Clone, Debug)]
pub struct Subspace {
    blocks: Vec<(u32, usize)>,
    vectors: Vec<Vec<FieldElement>>,
    rank: usize,
}

impl Subspace {
    /// `blocks` lists `(degree, block dimension)` in storage order.
    pub fn new(blocks: Vec<(u32, usize)>, vectors: Vec<Vec<FieldElement>>) -> Result<Self> {
        let width: usize = blocks.iter().map(|b| b.1).sum();
        if let Some(bad) = vectors.iter().position(|v| v.len() != width) {
            return Err(Error::Shape(format!(
                "spanning vector {bad} has length {} in an ambient space of dimension {width}",
                vectors[bad].len()
            )));
        }
        let rank = rank(&vectors)?;
        Ok(Self { blocks, vectors, rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn blocks(&self) -> &[(u32, usize)] {
        &self.blocks
    }

    pub fn vectors(&self) -> &[Vec<FieldElement>] {
        &self.vectors
    }

    fn check_layout(&self, other: &Subspace) -> Result<()> {
        if self.blocks != other.blocks {
            return Err(Error::Shape("subspaces live in different graded spaces".into()));
        }
        Ok(())
    }

    /// Span of both generating sets.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_layout(other)?;
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        Subspace::new(self.blocks.clone(), vectors)
    }

    pub fn contains(&self, v: &[FieldElement]) -> Result<bool> {
        let mut vectors = self.vectors.clone();
        vectors.push(v.to_vec());
        Ok(rank(&vectors)? == self.rank)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.rank == self.rank)
    }

    /// `dim(A & B) = rank A + rank B - rank(A + B)`.
    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        let union = self.sum(other)?;
        Ok(self.rank + other.rank - union.rank)
    }

    pub fn same_span(&self, other: &Subspace) -> Result<bool> {
        let union = self.sum(other)?;
        Ok(union.rank == self.rank && union.rank == other.rank)
    }
}
