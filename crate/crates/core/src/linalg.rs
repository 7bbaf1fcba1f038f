//! Exact linear algebra over the rationals.
//!
//! Every subspace is stored by the reduced row echelon form of a basis, so
//! two [`Subspace`] values describe the same set of vectors exactly when
//! they compare equal.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Shorthand for `numer / denom`. Panics on a zero denominator.
pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds a rational vector from integers.
pub fn vector(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                found: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from explicit rows; `cols` is needed for the empty case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Matrix::new(nrows, cols, entries)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| vector(r)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.row_iter().map(<[Rational]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                entries.push(acc);
            }
        }
        Matrix::new(self.rows, other.cols, entries)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self.row_iter().map(|row| dot(row, v)).collect())
    }

    pub fn rank(&self) -> usize {
        rref_with_pivots(self).1.len()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Gauss-Jordan elimination. Returns the reduced row echelon form (same
/// shape, zero rows last) together with its pivot columns.
pub fn rref_with_pivots(m: &Matrix) -> (Matrix, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<Rational>> = m.to_rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &factor * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let entries = a.into_iter().flatten().collect();
    (
        Matrix {
            rows,
            cols,
            entries,
        },
        pivots,
    )
}

/// The unique reduced row echelon form of `m`.
pub fn rref(m: &Matrix) -> Matrix {
    rref_with_pivots(m).0
}

/// Null space `{x : m x = 0}` as a subspace of `Q^cols`.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, pivots) = rref_with_pivots(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, free).clone();
        }
        basis.push(v);
    }
    Subspace::canonical(cols, basis)
}

/// A linear subspace of `Q^d` stored by its reduced row echelon basis.
///
/// The derived ordering compares ambient dimension, then rank, then the
/// basis entries lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    fn canonical(ambient_dim: usize, rows: Vec<Vec<Rational>>) -> Subspace {
        let m = Matrix::from_rows(ambient_dim, rows).expect("rows have ambient length");
        let (r, pivots) = rref_with_pivots(&m);
        let rank = pivots.len();
        let entries = r.entries[..rank * ambient_dim].to_vec();
        Subspace {
            ambient_dim,
            basis: Matrix {
                rows: rank,
                cols: ambient_dim,
                entries,
            },
        }
    }

    /// The span of `vectors` inside `Q^ambient_dim`.
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Subspace> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: bad.len(),
            });
        }
        Ok(Subspace::canonical(ambient_dim, vectors))
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Subspace {
        Subspace::canonical(m.cols, m.to_rows())
    }

    pub fn zero(ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    /// RREF basis; rows are the basis vectors.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .row_iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: len,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the RREF basis, or `None` when `v` is outside.
    ///
    /// For an RREF basis the coordinates are simply the entries of `v` at the
    /// pivot columns.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        self.check_len(v.len())?;
        let coords: Vec<Rational> = self.pivots().into_iter().map(|p| v[p].clone()).collect();
        let recombined = self.combine(&coords);
        Ok((recombined.as_slice() == v).then_some(coords))
    }

    /// `sum_i coeffs[i] * basis[i]`.
    pub fn combine(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient_dim];
        for (c, row) in coeffs.iter().zip(self.basis.row_iter()) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o += c * x;
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        other.check_len(self.ambient_dim)?;
        if self.rank() > other.rank() {
            return Ok(false);
        }
        for row in self.basis.row_iter() {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Covectors vanishing on the subspace, one per row (a basis of the
    /// annihilator).
    pub fn annihilator(&self) -> Matrix {
        let k = kernel(&self.basis);
        k.basis
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        other.check_len(self.ambient_dim)?;
        if self.is_subspace_of(other)? {
            return Ok(self.clone());
        }
        if other.is_subspace_of(self)? {
            return Ok(other.clone());
        }
        let mut rows = self.annihilator().to_rows();
        rows.extend(other.annihilator().to_rows());
        let stacked = Matrix::from_rows(self.ambient_dim, rows)?;
        Ok(kernel(&stacked))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        other.check_len(self.ambient_dim)?;
        let mut rows = self.basis.to_rows();
        rows.extend(other.basis.to_rows());
        Ok(Subspace::canonical(self.ambient_dim, rows))
    }

    /// Expresses a subspace of `self` in the coordinates of `self`'s RREF basis.
    pub fn to_frame(&self, inner: &Subspace) -> Result<Subspace> {
        let mut rows = Vec::with_capacity(inner.rank());
        for row in inner.basis.row_iter() {
            match self.coordinates(row)? {
                Some(c) => rows.push(c),
                None => {
                    return Err(Error::DimensionMismatch {
                        expected: self.rank(),
                        found: inner.rank(),
                    })
                }
            }
        }
        Ok(Subspace::canonical(self.rank(), rows))
    }

    /// Inverse of [`Subspace::to_frame`]: maps a subspace of `Q^rank` back
    /// into the ambient space through the RREF basis.
    pub fn from_frame(&self, inner: &Subspace) -> Result<Subspace> {
        if inner.ambient_dim != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: inner.ambient_dim,
            });
        }
        let rows = inner.basis.row_iter().map(|c| self.combine(c)).collect();
        Ok(Subspace::canonical(self.ambient_dim, rows))
    }
}

/// `a ∩ b`.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

pub fn contains_vector(s: &Subspace, v: &[Rational]) -> Result<bool> {
    s.contains(v)
}

/// Plain inclusion `a ⊆ b`.
pub fn subspace_leq(a: &Subspace, b: &Subspace) -> Result<bool> {
    a.is_subspace_of(b)
}

pub fn preimage(t: &LinearMap, s: &Subspace) -> Result<Subspace> {
    t.preimage(s)
}

/// A linear map `Q^source_dim -> Q^target_dim`, stored as a
/// `target_dim x source_dim` matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    source_dim: usize,
    target_dim: usize,
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(source_dim: usize, target_dim: usize, matrix: Matrix) -> Result<Self> {
        if matrix.rows != target_dim {
            return Err(Error::DimensionMismatch {
                expected: target_dim,
                found: matrix.rows,
            });
        }
        if matrix.cols != source_dim {
            return Err(Error::DimensionMismatch {
                expected: source_dim,
                found: matrix.cols,
            });
        }
        Ok(LinearMap {
            source_dim,
            target_dim,
            matrix,
        })
    }

    pub fn from_i64(source_dim: usize, rows: &[&[i64]]) -> Result<Self> {
        let m = Matrix::from_rows(source_dim, rows.iter().map(|r| vector(r)).collect())?;
        LinearMap::new(source_dim, rows.len(), m)
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap {
            source_dim: dim,
            target_dim: dim,
            matrix: Matrix::identity(dim),
        }
    }

    pub fn zero(source_dim: usize, target_dim: usize) -> Self {
        LinearMap {
            source_dim,
            target_dim,
            matrix: Matrix::zeros(target_dim, source_dim),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.matrix.mul_vec(v)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &LinearMap) -> Result<LinearMap> {
        let m = then.matrix.mul(&self.matrix)?;
        LinearMap::new(self.source_dim, then.target_dim, m)
    }

    pub fn kernel(&self) -> Subspace {
        kernel(&self.matrix)
    }

    pub fn image(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient_dim != self.source_dim {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim,
                found: s.ambient_dim,
            });
        }
        let rows = s
            .basis
            .row_iter()
            .map(|row| self.apply(row))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::canonical(self.target_dim, rows))
    }

    /// `{v : T v ∈ s}`.
    pub fn preimage(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient_dim != self.target_dim {
            return Err(Error::DimensionMismatch {
                expected: self.target_dim,
                found: s.ambient_dim,
            });
        }
        let pulled = s.annihilator().mul(&self.matrix)?;
        Ok(kernel(&pulled))
    }
}

/// Divides `v` by its first nonzero entry. Returns the scale that was
/// divided out, or `None` for the zero vector.
pub fn normalize_leading(v: &mut [Rational]) -> Option<Rational> {
    let lead = v.iter().find(|x| !x.is_zero())?.clone();
    let inv = lead.recip();
    for x in v.iter_mut() {
        *x *= &inv;
    }
    Some(lead)
}

/// Height of a rational: the larger of `|numer|` and `denom`.
pub fn height(q: &Rational) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(rows).unwrap()
    }

    fn span(d: usize, vs: &[&[i64]]) -> Subspace {
        Subspace::span(d, vs.iter().map(|v| vector(v)).collect()).unwrap()
    }

    #[test]
    fn rref_examples() {
        assert_eq!(rref(&m(&[&[2, 0], &[0, 3]])), m(&[&[1, 0], &[0, 1]]));
        assert_eq!(rref(&m(&[&[1, 2], &[2, 4]])), m(&[&[1, 2], &[0, 0]]));
        assert_eq!(rref(&m(&[&[0, 1], &[1, 0]])), m(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn rref_with_fractions() {
        let r = rref(&m(&[&[2, 1], &[4, 3]]));
        assert_eq!(r, Matrix::identity(2));
        let r = rref(&m(&[&[3, 1, 2]]));
        assert_eq!(r.row(0), &[int(1), frac(1, 3), frac(2, 3)]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&m(&[&[1, 0]])), span(2, &[&[0, 1]]));
        assert_eq!(kernel(&m(&[&[1, 1], &[1, 1]])), span(2, &[&[1, -1]]));
        assert_eq!(kernel(&Matrix::identity(3)), Subspace::zero(3));
        assert_eq!(kernel(&Matrix::zeros(0, 2)), Subspace::full(2));
    }

    #[test]
    fn intersect_examples() {
        let x = span(2, &[&[1, 0]]);
        let y = span(2, &[&[0, 1]]);
        assert_eq!(intersect(&x, &y).unwrap(), Subspace::zero(2));
        assert_eq!(intersect(&x, &x).unwrap(), x);
        let a = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = span(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(intersect(&a, &b).unwrap(), span(3, &[&[0, 1, 0]]));
    }

    #[test]
    fn intersect_rejects_mismatch() {
        let err = intersect(&Subspace::zero(2), &Subspace::zero(3)).unwrap_err();
        assert_eq!(err.reason(), "dimension-mismatch");
    }

    #[test]
    fn preimage_examples() {
        let proj = LinearMap::from_i64(2, &[&[1, 0]]).unwrap();
        assert_eq!(
            proj.preimage(&Subspace::zero(1)).unwrap(),
            span(2, &[&[0, 1]])
        );
        assert_eq!(
            proj.preimage(&Subspace::full(1)).unwrap(),
            Subspace::full(2)
        );
        let sum = LinearMap::from_i64(2, &[&[1, 1]]).unwrap();
        assert_eq!(
            preimage(&sum, &span(1, &[&[1]])).unwrap(),
            Subspace::full(2)
        );
        assert!(preimage(&sum, &Subspace::zero(2)).is_err());
    }

    #[test]
    fn contains_examples() {
        let diag = span(2, &[&[1, -1]]);
        assert!(contains_vector(&diag, &vector(&[0, 0])).unwrap());
        assert!(!contains_vector(&span(2, &[&[1, 0]]), &vector(&[1, 1])).unwrap());
        assert!(contains_vector(&diag, &vector(&[2, -2])).unwrap());
        assert!(contains_vector(&diag, &vector(&[1])).is_err());
    }

    #[test]
    fn leq_examples() {
        let x = span(2, &[&[1, 0]]);
        assert!(subspace_leq(&Subspace::zero(2), &x).unwrap());
        assert!(subspace_leq(&x, &Subspace::full(2)).unwrap());
        assert!(!subspace_leq(&x, &span(2, &[&[0, 1]])).unwrap());
    }

    #[test]
    fn frame_round_trip() {
        let plane = span(3, &[&[1, 0, 1], &[0, 1, 1]]);
        let line = span(3, &[&[1, 1, 2]]);
        let local = plane.to_frame(&line).unwrap();
        assert_eq!(local, span(2, &[&[1, 1]]));
        assert_eq!(plane.from_frame(&local).unwrap(), line);
        assert!(plane.to_frame(&span(3, &[&[0, 0, 1]])).is_err());
    }

    #[test]
    fn map_composition() {
        let a = LinearMap::from_i64(2, &[&[1, 2], &[0, 1]]).unwrap();
        let b = LinearMap::from_i64(2, &[&[1, 1]]).unwrap();
        let c = a.then(&b).unwrap();
        assert_eq!(c.apply(&vector(&[1, 1])).unwrap(), vector(&[4]));
    }
}
