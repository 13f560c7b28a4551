//! Dense matrices over exact fields: elimination, kernels, inverses, powers
//! and coordinates relative to a subspace basis.
//!
//! Basis conventions are fixed so that downstream constructions can compare
//! matrices literally:
//! - kernel vectors come from free columns of the reduced row-echelon form,
//!   in increasing column order, with the free coordinate set to 1;
//! - image bases are the pivot columns of the original matrix;
//! - the canonical basis of a span is the list of nonzero rows of the
//!   reduced row-echelon form of the spanning vectors.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("vectors are linearly dependent")]
    DependentBasis,
}

/// Dense row-major matrix over a single field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of row reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Matrix {
    pub fn new(
        field: Field,
        rows: usize,
        cols: usize,
        data: Vec<Scalar>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch(
                "entry count differs from rows*cols",
            ));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(LinalgError::FieldMismatch {
                left: field,
                right: bad.field(),
            });
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::scalar(field, n, &field.one())
    }

    /// `s` times the identity.
    pub fn scalar(field: Field, n: usize, s: &Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    pub fn diagonal(field: Field, entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// Build from integer rows; all rows must have equal length.
    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| field.from_i64(v)))
            .collect();
        Self {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_rows(
        field: Field,
        cols: usize,
        rows: Vec<Vec<Scalar>>,
    ) -> Result<Self, LinalgError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::ShapeMismatch("ragged rows"));
        }
        let n = rows.len();
        Self::new(field, n, cols, rows.into_iter().flatten().collect())
    }

    /// Build a `rows x columns.len()` matrix from column vectors.
    pub fn from_columns(
        field: Field,
        rows: usize,
        columns: &[Vec<Scalar>],
    ) -> Result<Self, LinalgError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::ShapeMismatch(
                "column length differs from row count",
            ));
        }
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in columns {
                data.push(c[r].clone());
            }
        }
        Self::new(field, rows, cols, data)
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "field mismatch in set");
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| {
            self.get(c, r).clone()
        })
    }

    fn check_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            Err(LinalgError::FieldMismatch {
                left: self.field,
                right: other.field,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch(
                "inner dimensions differ in product",
            ));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        other: &Matrix,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinalgError::ShapeMismatch("operands have different shapes"));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(
            v.len(),
            self.cols,
            "vector length differs from column count"
        );
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Row-major flattening.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch("row counts differ in hstack"));
        }
        Ok(Matrix::from_fn(
            self.field,
            self.rows,
            self.cols + other.cols,
            |r, c| {
                if c < self.cols {
                    self.get(r, c).clone()
                } else {
                    other.get(r, c - self.cols).clone()
                }
            },
        ))
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch("column counts differ in vstack"));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block-diagonal sum `self (+) other`.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_field(other)?;
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Ok(Matrix::from_fn(self.field, r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                self.field.zero()
            }
        }))
    }

    /// The block of rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        Matrix::from_fn(self.field, r1 - r0, c1 - c0, |r, c| {
            self.get(r0 + r, c0 + c).clone()
        })
    }

    /// Reduced row-echelon form.
    pub fn rref(&self) -> Rref {
        match self.field {
            Field::Prime(p) => rref_prime(self, p),
            Field::Rational => rref_rational(self),
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : Mv = 0}` by the free-column convention.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let Rref {
            matrix: r, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); self.cols];
                v[free] = self.field.one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(k, free);
                }
                v
            })
            .collect()
    }

    /// Pivot columns of this matrix, in pivot order.
    pub fn column_basis(&self) -> Vec<Vec<Scalar>> {
        self.rref().pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn invert(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n))?;
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(red.matrix.submatrix(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn pow(&self, mut k: u64) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn det(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] * &inv;
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[r][j] = &a[r][j] - &t;
                }
            }
        }
        Ok(det)
    }
}

fn rref_prime(m: &Matrix, p: u64) -> Rref {
    let (rows, cols) = m.shape();
    let mut a: Vec<u64> = m
        .data
        .iter()
        .map(|s| s.residue().expect("residue entries"))
        .collect();
    let inv = |v: u64| -> u64 {
        let mut acc = 1u64;
        let mut base = v % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let pi = inv(a[r * cols + c]);
        for j in 0..cols {
            a[r * cols + j] = a[r * cols + j] * pi % p;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[i * cols + c];
            if f == 0 {
                continue;
            }
            for j in 0..cols {
                let t = f * a[r * cols + j] % p;
                a[i * cols + j] = (a[i * cols + j] + p - t) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let data = a
        .into_iter()
        .map(|v| Scalar::Residue {
            value: v,
            modulus: p,
        })
        .collect();
    let rank = pivots.len();
    Rref {
        matrix: Matrix {
            field: m.field,
            rows,
            cols,
            data,
        },
        pivots,
        rank,
    }
}

/// Fraction-free Gauss-Jordan elimination over the integers after clearing
/// row denominators; every intermediate division by the previous pivot is exact.
fn rref_rational(m: &Matrix) -> Rref {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|r| {
            let row = m.row(r);
            let lcm = row
                .iter()
                .map(|s| s.as_rational().expect("rational entries").denom().clone())
                .fold(BigInt::one(), |acc, d| acc.lcm(&d));
            row.iter()
                .map(|s| {
                    let q = s.as_rational().expect("rational entries");
                    q.numer() * (&lcm / q.denom())
                })
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(pr, r);
        let p = a[r][c].clone();
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            for j in 0..cols {
                let num = &p * &row[j] - &f * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact fraction-free division");
                row[j] = q;
            }
        }
        prev = p;
        pivots.push(c);
        r += 1;
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in a.into_iter().enumerate() {
        if i < pivots.len() {
            let piv = row[pivots[i]].clone();
            for v in row {
                data.push(Scalar::Rational(BigRational::new(v, piv.clone())));
            }
        } else {
            for _ in 0..cols {
                data.push(Scalar::Rational(BigRational::zero()));
            }
        }
    }
    let rank = pivots.len();
    Rref {
        matrix: Matrix {
            field: m.field,
            rows,
            cols,
            data,
        },
        pivots,
        rank,
    }
}

macro_rules! mat_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                match self.$checked(rhs) {
                    Ok(m) => m,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

mat_binop!(Mul, mul, try_mul);
mat_binop!(Add, add, try_add);
mat_binop!(Sub, sub, try_sub);

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        let data = self.data.iter().map(|a| -a).collect();
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn zero_vector(field: Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `acc += c * x`.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, x: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(x) {
        if !b.is_zero() {
            *a = &*a + &(c * b);
        }
    }
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| c * x).collect()
}

/// Canonical basis of the span of `vectors` in `field^dim`: the nonzero rows
/// of the reduced row-echelon form of the matrix whose rows are the vectors.
pub fn canonical_basis(field: Field, dim: usize, vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(field, dim, vectors.to_vec()).expect("vectors of length dim");
    let red = m.rref();
    (0..red.rank).map(|r| red.matrix.row(r).to_vec()).collect()
}

/// Dimension of the span of `vectors`.
pub fn span_dim(field: Field, dim: usize, vectors: &[Vec<Scalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(field, dim, vectors.to_vec())
        .expect("vectors of length dim")
        .rank()
}

/// Coordinates relative to a linearly independent list of vectors.
///
/// Stores the row operations `E` with `E B = rref(B)`; the top rows of `E v`
/// are the coordinates and the remaining rows vanish iff `v` lies in the span.
#[derive(Debug, Clone)]
pub struct SpanCoordinates {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    transform: Matrix,
}

impl SpanCoordinates {
    pub fn new(field: Field, ambient: usize, basis: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let k = basis.len();
        let b = Matrix::from_columns(field, ambient, &basis)?;
        let aug = b.hstack(&Matrix::identity(field, ambient))?;
        let red = aug.rref();
        if red.pivots.iter().take_while(|&&p| p < k).count() != k {
            return Err(LinalgError::DependentBasis);
        }
        let transform = red.matrix.submatrix(0, ambient, k, k + ambient);
        Ok(Self {
            field,
            ambient,
            basis,
            transform,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let w = self.transform.apply(v);
        let k = self.basis.len();
        if w[k..].iter().all(Scalar::is_zero) {
            Some(w[..k].to_vec())
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some()
    }

    /// Matrix of `map` restricted to the span of `domain`, in these coordinates.
    /// `None` when some image leaves the span.
    pub fn restrict(&self, map: &Matrix, domain: &[Vec<Scalar>]) -> Option<Matrix> {
        let cols = domain
            .iter()
            .map(|b| self.coords(&map.apply(b)))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_columns(self.field, self.dim(), &cols).expect("coordinate columns"))
    }

    /// Recombine coordinates into an ambient vector.
    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let mut acc = zero_vector(self.field, self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            axpy(&mut acc, c, b);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn rref_proportional_rows() {
        let m = Matrix::from_i64_rows(q(), &[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.matrix, Matrix::from_i64_rows(q(), &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_identity_and_gf5() {
        let id = Matrix::identity(q(), 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        let f5 = Field::Prime(5);
        let m = Matrix::from_i64_rows(f5, &[&[2, 3], &[3, 2]]);
        assert_eq!(m.rank(), 1);
        let r = m.rref();
        // first row scaled by 2^{-1} = 3: (1, 4)
        assert_eq!(r.matrix.row(0), &[f5.from_i64(1), f5.from_i64(4)]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            Matrix::zeros(q(), 2, 2).kernel_basis(),
            vec![unit_vector(q(), 2, 0), unit_vector(q(), 2, 1)]
        );
        assert!(Matrix::identity(q(), 3).kernel_basis().is_empty());
        let k = Matrix::from_i64_rows(q(), &[&[1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![q().from_i64(-1), q().from_i64(1)]]);
    }

    #[test]
    fn invert_examples() {
        let id = Matrix::identity(q(), 2);
        assert_eq!(id.invert().unwrap(), id);
        let f5 = Field::Prime(5);
        let d = Matrix::from_i64_rows(f5, &[&[2, 0], &[0, 3]]);
        assert_eq!(
            d.invert().unwrap(),
            Matrix::from_i64_rows(f5, &[&[3, 0], &[0, 2]])
        );
        let s = Matrix::from_i64_rows(q(), &[&[1, 1], &[1, 1]]);
        assert_eq!(s.invert(), Err(LinalgError::Singular));
        let r = Matrix::zeros(q(), 2, 3);
        assert_eq!(r.invert(), Err(LinalgError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn power_examples() {
        let m = Matrix::from_i64_rows(q(), &[&[5, 7], &[1, 2]]);
        assert!(m.pow(0).unwrap().is_identity());
        let n = Matrix::from_i64_rows(q(), &[&[0, 1], &[0, 0]]);
        assert!(n.pow(2).unwrap().is_zero());
        let j = Matrix::from_i64_rows(q(), &[&[1, 1], &[0, 1]]);
        assert_eq!(
            j.pow(3).unwrap(),
            Matrix::from_i64_rows(q(), &[&[1, 3], &[0, 1]])
        );
        assert!(Matrix::zeros(q(), 1, 2).pow(1).is_err());
    }

    #[test]
    fn determinant() {
        let m = Matrix::from_i64_rows(q(), &[&[2, 1], &[7, 4]]);
        assert_eq!(m.det().unwrap(), q().from_i64(1));
        let f5 = Field::Prime(5);
        let one_minus = Matrix::from_i64_rows(f5, &[&[-1, 0], &[0, -2]]);
        assert_eq!(one_minus.det().unwrap(), f5.from_i64(2));
    }

    #[test]
    fn mixed_fields_error() {
        let a = Matrix::identity(q(), 2);
        let b = Matrix::identity(Field::Prime(3), 2);
        assert!(matches!(
            a.try_mul(&b),
            Err(LinalgError::FieldMismatch { .. })
        ));
        let bad = Matrix::new(q(), 1, 1, vec![Field::Prime(3).one()]);
        assert!(matches!(bad, Err(LinalgError::FieldMismatch { .. })));
    }

    #[test]
    fn span_coordinates() {
        let basis = vec![
            vec![q().from_i64(1), q().from_i64(1), q().from_i64(0)],
            vec![q().from_i64(0), q().from_i64(1), q().from_i64(1)],
        ];
        let sc = SpanCoordinates::new(q(), 3, basis.clone()).unwrap();
        let v = vec![q().from_i64(2), q().from_i64(5), q().from_i64(3)];
        assert_eq!(sc.coords(&v), Some(vec![q().from_i64(2), q().from_i64(3)]));
        assert_eq!(sc.coords(&[q().one(), q().zero(), q().zero()]), None);
        let dep = vec![basis[0].clone(), basis[0].clone()];
        assert_eq!(
            SpanCoordinates::new(q(), 3, dep).unwrap_err(),
            LinalgError::DependentBasis
        );
    }
}
