//! Dense exact matrices and vectors.
//!
//! Rows and columns are indexed from 0. All operations return fresh values;
//! nothing is mutated in place behind the caller's back.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldScalar, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenseVector {
    field: FieldSpec,
    data: Vec<FieldScalar>,
}

impl DenseVector {
    pub fn new(field: FieldSpec, data: Vec<FieldScalar>) -> Self {
        debug_assert!(data.iter().all(|x| x.field() == field));
        DenseVector { field, data }
    }

    pub fn zeros(field: FieldSpec, len: usize) -> Self {
        DenseVector::new(field, vec![field.zero(); len])
    }

    pub fn unit(field: FieldSpec, len: usize, k: usize) -> Self {
        let mut v = DenseVector::zeros(field, len);
        v.data[k] = field.one();
        v
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn entries(&self) -> &[FieldScalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldScalar::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.data.iter().position(|x| !x.is_zero())
    }

    pub fn scale(&self, c: &FieldScalar) -> DenseVector {
        DenseVector::new(self.field, self.data.iter().map(|x| x * c).collect())
    }

    /// Rescaled so the first nonzero coordinate is 1; `None` for the zero vector.
    pub fn normalized(&self) -> Option<DenseVector> {
        let k = self.first_nonzero()?;
        Some(self.scale(&self.data[k].inv().ok()?))
    }

    pub fn dot(&self, other: &DenseVector) -> FieldScalar {
        assert_eq!(self.len(), other.len(), "dot of vectors of different length");
        self.data
            .iter()
            .zip(&other.data)
            .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// Whether `self = c * other` for some scalar `c`, returning `c`.
    /// Only meaningful when `other` is nonzero.
    pub fn ratio_to(&self, other: &DenseVector) -> Option<FieldScalar> {
        let k = other.first_nonzero()?;
        let c = self.data[k].checked_div(&other.data[k]).ok()?;
        (other.scale(&c) == *self).then_some(c)
    }
}

impl Index<usize> for DenseVector {
    type Output = FieldScalar;

    fn index(&self, i: usize) -> &FieldScalar {
        &self.data[i]
    }
}

impl<'a> Add<&'a DenseVector> for &'a DenseVector {
    type Output = DenseVector;

    fn add(self, rhs: &DenseVector) -> DenseVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        DenseVector::new(
            self.field,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl<'a> Sub<&'a DenseVector> for &'a DenseVector {
    type Output = DenseVector;

    fn sub(self, rhs: &DenseVector) -> DenseVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        DenseVector::new(
            self.field,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Serialize for DenseVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.data.serialize(serializer)
    }
}

impl fmt::Display for DenseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Row-major dense matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<FieldScalar>,
}

impl DenseMatrix {
    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldScalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        debug_assert!(data.iter().all(|x| x.field() == field));
        DenseMatrix {
            rows,
            cols,
            field,
            data,
        }
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        DenseMatrix::from_fn(field, rows, cols, |_, _| field.zero())
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        DenseMatrix::from_fn(field, n, n, |i, j| {
            if i == j {
                field.one()
            } else {
                field.zero()
            }
        })
    }

    pub fn diagonal(field: FieldSpec, diag: &[FieldScalar]) -> Self {
        let n = diag.len();
        DenseMatrix::from_fn(field, n, n, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                field.zero()
            }
        })
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<FieldScalar> = rows.into_iter().flatten().collect();
        if let Some(x) = data.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(format!("{} entry in a {field} matrix", x.field())));
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            field,
            data,
        })
    }

    /// Integer entries, mainly for tests and examples.
    pub fn from_ints(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&x| field.from_int(x)).collect())
            .collect();
        DenseMatrix::from_rows(field, rows).expect("rectangular integer rows")
    }

    pub fn from_columns(field: FieldSpec, columns: &[DenseVector]) -> Result<Self> {
        let n = columns.first().map_or(0, DenseVector::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::DimensionMismatch("columns of different length".into()));
        }
        Ok(DenseMatrix::from_fn(field, n, columns.len(), |i, j| {
            columns[j][i].clone()
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldScalar {
        &self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> DenseVector {
        DenseVector::new(
            self.field,
            (0..self.rows).map(|i| self.get(i, j).clone()).collect(),
        )
    }

    pub fn columns(&self) -> Vec<DenseVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> DenseVector {
        DenseVector::new(self.field, self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    /// Entries in row-major order as one long vector.
    pub fn vectorize(&self) -> DenseVector {
        DenseVector::new(self.field, self.data.clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldScalar>> {
        self.data.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldScalar::is_zero)
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> FieldScalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn scale(&self, c: &FieldScalar) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &DenseVector) -> DenseVector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        DenseVector::new(
            self.field,
            (0..self.rows)
                .map(|i| {
                    (0..self.cols).fold(self.field.zero(), |acc, k| &acc + &(self.get(i, k) * &v[k]))
                })
                .collect(),
        )
    }

    /// `self - c·I`.
    pub fn shift(&self, c: &FieldScalar) -> DenseMatrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let k = i * self.cols + i;
            m.data[k] = &m.data[k] - c;
        }
        m
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (DenseMatrix, Vec<usize>) {
        let mut rows = self.to_rows();
        if self.cols == 0 {
            rows = vec![Vec::new(); self.rows];
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Prefer sparse rows with small entries to limit growth over Q.
            let Some(p) = (r..self.rows)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by_key(|&i| (rows[i][c..].iter().filter(|x| !x.is_zero()).count(), rows[i][c].height()))
            else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].inv().expect("nonzero pivot");
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..self.rows {
                if i == r || rows[i][c].is_zero() {
                    continue;
                }
                let factor = rows[i][c].clone();
                for j in c..self.cols {
                    if rows[r][j].is_zero() {
                        continue;
                    }
                    let delta = &factor * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let reduced = DenseMatrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            rows[i][j].clone()
        });
        (reduced, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{x : self·x = 0}`.
    pub fn null_space(&self) -> Vec<DenseVector> {
        let (reduced, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = DenseVector::unit(self.field, self.cols, f);
                for (r, &pc) in pivots.iter().enumerate() {
                    x.data[pc] = -reduced.get(r, f);
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let augmented = DenseMatrix::from_fn(self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                self.field.one()
            } else {
                self.field.zero()
            }
        });
        let (reduced, pivots) = augmented.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return Err(Error::SingularMatrix);
        }
        Ok(DenseMatrix::from_fn(self.field, n, n, |i, j| {
            reduced.get(i, n + j).clone()
        }))
    }

    /// Solves `self·x = b` for square invertible `self`.
    pub fn solve(&self, b: &DenseVector) -> Result<DenseVector> {
        Ok(self.inverse()?.mul_vec(b))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn diagonal_entries(&self) -> Vec<FieldScalar> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn pow(&self, k: u32) -> DenseMatrix {
        (0..k).fold(DenseMatrix::identity(self.field, self.rows), |acc, _| &acc * self)
    }

    /// `uᵀ · self · v`, the bilinear form with Gram matrix `self`.
    pub fn bilinear(&self, u: &DenseVector, v: &DenseVector) -> FieldScalar {
        u.dot(&self.mul_vec(v))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = FieldScalar;

    fn index(&self, (i, j): (usize, usize)) -> &FieldScalar {
        self.get(i, j)
    }
}

impl<'a> Mul<&'a DenseMatrix> for &'a DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        assert_eq!(self.field, rhs.field, "matrix product across fields");
        let mut data = vec![self.field.zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut data[i * rhs.cols + j];
                    *slot = &*slot + &(a * b);
                }
            }
        }
        DenseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            field: self.field,
            data,
        }
    }
}

impl<'a> Add<&'a DenseMatrix> for &'a DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a DenseMatrix> for &'a DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Serialize for DenseMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(&self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        seq.end()
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sum of a list of equally shaped matrices.
pub fn sum_matrices<'a>(
    field: FieldSpec,
    n: usize,
    items: impl IntoIterator<Item = &'a DenseMatrix>,
) -> DenseMatrix {
    items
        .into_iter()
        .fold(DenseMatrix::zeros(field, n, n), |acc, m| &acc + m)
}

/// `∏ (x - r)` evaluated at the scalar `x`; the empty product is 1.
pub fn root_product_at(roots: &[FieldScalar], x: &FieldScalar) -> FieldScalar {
    roots
        .iter()
        .fold(x.field().one(), |acc, r| &acc * &(x - r))
}

/// `(M - r₀I)(M - r₁I)⋯` for the listed roots; the empty product is `I`.
pub fn eval_root_product(roots: &[FieldScalar], m: &DenseMatrix) -> DenseMatrix {
    assert!(m.is_square(), "polynomial evaluation needs a square matrix");
    roots.iter().fold(DenseMatrix::identity(m.field(), m.rows()), |acc, r| {
        &acc * &m.shift(r)
    })
}

/// The primitive idempotent for `eigenvalues[i]`: `∏_{j≠i} (M - θ_j I)/(θ_i - θ_j)`.
pub fn lagrange_idempotent(
    m: &DenseMatrix,
    eigenvalues: &[FieldScalar],
    i: usize,
) -> Result<DenseMatrix> {
    if !m.is_square() || m.rows() != eigenvalues.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} eigenvalues for a {}x{} matrix",
            eigenvalues.len(),
            m.rows(),
            m.cols()
        )));
    }
    if i >= eigenvalues.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: eigenvalues.len().saturating_sub(1),
        });
    }
    check_distinct(eigenvalues)?;
    let mut result = DenseMatrix::identity(m.field(), m.rows());
    for (j, theta_j) in eigenvalues.iter().enumerate() {
        if j == i {
            continue;
        }
        let denom = (&eigenvalues[i] - theta_j).inv()?;
        result = (&result * &m.shift(theta_j)).scale(&denom);
    }
    Ok(result)
}

pub fn check_distinct(values: &[FieldScalar]) -> Result<()> {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                return Err(Error::DuplicateEigenvalue(i, j));
            }
        }
    }
    Ok(())
}

/// Zero outside the three central diagonals and nonzero on the sub- and
/// superdiagonal.
pub fn is_irreducible_tridiagonal(m: &DenseMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            let x = m.get(i, j);
            let band = i.abs_diff(j);
            if band > 1 && !x.is_zero() {
                return false;
            }
            if band == 1 && x.is_zero() {
                return false;
            }
        }
    }
    true
}

/// The matrix whose columns express `from_basis` in `to_basis` coordinates.
pub fn transition_matrix(from_basis: &[DenseVector], to_basis: &[DenseVector]) -> Result<DenseMatrix> {
    let field = from_basis
        .first()
        .or(to_basis.first())
        .map(DenseVector::field)
        .ok_or_else(|| Error::DimensionMismatch("empty basis".into()))?;
    let from = DenseMatrix::from_columns(field, from_basis)?;
    let to = DenseMatrix::from_columns(field, to_basis)?;
    if !from.is_square() || !to.is_square() || from.rows() != to.rows() {
        return Err(Error::DimensionMismatch("bases of different spaces".into()));
    }
    if !from.is_invertible() {
        return Err(Error::SingularMatrix);
    }
    Ok(&to.inverse()? * &from)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn q(n: i64, d: i64) -> FieldScalar {
        Q.from_ratio(n, d).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let i3 = DenseMatrix::identity(Q, 3);
        assert_eq!(i3.inverse().unwrap(), i3);

        let d = DenseMatrix::diagonal(Q, &[q(2, 1), q(3, 1)]);
        assert_eq!(d.inverse().unwrap(), DenseMatrix::diagonal(Q, &[q(1, 2), q(1, 3)]));

        let m = DenseMatrix::from_ints(Q, &[&[1, 1], &[0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, DenseMatrix::from_ints(Q, &[&[1, -1], &[0, 1]]));
        assert_eq!(&m * &inv, DenseMatrix::identity(Q, 2));

        let singular = DenseMatrix::from_ints(Q, &[&[1, 2], &[2, 4]]);
        assert_eq!(singular.inverse(), Err(Error::SingularMatrix));
        assert!(DenseMatrix::zeros(Q, 2, 3).inverse().is_err());
    }

    #[test]
    fn inverse_over_prime_field() {
        let f = FieldSpec::prime(7).unwrap();
        // needs a row swap: the (0,0) entry is zero
        let m = DenseMatrix::from_ints(f, &[&[0, 3, 1], &[2, 0, 5], &[1, 1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, DenseMatrix::identity(f, 3));
        assert_eq!(&inv * &m, DenseMatrix::identity(f, 3));
    }

    #[test]
    fn root_product_examples() {
        let m = DenseMatrix::diagonal(Q, &[q(2, 1), q(5, 1)]);
        assert_eq!(eval_root_product(&[], &m), DenseMatrix::identity(Q, 2));
        assert_eq!(
            eval_root_product(&[q(2, 1)], &m),
            DenseMatrix::diagonal(Q, &[q(0, 1), q(3, 1)])
        );
        assert!(eval_root_product(&[q(2, 1), q(5, 1)], &m).is_zero());
        assert_eq!(root_product_at(&[q(2, 1), q(5, 1)], &q(3, 1)), q(-2, 1));
        assert_eq!(root_product_at(&[], &q(3, 1)), q(1, 1));
    }

    #[test]
    fn lagrange_examples() {
        let m = DenseMatrix::diagonal(Q, &[q(1, 1), q(2, 1)]);
        let e0 = lagrange_idempotent(&m, &[q(1, 1), q(2, 1)], 0).unwrap();
        assert_eq!(e0, DenseMatrix::diagonal(Q, &[q(1, 1), q(0, 1)]));

        // (M + I)/2 for M = [[1,0],[1,-1]], solved by hand
        let m = DenseMatrix::from_ints(Q, &[&[1, 0], &[1, -1]]);
        let e0 = lagrange_idempotent(&m, &[q(1, 1), q(-1, 1)], 0).unwrap();
        let expected = DenseMatrix::from_rows(Q, vec![vec![q(1, 1), q(0, 1)], vec![q(1, 2), q(0, 1)]]).unwrap();
        assert_eq!(e0, expected);

        assert_eq!(
            lagrange_idempotent(&m, &[q(1, 1), q(1, 1)], 0),
            Err(Error::DuplicateEigenvalue(0, 1))
        );
        assert!(matches!(
            lagrange_idempotent(&m, &[q(1, 1), q(-1, 1)], 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn lagrange_bullets_on_random_triangular() {
        // lower triangular with distinct diagonal is multiplicity-free
        let f = FieldSpec::prime(11).unwrap();
        let m = DenseMatrix::from_ints(f, &[&[3, 0, 0, 0], &[1, 5, 0, 0], &[4, 2, 7, 0], &[9, 1, 1, 0]]);
        let theta: Vec<_> = [3, 5, 7, 0].iter().map(|&x| f.from_int(x)).collect();
        let es: Vec<_> = (0..4).map(|i| lagrange_idempotent(&m, &theta, i).unwrap()).collect();
        let id = DenseMatrix::identity(f, 4);
        assert_eq!(sum_matrices(f, 4, &es), id);
        for i in 0..4 {
            assert_eq!(es[i].rank(), 1);
            for j in 0..4 {
                let prod = &es[i] * &es[j];
                if i == j {
                    assert_eq!(prod, es[i]);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
        let spectral = es
            .iter()
            .zip(&theta)
            .fold(DenseMatrix::zeros(f, 4, 4), |acc, (e, t)| &acc + &e.scale(t));
        assert_eq!(spectral, m);
    }

    #[test]
    fn tridiagonal_examples() {
        assert!(!is_irreducible_tridiagonal(&DenseMatrix::identity(Q, 3)));
        assert!(is_irreducible_tridiagonal(&DenseMatrix::from_ints(Q, &[&[1, 1], &[1, 1]])));
        assert!(is_irreducible_tridiagonal(&DenseMatrix::from_ints(Q, &[&[7]])));
        // lower bidiagonal: superdiagonal vanishes
        let lower = DenseMatrix::from_ints(Q, &[&[1, 0, 0], &[1, 2, 0], &[0, 1, 3]]);
        assert!(!is_irreducible_tridiagonal(&lower));
        let corner = DenseMatrix::from_ints(Q, &[&[1, 1, 1], &[1, 2, 1], &[0, 1, 3]]);
        assert!(!is_irreducible_tridiagonal(&corner));
    }

    #[test]
    fn transition_examples() {
        let e: Vec<_> = (0..3).map(|k| DenseVector::unit(Q, 3, k)).collect();
        assert_eq!(transition_matrix(&e, &e).unwrap(), DenseMatrix::identity(Q, 3));
        let twice: Vec<_> = e.iter().map(|v| v.scale(&q(2, 1))).collect();
        assert_eq!(
            transition_matrix(&e, &twice).unwrap(),
            DenseMatrix::identity(Q, 3).scale(&q(1, 2))
        );

        let b1 = vec![
            DenseVector::new(Q, vec![q(1, 1), q(1, 1)]),
            DenseVector::new(Q, vec![q(0, 1), q(1, 1)]),
        ];
        let b2 = vec![
            DenseVector::new(Q, vec![q(2, 1), q(-1, 1)]),
            DenseVector::new(Q, vec![q(1, 1), q(3, 1)]),
        ];
        let s = transition_matrix(&b1, &b2).unwrap();
        let back = transition_matrix(&b2, &b1).unwrap();
        assert_eq!(&s * &back, DenseMatrix::identity(Q, 2));
        // multiply back: to-basis times coordinates reproduces from-basis
        let to = DenseMatrix::from_columns(Q, &b2).unwrap();
        assert_eq!(&to * &s, DenseMatrix::from_columns(Q, &b1).unwrap());

        let dependent = vec![b1[0].clone(), b1[0].scale(&q(3, 1))];
        assert_eq!(transition_matrix(&dependent, &b2), Err(Error::SingularMatrix));
        assert_eq!(transition_matrix(&b1, &dependent), Err(Error::SingularMatrix));
    }

    #[test]
    fn null_space_and_rank() {
        let m = DenseMatrix::from_ints(Q, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).is_zero());
        }
        assert_eq!(DenseMatrix::identity(Q, 3).null_space().len(), 0);
    }
}
