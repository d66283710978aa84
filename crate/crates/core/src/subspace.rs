//! Subspaces of `F^n` held as a list of independent spanning columns.
//!
//! Equality is decided by ranks (`dim U = dim W = dim(U + W)`), never by
//! comparing spanning vectors, since those are only defined up to scalars.

use crate::field::FieldSpec;
use crate::linalg::{DenseMatrix, DenseVector};

#[derive(Clone, Debug)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    basis: Vec<DenseVector>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
        }
    }

    /// The span of `vectors`, reduced to an independent set.
    pub fn span(field: FieldSpec, ambient: usize, vectors: &[DenseVector]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(field, ambient);
        }
        // Row-reduce the generators laid out as rows; the nonzero rows of the
        // reduced form are a basis.
        let rows = DenseMatrix::from_columns(field, vectors)
            .expect("generators of equal length")
            .transpose();
        let (reduced, pivots) = rows.rref();
        let basis = (0..pivots.len()).map(|r| reduced.row(r)).collect();
        Subspace {
            field,
            ambient,
            basis,
        }
    }

    /// Column space of `m`.
    pub fn column_space(m: &DenseMatrix) -> Self {
        Subspace::span(m.field(), m.rows(), &m.columns())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[DenseVector] {
        &self.basis
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient, &all)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.field, self.ambient);
        }
        // x ∈ U ∩ W  iff  x = U·a = W·b, i.e. [U | -W]·(a, b) = 0.
        let k = self.dim();
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| w.scale(&-self.field.one())));
        let stacked = DenseMatrix::from_columns(self.field, &cols).expect("same ambient space");
        let u = DenseMatrix::from_columns(self.field, &self.basis).expect("same ambient space");
        let meet: Vec<DenseVector> = stacked
            .null_space()
            .iter()
            .map(|x| {
                let a = DenseVector::new(self.field, x.entries()[..k].to_vec());
                u.mul_vec(&a)
            })
            .collect();
        Subspace::span(self.field, self.ambient, &meet)
    }

    pub fn contains(&self, v: &DenseVector) -> bool {
        let mut all = self.basis.clone();
        all.push(v.clone());
        Subspace::span(self.field, self.ambient, &all).dim() == self.dim()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.sum(other).dim() == self.dim()
    }

    /// `M·U`.
    pub fn image(&self, m: &DenseMatrix) -> Subspace {
        let imgs: Vec<DenseVector> = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Subspace::span(self.field, m.rows(), &imgs)
    }

    /// The basis laid out as columns, `ambient × dim`.
    pub fn generator_matrix(&self) -> DenseMatrix {
        if self.basis.is_empty() {
            return DenseMatrix::zeros(self.field, self.ambient, 0);
        }
        DenseMatrix::from_columns(self.field, &self.basis).expect("same ambient space")
    }

    /// A single spanning vector normalized to first nonzero coordinate 1, for
    /// one-dimensional subspaces.
    pub fn spanning_vector(&self) -> Option<DenseVector> {
        (self.dim() == 1).then(|| self.basis[0].normalized().expect("basis vectors are nonzero"))
    }
}

/// Whether `parts` form a direct sum decomposition of the whole space:
/// the generators of all parts together are independent and span.
pub fn is_direct_sum_of_whole(parts: &[Subspace], ambient: usize) -> bool {
    let Some(first) = parts.first() else {
        return ambient == 0;
    };
    let total: usize = parts.iter().map(Subspace::dim).sum();
    let all: Vec<DenseVector> = parts.iter().flat_map(|p| p.basis().iter().cloned()).collect();
    total == ambient && Subspace::span(first.field, ambient, &all).dim() == ambient
}

/// The projections onto the components of a decomposition into subspaces.
pub fn decomposition_projectors(parts: &[Subspace]) -> Option<Vec<DenseMatrix>> {
    let first = parts.first()?;
    let field = first.field;
    let n = first.ambient;
    if !is_direct_sum_of_whole(parts, n) {
        return None;
    }
    let cols: Vec<DenseVector> = parts.iter().flat_map(|p| p.basis().iter().cloned()).collect();
    let w = DenseMatrix::from_columns(field, &cols).ok()?;
    let w_inv = w.inverse().ok()?;
    let mut offset = 0;
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        let select = DenseMatrix::from_fn(field, n, n, |i, j| {
            if i == j && (offset..offset + p.dim()).contains(&i) {
                field.one()
            } else {
                field.zero()
            }
        });
        out.push(&(&w * &select) * &w_inv);
        offset += p.dim();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    fn v(xs: &[i64]) -> DenseVector {
        DenseVector::new(Q, xs.iter().map(|&x| Q.from_int(x)).collect())
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(Q, 3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(Q, 3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let meet = a.intersect(&b);
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&v(&[0, 5, 0])));
        assert_eq!(meet.spanning_vector().unwrap(), v(&[0, 1, 0]));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn equality_by_rank() {
        let a = Subspace::span(Q, 3, &[v(&[1, 1, 0]), v(&[1, -1, 0])]);
        let b = Subspace::span(Q, 3, &[v(&[2, 0, 0]), v(&[0, 3, 0]), v(&[1, 1, 0])]);
        assert!(a.same_as(&b));
        assert!(!a.same_as(&Subspace::span(Q, 3, &[v(&[0, 0, 1])])));
        assert!(a.contains_subspace(&Subspace::span(Q, 3, &[v(&[1, 0, 0])])));
    }

    #[test]
    fn projectors_of_skew_decomposition() {
        let parts = vec![
            Subspace::span(Q, 2, &[v(&[1, 1])]),
            Subspace::span(Q, 2, &[v(&[0, 1])]),
        ];
        let ps = decomposition_projectors(&parts).unwrap();
        assert_eq!(&ps[0] + &ps[1], DenseMatrix::identity(Q, 2));
        assert_eq!(ps[0].mul_vec(&v(&[1, 1])), v(&[1, 1]));
        assert!(ps[0].mul_vec(&v(&[0, 1])).is_zero());
        assert!(decomposition_projectors(&[parts[0].clone(), parts[0].clone()]).is_none());
    }
}
