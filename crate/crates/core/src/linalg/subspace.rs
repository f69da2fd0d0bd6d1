//! Subspaces given by spanning columns: coordinates, complements, quotients.

use super::field::Field;
use super::mat::Mat;

/// Coordinates with respect to a fixed set of linearly independent columns.
///
/// Picks `k` rows on which the basis is invertible and keeps the inverse of
/// that square block; membership is then checked by multiplying back.
#[derive(Debug, Clone)]
pub struct SpanSolver<F: Field> {
    basis: Mat<F>,
    rows: Vec<usize>,
    left_inv: Mat<F>,
}

impl<F: Field> SpanSolver<F> {
    /// `basis` must have independent columns.
    pub fn new(basis: Mat<F>) -> Self {
        let (_, pivots) = basis.transpose().rref();
        assert_eq!(
            pivots.len(),
            basis.cols(),
            "SpanSolver basis is not independent"
        );
        let cols: Vec<usize> = (0..basis.cols()).collect();
        let square = basis.submatrix(&pivots, &cols);
        let left_inv = square.inverse().expect("pivot block is invertible");
        SpanSolver {
            basis,
            rows: pivots,
            left_inv,
        }
    }

    pub fn basis(&self) -> &Mat<F> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of `v`, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let c = self.coords_unchecked(v);
        if self.basis.apply(&c) == v {
            Some(c)
        } else {
            None
        }
    }

    /// Coordinates of `v`, assuming it lies in the span.
    pub fn coords_unchecked(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.basis.rows());
        let sub: Vec<F::Elem> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.left_inv.apply(&sub)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.coords(v).is_some()
    }

    /// Ambient positions read by [`Self::coords_unchecked`].
    pub fn pivot_rows(&self) -> &[usize] {
        &self.rows
    }

    /// Maps the entries at [`Self::pivot_rows`] to coordinates.
    pub fn left_inverse(&self) -> &Mat<F> {
        &self.left_inv
    }
}

/// A complement of `sub` (columns spanning a subspace of `k^n`) and the
/// projection onto it: `pi * section = 1` and `ker pi = span(sub)`.
#[derive(Debug, Clone)]
pub struct Quotient<F: Field> {
    pub pi: Mat<F>,
    pub section: Mat<F>,
    /// Independent columns spanning `sub`.
    pub kernel: Mat<F>,
}

impl<F: Field> Quotient<F> {
    pub fn dim(&self) -> usize {
        self.pi.rows()
    }
}

/// Complement spanned by the standard vectors outside the pivots of `sub`.
pub fn quotient_map<F: Field>(field: &F, n: usize, sub: &Mat<F>) -> Quotient<F> {
    assert_eq!(sub.rows(), n);
    let (r, pivots) = sub.transpose().rref();
    let span_rows: Vec<usize> = (0..pivots.len()).collect();
    let all_cols: Vec<usize> = (0..n).collect();
    let kernel = r.submatrix(&span_rows, &all_cols).transpose();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut section = Mat::zeros(field, n, free.len());
    for (j, &c) in free.iter().enumerate() {
        section[(c, j)] = field.one();
    }
    let full = Mat::hstack(field, n, &[&kernel, &section]);
    let inv = full.inverse().expect("subspace plus complement is a basis");
    let q_rows: Vec<usize> = (pivots.len()..n).collect();
    let pi = inv.submatrix(&q_rows, &all_cols);
    Quotient {
        pi,
        section,
        kernel,
    }
}

/// Independent columns spanning `span(a) + span(b)`.
pub fn sum_space<F: Field>(field: &F, n: usize, parts: &[&Mat<F>]) -> Mat<F> {
    Mat::hstack(field, n, parts).column_space()
}

/// Independent columns spanning `span(a) ∩ span(b)`.
pub fn intersection<F: Field>(field: &F, a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let n = a.rows();
    let stacked = Mat::hstack(field, n, &[a, &b.neg()]);
    let k = stacked.kernel_basis();
    let top = k.block(0, 0, a.cols(), k.cols());
    a.mul(&top).column_space()
}
