//! Finite-dimensional algebras given by a faithful matrix representation:
//! Jacobson radical, locality and primitive idempotents.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::field::{next_prime_above, FieldKind};
use crate::linalg::poly::{self, Poly};
use crate::linalg::{quotient_map, Field, Mat, SpanSolver};

const SPLIT_TRIES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locality {
    Local,
    NotLocal,
    Unknown,
}

/// A subalgebra of `M_n(k)` spanned by `basis`, with unit `unit` (which need
/// not be the identity matrix, e.g. for corner algebras `eAe`).
#[derive(Debug, Clone)]
pub struct MatrixAlgebra<F: Field> {
    field: F,
    basis: Vec<Mat<F>>,
    unit: Mat<F>,
    solver: SpanSolver<F>,
}

fn flat_columns<F: Field>(field: &F, mats: &[Mat<F>], n: usize) -> Mat<F> {
    let cols: Vec<Vec<F::Elem>> = mats.iter().map(|m| m.flatten()).collect();
    Mat::from_columns(field, n * n, &cols)
}

/// The field must exceed the algebra dimension for the trace-form radical.
pub fn check_field<F: Field>(field: &F, dim: usize) -> Result<()> {
    match field.kind() {
        FieldKind::Prime(p) if p as usize <= dim => Err(Error::FieldTooSmall {
            found: p,
            dim,
            required: next_prime_above(dim as u64),
        }),
        _ => Ok(()),
    }
}

impl<F: Field> MatrixAlgebra<F> {
    /// `basis` must be linearly independent, closed under products, and span
    /// `unit`, which acts as a two-sided identity. Closure is checked.
    pub fn new(field: &F, basis: Vec<Mat<F>>, unit: Mat<F>) -> Result<Self> {
        let n = unit.rows();
        let solver = SpanSolver::new(flat_columns(field, &basis, n));
        if !solver.contains(&unit.flatten()) {
            return Err(Error::VerificationFailed(
                "unit is not in the algebra".into(),
            ));
        }
        let alg = MatrixAlgebra {
            field: field.clone(),
            basis,
            unit,
            solver,
        };
        for a in &alg.basis {
            if a.mul(&alg.unit) != *a || alg.unit.mul(a) != *a {
                return Err(Error::UnitLaw("algebra unit".into()));
            }
            for b in &alg.basis {
                if !alg.solver.contains(&a.mul(b).flatten()) {
                    return Err(Error::VerificationFailed(
                        "basis is not closed under multiplication".into(),
                    ));
                }
            }
        }
        Ok(alg)
    }

    /// Like [`Self::new`] but spans the basis from arbitrary generators of
    /// the underlying space, and skips the closure check.
    pub fn from_spanning(field: &F, span: &[Mat<F>], unit: Mat<F>) -> Self {
        let n = unit.rows();
        let cs = flat_columns(field, span, n).column_space();
        let basis: Vec<Mat<F>> = cs
            .columns()
            .into_iter()
            .map(|c| Mat::from_vec(field, n, n, c).expect("square"))
            .collect();
        let solver = SpanSolver::new(cs);
        MatrixAlgebra {
            field: field.clone(),
            basis,
            unit,
            solver,
        }
    }

    /// The left regular representation of an abstract unital algebra with
    /// `product(i, j)` = coordinates of `b_i b_j` and `unit` coordinates.
    pub fn from_structure(
        field: &F,
        dim: usize,
        product: impl Fn(usize, usize) -> Vec<F::Elem>,
        unit: &[F::Elem],
    ) -> Self {
        let basis: Vec<Mat<F>> = (0..dim)
            .map(|i| {
                let cols: Vec<Vec<F::Elem>> = (0..dim).map(|j| product(i, j)).collect();
                Mat::from_columns(field, dim, &cols)
            })
            .collect();
        let mut u = Mat::zeros(field, dim, dim);
        for (c, b) in unit.iter().zip(&basis) {
            u.add_scaled(c, b);
        }
        let solver = SpanSolver::new(flat_columns(field, &basis, dim));
        MatrixAlgebra {
            field: field.clone(),
            basis,
            unit: u,
            solver,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Mat<F>] {
        &self.basis
    }
    pub fn unit(&self) -> &Mat<F> {
        &self.unit
    }

    pub fn coords(&self, a: &Mat<F>) -> Option<Vec<F::Elem>> {
        self.solver.coords(&a.flatten())
    }

    pub fn elem(&self, coords: &[F::Elem]) -> Mat<F> {
        let n = self.unit.rows();
        let mut m = Mat::zeros(&self.field, n, n);
        for (c, b) in coords.iter().zip(&self.basis) {
            m.add_scaled(c, b);
        }
        m
    }

    /// Entry `r` (flattened) of `basis[i] * basis[j]`.
    fn product_entry(&self, i: usize, j: usize, r: usize) -> F::Elem {
        let f = &self.field;
        let n = self.unit.rows();
        let (row, col) = (r / n, r % n);
        let (a, b) = (&self.basis[i], &self.basis[j]);
        (0..n).fold(f.zero(), |acc, m| {
            let x = &a[(row, m)];
            if f.is_zero(x) {
                acc
            } else {
                f.add(&acc, &f.mul(x, &b[(m, col)]))
            }
        })
    }

    /// Coordinate `k` of `basis[i] * basis[j]`.
    fn product_coord(&self, i: usize, j: usize, k: usize) -> F::Elem {
        let f = &self.field;
        let li = self.solver.left_inverse();
        self.solver
            .pivot_rows()
            .iter()
            .enumerate()
            .fold(f.zero(), |acc, (t, &r)| {
                let w = &li[(k, t)];
                if f.is_zero(w) {
                    acc
                } else {
                    f.add(&acc, &f.mul(w, &self.product_entry(i, j, r)))
                }
            })
    }

    /// Gram matrix of `(x, y) -> tr(L_{xy})` on the regular representation.
    pub fn trace_form(&self) -> Mat<F> {
        let f = &self.field;
        let d = self.dim();
        // t_l = tr(L_{b_l})
        let t: Vec<F::Elem> = (0..d)
            .map(|l| (0..d).fold(f.zero(), |acc, k| f.add(&acc, &self.product_coord(l, k, k))))
            .collect();
        // linear functional on flattened matrices agreeing with tr(L_-)
        let li = self.solver.left_inverse();
        let rows = self.solver.pivot_rows();
        let u: Vec<F::Elem> = (0..rows.len())
            .map(|s| (0..d).fold(f.zero(), |acc, l| f.add(&acc, &f.mul(&t[l], &li[(l, s)]))))
            .collect();
        let mut g = Mat::zeros(f, d, d);
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] = rows.iter().zip(&u).fold(f.zero(), |acc, (&r, w)| {
                    if f.is_zero(w) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(w, &self.product_entry(i, j, r)))
                    }
                });
            }
        }
        g
    }

    /// Coordinates (as columns) of a basis of the Jacobson radical.
    pub fn radical_coords(&self) -> Result<Mat<F>> {
        check_field(&self.field, self.dim())?;
        Ok(self.trace_form().kernel_basis())
    }

    pub fn radical(&self) -> Result<Vec<Mat<F>>> {
        let k = self.radical_coords()?;
        Ok(k.columns().iter().map(|c| self.elem(c)).collect())
    }

    /// `dim A / rad A`.
    pub fn top_dim(&self) -> Result<usize> {
        Ok(self.dim() - self.radical_coords()?.cols())
    }

    /// Minimal polynomial of `a`, with `a^0` the algebra unit.
    pub fn min_poly(&self, a: &Mat<F>) -> Poly<F> {
        let f = &self.field;
        let n = self.unit.rows();
        let mut powers: Vec<Mat<F>> = vec![self.unit.clone()];
        loop {
            let next = powers.last().expect("nonempty").mul(a);
            let m = flat_columns(f, &powers, n);
            if let Some(c) = m
                .solve(&Mat::column(f, next.flatten()))
                .expect("shapes agree")
            {
                let mut mu: Poly<F> = c.col(0).iter().map(|x| f.neg(x)).collect();
                mu.push(f.one());
                return mu;
            }
            powers.push(next);
        }
    }

    pub fn is_commutative_mod(&self, rad: &SpanSolver<F>) -> bool {
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                let c = a.mul(b).sub(&b.mul(a));
                let coords = self.coords(&c).expect("closed under products");
                if !rad.contains(&coords) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `A / rad A` is a division algebra.
    pub fn locality(&self) -> Result<Locality> {
        let f = &self.field;
        let d = self.dim();
        if d == 0 {
            return Ok(Locality::NotLocal);
        }
        let rad = self.radical_coords()?;
        let top = d - rad.cols();
        if top == 1 {
            return Ok(Locality::Local);
        }
        let rad_solver = SpanSolver::new(rad.clone());
        let commutative = self.is_commutative_mod(&rad_solver);
        match f.kind() {
            FieldKind::Prime(p) => {
                if !commutative {
                    // finite division rings are commutative
                    return Ok(Locality::NotLocal);
                }
                // A/rad is a product of fields; count them via the Frobenius
                // fixed space.
                let q = quotient_map(f, d, &rad);
                let mut cols = Vec::with_capacity(d);
                for (l, b) in self.basis.iter().enumerate() {
                    let mut c = self.coords(&b.pow(p)).expect("closed under products");
                    c[l] = f.sub(&c[l], &f.one());
                    cols.push(q.pi.apply(&c));
                }
                let frob = Mat::from_columns(f, q.dim(), &cols);
                let fixed = frob.kernel_basis().cols() - rad.cols();
                Ok(if fixed == 1 {
                    Locality::Local
                } else {
                    Locality::NotLocal
                })
            }
            FieldKind::Rationals => {
                if !commutative {
                    return Ok(Locality::Unknown);
                }
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                for a in self.candidates(&mut rng, 16) {
                    let mu = self.min_poly(&a);
                    let parts = poly::coprime_parts(f, &mu, &mut rng);
                    if parts.parts.len() >= 2 {
                        return Ok(Locality::NotLocal);
                    }
                    if let [(g, _)] = parts.parts.as_slice() {
                        if parts.complete && poly::degree(f, g) == Some(top) {
                            return Ok(Locality::Local);
                        }
                    }
                }
                Ok(Locality::Unknown)
            }
        }
    }

    /// Basis elements first, then random combinations.
    fn candidates(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<Mat<F>> {
        let mut out: Vec<Mat<F>> = self.basis.iter().take(count).cloned().collect();
        while out.len() < count {
            let c: Vec<F::Elem> = (0..self.dim())
                .map(|_| self.field.random_elem(rng))
                .collect();
            out.push(self.elem(&c));
        }
        out
    }

    /// The corner algebra `eAe` for an idempotent `e` of `A`.
    pub fn corner(&self, e: &Mat<F>) -> Self {
        let span: Vec<Mat<F>> = self.basis.iter().map(|b| e.mul(b).mul(e)).collect();
        Self::from_spanning(&self.field, &span, e.clone())
    }

    /// Orthogonal idempotents `e_i` with `a e_i` split by the coprime factors
    /// of the minimal polynomial of `a`; `None` if it has a single factor.
    pub fn split_by(&self, a: &Mat<F>, rng: &mut ChaCha8Rng) -> Option<Vec<Mat<F>>> {
        let f = &self.field;
        let mu = self.min_poly(a);
        let parts = poly::coprime_parts(f, &mu, rng);
        if parts.parts.len() < 2 {
            return None;
        }
        let powers = parts.prime_powers(f);
        let idems: Vec<Mat<F>> = powers
            .iter()
            .map(|q| {
                let cof = poly::divrem(f, &mu, q).0;
                let (g, u, _) = poly::ext_gcd(f, &cof, q);
                debug_assert_eq!(g, vec![f.one()]);
                let s = poly::rem(f, &poly::mul(f, &u, &cof), &mu);
                poly::eval_mat(f, &s, a, &self.unit)
            })
            .collect();
        Some(idems)
    }

    /// A complete set of primitive orthogonal idempotents summing to the
    /// unit. Deterministic for a given `seed`.
    pub fn primitive_idempotents(&self, seed: u64) -> Result<Vec<Mat<F>>> {
        check_field(&self.field, self.dim())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut work = vec![self.unit.clone()];
        let mut out = Vec::new();
        while let Some(e) = work.pop() {
            if e.is_zero() {
                continue;
            }
            let corner = self.corner(&e);
            let loc = corner.locality()?;
            if loc == Locality::Local {
                out.push(e);
                continue;
            }
            let mut split = None;
            for a in corner.candidates(&mut rng, SPLIT_TRIES) {
                if let Some(parts) = corner.split_by(&a, &mut rng) {
                    split = Some(parts);
                    break;
                }
            }
            match split {
                Some(parts) => {
                    verify_decomposition(&e, &parts)?;
                    // keep discovery order stable: process first part first
                    work.extend(parts.into_iter().rev());
                }
                None if loc == Locality::NotLocal => {
                    return Err(Error::SearchExhausted(format!(
                        "no splitting element among {SPLIT_TRIES} candidates in a corner of dimension {}",
                        corner.dim()
                    )))
                }
                None => {
                    return Err(Error::Unsupported(
                        "cannot decide locality of this endomorphism algebra over Q".into(),
                    ))
                }
            }
        }
        Ok(out)
    }
}

/// Checks that `parts` are orthogonal idempotents summing to `e`.
pub fn verify_decomposition<F: Field>(e: &Mat<F>, parts: &[Mat<F>]) -> Result<()> {
    let f = e.field();
    let mut sum = Mat::zeros(f, e.rows(), e.cols());
    for (i, a) in parts.iter().enumerate() {
        if a.mul(a) != *a {
            return Err(Error::NotIdempotent);
        }
        for (j, b) in parts.iter().enumerate() {
            if i != j && !a.mul(b).is_zero() {
                return Err(Error::VerificationFailed(
                    "idempotents are not orthogonal".into(),
                ));
            }
        }
        sum = sum.add(a);
    }
    if sum != *e {
        return Err(Error::VerificationFailed(
            "idempotents do not sum to the unit".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, Rationals};

    fn unit_matrix<F: Field>(f: &F, n: usize, r: usize, c: usize) -> Mat<F> {
        let mut m = Mat::zeros(f, n, n);
        m[(r, c)] = f.one();
        m
    }

    fn full_matrix_algebra<F: Field>(f: &F, n: usize) -> MatrixAlgebra<F> {
        let basis = (0..n * n)
            .map(|i| unit_matrix(f, n, i / n, i % n))
            .collect();
        MatrixAlgebra::new(f, basis, Mat::identity(f, n)).unwrap()
    }

    #[test]
    fn upper_triangular_radical() {
        let f = PrimeField::default();
        let basis = vec![
            unit_matrix(&f, 2, 0, 0),
            unit_matrix(&f, 2, 1, 1),
            unit_matrix(&f, 2, 0, 1),
        ];
        let a = MatrixAlgebra::new(&f, basis, Mat::identity(&f, 2)).unwrap();
        let rad = a.radical().unwrap();
        assert_eq!(rad, vec![unit_matrix(&f, 2, 0, 1)]);
        assert_eq!(a.locality().unwrap(), Locality::NotLocal);
        let idems = a.primitive_idempotents(7).unwrap();
        assert_eq!(idems.len(), 2);
        verify_decomposition(a.unit(), &idems).unwrap();
    }

    #[test]
    fn dual_numbers_are_local() {
        let f = PrimeField::new(5).unwrap();
        let x = unit_matrix(&f, 2, 1, 0);
        let a =
            MatrixAlgebra::new(&f, vec![Mat::identity(&f, 2), x], Mat::identity(&f, 2)).unwrap();
        assert_eq!(a.locality().unwrap(), Locality::Local);
        assert_eq!(a.primitive_idempotents(1).unwrap().len(), 1);
    }

    #[test]
    fn full_matrix_algebra_splits_into_rank_one() {
        let f = PrimeField::default();
        let a = full_matrix_algebra(&f, 4);
        assert!(a.radical().unwrap().is_empty());
        let idems = a.primitive_idempotents(3).unwrap();
        assert_eq!(idems.len(), 4);
        assert!(idems.iter().all(|e| e.rank() == 1));
    }

    #[test]
    fn small_field_is_rejected() {
        let f = PrimeField::new(3).unwrap();
        let a = full_matrix_algebra(&f, 2);
        assert_eq!(
            a.radical().unwrap_err(),
            Error::FieldTooSmall {
                found: 3,
                dim: 4,
                required: 5
            }
        );
    }

    #[test]
    fn field_extension_is_local() {
        // F_101[x]/(x^2 - 2) as 2x2 companion matrices
        let f = PrimeField::default();
        let c = Mat::from_i64(&f, &[&[0, 2], &[1, 0]]);
        let a =
            MatrixAlgebra::new(&f, vec![Mat::identity(&f, 2), c], Mat::identity(&f, 2)).unwrap();
        assert_eq!(a.locality().unwrap(), Locality::Local);
        // x^2 - 4 splits
        let c = Mat::from_i64(&f, &[&[0, 4], &[1, 0]]);
        let a =
            MatrixAlgebra::new(&f, vec![Mat::identity(&f, 2), c], Mat::identity(&f, 2)).unwrap();
        assert_eq!(a.locality().unwrap(), Locality::NotLocal);
        assert_eq!(a.primitive_idempotents(0).unwrap().len(), 2);
    }

    #[test]
    fn rational_matrix_algebra() {
        let q = Rationals;
        let a = full_matrix_algebra(&q, 3);
        let idems = a.primitive_idempotents(0).unwrap();
        assert_eq!(idems.len(), 3);
        let c = Mat::from_i64(&q, &[&[0, 2], &[1, 0]]);
        let b =
            MatrixAlgebra::new(&q, vec![Mat::identity(&q, 2), c], Mat::identity(&q, 2)).unwrap();
        assert_eq!(b.locality().unwrap(), Locality::Local);
    }
}
