use std::fmt;

use crate::error::{Error, Result};

use super::field::Field;

/// Dense matrix over an exact field, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}{}", self.rows, self.cols, self)
    }
}

impl<F: Field> fmt::Display for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Mat<F> {
    type Output = F::Elem;
    fn index(&self, (r, c): (usize, usize)) -> &F::Elem {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Mat<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F::Elem {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "Mat::from_vec",
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from small integers, reducing into the field.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&v| field.from_i64(v))
            })
            .collect();
        Mat {
            field: field.clone(),
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn column(field: &F, entries: Vec<F::Elem>) -> Self {
        let n = entries.len();
        Mat {
            field: field.clone(),
            rows: n,
            cols: 1,
            data: entries,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
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
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }
    pub fn into_entries(self) -> Vec<F::Elem> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.field.is_zero(e))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(&self.field, self.rows)
    }

    pub fn row(&self, r: usize) -> Vec<F::Elem> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F::Elem>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matrix product {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "Mat::mul",
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        Ok(self.mul(other))
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for c in 0..self.cols {
                    let a = &self.data[r * self.cols + c];
                    if !f.is_zero(a) && !f.is_zero(&v[c]) {
                        acc = f.add(&acc, &f.mul(a, &v[c]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape");
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape");
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, s)).collect(),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: &F::Elem, other: &Self) {
        assert_eq!(self.shape(), other.shape());
        let f = self.field.clone();
        if f.is_zero(s) {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !f.is_zero(b) {
                *a = f.add(a, &f.mul(s, b));
            }
        }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Mat {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.neg(a)).collect(),
        }
    }

    pub fn trace(&self) -> F::Elem {
        let f = &self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, &self[(i, i)]))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Self::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(&self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(&self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn hstack(field: &F, rows: usize, parts: &[&Self]) -> Self {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack rows");
            m.set_block(0, c0, p);
            c0 += p.cols;
        }
        m
    }

    pub fn vstack(field: &F, cols: usize, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Self::zeros(field, rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack cols");
            m.set_block(r0, 0, p);
            r0 += p.rows;
        }
        m
    }

    pub fn block_diag(field: &F, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            m.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        m
    }

    /// Kronecker product; block `(i, j)` is `self[i][j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut m = Self::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = f.mul(a, &other[(k, l)]);
                    }
                }
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(&m[(i, c)])) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(&m[(r, c)]).expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = f.mul(&m[(r, j)], &inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)].clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.mul(&factor, &m[(r, j)]);
                    m[(i, j)] = f.sub(&m[(i, j)], &v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical null-space basis as the columns of the result: one vector per
    /// free column, with a 1 in that column and zeros in the other free columns.
    pub fn kernel_basis(&self) -> Self {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k[(fc, j)] = f.one();
            for (i, &pc) in pivots.iter().enumerate() {
                k[(pc, j)] = f.neg(&r[(i, fc)]);
            }
        }
        k
    }

    /// Some `x` with `self * x = b`, free variables set to zero; `None` when
    /// the system is inconsistent.
    pub fn solve(&self, b: &Self) -> Result<Option<Self>> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch {
                op: "solve",
                expected: format!("{} rows", self.rows),
                found: format!("{} rows", b.rows),
            });
        }
        let f = &self.field;
        let aug = Self::hstack(f, self.rows, &[self, b]);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(f, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(pc, j)] = r[(i, self.cols + j)].clone();
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let x = self
            .solve(&Self::identity(&self.field, self.rows))
            .ok()
            .flatten()?;
        if self.mul(&x).is_identity() {
            Some(x)
        } else {
            None
        }
    }

    /// Basis of the column space, taken from the rref of the transpose so it
    /// does not depend on which spanning set was given.
    pub fn column_space(&self) -> Self {
        let (r, pivots) = self.transpose().rref();
        let rows: Vec<usize> = (0..pivots.len()).collect();
        let cols: Vec<usize> = (0..r.cols).collect();
        r.submatrix(&rows, &cols).transpose()
    }

    /// Flattened entries (row-major) as a single column.
    pub fn flatten(&self) -> Vec<F::Elem> {
        self.data.clone()
    }

    pub fn is_nilpotent(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        self.pow(self.rows.max(1) as u64).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::PrimeField;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn rref_rank_one() {
        let f = f5();
        let m = Mat::from_i64(&f, &[&[1, 2], &[2, 4]]);
        let (r, p) = m.rref();
        assert_eq!(r, Mat::from_i64(&f, &[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_identity_and_swap() {
        let f = PrimeField::new(3).unwrap();
        let i3 = Mat::identity(&f, 3);
        assert_eq!(i3.rref(), (i3.clone(), vec![0, 1, 2]));
        // hand reduction: swap rows
        let m = Mat::from_i64(&f, &[&[0, 1], &[1, 0]]);
        assert_eq!(m.rref().0, Mat::identity(&f, 2));
    }

    #[test]
    fn solve_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let a = Mat::from_i64(&f2, &[&[1, 1]]);
        let b = Mat::from_i64(&f2, &[&[1]]);
        // enumerate all four candidates: solutions are (1,0) and (0,1); the
        // free variable x2 is zero in the canonical choice
        let sols: Vec<(i64, i64)> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .into_iter()
            .filter(|&(x, y)| (x + y) % 2 == 1)
            .collect();
        assert_eq!(sols, vec![(0, 1), (1, 0)]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x, Mat::from_i64(&f2, &[&[1], &[0]]));

        let f = f5();
        let zero = Mat::from_i64(&f, &[&[0]]);
        assert_eq!(zero.solve(&Mat::from_i64(&f, &[&[1]])).unwrap(), None);
        let i2 = Mat::identity(&f, 2);
        let b = Mat::from_i64(&f, &[&[3, 1], &[4, 2]]);
        assert_eq!(i2.solve(&b).unwrap().unwrap(), b);
        assert!(matches!(
            i2.solve(&Mat::zeros(&f, 3, 1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kernel_examples() {
        let f = f5();
        let z = Mat::zeros(&f, 2, 2);
        assert_eq!(z.kernel_basis(), Mat::identity(&f, 2));
        assert_eq!(Mat::identity(&f, 3).kernel_basis().cols(), 0);
        let m = Mat::from_i64(&f, &[&[1, 2]]);
        // enumerate F_5^2: the kernel is {t*(3,1)}
        let kernel: Vec<(i64, i64)> = (0..5)
            .flat_map(|x| (0..5).map(move |y| (x, y)))
            .filter(|&(x, y)| (x + 2 * y) % 5 == 0)
            .collect();
        assert_eq!(kernel.len(), 5);
        assert!(kernel.contains(&(3, 1)));
        assert_eq!(m.kernel_basis(), Mat::from_i64(&f, &[&[3], &[1]]));
    }

    #[test]
    fn kron_examples() {
        let f = f5();
        assert_eq!(
            Mat::identity(&f, 2).kron(&Mat::identity(&f, 3)),
            Mat::identity(&f, 6)
        );
        let m = Mat::from_i64(&f, &[&[1, 2], &[3, 4]]);
        assert_eq!(Mat::from_i64(&f, &[&[2]]).kron(&m), m.scale(&2));
        let row = Mat::from_i64(&f, &[&[1, 1]]);
        let col = Mat::from_i64(&f, &[&[1], &[1]]);
        assert_eq!(row.kron(&col), Mat::from_i64(&f, &[&[1, 1], &[1, 1]]));
    }

    #[test]
    fn column_space_is_canonical() {
        let f = f5();
        let a = Mat::from_i64(&f, &[&[1, 2], &[1, 2], &[0, 0]]);
        let b = Mat::from_i64(&f, &[&[3], &[3], &[0]]);
        assert_eq!(a.column_space(), b.column_space());
        assert_eq!(a.column_space().cols(), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let f = f5();
        let m = Mat::from_i64(&f, &[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(Mat::from_i64(&f, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
