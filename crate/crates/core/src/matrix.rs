//! Dense matrices over an exact field and the rref-based kernels everything
//! else is built on. All bases returned here are canonical: they depend only
//! on the input matrix (or on the subspace, for `image_basis`).

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.field.to_json(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_vec(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    /// Builds a matrix from integer rows, reducing into the field.
    pub fn from_i64_rows(field: F, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&v| field.from_i64(v))
            })
            .collect();
        Matrix { field, rows: r, cols: c, data }
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let cols = columns.len();
        Self::from_fn(field, rows, cols, |i, j| columns[j][i].clone())
    }

    pub fn random<R: Rng + ?Sized>(field: F, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    pub fn field(&self) -> F {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F::Elem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                let orow = other.row(k);
                let base = i * out.cols;
                for (j, b) in orow.iter().enumerate() {
                    if !f.is_zero(b) {
                        let t = f.mul(a, b);
                        out.data[base + j] = f.add(&out.data[base + j], &t);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let f = self.field;
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field;
        let data = self.data.iter().map(|a| f.mul(a, c)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        let data = self.data.iter().map(|a| f.neg(a)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let f = self.field;
        Self::from_fn(f, self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                f.zero()
            }
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !f.is_zero(&self.data[i * cols + c])) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(&self.data[r * cols + c]).expect("pivot is nonzero");
            if !f.is_one(&inv) {
                for j in c..cols {
                    self.data[r * cols + j] = f.mul(&self.data[r * cols + j], &inv);
                }
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (prow, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [F::Elem]| {
                let factor = row[c].clone();
                if f.is_zero(&factor) {
                    return;
                }
                for j in c..cols {
                    if !f.is_zero(&prow[j]) {
                        let t = f.mul(&factor, &prow[j]);
                        row[j] = f.sub(&row[j], &t);
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the null space, one per free column of the rref,
    /// in increasing order of the free column.
    pub fn kernel_basis(&self) -> Self {
        let f = self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (t, &j) in free.iter().enumerate() {
            k.set(j, t, f.one());
            for (i, &p) in pivots.iter().enumerate() {
                k.set(p, t, f.neg(r.get(i, j)));
            }
        }
        k
    }

    /// Canonical basis of the column space: the transposed nonzero rows of
    /// `rref(selfᵀ)`.
    pub fn image_basis(&self) -> Self {
        let (r, pivots) = self.transpose().rref();
        r.select_rows(&(0..pivots.len()).collect::<Vec<_>>()).transpose()
    }

    /// A solution of `self · x = b` with all free variables zero, or `None`.
    pub fn solve(&self, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let aug = self.hstack(&Self::from_columns(self.field, self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Solves `self · X = B` column by column.
    pub fn solve_matrix(&self, b: &Self) -> Result<Option<Self>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch("solve_matrix row mismatch".into()));
        }
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(self.field, self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, r.get(i, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_matrix(&Self::identity(self.field, self.rows)).ok()??;
        (self.mul(&x) == Self::identity(self.field, self.rows)).then_some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Canonical basis of `span(u) ∩ span(v)` (columns of the ambient space).
pub fn subspace_intersection<F: Field>(u: &Matrix<F>, v: &Matrix<F>) -> Result<Matrix<F>> {
    if u.rows() != v.rows() {
        return Err(Error::DimensionMismatch("subspaces live in different ambient spaces".into()));
    }
    let f = u.field();
    let k = u.hstack(&v.neg()).kernel_basis();
    let coeffs = k.block(0, 0, u.cols(), k.cols());
    let w = u.mul(&coeffs);
    if w.cols() == 0 {
        return Ok(Matrix::zeros(f, u.rows(), 0));
    }
    Ok(w.image_basis())
}

/// Surjection `q: F^n → F^{n−k}` with `ker q = span(u)` together with a section
/// `s` satisfying `q·s = id`. The columns of `u` must be independent.
pub fn quotient_map<F: Field>(ambient: usize, u: &Matrix<F>) -> Result<(Matrix<F>, Matrix<F>)> {
    let f = u.field();
    if u.rows() != ambient {
        return Err(Error::DimensionMismatch(format!("subspace vectors of length {} in ambient dimension {ambient}", u.rows())));
    }
    let (r, pivots) = u.transpose().rref();
    if pivots.len() != u.cols() {
        return Err(Error::DependentColumns);
    }
    let mut is_pivot = vec![false; ambient];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let complement: Vec<usize> = (0..ambient).filter(|&j| !is_pivot[j]).collect();
    let mut q = Matrix::zeros(f, complement.len(), ambient);
    let mut s = Matrix::zeros(f, ambient, complement.len());
    for (c, &j) in complement.iter().enumerate() {
        q.set(c, j, f.one());
        s.set(j, c, f.one());
        for (i, &p) in pivots.iter().enumerate() {
            q.set(c, p, f.neg(r.get(i, j)));
        }
    }
    Ok((q, s))
}

/// True if every column of `v` lies in the column space of `u`.
pub fn column_space_contains<F: Field>(u: &Matrix<F>, v: &Matrix<F>) -> bool {
    if v.cols() == 0 {
        return true;
    }
    u.rank() == u.hstack(v).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_zero_and_identity() {
        let z = Matrix::zeros(f(5), 2, 2);
        assert_eq!(z.rref(), (z.clone(), vec![]));
        let i = Matrix::identity(f(5), 3);
        assert_eq!(i.rref(), (i.clone(), vec![0, 1, 2]));
    }

    #[test]
    fn rref_hand_reduction_f5() {
        let m = Matrix::from_i64_rows(f(5), &[&[2, 4], &[1, 2]]);
        let (r, p) = m.rref();
        assert_eq!(r, Matrix::from_i64_rows(f(5), &[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(f(2), 2).kernel_basis().cols(), 0);
        let k = Matrix::zeros(f(3), 2, 3).kernel_basis();
        assert_eq!(k, Matrix::identity(f(3), 3));
        let k = Matrix::from_i64_rows(f(2), &[&[1, 1]]).kernel_basis();
        assert_eq!(k, Matrix::from_i64_rows(f(2), &[&[1], &[1]]));
    }

    #[test]
    fn quotient_of_coordinate_line() {
        let u = Matrix::from_i64_rows(f(7), &[&[1], &[0]]);
        let (q, s) = quotient_map(2, &u).unwrap();
        assert_eq!(q, Matrix::from_i64_rows(f(7), &[&[0, 1]]));
        assert_eq!(s, Matrix::from_i64_rows(f(7), &[&[0], &[1]]));
        let dep = Matrix::from_i64_rows(f(7), &[&[1, 2], &[0, 0]]);
        assert_eq!(quotient_map(2, &dep), Err(Error::DependentColumns));
    }

    #[test]
    fn intersection_of_axes_is_empty() {
        let u = Matrix::from_i64_rows(f(3), &[&[1], &[0]]);
        let v = Matrix::from_i64_rows(f(3), &[&[0], &[1]]);
        assert_eq!(subspace_intersection(&u, &v).unwrap().cols(), 0);
    }

    #[test]
    fn solve_back_substitution_f3() {
        let m = Matrix::from_i64_rows(f(3), &[&[1, 1], &[0, 1]]);
        assert_eq!(m.solve(&[1, 1]).unwrap(), Some(vec![0, 1]));
        let sing = Matrix::from_i64_rows(f(3), &[&[1, 1], &[1, 1]]);
        assert_eq!(sing.solve(&[1, 0]).unwrap(), None);
        assert!(m.solve(&[1]).is_err());
    }

    #[test]
    fn rational_inverse() {
        let q = Rationals;
        let m = Matrix::from_i64_rows(q, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(q, 2));
        assert_eq!(inv, Matrix::from_i64_rows(q, &[&[1, -1], &[-1, 2]]));
    }

    #[test]
    fn image_basis_is_canonical() {
        let a = Matrix::from_i64_rows(f(5), &[&[1, 2], &[1, 2], &[0, 0]]);
        let b = Matrix::from_i64_rows(f(5), &[&[3], &[3], &[0]]);
        assert_eq!(a.image_basis(), b.image_basis());
    }
}
