//! Dense exact linear algebra over any [`Field`].
//!
//! Vectors are plain `Vec<F::Elem>`. Pivoting always takes the first nonzero
//! entry so every result is deterministic.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> =
                (0..self.cols).map(|j| self.field.format_elem(self.get(i, j))).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| !field.contains(x)) {
            return Err(FieldError::FieldMismatch.into());
        }
        Ok(Self { field, rows, cols, data })
    }

    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Self { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, f: impl Fn(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &F, rows: &[Vec<F::Elem>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(field.clone(), rows.len(), cols, rows.concat())
    }

    /// Matrix whose columns are the given vectors of length `dim`.
    pub fn from_cols(field: &F, dim: usize, cols: &[Vec<F::Elem>]) -> Result<Self, LinalgError> {
        if cols.iter().any(|c| c.len() != dim) {
            return Err(LinalgError::DimensionMismatch("column length".into()));
        }
        Ok(Self::from_fn(field, dim, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F::Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<F::Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F::Elem>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        Ok(Self::from_fn(f, self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !f.is_zero(a) {
                    acc = f.add(&acc, &f.mul(a, other.get(k, j)));
                }
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch("vector length".into()));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(self.get(i, k), &v[k])))
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::DimensionMismatch("matrix sum".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Ok(Self { data, ..self.clone() })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let data = self.data.iter().map(|a| self.field.mul(a, c)).collect();
        Self { data, ..self.clone() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Columns `range` as a new matrix.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(&self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn hstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch("hstack".into()));
        }
        Ok(Self::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Entrywise image in another field, e.g. the embedding into `k(sqrt a)`.
    pub fn map<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> G::Elem) -> Matrix<G> {
        Matrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
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
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
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

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.cols];
                v[fc] = f.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self * x = b`, if the system is consistent.
    pub fn solve(&self, b: &[F::Elem]) -> Result<Option<Vec<F::Elem>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch("right-hand side".into()));
        }
        let f = &self.field;
        let aug = Self::from_fn(f, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn invert(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(Self::from_fn(&self.field, n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn det(&self) -> Result<F::Elem, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare);
        }
        let f = &self.field;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                return Ok(f.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = f.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot)?;
            for i in c + 1..m.rows {
                let factor = f.mul(m.get(i, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Returns `(P, D)` with `P^T S P = D` diagonal.
    pub fn diagonalize_congruence(&self) -> Result<(Self, Self), LinalgError> {
        if !self.is_symmetric() {
            return Err(LinalgError::NotSymmetric);
        }
        let f = &self.field;
        let n = self.rows;
        let mut a = self.clone();
        let mut p = Self::identity(f, n);
        for k in 0..n {
            let pivot = match (k..n).find(|&i| !f.is_zero(a.get(i, i))) {
                Some(i) => Some(i),
                None => {
                    let pair = (k..n).find_map(|i| {
                        (i + 1..n).find(|&j| !f.is_zero(a.get(i, j))).map(|j| (i, j))
                    });
                    pair.map(|(i, j)| {
                        // diagonal block is zero, so (e_i + e_j) has value 2 a_ij
                        congruence_add(&mut a, &mut p, j, i, &f.one());
                        i
                    })
                }
            };
            let Some(i) = pivot else { break };
            congruence_swap(&mut a, &mut p, i, k);
            let inv = f.inv(a.get(k, k))?;
            for r in k + 1..n {
                if f.is_zero(a.get(r, k)) {
                    continue;
                }
                let c = f.neg(&f.mul(a.get(r, k), &inv));
                congruence_add(&mut a, &mut p, k, r, &c);
            }
        }
        debug_assert_eq!(p.transpose().mul(self).unwrap().mul(&p).unwrap(), a);
        Ok((p, a))
    }
}

/// Replaces generator `dst` by `dst + c * src` in the form `a` and basis `p`.
fn congruence_add<F: Field>(a: &mut Matrix<F>, p: &mut Matrix<F>, src: usize, dst: usize, c: &F::Elem) {
    let f = a.field.clone();
    let n = a.rows;
    for i in 0..n {
        let v = f.add(a.get(i, dst), &f.mul(c, a.get(i, src)));
        a.set(i, dst, v);
    }
    for j in 0..n {
        let v = f.add(a.get(dst, j), &f.mul(c, a.get(src, j)));
        a.set(dst, j, v);
    }
    for i in 0..p.rows {
        let v = f.add(p.get(i, dst), &f.mul(c, p.get(i, src)));
        p.set(i, dst, v);
    }
}

fn congruence_swap<F: Field>(a: &mut Matrix<F>, p: &mut Matrix<F>, i: usize, k: usize) {
    if i == k {
        return;
    }
    a.swap_rows(i, k);
    for r in 0..a.rows {
        a.data.swap(r * a.cols + i, r * a.cols + k);
    }
    for r in 0..p.rows {
        p.data.swap(r * p.cols + i, r * p.cols + k);
    }
}

/// An invertible matrix whose columns are the new generators written in the
/// old ones.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange<F: Field> {
    matrix: Matrix<F>,
}

impl<F: Field> BasisChange<F> {
    pub fn new(matrix: Matrix<F>) -> Result<Self, LinalgError> {
        if !matrix.is_square() {
            return Err(LinalgError::NotSquare);
        }
        if matrix.rank() < matrix.rows() {
            return Err(LinalgError::Singular);
        }
        Ok(Self { matrix })
    }

    pub fn identity(field: &F, n: usize) -> Self {
        Self { matrix: Matrix::identity(field, n) }
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<F> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// The change that first applies `self` and then `next` (expressed in the
    /// generators produced by `self`).
    pub fn then(&self, next: &Self) -> Result<Self, LinalgError> {
        Ok(Self { matrix: self.matrix.mul(&next.matrix)? })
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.matrix.invert().expect("basis changes are invertible") }
    }
}

pub fn is_zero_vec<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

pub fn scale_vec<F: Field>(f: &F, c: &F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
    v.iter().map(|x| f.mul(c, x)).collect()
}

pub fn add_vec<F: Field>(f: &F, u: &[F::Elem], v: &[F::Elem]) -> Vec<F::Elem> {
    u.iter().zip(v).map(|(a, b)| f.add(a, b)).collect()
}

pub fn sub_vec<F: Field>(f: &F, u: &[F::Elem], v: &[F::Elem]) -> Vec<F::Elem> {
    u.iter().zip(v).map(|(a, b)| f.sub(a, b)).collect()
}

/// `u + c v`.
pub fn axpy<F: Field>(f: &F, u: &[F::Elem], c: &F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
    u.iter().zip(v).map(|(a, b)| f.add(a, &f.mul(c, b))).collect()
}

pub fn unit_vec<F: Field>(f: &F, n: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

/// Linear combination `sum c_i v_i` of vectors of length `n`.
pub fn combine<F: Field>(f: &F, n: usize, coeffs: &[F::Elem], vs: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); n];
    for (c, v) in coeffs.iter().zip(vs) {
        if !f.is_zero(c) {
            out = axpy(f, &out, c, v);
        }
    }
    out
}

/// Row-reduced basis of the span of `vs` in `k^n`.
pub fn span_basis<F: Field>(f: &F, n: usize, vs: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(f, vs.len(), n, |i, j| vs[i][j].clone());
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

pub fn span_dim<F: Field>(f: &F, n: usize, vs: &[Vec<F::Elem>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_fn(f, vs.len(), n, |i, j| vs[i][j].clone()).rank()
}

pub fn in_span<F: Field>(f: &F, n: usize, vs: &[Vec<F::Elem>], v: &[F::Elem]) -> bool {
    let mut all = vs.to_vec();
    all.push(v.to_vec());
    span_dim(f, n, &all) == span_dim(f, n, vs)
}

/// Coordinates of `v` in the (independent) family `basis`, if it lies in its
/// span.
pub fn coordinates<F: Field>(
    f: &F,
    n: usize,
    basis: &[Vec<F::Elem>],
    v: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    if basis.is_empty() {
        return is_zero_vec(f, v).then(Vec::new);
    }
    let m = Matrix::from_cols(f, n, basis).ok()?;
    m.solve(v).ok().flatten()
}

/// Basis of `span(a) ∩ span(b)`.
pub fn intersect<F: Field>(
    f: &F,
    n: usize,
    a: &[Vec<F::Elem>],
    b: &[Vec<F::Elem>],
) -> Vec<Vec<F::Elem>> {
    let a = span_basis(f, n, a);
    let b = span_basis(f, n, b);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // sum s_i a_i - sum t_j b_j = 0
    let mut cols = a.clone();
    cols.extend(b.iter().map(|v| v.iter().map(|x| f.neg(x)).collect::<Vec<_>>()));
    let m = Matrix::from_cols(f, n, &cols).expect("consistent lengths");
    let vs: Vec<Vec<F::Elem>> =
        m.kernel_basis().iter().map(|k| combine(f, n, &k[..a.len()], &a)).collect();
    span_basis(f, n, &vs)
}

/// Extends an independent family to a basis of `k^n` with standard vectors of
/// lowest index.
pub fn extend_to_basis<F: Field>(f: &F, n: usize, vs: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let mut out = vs.to_vec();
    let mut dim = span_dim(f, n, &out);
    for i in 0..n {
        if dim == n {
            break;
        }
        out.push(unit_vec(f, n, i));
        let d = span_dim(f, n, &out);
        if d > dim {
            dim = d;
        } else {
            out.pop();
        }
    }
    out
}

/// Complement of `span(vs)` made of standard vectors.
pub fn complement<F: Field>(f: &F, n: usize, vs: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let k = vs.len();
    extend_to_basis(f, n, vs).split_off(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q() -> RationalField {
        RationalField::Q
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(&q(), 2).rank(), 2);
        assert_eq!(Matrix::zeros(&q(), 3, 5).rank(), 0);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(Matrix::from_i64(&f5, &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(&q(), 3).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(&q(), 2, 3).kernel_basis().len(), 3);
        let m = Matrix::from_i64(&q(), &[&[1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&q(), &m.mul_vec(v).unwrap()));
        }
    }

    #[test]
    fn invert_examples() {
        let i = Matrix::identity(&q(), 3);
        assert_eq!(i.invert().unwrap(), i);
        let two = Matrix::from_i64(&q(), &[&[2]]);
        assert_eq!(*two.invert().unwrap().get(0, 0), BigRational::new(1.into(), 2.into()));
        assert_eq!(Matrix::from_i64(&q(), &[&[1, 2], &[2, 4]]).invert(), Err(LinalgError::Singular));
    }

    #[test]
    fn congruence_examples() {
        let d = Matrix::from_i64(&q(), &[&[1, 0, 0], &[0, -1, 0], &[0, 0, 0]]);
        let (p, dd) = d.diagonalize_congruence().unwrap();
        assert_eq!(p, Matrix::identity(&q(), 3));
        assert_eq!(dd, d);
        let h = Matrix::from_i64(&q(), &[&[0, 1], &[1, 0]]);
        let (p, dd) = h.diagonalize_congruence().unwrap();
        assert_eq!(p.transpose().mul(&h).unwrap().mul(&p).unwrap(), dd);
        // hyperbolic plane: discriminant class -1 and -d2/d1 a square, i.e.
        // isometric to diag(1, -1)
        let f = q();
        let disc = f.mul(dd.get(0, 0), dd.get(1, 1));
        assert_eq!(f.square_class(&disc).unwrap().representative, f.from_i64(-1));
        let ratio = f.neg(&f.div(dd.get(1, 1), dd.get(0, 0)).unwrap());
        assert!(f.is_square(&ratio).unwrap());
        assert_eq!(Matrix::from_i64(&q(), &[&[0, 1], &[2, 0]]).diagonalize_congruence().err(), Some(LinalgError::NotSymmetric));
    }

    #[test]
    fn subspace_helpers() {
        let f = q();
        let e = |i| unit_vec(&f, 4, i);
        let a = vec![e(0), e(1)];
        let b = vec![add_vec(&f, &e(1), &e(2)), e(0)];
        let i = intersect(&f, 4, &a, &b);
        assert_eq!(i, vec![e(0)]);
        let full = extend_to_basis(&f, 4, &[add_vec(&f, &e(0), &e(1))]);
        assert_eq!(full.len(), 4);
        assert_eq!(full[1], e(0));
        assert!(in_span(&f, 4, &a, &add_vec(&f, &e(0), &e(1))));
        assert!(!in_span(&f, 4, &a, &e(3)));
        let c = coordinates(&f, 4, &b, &e(0)).unwrap();
        assert_eq!(c, vec![f.zero(), f.one()]);
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-3i64..=3, rows * cols)
    }

    fn build<F: Field>(f: &F, rows: usize, cols: usize, v: &[i64]) -> Matrix<F> {
        Matrix::from_fn(f, rows, cols, |i, j| f.from_i64(v[i * cols + j]))
    }

    proptest! {
        #[test]
        fn rank_of_transpose(v in small_matrix(4, 6)) {
            let m = build(&q(), 4, 6, &v);
            prop_assert_eq!(m.rank(), m.transpose().rank());
            let f7 = PrimeField::new(7).unwrap();
            let m7 = build(&f7, 4, 6, &v);
            prop_assert_eq!(m7.rank(), m7.transpose().rank());
        }

        #[test]
        fn rank_of_product(a in small_matrix(4, 5), b in small_matrix(5, 3)) {
            let a = build(&q(), 4, 5, &a);
            let b = build(&q(), 5, 3, &b);
            let ab = a.mul(&b).unwrap();
            prop_assert!(ab.rank() <= a.rank().min(b.rank()));
        }

        #[test]
        fn kernel_vectors_are_annihilated(v in small_matrix(3, 6)) {
            let f5 = PrimeField::new(5).unwrap();
            for m in [build(&f5, 3, 6, &v)] {
                let k = m.kernel_basis();
                prop_assert_eq!(k.len(), 6 - m.rank());
                for x in &k {
                    prop_assert!(is_zero_vec(&f5, &m.mul_vec(x).unwrap()));
                }
            }
            let m = build(&q(), 3, 6, &v);
            for x in &m.kernel_basis() {
                prop_assert!(is_zero_vec(&q(), &m.mul_vec(x).unwrap()));
            }
        }

        #[test]
        fn inverse_over_f7(v in small_matrix(5, 5)) {
            let f7 = PrimeField::new(7).unwrap();
            let m = build(&f7, 5, 5, &v);
            match m.invert() {
                Ok(inv) => prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f7, 5)),
                Err(e) => {
                    prop_assert_eq!(e, LinalgError::Singular);
                    prop_assert!(f7.is_zero(&m.det().unwrap()));
                }
            }
        }

        #[test]
        fn congruence_is_exact(v in small_matrix(4, 4)) {
            let m = build(&q(), 4, 4, &v);
            let s = m.add(&m.transpose()).unwrap();
            let (p, d) = s.diagonalize_congruence().unwrap();
            prop_assert_eq!(p.transpose().mul(&s).unwrap().mul(&p).unwrap(), d.clone());
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        prop_assert!(q().is_zero(d.get(i, j)));
                    }
                }
            }
            prop_assert_eq!(d.rank(), s.rank());
            prop_assert!(!q().is_zero(&p.det().unwrap()));
        }

        #[test]
        fn det_is_multiplicative(a in small_matrix(3, 3), b in small_matrix(3, 3)) {
            let f = q();
            let a = build(&f, 3, 3, &a);
            let b = build(&f, 3, 3, &b);
            prop_assert_eq!(
                a.mul(&b).unwrap().det().unwrap(),
                f.mul(&a.det().unwrap(), &b.det().unwrap())
            );
        }
    }
}
