//! Dense exact matrices over the Gaussian rationals.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::scalar::{Gq, Rational};
use crate::error::AlgebraError;

#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Gq>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Gq::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Gq::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Gq) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    /// Builds from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Gq>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_rational_rows(rows: &[Vec<Rational>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().cloned().map(Gq::real).collect()).collect())
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Gq::from_int(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Gq>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows));
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn diagonal(entries: &[Gq]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
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

    pub fn row(&self, i: usize) -> &[Gq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Gq> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Gq>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Gq::is_real)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Gq)> {
        let c = self.cols;
        self.data.iter().enumerate().map(move |(k, v)| (k / c.max(1), k % c.max(1), v))
    }

    pub fn same_shape(&self, o: &ExactMatrix) -> bool {
        self.rows == o.rows && self.cols == o.cols
    }

    pub fn add(&self, o: &ExactMatrix) -> ExactMatrix {
        assert!(self.same_shape(o), "add: {}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &ExactMatrix) -> ExactMatrix {
        assert!(self.same_shape(o), "sub: {}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols);
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Gq) -> ExactMatrix {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|a| if a.is_zero() { Gq::zero() } else { a * s }).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> ExactMatrix {
        let data = self.data.iter().map(|a| -a).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Product `self * o`, skipping zero entries of `self`.
    pub fn mul(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, o.rows, "mul: {}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k * o.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out.data[i * o.cols + j] += &prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Gq]) -> Vec<Gq> {
        assert_eq!(self.cols, v.len(), "mul_vec: {}x{} * {}", self.rows, self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Gq::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> ExactMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> ExactMatrix {
        let data = self.data.iter().map(Gq::conj).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn vstack(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        ExactMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, o: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                o[(i, j - self.cols)].clone()
            }
        })
    }

    /// Sub-matrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Reduced row echelon form. The pivot in each column is the first
    /// non-zero entry at or below the current row, so the result (and every
    /// basis derived from it) is deterministic.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] = &m[(r, j)] * &inv;
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let t = &f * &m[(r, j)];
                    m[(i, j)] -= &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Canonical kernel basis: one vector per free column of the RREF, with a
    /// one in that free position.
    pub fn nullspace(&self) -> Vec<Vec<Gq>> {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Gq::zero(); self.cols];
                v[f] = Gq::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&matrix[(r, f)];
                }
                v
            })
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn inverse(&self) -> Result<ExactMatrix, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n)).rref();
        if aug.pivots.len() < n || aug.pivots[n - 1] != n - 1 {
            return Err(AlgebraError::Singular);
        }
        let idx: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(aug.matrix.select(&idx, &cols))
    }

    /// Determinant by fraction-based Gaussian elimination.
    pub fn det(&self) -> Result<Gq, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Gq::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Gq::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = &det * &piv;
            let inv = piv.inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    if m[(c, j)].is_zero() {
                        continue;
                    }
                    let t = &f * &m[(c, j)];
                    m[(i, j)] -= &t;
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(xI - M)` via reduction to upper
    /// Hessenberg form by exact similarity transforms.
    pub fn char_poly(&self) -> Result<Poly, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            if h[(c + 1, c)].is_zero() {
                if let Some(r) = (c + 2..n).find(|&r| !h[(r, c)].is_zero()) {
                    h.swap_rows(r, c + 1);
                    h.swap_cols(r, c + 1);
                } else {
                    continue;
                }
            }
            let inv = h[(c + 1, c)].inv();
            for r in c + 2..n {
                if h[(r, c)].is_zero() {
                    continue;
                }
                let u = &h[(r, c)] * &inv;
                for j in 0..n {
                    if !h[(c + 1, j)].is_zero() {
                        let t = &u * &h[(c + 1, j)];
                        h[(r, j)] -= &t;
                    }
                }
                for i in 0..n {
                    if !h[(i, r)].is_zero() {
                        let t = &u * &h[(i, r)];
                        h[(i, c + 1)] += &t;
                    }
                }
            }
        }
        // p[m] is the characteristic polynomial of the leading m x m block.
        let mut p: Vec<Poly> = vec![Poly::one()];
        for m in 1..=n {
            let mi = m - 1;
            let mut next = Poly::x_minus(&h[(mi, mi)]).mul(&p[m - 1]);
            let mut t = Gq::one();
            for i in 1..m {
                t = &t * &h[(mi - i + 1, mi - i)];
                if t.is_zero() {
                    break;
                }
                let coeff = &t * &h[(mi - i, mi)];
                if !coeff.is_zero() {
                    next = next.sub(&p[m - i - 1].scale(&coeff));
                }
            }
            p.push(next);
        }
        Ok(p.pop().unwrap())
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Gq;
    fn index(&self, (i, j): (usize, usize)) -> &Gq {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Gq {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rank of a family of vectors of common length `len`.
pub fn span_rank(len: usize, vectors: &[Vec<Gq>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    ExactMatrix::from_columns(len, vectors).rank()
}

/// True when `span(a) == span(b)`.
pub fn same_span(len: usize, a: &[Vec<Gq>], b: &[Vec<Gq>]) -> bool {
    let ra = span_rank(len, a);
    let rb = span_rank(len, b);
    if ra != rb {
        return false;
    }
    let all: Vec<Vec<Gq>> = a.iter().chain(b).cloned().collect();
    span_rank(len, &all) == ra
}

/// True when `span(a)` is contained in `span(b)`.
pub fn span_contains(len: usize, b: &[Vec<Gq>], a: &[Vec<Gq>]) -> bool {
    let rb = span_rank(len, b);
    let all: Vec<Vec<Gq>> = b.iter().chain(a).cloned().collect();
    span_rank(len, &all) == rb
}

/// Basis of the intersection of two subspaces given by spanning sets.
pub fn span_intersection(len: usize, a: &[Vec<Gq>], b: &[Vec<Gq>]) -> Vec<Vec<Gq>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // x = A s = B t  <=>  [A | -B] (s,t) = 0
    let ma = ExactMatrix::from_columns(len, a);
    let mb = ExactMatrix::from_columns(len, b);
    let ker = ma.hstack(&mb.neg()).nullspace();
    let vecs: Vec<Vec<Gq>> = ker.iter().map(|st| ma.mul_vec(&st[..a.len()])).collect();
    independent_subset(len, &vecs)
}

/// Greedy linearly independent subset, preserving order.
pub fn independent_subset(len: usize, vectors: &[Vec<Gq>]) -> Vec<Vec<Gq>> {
    let mut kept: Vec<Vec<Gq>> = Vec::new();
    for v in vectors {
        let mut trial = kept.clone();
        trial.push(v.clone());
        if span_rank(len, &trial) == trial.len() {
            kept = trial;
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::{int, rat};

    #[test]
    fn nullspace_examples() {
        assert!(ExactMatrix::identity(2).nullspace().is_empty());
        let z = ExactMatrix::zeros(3, 3).nullspace();
        assert_eq!(z.len(), 3);
        assert_eq!(z[0], vec![Gq::one(), Gq::zero(), Gq::zero()]);
        let m = ExactMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(m.nullspace(), vec![vec![Gq::from_int(-1), Gq::one()]]);
    }

    #[test]
    fn char_poly_examples() {
        let id = ExactMatrix::identity(2).char_poly().unwrap();
        assert_eq!(id.coeffs(), &[Gq::one(), Gq::from_int(-2), Gq::one()]);
        let zero = ExactMatrix::zeros(2, 2).char_poly().unwrap();
        assert_eq!(zero.coeffs(), &[Gq::zero(), Gq::zero(), Gq::one()]);
        let swap = ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]]).char_poly().unwrap();
        assert_eq!(swap.coeffs(), &[Gq::from_int(-1), Gq::zero(), Gq::one()]);
        assert!(ExactMatrix::zeros(2, 3).char_poly().is_err());
    }

    #[test]
    fn inverse_and_det() {
        let m = ExactMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det().unwrap(), Gq::one());
        assert_eq!(m.mul(&m.inverse().unwrap()), ExactMatrix::identity(2));
        let s = ExactMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(AlgebraError::Singular));
        let c = ExactMatrix::from_rows(vec![vec![Gq::i(), Gq::zero()], vec![Gq::zero(), Gq::real(rat(1, 2))]]);
        assert_eq!(c.det().unwrap(), Gq::new(int(0), rat(1, 2)));
    }

    #[test]
    fn span_helpers() {
        let e = |i: usize| {
            let mut v = vec![Gq::zero(); 3];
            v[i] = Gq::one();
            v
        };
        let a = vec![e(0), e(1)];
        let b = vec![e(1), e(2)];
        let inter = span_intersection(3, &a, &b);
        assert_eq!(inter.len(), 1);
        assert!(same_span(3, &inter, &[e(1)]));
        assert!(span_contains(3, &a, &[e(0)]));
        assert!(!span_contains(3, &a, &[e(2)]));
    }
}
