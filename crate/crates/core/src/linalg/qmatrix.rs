use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Dense row-major matrix over ℚ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Output of [`rref_solve`].
#[derive(Clone, Debug)]
pub struct RrefSolve {
    pub rref: QMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
    pub kernel_basis: QMatrix,
    pub solution: Option<Vec<Q>>,
}

/// Row reduction of `a`, a kernel basis, and a particular solution of `a·x = b` when `b` is given.
pub fn rref_solve(a: &QMatrix, b: Option<&[Q]>) -> Result<RrefSolve> {
    if let Some(b) = b {
        if b.len() != a.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has {} entries, matrix has {} rows",
                b.len(),
                a.rows
            )));
        }
    }
    let r = a.rref();
    let kernel_basis = a.kernel_from_rref(&r);
    let solution = b.and_then(|b| a.solve(b));
    Ok(RrefSolve {
        rank: r.rank(),
        rref: r.matrix,
        pivots: r.pivots,
        kernel_basis,
        solution,
    })
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        QMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        QMatrix { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Q::from_int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn column(v: &[Q]) -> Self {
        Self::from_vec(v.len(), 1, v.to_vec())
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

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        out[(i, j)] += p;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> QMatrix {
        self.scale(&Q::from_int(-1))
    }

    /// Adds `c·other` in place.
    pub fn add_scaled(&mut self, c: &Q, other: &QMatrix) {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add_scaled");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn kron(&self, other: &QMatrix) -> QMatrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation; all blocks need the same row count.
    pub fn hstack(blocks: &[&QMatrix], rows: usize) -> QMatrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            out.set_block(0, off, b);
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation; all blocks need the same column count.
    pub fn vstack(blocks: &[&QMatrix], cols: usize) -> QMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            out.set_block(off, 0, b);
            off += b.rows;
        }
        out
    }

    pub fn block_diag(blocks: &[&QMatrix]) -> QMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &QMatrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> QMatrix {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> QMatrix {
        let mut out = Self::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> QMatrix {
        let mut out = Self::zeros(idx.len(), self.cols);
        for (ii, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out[(ii, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form. Pivot rows are taken first-eligible in column order.
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
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            if !inv.is_one() {
                for j in c..m.cols {
                    let x = &m[(r, j)] * &inv;
                    m[(r, j)] = x;
                }
            }
            let pivot_row: Vec<Q> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for (off, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        let x = &m[(i, c + off)] - &(&f * pv);
                        m[(i, c + off)] = x;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    fn kernel_from_rref(&self, r: &Rref) -> QMatrix {
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &p in &r.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let mut k = Self::zeros(n, free.len());
        for (t, &f) in free.iter().enumerate() {
            k[(f, t)] = Q::one();
            for (row, &p) in r.pivots.iter().enumerate() {
                let v = &r.matrix[(row, f)];
                if !v.is_zero() {
                    k[(p, t)] = -v;
                }
            }
        }
        k
    }

    /// Columns form a basis of the null space.
    pub fn kernel(&self) -> QMatrix {
        let r = self.rref();
        self.kernel_from_rref(&r)
    }

    /// Pivot columns of `self`, a basis of the column space.
    pub fn image(&self) -> QMatrix {
        let r = self.rref();
        self.select_cols(&r.pivots)
    }

    /// Rows span the left null space: `K·self = 0`.
    pub fn annihilator(&self) -> QMatrix {
        self.transpose().kernel().transpose()
    }

    /// A particular solution of `self·x = b` with free variables zero.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let aug = QMatrix::hstack(&[self, &QMatrix::column(b)], self.rows);
        let r = aug.rref();
        if r.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (row, &p) in r.pivots.iter().enumerate() {
            x[p] = r.matrix[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Solves `self·X = b` column by column in one elimination.
    pub fn solve_many(&self, b: &QMatrix) -> Option<QMatrix> {
        assert_eq!(b.rows, self.rows, "right-hand side row mismatch");
        let aug = QMatrix::hstack(&[self, b], self.rows);
        let r = aug.rref();
        if r.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (row, &p) in r.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r.matrix[(row, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_many(&QMatrix::identity(self.rows))?;
        if self.mul(&x) == QMatrix::identity(self.rows) {
            Some(x)
        } else {
            None
        }
    }

    /// `L` with `L·self = I`; requires full column rank.
    pub fn left_inverse(&self) -> Option<QMatrix> {
        self.transpose()
            .solve_many(&QMatrix::identity(self.cols))
            .map(|x| x.transpose())
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = piv.recip();
            for i in c + 1..n {
                let f = &m[(i, c)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let x = &m[(i, j)] - &(&f * &m[(c, j)]);
                    m[(i, j)] = x;
                }
            }
        }
        det
    }

    /// True when every column of `other` lies in the column space of `self`.
    pub fn spans(&self, other: &QMatrix) -> bool {
        self.solve_many(other).is_some()
    }

    /// Same column space.
    pub fn same_span(&self, other: &QMatrix) -> bool {
        self.rows == other.rows && self.spans(other) && other.spans(self)
    }
}

/// Coordinates on the quotient `ℚⁿ / span(W)`.
///
/// `proj` maps ambient vectors to quotient coordinates with kernel exactly
/// `span(W)`; `section` lifts quotient coordinates back, `proj·section = I`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub proj: QMatrix,
    pub section: QMatrix,
}

impl Quotient {
    pub fn new(w: &QMatrix) -> Quotient {
        let n = w.rows();
        let basis = w.image();
        let r = basis.cols();
        // complete the basis with unit vectors outside the pivot set of Wᵀ
        let piv = basis.transpose().rref().pivots;
        let mut in_piv = vec![false; n];
        for p in piv {
            in_piv[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&i| !in_piv[i]).collect();
        let mut section = QMatrix::zeros(n, free.len());
        for (t, &i) in free.iter().enumerate() {
            section[(i, t)] = Q::one();
        }
        let full = QMatrix::hstack(&[&basis, &section], n);
        let inv = full.inverse().expect("completed basis is invertible");
        let proj = inv.block(r, 0, n - r, n);
        Quotient { proj, section }
    }

    pub fn dim(&self) -> usize {
        self.proj.rows()
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn identity_solve() {
        let r = rref_solve(&QMatrix::identity(2), Some(&[q(1), q(2)])).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.kernel_basis.cols(), 0);
        assert_eq!(r.solution.unwrap(), vec![q(1), q(2)]);
    }

    #[test]
    fn rank_one_kernel() {
        let a = QMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        let r = rref_solve(&a, None).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel_basis, QMatrix::from_i64(&[&[-2], &[1]]));
    }

    #[test]
    fn inconsistent() {
        let a = QMatrix::from_i64(&[&[1], &[0]]);
        let r = rref_solve(&a, Some(&[q(0), q(1)])).unwrap();
        assert!(r.solution.is_none());
        assert!(rref_solve(&a, Some(&[q(0)])).is_err());
    }

    #[test]
    fn empty_shapes() {
        let a = QMatrix::zeros(0, 3);
        assert_eq!(a.kernel().cols(), 3);
        let b = QMatrix::zeros(3, 0);
        assert_eq!(b.kernel().cols(), 0);
        assert_eq!(b.solve(&[q(0), q(0), q(0)]), Some(vec![]));
        assert_eq!(b.solve(&[q(1), q(0), q(0)]), None);
    }

    #[test]
    fn quotient_coordinates() {
        let w = QMatrix::from_i64(&[&[1], &[1], &[0]]);
        let qt = Quotient::new(&w);
        assert_eq!(qt.dim(), 2);
        assert!(qt.proj.mul(&w).is_zero());
        assert_eq!(qt.proj.mul(&qt.section), QMatrix::identity(2));
    }

    #[test]
    fn det_and_inverse() {
        let a = QMatrix::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.det(), q(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
