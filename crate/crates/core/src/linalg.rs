//! Dense real linear algebra for the matrix sizes used here (n up to a few
//! hundred): Gaussian elimination with partial pivoting and a cyclic Jacobi
//! symmetric eigensolver.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

/// Pivots smaller than this (after partial pivoting) mark a singular system.
pub const PIVOT_TOLERANCE: f64 = 1e-12;
/// Symmetry tolerance accepted by [`sym_eigen`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the input's Frobenius norm.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix: pivot {pivot:e} in column {column}")]
    Singular { column: usize, pivot: f64 },
    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
}

/// Row-major dense matrix of `f64`.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        DenseMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest absolute entry (0 for an empty matrix).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Entrywise `max |self - other|`; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &f64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut f64 {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Solves `a * X = rhs` by Gaussian elimination with partial pivoting.
pub fn solve_linear(a: &DenseMatrix, rhs: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    if rhs.rows != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "system of order {n} with {} right-hand-side rows",
            rhs.rows
        )));
    }
    let mut lu = a.clone();
    let mut x = rhs.clone();
    let r = x.cols;

    for k in 0..n {
        let (pivot_row, pivot) = (k..n)
            .map(|i| (i, lu[(i, k)]))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("non-empty pivot range");
        if !(pivot.abs() >= PIVOT_TOLERANCE) {
            return Err(LinalgError::Singular { column: k, pivot });
        }
        if pivot_row != k {
            swap_rows(&mut lu, k, pivot_row);
            swap_rows(&mut x, k, pivot_row);
        }
        let (upper, lower) = lu.data.split_at_mut((k + 1) * n);
        let pivot_lu = &upper[k * n..];
        let (x_upper, x_lower) = x.data.split_at_mut((k + 1) * r);
        let pivot_x = &x_upper[k * r..];
        for (row, x_row) in lower.chunks_exact_mut(n).zip(x_lower.chunks_exact_mut(r)) {
            let factor = row[k] / pivot;
            if factor == 0.0 {
                continue;
            }
            row[k] = 0.0;
            for (v, &p) in row[k + 1..].iter_mut().zip(&pivot_lu[k + 1..]) {
                *v -= factor * p;
            }
            for (v, &p) in x_row.iter_mut().zip(pivot_x) {
                *v -= factor * p;
            }
        }
    }

    // back substitution, one solution row at a time
    for i in (0..n).rev() {
        let (head, tail) = x.data.split_at_mut((i + 1) * r);
        let xi = &mut head[i * r..];
        for j in i + 1..n {
            let coeff = lu[(i, j)];
            if coeff == 0.0 {
                continue;
            }
            for (v, &s) in xi.iter_mut().zip(&tail[(j - i - 1) * r..(j - i) * r]) {
                *v -= coeff * s;
            }
        }
        let d = lu[(i, i)];
        for v in xi.iter_mut() {
            *v /= d;
        }
    }
    Ok(x)
}

/// Matrix inverse via [`solve_linear`] against the identity.
pub fn invert(a: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    solve_linear(a, &DenseMatrix::identity(a.rows))
}

fn swap_rows(m: &mut DenseMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols;
    let (lo, hi) = (a.min(b), a.max(b));
    let (first, second) = m.data.split_at_mut(hi * cols);
    first[lo * cols..(lo + 1) * cols].swap_with_slice(&mut second[..cols]);
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Non-decreasing.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `values`.
    pub vectors: DenseMatrix,
}

impl SymEigen {
    /// `V diag(values) V^T`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.values.len();
        DenseMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)])
                .sum()
        })
    }
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
pub fn sym_eigen(a: &DenseMatrix) -> Result<SymEigen, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let n = a.rows;
    for i in 0..n {
        for j in i + 1..n {
            let diff = (a[(i, j)] - a[(j, i)]).abs();
            if !(diff <= SYMMETRY_TOLERANCE) {
                return Err(LinalgError::NotSymmetric { i, j, diff });
            }
        }
    }

    let mut m = a.clone();
    // rows of `vt` are eigenvectors, so rotations touch contiguous memory
    let mut vt = DenseMatrix::identity(n);
    let threshold = JACOBI_TOLERANCE * a.frobenius_norm();

    let off_norm = |m: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += m[(i, j)] * m[(i, j)];
            }
        }
        (2.0 * s).sqrt()
    };

    // round-robin ordering: each round rotates n/2 disjoint pairs, so all
    // of them can be taken from the same matrix state and applied as whole
    // row and column passes
    let slots = n + n % 2;
    let mut ring: Vec<usize> = (0..slots).collect();
    let mut rotations: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(slots / 2);

    let mut sweeps = 0;
    let mut off = off_norm(&m);
    while off > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for _round in 0..slots.saturating_sub(1) {
            rotations.clear();
            for i in 0..slots / 2 {
                let (a, b) = (ring[i], ring[slots - 1 - i]);
                if a >= n || b >= n {
                    continue;
                }
                let (p, q) = (a.min(b), a.max(b));
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                rotations.push((p, q, c, t * c));
            }
            if !rotations.is_empty() {
                let diagonals: Vec<(f64, f64)> = rotations
                    .iter()
                    .map(|&(p, q, c, s)| {
                        let t = s / c;
                        let apq = m[(p, q)];
                        (m[(p, p)] - t * apq, m[(q, q)] + t * apq)
                    })
                    .collect();
                for &(p, q, c, s) in &rotations {
                    rotate_rows(&mut m, p, q, c, s);
                    rotate_rows(&mut vt, p, q, c, s);
                }
                for row in m.data.chunks_exact_mut(n) {
                    for &(p, q, c, s) in &rotations {
                        let (a, b) = (row[p], row[q]);
                        row[p] = c * a - s * b;
                        row[q] = s * a + c * b;
                    }
                }
                for (&(p, q, _, _), &(dp, dq)) in rotations.iter().zip(&diagonals) {
                    m[(p, p)] = dp;
                    m[(q, q)] = dq;
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                }
            }
            // keep slot 0 fixed, rotate the rest one step
            ring[1..].rotate_right(1);
        }
        off = off_norm(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| vt[(order[c], r)]);
    Ok(SymEigen { values, vectors })
}

fn rotate_rows(vt: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = vt.cols;
    let (head, tail) = vt.data.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    for (vp, vq) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (a, b) = (*vp, *vq);
        *vp = c * a - s * b;
        *vq = s * a + c * b;
    }
}
