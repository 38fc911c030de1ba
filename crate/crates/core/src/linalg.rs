//! Dense row-major matrices and the few factorizations the learners need.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major `f64` matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Wraps a row-major buffer. Fails when the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Parameter(alloc::format!(
                "buffer of length {} cannot form a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Parameter(alloc::format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Single-column matrix.
    pub fn column_vector(values: &[f64]) -> Self {
        Self { rows: values.len(), cols: 1, data: values.to_vec() }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major backing buffer.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Mutable row-major storage.
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Mutable row `i`.
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Iterator over rows.
    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    /// Copy of column `j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Overwrites column `j`.
    pub fn set_column(&mut self, j: usize, values: &[f64]) {
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    /// Transposed copy.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Parameter(alloc::format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let out_row = out.row_mut(i);
                for (o, b) in out_row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// New matrix made of the listed rows, in order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: indices.len(), cols: self.cols, data }
    }

    /// New matrix made of the listed columns, in order.
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.rows);
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(indices.iter().map(|&j| row[j]));
        }
        Self { rows: self.rows, cols: indices.len(), data }
    }

    /// Per-column arithmetic means.
    pub fn column_means(&self) -> Vec<f64> {
        let mut means = vec![0.0; self.cols];
        for row in self.iter_rows() {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        let n = self.rows.max(1) as f64;
        means.iter_mut().for_each(|m| *m /= n);
        means
    }

    /// Population covariance (divides by `n`) of the columns.
    pub fn covariance(&self) -> Matrix {
        let means = self.column_means();
        let d = self.cols;
        let mut cov = Matrix::zeros(d, d);
        let mut centered = vec![0.0; d];
        for row in self.iter_rows() {
            for j in 0..d {
                centered[j] = row[j] - means[j];
            }
            for a in 0..d {
                let ca = centered[a];
                for b in a..d {
                    cov.data[a * d + b] += ca * centered[b];
                }
            }
        }
        let n = self.rows.max(1) as f64;
        for a in 0..d {
            for b in a..d {
                let v = cov.data[a * d + b] / n;
                cov.data[a * d + b] = v;
                cov.data[b * d + a] = v;
            }
        }
        cov
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dot product of equal-length slices.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Squared Euclidean distance.
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Euclidean distance.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, matching `values`.
    pub vectors: Matrix,
    /// Number of full Jacobi sweeps performed.
    pub sweeps: usize,
}

impl SymmetricEigen {
    /// Eigenvector `k` as an owned vector.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }
}

const JACOBI_RELATIVE_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Sweeps over all off-diagonal pairs until every off-diagonal entry is
/// below `1e-12` times the Frobenius norm. Eigenvectors are sign-normalized
/// so that their largest-magnitude component is positive.
pub fn symmetric_eigen(a: &Matrix) -> Result<SymmetricEigen> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::Parameter("eigen-decomposition needs a square matrix".into()));
    }
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let threshold = JACOBI_RELATIVE_TOL * a.frobenius_norm();
    let mut sweeps = 0;

    while sweeps < JACOBI_MAX_SWEEPS {
        let mut max_off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                max_off = max_off.max(m.data[p * n + q].abs());
            }
        }
        if max_off <= threshold {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.data[p * n + q];
                if apq.abs() <= threshold {
                    continue;
                }
                let app = m.data[p * n + p];
                let aqq = m.data[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = m.data[r * n + p];
                    let arq = m.data[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    m.data[r * n + p] = new_rp;
                    m.data[p * n + r] = new_rp;
                    m.data[r * n + q] = new_rq;
                    m.data[q * n + r] = new_rq;
                }
                m.data[p * n + p] = app - t * apq;
                m.data[q * n + q] = aqq + t * apq;
                m.data[p * n + q] = 0.0;
                m.data[q * n + p] = 0.0;

                for r in 0..n {
                    let vrp = v.data[r * n + p];
                    let vrq = v.data[r * n + q];
                    v.data[r * n + p] = c * vrp - s * vrq;
                    v.data[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    if sweeps == JACOBI_MAX_SWEEPS {
        log::warn!("Jacobi eigensolver hit the sweep limit ({JACOBI_MAX_SWEEPS})");
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.data[i * n + i].total_cmp(&m.data[j * n + j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m.data[i * n + i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        let pivot = col
            .iter()
            .enumerate()
            .fold((0usize, 0.0f64), |best, (i, x)| if x.abs() > best.1 { (i, x.abs()) } else { best })
            .0;
        if col.get(pivot).is_some_and(|x| *x < 0.0) {
            col.iter_mut().for_each(|x| *x = -*x);
        }
        vectors.set_column(dst, &col);
    }
    Ok(SymmetricEigen { values, vectors, sweeps })
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`.
///
/// Fails with [`Error::Numerical`] when `A` is not positive definite.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::Parameter("Cholesky needs a square matrix".into()));
    }
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[(i, j)];
            for k in 0..j {
                sum -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return Err(Error::Numerical(alloc::format!(
                        "matrix is not positive definite (pivot {i} = {sum})"
                    )));
                }
                l[(i, i)] = sum.sqrt();
            } else {
                l[(i, j)] = sum / l[(j, j)];
            }
        }
    }
    Ok(l)
}

/// Solves `L Lᵀ x = b` given the Cholesky factor `L`.
pub fn cholesky_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Solves `L y = b` (forward substitution only).
pub fn forward_substitute(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

/// Solves a symmetric positive-definite system.
pub fn solve_spd(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let l = cholesky(a)?;
    Ok(cholesky_solve(&l, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn jacobi_two_by_two() {
        let a = Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let e = symmetric_eigen(&a).unwrap();
        assert!(approx(e.values[0], 1.0, 1e-12));
        assert!(approx(e.values[1], 3.0, 1e-12));
        let v = e.vector(1);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!(approx(v[0], h, 1e-12) && approx(v[1], h, 1e-12));
    }

    #[test]
    fn jacobi_reconstructs() {
        let a = Matrix::from_rows(&[
            [4.0, 1.0, -2.0, 2.0],
            [1.0, 2.0, 0.0, 1.0],
            [-2.0, 0.0, 3.0, -2.0],
            [2.0, 1.0, -2.0, -1.0],
        ])
        .unwrap();
        let e = symmetric_eigen(&a).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let r: f64 = (0..4).map(|k| e.vectors[(i, k)] * e.values[k] * e.vectors[(j, k)]).sum();
                assert!(approx(r, a[(i, j)], 1e-10), "({i},{j}) {r} vs {}", a[(i, j)]);
            }
        }
        // trace preserved
        let tr: f64 = e.values.iter().sum();
        assert!(approx(tr, 8.0, 1e-10));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&a), Err(Error::Numerical(_))));
    }

    #[test]
    fn spd_solve() {
        let a = Matrix::from_rows(&[[4.0, 2.0], [2.0, 3.0]]).unwrap();
        let x = solve_spd(&a, &[2.0, 1.0]).unwrap();
        assert!(approx(4.0 * x[0] + 2.0 * x[1], 2.0, 1e-12));
        assert!(approx(2.0 * x[0] + 3.0 * x[1], 1.0, 1e-12));
    }

    #[test]
    fn from_vec_checks_length() {
        assert!(Matrix::from_vec(2, 2, vec![1.0; 3]).is_err());
    }
}
