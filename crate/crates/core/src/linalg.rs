//! Small dense linear algebra, generic over the scalar type.
//!
//! Sizes here are tiny (a few dozen rows at most), so everything is
//! row-major `Vec` storage with straightforward loops.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; `None` when rows are ragged.
    pub fn from_rows(rows: &[Vec<T>]) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return None;
        }
        Some(Matrix { rows: r, cols: c, data: rows.concat() })
    }

    pub fn diag(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
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

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Submatrix with the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn principal(&self, idx: &[usize]) -> Self {
        self.select(idx, idx)
    }

    /// Copies `block` into position (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix<T>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Largest |a_ij - a_ji|.
    pub fn asymmetry(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.rows {
            for j in 0..i {
                m = m.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        m
    }

    pub fn symmetrized(&self) -> Self {
        let half = T::lit(0.5);
        Matrix::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)]) * half)
    }

    /// Determinant by LU with partial pivoting (any square matrix).
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = T::one();
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].abs();
            for i in k + 1..n {
                let v = a[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == T::zero() {
                return T::zero();
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = a[k * n + k];
            det *= piv;
            for i in k + 1..n {
                let l = a[i * n + k] / piv;
                if l == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = a[k * n + j];
                    a[i * n + j] -= l * u;
                }
            }
        }
        det
    }

    /// Determinant of a symmetric matrix by Bunch–Kaufman LDLᵀ with
    /// symmetric pivoting (1×1 and 2×2 diagonal pivots). Only the lower
    /// triangle is read.
    pub fn sym_det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = Matrix::from_fn(n, n, |i, j| if i >= j { self[(i, j)] } else { self[(j, i)] });
        let alpha = (T::one() + T::lit(17.0).sqrt()) / T::lit(8.0);
        let mut det = T::one();
        let mut k = 0;
        while k < n {
            let absakk = a[(k, k)].abs();
            let mut imax = k;
            let mut colmax = T::zero();
            for i in k + 1..n {
                let v = a[(i, k)].abs();
                if v > colmax {
                    colmax = v;
                    imax = i;
                }
            }
            if absakk.max(colmax) == T::zero() {
                return T::zero();
            }
            let (kp, kstep) = if absakk >= alpha * colmax {
                (k, 1)
            } else {
                let mut rowmax = T::zero();
                for j in k..n {
                    if j != imax {
                        rowmax = rowmax.max(a[(imax, j)].abs());
                    }
                }
                if absakk * rowmax >= alpha * colmax * colmax {
                    (k, 1)
                } else if a[(imax, imax)].abs() >= alpha * rowmax {
                    (imax, 1)
                } else {
                    (imax, 2)
                }
            };
            let kk = k + kstep - 1;
            if kp != kk {
                a.swap_sym(kk, kp);
            }
            if kstep == 1 {
                let d = a[(k, k)];
                det *= d;
                for i in k + 1..n {
                    let l = a[(i, k)] / d;
                    for j in k + 1..=i {
                        let v = a[(i, j)] - l * a[(j, k)];
                        a[(i, j)] = v;
                        a[(j, i)] = v;
                    }
                }
            } else {
                let d11 = a[(k, k)];
                let d21 = a[(k + 1, k)];
                let d22 = a[(k + 1, k + 1)];
                let dd = d11 * d22 - d21 * d21;
                det *= dd;
                for i in k + 2..n {
                    let (ui, vi) = (a[(i, k)], a[(i, k + 1)]);
                    // [ui vi] D⁻¹
                    let wi = (d22 * ui - d21 * vi) / dd;
                    let zi = (d11 * vi - d21 * ui) / dd;
                    for j in k + 2..=i {
                        let v = a[(i, j)] - wi * a[(j, k)] - zi * a[(j, k + 1)];
                        a[(i, j)] = v;
                        a[(j, i)] = v;
                    }
                }
            }
            k += kstep;
        }
        det
    }

    fn swap_sym(&mut self, p: usize, q: usize) {
        let n = self.rows;
        for j in 0..n {
            self.data.swap(p * n + j, q * n + j);
        }
        for i in 0..n {
            self.data.swap(i * n + p, i * n + q);
        }
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let scale = self.max_abs();
        if scale == T::zero() {
            return None;
        }
        for k in 0..n {
            let mut p = k;
            for i in k + 1..n {
                if a[(i, k)].abs() > a[(p, k)].abs() {
                    p = i;
                }
            }
            if a[(p, k)].abs() <= T::epsilon() * scale * T::lit(1e-3) {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                    inv.data.swap(k * n + j, p * n + j);
                }
            }
            let piv = a[(k, k)];
            for j in 0..n {
                a[(k, j)] /= piv;
                inv[(k, j)] /= piv;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let l = a[(i, k)];
                if l == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let (akj, ikj) = (a[(k, j)], inv[(k, j)]);
                    a[(i, j)] -= l * akj;
                    inv[(i, j)] -= l * ikj;
                }
            }
        }
        Some(inv)
    }

    /// Lower Cholesky factor; `None` unless the matrix is numerically
    /// positive definite.
    pub fn cholesky(&self) -> Option<Self> {
        let n = self.rows;
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > T::zero()) {
                return None;
            }
            let dj = d.sqrt();
            l[(j, j)] = dj;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / dj;
            }
        }
        Some(l)
    }

    /// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
    /// Returns eigenvalues in ascending order and the matching eigenvectors
    /// as columns.
    pub fn sym_eigen(&self) -> (Vec<T>, Matrix<T>) {
        let n = self.rows;
        let mut a = self.symmetrized();
        let mut v = Matrix::identity(n);
        let eps = T::epsilon();
        for _sweep in 0..100 {
            let mut off = T::zero();
            let mut total = T::zero();
            for i in 0..n {
                for j in 0..n {
                    let x = a[(i, j)] * a[(i, j)];
                    total += x;
                    if i != j {
                        off += x;
                    }
                }
            }
            if off <= eps * eps * total || off == T::zero() {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[(k, p)], a[(k, q)]);
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
        let vals = order.iter().map(|&i| a[(i, i)]).collect();
        let vecs = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
        (vals, vecs)
    }

    pub fn sym_eigenvalues(&self) -> Vec<T> {
        self.sym_eigen().0
    }

    /// Singular values (descending) by one-sided Jacobi, which keeps small
    /// singular values accurate relative to the largest.
    pub fn singular_values(&self) -> Vec<T> {
        let (m, n) = (self.rows, self.cols);
        let mut u = self.clone();
        let eps = T::epsilon();
        for _sweep in 0..100 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), T::zero());
                    for i in 0..m {
                        let (a, b) = (u[(i, p)], u[(i, q)]);
                        alpha += a * a;
                        beta += b * b;
                        gamma += a * b;
                    }
                    if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let c = T::one() / (T::one() + t * t).sqrt();
                    let s = c * t;
                    for i in 0..m {
                        let (a, b) = (u[(i, p)], u[(i, q)]);
                        u[(i, p)] = c * a - s * b;
                        u[(i, q)] = s * a + c * b;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<T> = (0..n).map(|j| (0..m).map(|i| u[(i, j)] * u[(i, j)]).sum::<T>().sqrt()).collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        sv
    }

    /// Number of singular values above `rel_tol · σ_max`.
    pub fn numeric_rank(&self, rel_tol: T) -> usize {
        let sv = self.singular_values();
        let smax = sv.first().copied().unwrap_or(T::zero());
        if smax == T::zero() {
            return 0;
        }
        sv.iter().filter(|&&s| s > rel_tol * smax).count()
    }

    /// Symmetric matrix with the eigenvalues clipped from below at `floor`.
    pub fn clip_eigenvalues(&self, floor: T) -> Self {
        let (vals, vecs) = self.sym_eigen();
        let n = self.rows;
        Matrix::from_fn(n, n, |i, j| (0..n).map(|k| vecs[(i, k)] * vals[k].max(floor) * vecs[(j, k)]).sum())
    }

    /// Converts to another scalar type through `f64`.
    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| U::lit(v.as_f64())).collect() }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}
