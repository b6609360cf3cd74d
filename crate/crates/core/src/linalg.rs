//! Dense row-major matrices and a rank-revealing least-squares solver.
//!
//! The solver factors `A = Q R` with Householder reflections and then runs a
//! one-sided Jacobi SVD on the small triangular factor. Singular values below
//! `rcond * sigma_max` are treated as zero, which yields the minimum-norm
//! least-squares solution `A⁺ b`.

use std::ops::{Index, IndexMut};

use crate::{Error, Result, Scalar};

/// Relative cutoff below which singular values count as zero.
pub const DEFAULT_RCOND: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    pub fn column(values: &[T]) -> Self {
        Self { rows: values.len(), cols: 1, data: values.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col_to_vec(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// Thin singular value decomposition `A = U diag(s) Vᵀ`, `s` descending.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: Matrix<T>,
    pub singular_values: Vec<T>,
    pub v: Matrix<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn new(a: &Matrix<T>) -> Self {
        if a.rows >= a.cols {
            svd_tall(a)
        } else {
            let s = svd_tall(&a.transpose());
            Svd { u: s.v, singular_values: s.singular_values, v: s.u }
        }
    }

    /// Numerical rank at relative cutoff `rcond`.
    pub fn rank(&self, rcond: T) -> usize {
        let cutoff = self.cutoff(rcond);
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    fn cutoff(&self, rcond: T) -> T {
        rcond * self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    /// Computes `A⁺ B` without forming `A⁺`.
    pub fn solve(&self, b: &Matrix<T>, rcond: T) -> Result<Matrix<T>> {
        let utb = self.u.transpose().matmul(b)?;
        let cutoff = self.cutoff(rcond);
        let mut scaled = utb;
        for (k, &s) in self.singular_values.iter().enumerate() {
            let inv = if s > cutoff { T::one() / s } else { T::zero() };
            for x in scaled.row_mut(k) {
                *x *= inv;
            }
        }
        self.v.matmul(&scaled)
    }

    pub fn pseudoinverse(&self, rcond: T) -> Matrix<T> {
        let m = self.u.rows;
        self.solve(&Matrix::identity(m), rcond).expect("shapes agree by construction")
    }
}

/// Moore-Penrose pseudoinverse with the default cutoff.
pub fn pseudoinverse<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    Svd::new(a).pseudoinverse(T::lit(DEFAULT_RCOND))
}

/// Minimum-norm least-squares solution of `A X ≈ B`.
pub fn least_squares<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, found: b.rows });
    }
    Svd::new(a).solve(b, T::lit(DEFAULT_RCOND))
}

fn svd_tall<T: Scalar>(a: &Matrix<T>) -> Svd<T> {
    let (reflectors, r) = householder_qr(a);
    let (ur, s, v) = jacobi_svd(&r);
    // U = Q [Ur; 0]
    let mut u = Matrix::zeros(a.rows, a.cols);
    for i in 0..a.cols {
        u.row_mut(i).copy_from_slice(ur.row(i));
    }
    apply_q(&reflectors, &mut u);
    Svd { u, singular_values: s, v }
}

/// Householder QR of a tall matrix. Returns the reflectors (each stored as a
/// unit vector acting on rows `k..m`) and the square upper-triangular factor.
fn householder_qr<T: Scalar>(a: &Matrix<T>) -> (Vec<Vec<T>>, Matrix<T>) {
    let (m, n) = (a.rows, a.cols);
    let mut work = a.clone();
    let mut reflectors = Vec::with_capacity(n);
    let two = T::lit(2.0);
    for k in 0..n {
        let mut v: Vec<T> = (k..m).map(|i| work[(i, k)]).collect();
        let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm == T::zero() {
            reflectors.push(Vec::new());
            continue;
        }
        let alpha = if v[0] >= T::zero() { -norm } else { norm };
        v[0] -= alpha;
        let vnorm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if vnorm == T::zero() {
            reflectors.push(Vec::new());
            continue;
        }
        for x in &mut v {
            *x /= vnorm;
        }
        for c in k..n {
            let dot: T = (k..m).map(|i| v[i - k] * work[(i, c)]).sum();
            for i in k..m {
                let delta = two * v[i - k] * dot;
                work[(i, c)] -= delta;
            }
        }
        reflectors.push(v);
    }
    let mut r = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            r[(i, j)] = work[(i, j)];
        }
    }
    (reflectors, r)
}

/// Overwrites `b` with `Q b`.
fn apply_q<T: Scalar>(reflectors: &[Vec<T>], b: &mut Matrix<T>) {
    let two = T::lit(2.0);
    for (k, v) in reflectors.iter().enumerate().rev() {
        if v.is_empty() {
            continue;
        }
        for c in 0..b.cols {
            let dot: T = v.iter().enumerate().map(|(i, &vi)| vi * b[(k + i, c)]).sum();
            for (i, &vi) in v.iter().enumerate() {
                b[(k + i, c)] -= two * vi * dot;
            }
        }
    }
}

/// One-sided (Hestenes) Jacobi SVD. Returns `(U, s, V)` with `A = U diag(s) Vᵀ`.
fn jacobi_svd<T: Scalar>(a: &Matrix<T>) -> (Matrix<T>, Vec<T>, Matrix<T>) {
    let (m, n) = (a.rows, a.cols);
    // Column-major working copy: columns are what get orthogonalized.
    let mut cols: Vec<Vec<T>> = (0..n).map(|c| a.col_to_vec(c)).collect();
    let mut vcols: Vec<Vec<T>> = (0..n)
        .map(|c| (0..n).map(|r| if r == c { T::one() } else { T::zero() }).collect())
        .collect();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = cols[p].iter().zip(&cols[q]).fold(
                    (T::zero(), T::zero(), T::zero()),
                    |(a, b, g), (&x, &y)| (a + x * x, b + y * y, g + x * y),
                );
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (two * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut vcols, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<T> = cols.iter().map(|c| c.iter().map(|&x| x * x).sum::<T>().sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));

    let mut u = Matrix::zeros(m, n);
    let mut v = Matrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let sigma = norms[j];
        s.push(sigma);
        if sigma > T::zero() {
            for r in 0..m {
                u[(r, k)] = cols[j][r] / sigma;
            }
        }
        for r in 0..n {
            v[(r, k)] = vcols[j][r];
        }
    }
    (u, s, v)
}

fn rotate<T: Scalar>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix<f64>, b: &Matrix<f64>, tol: f64) -> bool {
        a.sub(b).unwrap().max_abs() <= tol
    }

    #[test]
    fn svd_reconstructs_tall_and_wide() {
        let a = Matrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![4.0, 5.0, 6.0],
            vec![7.0, 8.0, 10.0],
            vec![-1.0, 0.5, 2.0],
        ])
        .unwrap();
        for m in [a.clone(), a.transpose()] {
            let svd = Svd::new(&m);
            let k = svd.singular_values.len();
            let mut sigma = Matrix::zeros(k, k);
            for i in 0..k {
                sigma[(i, i)] = svd.singular_values[i];
            }
            let back = svd.u.matmul(&sigma).unwrap().matmul(&svd.v.transpose()).unwrap();
            assert!(close(&back, &m, 1e-12));
            assert!(svd.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn pseudoinverse_of_rank_deficient_matrix() {
        // Second column is twice the first.
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]).unwrap();
        let svd = Svd::new(&a);
        assert_eq!(svd.rank(1e-10), 1);
        let pinv = svd.pseudoinverse(1e-10);
        let aa = a.matmul(&pinv).unwrap().matmul(&a).unwrap();
        assert!(close(&aa, &a, 1e-12));
        let pp = pinv.matmul(&a).unwrap().matmul(&pinv).unwrap();
        assert!(close(&pp, &pinv, 1e-12));
    }

    #[test]
    fn least_squares_matches_normal_equation() {
        // y = 2 + 3x + noise, solved as [1 x] beta.
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let ys = [2.1, 4.9, 8.2, 10.8, 14.1];
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![1.0, x]).collect();
        let a = Matrix::from_rows(&rows).unwrap();
        let beta = least_squares(&a, &Matrix::column(&ys)).unwrap();
        let n = xs.len() as f64;
        let (sx, sy) = (xs.iter().sum::<f64>(), ys.iter().sum::<f64>());
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        assert!((beta[(0, 0)] - intercept).abs() < 1e-12);
        assert!((beta[(1, 0)] - slope).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let a = Matrix::from_rows(&[vec![2.0f32, 0.0], vec![0.0, 3.0], vec![0.0, 0.0]]).unwrap();
        let x = least_squares(&a, &Matrix::column(&[4.0f32, 9.0, 1.0])).unwrap();
        assert!((x[(0, 0)] - 2.0).abs() < 1e-6);
        assert!((x[(1, 0)] - 3.0).abs() < 1e-6);
    }
}
