//! Dense complex linear algebra: LU with partial pivoting, multi-RHS solves,
//! determinant and a power-iteration estimate of the 2-norm condition number.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

/// Pivots smaller than this fraction of the largest entry are treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-13;

const COND_TOLERANCE: f64 = 1e-6;
const COND_MAX_ITERATIONS: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is singular to working precision: pivot {index} has modulus {modulus:e} (threshold {threshold:e})")]
    SingularMatrix {
        index: usize,
        modulus: f64,
        threshold: f64,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Column vector from a slice.
    pub fn column(values: &[Complex64]) -> Self {
        Self::from_fn(values.len(), 1, |i, _| values[i])
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                axpy(out_row, a, rhs.row(k));
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `‖self − other‖_max`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// `y ← y − a·x`, the inner kernel of every elimination step.
#[inline]
fn axpy_sub(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    // Split re/im arithmetic so the loop vectorizes.
    let (ar, ai) = (a.re, a.im);
    for (yi, xi) in y.iter_mut().zip(x) {
        let (xr, xim) = (xi.re, xi.im);
        yi.re -= ar * xr - ai * xim;
        yi.im -= ar * xim + ai * xr;
    }
}

#[inline]
fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `PA = LU` with unit lower `L` and upper `U` packed into one matrix.
#[derive(Debug, Clone)]
pub struct LuFactor {
    lu: DenseMatrix,
    perm: Vec<usize>,
    sign: f64,
    smallest_pivot: (usize, f64),
    scale: f64,
}

impl LuFactor {
    /// Factorizes without checking pivots; used where a singular matrix is a
    /// valid input (determinant).
    pub fn new_unchecked(a: &DenseMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::DimensionMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows, a.cols
            )));
        }
        let n = a.rows;
        let scale = a.max_abs();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut smallest = (0usize, f64::INFINITY);

        for k in 0..n {
            let (p, pmod) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if p != k {
                let (head, tail) = lu.data.split_at_mut(p * n);
                head[k * n..(k + 1) * n].swap_with_slice(&mut tail[..n]);
                perm.swap(k, p);
                sign = -sign;
            }
            if pmod < smallest.1 {
                smallest = (k, pmod);
            }
            if pmod == 0.0 {
                continue;
            }
            let pivot_inv = lu[(k, k)].inv();
            let (upper, lower) = lu.data.split_at_mut((k + 1) * n);
            let pivot_row = &upper[k * n + k + 1..(k + 1) * n];
            for row in lower.chunks_exact_mut(n) {
                let l = row[k] * pivot_inv;
                row[k] = l;
                if l != Complex64::new(0.0, 0.0) {
                    axpy_sub(&mut row[k + 1..], l, pivot_row);
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            sign,
            smallest_pivot: smallest,
            scale,
        })
    }

    /// Factorizes and rejects pivots below `PIVOT_TOLERANCE · max|a_ij|`.
    pub fn new(a: &DenseMatrix) -> Result<Self, LinalgError> {
        let f = Self::new_unchecked(a)?;
        let threshold = PIVOT_TOLERANCE * f.scale;
        let (index, modulus) = f.smallest_pivot;
        if modulus <= threshold || f.scale == 0.0 {
            return Err(LinalgError::SingularMatrix {
                index,
                modulus,
                threshold,
            });
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    /// Index and modulus of the smallest pivot encountered.
    pub fn smallest_pivot(&self) -> (usize, f64) {
        self.smallest_pivot
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.dim();
        (0..n).fold(Complex64::new(self.sign, 0.0), |acc, i| {
            acc * self.lu[(i, i)]
        })
    }

    /// Solves `A X = B` for every column of `B`.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        let n = self.dim();
        if b.rows != n {
            return Err(LinalgError::DimensionMismatch(format!(
                "right-hand side has {} rows, system has {n}",
                b.rows
            )));
        }
        let m = b.cols;
        let mut x = DenseMatrix::zeros(n, m);
        for (i, &pi) in self.perm.iter().enumerate() {
            x.row_mut(i).copy_from_slice(b.row(pi));
        }
        // Forward: L y = P b.
        for k in 0..n {
            let (done, rest) = x.data.split_at_mut((k + 1) * m);
            let xk = &done[k * m..];
            for (offset, row) in rest.chunks_exact_mut(m).enumerate() {
                let l = self.lu[(k + 1 + offset, k)];
                if l != Complex64::new(0.0, 0.0) {
                    axpy_sub(row, l, xk);
                }
            }
        }
        // Backward: U x = y.
        for k in (0..n).rev() {
            let inv = self.lu[(k, k)].inv();
            let (head, tail) = x.data.split_at_mut(k * m);
            let xk = &mut tail[..m];
            for v in xk.iter_mut() {
                *v *= inv;
            }
            for (i, row) in head.chunks_exact_mut(m).enumerate() {
                let u = self.lu[(i, k)];
                if u != Complex64::new(0.0, 0.0) {
                    axpy_sub(row, u, xk);
                }
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        Ok(self.solve(&DenseMatrix::column(b))?.data)
    }

    /// Solves `Aᴴ x = b` using the same factorization.
    pub fn solve_adjoint_vec(&self, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        let n = self.dim();
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch(format!(
                "right-hand side has {} rows, system has {n}",
                b.len()
            )));
        }
        // Aᴴ = Uᴴ Lᴴ P, so solve Uᴴ z = b, Lᴴ w = z, x = Pᵀ w.
        let mut z = b.to_vec();
        for i in 0..n {
            let s: Complex64 = (0..i).map(|j| self.lu[(j, i)].conj() * z[j]).sum();
            z[i] = (z[i] - s) / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let s: Complex64 = (i + 1..n).map(|j| self.lu[(j, i)].conj() * z[j]).sum();
            z[i] -= s;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (i, &pi) in self.perm.iter().enumerate() {
            x[pi] = z[i];
        }
        Ok(x)
    }
}

/// Solves `A X = B` with partial pivoting.
pub fn lu_solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    LuFactor::new(a)?.solve(b)
}

/// Determinant from the LU pivots; a singular matrix gives zero up to rounding.
pub fn determinant(a: &DenseMatrix) -> Result<Complex64, LinalgError> {
    Ok(LuFactor::new_unchecked(a)?.determinant())
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn start_vector(n: usize) -> Vec<Complex64> {
    // Irregular phases so the start is not orthogonal to a structured
    // dominant singular vector.
    let v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(1.0 + 0.1 * (i % 7) as f64, 0.7 * i as f64))
        .collect();
    let s = norm(&v);
    v.into_iter().map(|z| z / s).collect()
}

/// Largest eigenvalue of a Hermitian positive semidefinite operator by power
/// iteration; stops when the estimate changes by less than `COND_TOLERANCE`
/// relatively.
fn power_iteration<F>(n: usize, mut apply: F) -> Result<f64, LinalgError>
where
    F: FnMut(&[Complex64]) -> Result<Vec<Complex64>, LinalgError>,
{
    let mut x = start_vector(n);
    let mut estimate = 0.0;
    for _ in 0..COND_MAX_ITERATIONS {
        let y = apply(&x)?;
        let next = norm(&y);
        if next == 0.0 {
            return Ok(0.0);
        }
        x = y.into_iter().map(|z| z / next).collect();
        if (next - estimate).abs() <= COND_TOLERANCE * next {
            return Ok(next);
        }
        estimate = next;
    }
    Ok(estimate)
}

/// `‖A‖₂` by power iteration on `AᴴA`.
pub fn norm2_estimate(a: &DenseMatrix) -> f64 {
    let adj = a.adjoint();
    power_iteration(a.cols, |x| Ok(adj.matvec(&a.matvec(x))))
        .expect("forward power iteration is infallible")
        .sqrt()
}

/// `κ₂(A) = ‖A‖₂‖A⁻¹‖₂`, both norms by power iteration (the inverse side via
/// repeated LU solves).
pub fn cond2_estimate(a: &DenseMatrix) -> Result<f64, LinalgError> {
    let lu = LuFactor::new(a)?;
    cond2_with_factor(a, &lu)
}

pub fn cond2_with_factor(a: &DenseMatrix, lu: &LuFactor) -> Result<f64, LinalgError> {
    let forward = norm2_estimate(a);
    let inverse = power_iteration(a.rows, |x| {
        let z = lu.solve_vec(x)?;
        lu.solve_adjoint_vec(&z)
    })?
    .sqrt();
    Ok(forward * inverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn identity_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = random_matrix(&mut rng, 3, 2);
        let x = lu_solve(&DenseMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        let a = DenseMatrix::from_diagonal(&[c(2.0, 0.0), c(0.0, 1.0)]);
        let b = DenseMatrix::column(&[c(2.0, 0.0), c(0.0, 1.0)]);
        let x = lu_solve(&a, &b).unwrap();
        assert!(x.max_abs_diff(&DenseMatrix::column(&[c(1.0, 0.0), c(1.0, 0.0)])) < 1e-15);
    }

    #[test]
    fn recovers_constructed_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let a = random_matrix(&mut rng, 20, 20);
        let x_true = random_matrix(&mut rng, 20, 3);
        let b = a.matmul(&x_true).unwrap();
        let x = lu_solve(&a, &b).unwrap();
        assert!(x.max_abs_diff(&x_true) < 1e-10 * x_true.max_abs());
    }

    #[test]
    fn residual_bound_on_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..1000 {
            let n = if trial % 100 == 0 {
                200
            } else {
                rng.gen_range(1..40)
            };
            let a = random_matrix(&mut rng, n, n);
            let b = random_matrix(&mut rng, n, 2);
            let x = lu_solve(&a, &b).unwrap();
            let r = a.matmul(&x).unwrap().max_abs_diff(&b);
            let bound = 64.0 * n as f64 * f64::EPSILON * a.max_abs() * x.max_abs() * n as f64;
            assert!(
                r <= bound.max(1e-14),
                "trial {trial}, n={n}: {r:e} > {bound:e}"
            );
        }
    }

    #[test]
    fn singular_matrix_names_pivot() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| c((i + j) as f64, 0.0));
        match lu_solve(&a, &DenseMatrix::identity(3)) {
            Err(LinalgError::SingularMatrix { index, .. }) => assert_eq!(index, 2),
            other => panic!("expected singular, got {other:?}"),
        }
        assert!(determinant(&a).unwrap().norm() < 1e-12);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&DenseMatrix::identity(5)).unwrap(), c(1.0, 0.0));
        let d = DenseMatrix::from_diagonal(&[c(2.0, 0.0), c(3.0, 0.0), c(0.0, 1.0)]);
        assert!((determinant(&d).unwrap() - c(0.0, 6.0)).norm() < 1e-14);
        // One row swap flips the sign.
        let p = DenseMatrix::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert_eq!(determinant(&p).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn determinant_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 10, 10);
            let b = random_matrix(&mut rng, 10, 10);
            let lhs = determinant(&a.matmul(&b).unwrap()).unwrap();
            let rhs = determinant(&a).unwrap() * determinant(&b).unwrap();
            assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm());
        }
    }

    #[test]
    fn adjoint_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 12, 12);
        let b: Vec<_> = (0..12).map(|i| c(i as f64, 1.0)).collect();
        let x = LuFactor::new(&a).unwrap().solve_adjoint_vec(&b).unwrap();
        let r = a.adjoint().matvec(&x);
        assert!(r.iter().zip(&b).all(|(p, q)| (p - q).norm() < 1e-10));
    }

    #[test]
    fn condition_numbers() {
        assert!((cond2_estimate(&DenseMatrix::identity(10)).unwrap() - 1.0).abs() < 1e-6);
        let d = DenseMatrix::from_diagonal(&[c(4.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert!((cond2_estimate(&d).unwrap() - 4.0).abs() < 1e-6);
    }

    #[test]
    fn condition_number_is_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 8, 8);
        let base = cond2_estimate(&a).unwrap();
        for s in [c(2.0, 0.0), c(0.0, 1.0), c(10.0, 0.0)] {
            let scaled = cond2_estimate(&a.scale(s)).unwrap();
            assert!((scaled - base).abs() <= 1e-4 * base, "{scaled} vs {base}");
        }
    }

    #[test]
    fn shape_errors() {
        assert!(DenseMatrix::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
        assert!(lu_solve(&DenseMatrix::zeros(2, 3), &DenseMatrix::zeros(2, 1)).is_err());
        assert!(lu_solve(&DenseMatrix::identity(2), &DenseMatrix::zeros(3, 1)).is_err());
    }
}
