use num_complex::Complex64;

use super::EngineError;
use crate::linalg::DenseMatrix;

/// Sparse matrix as 1-based `(i, j, value)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTriplets {
    rows: usize,
    cols: usize,
    triplets: Vec<(usize, usize, Complex64)>,
}

impl SparseTriplets {
    pub fn new(rows: usize, cols: usize) -> Self {
        assert!(
            rows > 0 && cols > 0,
            "sparse matrix dimensions must be positive"
        );
        Self {
            rows,
            cols,
            triplets: Vec::new(),
        }
    }

    /// Sets entry `(i, j)` (1-based). Panics on an out-of-range position.
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(
            (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j),
            "({i},{j}) outside {}x{}",
            self.rows,
            self.cols
        );
        self.triplets.push((i, j, v));
    }

    fn set_real(&mut self, i: usize, j: usize, v: f64) {
        self.set(i, j, Complex64::new(v, 0.0));
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn triplets(&self) -> &[(usize, usize, Complex64)] {
        &self.triplets
    }

    /// True when no position occurs twice.
    pub fn positions_distinct(&self) -> bool {
        let mut pos: Vec<(usize, usize)> = self.triplets.iter().map(|t| (t.0, t.1)).collect();
        pos.sort_unstable();
        pos.windows(2).all(|w| w[0] != w[1])
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        self.triplets
            .iter()
            .find(|t| t.0 == i && t.1 == j)
            .map(|t| t.2)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for &(i, j, v) in &self.triplets {
            d[(i - 1, j - 1)] = v;
        }
        d
    }

    /// `self · rhs` for a dense right factor.
    pub fn mul_dense(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows(), "sparse-dense dimension mismatch");
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols());
        for &(i, j, v) in &self.triplets {
            for (o, r) in out.row_mut(i - 1).iter_mut().zip(rhs.row(j - 1)) {
                *o += v * r;
            }
        }
        out
    }
}

/// Matrices of one shell equation `γ_n V_n = α_n V_{n−1} + β_n V_{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellSystem {
    pub alpha: SparseTriplets,
    pub beta: SparseTriplets,
    pub gamma: SparseTriplets,
}

/// Shell `n = 2p`, `p >= 1`.
pub fn assemble_even(
    p: usize,
    k2: Complex64,
) -> Result<(SparseTriplets, SparseTriplets, SparseTriplets), EngineError> {
    if p < 1 {
        return Err(EngineError::Assembly("even shells need p >= 1".into()));
    }
    let diag = Complex64::new(6.0, 0.0) - k2;

    let mut alpha = SparseTriplets::new(p + 1, p);
    for i in 1..=p {
        alpha.set_real(i, i, 1.0);
        if i >= 2 {
            alpha.set_real(i, i - 1, 1.0);
        }
    }
    alpha.set_real(p + 1, p, 2.0);

    let mut beta = SparseTriplets::new(p + 1, p + 1);
    beta.set_real(p + 1, p + 1, 2.0);
    beta.set_real(1, 2, 2.0);
    for i in 1..=p {
        beta.set_real(i, i, 1.0);
        if i >= 2 {
            beta.set_real(i, i + 1, 1.0);
        }
    }

    let mut gamma = SparseTriplets::new(p + 1, p + 1);
    gamma.set_real(1, 2, -2.0);
    gamma.set_real(p + 1, p, -2.0);
    for i in 1..=p + 1 {
        gamma.set(i, i, diag);
        if (2..=p).contains(&i) {
            gamma.set_real(i, i + 1, -1.0);
            gamma.set_real(i, i - 1, -1.0);
        }
    }
    Ok((alpha, beta, gamma))
}

/// Shell `n = 2p + 1`, `p >= 0`.
pub fn assemble_odd(p: usize, k2: Complex64) -> (SparseTriplets, SparseTriplets, SparseTriplets) {
    let diag = Complex64::new(6.0, 0.0) - k2;

    let mut alpha = SparseTriplets::new(p + 1, p + 1);
    for i in 1..=p + 1 {
        alpha.set_real(i, i, 1.0);
        if i >= 2 {
            alpha.set_real(i, i - 1, 1.0);
        }
    }

    let mut beta = SparseTriplets::new(p + 1, p + 2);
    beta.set_real(1, 2, 2.0);
    for i in 1..=p + 1 {
        beta.set_real(i, i, 1.0);
        if i >= 2 {
            beta.set_real(i, i + 1, 1.0);
        }
    }

    let mut gamma = SparseTriplets::new(p + 1, p + 1);
    if p == 0 {
        gamma.set(1, 1, Complex64::new(4.0, 0.0) - k2);
    } else {
        gamma.set(p + 1, p + 1, Complex64::new(5.0, 0.0) - k2);
        gamma.set_real(1, 2, -2.0);
        gamma.set_real(p + 1, p, -1.0);
        for i in 1..=p {
            gamma.set(i, i, diag);
            if i >= 2 {
                gamma.set_real(i, i + 1, -1.0);
                gamma.set_real(i, i - 1, -1.0);
            }
        }
    }
    (alpha, beta, gamma)
}

/// Assembles shell `n >= 1` by parity.
pub fn assemble(n: usize, k2: Complex64) -> Result<ShellSystem, EngineError> {
    let (alpha, beta, gamma) = match n {
        0 => return Err(EngineError::Assembly("shell index must be >= 1".into())),
        n if n % 2 == 0 => assemble_even(n / 2, k2)?,
        n => assemble_odd((n - 1) / 2, k2),
    };
    Ok(ShellSystem { alpha, beta, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn smallest_even_shell() {
        let (a, b, g) = assemble_even(1, c(2.25)).unwrap();
        assert_eq!((a.rows(), a.cols(), a.nnz()), (2, 1, 2));
        assert_eq!(a.get(2, 1), Some(c(2.0)));
        assert_eq!((b.rows(), b.cols(), b.nnz()), (2, 2, 3));
        assert_eq!(g.nnz(), 4);
    }

    #[test]
    fn gamma4_at_k2_4() {
        let (_, _, g) = assemble_even(2, c(4.0)).unwrap();
        assert_eq!(g.nnz(), 7);
        for i in 1..=3 {
            assert_eq!(g.get(i, i), Some(c(2.0)));
        }
        assert_eq!(g.get(1, 2), Some(c(-2.0)));
        assert_eq!(g.get(3, 2), Some(c(-2.0)));
        assert_eq!(g.get(2, 1), Some(c(-1.0)));
        assert_eq!(g.get(2, 3), Some(c(-1.0)));
    }

    #[test]
    fn odd_shells() {
        let (_, _, g) = assemble_odd(0, c(4.0));
        assert_eq!(g.get(1, 1), Some(c(0.0)));
        let (_, b, _) = assemble_odd(1, c(1.0));
        assert_eq!((b.rows(), b.cols(), b.nnz()), (2, 3, 4));
        assert_eq!(b.get(1, 2), Some(c(2.0)));
        let (_, _, g) = assemble_odd(2, c(1.0));
        assert_eq!(g.nnz(), 7);
    }

    #[test]
    fn positions_are_distinct() {
        for p in 1..30 {
            let (a, b, g) = assemble_even(p, c(1.0)).unwrap();
            let (a2, b2, g2) = assemble_odd(p, c(1.0));
            for m in [a, b, g, a2, b2, g2] {
                assert!(m.positions_distinct(), "p={p}");
            }
        }
    }

    #[test]
    fn zero_p_rejected() {
        assert!(assemble_even(0, c(1.0)).is_err());
        assert!(assemble(0, c(1.0)).is_err());
    }

    #[test]
    fn sparse_dense_product() {
        let (a, b, _) = assemble_odd(2, c(1.0));
        let d = a.to_dense();
        let m = DenseMatrix::from_fn(4, 2, |i, j| Complex64::new(i as f64, j as f64));
        assert_eq!(b.mul_dense(&m), b.to_dense().matmul(&m).unwrap());
        assert_eq!(d.rows(), 3);
    }
}
