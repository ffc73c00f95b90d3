//! Fixtures shared by the benchmarks.

use num_complex::Complex64;
use trigreen::{build_table, DenseMatrix, GreenTable, GuessSpec, LatticeIndex, Wavenumber};

/// `k = 2` with a small absorption, the setting of the example problems.
pub fn wavenumber() -> Wavenumber {
    Wavenumber::new(2.0, 1e-6).expect("valid wavenumber")
}

/// Deterministic, well-conditioned complex matrix of order `n`.
pub fn dense_system(n: usize) -> (DenseMatrix, Vec<Complex64>) {
    let a = DenseMatrix::from_fn(n, n, |i, j| {
        let t = (i * 31 + j * 17) as f64;
        let off = Complex64::new(t.sin(), (0.5 * t).cos()) / n as f64;
        if i == j {
            off + 2.0
        } else {
            off
        }
    });
    let b = (0..n)
        .map(|i| Complex64::new(1.0, i as f64 / n as f64))
        .collect();
    (a, b)
}

pub fn table(n_trunc: usize, m: usize) -> GreenTable {
    build_table(&wavenumber(), n_trunc, m, &GuessSpec::Shift).expect("table builds")
}

/// Canonical points with Manhattan distance at most `d`.
pub fn wedge(d: i64) -> Vec<LatticeIndex> {
    (0..=d)
        .flat_map(|n| (0..=n / 2).map(move |j| LatticeIndex::new(n - j, j)))
        .collect()
}
