//! Shell matrices against a straight-line dense transcription of the
//! assembly loops, for p = 1..50 and several wavenumbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trigreen::{assemble, assemble_even, assemble_odd, Complex64};

mod common;
use common::{literal_even, literal_odd, same};

fn k2_samples() -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..5)
        .map(|_| Complex64::new(rng.gen_range(0.1..8.0), rng.gen_range(0.0..0.1)))
        .collect()
}

#[test]
fn even_shells_match_literal_transcription_and_counts() {
    for k2 in k2_samples() {
        for p in 1..=50 {
            let (a, b, g) = assemble_even(p, k2).unwrap();
            assert_eq!((a.rows(), a.cols(), a.nnz()), (p + 1, p, 2 * p));
            assert_eq!((b.rows(), b.cols(), b.nnz()), (p + 1, p + 1, 2 * p + 1));
            assert_eq!((g.rows(), g.cols(), g.nnz()), (p + 1, p + 1, 3 * p + 1));
            let (la, lb, lg) = literal_even(p, k2);
            assert!(same(&a.to_dense(), &la), "alpha p={p}");
            assert!(same(&b.to_dense(), &lb), "beta p={p}");
            assert!(same(&g.to_dense(), &lg), "gamma p={p}");
        }
    }
}

#[test]
fn odd_shells_match_literal_transcription_and_counts() {
    for k2 in k2_samples() {
        for p in 0..=50 {
            let (a, b, g) = assemble_odd(p, k2);
            assert_eq!((a.rows(), a.cols(), a.nnz()), (p + 1, p + 1, 2 * p + 1));
            assert_eq!((b.rows(), b.cols(), b.nnz()), (p + 1, p + 2, 2 * p + 2));
            let gamma_nnz = if p == 0 { 1 } else { 3 * p + 1 };
            assert_eq!((g.rows(), g.cols(), g.nnz()), (p + 1, p + 1, gamma_nnz));
            let (la, lb, lg) = literal_odd(p, k2);
            assert!(same(&a.to_dense(), &la), "alpha p={p}");
            assert!(same(&b.to_dense(), &lb), "beta p={p}");
            assert!(same(&g.to_dense(), &lg), "gamma p={p}");
        }
    }
}

#[test]
fn dispatch_by_parity() {
    let k2 = Complex64::new(2.25, 0.0);
    for n in 1..20 {
        let s = assemble(n, k2).unwrap();
        let expected = if n % 2 == 0 {
            n / 2 + 1
        } else {
            (n - 1) / 2 + 1
        };
        assert_eq!(s.gamma.rows(), expected);
        assert_eq!(s.alpha.cols(), if n % 2 == 0 { n / 2 } else { expected });
    }
}
