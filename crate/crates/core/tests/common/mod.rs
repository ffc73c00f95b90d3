//! Straight-line dense transcription of the shell assembly loops, shared by
//! the conformance tests.

#![allow(dead_code)]

use trigreen::{Complex64, DenseMatrix};

fn zeros(r: usize, c: usize) -> Vec<Vec<Complex64>> {
    vec![vec![Complex64::new(0.0, 0.0); c]; r]
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

// 1-based setters to mirror the loops literally.
fn set(m: &mut [Vec<Complex64>], i: usize, j: usize, v: Complex64) {
    m[i - 1][j - 1] = v;
}

pub type Triple = (
    Vec<Vec<Complex64>>,
    Vec<Vec<Complex64>>,
    Vec<Vec<Complex64>>,
);

pub fn literal_even(p: usize, k2: Complex64) -> Triple {
    let mut a = zeros(p + 1, p);
    let mut b = zeros(p + 1, p + 1);
    let mut g = zeros(p + 1, p + 1);
    for i in 1..=p {
        set(&mut a, i, i, re(1.0));
        if i >= 2 {
            set(&mut a, i, i - 1, re(1.0));
        }
    }
    set(&mut a, p + 1, p, re(2.0));
    set(&mut b, p + 1, p + 1, re(2.0));
    set(&mut b, 1, 2, re(2.0));
    for i in 1..=p {
        set(&mut b, i, i, re(1.0));
        if i >= 2 {
            set(&mut b, i, i + 1, re(1.0));
        }
    }
    set(&mut g, 1, 2, re(-2.0));
    set(&mut g, p + 1, p, re(-2.0));
    for i in 1..=p + 1 {
        set(&mut g, i, i, re(6.0) - k2);
        if i >= 2 && i <= p {
            set(&mut g, i, i + 1, re(-1.0));
            set(&mut g, i, i - 1, re(-1.0));
        }
    }
    (a, b, g)
}

pub fn literal_odd(p: usize, k2: Complex64) -> Triple {
    let mut a = zeros(p + 1, p + 1);
    let mut b = zeros(p + 1, p + 2);
    let mut g = zeros(p + 1, p + 1);
    for i in 1..=p + 1 {
        set(&mut a, i, i, re(1.0));
        if i >= 2 {
            set(&mut a, i, i - 1, re(1.0));
        }
    }
    set(&mut b, 1, 2, re(2.0));
    for i in 1..=p + 1 {
        set(&mut b, i, i, re(1.0));
        if i >= 2 {
            set(&mut b, i, i + 1, re(1.0));
        }
    }
    if p == 0 {
        set(&mut g, 1, 1, re(4.0) - k2);
    } else {
        set(&mut g, p + 1, p + 1, re(5.0) - k2);
        set(&mut g, 1, 2, re(-2.0));
        set(&mut g, p + 1, p, re(-1.0));
        for i in 1..=p {
            set(&mut g, i, i, re(6.0) - k2);
            if i >= 2 {
                set(&mut g, i, i + 1, re(-1.0));
                set(&mut g, i, i - 1, re(-1.0));
            }
        }
    }
    (a, b, g)
}

pub fn same(d: &DenseMatrix, lit: &[Vec<Complex64>]) -> bool {
    d.rows() == lit.len()
        && d.cols() == lit[0].len()
        && (0..d.rows()).all(|i| d.row(i) == lit[i].as_slice())
}
