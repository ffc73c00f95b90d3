use std::sync::OnceLock;

use crate::lattice::LatticeIndex;

type Mat2 = [[i64; 2]; 2];

const GENERATORS: [Mat2; 3] = [
    [[0, 1], [1, 0]],   // (x1, x2) -> (x2, x1)
    [[-1, 0], [0, -1]], // (x1, x2) -> (-x1, -x2)
    [[1, 1], [0, -1]],  // (x1, x2) -> (x1 + x2, -x2)
];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// The point group of the lattice as the closure of the generators.
fn group() -> &'static [Mat2] {
    static GROUP: OnceLock<Vec<Mat2>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let mut elems: Vec<Mat2> = vec![[[1, 0], [0, 1]]];
        let mut frontier = elems.clone();
        while let Some(g) = frontier.pop() {
            for s in &GENERATORS {
                let h = mul(s, &g);
                if !elems.contains(&h) {
                    elems.push(h);
                    frontier.push(h);
                }
            }
        }
        elems
    })
}

fn apply(g: &Mat2, x: LatticeIndex) -> LatticeIndex {
    let x1 = g[0][0]
        .checked_mul(x.x1)
        .and_then(|a| a.checked_add(g[0][1].checked_mul(x.x2)?));
    let x2 = g[1][0]
        .checked_mul(x.x1)
        .and_then(|a| a.checked_add(g[1][1].checked_mul(x.x2)?));
    match (x1, x2) {
        (Some(x1), Some(x2)) => LatticeIndex::new(x1, x2),
        _ => panic!("lattice index overflow"),
    }
}

/// All images of `x` under the symmetry group of `G`.
pub fn orbit(x: LatticeIndex) -> Vec<LatticeIndex> {
    let mut pts: Vec<LatticeIndex> = group().iter().map(|g| apply(g, x)).collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Representative `(i, j)` with `i >= j >= 0` of the orbit of `x`.
pub fn canonicalize(x: LatticeIndex) -> LatticeIndex {
    group()
        .iter()
        .map(|g| apply(g, x))
        .filter(|p| p.x1 >= p.x2 && p.x2 >= 0)
        .max()
        .expect("every orbit meets the wedge")
}
