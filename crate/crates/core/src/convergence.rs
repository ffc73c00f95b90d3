//! Truncation study: tables at `N_m = 2^{m+1} p0 − 1` compared on the wedge
//! `i >= j >= 0, i + j <= N_0`.

use crate::engine::{build_table, EngineError, GreenTable, GuessSpec};
use crate::lattice::Wavenumber;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub m: u32,
    pub n_trunc: usize,
    /// Max-abs difference to the previous row; `None` for the first row.
    pub difference: Option<f64>,
}

/// `N_m = 2^{m+1} p0 − 1`.
pub fn truncation(p0: usize, m: u32) -> usize {
    (p0 << (m + 1)) - 1
}

fn max_abs_difference(a: &GreenTable, b: &GreenTable) -> f64 {
    a.entries()
        .zip(b.entries())
        .map(|((_, _, x), (_, _, y))| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Builds one table per `m` (in the order given) and reports successive
/// differences on the common wedge of radius `N_0 = 2p0 − 1`.
pub fn convergence_study(
    k: &Wavenumber,
    p0: usize,
    ms: &[u32],
    guess: &GuessSpec,
) -> Result<Vec<ConvergenceRow>, EngineError> {
    if p0 == 0 {
        return Err(EngineError::Assembly("p0 must be positive".into()));
    }
    let radius = truncation(p0, 0);
    let mut rows = Vec::with_capacity(ms.len());
    let mut previous: Option<GreenTable> = None;
    for &m in ms {
        let n_trunc = truncation(p0, m);
        let table = build_table(k, n_trunc, radius, guess)?;
        let difference = previous.as_ref().map(|p| max_abs_difference(p, &table));
        rows.push(ConvergenceRow {
            m,
            n_trunc,
            difference,
        });
        previous = Some(table);
    }
    Ok(rows)
}
