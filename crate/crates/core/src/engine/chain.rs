use super::assembly::assemble;
use super::guess::InitialGuess;
use super::EngineError;
use crate::lattice::Wavenumber;
use crate::linalg::{DenseMatrix, LuFactor};

/// Runs `A_n = (γ_n − β_n A_{n+1})⁻¹ α_n` from `n = N` down to `1`, starting
/// from the closing matrix `A_{N+1}`. Only `A_1..A_M` are kept.
pub fn backward_chain(
    k: &Wavenumber,
    n_trunc: usize,
    m: usize,
    guess: &InitialGuess,
    closing: &DenseMatrix,
) -> Result<Vec<DenseMatrix>, EngineError> {
    if n_trunc == 0 || n_trunc.is_multiple_of(2) {
        return Err(EngineError::EvenTruncation(n_trunc));
    }
    if m < 1 || m > n_trunc {
        return Err(EngineError::InvalidRadius { m, n: n_trunc });
    }
    let p = n_trunc.div_ceil(2);
    if (closing.rows(), closing.cols()) != (p + 1, p) {
        return Err(EngineError::Assembly(format!(
            "closing matrix is {}x{}, expected {}x{p}",
            closing.rows(),
            closing.cols(),
            p + 1
        )));
    }
    let k2 = k.k2();
    let mut kept: Vec<DenseMatrix> = Vec::with_capacity(m);
    let mut next = closing.clone();
    for n in (1..=n_trunc).rev() {
        let shell = assemble(n, k2)?;
        let mut system = shell.beta.mul_dense(&next);
        for v in system.as_mut_slice() {
            *v = -*v;
        }
        for &(i, j, v) in shell.gamma.triplets() {
            system[(i - 1, j - 1)] += v;
        }
        let lu = LuFactor::new(&system).map_err(|source| EngineError::Singular {
            n,
            guess: guess.to_string(),
            source,
        })?;
        next = lu.solve(&shell.alpha.to_dense())?;
        if n <= m {
            kept.push(next.clone());
        }
    }
    kept.reverse();
    Ok(kept)
}
