use num_complex::Complex64;

use super::chain::backward_chain;
use super::guess::{make_guess, GuessSpec, InitialGuess};
use super::symmetry::canonicalize;
use super::EngineError;
use crate::lattice::{LatticeIndex, Wavenumber};

/// Number of canonical wedge points `i >= j >= 0` with `i + j <= m`.
pub fn wedge_len(m: usize) -> usize {
    (0..=m).map(|n| n / 2 + 1).sum()
}

fn shell_offset(n: usize) -> usize {
    // Σ_{s<n} (⌊s/2⌋ + 1)
    let h = n / 2;
    h * (h + 1) + if n % 2 == 1 { h + 1 } else { 0 }
}

/// Green's function values on the canonical wedge up to Manhattan radius `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenTable {
    k: Wavenumber,
    n_trunc: usize,
    radius: usize,
    guess: InitialGuess,
    values: Vec<Complex64>,
}

impl GreenTable {
    /// Assembles a table from shell-ordered wedge values
    /// `(0,0), (1,0), (2,0), (1,1), (3,0), (2,1), …`.
    pub fn from_parts(
        k: Wavenumber,
        n_trunc: usize,
        radius: usize,
        guess: InitialGuess,
        values: Vec<Complex64>,
    ) -> Result<Self, EngineError> {
        if radius > n_trunc {
            return Err(EngineError::InvalidRadius {
                m: radius,
                n: n_trunc,
            });
        }
        if values.len() != wedge_len(radius) {
            return Err(EngineError::Assembly(format!(
                "{} values for radius {radius}, expected {}",
                values.len(),
                wedge_len(radius)
            )));
        }
        Ok(Self {
            k,
            n_trunc,
            radius,
            guess,
            values,
        })
    }

    pub fn wavenumber(&self) -> &Wavenumber {
        &self.k
    }

    /// `k² + iε` the table was built with.
    pub fn k2(&self) -> Complex64 {
        self.k.k2()
    }

    pub fn truncation(&self) -> usize {
        self.n_trunc
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn guess(&self) -> &InitialGuess {
        &self.guess
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at a canonical index; `None` off the wedge or beyond the radius.
    pub fn get_canonical(&self, i: i64, j: i64) -> Option<Complex64> {
        if j < 0 || i < j {
            return None;
        }
        let n = (i + j) as usize;
        if n > self.radius {
            return None;
        }
        Some(self.values[shell_offset(n) + j as usize])
    }

    /// `G(x)` via the symmetry of the lattice.
    pub fn green(&self, x: LatticeIndex) -> Result<Complex64, EngineError> {
        let c = canonicalize(x);
        self.get_canonical(c.x1, c.x2)
            .ok_or(EngineError::RadiusExceeded {
                x,
                required: c.manhattan(),
                available: self.radius,
            })
    }

    /// `(i, j, G(i, j))` over the wedge in shell order.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        (0..=self.radius).flat_map(move |n| {
            (0..=n / 2).map(move |j| ((n - j) as i64, j as i64, self.values[shell_offset(n) + j]))
        })
    }

    /// Largest `|(Δ_d + k²)G(x) − δ_{x,0}|` over wedge points whose whole
    /// stencil lies inside the table, and the number of points checked.
    pub fn defining_residual(&self) -> (f64, usize) {
        let k2 = self.k2();
        let mut worst = 0.0f64;
        let mut count = 0;
        for (i, j, g) in self.entries() {
            let x = LatticeIndex::new(i, j);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut inside = true;
            for nb in x.neighbors() {
                match self.green(nb) {
                    Ok(v) => sum += v,
                    Err(_) => {
                        inside = false;
                        break;
                    }
                }
            }
            if !inside {
                continue;
            }
            let delta = if i == 0 && j == 0 { 1.0 } else { 0.0 };
            worst = worst.max((sum + (k2 - 6.0) * g - delta).norm());
            count += 1;
        }
        (worst, count)
    }
}

/// Backward chain, normalization at the origin and forward pass
/// `V_n = A_n V_{n−1}` up to shell `M`.
pub fn build_table(
    k: &Wavenumber,
    n_trunc: usize,
    m: usize,
    spec: &GuessSpec,
) -> Result<GreenTable, EngineError> {
    let (guess, closing) = make_guess(spec, k, n_trunc)?;
    if m < 1 || m > n_trunc {
        return Err(EngineError::InvalidRadius { m, n: n_trunc });
    }
    let chain = backward_chain(k, n_trunc, m, &guess, &closing)?;
    let a1 = chain[0][(0, 0)];
    let denom = 6.0 * a1 - 6.0 + k.k2();
    if denom.norm() < 1e-12 || !denom.re.is_finite() || !denom.im.is_finite() {
        return Err(EngineError::Normalization(denom.norm()));
    }
    let mut values = Vec::with_capacity(wedge_len(m));
    let mut v = vec![denom.inv()];
    values.push(v[0]);
    for a in &chain {
        v = a.matvec(&v);
        values.extend_from_slice(&v);
    }
    GreenTable::from_parts(*k, n_trunc, m, guess, values)
}
