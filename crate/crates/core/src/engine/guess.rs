use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::EngineError;
use crate::lattice::Wavenumber;
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuessKind {
    Zero,
    Shift,
    Heuristic,
}

impl fmt::Display for GuessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GuessKind::Zero => "zero",
            GuessKind::Shift => "shift",
            GuessKind::Heuristic => "heuristic",
        })
    }
}

impl FromStr for GuessKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "zero" => Ok(GuessKind::Zero),
            "shift" => Ok(GuessKind::Shift),
            "heuristic" => Ok(GuessKind::Heuristic),
            other => Err(format!(
                "unknown guess kind '{other}' (expected zero, shift or heuristic)"
            )),
        }
    }
}

/// What the caller asks for; `h = None` selects `√((2p−1)/(2p+1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GuessSpec {
    Zero,
    Shift,
    Heuristic { h: Option<Complex64> },
}

impl GuessSpec {
    pub fn kind(&self) -> GuessKind {
        match self {
            GuessSpec::Zero => GuessKind::Zero,
            GuessSpec::Shift => GuessKind::Shift,
            GuessSpec::Heuristic { .. } => GuessKind::Heuristic,
        }
    }
}

/// The closing guess actually used, kept with the table for provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialGuess {
    pub kind: GuessKind,
    pub epsilon: f64,
    pub h: Option<Complex64>,
    pub lambda: Option<Complex64>,
}

impl fmt::Display for InitialGuess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        match self.kind {
            GuessKind::Zero => Ok(()),
            GuessKind::Shift => write!(f, " (eps={:e})", self.epsilon),
            GuessKind::Heuristic => write!(f, " (h={})", self.h.unwrap_or_default()),
        }
    }
}

/// Both roots of `aλ² + bλ + c = 0`, computed without cancellation.
fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let q = if (b + disc).norm() >= (b - disc).norm() {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    if q == Complex64::new(0.0, 0.0) {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// Writes the structured closing matrix: `(1,1)` and `(p+1,p)` get `edge`,
/// `(i,i)` and `(i,i−1)` for `i = 2..p` get `inner`.
fn structured(p: usize, edge: Complex64, inner: Complex64) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(p + 1, p);
    a[(0, 0)] = edge;
    a[(p, p - 1)] = edge;
    for i in 2..=p {
        a[(i - 1, i - 1)] = inner;
        a[(i - 1, i - 2)] = inner;
    }
    a
}

/// Builds the closing matrix `A_{N+1}` of shape `(p+1)×p`, `N + 1 = 2p`.
pub fn make_guess(
    spec: &GuessSpec,
    k: &Wavenumber,
    n: usize,
) -> Result<(InitialGuess, DenseMatrix), EngineError> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(EngineError::EvenTruncation(n));
    }
    let p = n.div_ceil(2);
    let k2 = k.k2();
    match *spec {
        GuessSpec::Zero => {
            if k.is_degenerate() {
                return Err(EngineError::GuessInadmissible(format!(
                    "zero guess fails at k = {} (k² = 4 makes the first odd shell singular); use the shift or heuristic guess",
                    k.k()
                )));
            }
            let guess = InitialGuess {
                kind: GuessKind::Zero,
                epsilon: k.epsilon(),
                h: None,
                lambda: None,
            };
            Ok((guess, DenseMatrix::zeros(p + 1, p)))
        }
        GuessSpec::Shift => {
            let one = Complex64::new(1.0, 0.0);
            let roots = quadratic_roots(2.0 * one, k2 - 4.0, 2.0 * one);
            let lambda = if roots[0].norm() <= roots[1].norm() {
                roots[0]
            } else {
                roots[1]
            };
            if lambda.norm() >= 1.0 {
                return Err(EngineError::GuessInadmissible(format!(
                    "shift guess has no root with |λ| < 1 for k = {}, ε = {:e}; a positive ε is required",
                    k.k(),
                    k.epsilon()
                )));
            }
            let guess = InitialGuess {
                kind: GuessKind::Shift,
                epsilon: k.epsilon(),
                h: None,
                lambda: Some(lambda),
            };
            Ok((guess, structured(p, lambda, lambda / 2.0)))
        }
        GuessSpec::Heuristic { h } => {
            let pf = p as f64;
            let h = h.unwrap_or_else(|| {
                Complex64::new(((2.0 * pf - 1.0) / (2.0 * pf + 1.0)).sqrt(), 0.0)
            });
            if h.norm() == 0.0 || !h.re.is_finite() || !h.im.is_finite() {
                return Err(EngineError::GuessInadmissible(format!(
                    "h = {h} must be finite and nonzero"
                )));
            }
            let lower = (k2 - 6.0).norm() / 6.0;
            if h.norm() < lower {
                return Err(EngineError::GuessInadmissible(format!(
                    "|h| = {} is below the lower bound |k² − 6|/6 = {lower}",
                    h.norm()
                )));
            }
            let a = h * (4.0 * pf / (2.0 * pf + 1.0));
            let b = k2 - 6.0 + 2.0 * h;
            let c = h * (4.0 * pf / (2.0 * pf - 1.0));
            let bound = |l: &Complex64| l.norm() * (2.0 * pf / (2.0 * pf + 1.0)) * h.norm();
            let mut admissible: Vec<Complex64> = quadratic_roots(a, b, c)
                .into_iter()
                .filter(|l| bound(l) < 1.0)
                .collect();
            // Equal moduli (conjugate roots at real k²): take the outgoing
            // branch, larger imaginary part.
            admissible.sort_by(|x, y| {
                let (nx, ny) = (x.norm(), y.norm());
                if (nx - ny).abs() <= 1e-12 * nx.max(ny) {
                    y.im.total_cmp(&x.im)
                } else {
                    nx.total_cmp(&ny)
                }
            });
            let lambda = *admissible.first().ok_or_else(|| {
                EngineError::GuessInadmissible(format!(
                    "no root λ with |λ|·(2p/(2p+1))·|h| < 1 for h = {h}, k = {}",
                    k.k()
                ))
            })?;
            let rho = lambda / h;
            let edge = rho * ((2.0 * pf - 1.0) / (2.0 * pf));
            let inner = rho * ((2.0 * pf - 1.0) / (4.0 * pf));
            let guess = InitialGuess {
                kind: GuessKind::Heuristic,
                epsilon: k.epsilon(),
                h: Some(h),
                lambda: Some(lambda),
            };
            Ok((guess, structured(p, edge, inner)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_root_at_k2() {
        let eps = 1e-6;
        let k = Wavenumber::new(2.0, eps).unwrap();
        let (g, a) = make_guess(&GuessSpec::Shift, &k, 5).unwrap();
        let lambda = g.lambda.unwrap();
        let expected = Complex64::new(0.0, ((eps * eps + 16.0).sqrt() - eps) / 4.0);
        assert!((lambda - expected).norm() < 1e-14);
        assert!(lambda.norm() < 1.0);
        assert_eq!((a.rows(), a.cols()), (4, 3));
        assert_eq!(a[(0, 0)], lambda);
        assert_eq!(a[(3, 2)], lambda);
        assert_eq!(a[(1, 1)], lambda / 2.0);
        assert_eq!(a[(1, 0)], lambda / 2.0);
        assert_eq!(a[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn shift_without_epsilon_is_inadmissible() {
        let k = Wavenumber::new(2.0, 0.0).unwrap();
        assert!(matches!(
            make_guess(&GuessSpec::Shift, &k, 5),
            Err(EngineError::GuessInadmissible(_))
        ));
        let k = Wavenumber::new(1.5, 0.0).unwrap();
        assert!(matches!(
            make_guess(&GuessSpec::Shift, &k, 5),
            Err(EngineError::GuessInadmissible(_))
        ));
    }

    #[test]
    fn zero_guess_rejects_degenerate_k() {
        let k = Wavenumber::new(2.0, 1e-6).unwrap();
        assert!(matches!(
            make_guess(&GuessSpec::Zero, &k, 5),
            Err(EngineError::GuessInadmissible(_))
        ));
        let k = Wavenumber::new(1.5, 0.0).unwrap();
        let (_, a) = make_guess(&GuessSpec::Zero, &k, 5).unwrap();
        assert_eq!(a.max_abs(), 0.0);
    }

    #[test]
    fn even_truncation_rejected() {
        let k = Wavenumber::new(1.5, 0.0).unwrap();
        assert!(matches!(
            make_guess(&GuessSpec::Zero, &k, 4),
            Err(EngineError::EvenTruncation(4))
        ));
    }

    #[test]
    fn heuristic_at_k2_6() {
        let p = 1136usize;
        let k = Wavenumber::new(6f64.sqrt(), 0.0).unwrap();
        let (g, _) = make_guess(&GuessSpec::Heuristic { h: None }, &k, 2 * p - 1).unwrap();
        let pf = p as f64;
        let lambda = g.lambda.unwrap();
        let h = g.h.unwrap();
        assert!((lambda.norm() - ((2.0 * pf + 1.0) / (2.0 * pf - 1.0)).sqrt()).abs() < 1e-9);
        assert!(lambda.norm() * (2.0 * pf / (2.0 * pf + 1.0)) * h.norm() < 1.0);
    }

    #[test]
    fn heuristic_h_lower_bound() {
        let k = Wavenumber::new(0.5, 0.0).unwrap();
        let spec = GuessSpec::Heuristic {
            h: Some(Complex64::new(0.5, 0.0)),
        };
        assert!(matches!(
            make_guess(&spec, &k, 5),
            Err(EngineError::GuessInadmissible(_))
        ));
    }

    #[test]
    fn roots_solve_quadratic() {
        let (a, b, c) = (
            Complex64::new(2.0, 1.0),
            Complex64::new(-3.0, 0.5),
            Complex64::new(1.0, -2.0),
        );
        for r in quadratic_roots(a, b, c) {
            assert!((a * r * r + b * r + c).norm() < 1e-13);
        }
    }
}
