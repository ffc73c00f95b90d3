//! Brute-force Brillouin-zone quadrature for `G`, used as an independent check
//! on the recursion:
//!
//! `G(x) = (1/4π²) ∬_{[−π,π]²} e^{ix·ξ} / σ(ξ; k² + iε) dξ`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::lattice::LatticeIndex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("simpson needs an odd mesh of at least 5 points, got {0}")]
    SimpsonMesh(usize),
    #[error("mesh must have at least {min} points for {rule}, got {mesh}")]
    MeshTooSmall {
        rule: QuadratureRule,
        mesh: usize,
        min: usize,
    },
    #[error("epsilon must be positive and finite, got {0}")]
    Epsilon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    Trapezoid,
    Simpson,
    GaussLegendre,
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadratureRule::Trapezoid => "trapezoid",
            QuadratureRule::Simpson => "simpson",
            QuadratureRule::GaussLegendre => "gauss-legendre",
        })
    }
}

impl FromStr for QuadratureRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "trapezoid" => Ok(Self::Trapezoid),
            "simpson" => Ok(Self::Simpson),
            "gauss" | "gauss-legendre" => Ok(Self::GaussLegendre),
            other => Err(format!("unknown quadrature rule '{other}'")),
        }
    }
}

/// Rule, points per axis and the imaginary shift added to `k²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    rule: QuadratureRule,
    mesh: usize,
    epsilon: f64,
}

impl QuadratureSpec {
    pub fn new(rule: QuadratureRule, mesh: usize, epsilon: f64) -> Result<Self, QuadratureError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(QuadratureError::Epsilon(epsilon));
        }
        match rule {
            QuadratureRule::Simpson if mesh.is_multiple_of(2) || mesh < 5 => {
                return Err(QuadratureError::SimpsonMesh(mesh))
            }
            QuadratureRule::Trapezoid if mesh < 3 => {
                return Err(QuadratureError::MeshTooSmall { rule, mesh, min: 3 })
            }
            QuadratureRule::GaussLegendre if mesh < 2 => {
                return Err(QuadratureError::MeshTooSmall { rule, mesh, min: 2 })
            }
            _ => {}
        }
        Ok(Self {
            rule,
            mesh,
            epsilon,
        })
    }

    /// Simpson on 2001 points per axis.
    pub fn oracle_default(epsilon: f64) -> Result<Self, QuadratureError> {
        Self::new(QuadratureRule::Simpson, 2001, epsilon)
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn mesh(&self) -> usize {
        self.mesh
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The next coarser mesh of the same rule, for the two-level estimate.
    fn coarser(&self) -> Self {
        let mesh = match self.rule {
            QuadratureRule::Trapezoid => (self.mesh - 1) / 2 + 1,
            QuadratureRule::Simpson => {
                let intervals = (self.mesh - 1) / 2;
                // keep an even interval count
                (intervals + intervals % 2).max(4) + 1
            }
            QuadratureRule::GaussLegendre => (self.mesh / 2).max(1),
        };
        Self { mesh, ..*self }
    }

    /// Nodes and weights on `[a, b]`.
    fn nodes(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let n = self.mesh;
        match self.rule {
            QuadratureRule::Trapezoid | QuadratureRule::Simpson => {
                let h = (b - a) / (n - 1) as f64;
                (0..n)
                    .map(|i| {
                        let w = match self.rule {
                            QuadratureRule::Trapezoid if i == 0 || i == n - 1 => h / 2.0,
                            QuadratureRule::Trapezoid => h,
                            _ if i == 0 || i == n - 1 => h / 3.0,
                            _ if i % 2 == 1 => 4.0 * h / 3.0,
                            _ => 2.0 * h / 3.0,
                        };
                        (a + i as f64 * h, w)
                    })
                    .collect()
            }
            QuadratureRule::GaussLegendre => gauss_legendre(n)
                .into_iter()
                .map(|(t, w)| (0.5 * (b - a) * t + 0.5 * (a + b), 0.5 * (b - a) * w))
                .collect(),
        }
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

/// `σ(ξ; k²) = k² − 6 + 2cos ξ1 + 2cos ξ2 + 2cos(ξ1 − ξ2)`.
pub fn sigma(xi: (f64, f64), k2: Complex64) -> Complex64 {
    k2 + (-6.0 + 2.0 * xi.0.cos() + 2.0 * xi.1.cos() + 2.0 * (xi.0 - xi.1).cos())
}

/// `σ̃(η; k²) = k² − 8 + 4cos η2 (cos η1 + cos η2)`, equal to `σ` at
/// `ξ = (η1 + η2, η1 − η2)`.
pub fn sigma_tilde(eta: (f64, f64), k2: Complex64) -> Complex64 {
    k2 + (-8.0 + 4.0 * eta.1.cos() * (eta.0.cos() + eta.1.cos()))
}

/// A quadrature value with the difference to the next coarser mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    pub coarse: Complex64,
    pub error_estimate: f64,
}

/// Which form of the integrand to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralForm {
    /// `σ` over `ξ ∈ [−π,π]²`.
    Sigma,
    /// `σ̃` over `η ∈ [−π,π]×[−π/2,π/2]`, Jacobian 2.
    Rotated,
}

fn integrate_batch(
    xs: &[LatticeIndex],
    k2: Complex64,
    spec: &QuadratureSpec,
    form: IntegralForm,
) -> Vec<Complex64> {
    let k2 = k2 + Complex64::new(0.0, spec.epsilon);
    let (outer, inner, jac) = match form {
        IntegralForm::Sigma => (spec.nodes(-PI, PI), spec.nodes(-PI, PI), 1.0),
        IntegralForm::Rotated => (spec.nodes(-PI, PI), spec.nodes(-PI / 2.0, PI / 2.0), 2.0),
    };
    // Frequencies along the two integration axes.
    let freqs: Vec<(f64, f64)> = xs
        .iter()
        .map(|x| match form {
            IntegralForm::Sigma => (x.x1 as f64, x.x2 as f64),
            IntegralForm::Rotated => ((x.x1 + x.x2) as f64, (x.x1 - x.x2) as f64),
        })
        .collect();
    let inner_phase: Vec<Vec<Complex64>> = freqs
        .iter()
        .map(|&(_, f2)| {
            inner
                .iter()
                .map(|&(t, w)| Complex64::from_polar(w, f2 * t))
                .collect()
        })
        .collect();
    let inner_cos: Vec<f64> = inner.iter().map(|&(t, _)| t.cos()).collect();
    let mut acc = vec![Complex64::new(0.0, 0.0); xs.len()];
    let mut recip = vec![Complex64::new(0.0, 0.0); inner.len()];
    for &(s, ws) in &outer {
        match form {
            IntegralForm::Sigma => {
                for (r, &(t, _)) in recip.iter_mut().zip(&inner) {
                    *r = sigma((s, t), k2).inv();
                }
            }
            IntegralForm::Rotated => {
                let cs = s.cos();
                for (r, &c2) in recip.iter_mut().zip(&inner_cos) {
                    *r = (k2 + (-8.0 + 4.0 * c2 * (cs + c2))).inv();
                }
            }
        }
        for (xi, (&(f1, _), phases)) in freqs.iter().zip(&inner_phase).enumerate() {
            let row: Complex64 = recip.iter().zip(phases).map(|(r, p)| r * p).sum();
            acc[xi] += row * Complex64::from_polar(ws, f1 * s);
        }
    }
    let norm = jac / (4.0 * PI * PI);
    acc.into_iter().map(|v| v * norm).collect()
}

/// Evaluates `G` at several points sharing one pass over the nodes, at the
/// requested mesh and at the next coarser one.
pub fn green_integral_batch(
    xs: &[LatticeIndex],
    k2: Complex64,
    spec: &QuadratureSpec,
    form: IntegralForm,
) -> Vec<OracleValue> {
    let fine = integrate_batch(xs, k2, spec, form);
    let coarse = integrate_batch(xs, k2, &spec.coarser(), form);
    fine.into_iter()
        .zip(coarse)
        .map(|(value, coarse)| OracleValue {
            value,
            coarse,
            error_estimate: (value - coarse).norm(),
        })
        .collect()
}

/// `G(x)` for `k² + iε` by quadrature in the `σ` form.
pub fn green_integral(x: LatticeIndex, k2: Complex64, spec: &QuadratureSpec) -> OracleValue {
    green_integral_batch(&[x], k2, spec, IntegralForm::Sigma)[0]
}
