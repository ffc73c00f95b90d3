//! Exterior Dirichlet problems: difference potentials, the boundary system
//! `HΦ = F` and evaluation of `u(x) = Σ G(x − y_i) φ_i`.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::engine::{EngineError, GreenTable};
use crate::lattice::{
    total_normal_difference, LatticeError, LatticeIndex, Region, Wavenumber, DIRECTIONS,
};
use crate::linalg::{cond2_with_factor, determinant, DenseMatrix, LinalgError, LuFactor};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundaryError {
    #[error("invalid boundary problem: {0}")]
    Invalid(String),
    #[error("boundary matrix is near singular: |det H| = {det:e}, cond2 = {cond2:e}")]
    NearSingularBoundary { det: f64, cond2: f64 },
    #[error("ray at angle {0} does not meet the window")]
    EmptyRay(f64),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Distinct boundary sites with Dirichlet data.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryProblem {
    points: Vec<LatticeIndex>,
    data: Vec<Complex64>,
    k: Wavenumber,
}

impl BoundaryProblem {
    pub fn new(
        points: Vec<LatticeIndex>,
        data: Vec<Complex64>,
        k: Wavenumber,
    ) -> Result<Self, BoundaryError> {
        if points.is_empty() {
            return Err(BoundaryError::Invalid("boundary has no points".into()));
        }
        if points.len() != data.len() {
            return Err(BoundaryError::Invalid(format!(
                "{} points but {} data values",
                points.len(),
                data.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for p in &points {
            if !seen.insert(*p) {
                return Err(BoundaryError::Invalid(format!("point {p} listed twice")));
            }
        }
        Ok(Self { points, data, k })
    }

    pub fn preset(preset: Preset, k: Wavenumber) -> Self {
        let (points, data) = preset.layout();
        Self::new(points, data, k).expect("presets are valid")
    }

    pub fn points(&self) -> &[LatticeIndex] {
        &self.points
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn wavenumber(&self) -> &Wavenumber {
        &self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Table radius needed to assemble `H` and, if given, to evaluate the
    /// field over `window`.
    pub fn required_radius(&self, window: Option<&Window>) -> u64 {
        let mut r = 0;
        for a in &self.points {
            for b in &self.points {
                r = r.max((*a - *b).hex_distance());
            }
        }
        if let Some(w) = window {
            for y in &self.points {
                for corner in w.corners() {
                    r = r.max((corner - *y).hex_distance());
                }
            }
        }
        r
    }
}

/// The built-in boundary layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Four sites on a line, `f ≡ 1`.
    Example1Sym,
    /// Same sites, `f = −1` on the left pair and `+1` on the right pair.
    Example1Skew,
    /// Ten sites on two parallel segments, `f ≡ 1`.
    Example2,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Example1Sym, Preset::Example1Skew, Preset::Example2];

    pub fn layout(&self) -> (Vec<LatticeIndex>, Vec<Complex64>) {
        let one = Complex64::new(1.0, 0.0);
        let p = |v: &[(i64, i64)]| v.iter().map(|&q| LatticeIndex::from(q)).collect::<Vec<_>>();
        match self {
            Preset::Example1Sym => (p(&[(-5, 0), (-4, 0), (4, 0), (5, 0)]), vec![one; 4]),
            Preset::Example1Skew => (
                p(&[(-5, 0), (-4, 0), (4, 0), (5, 0)]),
                vec![-one, -one, one, one],
            ),
            Preset::Example2 => (
                p(&[
                    (-3, 1),
                    (-2, 1),
                    (-1, 1),
                    (0, 1),
                    (1, 1),
                    (-2, -1),
                    (-1, -1),
                    (0, -1),
                    (1, -1),
                    (2, -1),
                ]),
                vec![one; 10],
            ),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Example1Sym => "example1-sym",
            Preset::Example1Skew => "example1-skew",
            Preset::Example2 => "example2",
        })
    }
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| {
                format!("unknown preset '{s}' (expected example1-sym, example1-skew or example2)")
            })
    }
}

/// Densities `φ_i` at the boundary sites, in problem order.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityVector {
    pub phi: Vec<Complex64>,
}

/// Density with the diagnostics of the boundary system.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub density: DensityVector,
    /// `max_i |(HΦ)_i − f_i|`.
    pub residual: f64,
    pub det: Complex64,
    pub cond2: f64,
}

/// Inclusive rectangle of lattice indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub x1_min: i64,
    pub x1_max: i64,
    pub x2_min: i64,
    pub x2_max: i64,
}

impl Window {
    pub fn new(x1_min: i64, x1_max: i64, x2_min: i64, x2_max: i64) -> Result<Self, BoundaryError> {
        if x1_min > x1_max || x2_min > x2_max {
            return Err(BoundaryError::Invalid(format!(
                "empty window [{x1_min},{x1_max}]x[{x2_min},{x2_max}]"
            )));
        }
        Ok(Self {
            x1_min,
            x1_max,
            x2_min,
            x2_max,
        })
    }

    /// `[−r, r]²`.
    pub fn square(r: i64) -> Self {
        Self {
            x1_min: -r,
            x1_max: r,
            x2_min: -r,
            x2_max: r,
        }
    }

    pub fn width(&self) -> usize {
        (self.x1_max - self.x1_min + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.x2_max - self.x2_min + 1) as usize
    }

    pub fn contains(&self, x: LatticeIndex) -> bool {
        (self.x1_min..=self.x1_max).contains(&x.x1) && (self.x2_min..=self.x2_max).contains(&x.x2)
    }

    fn corners(&self) -> [LatticeIndex; 4] {
        [
            LatticeIndex::new(self.x1_min, self.x2_min),
            LatticeIndex::new(self.x1_min, self.x2_max),
            LatticeIndex::new(self.x1_max, self.x2_min),
            LatticeIndex::new(self.x1_max, self.x2_max),
        ]
    }

    /// Points with `x1` outer and `x2` inner.
    pub fn points(&self) -> impl Iterator<Item = LatticeIndex> + '_ {
        (self.x1_min..=self.x1_max)
            .flat_map(move |a| (self.x2_min..=self.x2_max).map(move |b| LatticeIndex::new(a, b)))
    }
}

/// Field values over a window, with boundary sites flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    window: Window,
    values: Vec<Complex64>,
    boundary: Vec<bool>,
}

impl FieldGrid {
    pub fn from_parts(
        window: Window,
        values: Vec<Complex64>,
        boundary: Vec<bool>,
    ) -> Result<Self, BoundaryError> {
        let n = window.width() * window.height();
        if values.len() != n || boundary.len() != n {
            return Err(BoundaryError::Invalid(format!(
                "field grid needs {n} values"
            )));
        }
        Ok(Self {
            window,
            values,
            boundary,
        })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    fn offset(&self, x: LatticeIndex) -> Option<usize> {
        self.window.contains(x).then(|| {
            (x.x1 - self.window.x1_min) as usize * self.window.height()
                + (x.x2 - self.window.x2_min) as usize
        })
    }

    pub fn get(&self, x: LatticeIndex) -> Option<Complex64> {
        self.offset(x).map(|i| self.values[i])
    }

    pub fn is_boundary(&self, x: LatticeIndex) -> bool {
        self.offset(x).is_some_and(|i| self.boundary[i])
    }

    /// `(x, u(x), is_boundary)` in window order.
    pub fn iter(&self) -> impl Iterator<Item = (LatticeIndex, Complex64, bool)> + '_ {
        self.window
            .points()
            .zip(self.values.iter().zip(&self.boundary))
            .map(|(x, (v, b))| (x, *v, *b))
    }
}

fn diff(x: LatticeIndex, y: LatticeIndex) -> Result<LatticeIndex, EngineError> {
    x.checked_sub(y)
        .ok_or(EngineError::Lattice(LatticeError::Overflow("x - y")))
}

/// `Vφ(x) = Σ_{y∈∂R} G(x − y) φ(y)`.
pub fn single_layer<F>(
    phi: F,
    x: LatticeIndex,
    table: &GreenTable,
    region: &Region,
) -> Result<Complex64, EngineError>
where
    F: Fn(LatticeIndex) -> Complex64,
{
    region
        .boundary()
        .iter()
        .try_fold(Complex64::new(0.0, 0.0), |acc, &y| {
            Ok(acc + table.green(diff(x, y)?)? * phi(y))
        })
}

/// `Wφ(x) = Σ_{y∈∂R} (T_y G(x − y) + δ_{x,y}) φ(y)`, where `T_y` is the
/// normal difference in `y` summed over every side `y` lies on.
pub fn double_layer<F>(
    phi: F,
    x: LatticeIndex,
    table: &GreenTable,
    region: &Region,
) -> Result<Complex64, EngineError>
where
    F: Fn(LatticeIndex) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for &y in region.boundary() {
        let g = table.green(diff(x, y)?)?;
        let mut t = Complex64::new(0.0, 0.0);
        for j in region.sides(&y) {
            let inner = diff(y, DIRECTIONS[j as usize - 1])?;
            t += g - table.green(diff(x, inner)?)?;
        }
        let delta = if x == y { 1.0 } else { 0.0 };
        acc += (t + delta) * phi(y);
    }
    Ok(acc)
}

/// `max_{x∈R°} |u(x) − Σ_{y∈∂R} (u(y) T_y G(x − y) − G(x − y) T u(y))|`.
pub fn representation_check<U>(
    u: U,
    region: &Region,
    table: &GreenTable,
) -> Result<f64, EngineError>
where
    U: Fn(LatticeIndex) -> Complex64,
{
    let mut worst = 0.0f64;
    for &x in region.interior() {
        let mut sum = Complex64::new(0.0, 0.0);
        for &y in region.boundary() {
            let g = |z: LatticeIndex| diff(x, z).and_then(|d| table.green(d));
            let gy = g(y)?;
            let mut tg = Complex64::new(0.0, 0.0);
            for j in region.sides(&y) {
                tg += gy - g(diff(y, DIRECTIONS[j as usize - 1])?)?;
            }
            let tu = total_normal_difference(&u, y, region)?;
            sum += u(y) * tg - gy * tu;
        }
        worst = worst.max((u(x) - sum).norm());
    }
    Ok(worst)
}

/// `H_ij = G(y_i − y_j)`.
pub fn assemble_h(
    problem: &BoundaryProblem,
    table: &GreenTable,
) -> Result<DenseMatrix, EngineError> {
    let m = problem.len();
    let mut h = DenseMatrix::zeros(m, m);
    for (i, &yi) in problem.points.iter().enumerate() {
        for (j, &yj) in problem.points.iter().enumerate() {
            h[(i, j)] = table.green(diff(yi, yj)?)?;
        }
    }
    Ok(h)
}

/// Solves `HΦ = F`. A system whose pivots fail the singularity threshold is
/// reported with `|det H|` and `κ₂`.
pub fn solve_density(
    problem: &BoundaryProblem,
    table: &GreenTable,
) -> Result<SolveReport, BoundaryError> {
    let h = assemble_h(problem, table)?;
    let lu = match LuFactor::new(&h) {
        Ok(lu) => lu,
        Err(LinalgError::SingularMatrix { .. }) => {
            let det = determinant(&h)?.norm();
            return Err(BoundaryError::NearSingularBoundary {
                det,
                cond2: f64::INFINITY,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let phi = lu.solve_vec(&problem.data)?;
    let residual = h
        .matvec(&phi)
        .iter()
        .zip(&problem.data)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let cond2 = cond2_with_factor(&h, &lu)?;
    Ok(SolveReport {
        density: DensityVector { phi },
        residual,
        det: lu.determinant(),
        cond2,
    })
}

/// `u(x) = Σ_i G(x − y_i) φ_i` over the window.
pub fn eval_field(
    problem: &BoundaryProblem,
    density: &DensityVector,
    table: &GreenTable,
    window: &Window,
) -> Result<FieldGrid, BoundaryError> {
    if density.phi.len() != problem.len() {
        return Err(BoundaryError::Invalid(format!(
            "density has {} entries for {} boundary points",
            density.phi.len(),
            problem.len()
        )));
    }
    let on_boundary: BTreeSet<LatticeIndex> = problem.points.iter().copied().collect();
    let mut values = Vec::with_capacity(window.width() * window.height());
    let mut boundary = Vec::with_capacity(values.capacity());
    for x in window.points() {
        let mut u = Complex64::new(0.0, 0.0);
        for (&y, &phi) in problem.points.iter().zip(&density.phi) {
            u += table.green(diff(x, y)?)? * phi;
        }
        values.push(u);
        boundary.push(on_boundary.contains(&x));
    }
    FieldGrid::from_parts(*window, values, boundary)
}

/// `(|T(x)|, |u(x)|·√|T(x)|)` along the ray at angle `direction` (radians,
/// physical coordinates), using the nearest lattice site at each unit step.
pub fn decay_profile(grid: &FieldGrid, direction: f64) -> Result<Vec<(f64, f64)>, BoundaryError> {
    let (c, s) = (direction.cos(), direction.sin());
    let sqrt3_2 = 3f64.sqrt() / 2.0;
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut last: Option<LatticeIndex> = None;
    let w = grid.window();
    let reach = (w.width() + w.height()) as f64 * 2.0;
    let mut r = 1.0;
    while r <= reach {
        let (cx, cy) = (r * c, r * s);
        let x2 = (cy / sqrt3_2).round();
        let x1 = (cx - x2 / 2.0).round();
        let x = LatticeIndex::new(x1 as i64, x2 as i64);
        r += 1.0;
        if last == Some(x) {
            continue;
        }
        last = Some(x);
        match grid.get(x) {
            Some(u) => {
                let (px, py) = x.to_cartesian();
                let radius = px.hypot(py);
                if radius > 0.0 {
                    out.push((radius, u.norm() * radius.sqrt()));
                }
            }
            None if !out.is_empty() => break,
            None => {}
        }
    }
    if out.is_empty() {
        return Err(BoundaryError::EmptyRay(direction));
    }
    Ok(out)
}

/// Vertical ray, the direction used in reports.
pub const DEFAULT_RAY: f64 = FRAC_PI_2;
