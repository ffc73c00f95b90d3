//! Geometry and discrete calculus on the triangular lattice.
//!
//! Sites are addressed by integer pairs `(x1, x2)`; the physical position of a
//! site is `(x1 + x2/2, x2·√3/2)`. Each site has six unit-distance neighbours in
//! the directions `e1 = (1,0)`, `e2 = (0,1)`, `e3 = e1 − e2`, `e4 = −e1`,
//! `e5 = −e2`, `e6 = −e3`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("lattice index overflow in {0}")]
    Overflow(&'static str),
    #[error("wavenumber k = {k} outside the admissible band (0, 2√2)")]
    WavenumberOutOfBand { k: f64 },
    #[error("epsilon must be finite and nonnegative, got {0}")]
    NegativeEpsilon(f64),
    #[error("point {0} is not a boundary point of the region")]
    NotBoundary(LatticeIndex),
    #[error("boundary point {0} has no interior neighbour")]
    DetachedBoundary(LatticeIndex),
    #[error("region has no interior points")]
    EmptyInterior,
    #[error("region is not the union of the neighbourhoods of its interior: {0} is not covered")]
    NotNeighbourhoodUnion(LatticeIndex),
}

/// A site of the triangular lattice in `Z²` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticeIndex {
    pub x1: i64,
    pub x2: i64,
}

pub const ORIGIN: LatticeIndex = LatticeIndex::new(0, 0);

/// The six neighbour directions `e1..e6`, in that order.
pub const DIRECTIONS: [LatticeIndex; 6] = [
    LatticeIndex::new(1, 0),
    LatticeIndex::new(0, 1),
    LatticeIndex::new(1, -1),
    LatticeIndex::new(-1, 0),
    LatticeIndex::new(0, -1),
    LatticeIndex::new(-1, 1),
];

impl LatticeIndex {
    pub const fn new(x1: i64, x2: i64) -> Self {
        Self { x1, x2 }
    }

    pub fn checked_add(self, rhs: Self) -> Option<Self> {
        Some(Self::new(
            self.x1.checked_add(rhs.x1)?,
            self.x2.checked_add(rhs.x2)?,
        ))
    }

    pub fn checked_sub(self, rhs: Self) -> Option<Self> {
        Some(Self::new(
            self.x1.checked_sub(rhs.x1)?,
            self.x2.checked_sub(rhs.x2)?,
        ))
    }

    pub fn checked_neg(self) -> Option<Self> {
        Some(Self::new(self.x1.checked_neg()?, self.x2.checked_neg()?))
    }

    /// `|x1| + |x2|`.
    pub fn manhattan(self) -> u64 {
        self.x1.unsigned_abs() + self.x2.unsigned_abs()
    }

    /// Graph distance on the triangular lattice: `max(|x1|, |x2|, |x1 + x2|)`.
    pub fn hex_distance(self) -> u64 {
        let sum = (self.x1 as i128 + self.x2 as i128).unsigned_abs() as u64;
        self.x1.unsigned_abs().max(self.x2.unsigned_abs()).max(sum)
    }

    pub fn to_cartesian(self) -> (f64, f64) {
        to_cartesian(self)
    }

    pub fn neighbors(self) -> [LatticeIndex; 6] {
        neighbors(self)
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

impl From<(i64, i64)> for LatticeIndex {
    fn from((x1, x2): (i64, i64)) -> Self {
        Self::new(x1, x2)
    }
}

// Operators panic on overflow instead of wrapping; use the `checked_*`
// methods where the inputs are not known to be desk-scale.
impl Add for LatticeIndex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs)
            .expect("lattice index overflow in add")
    }
}

impl Sub for LatticeIndex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs)
            .expect("lattice index overflow in sub")
    }
}

impl Neg for LatticeIndex {
    type Output = Self;
    fn neg(self) -> Self {
        self.checked_neg().expect("lattice index overflow in neg")
    }
}

/// Wavenumber with an optional imaginary shift `k̃² = k² + iε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber {
    k: f64,
    epsilon: f64,
}

impl Wavenumber {
    /// Upper end of the admissible band, `2√2`.
    pub const K_MAX: f64 = 2.0 * std::f64::consts::SQRT_2;

    pub fn new(k: f64, epsilon: f64) -> Result<Self, LatticeError> {
        if !(k.is_finite() && k > 0.0 && k < Self::K_MAX) {
            return Err(LatticeError::WavenumberOutOfBand { k });
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(LatticeError::NegativeEpsilon(epsilon));
        }
        Ok(Self { k, epsilon })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The shifted square `k² + iε` used everywhere in the engine.
    pub fn k2(&self) -> Complex64 {
        Complex64::new(self.k * self.k, self.epsilon)
    }

    /// `k = 2`: every `γ_n` is singular there, so the zero closing guess fails.
    pub fn is_degenerate(&self) -> bool {
        (self.k * self.k - 4.0).abs() < 1e-12
    }
}

pub fn to_cartesian(x: LatticeIndex) -> (f64, f64) {
    let x1 = x.x1 as f64;
    let x2 = x.x2 as f64;
    (x1 + 0.5 * x2, x2 * 3f64.sqrt() / 2.0)
}

/// Neighbours in the fixed order `x+e1, …, x+e6`.
pub fn neighbors(x: LatticeIndex) -> [LatticeIndex; 6] {
    DIRECTIONS.map(|e| x + e)
}

/// `(Δ_d + k²) u(x)` for an infallible field.
pub fn apply_helmholtz<F>(u: F, x: LatticeIndex, k2: Complex64) -> Complex64
where
    F: Fn(LatticeIndex) -> Complex64,
{
    let ring: Complex64 = neighbors(x).into_iter().map(&u).sum();
    ring + (k2 - 6.0) * u(x)
}

/// `(Δ_d + k²) u(x)` for a field whose evaluation can fail.
pub fn try_apply_helmholtz<F, E>(u: F, x: LatticeIndex, k2: Complex64) -> Result<Complex64, E>
where
    F: Fn(LatticeIndex) -> Result<Complex64, E>,
{
    let mut ring = Complex64::new(0.0, 0.0);
    for v in neighbors(x) {
        ring += u(v)?;
    }
    Ok(ring + (k2 - 6.0) * u(x)?)
}

/// `4(sin²(ξ1/2) + sin²(ξ2/2) + sin²((ξ1−ξ2)/2))`, the value of `k²` carried
/// by the plane wave `e^{iξ·x}`.
pub fn dispersion(xi: (f64, f64)) -> f64 {
    let s = |t: f64| (0.5 * t).sin().powi(2);
    4.0 * (s(xi.0) + s(xi.1) + s(xi.0 - xi.1))
}

/// A finite region split into interior and boundary sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    interior: BTreeSet<LatticeIndex>,
    boundary: BTreeSet<LatticeIndex>,
    side_of: BTreeMap<LatticeIndex, u8>,
}

impl Region {
    /// Interior = points whose whole neighbourhood lies in the set; boundary =
    /// the rest. Every boundary point must touch the interior.
    pub fn from_points<I>(points: I) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = LatticeIndex>,
    {
        let all: BTreeSet<LatticeIndex> = points.into_iter().collect();
        let mut interior = BTreeSet::new();
        for &x in &all {
            let mut covered = true;
            for e in DIRECTIONS {
                let v = x.checked_add(e).ok_or(LatticeError::Overflow("region"))?;
                if !all.contains(&v) {
                    covered = false;
                    break;
                }
            }
            if covered {
                interior.insert(x);
            }
        }
        if interior.is_empty() {
            return Err(LatticeError::EmptyInterior);
        }
        let boundary: BTreeSet<_> = all.difference(&interior).copied().collect();
        let mut side_of = BTreeMap::new();
        for &y in &boundary {
            let side = first_side(&interior, y).ok_or(LatticeError::DetachedBoundary(y))?;
            side_of.insert(y, side);
        }
        Ok(Self {
            interior,
            boundary,
            side_of,
        })
    }

    pub fn interior(&self) -> &BTreeSet<LatticeIndex> {
        &self.interior
    }

    pub fn boundary(&self) -> &BTreeSet<LatticeIndex> {
        &self.boundary
    }

    pub fn contains(&self, x: &LatticeIndex) -> bool {
        self.interior.contains(x) || self.boundary.contains(x)
    }

    /// Interior and boundary together.
    pub fn points(&self) -> BTreeSet<LatticeIndex> {
        self.interior.union(&self.boundary).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.interior.len() + self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The fixed side `j ∈ 1..=6` of a boundary point: the smallest `j` with
    /// `y − e_j` interior.
    pub fn side_of(&self, y: &LatticeIndex) -> Option<u8> {
        self.side_of.get(y).copied()
    }

    /// Every side `j` with `y − e_j` interior. Empty for non-boundary points.
    pub fn sides(&self, y: &LatticeIndex) -> Vec<u8> {
        if !self.boundary.contains(y) {
            return Vec::new();
        }
        (1..=6u8)
            .filter(|&j| {
                self.interior
                    .contains(&(*y - DIRECTIONS[usize::from(j - 1)]))
            })
            .collect()
    }
}

fn first_side(interior: &BTreeSet<LatticeIndex>, y: LatticeIndex) -> Option<u8> {
    (1..=6u8).find(|&j| {
        y.checked_sub(DIRECTIONS[usize::from(j - 1)])
            .is_some_and(|v| interior.contains(&v))
    })
}

/// The hexagon `H_N`: interior `H_{N−1}`, boundary `H_N \ H_{N−1}`.
///
/// `H_0` is the single origin with no boundary, following the recurrence base.
pub fn hex_shell(n: u32) -> Region {
    if n == 0 {
        return Region {
            interior: BTreeSet::from([ORIGIN]),
            boundary: BTreeSet::new(),
            side_of: BTreeMap::new(),
        };
    }
    let r = i64::from(n);
    let mut interior = BTreeSet::new();
    let mut boundary = BTreeSet::new();
    for x1 in -r..=r {
        for x2 in -r..=r {
            let x = LatticeIndex::new(x1, x2);
            match x.hex_distance() {
                d if d < u64::from(n) => {
                    interior.insert(x);
                }
                d if d == u64::from(n) => {
                    boundary.insert(x);
                }
                _ => {}
            }
        }
    }
    let side_of = boundary
        .iter()
        .map(|&y| {
            (
                y,
                first_side(&interior, y).expect("hexagon boundary touches interior"),
            )
        })
        .collect();
    Region {
        interior,
        boundary,
        side_of,
    }
}

/// `u(y) − u(y − e_j)` with `j` the fixed side of `y`.
pub fn normal_difference<F>(
    u: F,
    y: LatticeIndex,
    region: &Region,
) -> Result<Complex64, LatticeError>
where
    F: Fn(LatticeIndex) -> Complex64,
{
    let j = region.side_of(&y).ok_or(LatticeError::NotBoundary(y))?;
    Ok(u(y) - u(y - DIRECTIONS[usize::from(j - 1)]))
}

/// `Σ_j (u(y) − u(y − e_j))` over every side of `y`.
///
/// This is the normal difference that makes the discrete Green identities and
/// the representation formula exact when a boundary point has several
/// interior neighbours.
pub fn total_normal_difference<F>(
    u: F,
    y: LatticeIndex,
    region: &Region,
) -> Result<Complex64, LatticeError>
where
    F: Fn(LatticeIndex) -> Complex64,
{
    let sides = region.sides(&y);
    if sides.is_empty() {
        return Err(LatticeError::NotBoundary(y));
    }
    let uy = u(y);
    Ok(sides
        .into_iter()
        .map(|j| uy - u(y - DIRECTIONS[usize::from(j - 1)]))
        .sum())
}

/// Residuals `(LHS − RHS)` of the discrete Green's first and second identities
/// on `region`.
///
/// The first identity is taken in its edge-balanced form: the products
/// `∇u·∇v` along interior–interior edges carry weight ½ since both endpoints
/// see them, and boundary sums use [`total_normal_difference`].
pub fn green_identity_residuals<U, V>(
    u: U,
    v: V,
    region: &Region,
) -> Result<(Complex64, Complex64), LatticeError>
where
    U: Fn(LatticeIndex) -> Complex64,
    V: Fn(LatticeIndex) -> Complex64,
{
    // R must be exactly the union of F_x over the interior.
    let mut covered = region.interior.clone();
    for &x in &region.interior {
        covered.extend(neighbors(x));
    }
    if let Some(y) = region.boundary.iter().find(|y| !covered.contains(y)) {
        return Err(LatticeError::NotNeighbourhoodUnion(*y));
    }
    if let Some(y) = covered.iter().find(|y| !region.contains(y)) {
        return Err(LatticeError::NotNeighbourhoodUnion(*y));
    }

    let zero = Complex64::new(0.0, 0.0);
    let lap = |f: &dyn Fn(LatticeIndex) -> Complex64, x: LatticeIndex| apply_helmholtz(f, x, zero);

    let mut first_lhs = zero;
    let mut second_lhs = zero;
    for &x in &region.interior {
        let (ux, vx) = (u(x), v(x));
        for w in neighbors(x) {
            let weight = if region.interior.contains(&w) {
                0.5
            } else {
                1.0
            };
            first_lhs += weight * (u(w) - ux) * (v(w) - vx);
        }
        let (lap_u, lap_v) = (lap(&u, x), lap(&v, x));
        first_lhs += ux * lap_v;
        second_lhs += ux * lap_v - vx * lap_u;
    }

    let mut first_rhs = zero;
    let mut second_rhs = zero;
    for &y in &region.boundary {
        let tu = total_normal_difference(&u, y, region)?;
        let tv = total_normal_difference(&v, y, region)?;
        first_rhs += u(y) * tv;
        second_rhs += u(y) * tv - v(y) * tu;
    }
    Ok((first_lhs - first_rhs, second_lhs - second_rhs))
}
