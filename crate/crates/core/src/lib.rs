//! Lattice Green's functions for the discrete Helmholtz equation
//! `(Δ_d + k²)u = 0` on the triangular lattice, computed by a backward
//! transfer-matrix recursion over Manhattan shells, and an exterior Dirichlet
//! solver built on the single-layer potential.
//!
//! ```no_run
//! use trigreen::{build_table, GuessSpec, LatticeIndex, Wavenumber};
//!
//! let k = Wavenumber::new(2.0, 1e-6).unwrap();
//! let table = build_table(&k, 283, 20, &GuessSpec::Shift).unwrap();
//! let g = table.green(LatticeIndex::new(3, -1)).unwrap();
//! println!("{g}");
//! ```

pub mod boundary;
pub mod convergence;
pub mod engine;
pub mod lattice;
pub mod linalg;
pub mod quadrature;

pub use boundary::{
    assemble_h, decay_profile, double_layer, eval_field, representation_check, single_layer,
    solve_density, BoundaryError, BoundaryProblem, DensityVector, FieldGrid, Preset, SolveReport,
    Window, DEFAULT_RAY,
};
pub use convergence::{convergence_study, truncation, ConvergenceRow};
pub use engine::{
    assemble, assemble_even, assemble_odd, backward_chain, build_table, canonicalize, make_guess,
    orbit, read_table, wedge_len, write_table, EngineError, GreenTable, GuessKind, GuessSpec,
    InitialGuess, ShellSystem, SparseTriplets,
};
pub use lattice::{
    apply_helmholtz, dispersion, green_identity_residuals, hex_shell, neighbors, normal_difference,
    to_cartesian, total_normal_difference, LatticeError, LatticeIndex, Region, Wavenumber,
    DIRECTIONS, ORIGIN,
};
pub use linalg::{
    cond2_estimate, cond2_with_factor, determinant, lu_solve, DenseMatrix, LinalgError, LuFactor,
};
pub use num_complex::Complex64;
pub use quadrature::{
    green_integral, green_integral_batch, sigma, sigma_tilde, IntegralForm, OracleValue,
    QuadratureError, QuadratureRule, QuadratureSpec,
};
