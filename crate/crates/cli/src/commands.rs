use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use trigreen::{
    build_table, convergence_study, eval_field, green_integral_batch, solve_density, write_table,
    BoundaryError, BoundaryProblem, EngineError, FieldGrid, GreenTable, GuessKind, GuessSpec,
    IntegralForm, LatticeError, LatticeIndex, QuadratureError, QuadratureRule, QuadratureSpec,
    SolveReport, Wavenumber, Window,
};

use crate::config::{ConfigError, RunConfig};
use crate::field_csv::{rows_from_grid, write_rows, CsvError};

pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_WINDOW: i64 = 40;
/// Truncation for `green` and `oracle` runs.
pub const DEFAULT_N: usize = 283;
/// Truncation for `solve` and `field`; large enough for the default window.
pub const DEFAULT_SOLVE_N: usize = 567;
pub const DEFAULT_M: usize = 40;
pub const DEFAULT_P0: usize = 71;
pub const DEFAULT_DISTANCE: u64 = 3;
pub const MAX_ORACLE_DISTANCE: u64 = 6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Engine(String),
    #[error("{path}: {message}")]
    Output { path: String, message: String },
}

impl CliError {
    /// 1 for configuration and file problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => 1,
            CliError::Engine(_) => 2,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Engine(e.to_string())
    }
}

impl From<BoundaryError> for CliError {
    fn from(e: BoundaryError) -> Self {
        match e {
            BoundaryError::NearSingularBoundary { det, cond2 } => CliError::Engine(format!(
                "boundary system is near singular: |det H| = {det:.6e}, cond2 = {cond2:.6e}"
            )),
            other => CliError::Engine(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_err(path, e))
}

fn wavenumber(cfg: &RunConfig) -> Result<Wavenumber, ConfigError> {
    let k = cfg.k.ok_or_else(|| ConfigError::new("k", "required"))?;
    Wavenumber::new(k, cfg.eps.unwrap_or(DEFAULT_EPS)).map_err(|e| match e {
        LatticeError::NegativeEpsilon(_) => ConfigError::new("eps", e.to_string()),
        _ => ConfigError::new("k", e.to_string()),
    })
}

fn guess(cfg: &RunConfig) -> Result<GuessSpec, ConfigError> {
    match (cfg.guess.unwrap_or(GuessKind::Shift), cfg.h) {
        (GuessKind::Heuristic, h) => Ok(GuessSpec::Heuristic { h }),
        (_, Some(_)) => Err(ConfigError::new("h", "only used with guess = heuristic")),
        (GuessKind::Zero, None) => Ok(GuessSpec::Zero),
        (GuessKind::Shift, None) => Ok(GuessSpec::Shift),
    }
}

fn truncation(cfg: &RunConfig, default: usize) -> Result<usize, ConfigError> {
    let n = cfg.n.unwrap_or(default);
    if n.is_multiple_of(2) {
        return Err(ConfigError::new(
            "n",
            format!("truncation must be odd, got {n}"),
        ));
    }
    Ok(n)
}

fn radius(m: usize, n: usize) -> Result<usize, ConfigError> {
    if m == 0 || m > n {
        return Err(ConfigError::new(
            "m",
            format!("radius must satisfy 1 <= m <= n = {n}, got {m}"),
        ));
    }
    Ok(m)
}

fn complex(z: Complex64) -> String {
    format!("{:.10e} {:+.10e}i", z.re, z.im)
}

pub fn cmd_green(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let k = wavenumber(cfg)?;
    let spec = guess(cfg)?;
    let n = truncation(cfg, DEFAULT_N)?;
    let m = radius(cfg.m.unwrap_or(DEFAULT_M.min(n)), n)?;
    let table = build_table(&k, n, m, &spec)?;
    if let Some(path) = &cfg.out {
        let mut w = create(path)?;
        write_table(&table, &mut w)
            .and_then(|_| w.flush())
            .map_err(|e| io_err(path, e))?;
    }
    let (res, count) = table.defining_residual();
    let g = |x: i64, y: i64| table.green(LatticeIndex::new(x, y));
    let lines = [
        format!(
            "k = {}, eps = {:e}, N = {n}, M = {m}, guess = {}",
            k.k(),
            k.epsilon(),
            table.guess()
        ),
        format!("entries = {}", table.len()),
        format!("G(0,0) = {}", complex(g(0, 0)?)),
        format!("G(1,0) = {}", complex(g(1, 0)?)),
        format!("max defining residual = {res:.3e} over {count} points"),
    ];
    print_lines(out, &lines)
}

fn print_lines(out: &mut dyn Write, lines: &[String]) -> Result<(), CliError> {
    for l in lines {
        writeln!(out, "{l}").map_err(|e| io_err(Path::new("<stdout>"), e))?;
    }
    Ok(())
}

pub fn cmd_convergence(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let k = wavenumber(cfg)?;
    let primary = guess(cfg)?;
    let p0 = cfg.p0.unwrap_or(DEFAULT_P0);
    if p0 == 0 {
        return Err(ConfigError::new("p0", "must be positive").into());
    }
    let ms = cfg.ms.clone().unwrap_or_else(|| vec![0, 1, 2]);
    if ms.is_empty() || ms.iter().any(|&m| m > 20) {
        return Err(ConfigError::new("ms", "give between one and several values in 0..=20").into());
    }
    let mut columns = vec![(primary.kind().to_string(), primary)];
    if primary.kind() != GuessKind::Heuristic {
        columns.push(("heuristic".into(), GuessSpec::Heuristic { h: None }));
    }
    let mut results = Vec::new();
    for (name, spec) in &columns {
        let rows = convergence_study(&k, p0, &ms, spec)
            .map_err(|e| CliError::Engine(format!("{name} column: {e}")))?;
        results.push(rows);
    }
    let mut lines = vec![format!(
        "k = {}, eps = {:e}, p0 = {p0}, wedge radius = {}",
        k.k(),
        k.epsilon(),
        2 * p0 - 1
    )];
    let mut header = format!("{:>3} {:>8}", "m", "N_m");
    for (name, _) in &columns {
        header.push_str(&format!(" {name:>14}"));
    }
    lines.push(header);
    for (i, &m) in ms.iter().enumerate() {
        let mut row = format!("{m:>3} {:>8}", results[0][i].n_trunc);
        for col in &results {
            match col[i].difference {
                Some(d) => row.push_str(&format!(" {d:>14.4e}")),
                None => row.push_str(&format!(" {:>14}", "-")),
            }
        }
        lines.push(row);
    }
    print_lines(out, &lines)
}

fn window(cfg: &RunConfig) -> Window {
    cfg.window.unwrap_or_else(|| Window::square(DEFAULT_WINDOW))
}

fn problem(cfg: &RunConfig, k: Wavenumber) -> Result<BoundaryProblem, CliError> {
    match (cfg.preset, cfg.points.is_empty()) {
        (Some(_), false) => {
            Err(ConfigError::new("preset", "give either a preset or point lines, not both").into())
        }
        (Some(p), true) => Ok(BoundaryProblem::preset(p, k)),
        (None, true) => {
            Err(ConfigError::new("point", "boundary is empty; give a preset or point lines").into())
        }
        (None, false) => {
            let (points, data) = cfg.points.iter().copied().unzip();
            BoundaryProblem::new(points, data, k)
                .map_err(|e| ConfigError::new("point", e.to_string()).into())
        }
    }
}

struct Solved {
    problem: BoundaryProblem,
    table: GreenTable,
    report: SolveReport,
    grid: FieldGrid,
}

fn solve(cfg: &RunConfig) -> Result<Solved, CliError> {
    let k = wavenumber(cfg)?;
    let spec = guess(cfg)?;
    let problem = problem(cfg, k)?;
    let w = window(cfg);
    let n = truncation(cfg, DEFAULT_SOLVE_N)?;
    let need = problem.required_radius(Some(&w)) as usize;
    let m = match cfg.m {
        Some(m) if m < need => {
            return Err(ConfigError::new(
                "m",
                format!("radius {m} is too small; boundary and window need {need}"),
            )
            .into())
        }
        Some(m) => m,
        None => need.max(1),
    };
    if m > n {
        return Err(ConfigError::new(
            "n",
            format!("truncation {n} is below the required radius {m}"),
        )
        .into());
    }
    let table = build_table(&k, n, m, &spec)?;
    let report = solve_density(&problem, &table)?;
    let grid = eval_field(&problem, &report.density, &table, &w)?;
    Ok(Solved {
        problem,
        table,
        report,
        grid,
    })
}

fn write_csv(grid: &FieldGrid, out: &mut dyn Write, path: &Path) -> Result<(), CliError> {
    write_rows(&rows_from_grid(grid), out).map_err(|e: CsvError| io_err(path, e))
}

pub fn cmd_solve(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let s = solve(cfg)?;
    let k = s.table.wavenumber();
    let mut lines = vec![
        format!(
            "k = {}, eps = {:e}, N = {}, M = {}, guess = {}",
            k.k(),
            k.epsilon(),
            s.table.truncation(),
            s.table.radius(),
            s.table.guess()
        ),
        format!("{:>6} {:>6} {:>24} {:>24}", "x1", "x2", "f", "phi"),
    ];
    for ((y, f), phi) in s
        .problem
        .points()
        .iter()
        .zip(s.problem.data())
        .zip(&s.report.density.phi)
    {
        lines.push(format!(
            "{:>6} {:>6} {:>24} {:>24}",
            y.x1,
            y.x2,
            complex(*f),
            complex(*phi)
        ));
    }
    lines.push(format!("boundary residual = {:.3e}", s.report.residual));
    lines.push(format!("|det H| = {:.6e}", s.report.det.norm()));
    lines.push(format!("cond2(H) = {:.6}", s.report.cond2));
    if let Some(path) = &cfg.out {
        let mut w = create(path)?;
        write_csv(&s.grid, &mut w, path)?;
        w.flush().map_err(|e| io_err(path, e))?;
        lines.push(format!("field written to {}", path.display()));
    }
    print_lines(out, &lines)
}

/// Field CSV to `out` path, or to `stdout` without one.
pub fn cmd_field(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let s = solve(cfg)?;
    match &cfg.out {
        Some(path) => {
            let mut w = create(path)?;
            write_csv(&s.grid, &mut w, path)?;
            w.flush().map_err(|e| io_err(path, e))
        }
        None => write_csv(&s.grid, stdout, Path::new("<stdout>")),
    }
}

pub fn cmd_oracle(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let k = wavenumber(cfg)?;
    let spec = guess(cfg)?;
    let n = truncation(cfg, DEFAULT_N)?;
    let d = cfg.distance.unwrap_or(DEFAULT_DISTANCE);
    if d > MAX_ORACLE_DISTANCE {
        return Err(ConfigError::new(
            "distance",
            format!("the quadrature oracle is limited to distance {MAX_ORACLE_DISTANCE}, got {d}"),
        )
        .into());
    }
    let rule = cfg.rule.unwrap_or(QuadratureRule::Simpson);
    let mesh = cfg.mesh.unwrap_or(2001);
    let qspec = QuadratureSpec::new(rule, mesh, k.epsilon()).map_err(|e| match e {
        QuadratureError::Epsilon(_) => ConfigError::new("eps", e.to_string()),
        _ => ConfigError::new("mesh", e.to_string()),
    })?;
    let form = cfg.form.unwrap_or(IntegralForm::Sigma);
    let table = build_table(&k, n, radius((d as usize).max(1), n)?, &spec)?;
    let xs: Vec<LatticeIndex> = table
        .entries()
        .filter(|&(i, j, _)| (i + j) as u64 <= d)
        .map(|(i, j, _)| LatticeIndex::new(i, j))
        .collect();
    let oracle = green_integral_batch(&xs, Complex64::new(k.k() * k.k(), 0.0), &qspec, form);
    let mut lines = vec![
        format!(
            "k = {}, eps = {:e}, engine N = {n} ({}), quadrature {rule} mesh {mesh} ({})",
            k.k(),
            k.epsilon(),
            table.guess(),
            match form {
                IntegralForm::Sigma => "sigma",
                IntegralForm::Rotated => "rotated",
            }
        ),
        format!(
            "{:>3} {:>3} {:>36} {:>36} {:>11} {:>11}",
            "i", "j", "engine", "quadrature", "rel_err", "estimate"
        ),
    ];
    for (x, o) in xs.iter().zip(&oracle) {
        let e = table.green(*x)?;
        lines.push(format!(
            "{:>3} {:>3} {:>36} {:>36} {:>11.3e} {:>11.3e}",
            x.x1,
            x.x2,
            complex(e),
            complex(o.value),
            (o.value - e).norm() / e.norm(),
            o.error_estimate
        ));
    }
    print_lines(out, &lines)
}
