//! Command-line front end for the `trigreen` engine.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod field_csv;

pub use commands::CliError;
pub use config::{ConfigError, RunConfig};
pub use field_csv::{read_rows, rows_from_grid, write_rows, CsvError, FieldRow, HEADER};

#[derive(Debug, Parser)]
#[command(
    name = "trigreen",
    version,
    about = "Triangular-lattice Helmholtz Green's functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a Green's function table.
    Green(Flags),
    /// Compare tables at growing truncations.
    Convergence(Flags),
    /// Solve a boundary problem and report the density.
    Solve(Flags),
    /// Write the field of a boundary problem as CSV.
    Field(Flags),
    /// Compare the engine with Brillouin-zone quadrature.
    Oracle(Flags),
}

/// Flags override the matching keys of `--config`.
#[derive(Debug, Args)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    guess: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    #[arg(long)]
    preset: Option<String>,
    /// `r` or `x1min,x1max,x2min,x2max`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    p0: Option<String>,
    /// Comma-separated doubling steps.
    #[arg(long)]
    ms: Option<String>,
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    mesh: Option<String>,
    #[arg(long)]
    distance: Option<String>,
    #[arg(long)]
    form: Option<String>,
}

impl Flags {
    fn into_config(self) -> Result<RunConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let pairs = [
            ("k", self.k),
            ("eps", self.eps),
            ("n", self.n),
            ("m", self.m),
            ("guess", self.guess),
            ("h", self.h),
            ("preset", self.preset),
            ("window", self.window),
            ("out", self.out),
            ("p0", self.p0),
            ("ms", self.ms),
            ("rule", self.rule),
            ("mesh", self.mesh),
            ("distance", self.distance),
            ("form", self.form),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        Ok(cfg)
    }
}

type CommandFn = fn(&RunConfig, &mut dyn Write) -> Result<(), CliError>;

/// Runs one command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let (flags, cmd): (Flags, CommandFn) = match cli.command {
        Command::Green(f) => (f, commands::cmd_green),
        Command::Convergence(f) => (f, commands::cmd_convergence),
        Command::Solve(f) => (f, commands::cmd_solve),
        Command::Field(f) => (f, commands::cmd_field),
        Command::Oracle(f) => (f, commands::cmd_oracle),
    };
    let result = flags
        .into_config()
        .map_err(CliError::from)
        .and_then(|cfg| cmd(&cfg, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
