//! Plain-text table format:
//!
//! ```text
//! # trigreen green table
//! k 2.0000000000000000e0
//! epsilon 9.9999999999999995e-7
//! N 283
//! M 40
//! guess shift
//! h none
//! lambda 0.0000000000000000e0 9.9999975000000002e-1
//! values 441
//! 0 0 <re> <im>
//! ...
//! ```
//!
//! Floats carry 17 significant digits, so a read/write cycle is exact.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::guess::{GuessKind, InitialGuess};
use super::table::{wedge_len, GreenTable};
use super::EngineError;
use crate::lattice::Wavenumber;

const MAGIC: &str = "# trigreen green table";

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(z: Option<Complex64>) -> String {
    match z {
        Some(z) => format!("{} {}", fmt_f(z.re), fmt_f(z.im)),
        None => "none".into(),
    }
}

pub fn write_table<W: Write>(table: &GreenTable, mut out: W) -> std::io::Result<()> {
    let g = table.guess();
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "k {}", fmt_f(table.wavenumber().k()))?;
    writeln!(out, "epsilon {}", fmt_f(table.wavenumber().epsilon()))?;
    writeln!(out, "N {}", table.truncation())?;
    writeln!(out, "M {}", table.radius())?;
    writeln!(out, "guess {}", g.kind)?;
    writeln!(out, "h {}", fmt_opt(g.h))?;
    writeln!(out, "lambda {}", fmt_opt(g.lambda))?;
    writeln!(out, "values {}", table.len())?;
    for (i, j, v) in table.entries() {
        writeln!(out, "{i} {j} {} {}", fmt_f(v.re), fmt_f(v.im))?;
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> Result<String, EngineError> {
        self.line += 1;
        match self.inner.next() {
            Some(Ok(l)) => Ok(l),
            Some(Err(e)) => Err(self.err(e.to_string())),
            None => Err(self.err("unexpected end of file".into())),
        }
    }

    fn err(&self, message: String) -> EngineError {
        EngineError::Format {
            line: self.line,
            message,
        }
    }

    fn field(&mut self, key: &str) -> Result<Vec<String>, EngineError> {
        let l = self.next_line()?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(self.err(format!("expected '{key}'")));
        }
        Ok(parts.map(str::to_owned).collect())
    }

    fn parse<T: std::str::FromStr>(&self, s: &str) -> Result<T, EngineError> {
        s.parse()
            .map_err(|_| self.err(format!("cannot parse '{s}'")))
    }

    fn single<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, EngineError> {
        let f = self.field(key)?;
        if f.len() != 1 {
            return Err(self.err(format!("'{key}' takes one value")));
        }
        self.parse(&f[0])
    }

    fn complex_opt(&mut self, key: &str) -> Result<Option<Complex64>, EngineError> {
        let f = self.field(key)?;
        match f.as_slice() {
            [none] if none == "none" => Ok(None),
            [re, im] => Ok(Some(Complex64::new(self.parse(re)?, self.parse(im)?))),
            _ => Err(self.err(format!("'{key}' takes 'none' or two numbers"))),
        }
    }
}

pub fn read_table<R: BufRead>(input: R) -> Result<GreenTable, EngineError> {
    let mut lines = Lines {
        inner: input.lines(),
        line: 0,
    };
    if lines.next_line()? != MAGIC {
        return Err(lines.err("missing table header".into()));
    }
    let k: f64 = lines.single("k")?;
    let epsilon: f64 = lines.single("epsilon")?;
    let wavenumber = Wavenumber::new(k, epsilon)?;
    let n_trunc: usize = lines.single("N")?;
    let radius: usize = lines.single("M")?;
    let kind_s: String = lines.single("guess")?;
    let kind: GuessKind = kind_s.parse().map_err(|e: String| lines.err(e))?;
    let h = lines.complex_opt("h")?;
    let lambda = lines.complex_opt("lambda")?;
    let count: usize = lines.single("values")?;
    if count != wedge_len(radius) {
        return Err(lines.err(format!("{count} values do not fill radius {radius}")));
    }
    let mut values = Vec::with_capacity(count);
    let mut expected =
        (0..=radius).flat_map(|n| (0..=n / 2).map(move |j| ((n - j) as i64, j as i64)));
    for _ in 0..count {
        let l = lines.next_line()?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(lines.err("expected 'i j re im'".into()));
        }
        let (i, j): (i64, i64) = (lines.parse(parts[0])?, lines.parse(parts[1])?);
        if Some((i, j)) != expected.next() {
            return Err(lines.err(format!("entry ({i},{j}) out of order")));
        }
        values.push(Complex64::new(
            lines.parse(parts[2])?,
            lines.parse(parts[3])?,
        ));
    }
    let guess = InitialGuess {
        kind,
        epsilon,
        h,
        lambda,
    };
    GreenTable::from_parts(wavenumber, n_trunc, radius, guess, values)
}
