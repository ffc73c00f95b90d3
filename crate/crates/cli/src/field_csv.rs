//! Field CSV: header `x1,x2,cx,cy,re,im,abs,b`, one row per window point,
//! floats with 17 significant digits so files re-emit byte for byte.

use std::io::{Read, Write};

use trigreen::{to_cartesian, FieldGrid, LatticeIndex};

pub const HEADER: [&str; 8] = ["x1", "x2", "cx", "cy", "re", "im", "abs", "b"];

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRow {
    pub x: LatticeIndex,
    pub cx: f64,
    pub cy: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub boundary: bool,
}

pub fn rows_from_grid(grid: &FieldGrid) -> Vec<FieldRow> {
    grid.iter()
        .map(|(x, u, b)| {
            let (cx, cy) = to_cartesian(x);
            FieldRow {
                x,
                cx,
                cy,
                re: u.re,
                im: u.im,
                abs: u.norm(),
                boundary: b,
            }
        })
        .collect()
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_rows<W: Write>(rows: &[FieldRow], out: W) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.x.x1.to_string(),
            r.x.x2.to_string(),
            fmt_f(r.cx),
            fmt_f(r.cy),
            fmt_f(r.re),
            fmt_f(r.im),
            fmt_f(r.abs),
            u8::from(r.boundary).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<FieldRow>, CsvError> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(input);
    let mut records = rd.records();
    let malformed = |line: u64, message: String| CsvError::Malformed { line, message };
    match records.next() {
        Some(h) => {
            let h = h?;
            if h.iter().ne(HEADER) {
                return Err(malformed(
                    1,
                    format!("header must be '{}'", HEADER.join(",")),
                ));
            }
        }
        None => return Err(malformed(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<&str, CsvError> {
            rec.get(i)
                .ok_or_else(|| malformed(line, format!("missing column '{}'", HEADER[i])))
        };
        let int = |i: usize| -> Result<i64, CsvError> {
            let s = field(i)?;
            s.parse()
                .map_err(|_| malformed(line, format!("'{}' is not an integer: {s}", HEADER[i])))
        };
        let real = |i: usize| -> Result<f64, CsvError> {
            let s = field(i)?;
            s.parse()
                .map_err(|_| malformed(line, format!("'{}' is not a number: {s}", HEADER[i])))
        };
        let boundary = match field(7)? {
            "0" => false,
            "1" => true,
            s => return Err(malformed(line, format!("'b' must be 0 or 1, got {s}"))),
        };
        rows.push(FieldRow {
            x: LatticeIndex::new(int(0)?, int(1)?),
            cx: real(2)?,
            cy: real(3)?,
            re: real(4)?,
            im: real(5)?,
            abs: real(6)?,
            boundary,
        });
    }
    Ok(rows)
}
