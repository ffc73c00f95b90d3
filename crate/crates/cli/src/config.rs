//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! k = 2
//! eps = 1e-6
//! guess = shift
//! window = -40,40,-40,40
//! point = -5,0,1
//! point = -4,0,1,0
//! ```
//!
//! `point` may repeat; every other key appears at most once. Command-line
//! flags override file values key by key.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use trigreen::{GuessKind, IntegralForm, LatticeIndex, Preset, QuadratureRule, Window};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub key: String,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: &str, message: impl Into<String>) -> Self {
        Self {
            key: key.to_owned(),
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config line {l}, key '{}': {}", self.key, self.message),
            None => write!(f, "key '{}': {}", self.key, self.message),
        }
    }
}

pub const KEYS: [&str; 16] = [
    "k", "eps", "n", "m", "guess", "h", "preset", "point", "window", "out", "p0", "ms", "rule",
    "mesh", "distance", "form",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub k: Option<f64>,
    pub eps: Option<f64>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub guess: Option<GuessKind>,
    pub h: Option<Complex64>,
    pub preset: Option<Preset>,
    pub points: Vec<(LatticeIndex, Complex64)>,
    pub window: Option<Window>,
    pub out: Option<PathBuf>,
    pub p0: Option<usize>,
    pub ms: Option<Vec<u32>>,
    pub rule: Option<QuadratureRule>,
    pub mesh: Option<usize>,
    pub distance: Option<u64>,
    pub form: Option<IntegralForm>,
}

fn bad(key: &str, value: &str, what: &str) -> ConfigError {
    ConfigError::new(key, format!("cannot parse '{value}' as {what}"))
}

fn number<T: std::str::FromStr>(key: &str, s: &str, what: &str) -> Result<T, ConfigError> {
    s.trim().parse().map_err(|_| bad(key, s, what))
}

fn list<T: std::str::FromStr>(key: &str, s: &str, what: &str) -> Result<Vec<T>, ConfigError> {
    s.split(',').map(|p| number(key, p, what)).collect()
}

fn complex(key: &str, s: &str) -> Result<Complex64, ConfigError> {
    match list::<f64>(key, s, "a real number")?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(bad(key, s, "'re' or 're,im'")),
    }
}

fn window(s: &str) -> Result<Window, ConfigError> {
    let v: Vec<i64> = list("window", s, "an integer")?;
    match v.as_slice() {
        [r] if *r >= 0 => Ok(Window::square(*r)),
        [a, b, c, d] => {
            Window::new(*a, *b, *c, *d).map_err(|e| ConfigError::new("window", e.to_string()))
        }
        _ => Err(bad("window", s, "'r' or 'x1min,x1max,x2min,x2max'")),
    }
}

fn point(s: &str) -> Result<(LatticeIndex, Complex64), ConfigError> {
    let parts: Vec<&str> = s.split(',').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(bad("point", s, "'x1,x2,re[,im]'"));
    }
    let x1 = number("point", parts[0], "an integer")?;
    let x2 = number("point", parts[1], "an integer")?;
    let re = number("point", parts[2], "a real number")?;
    let im = match parts.get(3) {
        Some(p) => number("point", p, "a real number")?,
        None => 0.0,
    };
    Ok((LatticeIndex::new(x1, x2), Complex64::new(re, im)))
}

fn form(s: &str) -> Result<IntegralForm, ConfigError> {
    match s {
        "sigma" => Ok(IntegralForm::Sigma),
        "rotated" => Ok(IntegralForm::Rotated),
        _ => Err(bad("form", s, "'sigma' or 'rotated'")),
    }
}

impl RunConfig {
    /// Whether a single-valued key already holds a value.
    fn is_set(&self, key: &str) -> bool {
        match key {
            "k" => self.k.is_some(),
            "eps" => self.eps.is_some(),
            "n" => self.n.is_some(),
            "m" => self.m.is_some(),
            "guess" => self.guess.is_some(),
            "h" => self.h.is_some(),
            "preset" => self.preset.is_some(),
            "window" => self.window.is_some(),
            "out" => self.out.is_some(),
            "p0" => self.p0.is_some(),
            "ms" => self.ms.is_some(),
            "rule" => self.rule.is_some(),
            "mesh" => self.mesh.is_some(),
            "distance" => self.distance.is_some(),
            "form" => self.form.is_some(),
            _ => false,
        }
    }

    /// Parses `value` for `key` and stores it, replacing any earlier value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "k" => self.k = Some(number(key, v, "a real number")?),
            "eps" => self.eps = Some(number(key, v, "a real number")?),
            "n" => self.n = Some(number(key, v, "a positive integer")?),
            "m" => self.m = Some(number(key, v, "a positive integer")?),
            "guess" => self.guess = Some(v.parse().map_err(|e: String| ConfigError::new(key, e))?),
            "h" => self.h = Some(complex(key, v)?),
            "preset" => {
                self.preset = Some(v.parse().map_err(|e: String| ConfigError::new(key, e))?)
            }
            "point" => self.points.push(point(v)?),
            "window" => self.window = Some(window(v)?),
            "out" if v.is_empty() => return Err(ConfigError::new(key, "empty path")),
            "out" => self.out = Some(PathBuf::from(v)),
            "p0" => self.p0 = Some(number(key, v, "a positive integer")?),
            "ms" => self.ms = Some(list(key, v, "a nonnegative integer")?),
            "rule" => self.rule = Some(v.parse().map_err(|e: String| ConfigError::new(key, e))?),
            "mesh" => self.mesh = Some(number(key, v, "a positive integer")?),
            "distance" => self.distance = Some(number(key, v, "a nonnegative integer")?),
            "form" => self.form = Some(form(v)?),
            other => {
                return Err(ConfigError::new(
                    other,
                    format!("unknown key (expected one of {})", KEYS.join(", ")),
                ))
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |mut e: ConfigError| {
                e.line = Some(i + 1);
                e
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(ConfigError::new(line, "expected 'key = value'")))?;
            let key = key.trim();
            if cfg.is_set(key) {
                return Err(at(ConfigError::new(key, "given more than once")));
            }
            cfg.set(key, value).map_err(at)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
