//! Plain-text curve description.
//!
//! One `key = value` pair per line; `#` starts a comment; blank lines are
//! ignored. Required keys, each exactly once:
//!
//! ```text
//! p      = <prime characteristic>
//! e      = <extension degree >= 1>
//! m      = <Kummer degree>
//! lambda = <exponent, 0 < lambda < m>
//! f      = <comma-separated coefficient encodings, constant term first>
//! ```

use std::collections::HashMap;
use std::fmt;

use super::{CurveError, KummerCurve};
use crate::gf::{make_field, GfError};
use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line number; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveConfig {
    pub p: u32,
    pub e: u32,
    pub m: u32,
    pub lambda: i64,
    pub f: Vec<u64>,
    /// Line on which each key appeared, for error reporting.
    lines: HashMap<&'static str, usize>,
}

const KEYS: [&str; 5] = ["p", "e", "m", "lambda", "f"];

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

impl CurveConfig {
    pub fn new(p: u32, e: u32, m: u32, lambda: i64, f: Vec<u64>) -> CurveConfig {
        CurveConfig { p, e, m, lambda, f, lines: HashMap::new() }
    }

    pub fn parse(text: &str) -> Result<CurveConfig, ConfigError> {
        let mut raw: HashMap<&'static str, (usize, String)> = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| err(lineno, format!("expected `key = value`, found `{content}`")))?;
            let key = key.trim();
            let key = *KEYS.iter().find(|&&k| k == key).ok_or_else(|| err(lineno, format!("unknown key `{key}`")))?;
            if let Some((first, _)) = raw.get(key) {
                return Err(err(lineno, format!("duplicate key `{key}` (first given on line {first})")));
            }
            raw.insert(key, (lineno, value.trim().to_string()));
        }
        for key in KEYS {
            if !raw.contains_key(key) {
                return Err(err(0, format!("missing key `{key}`")));
            }
        }
        fn num<T: std::str::FromStr>(raw: &HashMap<&'static str, (usize, String)>, key: &str) -> Result<T, ConfigError> {
            let (line, v) = &raw[key];
            v.parse().map_err(|_| err(*line, format!("`{key}` must be an integer, found `{v}`")))
        }
        let (f_line, f_raw) = &raw["f"];
        let f = f_raw
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| err(*f_line, format!("bad coefficient `{}` in `f`", t.trim()))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CurveConfig {
            p: num(&raw, "p")?,
            e: num(&raw, "e")?,
            m: num(&raw, "m")?,
            lambda: num(&raw, "lambda")?,
            f,
            lines: raw.iter().map(|(&k, (l, _))| (k, *l)).collect(),
        })
    }

    fn line_of(&self, key: &str) -> usize {
        self.lines.get(key).copied().unwrap_or(0)
    }

    /// Builds the field and the curve; failures cite the offending line.
    pub fn build(&self) -> Result<KummerCurve, ConfigError> {
        let field = make_field(self.p, self.e).map_err(|e| {
            let key = if matches!(e, GfError::NotPrime(_)) { "p" } else { "e" };
            err(self.line_of(key), e.to_string())
        })?;
        let f = Polynomial::from_encodings(&field, &self.f).map_err(|e| err(self.line_of("f"), e.to_string()))?;
        KummerCurve::new(&field, self.m, self.lambda, f).map_err(|e| {
            let key = match e {
                CurveError::DegreeTooSmall(_) | CurveError::CharacteristicDividesM { .. } => "m",
                CurveError::LambdaOutOfRange { .. } | CurveError::NotCoprime { .. } => "lambda",
                _ => "f",
            };
            err(self.line_of(key), e.to_string())
        })
    }

    /// Serializes back to the file grammar.
    pub fn to_text(&self) -> String {
        let f: Vec<String> = self.f.iter().map(|c| c.to_string()).collect();
        format!("p = {}\ne = {}\nm = {}\nlambda = {}\nf = {}\n", self.p, self.e, self.m, self.lambda, f.join(","))
    }
}
