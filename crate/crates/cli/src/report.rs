//! Self-describing run reports.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// How a check compares `actual` against `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `|actual - expected| <= tolerance`
    Absolute,
    /// `|actual - expected| <= tolerance * |expected|`
    Relative,
    /// `actual <= tolerance`; `expected` is the ideal value (usually 0)
    AtMost,
    /// `actual >= tolerance`; `expected` is the ideal value
    AtLeast,
    /// `actual == expected` for a 0/1 flag
    Flag,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn absolute(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        let pass = (actual - expected).abs() <= tolerance;
        Self::make(name, CheckKind::Absolute, expected, actual, tolerance, pass)
    }

    pub fn relative(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        let pass = (actual - expected).abs() <= tolerance * expected.abs();
        Self::make(name, CheckKind::Relative, expected, actual, tolerance, pass)
    }

    pub fn at_most(name: impl Into<String>, actual: f64, limit: f64) -> Self {
        Self::make(name, CheckKind::AtMost, 0.0, actual, limit, actual <= limit)
    }

    pub fn at_least(name: impl Into<String>, ideal: f64, actual: f64, limit: f64) -> Self {
        Self::make(name, CheckKind::AtLeast, ideal, actual, limit, actual >= limit)
    }

    pub fn flag(name: impl Into<String>, holds: bool) -> Self {
        let actual = if holds { 1.0 } else { 0.0 };
        Self::make(name, CheckKind::Flag, 1.0, actual, 0.0, holds)
    }

    fn make(
        name: impl Into<String>,
        kind: CheckKind,
        expected: f64,
        actual: f64,
        tolerance: f64,
        pass: bool,
    ) -> Self {
        Self {
            name: name.into(),
            kind,
            expected,
            actual,
            tolerance,
            pass: pass && !actual.is_nan(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    pub params: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub all_pass: bool,
    /// Wall-clock seconds since the epoch. Excluded from the determinism
    /// contract; everything else is a pure function of the inputs.
    pub timestamp: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, params: Value, results: Value, checks: Vec<Check>, seed: Option<u64>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            params,
            results,
            checks,
            all_pass,
            timestamp: None,
        }
    }

    pub fn stamped(mut self) -> Self {
        self.timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
        self
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass {
            0
        } else {
            1
        }
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }

    pub fn write_human<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "== {} (jacobi-freeze {}) ==", self.command, self.version)?;
        if let Some(seed) = self.seed {
            writeln!(w, "seed: {seed}")?;
        }
        writeln!(w, "params: {}", compact(&self.params))?;
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                writeln!(w, "{k}: {}", compact(v))?;
            }
        }
        if !self.checks.is_empty() {
            writeln!(w, "checks:")?;
            for c in &self.checks {
                writeln!(
                    w,
                    "  [{}] {}: actual={:.6e} expected={:.6e} tol={:.1e} ({:?})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.actual,
                    c.expected,
                    c.tolerance,
                    c.kind
                )?;
            }
        }
        writeln!(w, "overall: {}", if self.all_pass { "PASS" } else { "FAIL" })
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_kinds() {
        assert!(Check::absolute("a", 1.0, 1.05, 0.1).pass);
        assert!(!Check::relative("r", 100.0, 102.0, 0.01).pass);
        assert!(Check::at_most("m", 1e-12, 1e-10).pass);
        assert!(!Check::at_least("l", 1.0, 0.5, 0.9).pass);
        assert!(!Check::flag("f", false).pass);
        assert!(!Check::at_most("nan", f64::NAN, 1.0).pass);
    }

    #[test]
    fn exit_code_follows_checks() {
        let ok = RunReport::new("x", Value::Null, Value::Null, vec![Check::flag("f", true)], None);
        assert_eq!(ok.exit_code(), 0);
        let bad = RunReport::new("x", Value::Null, Value::Null, vec![Check::flag("f", false)], None);
        assert_eq!(bad.exit_code(), 1);
    }
}
