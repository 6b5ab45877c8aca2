//! Report envelope shared by every subcommand, and its JSON and CSV writers.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

pub const TOOL: &str = "cheb";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: Value,
    pub rhs: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, lhs: impl Serialize, rhs: impl Serialize) -> Self {
        Check {
            name: name.into(),
            pass,
            lhs: to_value(lhs),
            rhs: to_value(rhs),
        }
    }

    /// `lhs <= rhs`.
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Check::new(name, lhs <= rhs, lhs, rhs)
    }
}

/// Rows for the CSV writer; the header is fixed per subcommand.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub struct Outcome {
    pub config: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub table: Table,
    /// Summary lines printed to stderr in CSV mode.
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn json(&self) -> Value {
        json!({
            "tool": TOOL,
            "version": VERSION,
            "config": self.config,
            "results": self.results,
            "checks": self.checks,
        })
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.json())?;
        writeln!(w)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.table.header)?;
        for row in &self.table.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

/// A JSON integer when it fits in 64 bits, otherwise a decimal string.
pub fn big(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

pub fn bigs(ns: &[BigInt]) -> Value {
    Value::Array(ns.iter().map(big).collect())
}
