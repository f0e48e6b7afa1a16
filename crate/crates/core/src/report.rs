//! Machine-readable command reports.
//!
//! The JSON form is stable and versioned; given the same input file, flags
//! and seed, every report is reproducible bit for bit.

use num::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::algebra::{Payload, Scalar};
use crate::infocomplete::Partition;
use crate::kernel::Rational;

/// Version of the JSON report schema.
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Outcome of one CLI command.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub verdict: Option<bool>,
    pub witness: Value,
    pub residuals: Value,
    pub details: Value,
    pub exit_code: i32,
}

impl Report {
    /// A report for a computation that succeeded outright.
    pub fn success(command: impl Into<String>, details: Value) -> Self {
        Self {
            command: command.into(),
            verdict: Some(true),
            witness: Value::Null,
            residuals: Value::Null,
            details,
            exit_code: 0,
        }
    }

    /// A report carrying a boolean verdict; false verdicts exit with 1.
    pub fn verdict(command: impl Into<String>, verdict: bool, witness: Value) -> Self {
        Self {
            command: command.into(),
            verdict: Some(verdict),
            witness,
            residuals: Value::Null,
            details: Value::Null,
            exit_code: i32::from(!verdict),
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn with_residuals(mut self, residuals: Value) -> Self {
        self.residuals = residuals;
        self
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("report_version".into(), json!(REPORT_VERSION));
        map.insert("command".into(), json!(self.command));
        map.insert(
            "verdict".into(),
            self.verdict.map(Value::Bool).unwrap_or(Value::Null),
        );
        map.insert("witness".into(), self.witness.clone());
        map.insert("residuals".into(), self.residuals.clone());
        map.insert("details".into(), self.details.clone());
        map.insert("exit".into(), json!(self.exit_code));
        Value::Object(map)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json().to_string(),
            ReportFormat::Text => {
                let mut out = format!("command: {}\n", self.command);
                match self.verdict {
                    Some(v) => out.push_str(&format!("verdict: {v}\n")),
                    None => out.push_str("verdict: none\n"),
                }
                if !self.witness.is_null() {
                    out.push_str(&format!("witness: {}\n", self.witness));
                }
                if !self.residuals.is_null() {
                    out.push_str(&format!("residuals: {}\n", self.residuals));
                }
                if !self.details.is_null() {
                    out.push_str(&format!("details: {}\n", self.details));
                }
                out.push_str(&format!("exit: {}\n", self.exit_code));
                out
            }
        }
    }
}

/// Rationals serialize as `"p/q"` strings to stay exact in transit.
pub fn rational_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rationals_json(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rational_json).collect())
}

pub fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(r) => rational_json(r),
        Scalar::Real(x) => json!(x),
    }
}

pub fn payload_json(p: &Payload) -> Value {
    match p {
        Payload::Classical(v) => rationals_json(v),
        Payload::Quantum(m) => {
            let d = m.dim();
            Value::Array(
                (0..d)
                    .map(|i| {
                        Value::Array(
                            (0..d)
                                .map(|j| {
                                    let z = m.get(i, j);
                                    json!([z.re, z.im])
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        }
    }
}

/// Partitions serialize as one-based nested arrays.
pub fn partition_json(p: &Partition) -> Value {
    Value::Array(
        p.blocks()
            .iter()
            .map(|b| Value::Array(b.iter().map(|&i| json!(i + 1)).collect()))
            .collect(),
    )
}

pub fn f64_json(x: f64) -> Value {
    json!(x)
}

/// Lossy float view of a scalar, for residual fields.
pub fn scalar_f64(s: &Scalar) -> f64 {
    match s {
        Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
        Scalar::Real(x) => *x,
    }
}
