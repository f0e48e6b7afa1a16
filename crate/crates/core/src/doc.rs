//! JSON document ingestion.
//!
//! A document fixes one base algebra and carries named entities over it:
//! effects, states, observables, channels, random variables and subalgebra
//! generator lists. Rationals are written as strings `"p/q"` (or JSON
//! integers), complex entries as `[re, im]` pairs (or plain numbers),
//! matrices as row-major nested arrays.
//!
//! Effect payloads are shape-checked at load; whether they satisfy
//! `0 <= a <= u` is a question commands answer. Everything else (states,
//! channels, variables) is fully validated at load.

use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use num::complex::Complex64;
use serde_json::Value;

use crate::algebra::{BaseAlgebra, Effect, Payload, State};
use crate::infocomplete::RandomVariable;
use crate::kernel::{ComplexMatrix, HermitianMatrix, Rational};
use crate::observables::{Channel, Observable};
use crate::subalgebra::{StrongSpan, Subalgebra};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document error at {path}: {message}")]
    Invalid { path: String, message: String },
    #[error("no {kind} named {name:?} in document")]
    NotFound { kind: &'static str, name: String },
}

fn invalid(path: impl Into<String>, message: impl ToString) -> DocError {
    DocError::Invalid {
        path: path.into(),
        message: message.to_string(),
    }
}

/// Raw observable definition; effect resolution happens on access so that
/// `obs validate` can return a verdict instead of a load failure.
#[derive(Debug, Clone)]
struct ObservableDef {
    outcomes: Vec<String>,
    payloads: Vec<Payload>,
}

/// A parsed document over a single base algebra.
#[derive(Debug)]
pub struct Document {
    base: BaseAlgebra,
    effects: IndexMap<String, Payload>,
    observable_defs: IndexMap<String, ObservableDef>,
    channels: IndexMap<String, Channel>,
    random_variables: IndexMap<String, RandomVariable>,
    states: IndexMap<String, State>,
    subalgebras: IndexMap<String, Vec<String>>,
}

impl Document {
    pub fn load(path: &Path, tol: f64) -> Result<Self, DocError> {
        let text = std::fs::read_to_string(path).map_err(|source| DocError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_str(&text, tol)
    }

    pub fn parse_str(text: &str, tol: f64) -> Result<Self, DocError> {
        let root: Value = serde_json::from_str(text)?;
        let obj = root
            .as_object()
            .ok_or_else(|| invalid("$", "document must be a JSON object"))?;
        let base = parse_base(
            obj.get("base")
                .ok_or_else(|| invalid("$", "missing \"base\""))?,
        )?;

        let mut doc = Document {
            base,
            effects: IndexMap::new(),
            observable_defs: IndexMap::new(),
            channels: IndexMap::new(),
            random_variables: IndexMap::new(),
            states: IndexMap::new(),
            subalgebras: IndexMap::new(),
        };

        if let Some(v) = obj.get("effects") {
            for (name, raw) in expect_object(v, "effects")? {
                let payload = parse_payload(base, raw, &format!("effects.{name}"))?;
                doc.effects.insert(name.clone(), payload);
            }
        }
        if let Some(v) = obj.get("states") {
            for (name, raw) in expect_object(v, "states")? {
                let path = format!("states.{name}");
                let payload = parse_payload(base, raw, &path)?;
                let state = State::new(base, payload, tol).map_err(|e| invalid(&path, e))?;
                doc.states.insert(name.clone(), state);
            }
        }
        if let Some(v) = obj.get("observables") {
            for (name, raw) in expect_object(v, "observables")? {
                let def = parse_observable_def(&doc, raw, &format!("observables.{name}"))?;
                doc.observable_defs.insert(name.clone(), def);
            }
        }
        if let Some(v) = obj.get("channels") {
            for (name, raw) in expect_object(v, "channels")? {
                let path = format!("channels.{name}");
                let channel = parse_channel(raw, &path)?;
                doc.channels.insert(name.clone(), channel);
            }
        }
        if let Some(v) = obj.get("random_variables") {
            for (name, raw) in expect_object(v, "random_variables")? {
                let path = format!("random_variables.{name}");
                let values = raw
                    .as_array()
                    .ok_or_else(|| invalid(&path, "expected an array of values"))?
                    .iter()
                    .map(value_label)
                    .collect::<Result<Vec<String>, String>>()
                    .map_err(|m| invalid(&path, m))?;
                let rv = RandomVariable::new(values).map_err(|e| invalid(&path, e))?;
                doc.random_variables.insert(name.clone(), rv);
            }
        }
        if let Some(v) = obj.get("subalgebras") {
            for (name, raw) in expect_object(v, "subalgebras")? {
                let path = format!("subalgebras.{name}");
                let names = raw
                    .as_array()
                    .ok_or_else(|| invalid(&path, "expected an array of effect names"))?
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| invalid(&path, "generator entries must be names"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                doc.subalgebras.insert(name.clone(), names);
            }
        }
        Ok(doc)
    }

    pub fn base(&self) -> BaseAlgebra {
        self.base
    }

    pub fn effect_names(&self) -> impl Iterator<Item = &String> {
        self.effects.keys()
    }

    /// Raw payload of a named effect (shape-checked, validity undecided).
    pub fn effect_payload(&self, name: &str) -> Result<&Payload, DocError> {
        self.effects.get(name).ok_or_else(|| DocError::NotFound {
            kind: "effect",
            name: name.to_string(),
        })
    }

    /// A named effect, validated against the interval `[0, u]`.
    pub fn effect(&self, name: &str, tol: f64) -> Result<Effect, DocError> {
        let payload = self.effect_payload(name)?;
        Effect::new(self.base, payload.clone(), tol)
            .map_err(|e| invalid(format!("effects.{name}"), e))
    }

    /// Named effects in document order (all of them when `names` is empty).
    pub fn effects_in_order(&self, names: &[String], tol: f64) -> Result<Vec<Effect>, DocError> {
        if names.is_empty() {
            self.effects
                .keys()
                .map(|n| self.effect(n, tol))
                .collect()
        } else {
            names.iter().map(|n| self.effect(n, tol)).collect()
        }
    }

    pub fn state(&self, name: &str) -> Result<&State, DocError> {
        self.states.get(name).ok_or_else(|| DocError::NotFound {
            kind: "state",
            name: name.to_string(),
        })
    }

    /// Builds and validates a named observable.
    pub fn observable(&self, name: &str, tol: f64) -> Result<Observable, DocError> {
        let def = self
            .observable_defs
            .get(name)
            .ok_or_else(|| DocError::NotFound {
                kind: "observable",
                name: name.to_string(),
            })?;
        let path = format!("observables.{name}");
        let effects = def
            .payloads
            .iter()
            .map(|p| Effect::new(self.base, p.clone(), tol))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| invalid(&path, e))?;
        Observable::new(def.outcomes.clone(), effects, tol).map_err(|e| invalid(&path, e))
    }

    pub fn channel(&self, name: &str) -> Result<&Channel, DocError> {
        self.channels.get(name).ok_or_else(|| DocError::NotFound {
            kind: "channel",
            name: name.to_string(),
        })
    }

    pub fn random_variable(&self, name: &str) -> Result<&RandomVariable, DocError> {
        self.random_variables
            .get(name)
            .ok_or_else(|| DocError::NotFound {
                kind: "random variable",
                name: name.to_string(),
            })
    }

    /// Named variables in document order (all of them when `names` is empty).
    pub fn random_variables_in_order(
        &self,
        names: &[String],
    ) -> Result<Vec<RandomVariable>, DocError> {
        if names.is_empty() {
            Ok(self.random_variables.values().cloned().collect())
        } else {
            names
                .iter()
                .map(|n| self.random_variable(n).cloned())
                .collect()
        }
    }

    /// Builds the named subalgebra from its generator list.
    pub fn subalgebra(&self, name: &str, tol: f64) -> Result<Subalgebra, DocError> {
        let names = self.subalgebras.get(name).ok_or_else(|| DocError::NotFound {
            kind: "subalgebra",
            name: name.to_string(),
        })?;
        let effects = self.effects_in_order(names, tol)?;
        Subalgebra::from_generators(self.base, &effects, tol)
            .map_err(|e| invalid(format!("subalgebras.{name}"), e))
    }

    /// Builds the named subalgebra's generators as a strong span.
    pub fn strong_span(&self, name: &str, tol: f64) -> Result<StrongSpan, DocError> {
        let names = self.subalgebras.get(name).ok_or_else(|| DocError::NotFound {
            kind: "subalgebra",
            name: name.to_string(),
        })?;
        let effects = self.effects_in_order(names, tol)?;
        StrongSpan::new(effects, tol).map_err(|e| invalid(format!("subalgebras.{name}"), e))
    }
}

fn expect_object<'a>(
    v: &'a Value,
    path: &str,
) -> Result<&'a serde_json::Map<String, Value>, DocError> {
    v.as_object()
        .ok_or_else(|| invalid(path, "expected a JSON object"))
}

fn parse_base(v: &Value) -> Result<BaseAlgebra, DocError> {
    let obj = expect_object(v, "base")?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| invalid("base.kind", "expected \"classical\" or \"quantum\""))?;
    match kind {
        "classical" => {
            let n = obj
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| invalid("base.n", "expected a positive integer"))?;
            BaseAlgebra::classical(n as usize).map_err(|e| invalid("base.n", e))
        }
        "quantum" => {
            let dim = obj
                .get("dim")
                .and_then(Value::as_u64)
                .ok_or_else(|| invalid("base.dim", "expected a positive integer"))?;
            BaseAlgebra::quantum(dim as usize).map_err(|e| invalid("base.dim", e))
        }
        other => Err(invalid("base.kind", format!("unknown kind {other:?}"))),
    }
}

/// Parses `"p/q"` strings and JSON integers; floats are rejected to keep
/// the classical side exact.
pub fn parse_rational(v: &Value, path: &str) -> Result<Rational, DocError> {
    match v {
        Value::String(s) => {
            Rational::from_str(s.trim()).map_err(|e| invalid(path, format!("bad rational: {e}")))
        }
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| {
                invalid(
                    path,
                    "floats are not accepted for exact rationals; write \"p/q\"",
                )
            }),
        _ => Err(invalid(path, "expected a rational as \"p/q\" or integer")),
    }
}

fn parse_complex(v: &Value, path: &str) -> Result<Complex64, DocError> {
    match v {
        Value::Number(n) => Ok(Complex64::new(
            n.as_f64()
                .ok_or_else(|| invalid(path, "expected a number"))?,
            0.0,
        )),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| invalid(path, "expected [re, im] numbers"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| invalid(path, "expected [re, im] numbers"))?;
            Ok(Complex64::new(re, im))
        }
        _ => Err(invalid(path, "expected a number or an [re, im] pair")),
    }
}

fn parse_payload(base: BaseAlgebra, v: &Value, path: &str) -> Result<Payload, DocError> {
    match base {
        BaseAlgebra::Classical { size } => {
            let arr = v
                .as_array()
                .ok_or_else(|| invalid(path, "expected an array of rationals"))?;
            if arr.len() != size {
                return Err(invalid(
                    path,
                    format!("expected {size} coordinates, got {}", arr.len()),
                ));
            }
            let values = arr
                .iter()
                .enumerate()
                .map(|(i, x)| parse_rational(x, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Payload::Classical(values))
        }
        BaseAlgebra::Quantum { dim } => {
            let rows = v
                .as_array()
                .ok_or_else(|| invalid(path, "expected a nested array matrix"))?;
            if rows.len() != dim {
                return Err(invalid(
                    path,
                    format!("expected {dim} rows, got {}", rows.len()),
                ));
            }
            let mut m = ComplexMatrix::zeros(dim, dim);
            for (i, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .ok_or_else(|| invalid(format!("{path}[{i}]"), "expected an array row"))?;
                if row.len() != dim {
                    return Err(invalid(
                        format!("{path}[{i}]"),
                        format!("expected {dim} entries, got {}", row.len()),
                    ));
                }
                for (j, entry) in row.iter().enumerate() {
                    m.set(i, j, parse_complex(entry, &format!("{path}[{i}][{j}]"))?);
                }
            }
            let h = HermitianMatrix::from_matrix(m).map_err(|e| invalid(path, e))?;
            Ok(Payload::Quantum(h))
        }
    }
}

fn parse_observable_def(
    doc: &Document,
    v: &Value,
    path: &str,
) -> Result<ObservableDef, DocError> {
    let obj = expect_object(v, path)?;
    let outcomes: Vec<String> = obj
        .get("outcomes")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid(path, "expected an \"outcomes\" array"))?
        .iter()
        .map(value_label)
        .collect::<Result<_, String>>()
        .map_err(|m| invalid(path, m))?;
    let effects = obj
        .get("effects")
        .and_then(Value::as_object)
        .ok_or_else(|| invalid(path, "expected an \"effects\" map keyed by outcome"))?;
    let mut payloads = Vec::with_capacity(outcomes.len());
    for outcome in &outcomes {
        let raw = effects.get(outcome).ok_or_else(|| {
            invalid(path, format!("missing effect for outcome {outcome:?}"))
        })?;
        let entry_path = format!("{path}.effects.{outcome}");
        // An effect entry is either a name reference or an inline payload.
        let payload = match raw {
            Value::String(name) => doc.effect_payload(name).cloned().map_err(|_| {
                invalid(&entry_path, format!("unknown effect name {name:?}"))
            })?,
            other => parse_payload(doc.base, other, &entry_path)?,
        };
        payloads.push(payload);
    }
    Ok(ObservableDef { outcomes, payloads })
}

fn parse_channel(v: &Value, path: &str) -> Result<Channel, DocError> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid(path, "expected a nested array of rationals"))?;
    let mut matrix = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| invalid(format!("{path}[{i}]"), "expected an array row"))?;
        matrix.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| parse_rational(x, &format!("{path}[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let source = (1..=matrix.len()).map(|i| i.to_string()).collect();
    let cols = matrix.first().map(Vec::len).unwrap_or(0);
    let target = (1..=cols).map(|i| i.to_string()).collect();
    Channel::new(source, target, matrix).map_err(|e| invalid(path, e))
}

fn value_label(v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err("labels must be strings, numbers or booleans".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn parse_classical_document() {
        let text = r#"{
            "base": {"kind": "classical", "n": 3},
            "effects": {
                "a": ["1/2", "1/2", "1/3"],
                "bad": ["3/2", "0", "0"]
            },
            "states": {"mu": ["1/4", "1/4", "1/2"]},
            "observables": {
                "A": {"outcomes": ["x", "y"], "effects": {"x": ["1", "1", "0"], "y": ["0", "0", "1"]}}
            },
            "random_variables": {"f": ["a", "a", "b"]},
            "subalgebras": {"F": ["a"]}
        }"#;
        let doc = Document::parse_str(text, TOL).unwrap();
        assert!(doc.effect("a", TOL).is_ok());
        assert!(doc.effect("bad", TOL).is_err());
        assert!(doc.effect_payload("bad").is_ok());
        assert!(doc.state("mu").is_ok());
        let obs = doc.observable("A", TOL).unwrap();
        assert_eq!(obs.outcomes(), &["x".to_string(), "y".to_string()]);
        assert_eq!(doc.random_variable("f").unwrap().size(), 3);
        assert!(matches!(
            doc.effect("missing", TOL),
            Err(DocError::NotFound { .. })
        ));
    }

    #[test]
    fn parse_quantum_document() {
        let text = r#"{
            "base": {"kind": "quantum", "dim": 2},
            "effects": {
                "p": [[1.0, 0.0], [0.0, 0.0]],
                "x": [[0.5, [0.0, -0.5]], [[0.0, 0.5], 0.5]]
            }
        }"#;
        let doc = Document::parse_str(text, TOL).unwrap();
        let p = doc.effect("p", TOL).unwrap();
        assert!(p.is_sharp(TOL));
        let x = doc.effect("x", TOL).unwrap();
        assert!(x.as_quantum().unwrap().get(0, 1).im < 0.0);
    }

    #[test]
    fn rejects_float_rationals() {
        let text = r#"{
            "base": {"kind": "classical", "n": 1},
            "effects": {"a": [0.5]}
        }"#;
        assert!(Document::parse_str(text, TOL).is_err());
    }

    #[test]
    fn rejects_non_hermitian_matrix() {
        let text = r#"{
            "base": {"kind": "quantum", "dim": 2},
            "effects": {"a": [[0.5, 0.4], [0.1, 0.5]]}
        }"#;
        assert!(Document::parse_str(text, TOL).is_err());
    }

    #[test]
    fn channel_rows_must_be_stochastic() {
        let good = r#"{
            "base": {"kind": "classical", "n": 2},
            "channels": {"nu": [["1/2", "1/2"], ["1", "0"]]}
        }"#;
        let doc = Document::parse_str(good, TOL).unwrap();
        assert!(doc.channel("nu").is_ok());
        let bad = r#"{
            "base": {"kind": "classical", "n": 2},
            "channels": {"nu": [["1/2", "1/3"]]}
        }"#;
        assert!(Document::parse_str(bad, TOL).is_err());
    }
}
