//! Presentation input and output in the shared JSON schema.
//!
//! ```json
//! {"field": "Q", "dim": 7, "differentials": {"7": "x1^x2 + x3^x4"}}
//! {"field": "Fp", "p": 5, "dim": 7, "brackets": [[1, 2, 7, "1"]]}
//! ```
//!
//! Generator indices are 1-based everywhere: `x1 .. x7`, and bracket
//! entries `[i, j, k, c]` mean `[X_i, X_j] = c X_k`.

use std::collections::BTreeMap;
use std::fmt;

use minimal7::exterior::KForm;
use minimal7::field::{Field, FieldDescriptor};
use minimal7::liealg::{MinimalAlgebra, StructureConstants};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    Syntax { line: usize, column: usize, message: String },
    Schema(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Syntax { line, column, message } => {
                write!(f, "parse error at line {line}, column {column}: {message}")
            }
            InputError::Schema(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl std::error::Error for InputError {}

fn schema(m: impl Into<String>) -> InputError {
    InputError::Schema(m.into())
}

#[derive(Debug, Clone)]
enum Body {
    Brackets(Vec<(usize, usize, usize, String)>),
    Differentials(BTreeMap<usize, String>),
}

/// A parsed input document, not yet bound to a field.
#[derive(Debug, Clone)]
pub struct RawInput {
    pub field: Option<FieldDescriptor>,
    pub dim: usize,
    body: Body,
}

fn index(v: &Value, dim: usize, what: &str) -> Result<usize, InputError> {
    match v.as_u64() {
        Some(i) if i >= 1 && (i as usize) <= dim => Ok(i as usize),
        _ => Err(schema(format!("{what}: expected an index in 1..={dim}, got {v}"))),
    }
}

fn scalar_text(v: &Value, what: &str) -> Result<String, InputError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() => Ok(n.to_string()),
        _ => Err(schema(format!("{what}: expected a string or integer coefficient, got {v}"))),
    }
}

pub fn parse_input(text: &str) -> Result<RawInput, InputError> {
    let value: Value = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| schema("top level must be an object"))?;
    let field = match obj.get("field") {
        None => None,
        Some(_) => Some(
            serde_json::from_value::<FieldDescriptor>(value.clone())
                .map_err(|e| schema(format!("field: {e}")))?,
        ),
    };
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("\"dim\" must be a positive integer"))? as usize;
    if dim == 0 || dim > 16 {
        return Err(schema(format!("dim {dim} is outside 1..=16")));
    }
    let body = match (obj.get("brackets"), obj.get("differentials")) {
        (Some(_), Some(_)) => return Err(schema("give either \"brackets\" or \"differentials\", not both")),
        (None, None) => return Err(schema("missing \"brackets\" or \"differentials\"")),
        (Some(b), None) => {
            let rows = b.as_array().ok_or_else(|| schema("\"brackets\" must be an array"))?;
            let mut out = Vec::new();
            for (n, row) in rows.iter().enumerate() {
                let what = format!("brackets[{n}]");
                match row.as_array().map(Vec::as_slice) {
                    Some([i, j, k, c]) => out.push((
                        index(i, dim, &what)?,
                        index(j, dim, &what)?,
                        index(k, dim, &what)?,
                        scalar_text(c, &what)?,
                    )),
                    _ => return Err(schema(format!("{what}: expected [i, j, k, coef]"))),
                }
            }
            Body::Brackets(out)
        }
        (None, Some(d)) => {
            let map = d.as_object().ok_or_else(|| schema("\"differentials\" must be an object"))?;
            let mut out = BTreeMap::new();
            for (k, v) in map {
                let what = format!("differentials.{k}");
                let idx = k
                    .trim_start_matches('x')
                    .parse::<usize>()
                    .ok()
                    .filter(|&i| i >= 1 && i <= dim)
                    .ok_or_else(|| schema(format!("{what}: key must be a generator index in 1..={dim}")))?;
                let text = v.as_str().ok_or_else(|| schema(format!("{what}: expected a string")))?;
                if out.insert(idx, text.to_string()).is_some() {
                    return Err(schema(format!("{what}: generator given twice")));
                }
            }
            Body::Differentials(out)
        }
    };
    Ok(RawInput { field, dim, body })
}

impl RawInput {
    pub fn build<F: Field>(&self, f: &F) -> Result<MinimalAlgebra<F>, InputError> {
        match &self.body {
            Body::Brackets(rows) => {
                let mut sc = StructureConstants::new(f, self.dim);
                for (n, (i, j, k, c)) in rows.iter().enumerate() {
                    let c = f.parse_elem(c).map_err(|e| schema(format!("brackets[{n}]: {e}")))?;
                    let prev = sc.get(i - 1, j - 1, k - 1);
                    sc.set(i - 1, j - 1, k - 1, f.add(&prev, &c))
                        .map_err(|e| schema(format!("brackets[{n}]: {e}")))?;
                }
                Ok(sc.dualize())
            }
            Body::Differentials(map) => {
                let mut d: Vec<KForm<F>> = (0..self.dim).map(|_| KForm::zero(f, self.dim, 2)).collect();
                for (&k, text) in map {
                    d[k - 1] = KForm::parse_degree(f, self.dim, 2, text)
                        .map_err(|e| schema(format!("differentials.{k}: {e}")))?;
                }
                MinimalAlgebra::new(f, self.dim, d).map_err(|e| schema(e.to_string()))
            }
        }
    }
}

/// A presentation in the input schema; nonzero differentials only.
pub fn presentation_json<F: Field>(alg: &MinimalAlgebra<F>) -> Value {
    let mut obj = match serde_json::to_value(alg.field().descriptor()) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    obj.insert("dim".into(), alg.dim().into());
    let mut diffs = Map::new();
    for (k, dk) in alg.differentials().iter().enumerate() {
        if !dk.is_zero() {
            diffs.insert((k + 1).to_string(), dk.to_string().into());
        }
    }
    obj.insert("differentials".into(), Value::Object(diffs));
    Value::Object(obj)
}
