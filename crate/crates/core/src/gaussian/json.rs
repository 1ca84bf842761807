//! The state file schema:
//! `{"n1": f, "n2": f, "m1": [re, im], "m2": [re, im], "ms": [re, im], "mc": [re, im]}`.

use super::CovarianceMatrix;
use crate::linalg::C64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

const FIELDS: [&str; 6] = ["n1", "n2", "m1", "m2", "ms", "mc"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateParseError {
    #[error("state is not valid JSON: {0}")]
    Syntax(String),
    #[error("state must be a JSON object")]
    NotAnObject,
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("field `{field}`: {reason}")]
    BadField { field: String, reason: String },
}

/// Serialised form of a [`CovarianceMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub n1: f64,
    pub n2: f64,
    pub m1: [f64; 2],
    pub m2: [f64; 2],
    pub ms: [f64; 2],
    pub mc: [f64; 2],
}

impl From<&CovarianceMatrix> for StateJson {
    fn from(v: &CovarianceMatrix) -> Self {
        let p = |z: C64| [z.re, z.im];
        Self {
            n1: v.n1,
            n2: v.n2,
            m1: p(v.m1),
            m2: p(v.m2),
            ms: p(v.ms),
            mc: p(v.mc),
        }
    }
}

fn bad(field: &str, reason: impl Into<String>) -> StateParseError {
    StateParseError::BadField {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn real(obj: &Map<String, Value>, field: &'static str) -> Result<f64, StateParseError> {
    let v = obj.get(field).ok_or(StateParseError::Missing(field))?;
    let x = v
        .as_f64()
        .ok_or_else(|| bad(field, format!("expected a number, found {v}")))?;
    if !x.is_finite() {
        return Err(bad(field, "not finite"));
    }
    Ok(x)
}

fn complex(obj: &Map<String, Value>, field: &'static str) -> Result<C64, StateParseError> {
    let v = obj.get(field).ok_or(StateParseError::Missing(field))?;
    let arr = v
        .as_array()
        .ok_or_else(|| bad(field, format!("expected [re, im], found {v}")))?;
    if arr.len() != 2 {
        return Err(bad(
            field,
            format!("expected 2 components, found {}", arr.len()),
        ));
    }
    let part = |i: usize| {
        arr[i]
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad(field, format!("component {i} is not a finite number")))
    };
    Ok(C64::new(part(0)?, part(1)?))
}

impl CovarianceMatrix {
    /// Parses the state schema, naming the offending field on failure.
    pub fn from_json_str(s: &str) -> Result<Self, StateParseError> {
        let value: Value =
            serde_json::from_str(s).map_err(|e| StateParseError::Syntax(e.to_string()))?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &Value) -> Result<Self, StateParseError> {
        let obj = value.as_object().ok_or(StateParseError::NotAnObject)?;
        if let Some(extra) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(bad(extra, "unknown field"));
        }
        let v = CovarianceMatrix {
            n1: real(obj, "n1")?,
            n2: real(obj, "n2")?,
            m1: complex(obj, "m1")?,
            m2: complex(obj, "m2")?,
            ms: complex(obj, "ms")?,
            mc: complex(obj, "mc")?,
        };
        Ok(v)
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(StateJson::from(self)).expect("plain data serialises")
    }
}
