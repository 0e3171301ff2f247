//! JSON model files and JSON renderings of reports and verdicts.
//!
//! A model file looks like
//!
//! ```json
//! {"ints": {"k": 4}, "arrays": {"a": {"leftTail": 0, "lo": 1, "window": [1, 1, 2, 2], "rightTail": 2}}}
//! ```
//!
//! Integers are JSON numbers of any length. Arrays keep the window exactly
//! as written, so reading and writing a file reproduces it.

use std::str::FromStr;

use apf_core::{
    eval::Value,
    interp::{CandidateVerdict, Outcome},
    model::is_a_side,
    stabilize::StabilizationReport,
    FinArray, Model,
};
use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value as Json};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{path}: {msg}")]
    Shape { path: String, msg: String },
}

fn shape(path: &str, msg: impl Into<String>) -> ModelFileError {
    ModelFileError::Shape {
        path: path.to_string(),
        msg: msg.into(),
    }
}

pub fn int_to_json(v: &BigInt) -> Json {
    Json::Number(Number::from_str(&v.to_string()).expect("integers are valid JSON numbers"))
}

pub fn int_from_json(v: &Json, path: &str) -> Result<BigInt, ModelFileError> {
    match v {
        Json::Number(n) => {
            BigInt::from_str(&n.to_string()).map_err(|_| shape(path, format!("`{n}` is not an integer")))
        }
        _ => Err(shape(path, "expected an integer")),
    }
}

pub fn array_to_json(a: &FinArray) -> Json {
    json!({
        "leftTail": int_to_json(a.left_tail()),
        "lo": int_to_json(a.lo()),
        "window": a.window().iter().map(int_to_json).collect::<Vec<_>>(),
        "rightTail": int_to_json(a.right_tail()),
    })
}

pub fn array_from_json(v: &Json, path: &str) -> Result<FinArray, ModelFileError> {
    let obj = v.as_object().ok_or_else(|| shape(path, "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "leftTail" | "lo" | "window" | "rightTail") {
            return Err(shape(path, format!("unexpected field `{key}`")));
        }
    }
    let field = |k: &str| obj.get(k).ok_or_else(|| shape(path, format!("missing field `{k}`")));
    let window = field("window")?
        .as_array()
        .ok_or_else(|| shape(&format!("{path}.window"), "expected a list"))?
        .iter()
        .enumerate()
        .map(|(n, x)| int_from_json(x, &format!("{path}.window[{n}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FinArray::from_parts(
        int_from_json(field("leftTail")?, &format!("{path}.leftTail"))?,
        int_from_json(field("lo")?, &format!("{path}.lo"))?,
        window,
        int_from_json(field("rightTail")?, &format!("{path}.rightTail"))?,
    ))
}

pub fn model_to_json(m: &Model) -> Json {
    let ints: Map<String, Json> = m.ints().map(|(k, v)| (k.to_string(), int_to_json(v))).collect();
    let arrays: Map<String, Json> = m.arrays().map(|(k, a)| (k.to_string(), array_to_json(a))).collect();
    json!({ "ints": ints, "arrays": arrays })
}

pub fn model_from_json(v: &Json) -> Result<Model, ModelFileError> {
    let obj = v.as_object().ok_or_else(|| shape("$", "expected an object"))?;
    let mut m = Model::new();
    for (key, section) in obj {
        let entries = section
            .as_object()
            .ok_or_else(|| shape(&format!("$.{key}"), "expected an object"))?;
        match key.as_str() {
            "ints" => {
                for (name, x) in entries {
                    m.set_int(name, int_from_json(x, &format!("$.ints.{name}"))?);
                }
            }
            "arrays" => {
                for (name, x) in entries {
                    m.set_array(name, array_from_json(x, &format!("$.arrays.{name}"))?);
                }
            }
            other => return Err(shape("$", format!("unexpected field `{other}`"))),
        }
    }
    Ok(m)
}

pub fn parse_model(text: &str) -> Result<Model, ModelFileError> {
    model_from_json(&serde_json::from_str(text)?)
}

pub fn write_model(m: &Model) -> String {
    serde_json::to_string_pretty(&model_to_json(m)).expect("values serialize")
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Int(n) => int_to_json(n),
        Value::Bool(b) => Json::Bool(*b),
        Value::Array(a) => array_to_json(a),
    }
}

pub fn report_to_json(r: &StabilizationReport) -> Json {
    let mut obj = json!({
        "subject": r.subject.to_string(),
        "index": r.index,
        "property": r.property.as_str(),
        "verifiedHorizon": r.verified_horizon,
        "conditional": r.conditional,
    });
    if let Some(v) = &r.stable_value {
        obj["value"] = value_to_json(v);
    }
    obj
}

pub fn verdict_to_json(v: &CandidateVerdict) -> Json {
    let mut obj = json!({
        "candidate": v.candidate.to_string(),
        "outcome": v.outcome.as_str(),
    });
    if let Outcome::NotInFragment(r) = v.outcome {
        obj["reason"] = json!(r.as_str());
    }
    if let Some(i) = v.witness {
        obj["witness"] = json!(i);
        obj["parity"] = json!(if is_a_side(i) { "even" } else { "odd" });
        obj["condition"] = json!(if v.outcome == Outcome::FailsConditionI {
            "i"
        } else {
            "ii"
        });
    }
    obj
}
