//! The arrangement file format.
//!
//! ```json
//! {"version": 1, "field": {"type": "quadratic", "d": 3},
//!  "forms": [["1", "0"], ["1", {"a": "0", "b": "1"}]], "names": ["H1", "H2"]}
//! ```
//!
//! Each form is a coefficient pair `[a, b]` meaning `a x + b y`. Forms are
//! normalized on load, so writing a loaded file reproduces it byte for byte
//! whenever the input was already normalized.

use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::poly::{Arrangement, LinearForm, PolyError};

pub const ARRANGEMENT_VERSION: u64 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("forms {0} and {1} are proportional")]
    ProportionalForms(usize, usize),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("unsupported version {0}")]
    Version(u64),
}

impl From<FieldError> for FormatError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::FieldMismatch { .. } => FormatError::FieldMismatch(e.to_string()),
            other => FormatError::Parse(other.to_string()),
        }
    }
}

impl From<PolyError> for FormatError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::ProportionalForms(i, j) => FormatError::ProportionalForms(i, j),
            PolyError::Field(f) => f.into(),
            other => FormatError::Parse(other.to_string()),
        }
    }
}

pub fn arrangement_from_json(v: &Value) -> Result<Arrangement, FormatError> {
    if let Some(version) = v.get("version") {
        let version = version
            .as_u64()
            .ok_or_else(|| FormatError::Parse("version must be an integer".into()))?;
        if version != ARRANGEMENT_VERSION {
            return Err(FormatError::Version(version));
        }
    }
    let field = match v.get("field") {
        Some(f) => FieldSpec::from_json(f)?,
        None => FieldSpec::Rational,
    };
    let forms = v
        .get("forms")
        .and_then(Value::as_array)
        .ok_or_else(|| FormatError::Parse("missing forms array".into()))?;
    let forms = forms
        .iter()
        .map(|pair| {
            let pair = pair
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| FormatError::Parse(format!("form {pair} is not a coefficient pair")))?;
            let a = field.parse_scalar(&pair[0])?;
            let b = field.parse_scalar(&pair[1])?;
            Ok(LinearForm::new(a, b)?)
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let names = match v.get("names") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => Some(
            items
                .iter()
                .map(|n| n.as_str().map(str::to_string).ok_or_else(|| FormatError::Parse("names must be strings".into())))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Some(_) => return Err(FormatError::Parse("names must be an array".into())),
    };
    Ok(Arrangement::new(field, forms, names)?)
}

pub fn parse_arrangement(text: &str) -> Result<Arrangement, FormatError> {
    let v: Value = serde_json::from_str(text).map_err(|e| FormatError::Parse(e.to_string()))?;
    arrangement_from_json(&v)
}

pub fn arrangement_to_json(arr: &Arrangement) -> Value {
    let mut v = json!({
        "version": ARRANGEMENT_VERSION,
        "field": arr.field().to_json(),
        "forms": arr.forms().iter().map(|f| json!([f.a().to_json(), f.b().to_json()])).collect::<Vec<_>>(),
    });
    if let Some(names) = arr.names() {
        v["names"] = json!(names);
    }
    v
}

/// Pretty-printed file text with a trailing newline.
pub fn write_arrangement(arr: &Arrangement) -> String {
    let mut s = serde_json::to_string_pretty(&arrangement_to_json(arr)).expect("json");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const B2: &str = r#"{"version":1,"field":{"type":"rational"},"forms":[["1","0"],["0","1"],["1","1"],["1","-1"]],"names":["x","y","x+y","x-y"]}"#;

    #[test]
    fn parses_b2_fixture() {
        let arr = parse_arrangement(B2).unwrap();
        assert_eq!(arr.len(), 4);
        assert_eq!(arr.field(), FieldSpec::Rational);
    }

    #[test]
    fn rejects_proportional_forms() {
        let text = r#"{"forms":[["1","0"],["2","0"]]}"#;
        assert_eq!(parse_arrangement(text), Err(FormatError::ProportionalForms(0, 1)));
    }

    #[test]
    fn quadratic_fixture() {
        let text = r#"{"version":1,"field":{"type":"quadratic","d":3},"forms":[
            ["1","0"],["1",{"a":"0","b":"1"}],["1",{"a":"0","b":"-1"}],
            ["0","1"],[{"a":"0","b":"1"},"1"],[{"a":"0","b":"1"},"-1"]]}"#;
        let arr = parse_arrangement(text).unwrap();
        assert_eq!(arr.len(), 6);
        let rational = text.replace(r#"{"type":"quadratic","d":3}"#, r#"{"type":"rational"}"#);
        assert!(matches!(parse_arrangement(&rational), Err(FormatError::FieldMismatch(_))));
    }

    #[test]
    fn writing_is_a_fixed_point() {
        let arr = parse_arrangement(B2).unwrap();
        let text = write_arrangement(&arr);
        let again = write_arrangement(&parse_arrangement(&text).unwrap());
        assert_eq!(text, again);
        assert!(matches!(parse_arrangement("{"), Err(FormatError::Parse(_))));
        assert!(matches!(parse_arrangement(r#"{"version":2,"forms":[]}"#), Err(FormatError::Version(2))));
    }
}
