//! Reading sequences and reports from JSON text.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::sequence::Sequence;

/// JSON schema for the sequence wire form.
pub const SEQUENCE_SCHEMA: &str = include_str!("../schemas/sequence.schema.json");
/// JSON schema for [`Report`].
pub const REPORT_SCHEMA: &str = include_str!("../schemas/report.schema.json");

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    n: u32,
    terms: Vec<[u32; 3]>,
}

fn syntax(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

fn shape<T: DeserializeOwned>(value: Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        Error::Schema { field, message: e.into_inner().to_string() }
    })
}

/// Parses `{"n": N, "terms": [[a, b, multiplicity], ...]}`.
///
/// Malformed JSON is a `Parse` error with line and column; well-formed JSON
/// of the wrong shape, residues outside `[0, N-1]`, zero multiplicities and
/// repeated elements are `Schema` errors naming the offending field.
pub fn parse_sequence_str(text: &str) -> Result<Sequence> {
    let raw: RawSequence = shape(syntax(text)?)?;
    Sequence::from_wire(raw.n, &raw.terms)
}

pub fn parse_sequence_file(path: impl AsRef<Path>) -> Result<Sequence> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_sequence_str(&text)
}

pub fn parse_report_str(text: &str) -> Result<Report> {
    let value = syntax(text)?;
    if let Some(list) = value.get("counterexamples").and_then(Value::as_array) {
        for (i, s) in list.iter().enumerate() {
            let raw: RawSequence = shape(s.clone()).map_err(|e| prefix(e, &format!("counterexamples[{i}]")))?;
            Sequence::from_wire(raw.n, &raw.terms).map_err(|e| prefix(e, &format!("counterexamples[{i}]")))?;
        }
    }
    shape(value)
}

fn prefix(e: Error, at: &str) -> Error {
    match e {
        Error::Schema { field, message } if field.is_empty() || field == "." => {
            Error::Schema { field: at.to_string(), message }
        }
        Error::Schema { field, message } => Error::Schema { field: format!("{at}.{field}"), message },
        other => other,
    }
}
