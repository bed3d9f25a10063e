//! JSON fan documents: `{"dim": d, "rays": [[..]], "max_cones": [[..]], "name": ".."}`
//! with 0-based cone indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FanFile {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

/// Parses and validates a fan document. Returns the fan together with
/// any primitivization warnings.
///
/// Syntax and schema problems, including out-of-range cone indices, are
/// `Error::Parse`; a well-formed fan that is not complete and simplicial is
/// `Error::Validation`.
pub fn parse_fan(text: &str) -> Result<(Fan, Vec<String>)> {
    let doc: FanFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let (fan, warnings) = Fan::with_warnings(doc.dim, doc.rays, doc.max_cones, doc.name).map_err(|e| match e {
        Error::MalformedFan(msg) => Error::Parse(msg),
        other => other,
    })?;
    let diag = fan.validate();
    if !diag.is_valid() {
        return Err(Error::Validation(diag.problems.join("; ")));
    }
    Ok((fan, warnings))
}

/// Serializes a fan in the format read by [`parse_fan`].
pub fn write_fan(fan: &Fan) -> String {
    let doc = FanFile {
        dim: fan.dim,
        rays: fan.rays.clone(),
        max_cones: fan.max_cones.clone(),
        name: fan.name.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("fan documents always serialize")
}
