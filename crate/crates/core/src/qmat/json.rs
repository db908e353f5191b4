//! JSON matrix format: `{"matrix": [[[re, im], x4] x4]}`, row-major.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{c, DensityMatrix4, Matrix4};
use crate::error::{Error, Result};

const LAYOUT: &str = "expected a 4x4x2 array: 4 rows of 4 [re, im] pairs";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(super) struct MatrixDoc {
    matrix: [[[f64; 2]; 4]; 4],
}

impl From<&Matrix4> for MatrixDoc {
    fn from(m: &Matrix4) -> Self {
        let mut matrix = [[[0.0; 2]; 4]; 4];
        for (i, row) in m.0.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                matrix[i][j] = [z.re, z.im];
            }
        }
        MatrixDoc { matrix }
    }
}

impl From<DensityMatrix4> for MatrixDoc {
    fn from(rho: DensityMatrix4) -> Self {
        MatrixDoc::from(rho.matrix())
    }
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn as_array<'a>(v: &'a Value, len: usize, location: &str) -> Result<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) if a.len() == len => Ok(a),
        Some(a) => Err(parse_err(
            location,
            format!("found {} elements where {len} were required; {LAYOUT}", a.len()),
        )),
        None => Err(parse_err(location, format!("not an array; {LAYOUT}"))),
    }
}

/// Parses the JSON matrix format into an unvalidated 4x4 matrix.
pub fn matrix_from_json(text: &[u8]) -> Result<Matrix4> {
    let doc: Value = serde_json::from_slice(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let rows = doc
        .get("matrix")
        .ok_or_else(|| parse_err("$", format!("missing field `matrix`; {LAYOUT}")))?;
    let rows = as_array(rows, 4, "$.matrix")?;
    let mut m = Matrix4::zeros();
    for (i, row) in rows.iter().enumerate() {
        let row = as_array(row, 4, &format!("$.matrix[{i}]"))?;
        for (j, pair) in row.iter().enumerate() {
            let loc = format!("$.matrix[{i}][{j}]");
            let pair = as_array(pair, 2, &loc)?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| parse_err(format!("{loc}[0]"), "real part is not a number"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| parse_err(format!("{loc}[1]"), "imaginary part is not a number"))?;
            m.0[i][j] = c(re, im);
        }
    }
    Ok(m)
}

pub fn matrix_to_json(m: &Matrix4) -> String {
    serde_json::to_string(&MatrixDoc::from(m)).expect("finite matrix serializes")
}
