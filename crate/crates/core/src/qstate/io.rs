//! JSON state files.
//!
//! ```json
//! {"dims": [2, 2], "matrix": [[0.5, 0.0], [0.0, 0.0], ...]}
//! {"dims": [2, 2], "vector": [[0.7071067811865476, 0.0], ...]}
//! ```
//!
//! `matrix` is row-major and flat; a nested list of rows is also accepted on
//! input. Every number is written with 17 significant digits so doubles
//! survive a write/read cycle bit for bit.

use serde::Deserialize;
use serde_json::value::RawValue;
use serde_json::Value;

use super::{DensityState, PureState};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum StateFile {
    Pure(PureState),
    Mixed(DensityState),
}

impl StateFile {
    pub fn dims(&self) -> &[usize] {
        match self {
            StateFile::Pure(p) => p.dims(),
            StateFile::Mixed(r) => r.dims(),
        }
    }

    pub fn density(&self) -> DensityState {
        match self {
            StateFile::Pure(p) => super::projector(p),
            StateFile::Mixed(r) => r.clone(),
        }
    }
}

/// Formats a double with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Result<Box<RawValue>> {
    if !x.is_finite() {
        return Err(Error::Numeric(format!("cannot serialize {x}")));
    }
    RawValue::from_string(format_f64(x)).map_err(|e| Error::Parse(e.to_string()))
}

pub(crate) fn raw_pair(z: C64) -> Result<[Box<RawValue>; 2]> {
    Ok([raw(z.re)?, raw(z.im)?])
}

pub(crate) fn raw_real_matrix(
    rows: usize,
    cols: usize,
    at: impl Fn(usize, usize) -> f64,
) -> Result<Vec<Vec<Box<RawValue>>>> {
    (0..rows)
        .map(|i| (0..cols).map(|j| raw(at(i, j))).collect())
        .collect()
}

#[derive(serde::Serialize)]
struct PureOut {
    dims: Vec<usize>,
    vector: Vec<[Box<RawValue>; 2]>,
}

#[derive(serde::Serialize)]
struct MixedOut {
    dims: Vec<usize>,
    matrix: Vec<[Box<RawValue>; 2]>,
}

pub fn to_json(state: &StateFile) -> Result<String> {
    let text = match state {
        StateFile::Pure(p) => serde_json::to_string(&PureOut {
            dims: p.dims().to_vec(),
            vector: p
                .amplitudes()
                .iter()
                .map(|z| raw_pair(*z))
                .collect::<Result<_>>()?,
        }),
        StateFile::Mixed(r) => {
            let m = r.matrix();
            let n = m.nrows();
            let flat = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| raw_pair(m[(i, j)]))
                .collect::<Result<_>>()?;
            serde_json::to_string(&MixedOut {
                dims: r.dims().to_vec(),
                matrix: flat,
            })
        }
    };
    text.map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Deserialize)]
struct StateIn {
    dims: Option<Vec<usize>>,
    matrix: Option<Value>,
    vector: Option<Vec<[f64; 2]>>,
}

fn pairs_from(value: &Value) -> Result<Vec<C64>> {
    let parse_pair = |v: &Value| -> Result<C64> {
        let pair: [f64; 2] = serde_json::from_value(v.clone())
            .map_err(|e| Error::Parse(format!("expected [re, im] pair: {e}")))?;
        Ok(C64::new(pair[0], pair[1]))
    };
    let items = value
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array".into()))?;
    let nested = items
        .first()
        .and_then(|v| v.as_array())
        .and_then(|row| row.first())
        .is_some_and(|v| v.is_array());
    if nested {
        items
            .iter()
            .flat_map(|row| row.as_array().cloned().unwrap_or_default())
            .map(|v| parse_pair(&v))
            .collect()
    } else {
        items.iter().map(parse_pair).collect()
    }
}

pub fn from_json(text: &str) -> Result<StateFile> {
    let input: StateIn = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match (input.matrix, input.vector) {
        (Some(m), None) => {
            let entries = pairs_from(&m)?;
            let n = (entries.len() as f64).sqrt().round() as usize;
            if n * n != entries.len() || n == 0 {
                return Err(Error::Parse(format!(
                    "matrix has {} entries, not a square",
                    entries.len()
                )));
            }
            let dims = input.dims.unwrap_or_else(|| vec![n]);
            let matrix = CMatrix::from_row_slice(n, n, &entries);
            DensityState::with_dims(matrix, dims).map(StateFile::Mixed)
        }
        (None, Some(v)) => {
            let amps: Vec<C64> = v.iter().map(|p| C64::new(p[0], p[1])).collect();
            let dims = input.dims.unwrap_or_else(|| vec![amps.len()]);
            PureState::with_dims(CVector::from_vec(amps), dims).map(StateFile::Pure)
        }
        _ => Err(Error::Parse(
            "state file needs exactly one of \"matrix\" or \"vector\"".into(),
        )),
    }
}
