//! JSON tensor files.
//!
//! ```json
//! { "n": 2, "format": "sparse", "symmetrize": true,
//!   "entries": [[1, 1, 1, 1, 13.0], [1, 2, 1, 2, -4.0]] }
//! ```
//!
//! Sparse entries use 1-based indices; unlisted entries are zero. With
//! `"symmetrize": true` every listed entry is copied over its symmetry orbit,
//! otherwise the listing must already be symmetric. Dense files hold
//! `n × n × n × n` nested arrays and are orbit-averaged when `symmetrize` is
//! set. Writers always emit the dense layout with full symmetry applied.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{symmetry_orbit, ElasticityTensor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Sparse,
    Dense,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    n: usize,
    format: Format,
    entries: Value,
    #[serde(default)]
    symmetrize: bool,
}

#[derive(Debug, Serialize)]
struct DenseFile {
    n: usize,
    format: Format,
    symmetrize: bool,
    entries: Vec<Vec<Vec<Vec<f64>>>>,
}

/// Parses a tensor file from a JSON string.
pub fn parse_tensor<T: Scalar>(text: &str) -> Result<ElasticityTensor<T>> {
    let raw: RawFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(e.to_string()))?;
    if raw.n < 2 {
        return Err(Error::DimensionTooSmall(raw.n));
    }
    let n = raw.n;
    let values = match raw.format {
        Format::Sparse => sparse_values(n, &raw.entries, raw.symmetrize)?,
        Format::Dense => dense_values(n, &raw.entries)?,
    };
    let data = values.into_iter().map(T::lit).collect();
    // sparse+symmetrize has already expanded orbits; averaging is then a no-op
    ElasticityTensor::new(n, data, raw.symmetrize)
}

pub fn read_tensor<T: Scalar>(path: &Path) -> Result<ElasticityTensor<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_tensor(&text)
}

/// Serializes a tensor in the dense layout.
pub fn to_dense_json<T: Scalar>(a: &ElasticityTensor<T>) -> String {
    let file = DenseFile { n: a.n(), format: Format::Dense, symmetrize: false, entries: a.to_nested_f64() };
    serde_json::to_string_pretty(&file).expect("dense tensor serializes")
}

pub fn write_tensor<T: Scalar>(a: &ElasticityTensor<T>, path: &Path) -> Result<()> {
    std::fs::write(path, to_dense_json(a) + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn flat(n: usize, [i, j, k, l]: [usize; 4]) -> usize {
    ((i * n + j) * n + k) * n + l
}

fn sparse_values(n: usize, entries: &Value, symmetrize: bool) -> Result<Vec<f64>> {
    let list = entries.as_array().ok_or_else(|| Error::Parse("entries: expected a list of [i, j, k, l, value]".into()))?;
    let mut out = vec![0.0; n.pow(4)];
    // orbit representative -> (value, entry position) for conflict detection
    let mut seen: BTreeMap<[usize; 4], (f64, usize)> = BTreeMap::new();
    for (pos, item) in list.iter().enumerate() {
        let fields = item
            .as_array()
            .filter(|f| f.len() == 5)
            .ok_or_else(|| Error::Parse(format!("entries[{pos}]: expected [i, j, k, l, value]")))?;
        let mut idx = [0usize; 4];
        for (slot, field) in idx.iter_mut().zip(fields) {
            let v = field
                .as_u64()
                .filter(|&v| v >= 1 && v as usize <= n)
                .ok_or_else(|| Error::Parse(format!("entries[{pos}]: index {field} out of range 1..={n}")))?;
            *slot = v as usize - 1;
        }
        let value = fields[4]
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("entries[{pos}]: value {} is not a number", fields[4])))?;
        if !value.is_finite() {
            return Err(Error::NonFiniteEntry(idx));
        }
        if symmetrize {
            let orbit = symmetry_orbit(idx);
            let rep = *orbit.iter().min().expect("orbit is nonempty");
            if let Some(&(prev, prev_pos)) = seen.get(&rep) {
                if prev != value {
                    return Err(Error::Parse(format!(
                        "entries[{pos}]: value {value} conflicts with entries[{prev_pos}] = {prev} in the same symmetry orbit"
                    )));
                }
            }
            seen.insert(rep, (value, pos));
            for o in orbit {
                out[flat(n, o)] = value;
            }
        } else {
            out[flat(n, idx)] = value;
        }
    }
    Ok(out)
}

fn dense_values(n: usize, entries: &Value) -> Result<Vec<f64>> {
    fn level<'a>(v: &'a Value, n: usize, path: &str) -> Result<&'a Vec<Value>> {
        v.as_array()
            .filter(|a| a.len() == n)
            .ok_or_else(|| Error::Parse(format!("entries{path}: expected an array of length {n}")))
    }
    let mut out = Vec::with_capacity(n.pow(4));
    for (i, vi) in level(entries, n, "")?.iter().enumerate() {
        for (j, vj) in level(vi, n, &format!("[{i}]"))?.iter().enumerate() {
            for (k, vk) in level(vj, n, &format!("[{i}][{j}]"))?.iter().enumerate() {
                for (l, v) in level(vk, n, &format!("[{i}][{j}][{k}]"))?.iter().enumerate() {
                    let x = v
                        .as_f64()
                        .ok_or_else(|| Error::Parse(format!("entries[{i}][{j}][{k}][{l}]: not a number")))?;
                    out.push(x);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_symmetrized_expands_orbits() {
        let text = r#"{"n": 2, "format": "sparse", "symmetrize": true,
                       "entries": [[1,2,1,2,-4], [1,1,1,1,13]]}"#;
        let a: ElasticityTensor<f64> = parse_tensor(text).unwrap();
        assert_eq!(a.get(0, 1, 0, 1), -4.0);
        assert_eq!(a.get(1, 0, 1, 0), -4.0);
        assert_eq!(a.get(1, 0, 0, 1), -4.0);
        assert_eq!(a.get(0, 0, 0, 0), 13.0);
    }

    #[test]
    fn sparse_without_symmetrize_must_be_complete() {
        let text = r#"{"n": 2, "format": "sparse", "entries": [[1,2,1,1,1.0]]}"#;
        assert!(matches!(parse_tensor::<f64>(text), Err(Error::SymmetryViolation { .. })));
    }

    #[test]
    fn conflicting_orbit_values() {
        let text = r#"{"n": 2, "format": "sparse", "symmetrize": true, "entries": [[1,2,1,1,1.0],[2,1,1,1,2.0]]}"#;
        let err = parse_tensor::<f64>(text).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("entries[1]")));
    }

    #[test]
    fn parse_errors_carry_context() {
        let err = parse_tensor::<f64>("{\"n\": 2,\n \"format\": \"dense\", \"entries\": [1, }").unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("line 2")));
        let err = parse_tensor::<f64>(r#"{"n": 2, "format": "sparse", "entries": [[1,3,1,1,1.0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("entries[0]")));
        let err = parse_tensor::<f64>(r#"{"n": 2, "format": "dense", "entries": [[1,2],[3,4]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("entries[0][0]")));
        assert!(matches!(parse_tensor::<f64>(r#"{"n": 2, "format": "csv", "entries": []}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn dense_round_trip() {
        let a = ElasticityTensor::<f64>::from_fn(3, |i, j, k, l| (i + 2 * j) as f64 - 0.5 * (k * l) as f64).unwrap();
        let back: ElasticityTensor<f64> = parse_tensor(&to_dense_json(&a)).unwrap();
        assert_eq!(back, a);
    }
}
