//! File formats: dense matrices (CSV with a `# n,T` comment header, or JSON
//! `{"n","T","rows"}`), subset-keyed vectors (`{"n","entries"}`) and 2^n
//! tensors (`{"n","coeffs"}` keyed by index strings in axis order).
//!
//! Non-finite numbers are written as the strings "inf", "-inf" and "nan"
//! and read back from the same strings.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gaussian_core::BlockCovariance;
use crate::hyperdet::Tensor2n;
use crate::linalg::Matrix;
use crate::subsets::{enumerate_subsets, SubsetMask, SubsetVector};

/// A matrix file: the dense matrix plus the declared (n, T), if any.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    pub matrix: Matrix<f64>,
    pub n: Option<usize>,
    pub t: Option<usize>,
}

impl MatrixFile {
    /// Resolves (n, T) against the matrix size; `t_override` wins over the
    /// header, and n defaults to dim/T.
    pub fn into_covariance(self, t_override: Option<usize>) -> Result<BlockCovariance<f64>> {
        let dim = self.matrix.rows();
        let t = t_override.or(self.t).unwrap_or(1);
        if t == 0 || dim % t != 0 {
            return Err(Error::DimensionMismatch(format!("matrix of size {dim} is not a multiple of T={t}")));
        }
        let n = dim / t;
        if let Some(declared) = self.n {
            if declared != n {
                return Err(Error::DimensionMismatch(format!("header declares n={declared}, matrix of size {dim} with T={t} gives n={n}")));
            }
        }
        BlockCovariance::new(n, t, self.matrix)
    }
}

pub fn number_to_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn number_from_json(v: &Value) -> Result<f64> {
    match v {
        Value::Number(x) => x.as_f64().ok_or_else(|| Error::Parse(format!("number {x} out of range"))),
        Value::String(s) => parse_number(s),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn parse_number(s: &str) -> Result<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        t => t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{s}'"))),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<Option<usize>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_u64().map(|x| Some(x as usize)).ok_or_else(|| Error::Parse(format!("field '{key}' must be a non-negative integer"))),
    }
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse(format!("{what} must be a JSON object")))
}

/// JSON when the text starts with '{', CSV otherwise.
pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    if text.trim_start().starts_with('{') {
        parse_matrix_json(text)
    } else {
        parse_matrix_csv(text)
    }
}

pub fn parse_matrix_json(text: &str) -> Result<MatrixFile> {
    let v = parse_json(text)?;
    let obj = object(&v, "matrix file")?;
    let rows = obj.get("rows").and_then(Value::as_array).ok_or_else(|| Error::Parse("matrix file needs a 'rows' array".into()))?;
    let data = rows
        .iter()
        .map(|r| {
            r.as_array().ok_or_else(|| Error::Parse("each row must be an array".into()))?.iter().map(number_from_json).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixFile { matrix: square(data)?, n: usize_field(obj, "n")?, t: usize_field(obj, "T")? })
}

/// Rows of comma-separated numbers. A leading comment `# n,T` (e.g. `# 3,1`)
/// declares the block structure; a literal `# n,T` line is a column legend
/// and is skipped, as are other comments and blank lines.
pub fn parse_matrix_csv(text: &str) -> Result<MatrixFile> {
    let mut header = None;
    let mut body = String::new();
    for line in text.lines() {
        let l = line.trim();
        if let Some(c) = l.strip_prefix('#') {
            if header.is_none() {
                header = parse_header(c)?;
            }
        } else if !l.is_empty() {
            body.push_str(l);
            body.push('\n');
        }
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(body.as_bytes());
    let mut data = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse(format!("CSV: {e}")))?;
        data.push(rec.iter().map(parse_number).collect::<Result<Vec<f64>>>()?);
    }
    let (n, t) = header.unzip();
    Ok(MatrixFile { matrix: square(data)?, n, t })
}

fn parse_header(c: &str) -> Result<Option<(usize, usize)>> {
    let parts: Vec<&str> = c.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Ok(None);
    }
    let field = |p: &str, key: &str| p.strip_prefix(key).map(|r| r.trim_start_matches(['=', ':', ' '])).unwrap_or(p).to_string();
    let (a, b) = (field(parts[0], "n"), field(parts[1], "T"));
    if a.is_empty() && b.is_empty() {
        return Ok(None);
    }
    match (a.parse::<usize>(), b.parse::<usize>()) {
        (Ok(n), Ok(t)) => Ok(Some((n, t))),
        _ => Ok(None),
    }
}

fn square(data: Vec<Vec<f64>>) -> Result<Matrix<f64>> {
    let k = data.len();
    if k == 0 {
        return Err(Error::Parse("matrix has no rows".into()));
    }
    if let Some((i, r)) = data.iter().enumerate().find(|(_, r)| r.len() != k) {
        return Err(Error::Parse(format!("row {} has {} entries, expected {k}", i + 1, r.len())));
    }
    Ok(Matrix::from_fn(k, k, |i, j| data[i][j]))
}

/// CSV with the `# n,T` header line; numbers in shortest round-trip form.
pub fn format_matrix_csv(m: &Matrix<f64>, n: usize, t: usize) -> String {
    let mut out = format!("# {n},{t}\n");
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_number(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_to_json(m: &Matrix<f64>, n: usize, t: usize) -> Value {
    let rows: Vec<Value> = (0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| number_to_json(m[(i, j)])).collect())).collect();
    json!({ "n": n, "T": t, "rows": rows })
}

/// Shortest decimal that reads back to the same f64 ("inf"/"nan" otherwise).
pub fn format_number(v: f64) -> String {
    match number_to_json(v) {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

/// `{"n": …, "entries": {"[1]": v, …}}`; keys may also be digit strings.
/// Every nonempty subset must appear exactly once.
pub fn parse_subset_vector(text: &str) -> Result<SubsetVector<f64>> {
    subset_vector_from_json(&parse_json(text)?)
}

pub fn subset_vector_from_json(v: &Value) -> Result<SubsetVector<f64>> {
    let obj = object(v, "subset vector")?;
    let n = usize_field(obj, "n")?.ok_or_else(|| Error::Parse("subset vector needs 'n'".into()))?;
    let entries =
        obj.get("entries").map(|e| object(e, "'entries'")).transpose()?.ok_or_else(|| Error::Parse("subset vector needs 'entries'".into()))?;
    let mut out: SubsetVector<Option<f64>> = SubsetVector::filled(n, None)?;
    let full = SubsetMask::full(n);
    for (key, val) in entries {
        let s: SubsetMask = key.parse()?;
        if s.is_empty() || !s.is_subset_of(full) {
            return Err(Error::Parse(format!("key '{key}' is not a nonempty subset of 1..={n}")));
        }
        if out[s].is_some() {
            return Err(Error::Parse(format!("subset {s} appears twice")));
        }
        out[s] = Some(number_from_json(val)?);
    }
    let mut vals = Vec::with_capacity(out.len());
    for (s, v) in out.iter() {
        vals.push(v.ok_or_else(|| Error::Parse(format!("missing entry for {s}")))?);
    }
    SubsetVector::from_entries(n, vals)
}

/// Entries keyed "[i,j,…]" in subset (bitmask) order.
pub fn subset_vector_to_json(v: &SubsetVector<f64>) -> Value {
    let mut entries = Map::new();
    for (s, &x) in v.iter() {
        entries.insert(s.to_string(), number_to_json(x));
    }
    json!({ "n": v.n(), "entries": entries })
}

/// `{"n": 3, "coeffs": {"000": v, "001": v, …}}`; character j of a key is
/// the index on axis j+1. All 2^n keys are required.
pub fn parse_tensor(text: &str) -> Result<Tensor2n<f64>> {
    let v = parse_json(text)?;
    let obj = object(&v, "tensor file")?;
    let n = usize_field(obj, "n")?.ok_or_else(|| Error::Parse("tensor needs 'n'".into()))?;
    if n == 0 || n > 16 {
        return Err(Error::SizeOutOfRange(n));
    }
    let coeffs = obj.get("coeffs").map(|e| object(e, "'coeffs'")).transpose()?.ok_or_else(|| Error::Parse("tensor needs 'coeffs'".into()))?;
    let mut vals: Vec<Option<f64>> = vec![None; 1 << n];
    for (key, val) in coeffs {
        if key.len() != n || !key.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::Parse(format!("tensor key '{key}' must be {n} binary digits")));
        }
        let idx = key.bytes().enumerate().fold(0usize, |b, (j, c)| b | (((c - b'0') as usize) << j));
        if vals[idx].is_some() {
            return Err(Error::Parse(format!("tensor key '{key}' appears twice")));
        }
        vals[idx] = Some(number_from_json(val)?);
    }
    let coeffs = vals
        .into_iter()
        .enumerate()
        .map(|(idx, v)| v.ok_or_else(|| Error::Parse(format!("missing tensor coefficient {}", tensor_key(n, idx as u32)))))
        .collect::<Result<Vec<f64>>>()?;
    Tensor2n::from_coeffs(n, coeffs)
}

pub fn tensor_key(n: usize, idx: u32) -> String {
    (0..n).map(|j| if idx & (1 << j) != 0 { '1' } else { '0' }).collect()
}

/// Keys in lexicographic order of the index string.
pub fn tensor_to_json(t: &Tensor2n<f64>) -> Value {
    let n = t.n();
    let mut keys: Vec<(String, u32)> = (0..(1u32 << n)).map(|i| (tensor_key(n, i), i)).collect();
    keys.sort();
    let mut coeffs = Map::new();
    for (k, i) in keys {
        coeffs.insert(k, number_to_json(t.get(i)));
    }
    json!({ "n": n, "coeffs": coeffs })
}

/// Every nonempty subset of {1..n} rendered as a JSON key, in subset order.
pub fn subset_keys(n: usize) -> Result<Vec<String>> {
    Ok(enumerate_subsets(n)?.map(|s| s.to_string()).collect())
}

/// Stable pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_header_and_comments() {
        let f = parse_matrix_csv("# 2,1\n1, 0.5\n# note\n\n0.5,2\n").unwrap();
        assert_eq!((f.n, f.t), (Some(2), Some(1)));
        assert_eq!(f.matrix[(1, 1)], 2.0);
        let legend = parse_matrix_csv("# n,T\n1\n").unwrap();
        assert_eq!((legend.n, legend.t), (None, None));
        let named = parse_matrix_csv("# n=3, T=2\n1,0,0,0,0,0\n0,1,0,0,0,0\n0,0,1,0,0,0\n0,0,0,1,0,0\n0,0,0,0,1,0\n0,0,0,0,0,1\n").unwrap();
        assert_eq!((named.n, named.t), (Some(3), Some(2)));
        assert_eq!(named.into_covariance(None).unwrap().n(), 3);
        assert!(parse_matrix_csv("1,2\n3\n").is_err());
    }

    #[test]
    fn matrix_round_trips() {
        let m = Matrix::from_fn(3, 3, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let back = parse_matrix(&format_matrix_csv(&m, 3, 1)).unwrap();
        assert_eq!(back.matrix, m);
        let js = to_pretty(&matrix_to_json(&m, 3, 1));
        let back = parse_matrix(&js).unwrap();
        assert_eq!(back.matrix, m);
        assert_eq!((back.n, back.t), (Some(3), Some(1)));
    }

    #[test]
    fn header_must_match_size() {
        let f = parse_matrix_csv("# 3,1\n1,0\n0,1\n").unwrap();
        assert!(matches!(f.into_covariance(None), Err(Error::DimensionMismatch(_))));
        let g = parse_matrix_csv("1,0\n0,1\n").unwrap();
        assert!(g.clone().into_covariance(Some(3)).is_err());
        assert_eq!(g.into_covariance(Some(2)).unwrap().t(), 2);
    }

    #[test]
    fn subset_vectors() {
        let text = r#"{"n": 2, "entries": {"[1]": 1.5, "2": "-inf", "[1,2]": 0.25}}"#;
        let v = parse_subset_vector(text).unwrap();
        assert_eq!(v[SubsetMask::of(&[2])], f64::NEG_INFINITY);
        let out = subset_vector_to_json(&v);
        assert_eq!(out["entries"]["[2]"], json!("-inf"));
        let keys: Vec<&String> = out["entries"].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["[1]", "[2]", "[1,2]"]);
        assert_eq!(subset_vector_from_json(&out).unwrap()[SubsetMask::full(2)], 0.25);
        let missing = r#"{"n": 2, "entries": {"[1]": 1, "[2]": 1}}"#;
        assert!(matches!(parse_subset_vector(missing), Err(Error::Parse(m)) if m.contains("[1,2]")));
        let dup = r#"{"n": 2, "entries": {"[1]": 1, "1": 1, "[2]": 1, "12": 1}}"#;
        assert!(parse_subset_vector(dup).is_err());
        let outside = r#"{"n": 1, "entries": {"[1]": 1, "[2]": 1}}"#;
        assert!(parse_subset_vector(outside).is_err());
    }

    #[test]
    fn tensors() {
        let t = Tensor2n::from_fn(3, |i| i as f64).unwrap();
        let js = tensor_to_json(&t);
        assert_eq!(js["coeffs"]["100"], json!(1.0));
        assert_eq!(js["coeffs"]["001"], json!(4.0));
        let back = parse_tensor(&js.to_string()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.at(&[1, 0, 0]), 1.0);
        assert!(parse_tensor(r#"{"n": 1, "coeffs": {"0": 1}}"#).is_err());
        assert!(parse_tensor(r#"{"n": 1, "coeffs": {"0": 1, "2": 1}}"#).is_err());
    }

    #[test]
    fn number_text() {
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert!(parse_number("nan").unwrap().is_nan());
        assert_eq!(parse_number("1e-3").unwrap(), 1e-3);
    }
}
