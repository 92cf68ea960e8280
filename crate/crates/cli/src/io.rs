//! JSON documents: problem specs and certificates.
//!
//! Complex numbers serialize as `[re, im]` pairs, matrices row-major, and the
//! vectorization convention is recorded in the file itself (`"vec":
//! "column"`). Output is canonicalized — sorted keys, floats at 17
//! significant digits — so documents hash reproducibly; certificates embed
//! the SHA-256 of the canonicalized problem rather than the problem itself.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use ipfactor_core::matspace::Complex64;
use ipfactor_core::positivize::{CertForm, Certificate, ShiftLedger};
use ipfactor_core::superop::{from_supermat, OpSum, SuperMat};
use ipfactor_core::{CMat, Tol};

pub const SCHEMA_VERSION: u64 = 1;
pub const VEC_CONVENTION: &str = "column";

#[derive(Debug)]
pub enum IoError {
    Parse(String),
    Semantic(String),
}

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IoError::Parse(m) => write!(f, "parse error: {m}"),
            IoError::Semantic(m) => write!(f, "{m}"),
        }
    }
}

fn parse_err(m: impl Into<String>) -> IoError {
    IoError::Parse(m.into())
}

/// A parsed problem specification.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub dim: usize,
    pub map: SpecMap,
    pub seed: Option<u64>,
    /// Canonical SHA-256 of the document, binding certificates to it.
    pub hash: String,
}

#[derive(Debug, Clone)]
pub enum SpecMap {
    OpSum(OpSum),
    SuperMat(SuperMat),
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<ProblemSpec, IoError> {
        let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| parse_err("top level must be an object"))?;

        let version = obj
            .get("version")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("missing integer field 'version'"))?;
        if version != SCHEMA_VERSION {
            return Err(parse_err(format!("unsupported version {version}")));
        }
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("missing integer field 'dim'"))? as usize;
        if dim == 0 {
            return Err(parse_err("'dim' must be at least 1"));
        }
        if let Some(vc) = obj.get("vec") {
            let vc = vc.as_str().ok_or_else(|| parse_err("'vec' must be a string"))?;
            if vc != VEC_CONVENTION {
                return Err(parse_err(format!(
                    "unsupported vectorization '{vc}' (expected '{VEC_CONVENTION}')"
                )));
            }
        }
        let form = obj
            .get("form")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err("missing string field 'form'"))?;
        let data = obj.get("data").ok_or_else(|| parse_err("missing field 'data'"))?;

        let map = match form {
            "opsum" => {
                let arr = data.as_array().ok_or_else(|| parse_err("'data' must be a list of {E, F} pairs"))?;
                let mut pairs = Vec::with_capacity(arr.len());
                for (k, item) in arr.iter().enumerate() {
                    let e = item
                        .get("E")
                        .ok_or_else(|| parse_err(format!("pair {k}: missing 'E'")))?;
                    let f = item
                        .get("F")
                        .ok_or_else(|| parse_err(format!("pair {k}: missing 'F'")))?;
                    pairs.push((value_to_mat(dim, e)?, value_to_mat(dim, f)?));
                }
                SpecMap::OpSum(
                    OpSum::new(dim, pairs).map_err(|e| parse_err(e.to_string()))?,
                )
            }
            "supermat" => {
                let mat = value_to_mat(dim * dim, data)?;
                SpecMap::SuperMat(
                    SuperMat::new(dim, mat).map_err(|e| parse_err(e.to_string()))?,
                )
            }
            other => return Err(parse_err(format!("unknown form '{other}'"))),
        };

        let seed = obj.get("seed").and_then(Value::as_u64);
        let hash = canonical_hash(&v);
        Ok(ProblemSpec { dim, map, seed, hash })
    }

    pub fn supermat(&self) -> SuperMat {
        match &self.map {
            SpecMap::OpSum(s) => s.to_supermat(),
            SpecMap::SuperMat(s) => s.clone(),
        }
    }

    /// Operator-sum view of the map (minimal form for supermatrix inputs).
    pub fn opsum(&self, tol: &Tol) -> Result<OpSum, IoError> {
        match &self.map {
            SpecMap::OpSum(s) => Ok(s.clone()),
            SpecMap::SuperMat(s) => {
                from_supermat(s, tol).map_err(|e| IoError::Semantic(e.to_string()))
            }
        }
    }
}

/// Build the JSON document for a generated operator-sum spec.
pub fn opsum_spec_value(s: &OpSum, seed: Option<u64>) -> Value {
    let data: Vec<Value> = s
        .pairs()
        .iter()
        .map(|(e, f)| json!({ "E": mat_to_value(e), "F": mat_to_value(f) }))
        .collect();
    let mut obj = Map::new();
    obj.insert("version".into(), json!(SCHEMA_VERSION));
    obj.insert("dim".into(), json!(s.dim()));
    obj.insert("form".into(), json!("opsum"));
    obj.insert("vec".into(), json!(VEC_CONVENTION));
    obj.insert("data".into(), Value::Array(data));
    if let Some(seed) = seed {
        obj.insert("seed".into(), json!(seed));
    }
    Value::Object(obj)
}

/// Serialize a certificate, binding it to the problem hash.
pub fn certificate_to_value(cert: &Certificate, problem_hash: &str) -> Value {
    let pairs: Vec<Value> = cert
        .pairs
        .pairs()
        .iter()
        .map(|(a, b)| json!({ "A": mat_to_value(a), "B": mat_to_value(b) }))
        .collect();
    json!({
        "version": SCHEMA_VERSION,
        "problem_hash": problem_hash,
        "form": cert.form.tag(),
        "signs": cert.signs.iter().map(|&s| s as i64).collect::<Vec<_>>(),
        "pairs": pairs,
        "residual": cert.residual,
        "margins": cert.margins,
        "ledger": ledger_to_value(&cert.ledger),
        "tool_version": format!("ipfactor {}", env!("CARGO_PKG_VERSION")),
    })
}

fn ledger_to_value(l: &ShiftLedger) -> Value {
    json!({
        "alpha": l.alpha,
        "beta": l.beta,
        "gamma": l.gamma,
        "eta": l.eta,
        "xi": l.xi,
        "t0": l.t0,
        "eps_backoff": l.eps_backoff,
    })
}

/// Parsed certificate document.
pub struct CertificateDoc {
    pub problem_hash: String,
    pub certificate: Certificate,
    pub tool_version: String,
}

impl CertificateDoc {
    pub fn parse(text: &str) -> Result<CertificateDoc, IoError> {
        let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| parse_err("top level must be an object"))?;
        let version = obj
            .get("version")
            .and_then(Value::as_u64)
            .ok_or_else(|| parse_err("missing 'version'"))?;
        if version != SCHEMA_VERSION {
            return Err(parse_err(format!("unsupported version {version}")));
        }
        let problem_hash = obj
            .get("problem_hash")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err("missing 'problem_hash'"))?
            .to_string();
        let form_tag = obj
            .get("form")
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err("missing 'form'"))?;
        let form = CertForm::from_tag(form_tag)
            .ok_or_else(|| parse_err(format!("unknown form tag '{form_tag}'")))?;
        let signs: Vec<i8> = obj
            .get("signs")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("missing 'signs'"))?
            .iter()
            .map(|s| s.as_i64().map(|x| x as i8).ok_or_else(|| parse_err("bad sign entry")))
            .collect::<Result<_, _>>()?;

        let pair_values = obj
            .get("pairs")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("missing 'pairs'"))?;
        if pair_values.is_empty() {
            return Err(parse_err("certificate must contain at least one pair"));
        }
        let probe = pair_values[0]
            .get("A")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("pair 0: missing matrix 'A'"))?;
        let dim = probe.len();
        let mut pairs = Vec::with_capacity(pair_values.len());
        for (k, pv) in pair_values.iter().enumerate() {
            let a = pv.get("A").ok_or_else(|| parse_err(format!("pair {k}: missing 'A'")))?;
            let b = pv.get("B").ok_or_else(|| parse_err(format!("pair {k}: missing 'B'")))?;
            pairs.push((value_to_mat(dim, a)?, value_to_mat(dim, b)?));
        }
        let opsum = OpSum::new(dim, pairs).map_err(|e| parse_err(e.to_string()))?;

        let residual = obj.get("residual").and_then(Value::as_f64).unwrap_or(f64::INFINITY);
        let margins: Vec<f64> = obj
            .get("margins")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(Value::as_f64).collect())
            .unwrap_or_default();
        let ledger = obj.get("ledger").map(value_to_ledger).unwrap_or_default();
        let tool_version = obj
            .get("tool_version")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string();

        Ok(CertificateDoc {
            problem_hash,
            certificate: Certificate { form, pairs: opsum, signs, residual, margins, ledger },
            tool_version,
        })
    }
}

fn value_to_ledger(v: &Value) -> ShiftLedger {
    let arr = |k: &str| -> Vec<f64> {
        v.get(k)
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(Value::as_f64).collect())
            .unwrap_or_default()
    };
    ShiftLedger {
        alpha: arr("alpha"),
        beta: arr("beta"),
        gamma: arr("gamma"),
        eta: arr("eta"),
        xi: arr("xi"),
        t0: v.get("t0").and_then(Value::as_f64),
        eps_backoff: v.get("eps_backoff").and_then(Value::as_f64),
    }
}

pub fn mat_to_value(m: &CMat) -> Value {
    let n = m.dim();
    Value::Array(
        (0..n)
            .map(|i| {
                Value::Array(
                    (0..n)
                        .map(|j| {
                            let z = m.get(i, j);
                            json!([z.re, z.im])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn value_to_mat(dim: usize, v: &Value) -> Result<CMat, IoError> {
    let rows = v.as_array().ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    if rows.len() != dim {
        return Err(parse_err(format!("expected {dim} rows, got {}", rows.len())));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| parse_err(format!("row {i} must be an array")))?;
        if row.len() != dim {
            return Err(parse_err(format!("row {i}: expected {dim} entries, got {}", row.len())));
        }
        for (j, z) in row.iter().enumerate() {
            let pair = z
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| parse_err(format!("entry ({i},{j}) must be [re, im]")))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| parse_err(format!("entry ({i},{j}): re not a number")))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| parse_err(format!("entry ({i},{j}): im not a number")))?;
            entries.push(Complex64::new(re, im));
        }
    }
    CMat::from_rows(dim, &entries).map_err(|e| parse_err(e.to_string()))
}

/// Canonical JSON: object keys sorted, floats printed with 17 significant
/// digits (full f64 round trip), integers as integers.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(v, &mut out);
    out
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let f = n.as_f64().unwrap_or(0.0);
                let f = if f == 0.0 { 0.0 } else { f }; // normalize -0.0
                out.push_str(&format!("{f:.16e}"));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string encodes")),
        Value::Array(a) => {
            out.push('[');
            for (k, item) in a.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(o) => {
            let sorted: BTreeMap<&String, &Value> = o.iter().collect();
            out.push('{');
            for (k, (key, val)) in sorted.into_iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key encodes"));
                out.push(':');
                write_canonical(val, out);
            }
            out.push('}');
        }
    }
}

/// Hex SHA-256 of the canonical form.
pub fn canonical_hash(v: &Value) -> String {
    let canon = canonical_json(v);
    let mut hasher = Sha256::new();
    hasher.update(canon.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
