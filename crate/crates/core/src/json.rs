//! File formats. Rationals are strings `"p/q"` or integers; indices in files
//! are 1-based. Output is canonical: object keys sorted, fractions reduced.

use serde_json::{json, Map, Value};

use crate::correspondence::{DerivationData, KahlerAlgebra};
use crate::deformation::JFamily;
use crate::error::{Error, Result};
use crate::exterior::{Exterior, KForm};
use crate::lie::LieAlgebra;
use crate::matrix::QMatrix;
use crate::poly::Poly;
use crate::scalar::{format_scalar, scalar_from_json, Scalar};
use crate::structures::StructureData;

/// Parses text, reporting syntax errors with line and column.
pub fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))
}

pub fn read_file(path: &std::path::Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_text(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("{path}: missing field \"{key}\"")))
}

fn scalar_at(v: &Value, path: &str) -> Result<Scalar> {
    scalar_from_json(v).map_err(|e| Error::Parse(format!("{path}: {}", strip(e))))
}

fn strip(e: Error) -> String {
    match e {
        Error::Parse(m) => m,
        other => other.to_string(),
    }
}

fn index_at(v: &Value, n: usize, path: &str) -> Result<usize> {
    let i = v.as_u64().ok_or_else(|| Error::Parse(format!("{path}: expected a positive integer index")))? as usize;
    if i == 0 || i > n {
        return Err(Error::Parse(format!("{path}: index {i} out of range 1..={n}")));
    }
    Ok(i - 1)
}

pub fn vector_from_json(v: &Value, path: &str) -> Result<Vec<Scalar>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("{path}: expected an array")))?;
    arr.iter().enumerate().map(|(i, x)| scalar_at(x, &format!("{path}[{i}]"))).collect()
}

pub fn matrix_from_json(v: &Value, path: &str) -> Result<QMatrix> {
    let arr = v.as_array().ok_or_else(|| Error::Parse(format!("{path}: expected an array of rows")))?;
    let rows = arr.iter().enumerate().map(|(i, r)| vector_from_json(r, &format!("{path}[{i}]"))).collect::<Result<Vec<_>>>()?;
    if let Some(first) = rows.first() {
        if let Some(i) = rows.iter().position(|r| r.len() != first.len()) {
            return Err(Error::Parse(format!("{path}[{i}]: row has {} entries, expected {}", rows[i].len(), first.len())));
        }
    }
    QMatrix::from_rows(rows).map_err(|e| Error::Parse(format!("{path}: {}", strip(e))))
}

fn vec_json(v: &[Scalar]) -> Value {
    json!(v.iter().map(format_scalar).collect::<Vec<_>>())
}

pub fn lie_from_json(v: &Value) -> Result<LieAlgebra> {
    let n = field(v, "dim", "algebra")?.as_u64().ok_or_else(|| Error::Parse("algebra.dim: expected a non-negative integer".into()))? as usize;
    if n > 20 {
        return Err(Error::Parse(format!("algebra.dim: {n} exceeds the supported maximum of 20")));
    }
    let names: Vec<String> = match v.get("basis") {
        None => (1..=n).map(|i| format!("e{i}")).collect(),
        Some(b) => {
            let arr = b.as_array().ok_or_else(|| Error::Parse("algebra.basis: expected an array of names".into()))?;
            if arr.len() != n {
                return Err(Error::Parse(format!("algebra.basis: {} names for dimension {n}", arr.len())));
            }
            arr.iter()
                .enumerate()
                .map(|(i, s)| s.as_str().map(str::to_string).ok_or_else(|| Error::Parse(format!("algebra.basis[{i}]: expected a string"))))
                .collect::<Result<_>>()?
        }
    };
    let mut c: Vec<Option<Scalar>> = vec![None; n * n * n];
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let brackets = match v.get("brackets") {
        None => Vec::new(),
        Some(b) => b.as_array().cloned().ok_or_else(|| Error::Parse("algebra.brackets: expected an array".into()))?,
    };
    for (e, entry) in brackets.iter().enumerate() {
        let path = format!("algebra.brackets[{e}]");
        let i = index_at(field(entry, "i", &path)?, n, &format!("{path}.i"))?;
        let j = index_at(field(entry, "j", &path)?, n, &format!("{path}.j"))?;
        let coeffs = field(entry, "coeffs", &path)?.as_object().ok_or_else(|| Error::Parse(format!("{path}.coeffs: expected an object")))?;
        for (key, value) in coeffs {
            let kpath = format!("{path}.coeffs.{key}");
            let k: usize = key.parse().map_err(|_| Error::Parse(format!("{kpath}: key must be a 1-based index")))?;
            if k == 0 || k > n {
                return Err(Error::Parse(format!("{kpath}: index {k} out of range 1..={n}")));
            }
            let k = k - 1;
            let x = scalar_at(value, &kpath)?;
            if i == j {
                if x != Scalar::default() {
                    return Err(Error::Parse(format!("{kpath}: [{0},{0}] must vanish", names[i])));
                }
                continue;
            }
            for (slot, val) in [(idx(i, j, k), x.clone()), (idx(j, i, k), -x)] {
                match &c[slot] {
                    Some(old) if *old != val => {
                        return Err(Error::Parse(format!("{kpath}: conflicts with an earlier entry for the same pair")));
                    }
                    _ => c[slot] = Some(val),
                }
            }
        }
    }
    LieAlgebra::from_raw(names, c.into_iter().map(Option::unwrap_or_default).collect()).map_err(|e| Error::Parse(format!("algebra: {}", strip(e))))
}

pub fn lie_to_json(l: &LieAlgebra) -> Value {
    let n = l.dim();
    let mut brackets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = l.bracket_basis(i, j);
            let mut coeffs = Map::new();
            for (k, x) in v.iter().enumerate() {
                if *x != Scalar::default() {
                    coeffs.insert((k + 1).to_string(), json!(format_scalar(x)));
                }
            }
            if !coeffs.is_empty() {
                brackets.push(json!({ "i": i + 1, "j": j + 1, "coeffs": coeffs }));
            }
        }
    }
    json!({ "dim": n, "basis": l.basis_names(), "brackets": brackets })
}

pub fn structure_from_json(v: &Value) -> Result<StructureData> {
    Ok(StructureData {
        j: matrix_from_json(field(v, "J", "structure")?, "structure.J")?,
        xi: vector_from_json(field(v, "xi", "structure")?, "structure.xi")?,
        alpha: vector_from_json(field(v, "alpha", "structure")?, "structure.alpha")?,
        g: matrix_from_json(field(v, "g", "structure")?, "structure.g")?,
    })
}

pub fn structure_to_json(s: &StructureData) -> Value {
    s.to_json()
}

/// A metric file is either `{"g": [[..]]}` or a bare matrix.
pub fn metric_from_json(v: &Value) -> Result<QMatrix> {
    match v.get("g") {
        Some(g) => matrix_from_json(g, "metric.g"),
        None => matrix_from_json(v, "metric"),
    }
}

/// An algebra file carrying `"J"` and `"g"` next to the algebra fields.
pub fn kahler_from_json(v: &Value) -> Result<KahlerAlgebra> {
    Ok(KahlerAlgebra {
        lie: lie_from_json(v)?,
        j: matrix_from_json(field(v, "J", "kahler")?, "kahler.J")?,
        g: matrix_from_json(field(v, "g", "kahler")?, "kahler.g")?,
    })
}

pub fn kahler_to_json(h: &KahlerAlgebra) -> Value {
    let mut v = lie_to_json(&h.lie);
    v["J"] = h.j.to_json();
    v["g"] = h.g.to_json();
    v
}

/// `J` and `g` from a structure or Kähler file.
pub fn complex_structure_from_json(v: &Value) -> Result<(QMatrix, QMatrix)> {
    Ok((matrix_from_json(field(v, "J", "structure")?, "structure.J")?, matrix_from_json(field(v, "g", "structure")?, "structure.g")?))
}

pub fn derivation_from_json(v: &Value) -> Result<DerivationData> {
    let m = match v.get("D") {
        Some(d) => matrix_from_json(d, "derivation.D")?,
        None => matrix_from_json(v, "derivation")?,
    };
    Ok(DerivationData { d: m })
}

pub fn derivation_to_json(d: &DerivationData) -> Value {
    json!({ "D": d.d.to_json() })
}

/// `{"J_t": [[entry]]}` where an entry is a rational (constant in `t`) or
/// an array of coefficients in increasing powers of `t`.
pub fn family_from_json(v: &Value) -> Result<JFamily> {
    let rows = field(v, "J_t", "family")?.as_array().ok_or_else(|| Error::Parse("family.J_t: expected an array of rows".into()))?;
    let mut entries = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let arr = row.as_array().ok_or_else(|| Error::Parse(format!("family.J_t[{i}]: expected an array")))?;
        if arr.len() != rows.len() {
            return Err(Error::Parse(format!("family.J_t[{i}]: expected {} entries", rows.len())));
        }
        let mut out = Vec::with_capacity(arr.len());
        for (j, e) in arr.iter().enumerate() {
            let path = format!("family.J_t[{i}][{j}]");
            out.push(match e {
                Value::Array(cs) => Poly::new(cs.iter().enumerate().map(|(p, c)| scalar_at(c, &format!("{path}[{p}]"))).collect::<Result<_>>()?),
                other => Poly::new(vec![scalar_at(other, &path)?]),
            });
        }
        entries.push(out);
    }
    Ok(JFamily { entries })
}

pub fn form_from_json(ext: &Exterior, v: &Value) -> Result<KForm<Scalar>> {
    let k = field(v, "degree", "form")?.as_u64().ok_or_else(|| Error::Parse("form.degree: expected an integer".into()))? as usize;
    if k > ext.n() {
        return Err(Error::Parse(format!("form.degree: {k} exceeds the dimension {}", ext.n())));
    }
    let terms = field(v, "terms", "form")?.as_array().ok_or_else(|| Error::Parse("form.terms: expected an array".into()))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for (t, term) in terms.iter().enumerate() {
        let path = format!("form.terms[{t}]");
        let idx = field(term, "idx", &path)?.as_array().ok_or_else(|| Error::Parse(format!("{path}.idx: expected an array")))?;
        let idx = idx.iter().enumerate().map(|(p, i)| index_at(i, ext.n(), &format!("{path}.idx[{p}]"))).collect::<Result<Vec<_>>>()?;
        if idx.len() != k {
            return Err(Error::Parse(format!("{path}.idx: {} indices for a {k}-form", idx.len())));
        }
        parsed.push((idx, scalar_at(field(term, "coeff", &path)?, &format!("{path}.coeff"))?));
    }
    KForm::from_terms(ext, k, &parsed)
}

pub fn scalars_json(v: &[Scalar]) -> Value {
    vec_json(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn brackets_are_completed_and_round_trip() {
        let text = r#"{"dim": 3, "basis": ["X","Y","Z"], "brackets": [{"i": 1, "j": 3, "coeffs": {"2": "1"}}, {"i": 3, "j": 2, "coeffs": {"1": 1}}]}"#;
        let l = lie_from_json(&parse_text(text).unwrap()).unwrap();
        assert_eq!(l.bracket_basis(1, 2), vec![int(-1), int(0), int(0)]);
        let again = lie_from_json(&lie_to_json(&l)).unwrap();
        assert_eq!(again, l);
    }

    #[test]
    fn conflicts_and_bad_fields_are_rejected() {
        let conflict = r#"{"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": {"1": "1"}}, {"i": 2, "j": 1, "coeffs": {"1": "1"}}]}"#;
        let e = lie_from_json(&parse_text(conflict).unwrap()).unwrap_err();
        assert!(e.to_string().contains("brackets[1].coeffs.1"), "{e}");
        let float = r#"{"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": {"1": 0.5}}]}"#;
        assert!(matches!(lie_from_json(&parse_text(float).unwrap()), Err(Error::Parse(_))));
        let e = parse_text("{\n  \"dim\": 2,\n  oops\n}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn families_parse_polynomial_entries() {
        let v = parse_text(r#"{"J_t": [[["0","1"], 1, 0], [["-1","0","-1"], ["0","-1"], 0], [0, 0, 0]]}"#).unwrap();
        let f = family_from_json(&v).unwrap();
        assert_eq!(f, crate::deformation::torus3_family());
        assert_eq!(f.at(&rat(1, 2))[(1, 0)], rat(-5, 4));
        assert_eq!(family_from_json(&f.to_json()).unwrap(), f);
    }
}
