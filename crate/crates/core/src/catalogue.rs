//! Named examples with the properties they are expected to have.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::ce::betti;
use crate::correspondence::{extend_named, DerivationData, KahlerAlgebra};
use crate::deformation::{torus3_family, JFamily};
use crate::error::{Error, Result};
use crate::lie::{unit, LieAlgebra};
use crate::matrix::QMatrix;
use crate::scalar::{format_scalar, int, parse_scalar, rat, Scalar};
use crate::structures::{curvature, verify_cosymplectic, verify_kahler, StructureData};

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub name: String,
    pub lie: LieAlgebra,
    /// Almost contact metric data (odd-dimensional entries).
    pub structure: Option<StructureData>,
    /// Kähler data (even-dimensional entries).
    pub kahler: Option<KahlerAlgebra>,
    /// Skew-adjoint `J`-commuting derivation paired with `kahler`.
    pub derivation: Option<DerivationData>,
    pub family: Option<JFamily>,
    pub expected: BTreeMap<String, Value>,
}

pub fn list() -> Vec<&'static str> {
    vec![
        "torus(3)",
        "torus(5)",
        "torus(7)",
        "marrero(1,1)",
        "heisenberg3",
        "kahler_aff",
        "hyperbolic_cosymplectic",
        "dorfmeister_base(1)",
        "dorfmeister_cosym(1)",
    ]
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Leaf basis `X1, Y1, ..., Xn, Yn` (or `X, Y` when `n = 1`) followed by `Z`.
fn leaf_names(n: usize) -> Vec<String> {
    let mut names = Vec::new();
    for i in 1..=n {
        if n == 1 {
            names.push("X".to_string());
            names.push("Y".to_string());
        } else {
            names.push(format!("X{i}"));
            names.push(format!("Y{i}"));
        }
    }
    names
}

/// `J X_i = Y_i`, `J Y_i = −X_i` on the first `2n` vectors.
fn standard_j(dim: usize) -> QMatrix {
    let mut j = QMatrix::zeros(dim, dim);
    let mut i = 0;
    while i + 1 < dim {
        j[(i + 1, i)] = int(1);
        j[(i, i + 1)] = int(-1);
        i += 2;
    }
    j
}

fn standard_structure(dim: usize) -> StructureData {
    StructureData { j: standard_j(dim), xi: unit(dim, dim - 1), alpha: unit(dim, dim - 1), g: QMatrix::identity(dim) }
}

fn expect(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

pub fn torus(dim: usize) -> Result<CatalogueEntry> {
    if dim.is_multiple_of(2) || !(3..=7).contains(&dim) {
        return Err(Error::UnknownEntry(format!("torus({dim}): dimension must be 3, 5 or 7")));
    }
    let mut names = leaf_names((dim - 1) / 2);
    names.push("Z".into());
    let b: Vec<usize> = (0..=dim).map(|k| binomial(dim, k)).collect();
    Ok(CatalogueEntry {
        name: format!("torus({dim})"),
        lie: LieAlgebra::abelian_named(names),
        structure: Some(standard_structure(dim)),
        kahler: None,
        derivation: None,
        family: (dim == 3).then(torus3_family),
        expected: expect(&[
            ("cosymplectic", json!("pass")),
            ("unimodular", json!(true)),
            ("solvable", json!(true)),
            ("flat", json!(true)),
            ("betti", json!(b)),
        ]),
    })
}

/// `[X_i, Z] = λ Y_i`, `[Y_i, Z] = −λ X_i`.
pub fn marrero(n: usize, lambda: Scalar) -> Result<CatalogueEntry> {
    if n == 0 || n > 3 {
        return Err(Error::UnknownEntry(format!("marrero({n}, ..): n must be 1, 2 or 3")));
    }
    let dim = 2 * n + 1;
    let mut names = leaf_names(n);
    names.push("Z".into());
    let mut lie = LieAlgebra::abelian_named(names);
    for i in 0..n {
        let (x, y) = (2 * i, 2 * i + 1);
        let mut v = vec![int(0); dim];
        v[y] = lambda.clone();
        lie.set_bracket(x, dim - 1, &v);
        let mut w = vec![int(0); dim];
        w[x] = -lambda.clone();
        lie.set_bracket(y, dim - 1, &w);
    }
    // invariants of the diagonal circle action on Λℝ^{2n} sit in types (p, p)
    let inv = |k: usize| if k.is_multiple_of(2) { binomial(n, k / 2).pow(2) } else { 0 };
    let b: Vec<usize> = if lambda == int(0) {
        (0..=dim).map(|k| binomial(dim, k)).collect()
    } else {
        (0..=dim).map(|k| inv(k) + if k > 0 { inv(k - 1) } else { 0 }).collect()
    };
    Ok(CatalogueEntry {
        name: format!("marrero({n},{})", format_scalar(&lambda)),
        lie,
        structure: Some(standard_structure(dim)),
        kahler: None,
        derivation: None,
        family: Some(JFamily::constant(&standard_j(dim))),
        expected: expect(&[
            ("cosymplectic", json!("pass")),
            ("unimodular", json!(true)),
            ("solvable", json!(true)),
            ("flat", json!(true)),
            ("betti", json!(b)),
        ]),
    })
}

pub fn heisenberg3() -> CatalogueEntry {
    let lie = LieAlgebra::from_brackets(&["X", "Y", "Z"], &[(0, 1, vec![int(0), int(0), int(1)])]);
    CatalogueEntry {
        name: "heisenberg3".into(),
        lie,
        structure: Some(standard_structure(3)),
        kahler: None,
        derivation: None,
        family: None,
        expected: expect(&[
            ("cosymplectic", json!("fail")),
            ("cosymplectic_failure", json!("dα = 0")),
            ("unimodular", json!(true)),
            ("solvable", json!(true)),
            ("nilpotent", json!(true)),
            ("flat", json!(false)),
            ("betti", json!([1, 2, 2, 1])),
        ]),
    }
}

/// `[e2, e1] = e1`, `J e1 = e2`, `g = I`: the hyperbolic plane.
pub fn kahler_aff_pair() -> (KahlerAlgebra, DerivationData) {
    let lie = LieAlgebra::from_brackets(&["e1", "e2"], &[(1, 0, vec![int(1), int(0)])]);
    (KahlerAlgebra { lie, j: standard_j(2), g: QMatrix::identity(2) }, DerivationData { d: QMatrix::zeros(2, 2) })
}

pub fn kahler_aff() -> CatalogueEntry {
    let (h, d) = kahler_aff_pair();
    CatalogueEntry {
        name: "kahler_aff".into(),
        lie: h.lie.clone(),
        structure: None,
        kahler: Some(h),
        derivation: Some(d),
        family: None,
        expected: expect(&[
            ("kahler", json!("pass")),
            ("unimodular", json!(false)),
            ("solvable", json!(true)),
            ("flat", json!(false)),
            ("sectional(1,2)", json!("-1")),
            ("betti", json!([1, 1, 0])),
        ]),
    }
}

pub fn hyperbolic_cosymplectic() -> Result<CatalogueEntry> {
    let (h, d) = kahler_aff_pair();
    let (lie, s) = extend_named(&h, &d, "e3")?;
    Ok(CatalogueEntry {
        name: "hyperbolic_cosymplectic".into(),
        lie,
        structure: Some(s),
        kahler: None,
        derivation: None,
        family: None,
        expected: expect(&[
            ("cosymplectic", json!("pass")),
            ("unimodular", json!(false)),
            ("solvable", json!(true)),
            ("flat", json!(false)),
            ("sectional(1,2)", json!("-1")),
            ("betti", json!([1, 2, 1, 0])),
        ]),
    })
}

/// Basis `(X0, JX0, W, JW)`: `[JX0, X0] = X0`, `[JX0, W] = ½W + βJW`,
/// `[JX0, JW] = −βW + ½JW`, `[W, JW] = −X0`; `g = I`.
/// `D(W) = βJW`, `D(JW) = −βW`, `D(X0) = D(JX0) = 0`.
pub fn dorfmeister_pair(beta: &Scalar) -> (KahlerAlgebra, DerivationData) {
    let half = rat(1, 2);
    let z = int(0);
    let lie = LieAlgebra::from_brackets(
        &["X0", "JX0", "W", "JW"],
        &[
            (1, 0, vec![int(1), z.clone(), z.clone(), z.clone()]),
            (1, 2, vec![z.clone(), z.clone(), half.clone(), beta.clone()]),
            (1, 3, vec![z.clone(), z.clone(), -beta.clone(), half]),
            (2, 3, vec![int(-1), z.clone(), z.clone(), z.clone()]),
        ],
    );
    let mut d = QMatrix::zeros(4, 4);
    d[(3, 2)] = beta.clone();
    d[(2, 3)] = -beta.clone();
    (KahlerAlgebra { lie, j: standard_j(4), g: QMatrix::identity(4) }, DerivationData { d })
}

pub fn dorfmeister_base(beta: Scalar) -> CatalogueEntry {
    let (h, d) = dorfmeister_pair(&beta);
    let complete = if beta == int(0) { "proved" } else { "fail" };
    CatalogueEntry {
        name: format!("dorfmeister_base({})", format_scalar(&beta)),
        lie: h.lie.clone(),
        structure: None,
        kahler: Some(h),
        derivation: Some(d),
        family: None,
        expected: expect(&[
            ("kahler", json!("pass")),
            ("unimodular", json!(false)),
            ("solvable", json!(true)),
            ("completely_solvable", json!(complete)),
        ]),
    }
}

pub fn dorfmeister_cosym(beta: Scalar) -> Result<CatalogueEntry> {
    let (h, d) = dorfmeister_pair(&beta);
    let (lie, s) = extend_named(&h, &d, "xi")?;
    Ok(CatalogueEntry {
        name: format!("dorfmeister_cosym({})", format_scalar(&beta)),
        lie,
        structure: Some(s),
        kahler: None,
        derivation: None,
        family: None,
        expected: expect(&[
            ("cosymplectic", json!("pass")),
            ("unimodular", json!(false)),
            ("solvable", json!(true)),
        ]),
    })
}

fn split_call(name: &str) -> Result<(&str, Vec<&str>)> {
    let name = name.trim();
    match name.find('(') {
        None => Ok((name, Vec::new())),
        Some(p) => {
            let inner = name[p + 1..].strip_suffix(')').ok_or_else(|| Error::UnknownEntry(name.to_string()))?;
            Ok((&name[..p], inner.split(',').map(str::trim).collect()))
        }
    }
}

fn arg_scalar(name: &str, s: &str) -> Result<Scalar> {
    parse_scalar(s).map_err(|_| Error::UnknownEntry(format!("{name}: bad parameter {s:?}")))
}

pub fn get(name: &str) -> Result<CatalogueEntry> {
    let (head, args) = split_call(name)?;
    let count = |s: &str| s.parse::<usize>().map_err(|_| Error::UnknownEntry(format!("{name}: bad parameter {s:?}")));
    match (head, args.as_slice()) {
        ("torus", [n]) => torus(count(n)?),
        ("torus", []) => torus(3),
        ("marrero", []) => marrero(1, int(1)),
        ("marrero", [n]) => marrero(count(n)?, int(1)),
        ("marrero", [n, l]) => marrero(count(n)?, arg_scalar(name, l)?),
        ("heisenberg3", []) => Ok(heisenberg3()),
        ("kahler_aff", []) => Ok(kahler_aff()),
        ("hyperbolic_cosymplectic", []) => hyperbolic_cosymplectic(),
        ("dorfmeister_base", []) => Ok(dorfmeister_base(int(1))),
        ("dorfmeister_base", [b]) => Ok(dorfmeister_base(arg_scalar(name, b)?)),
        ("dorfmeister_cosym", []) => dorfmeister_cosym(int(1)),
        ("dorfmeister_cosym", [b]) => dorfmeister_cosym(arg_scalar(name, b)?),
        _ => Err(Error::UnknownEntry(name.to_string())),
    }
}

/// Recomputes every property named in `expected` from the verifiers.
pub fn regenerate(entry: &CatalogueEntry) -> Result<BTreeMap<String, Value>> {
    let mut out = BTreeMap::new();
    let flags = entry.lie.classify();
    let metric = match (&entry.structure, &entry.kahler) {
        (Some(s), _) => Some(s.g.clone()),
        (None, Some(h)) => Some(h.g.clone()),
        _ => None,
    };
    for key in entry.expected.keys() {
        let value = match key.as_str() {
            "cosymplectic" | "cosymplectic_failure" => {
                let s = entry.structure.as_ref().ok_or_else(|| Error::Precondition("entry has no structure".into()))?;
                let r = verify_cosymplectic(&entry.lie, s);
                if key == "cosymplectic" {
                    json!(r.verdict)
                } else {
                    json!(r.first_failure().map(|st| st.name.clone()))
                }
            }
            "kahler" => {
                let h = entry.kahler.as_ref().ok_or_else(|| Error::Precondition("entry has no Kähler data".into()))?;
                json!(verify_kahler(&h.lie, &h.j, &h.g)?.verdict)
            }
            "unimodular" => json!(flags.unimodular),
            "solvable" => json!(flags.solvable),
            "nilpotent" => json!(flags.nilpotent),
            "completely_solvable" => json!(flags.completely_solvable),
            "betti" => json!(betti(&entry.lie)),
            "flat" | "sectional(1,2)" => {
                let g = metric.clone().ok_or_else(|| Error::Precondition("entry has no metric".into()))?;
                let (_, curv) = curvature(&entry.lie, &g)?;
                if key == "flat" {
                    json!(curv.is_flat())
                } else {
                    json!(curv.sectional(0, 1).map(format_scalar))
                }
            }
            other => return Err(Error::Precondition(format!("unknown expected property {other}"))),
        };
        out.insert(key.clone(), value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_entry_reproduces_its_expectations() {
        for name in list() {
            let e = get(name).unwrap();
            assert_eq!(regenerate(&e).unwrap(), e.expected, "{name}");
        }
    }

    #[test]
    fn parameters_and_unknown_names() {
        assert_eq!(get("marrero").unwrap().name, "marrero(1,1)");
        assert_eq!(get("marrero(2, 1/2)").unwrap().lie.dim(), 5);
        assert!(matches!(get("torus(4)"), Err(Error::UnknownEntry(_))));
        assert!(matches!(get("nonsense"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn larger_marrero_betti_follow_the_invariant_count() {
        for n in 2..=3 {
            let e = marrero(n, rat(3, 2)).unwrap();
            assert_eq!(regenerate(&e).unwrap(), e.expected);
        }
    }
}
