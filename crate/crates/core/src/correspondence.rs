//! Kähler Lie algebras with a skew-adjoint `J`-commuting derivation versus
//! cosymplectic Lie algebras, modifications, and normal J-algebras.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lie::{unit, LieAlgebra};
use crate::matrix::{hermitian, Matrix, QMatrix};
use crate::report::{Report, Witness};
use crate::scalar::{format_scalar, int, Scalar};
use crate::structures::{nijenhuis_complex, verify_cosymplectic, verify_kahler, StructureData};

/// An even-dimensional algebra with `J` and `g` meant to pass `verify_kahler`.
#[derive(Clone, Debug, PartialEq)]
pub struct KahlerAlgebra {
    pub lie: LieAlgebra,
    pub j: QMatrix,
    pub g: QMatrix,
}

impl KahlerAlgebra {
    pub fn verify(&self) -> Result<Report> {
        verify_kahler(&self.lie, &self.j, &self.g)
    }

    pub fn to_json(&self) -> Value {
        json!({ "J": self.j.to_json(), "g": self.g.to_json() })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationData {
    pub d: QMatrix,
}

fn mat_json(m: &QMatrix) -> Value {
    m.to_json()
}

fn entry_witness(label: &str, m: &QMatrix, other: &QMatrix) -> Option<Witness> {
    m.first_difference(other).map(|(i, j)| {
        Witness::new(
            format!("{label}: entry ({}, {}) is {} instead of {}", i + 1, j + 1, m[(i, j)], other[(i, j)]),
            json!({ "entry": [i + 1, j + 1], "value": format_scalar(&m[(i, j)]), "expected": format_scalar(&other[(i, j)]) }),
        )
    })
}

fn skew_witness(g: &QMatrix, d: &QMatrix) -> Option<Witness> {
    let n = g.rows();
    for i in 0..n {
        for j in i..n {
            let v = hermitian(g, &d.column(i), &unit(n, j)) + hermitian(g, &unit(n, i), &d.column(j));
            if !v.is_zero() {
                return Some(Witness::new(
                    format!("g(D e{a}, e{b}) + g(e{a}, D e{b}) = {v}", a = i + 1, b = j + 1),
                    json!({ "pair": [i + 1, j + 1], "value": format_scalar(&v) }),
                ));
            }
        }
    }
    None
}

/// Derivation, skew-adjointness and `[D, J] = 0`, each reported separately.
pub fn check_derivation_data(h: &KahlerAlgebra, d: &DerivationData) -> Report {
    let mut r = Report::new("derivation data");
    let n = h.lie.dim();
    if d.d.rows() != n || d.d.cols() != n {
        return Report::rejected("derivation data", Witness::new(format!("D must be {n}x{n}"), Value::Null));
    }
    let der = h.lie.is_derivation(&d.d);
    r.stage("derivation", der.first_failure().and_then(|s| s.witness.clone()));
    r.stage("skew-adjoint", skew_witness(&h.g, &d.d));
    r.stage("commutes with J", entry_witness("DJ − JD", &d.d.mul(&h.j), &h.j.mul(&d.d)));
    r
}

fn precondition_from(report: &Report) -> Error {
    match report.first_failure() {
        Some(st) => {
            let w = st.witness.as_ref().map(|w| format!(": {} {}", w.message, w.detail)).unwrap_or_default();
            Error::Precondition(format!("{} fails at \"{}\"{}", report.title, st.name, w))
        }
        None => Error::Precondition(format!("{} did not pass", report.title)),
    }
}

/// `ℝξ ⋉_D 𝔥` with `Jξ = 0`, `ξ` unit length and orthogonal to `𝔥`,
/// `α` dual to `ξ`. The new basis vector is appended last under `xi_name`.
pub fn extend_named(h: &KahlerAlgebra, d: &DerivationData, xi_name: &str) -> Result<(LieAlgebra, StructureData)> {
    let kahler = h.verify()?;
    if !kahler.passed() {
        return Err(precondition_from(&kahler));
    }
    let data = check_derivation_data(h, d);
    if !data.passed() {
        return Err(precondition_from(&data));
    }
    let n = h.lie.dim();
    let lie = h.lie.semidirect_extend(&d.d, xi_name)?;
    let pad = |m: &QMatrix, corner: Scalar| {
        QMatrix::from_fn(n + 1, n + 1, |i, j| {
            if i < n && j < n {
                m[(i, j)].clone()
            } else if i == n && j == n {
                corner.clone()
            } else {
                Scalar::zero()
            }
        })
    };
    let s = StructureData { j: pad(&h.j, int(0)), xi: unit(n + 1, n), alpha: unit(n + 1, n), g: pad(&h.g, int(1)) };
    let check = verify_cosymplectic(&lie, &s);
    if !check.passed() {
        return Err(Error::Invariant(format!("extension is not cosymplectic: {}", precondition_from(&check))));
    }
    Ok((lie, s))
}

pub fn extend(h: &KahlerAlgebra, d: &DerivationData) -> Result<(LieAlgebra, StructureData)> {
    extend_named(h, d, "xi")
}

/// Restricts to `𝔥 = ker α` and `D = ad_ξ|𝔥`. When `α` and `ξ` are the last
/// dual pair of the basis, `𝔥` keeps the first basis vectors in order.
pub fn reduce(l: &LieAlgebra, s: &StructureData) -> Result<(KahlerAlgebra, DerivationData)> {
    let cos = verify_cosymplectic(l, s);
    if !cos.passed() {
        return Err(precondition_from(&cos));
    }
    let n = l.dim();
    let commutator = l.commutator_ideal();
    let mut with_xi = commutator.clone();
    with_xi.push(s.xi.clone());
    if crate::matrix::span_rank(n, &with_xi) == crate::matrix::span_rank(n, &commutator) {
        return Err(Error::Invariant("ξ lies in the commutator [𝔤, 𝔤]".into()));
    }
    let basis = s.horizontal_basis();
    let names: Vec<String> = basis
        .iter()
        .enumerate()
        .map(|(a, v)| match (0..n).find(|&i| *v == unit(n, i)) {
            Some(i) => l.name(i).to_string(),
            None => format!("h{}", a + 1),
        })
        .collect();
    let lie = l.subalgebra(&basis, names)?;
    let b = Matrix::from_columns(n, &basis);
    let m = basis.len();
    let coords = |v: &[Scalar]| -> Result<Vec<Scalar>> {
        b.solve(v)?.ok_or_else(|| Error::Invariant("vector left ker α".into()))
    };
    let mut j_cols = Vec::with_capacity(m);
    let mut d_cols = Vec::with_capacity(m);
    let ad_xi = l.ad(&s.xi)?;
    for v in &basis {
        j_cols.push(coords(&s.j.mul_vec(v))?);
        d_cols.push(coords(&ad_xi.mul_vec(v))?);
    }
    let j = Matrix::from_columns(m, &j_cols);
    let g = QMatrix::from_fn(m, m, |a, c| hermitian(&s.g, &basis[a], &basis[c]));
    let h = KahlerAlgebra { lie, j, g };
    let d = DerivationData { d: Matrix::from_columns(m, &d_cols) };
    let kahler = h.verify()?;
    if !kahler.passed() {
        return Err(Error::Invariant(format!("leaf algebra is not Kähler: {}", precondition_from(&kahler))));
    }
    let data = check_derivation_data(&h, &d);
    if !data.passed() {
        return Err(Error::Invariant(format!("ad_ξ on the leaf: {}", precondition_from(&data))));
    }
    Ok((h, d))
}

fn apply_map(maps: &[QMatrix], x: &[Scalar]) -> QMatrix {
    let n = maps.len();
    let mut acc = QMatrix::zeros(n, n);
    for (i, c) in x.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&maps[i].scale(c));
        }
    }
    acc
}

/// Conditions (1)–(4) of a weak modification map, preceded by the check
/// that every value is a derivation. `maps[i] = 𝒟(e_i)`.
pub fn check_modification_map(h: &KahlerAlgebra, maps: &[QMatrix]) -> Report {
    let title = "modification map";
    let n = h.lie.dim();
    if maps.len() != n || maps.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Report::rejected(title, Witness::new(format!("expected {n} matrices of size {n}x{n}"), Value::Null));
    }
    let mut r = Report::new(title);
    let mut der = None;
    for (i, m) in maps.iter().enumerate() {
        let rep = h.lie.is_derivation(m);
        if let Some(w) = rep.first_failure().and_then(|s| s.witness.clone()) {
            der = Some(Witness::new(format!("𝒟({}) is not a derivation: {}", h.lie.name(i), w.message), json!({ "index": i + 1, "detail": w.detail })));
            break;
        }
    }
    r.stage("values are derivations", der);
    let indexed = |f: &dyn Fn(usize) -> Option<Witness>| (0..n).find_map(f);
    r.stage(
        "(1) skew-adjoint",
        indexed(&|i| skew_witness(&h.g, &maps[i]).map(|w| Witness::new(format!("𝒟({}): {}", h.lie.name(i), w.message), json!({ "index": i + 1, "detail": w.detail })))),
    );
    r.stage(
        "(2) [𝒟(X), J] = 0",
        indexed(&|i| {
            entry_witness(&format!("[𝒟({}), J]", h.lie.name(i)), &maps[i].mul(&h.j), &h.j.mul(&maps[i]))
                .map(|w| Witness::new(w.message, json!({ "index": i + 1, "detail": w.detail })))
        }),
    );
    let zero = QMatrix::zeros(n, n);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let mut third = None;
    for &(i, j) in &pairs {
        if i >= j {
            continue;
        }
        let comm = maps[i].commutator(&maps[j]);
        let of_bracket = apply_map(maps, &h.lie.bracket_basis(i, j));
        let bad = if !comm.is_zero() {
            Some(("[𝒟(X), 𝒟(Y)]", comm))
        } else if !of_bracket.is_zero() {
            Some(("𝒟([X, Y])", of_bracket))
        } else {
            None
        };
        if let Some((label, m)) = bad {
            third = Some(Witness::new(
                format!("{label} ≠ 0 for (X, Y) = ({}, {})", h.lie.name(i), h.lie.name(j)),
                json!({ "pair": [i + 1, j + 1], "value": mat_json(&m) }),
            ));
            break;
        }
    }
    r.stage("(3) [𝒟(X), 𝒟(Y)] = 𝒟([X, Y]) = 0", third);
    let mut fourth = None;
    for &(i, j) in &pairs {
        if i >= j {
            continue;
        }
        let v: Vec<Scalar> = maps[i].column(j).iter().zip(maps[j].column(i)).map(|(a, b)| a - b).collect();
        let m = apply_map(maps, &v);
        if m != zero {
            fourth = Some(Witness::new(
                format!("𝒟(𝒟(X)Y − 𝒟(Y)X) ≠ 0 for (X, Y) = ({}, {})", h.lie.name(i), h.lie.name(j)),
                json!({ "pair": [i + 1, j + 1], "value": mat_json(&m) }),
            ));
            break;
        }
    }
    r.stage("(4) 𝒟(𝒟(X)Y − 𝒟(Y)X) = 0", fourth);
    r
}

/// `(X, Y) = [X, Y] + 𝒟(X)Y − 𝒟(Y)X`; `J` and `g` are carried over.
pub fn modify(h: &KahlerAlgebra, maps: &[QMatrix]) -> Result<KahlerAlgebra> {
    let check = check_modification_map(h, maps);
    if !check.passed() {
        return Err(precondition_from(&check));
    }
    let n = h.lie.dim();
    let mut lie = LieAlgebra::abelian_named(h.lie.basis_names().to_vec());
    for i in 0..n {
        for j in i + 1..n {
            let v: Vec<Scalar> = h
                .lie
                .bracket_basis(i, j)
                .iter()
                .zip(maps[i].column(j))
                .zip(maps[j].column(i))
                .map(|((b, x), y)| b + x - y)
                .collect();
            lie.set_bracket(i, j, &v);
        }
    }
    let valid = lie.validate();
    if !valid.passed() {
        return Err(Error::Invariant(format!("modified bracket: {}", precondition_from(&valid))));
    }
    Ok(KahlerAlgebra { lie, j: h.j.clone(), g: h.g.clone() })
}

/// Admissibility of `μ`: `μ([JX,JY]) = μ([X,Y])` on basis pairs and
/// `⟨X,Y⟩ = μ([JX,Y])` symmetric positive definite. On success the induced
/// metric is returned and stored in the report data under `metric`.
pub fn check_normal_j_algebra(a: &LieAlgebra, j: &QMatrix, mu: &[Scalar]) -> Result<(Report, Option<QMatrix>)> {
    let n = a.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("normal J-algebras are even-dimensional, got {n}")));
    }
    if j.rows() != n || j.cols() != n || mu.len() != n {
        return Err(Error::Dimension(format!("J must be {n}x{n} and μ of length {n}")));
    }
    if j.mul(j) != QMatrix::identity(n).scale(&int(-1)) {
        return Err(Error::Precondition("J² ≠ −Id".into()));
    }
    for x in 0..n {
        for y in x + 1..n {
            if nijenhuis_complex(a, j, &unit(n, x), &unit(n, y)).iter().any(|c| !c.is_zero()) {
                return Err(Error::Precondition(format!("N_J({}, {}) ≠ 0", a.name(x), a.name(y))));
            }
        }
    }
    let mu_of = |v: &[Scalar]| v.iter().zip(mu).fold(Scalar::zero(), |acc, (p, q)| acc + p * q);
    let bracket = |x: &[Scalar], y: &[Scalar]| a.bracket(x, y).expect("dimensions checked");
    let mut r = Report::new("normal J-algebra");
    let mut inv = None;
    'p: for x in 0..n {
        for y in x + 1..n {
            let (ex, ey) = (unit(n, x), unit(n, y));
            let left = mu_of(&bracket(&j.mul_vec(&ex), &j.mul_vec(&ey)));
            let right = mu_of(&a.bracket_basis(x, y));
            if left != right {
                inv = Some(Witness::new(
                    format!("μ([J{p},J{q}]) = {left} but μ([{p},{q}]) = {right}", p = a.name(x), q = a.name(y)),
                    json!({ "pair": [x + 1, y + 1] }),
                ));
                break 'p;
            }
        }
    }
    r.stage("μ([JX,JY]) = μ([X,Y])", inv);
    let metric = QMatrix::from_fn(n, n, |x, y| mu_of(&bracket(&j.column(x), &unit(n, y))));
    r.stage("⟨X,Y⟩ symmetric", entry_witness("⟨·,·⟩ − ⟨·,·⟩ᵀ", &metric, &metric.transpose()));
    r.stage(
        "⟨X,Y⟩ positive definite",
        (!metric.is_positive_definite()).then(|| Witness::new("induced form fails Sylvester's criterion", json!({ "minor_signs": metric.leading_minor_signs() }))),
    );
    r.set_data("metric", metric.to_json());
    let out = r.passed().then_some(metric);
    Ok((r, out))
}
