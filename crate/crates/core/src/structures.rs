//! Almost contact metric, normal, cosymplectic and Kähler structures on a Lie
//! algebra, and the Levi-Civita connection of a left-invariant metric.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::ce::CeComplex;
use crate::error::{Error, Result};
use crate::exterior::{Exterior, KForm};
use crate::lie::{unit, LieAlgebra};
use crate::matrix::{hermitian, QMatrix};
use crate::report::{Report, Witness};
use crate::scalar::{format_scalar, int, Scalar};

/// `(J, ξ, α, g)`. `J` acts on column vectors; `α` is a row covector.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureData {
    pub j: QMatrix,
    pub xi: Vec<Scalar>,
    pub alpha: Vec<Scalar>,
    pub g: QMatrix,
}

fn vec_json(v: &[Scalar]) -> Value {
    json!(v.iter().map(format_scalar).collect::<Vec<_>>())
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn pair_json(l: &LieAlgebra, i: usize, j: usize) -> Value {
    json!({ "pair": [i + 1, j + 1], "names": [l.name(i), l.name(j)] })
}

impl StructureData {
    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn check_shapes(&self, n: usize) -> Result<()> {
        let ok = self.j.rows() == n
            && self.j.cols() == n
            && self.xi.len() == n
            && self.alpha.len() == n
            && self.g.rows() == n
            && self.g.cols() == n;
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension(format!("structure data does not match a {n}-dimensional algebra")))
        }
    }

    /// `α ⊗ ξ` as the matrix `X ↦ α(X) ξ`.
    pub fn alpha_xi(&self) -> QMatrix {
        let n = self.dim();
        QMatrix::from_fn(n, n, |i, j| &self.xi[i] * &self.alpha[j])
    }

    /// Basis of `𝔥 = ker α`, as produced by the deterministic kernel.
    pub fn horizontal_basis(&self) -> Vec<Vec<Scalar>> {
        QMatrix::from_rows(vec![self.alpha.clone()]).expect("one row").kernel()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "J": self.j.to_json(),
            "xi": vec_json(&self.xi),
            "alpha": vec_json(&self.alpha),
            "g": self.g.to_json(),
        })
    }
}

fn dim_reject(title: &str, l: &LieAlgebra, s: &StructureData) -> Option<Report> {
    s.check_shapes(l.dim())
        .err()
        .map(|e| Report::rejected(title, Witness::new(e.to_string(), Value::Null)))
}

/// `J² = −Id + α⊗ξ`, `α(ξ) = 1`, `g(JX,JY) = g(X,Y) − α(X)α(Y)`.
pub fn verify_almost_contact(l: &LieAlgebra, s: &StructureData) -> Report {
    let title = "almost contact metric";
    if let Some(r) = dim_reject(title, l, s) {
        return r;
    }
    let n = l.dim();
    let mut r = Report::new(title);
    r.stage(
        "g symmetric positive definite",
        (!s.g.is_positive_definite()).then(|| Witness::new("metric fails Sylvester's criterion", json!({ "minor_signs": s.g.leading_minor_signs() }))),
    );
    let a = dot(&s.alpha, &s.xi);
    r.stage(
        "α(ξ) = 1",
        (!a.is_one()).then(|| Witness::new(format!("α(ξ) = {a}"), json!({ "value": format_scalar(&a) }))),
    );
    let lhs = s.j.mul(&s.j);
    let rhs = s.alpha_xi().sub(&QMatrix::identity(n));
    r.stage(
        "J² = −Id + α⊗ξ",
        lhs.first_difference(&rhs).map(|(i, j)| {
            Witness::new(
                format!("entry ({}, {}) is {} instead of {}", i + 1, j + 1, lhs[(i, j)], rhs[(i, j)]),
                json!({ "entry": [i + 1, j + 1] }),
            )
        }),
    );
    let mut metric = None;
    'pairs: for i in 0..n {
        for j in i..n {
            let (ji, jj) = (s.j.column(i), s.j.column(j));
            let left = hermitian(&s.g, &ji, &jj);
            let right = &s.g[(i, j)] - &s.alpha[i] * &s.alpha[j];
            if left != right {
                metric = Some(Witness::new(
                    format!(
                        "g(J{a},J{b}) = {left} but g({a},{b}) − α({a})α({b}) = {right}",
                        a = l.name(i),
                        b = l.name(j)
                    ),
                    pair_json(l, i, j),
                ));
                break 'pairs;
            }
        }
    }
    r.stage("g(JX,JY) = g(X,Y) − α(X)α(Y)", metric);
    r
}

/// `[JX,JY] − J[JX,Y] − J[X,JY] + J²[X,Y]`.
pub fn nijenhuis(l: &LieAlgebra, j: &QMatrix, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let (jx, jy) = (j.mul_vec(x), j.mul_vec(y));
    let a = l.bracket_unchecked(&jx, &jy);
    let b = j.mul_vec(&l.bracket_unchecked(&jx, y));
    let c = j.mul_vec(&l.bracket_unchecked(x, &jy));
    let d = j.mul_vec(&j.mul_vec(&l.bracket_unchecked(x, y)));
    add(&sub(&sub(&a, &b), &c), &d)
}

/// `[JX,JY] − J[JX,Y] − J[X,JY] − [X,Y]`, the complex-manifold version.
pub fn nijenhuis_complex(l: &LieAlgebra, j: &QMatrix, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let (jx, jy) = (j.mul_vec(x), j.mul_vec(y));
    let a = l.bracket_unchecked(&jx, &jy);
    let b = j.mul_vec(&l.bracket_unchecked(&jx, y));
    let c = j.mul_vec(&l.bracket_unchecked(x, &jy));
    let d = l.bracket_unchecked(x, y);
    sub(&sub(&sub(&a, &b), &c), &d)
}

/// `dα(X, Y) = −α([X, Y])`.
fn d_alpha(l: &LieAlgebra, alpha: &[Scalar], i: usize, j: usize) -> Scalar {
    -dot(alpha, &l.bracket_basis(i, j))
}

/// `N_J(X,Y) = 2dα(X,Y)ξ` on all basis pairs.
pub fn verify_normal(l: &LieAlgebra, s: &StructureData) -> Report {
    let title = "normality";
    if let Some(r) = dim_reject(title, l, s) {
        return r;
    }
    let n = l.dim();
    let mut r = Report::new(title);
    let mut failure = None;
    'pairs: for i in 0..n {
        for j in i + 1..n {
            let nij = nijenhuis(l, &s.j, &unit(n, i), &unit(n, j));
            let two_da = d_alpha(l, &s.alpha, i, j) * int(2);
            let rhs: Vec<Scalar> = s.xi.iter().map(|x| x * &two_da).collect();
            if nij != rhs {
                let mut detail = pair_json(l, i, j);
                detail["nijenhuis"] = vec_json(&nij);
                detail["expected"] = vec_json(&rhs);
                failure = Some(Witness::new(format!("N_J({}, {}) ≠ 2dα({0}, {1})ξ", l.name(i), l.name(j)), detail));
                break 'pairs;
            }
        }
    }
    r.stage("N_J = 2dα⊗ξ", failure);
    r
}

/// `ω(X, Y) = g(JX, Y)` together with the top coefficient of `α∧ωⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalForm {
    pub omega: KForm<Scalar>,
    /// Coefficient of `e^1∧…∧e^{2n+1}` in `α∧ωⁿ`.
    pub volume_coefficient: Scalar,
}

pub fn fundamental_form(l: &LieAlgebra, s: &StructureData) -> FundamentalForm {
    let n = l.dim();
    let ext = Exterior::new(n);
    let omega = omega_of(&ext, &s.j, &s.g);
    let alpha = KForm { n, degree: 1, coeffs: s.alpha.clone() };
    let mut top = alpha;
    for _ in 0..(n - 1) / 2 {
        top = ext.wedge(&top, &omega);
    }
    let volume_coefficient = if top.degree == n { top.coeffs[0].clone() } else { Scalar::zero() };
    FundamentalForm { omega, volume_coefficient }
}

/// The 2-form `(X, Y) ↦ g(JX, Y)`.
pub fn omega_of(ext: &Exterior, j: &QMatrix, g: &QMatrix) -> KForm<Scalar> {
    let n = ext.n();
    let gj = g.mul(j);
    let coeffs = ext
        .basis(2)
        .iter()
        .map(|&m| {
            let ij = crate::exterior::indices_of(m);
            // g(Je_a, e_b) = (gJ)[b][a]
            gj[(ij[1], ij[0])].clone()
        })
        .collect();
    KForm { n, degree: 2, coeffs }
}

fn closedness_witness(ce: &CeComplex, phi: &KForm<Scalar>, label: &str) -> Option<Witness> {
    let d = ce.differential(phi);
    (!d.is_zero()).then(|| {
        Witness::new(
            format!("{label} = {}", d.pretty(ce.ext(), ce.lie().basis_names())),
            json!({ "form": d.to_json(ce.ext()) }),
        )
    })
}

/// First basis pair on which `dα` is nonzero.
fn d_alpha_witness(l: &LieAlgebra, alpha: &[Scalar]) -> Option<Witness> {
    let n = l.dim();
    for i in 0..n {
        for j in i + 1..n {
            let v = d_alpha(l, alpha, i, j);
            if !v.is_zero() {
                let mut detail = pair_json(l, i, j);
                detail["value"] = json!(format_scalar(&v));
                return Some(Witness::new(format!("dα({}, {}) = {v}", l.name(i), l.name(j)), detail));
            }
        }
    }
    None
}

/// Almost contact, `dα = 0`, normal, `dω = 0`, `α∧ωⁿ ≠ 0`, in that order.
pub fn verify_cosymplectic(l: &LieAlgebra, s: &StructureData) -> Report {
    let title = "cosymplectic";
    if let Some(r) = dim_reject(title, l, s) {
        return r;
    }
    let n = l.dim();
    let mut r = Report::new(title);
    if n.is_multiple_of(2) {
        return Report::rejected(title, Witness::new(format!("dimension {n} is even"), Value::Null));
    }
    let ac = verify_almost_contact(l, s);
    r.stage("almost contact", ac.first_failure().and_then(|st| st.witness.clone()));
    r.stage("dα = 0", d_alpha_witness(l, &s.alpha));
    let normal = verify_normal(l, s);
    r.stage("normal", normal.first_failure().and_then(|st| st.witness.clone()));
    let ce = CeComplex::new(l);
    let ff = fundamental_form(l, s);
    r.stage("dω = 0", closedness_witness(&ce, &ff.omega, "dω"));
    r.stage(
        "α∧ωⁿ ≠ 0",
        ff.volume_coefficient.is_zero().then(|| Witness::new("α∧ωⁿ vanishes", Value::Null)),
    );
    r.set_data("omega", ff.omega.to_json(ce.ext()));
    r.set_data("volume_coefficient", json!(format_scalar(&ff.volume_coefficient)));
    r
}

/// `J² = −Id`, `N_J = 0` (complex convention), `g(JX,JY) = g(X,Y)`, `dω = 0`.
pub fn verify_kahler(l: &LieAlgebra, j: &QMatrix, g: &QMatrix) -> Result<Report> {
    let n = l.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("Kähler structures need even dimension, got {n}")));
    }
    if j.rows() != n || j.cols() != n || g.rows() != n || g.cols() != n {
        return Err(Error::Dimension(format!("J and g must be {n}x{n}")));
    }
    let mut r = Report::new("Kähler");
    r.stage(
        "g symmetric positive definite",
        (!g.is_positive_definite()).then(|| Witness::new("metric fails Sylvester's criterion", json!({ "minor_signs": g.leading_minor_signs() }))),
    );
    let jj = j.mul(j);
    let minus = QMatrix::identity(n).scale(&int(-1));
    r.stage(
        "J² = −Id",
        jj.first_difference(&minus).map(|(a, b)| Witness::new(format!("entry ({}, {}) of J² is {}", a + 1, b + 1, jj[(a, b)]), json!({ "entry": [a + 1, b + 1] }))),
    );
    let mut nij = None;
    'n: for a in 0..n {
        for b in a + 1..n {
            let v = nijenhuis_complex(l, j, &unit(n, a), &unit(n, b));
            if v.iter().any(|x| !x.is_zero()) {
                let mut detail = pair_json(l, a, b);
                detail["value"] = vec_json(&v);
                nij = Some(Witness::new(format!("N_J({}, {}) ≠ 0", l.name(a), l.name(b)), detail));
                break 'n;
            }
        }
    }
    r.stage("N_J = 0", nij);
    let mut compat = None;
    'c: for a in 0..n {
        for b in a..n {
            let left = hermitian(g, &j.column(a), &j.column(b));
            if left != g[(a, b)] {
                compat = Some(Witness::new(
                    format!("g(J{x},J{y}) = {left} but g({x},{y}) = {}", g[(a, b)], x = l.name(a), y = l.name(b)),
                    pair_json(l, a, b),
                ));
                break 'c;
            }
        }
    }
    r.stage("compatibility", compat);
    let ce = CeComplex::new(l);
    let omega = omega_of(ce.ext(), j, g);
    r.stage("dω = 0", closedness_witness(&ce, &omega, "dω"));
    Ok(r)
}

/// Left-invariant Levi-Civita connection: `nabla[i]` is the matrix of
/// `∇_{e_i}`, with columns `∇_{e_i} e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    nabla: Vec<QMatrix>,
}

impl Connection {
    pub fn nabla(&self, i: usize) -> &QMatrix {
        &self.nabla[i]
    }

    /// `∇_X` for an arbitrary vector.
    pub fn along(&self, x: &[Scalar]) -> QMatrix {
        let n = x.len();
        let mut m = QMatrix::zeros(n, n);
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.nabla[i].scale(c));
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.nabla.iter().all(QMatrix::is_zero)
    }

    /// `[[∇_{e_i} e_j]]` with 1-based labels, nonzero entries only.
    pub fn to_json(&self) -> Value {
        let n = self.nabla.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = self.nabla[i].column(j);
                if v.iter().any(|x| !x.is_zero()) {
                    out.push(json!({ "i": i + 1, "j": j + 1, "value": vec_json(&v) }));
                }
            }
        }
        Value::Array(out)
    }
}

/// Koszul formula `2g(∇_X Y, Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y)`,
/// followed by exact checks of torsion-freeness and metric compatibility.
pub fn levi_civita(l: &LieAlgebra, g: &QMatrix) -> Result<Connection> {
    let n = l.dim();
    if g.rows() != n || g.cols() != n {
        return Err(Error::Dimension(format!("metric must be {n}x{n}")));
    }
    if !g.is_positive_definite() {
        return Err(Error::Precondition("metric is not symmetric positive definite".into()));
    }
    let ginv = g.inverse().expect("positive definite is invertible");
    let half = Scalar::new(1.into(), 2.into());
    let gb = |a: usize, b: usize, c: usize| -> Scalar {
        // g([e_a, e_b], e_c)
        dot(&l.bracket_basis(a, b), &g.column(c))
    };
    let mut nabla = Vec::with_capacity(n);
    for i in 0..n {
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| {
                let w: Vec<Scalar> = (0..n).map(|k| (gb(i, j, k) - gb(j, k, i) + gb(k, i, j)) * &half).collect();
                ginv.mul_vec(&w)
            })
            .collect();
        nabla.push(QMatrix::from_columns(n, &cols));
    }
    let conn = Connection { nabla };
    for i in 0..n {
        for j in 0..n {
            let t = sub(&sub(&conn.nabla[i].column(j), &conn.nabla[j].column(i)), &l.bracket_basis(i, j));
            if t.iter().any(|x| !x.is_zero()) {
                return Err(Error::Invariant(format!("torsion at ({}, {})", i + 1, j + 1)));
            }
        }
        // g(∇_X Y, Z) + g(Y, ∇_X Z) = 0, i.e. gN + Nᵀg = 0
        let m = &conn.nabla[i];
        if !g.mul(m).add(&m.transpose().mul(g)).is_zero() {
            return Err(Error::Invariant(format!("∇_{} is not metric", i + 1)));
        }
    }
    Ok(conn)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curvature {
    /// `r[i][j]` is the matrix of `R(e_i, e_j)`.
    r: Vec<Vec<QMatrix>>,
    /// `K(e_i, e_j)` for `i < j`.
    pub sectional: Vec<((usize, usize), Scalar)>,
}

impl Curvature {
    pub fn operator(&self, i: usize, j: usize) -> &QMatrix {
        &self.r[i][j]
    }

    pub fn is_flat(&self) -> bool {
        self.r.iter().flatten().all(QMatrix::is_zero)
    }

    pub fn sectional(&self, i: usize, j: usize) -> Option<&Scalar> {
        let key = (i.min(j), i.max(j));
        self.sectional.iter().find(|(p, _)| *p == key).map(|(_, k)| k)
    }

    pub fn to_json(&self) -> Value {
        let n = self.r.len();
        let mut comps = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    let v = self.r[i][j].column(k);
                    if v.iter().any(|x| !x.is_zero()) {
                        comps.push(json!({ "i": i + 1, "j": j + 1, "k": k + 1, "value": vec_json(&v) }));
                    }
                }
            }
        }
        let sect: Vec<Value> = self
            .sectional
            .iter()
            .map(|((i, j), k)| json!({ "plane": [i + 1, j + 1], "K": format_scalar(k) }))
            .collect();
        json!({ "flat": self.is_flat(), "components": comps, "sectional": sect })
    }
}

/// `R(X,Y) = [∇_X, ∇_Y] − ∇_{[X,Y]}` on basis pairs, with sectional
/// curvatures of the coordinate planes.
pub fn curvature(l: &LieAlgebra, g: &QMatrix) -> Result<(Connection, Curvature)> {
    let conn = levi_civita(l, g)?;
    let n = l.dim();
    let mut r = vec![vec![QMatrix::zeros(n, n); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            r[i][j] = conn.nabla[i].commutator(&conn.nabla[j]).sub(&conn.along(&l.bracket_basis(i, j)));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if r[i][j] != r[j][i].scale(&int(-1)) {
                return Err(Error::Invariant(format!("R is not antisymmetric at ({}, {})", i + 1, j + 1)));
            }
            for k in 0..n {
                let s = add(&add(&r[i][j].column(k), &r[j][k].column(i)), &r[k][i].column(j));
                if s.iter().any(|x| !x.is_zero()) {
                    return Err(Error::Invariant(format!("Bianchi identity fails at ({}, {}, {})", i + 1, j + 1, k + 1)));
                }
            }
        }
    }
    let mut sectional = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let num = dot(&r[i][j].mul_vec(&unit(n, j)), &g.column(i));
            let den = &g[(i, i)] * &g[(j, j)] - &g[(i, j)] * &g[(i, j)];
            sectional.push(((i, j), num / den));
        }
    }
    Ok((conn, Curvature { r, sectional }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn standard3() -> StructureData {
        StructureData { j: q(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]), xi: v(&[0, 0, 1]), alpha: v(&[0, 0, 1]), g: QMatrix::identity(3) }
    }

    fn aff() -> LieAlgebra {
        LieAlgebra::from_brackets(&["e1", "e2"], &[(1, 0, v(&[1, 0]))])
    }

    #[test]
    fn torus_is_cosymplectic() {
        let l = LieAlgebra::abelian(3);
        let r = verify_cosymplectic(&l, &standard3());
        assert!(r.passed(), "{}", r.to_markdown());
        let ff = fundamental_form(&l, &standard3());
        let e = Exterior::new(3);
        assert_eq!(ff.omega, e.monomial(&[0, 1]));
        assert_eq!(ff.volume_coefficient, int(1));
    }

    #[test]
    fn wrong_metric_fails_on_first_pair() {
        let mut s = standard3();
        s.g = q(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]]);
        let r = verify_almost_contact(&LieAlgebra::abelian(3), &s);
        let st = r.first_failure().unwrap();
        assert_eq!(st.name, "g(JX,JY) = g(X,Y) − α(X)α(Y)");
        assert_eq!(st.witness.as_ref().unwrap().detail["pair"], json!([1, 1]));
    }

    #[test]
    fn heisenberg_fails_at_closed_alpha() {
        let l = LieAlgebra::from_brackets(&["X", "Y", "Z"], &[(0, 1, v(&[0, 0, 1]))]);
        let s = standard3();
        assert_eq!(nijenhuis(&l, &s.j, &v(&[1, 0, 0]), &v(&[0, 1, 0])), v(&[0, 0, 1]));
        let r = verify_cosymplectic(&l, &s);
        let st = r.first_failure().unwrap();
        assert_eq!(st.name, "dα = 0");
        assert_eq!(st.witness.as_ref().unwrap().detail["names"], json!(["X", "Y"]));
        assert!(!verify_normal(&l, &s).passed());
    }

    #[test]
    fn degenerate_j_has_zero_volume() {
        let mut s = standard3();
        s.j = QMatrix::zeros(3, 3);
        let ff = fundamental_form(&LieAlgebra::abelian(3), &s);
        assert!(ff.omega.is_zero());
        assert!(ff.volume_coefficient.is_zero());
    }

    #[test]
    fn affine_plane_connection_and_curvature() {
        let l = aff();
        let (conn, curv) = curvature(&l, &QMatrix::identity(2)).unwrap();
        assert_eq!(conn.nabla(0).column(0), v(&[0, 1]));
        assert_eq!(conn.nabla(0).column(1), v(&[-1, 0]));
        assert!(conn.nabla(1).is_zero());
        assert_eq!(curv.operator(0, 1).column(1), v(&[-1, 0]));
        assert_eq!(curv.sectional(0, 1), Some(&int(-1)));
        assert!(!curv.is_flat());
    }

    #[test]
    fn affine_plane_is_kahler() {
        let j = q(&[&[0, -1], &[1, 0]]);
        let r = verify_kahler(&aff(), &j, &QMatrix::identity(2)).unwrap();
        assert!(r.passed(), "{}", r.to_markdown());
        let bad = QMatrix::from_rows(vec![vec![int(0), Scalar::new((-1).into(), 2.into())], v(&[2, 0])]).unwrap();
        let r = verify_kahler(&aff(), &bad, &QMatrix::identity(2)).unwrap();
        assert_eq!(r.first_failure().unwrap().name, "compatibility");
        assert!(verify_kahler(&LieAlgebra::abelian(3), &QMatrix::zeros(3, 3), &QMatrix::identity(3)).is_err());
    }
}
