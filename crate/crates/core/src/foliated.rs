//! The foliation `ker α` with transverse direction `ξ`: forms split by
//! α-degree `u` and, on the leaves, by `J`-type `(r, s)`.
//!
//! Work happens in a complex coframe `(θ_1..θ_m, θ̄_1..θ̄_m, α)` where the
//! `θ_a` span `{φ : φ∘J = iφ, φ(ξ) = 0}`, so `x + iy` has type `(1,0)` when
//! `JX = Y`. Operators are conjugated into the induced monomial basis, where
//! each monomial has a definite type and components are read off by masks.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ce::{CeComplex, MetricComplex};
use crate::error::{Error, Result};
use crate::exterior::{indices_of, Exterior, KForm};
use crate::lie::LieAlgebra;
use crate::matrix::{CMatrix, Matrix, QMatrix};
use crate::report::{Report, Witness};
use crate::scalar::{i_unit, ComplexScalar, Field, Scalar};
use crate::structures::{verify_cosymplectic, StructureData};

/// `(u, r, s)`: α-degree, holomorphic and antiholomorphic leaf degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Type {
    pub u: usize,
    pub r: usize,
    pub s: usize,
}

impl Type {
    pub fn v(&self) -> usize {
        self.r + self.s
    }

    fn diff(&self, from: &Type) -> (isize, isize, isize) {
        (self.u as isize - from.u as isize, self.r as isize - from.r as isize, self.s as isize - from.s as isize)
    }
}

/// Which adjoint to pair with the differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adjoint {
    /// Adjoint with respect to the Gram matrices on invariant forms.
    Gram,
    /// The differential-operator (L²) adjoint, `−Σ g^{ij} ι_{e_i}∇_{e_j}`.
    Formal,
}

/// Checks that `J` restricts to a complex structure on `ker α` and returns
/// the horizontal `(1,0)` covectors.
fn holomorphic_covectors(j: &QMatrix, xi: &[Scalar], alpha: &[Scalar]) -> Result<Vec<Vec<ComplexScalar>>> {
    let n = xi.len();
    if n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("odd dimension required, got {n}")));
    }
    let ax: Scalar = alpha.iter().zip(xi).map(|(a, x)| a * x).sum();
    if ax != Scalar::from_integer(1.into()) {
        return Err(Error::Precondition(format!("α(ξ) = {ax}, expected 1")));
    }
    let horizontal = QMatrix::from_rows(vec![alpha.to_vec()]).expect("one row").kernel();
    for v in &horizontal {
        let jv = j.mul_vec(v);
        let a: Scalar = alpha.iter().zip(&jv).map(|(a, x)| a * x).sum();
        let jjv = j.mul_vec(&jv);
        if !a.is_zero() || jjv.iter().zip(v).any(|(x, y)| x != &-y.clone()) {
            return Err(Error::Precondition("J does not restrict to a complex structure on ker α".into()));
        }
    }
    let m = (n - 1) / 2;
    let mut stacked = j.transpose().to_complex().sub(&CMatrix::identity(n).scale(&i_unit()));
    stacked = stacked.vstack(&CMatrix::from_rows(vec![xi.iter().map(|x| ComplexScalar::from_scalar(x.clone())).collect()]).expect("one row"));
    let thetas = stacked.kernel();
    if thetas.len() != m {
        return Err(Error::Precondition(format!("expected {m} independent (1,0)-covectors, found {}", thetas.len())));
    }
    Ok(thetas)
}

/// The complex of invariant forms rewritten in a typed coframe, together
/// with a Hermitian inner product and the formal codifferential.
#[derive(Clone, Debug)]
pub struct TypedComplex {
    m: usize,
    ext: Exterior,
    types: Vec<Type>,
    coframe: CMatrix,
    p: CMatrix,
    p_inv: CMatrix,
    d: CMatrix,
    gram: CMatrix,
    gram_inv: CMatrix,
    formal_delta: CMatrix,
}

impl TypedComplex {
    pub fn new(lie: &LieAlgebra, j: &QMatrix, xi: &[Scalar], alpha: &[Scalar], g: &QMatrix) -> Result<Self> {
        let n = lie.dim();
        let thetas = holomorphic_covectors(j, xi, alpha)?;
        let m = thetas.len();
        let mut cols = thetas.clone();
        cols.extend(thetas.iter().map(|t| t.iter().map(Field::conj).collect::<Vec<_>>()));
        cols.push(alpha.iter().map(|a| ComplexScalar::from_scalar(a.clone())).collect());
        let coframe = Matrix::from_columns(n, &cols);
        let coframe_inv = coframe.inverse().ok_or_else(|| Error::Invariant("typed coframe is singular".into()))?;
        let ext = Exterior::new(n);
        let p = ext.assemble(&(0..=n).map(|k| ext.compound(&coframe, k)).collect::<Vec<_>>(), 0);
        let p_inv = ext.assemble(&(0..=n).map(|k| ext.compound(&coframe_inv, k)).collect::<Vec<_>>(), 0);
        let types = (0..ext.total_dim())
            .map(|pos| {
                let mask = ext.full_mask(pos);
                let idx = indices_of(mask);
                Type {
                    u: idx.iter().filter(|&&a| a == 2 * m).count(),
                    r: idx.iter().filter(|&&a| a < m).count(),
                    s: idx.iter().filter(|&&a| a >= m && a < 2 * m).count(),
                }
            })
            .collect();
        let mc = MetricComplex::new(CeComplex::new(lie), g)?;
        let conj_in = |a: &QMatrix| p_inv.mul(&a.to_complex()).mul(&p);
        let d = conj_in(&mc.ce().d_full());
        let gram = p.adjoint().mul(&mc.gram_full().to_complex()).mul(&p);
        let gram_inv = gram.inverse().ok_or_else(|| Error::Invariant("typed Gram matrix is singular".into()))?;
        let formal_delta = conj_in(&mc.formal_delta_full());
        let tc = TypedComplex { m, ext, types, coframe, p, p_inv, d, gram, gram_inv, formal_delta };
        tc.check_type_orthogonality()?;
        Ok(tc)
    }

    fn check_type_orthogonality(&self) -> Result<()> {
        let n = self.types.len();
        for a in 0..n {
            for b in 0..n {
                if self.types[a] != self.types[b] && !self.gram[(a, b)].is_zero() {
                    return Err(Error::Precondition(format!(
                        "forms of types {:?} and {:?} are not orthogonal; g is not compatible with J",
                        self.types[a], self.types[b]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ext(&self) -> &Exterior {
        &self.ext
    }

    pub fn half_dim(&self) -> usize {
        self.m
    }

    pub fn types(&self) -> &[Type] {
        &self.types
    }

    /// Columns are the coframe covectors `θ, θ̄, α` in the original dual basis.
    pub fn coframe(&self) -> &CMatrix {
        &self.coframe
    }

    pub fn d(&self) -> &CMatrix {
        &self.d
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// Coordinates in the typed basis of a form given in the original basis
    /// (full-algebra vector).
    pub fn to_typed(&self, v: &[ComplexScalar]) -> Vec<ComplexScalar> {
        self.p_inv.mul_vec(v)
    }

    pub fn from_typed(&self, v: &[ComplexScalar]) -> Vec<ComplexScalar> {
        self.p.mul_vec(v)
    }

    /// Entries of `op` whose (row type, column type) satisfy `keep`.
    pub fn component(&self, op: &CMatrix, keep: impl Fn(&Type, &Type) -> bool) -> CMatrix {
        let n = self.types.len();
        Matrix::from_fn(n, n, |a, b| if keep(&self.types[a], &self.types[b]) { op[(a, b)].clone() } else { ComplexScalar::zero() })
    }

    /// Component of `d` with the given type shift `(Δu, Δr, Δs)`.
    pub fn d_shift(&self, du: isize, dr: isize, ds: isize) -> CMatrix {
        self.component(&self.d, |row, col| row.diff(col) == (du, dr, ds))
    }

    /// `d_{1,0}`: raises the α-degree, keeps the leaf degree.
    pub fn d10(&self) -> CMatrix {
        self.component(&self.d, |row, col| row.u == col.u + 1 && row.v() == col.v())
    }

    /// `d_{0,1}`: the leafwise part.
    pub fn d01(&self) -> CMatrix {
        self.component(&self.d, |row, col| row.u == col.u && row.v() == col.v() + 1)
    }

    pub fn del(&self) -> CMatrix {
        self.d_shift(0, 1, 0)
    }

    pub fn delbar(&self) -> CMatrix {
        self.d_shift(0, 0, 1)
    }

    /// Gram adjoint `G⁻¹ A† G`.
    pub fn gram_adjoint(&self, op: &CMatrix) -> CMatrix {
        self.gram_inv.mul(&op.adjoint()).mul(&self.gram)
    }

    /// Adjoint of the component of `d` selected by `keep`.
    pub fn adjoint_of_d_component(&self, kind: Adjoint, keep: impl Fn(&Type, &Type) -> bool) -> CMatrix {
        match kind {
            Adjoint::Gram => self.gram_adjoint(&self.component(&self.d, keep)),
            Adjoint::Formal => self.component(&self.formal_delta, |row, col| keep(col, row)),
        }
    }

    /// Full-algebra positions of forms with `u = 0`.
    pub fn leaf_positions(&self) -> Vec<usize> {
        (0..self.types.len()).filter(|&a| self.types[a].u == 0).collect()
    }

    pub fn positions_of(&self, t: Type) -> Vec<usize> {
        (0..self.types.len()).filter(|&a| self.types[a] == t).collect()
    }

    /// Gram matrix restricted to some positions.
    pub fn gram_on(&self, pos: &[usize]) -> CMatrix {
        self.gram.select(pos, pos)
    }
}

/// A form split into typed pieces, each expressed in the original basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BigradedForm {
    pub components: BTreeMap<Type, KForm<ComplexScalar>>,
}

impl BigradedForm {
    /// Components merged by `(u, v)`.
    pub fn by_uv(&self) -> BTreeMap<(usize, usize), KForm<ComplexScalar>> {
        let mut out: BTreeMap<(usize, usize), KForm<ComplexScalar>> = BTreeMap::new();
        for (t, f) in &self.components {
            let e = out.entry((t.u, t.v())).or_insert_with(|| KForm { n: f.n, degree: f.degree, coeffs: vec![ComplexScalar::zero(); f.coeffs.len()] });
            *e = e.add(f);
        }
        out
    }

    pub fn sum(&self, degree: usize, len: usize, n: usize) -> KForm<ComplexScalar> {
        let mut acc = KForm { n, degree, coeffs: vec![ComplexScalar::zero(); len] };
        for f in self.components.values() {
            acc = acc.add(f);
        }
        acc
    }

    pub fn to_json(&self, ext: &Exterior) -> Value {
        Value::Array(
            self.components
                .iter()
                .map(|(t, f)| json!({ "type": [t.u, t.r, t.s], "form": f.to_json(ext) }))
                .collect(),
        )
    }
}

/// Splits a form into its `(u, r, s)` components.
pub fn bigrade(lie: &LieAlgebra, s: &StructureData, phi: &KForm<ComplexScalar>) -> Result<BigradedForm> {
    let tc = TypedComplex::new(lie, &s.j, &s.xi, &s.alpha, &s.g)?;
    Ok(bigrade_with(&tc, phi))
}

pub fn bigrade_with(tc: &TypedComplex, phi: &KForm<ComplexScalar>) -> BigradedForm {
    let ext = tc.ext();
    let k = phi.degree;
    let off = ext.offset(k);
    let mut full = vec![ComplexScalar::zero(); ext.total_dim()];
    full[off..off + ext.dim(k)].clone_from_slice(&phi.coeffs);
    let typed = tc.to_typed(&full);
    let mut components = BTreeMap::new();
    for pos in off..off + ext.dim(k) {
        if typed[pos].is_zero() {
            continue;
        }
        let t = tc.types()[pos];
        if components.contains_key(&t) {
            continue;
        }
        let piece: Vec<ComplexScalar> = (0..typed.len())
            .map(|a| if tc.types()[a] == t && a >= off && a < off + ext.dim(k) { typed[a].clone() } else { ComplexScalar::zero() })
            .collect();
        let back = tc.from_typed(&piece);
        components.insert(t, KForm { n: phi.n, degree: k, coeffs: back[off..off + ext.dim(k)].to_vec() });
    }
    BigradedForm { components }
}

/// Matrices of the component operators on the full typed complex.
#[derive(Clone, Debug)]
pub struct FoliatedOperators {
    pub typed: TypedComplex,
    pub adjoint: Adjoint,
    pub d10: CMatrix,
    pub d01: CMatrix,
    pub del: CMatrix,
    pub delbar: CMatrix,
    pub delta_m10: CMatrix,
    pub delta_0m1: CMatrix,
    /// Adjoint of `∂̄`.
    pub theta: CMatrix,
    /// Adjoint of `∂`.
    pub theta_bar: CMatrix,
    pub laplacian_f: CMatrix,
    pub box_f: CMatrix,
    pub box_bar_f: CMatrix,
    pub laplacian_perp: CMatrix,
}

fn first_nonzero(m: &CMatrix) -> Option<(usize, usize)> {
    let z = CMatrix::zeros(m.rows(), m.cols());
    m.first_difference(&z)
}

fn d_alpha_pair(lie: &LieAlgebra, alpha: &[Scalar]) -> Option<(usize, usize)> {
    let n = lie.dim();
    for i in 0..n {
        for j in i + 1..n {
            let v: Scalar = lie.bracket_basis(i, j).iter().zip(alpha).map(|(c, a)| c * a).sum();
            if !v.is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn component_operators(lie: &LieAlgebra, s: &StructureData, adjoint: Adjoint) -> Result<FoliatedOperators> {
    s.check_shapes(lie.dim())?;
    if let Some((i, j)) = d_alpha_pair(lie, &s.alpha) {
        return Err(Error::Precondition(format!("dα ≠ 0: dα({}, {}) is nonzero", lie.name(i), lie.name(j))));
    }
    let typed = TypedComplex::new(lie, &s.j, &s.xi, &s.alpha, &s.g)?;
    Ok(FoliatedOperators::build(typed, adjoint))
}

impl FoliatedOperators {
    pub fn build(typed: TypedComplex, adjoint: Adjoint) -> Self {
        let d10 = typed.d10();
        let d01 = typed.d01();
        let del = typed.del();
        let delbar = typed.delbar();
        let delta_m10 = typed.adjoint_of_d_component(adjoint, |r, c| r.u == c.u + 1 && r.v() == c.v());
        let delta_0m1 = typed.adjoint_of_d_component(adjoint, |r, c| r.u == c.u && r.v() == c.v() + 1);
        let theta = typed.adjoint_of_d_component(adjoint, |r, c| r.diff(c) == (0, 0, 1));
        let theta_bar = typed.adjoint_of_d_component(adjoint, |r, c| r.diff(c) == (0, 1, 0));
        let anti = |a: &CMatrix, b: &CMatrix| a.mul(b).add(&b.mul(a));
        let laplacian_f = anti(&d01, &delta_0m1);
        let box_f = anti(&del, &theta_bar);
        let box_bar_f = anti(&delbar, &theta);
        let laplacian_perp = anti(&delta_m10, &d10);
        FoliatedOperators {
            typed,
            adjoint,
            d10,
            d01,
            del,
            delbar,
            delta_m10,
            delta_0m1,
            theta,
            theta_bar,
            laplacian_f,
            box_f,
            box_bar_f,
            laplacian_perp,
        }
    }

    /// Restricts an operator to the forms with `u = 0`.
    pub fn on_leaves(&self, op: &CMatrix) -> CMatrix {
        let pos = self.typed.leaf_positions();
        op.select(&pos, &pos)
    }

    /// The relations packed into `d² = 0` and `∂̄² = 0`, each checked
    /// separately, plus the absence of the components that must vanish.
    pub fn ladder_report(&self) -> Report {
        let mut r = Report::new("component operators");
        let t = &self.typed;
        let zero_check = |m: &CMatrix, label: &str| {
            first_nonzero(m).map(|(a, b)| {
                Witness::new(
                    format!("{label} has a nonzero entry"),
                    json!({ "row_type": type_json(&t.types()[a]), "col_type": type_json(&t.types()[b]) }),
                )
            })
        };
        let rest = t.component(t.d(), |row, col| !((row.u == col.u + 1 && row.v() == col.v()) || (row.u == col.u && row.v() == col.v() + 1)));
        r.stage("d = d_{0,1} + d_{1,0}", zero_check(&rest, "remaining component of d"));
        let mixed = self.d01.sub(&self.del).sub(&self.delbar);
        r.stage("d_{0,1} = ∂ + ∂̄", zero_check(&mixed, "(2,−1) or (−1,2) part of d_{0,1}"));
        r.stage("d_{0,1}² = 0", zero_check(&self.d01.mul(&self.d01), "d_{0,1}²"));
        r.stage("d_{1,0}² = 0", zero_check(&self.d10.mul(&self.d10), "d_{1,0}²"));
        let cross = self.d01.mul(&self.d10).add(&self.d10.mul(&self.d01));
        r.stage("d_{0,1}d_{1,0} + d_{1,0}d_{0,1} = 0", zero_check(&cross, "anticommutator"));
        r.stage("∂̄² = 0", zero_check(&self.delbar.mul(&self.delbar), "∂̄²"));
        r.stage("∂² = 0", zero_check(&self.del.mul(&self.del), "∂²"));
        let dd = self.del.mul(&self.delbar).add(&self.delbar.mul(&self.del));
        r.stage("∂∂̄ + ∂̄∂ = 0", zero_check(&dd, "∂∂̄ + ∂̄∂"));
        r
    }
}

fn type_json(t: &Type) -> Value {
    json!([t.u, t.r, t.s])
}

/// Compares `Δ_F`, `2□_F` and `2□̄_F` column by column on each `Ω^{0,r,s}`.
pub fn kahler_identity_report(ops: &FoliatedOperators) -> Report {
    let mut r = Report::new("Kähler identities");
    let t = &ops.typed;
    let two = ComplexScalar::from_scalar(Scalar::from_integer(2.into()));
    let box2 = ops.box_f.scale(&two);
    let boxbar2 = ops.box_bar_f.scale(&two);
    let m = t.half_dim();
    let mut table = Vec::new();
    let mut fail_box = None;
    let mut fail_boxbar = None;
    for v in 0..=2 * m {
        for rr in 0..=v.min(m) {
            let ss = v - rr;
            if ss > m {
                continue;
            }
            let ty = Type { u: 0, r: rr, s: ss };
            let cols = t.positions_of(ty);
            let all: Vec<usize> = (0..t.types().len()).collect();
            let lf = ops.laplacian_f.select(&all, &cols);
            let b = box2.select(&all, &cols);
            let bb = boxbar2.select(&all, &cols);
            table.push(json!({ "bidegree": [0, rr, ss], "dim": cols.len() }));
            let witness = |other: &CMatrix, label: &str| {
                lf.first_difference(other).map(|(row, c)| {
                    Witness::new(
                        format!("Δ_F ≠ {label} on Ω^{{0,{rr},{ss}}}"),
                        json!({
                            "bidegree": [0, rr, ss],
                            "row_type": type_json(&t.types()[row]),
                            "column": c,
                            "laplacian": lf[(row, c)].to_json(),
                            "other": other[(row, c)].to_json(),
                        }),
                    )
                })
            };
            if fail_box.is_none() {
                fail_box = witness(&b, "2□_F");
            }
            if fail_boxbar.is_none() {
                fail_boxbar = witness(&bb, "2□̄_F");
            }
        }
    }
    r.stage("Δ_F = 2□_F", fail_box);
    r.stage("Δ_F = 2□̄_F", fail_boxbar);
    r.set_data("bidegrees", Value::Array(table));
    r
}

/// The identities `Δ_F = 2□_F = 2□̄_F` with formal adjoints; the same check
/// with Gram adjoints is attached as data.
pub fn check_kahler_identities(lie: &LieAlgebra, s: &StructureData) -> Result<Report> {
    let cos = verify_cosymplectic(lie, s);
    if !cos.passed() {
        let stage = cos.first_failure().map(|st| st.name.clone()).unwrap_or_default();
        return Err(Error::Precondition(format!("structure is not cosymplectic (fails at {stage})")));
    }
    let formal = component_operators(lie, s, Adjoint::Formal)?;
    let mut r = kahler_identity_report(&formal);
    r.title = "Kähler identities".into();
    r.absorb("ladder", &formal.ladder_report());
    let gram = FoliatedOperators::build(formal.typed.clone(), Adjoint::Gram);
    let gram_report = kahler_identity_report(&gram);
    r.set_data("gram_adjoint_identities", json!(gram_report.verdict));
    Ok(r)
}

/// Dimensions of `ker □̄_F ∩ Ω^{0,r,s}` for `r + s = v`, with
/// `dim ker Δ_F ∩ Ω^{0,v}` for comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HbarGroups {
    pub v: usize,
    pub dims: Vec<((usize, usize), usize)>,
    pub laplacian_kernel: usize,
}

impl HbarGroups {
    pub fn total(&self) -> usize {
        self.dims.iter().map(|(_, d)| d).sum()
    }
}

pub fn hbar_groups_with(ops: &FoliatedOperators, v: usize) -> HbarGroups {
    let t = &ops.typed;
    let m = t.half_dim();
    let mut dims = Vec::new();
    let mut all_v = Vec::new();
    for r in 0..=v.min(m) {
        let s = v - r;
        if s > m {
            continue;
        }
        let pos = t.positions_of(Type { u: 0, r, s });
        all_v.extend(pos.iter().copied());
        dims.push(((r, s), ops.box_bar_f.select(&pos, &pos).kernel().len()));
    }
    all_v.sort_unstable();
    let laplacian_kernel = ops.laplacian_f.select(&all_v, &all_v).kernel().len();
    HbarGroups { v, dims, laplacian_kernel }
}

pub fn hbar_groups(lie: &LieAlgebra, s: &StructureData, v: usize) -> Result<HbarGroups> {
    let cos = verify_cosymplectic(lie, s);
    if !cos.passed() {
        return Err(Error::Precondition("structure is not cosymplectic".into()));
    }
    let ops = component_operators(lie, s, Adjoint::Formal)?;
    Ok(hbar_groups_with(&ops, v))
}

/// Checks `ker Δ ∩ Ω^{0,v} = ker Δ_F ∩ ker d_{1,0} ∩ Ω^{0,v}` as equal
/// subspaces, using Gram adjoints throughout.
pub fn leafwise_harmonic_report(lie: &LieAlgebra, s: &StructureData) -> Result<Report> {
    let ops = component_operators(lie, s, Adjoint::Gram)?;
    let t = &ops.typed;
    let d = t.d().clone();
    let delta = t.gram_adjoint(&d);
    let lap = d.mul(&delta).add(&delta.mul(&d));
    let mut r = Report::new("harmonic forms of type (0, v)");
    let m = t.half_dim();
    let all: Vec<usize> = (0..t.types().len()).collect();
    let mut dims = Vec::new();
    let mut failure = None;
    for v in 0..=2 * m {
        let pos: Vec<usize> = (0..t.types().len()).filter(|&a| t.types()[a].u == 0 && t.types()[a].v() == v).collect();
        // ker of the restricted columns, stacked so both conditions are imposed on the same vectors
        let left = lap.select(&all, &pos).kernel();
        let right = ops.laplacian_f.select(&all, &pos).vstack(&ops.d10.select(&all, &pos)).kernel();
        dims.push(json!({ "v": v, "dim": left.len() }));
        if failure.is_none() && !crate::matrix::same_span(pos.len(), &left, &right) {
            failure = Some(Witness::new(
                format!("subspaces differ in leaf degree {v}"),
                json!({ "v": v, "ker_laplacian": left.len(), "ker_leafwise": right.len() }),
            ));
        }
    }
    r.stage("ker Δ ∩ Ω^{0,v} = ker Δ_F ∩ ker d_{1,0} ∩ Ω^{0,v}", failure);
    r.set_data("dims", Value::Array(dims));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cplx, int, rat};

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn standard3() -> StructureData {
        StructureData {
            j: QMatrix::from_rows(vec![v(&[0, -1, 0]), v(&[1, 0, 0]), v(&[0, 0, 0])]).unwrap(),
            xi: v(&[0, 0, 1]),
            alpha: v(&[0, 0, 1]),
            g: QMatrix::identity(3),
        }
    }

    fn real_form(f: KForm<Scalar>) -> KForm<ComplexScalar> {
        KForm { n: f.n, degree: f.degree, coeffs: f.coeffs.into_iter().map(ComplexScalar::from_scalar).collect() }
    }

    #[test]
    fn torus_one_form_splits_into_conjugate_halves() {
        let l = LieAlgebra::abelian(3);
        let e = Exterior::new(3);
        let x = real_form(e.monomial(&[0]));
        let b = bigrade(&l, &standard3(), &x).unwrap();
        let half = rat(1, 2);
        let p10 = &b.components[&Type { u: 0, r: 1, s: 0 }];
        let p01 = &b.components[&Type { u: 0, r: 0, s: 1 }];
        assert_eq!(p10.coeffs, vec![cplx(half.clone(), int(0)), cplx(int(0), half.clone()), cplx(int(0), int(0))]);
        assert_eq!(p01.coeffs, vec![cplx(half.clone(), int(0)), cplx(int(0), -half), cplx(int(0), int(0))]);
        let alpha = real_form(e.monomial(&[2]));
        let b = bigrade(&l, &standard3(), &alpha).unwrap();
        assert_eq!(b.components.keys().copied().collect::<Vec<_>>(), vec![Type { u: 1, r: 0, s: 0 }]);
    }

    #[test]
    fn omega_is_pure_one_one() {
        let l = LieAlgebra::abelian(3);
        let e = Exterior::new(3);
        let omega = real_form(e.monomial(&[0, 1]));
        let b = bigrade(&l, &standard3(), &omega).unwrap();
        assert_eq!(b.components.keys().copied().collect::<Vec<_>>(), vec![Type { u: 0, r: 1, s: 1 }]);
        assert_eq!(b.components.values().next().unwrap(), &omega);
    }

    #[test]
    fn abelian_operators_vanish() {
        let ops = component_operators(&LieAlgebra::abelian(3), &standard3(), Adjoint::Gram).unwrap();
        assert!(ops.d10.is_zero() && ops.d01.is_zero() && ops.laplacian_f.is_zero());
        assert!(ops.ladder_report().passed());
        let h = hbar_groups_with(&ops, 1);
        assert_eq!(h.dims, vec![((0, 1), 1), ((1, 0), 1)]);
    }

    #[test]
    fn heisenberg_is_refused() {
        let l = LieAlgebra::from_brackets(&["X", "Y", "Z"], &[(0, 1, v(&[0, 0, 1]))]);
        assert!(component_operators(&l, &standard3(), Adjoint::Gram).is_err());
        assert!(check_kahler_identities(&l, &standard3()).is_err());
    }
}
