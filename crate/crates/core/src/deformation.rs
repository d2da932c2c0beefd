//! Deformations `J_t` of a cosymplectic structure at a fixed rational `t`:
//! the operators `Ẽ_t`, `E_t` on invariant forms, the projection onto
//! `ker E_t ∩ Ω^{0,2}`, and the reconstruction of `(ω_t, g_t)`.

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::foliated::{Adjoint, TypedComplex, Type};
use crate::lie::{unit, LieAlgebra};
use crate::matrix::{gram_projection, same_span, span_rank, CMatrix, Matrix, QMatrix};
use crate::poly::Poly;
use crate::report::{Report, Witness};
use crate::scalar::{format_scalar, int, rat, ComplexScalar, Field, Scalar};
use crate::structures::{nijenhuis, omega_of, verify_cosymplectic, StructureData};

/// `J_t` with polynomial entries in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct JFamily {
    pub entries: Vec<Vec<Poly>>,
}

impl JFamily {
    pub fn constant(j: &QMatrix) -> Self {
        JFamily { entries: j.to_rows().into_iter().map(|r| r.into_iter().map(|x| Poly::new(vec![x])).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn at(&self, t: &Scalar) -> QMatrix {
        QMatrix::from_rows(self.entries.iter().map(|r| r.iter().map(|p| p.eval(t)).collect()).collect()).expect("rectangular family")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "J_t": self
                .entries
                .iter()
                .map(|r| r.iter().map(|p| Value::Array(p.coeffs().iter().map(|c| json!(format_scalar(c))).collect())).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        })
    }
}

/// The rational family on `ℝ³`: `J_t X = tX − (1+t²)Y`, `J_t Y = X − tY`.
pub fn torus3_family() -> JFamily {
    let p = |c: &[i64]| Poly::from_ints(c);
    JFamily {
        entries: vec![
            vec![p(&[0, 1]), p(&[1]), p(&[])],
            vec![p(&[-1, 0, -1]), p(&[0, -1]), p(&[])],
            vec![p(&[]), p(&[]), p(&[])],
        ],
    }
}

/// The same family conjugated by `Y ↦ −Y`, so that `J_0` is the standard
/// `JX = Y`: `J_t X = tX + (1+t²)Y`, `J_t Y = −X − tY`.
pub fn torus3_family_through_standard() -> JFamily {
    let p = |c: &[i64]| Poly::from_ints(c);
    JFamily {
        entries: vec![
            vec![p(&[0, 1]), p(&[-1]), p(&[])],
            vec![p(&[1, 0, 1]), p(&[0, -1]), p(&[])],
            vec![p(&[]), p(&[]), p(&[])],
        ],
    }
}

/// Conjugation of `J` by the rational rotations
/// `R_t = ((1−t²), −2t; 2t, (1−t²)) / (1+t²)` acting on every leaf plane.
/// These are `g`-isometries commuting with `J`, so the family is `J` itself;
/// the entries are evaluated for each `t` rather than simplified by hand.
pub fn isometric_rotation_family(s: &StructureData, t: &Scalar) -> QMatrix {
    let n = s.dim();
    let one = int(1);
    let den = &one + t * t;
    let c = (&one - t * t) / &den;
    let sn = (int(2) * t) / &den;
    let mut r = QMatrix::identity(n);
    let mut rinv = QMatrix::identity(n);
    let mut i = 0;
    while i + 1 < n {
        r[(i, i)] = c.clone();
        r[(i + 1, i + 1)] = c.clone();
        r[(i, i + 1)] = -sn.clone();
        r[(i + 1, i)] = sn.clone();
        rinv[(i, i)] = c.clone();
        rinv[(i + 1, i + 1)] = c.clone();
        rinv[(i, i + 1)] = sn.clone();
        rinv[(i + 1, i)] = -sn.clone();
        i += 2;
    }
    r.mul(&s.j).mul(&rinv)
}

/// A cosymplectic base `(L, S)` with a candidate `J_t` at one value of `t`.
#[derive(Clone, Debug)]
pub struct DeformedStructure {
    pub lie: LieAlgebra,
    pub base: StructureData,
    pub t: Scalar,
    pub j_t: QMatrix,
}

impl DeformedStructure {
    pub fn new(lie: &LieAlgebra, base: &StructureData, t: Scalar, j_t: QMatrix) -> Result<Self> {
        base.check_shapes(lie.dim())?;
        if j_t.rows() != lie.dim() || j_t.cols() != lie.dim() {
            return Err(Error::Dimension(format!("J_t must be {n}x{n}", n = lie.dim())));
        }
        let cos = verify_cosymplectic(lie, base);
        if !cos.passed() {
            let stage = cos.first_failure().map(|s| s.name.clone()).unwrap_or_default();
            return Err(Error::Precondition(format!("base structure is not cosymplectic (fails at {stage})")));
        }
        Ok(DeformedStructure { lie: lie.clone(), base: base.clone(), t, j_t })
    }

    /// `J_t² = −Id + α⊗ξ` and `N_{J_t} = 0`.
    pub fn check(&self) -> Report {
        let n = self.lie.dim();
        let mut r = Report::new("deformed structure");
        let sq = self.j_t.mul(&self.j_t);
        let want = self.base.alpha_xi().sub(&QMatrix::identity(n));
        r.stage(
            "J_t² = −Id + α⊗ξ",
            sq.first_difference(&want).map(|(a, b)| Witness::new(format!("entry ({}, {}) of J_t² is {}", a + 1, b + 1, sq[(a, b)]), json!({ "entry": [a + 1, b + 1] }))),
        );
        let mut nij = None;
        'p: for a in 0..n {
            for b in a + 1..n {
                let v = nijenhuis(&self.lie, &self.j_t, &unit(n, a), &unit(n, b));
                if v.iter().any(|x| !x.is_zero()) {
                    nij = Some(Witness::new(
                        format!("N_{{J_t}}({}, {}) ≠ 0", self.lie.name(a), self.lie.name(b)),
                        json!({ "pair": [a + 1, b + 1], "value": v.iter().map(format_scalar).collect::<Vec<_>>() }),
                    ));
                    break 'p;
                }
            }
        }
        r.stage("N_{J_t} = 0", nij);
        r
    }

    fn require_valid(&self) -> Result<()> {
        let r = self.check();
        match r.first_failure() {
            None => Ok(()),
            Some(st) => Err(Error::Precondition(format!("J_t at t = {} fails \"{}\"", self.t, st.name))),
        }
    }
}

/// `g̃_t = ½(g + J_tᵀ g J_t + α⊗α)`, symmetric positive definite with
/// `g̃_t(J_t·, J_t·) = g̃_t − α⊗α` and `g̃_t = g` when `J_t = J`.
pub fn auxiliary_metric(ds: &DeformedStructure) -> Result<QMatrix> {
    ds.require_valid()?;
    let g = &ds.base.g;
    let n = g.rows();
    let aa = QMatrix::from_fn(n, n, |i, j| &ds.base.alpha[i] * &ds.base.alpha[j]);
    let gt = g.add(&ds.j_t.transpose().mul(g).mul(&ds.j_t)).add(&aa).scale(&rat(1, 2));
    if gt != gt.transpose() || !gt.is_positive_definite() {
        return Err(Error::Invariant(format!("auxiliary metric at t = {} is not symmetric positive definite", ds.t)));
    }
    let lhs = ds.j_t.transpose().mul(&gt).mul(&ds.j_t);
    if let Some((a, b)) = lhs.first_difference(&gt.sub(&aa)) {
        return Err(Error::Invariant(format!("g̃_t(J_t·, J_t·) ≠ g̃_t − α⊗α at entry ({}, {})", a + 1, b + 1)));
    }
    Ok(gt)
}

/// Operators on complex invariant forms, typed by `J_t`, with Gram adjoints
/// for the auxiliary metric. `e_tilde` and `e` are full-algebra matrices;
/// only their restriction to `u = 0` is meaningful.
#[derive(Clone, Debug)]
pub struct DeformationOperators {
    pub typed: TypedComplex,
    pub metric: QMatrix,
    pub del: CMatrix,
    pub delbar: CMatrix,
    pub theta: CMatrix,
    pub theta_bar: CMatrix,
    pub d10: CMatrix,
    pub delta_m10: CMatrix,
    pub e_tilde: CMatrix,
    pub e: CMatrix,
}

pub fn assemble_e(ds: &DeformedStructure) -> Result<DeformationOperators> {
    let metric = auxiliary_metric(ds)?;
    let typed = TypedComplex::new(&ds.lie, &ds.j_t, &ds.base.xi, &ds.base.alpha, &metric)?;
    let del = typed.del();
    let delbar = typed.delbar();
    let d10 = typed.d10();
    let theta = typed.adjoint_of_d_component(Adjoint::Gram, |r, c| r.u == c.u && r.r == c.r && r.s == c.s + 1);
    let theta_bar = typed.adjoint_of_d_component(Adjoint::Gram, |r, c| r.u == c.u && r.r == c.r + 1 && r.s == c.s);
    let delta_m10 = typed.adjoint_of_d_component(Adjoint::Gram, |r, c| r.u == c.u + 1 && r.v() == c.v());
    let prod = |ms: &[&CMatrix]| ms[1..].iter().fold(ms[0].clone(), |acc, m| acc.mul(m));
    let e_tilde = prod(&[&del, &delbar, &theta, &theta_bar])
        .add(&prod(&[&theta, &theta_bar, &del, &delbar]))
        .add(&prod(&[&theta, &del, &theta_bar, &delbar]))
        .add(&prod(&[&theta_bar, &delbar, &theta, &del]))
        .add(&theta.mul(&delbar))
        .add(&theta_bar.mul(&del));
    let perp = delta_m10.mul(&d10);
    let e = e_tilde.add(&perp.mul(&perp)).add(&perp);
    let ops = DeformationOperators { typed, metric, del, delbar, theta, theta_bar, d10, delta_m10, e_tilde, e };
    ops.check_self_adjoint()?;
    Ok(ops)
}

impl DeformationOperators {
    pub fn leaf_positions(&self) -> Vec<usize> {
        self.typed.leaf_positions()
    }

    /// Positions of `Ω^{0,r,s}` with `r + s = v`.
    pub fn leaf_degree_positions(&self, v: usize) -> Vec<usize> {
        let ty = self.typed.types();
        (0..ty.len()).filter(|&a| ty[a].u == 0 && ty[a].v() == v).collect()
    }

    fn check_self_adjoint(&self) -> Result<()> {
        let pos = self.leaf_positions();
        let g = self.typed.gram_on(&pos);
        for (label, op) in [("Ẽ_t", &self.e_tilde), ("E_t", &self.e)] {
            let m = op.select(&pos, &pos);
            if let Some((a, b)) = g.mul(&m).first_difference(&m.adjoint().mul(&g)) {
                return Err(Error::Invariant(format!("{label} is not self-adjoint: G·E and E†·G differ at ({}, {})", a + 1, b + 1)));
            }
        }
        Ok(())
    }

    /// `ker E_t` on the given positions, as full-length vectors.
    pub fn kernel_on(&self, pos: &[usize]) -> Vec<Vec<ComplexScalar>> {
        let n = self.typed.types().len();
        self.e
            .select(pos, pos)
            .kernel()
            .into_iter()
            .map(|k| {
                let mut full = vec![ComplexScalar::zero(); n];
                for (p, x) in pos.iter().zip(k) {
                    full[*p] = x;
                }
                full
            })
            .collect()
    }

    /// Common kernel of `ϑϑ̄`, `∂`, `∂̄`, `d_{1,0}` on the given positions.
    pub fn conditions_kernel_on(&self, pos: &[usize]) -> Vec<Vec<ComplexScalar>> {
        let n = self.typed.types().len();
        let all: Vec<usize> = (0..n).collect();
        let stacked = self
            .theta
            .mul(&self.theta_bar)
            .select(&all, pos)
            .vstack(&self.del.select(&all, pos))
            .vstack(&self.delbar.select(&all, pos))
            .vstack(&self.d10.select(&all, pos));
        stacked
            .kernel()
            .into_iter()
            .map(|k| {
                let mut full = vec![ComplexScalar::zero(); n];
                for (p, x) in pos.iter().zip(k) {
                    full[*p] = x;
                }
                full
            })
            .collect()
    }

    /// `ker E_t ∩ Ω^{0,r,s} = {ϑϑ̄φ = ∂φ = ∂̄φ = d_{1,0}φ = 0}`, both sides
    /// computed separately, on every leaf bidegree.
    pub fn kernel_characterization(&self) -> Report {
        let mut r = Report::new("kernel of E_t");
        let n = self.typed.types().len();
        let mut failure = None;
        let mut bidegrees: Vec<Type> = self.typed.types().iter().copied().filter(|t| t.u == 0).collect();
        bidegrees.sort();
        bidegrees.dedup();
        for ty in bidegrees {
            let pos = self.typed.positions_of(ty);
            let left = self.kernel_on(&pos);
            let right = self.conditions_kernel_on(&pos);
            if !same_span(n, &left, &right) {
                failure = Some(Witness::new(
                    format!("kernels differ on Ω^{{0,{},{}}}", ty.r, ty.s),
                    json!({ "bidegree": [0, ty.r, ty.s], "ker_E": left.len(), "ker_conditions": right.len() }),
                ));
                break;
            }
        }
        r.stage("ker E_t = ker ϑϑ̄ ∩ ker ∂ ∩ ker ∂̄ ∩ ker d_{1,0}", failure);
        r
    }
}

fn form_to_full(ops: &DeformationOperators, phi: &KForm<Scalar>) -> Vec<ComplexScalar> {
    let ext = ops.typed.ext();
    let off = ext.offset(phi.degree);
    let mut full = vec![ComplexScalar::zero(); ext.total_dim()];
    for (i, c) in phi.coeffs.iter().enumerate() {
        full[off + i] = ComplexScalar::from_scalar(c.clone());
    }
    full
}

/// `Ω(a, b) = ω(e_a, e_b)`.
fn two_form_matrix(ops: &DeformationOperators, omega: &KForm<Scalar>) -> QMatrix {
    let n = omega.n;
    let ext = ops.typed.ext();
    QMatrix::from_fn(n, n, |a, b| ext.evaluate(omega, &[unit(n, a), unit(n, b)]))
}

#[derive(Clone, Debug)]
pub struct Stabilized {
    pub omega_t: KForm<Scalar>,
    pub g_t: QMatrix,
    pub report: Report,
}

/// `ω̃_t = g̃_t(J_t·, ·)`, `ω_t = Re F_t(ω̃_t)` with `F_t` the Gram projection
/// onto `ker E_t ∩ Ω^{0,2}`, and `g_t(X, Y) = ω_t(X, J_tY) + α(X)α(Y)`.
/// A failed report means the reconstruction degenerates at this `t`.
pub fn stabilize(ds: &DeformedStructure) -> Result<Stabilized> {
    let ops = assemble_e(ds)?;
    let n = ds.lie.dim();
    let ext = ops.typed.ext().clone();
    let omega_tilde = omega_of(&ext, &ds.j_t, &ops.metric);
    let pos = ops.leaf_degree_positions(2);
    let kernel: Vec<Vec<ComplexScalar>> = ops.kernel_on(&pos).into_iter().map(|v| pos.iter().map(|&p| v[p].clone()).collect()).collect();
    let typed = ops.typed.to_typed(&form_to_full(&ops, &omega_tilde));
    let restricted: Vec<ComplexScalar> = pos.iter().map(|&p| typed[p].clone()).collect();
    let projected = gram_projection(&kernel, &ops.typed.gram_on(&pos), &restricted)?;
    let mut full = vec![ComplexScalar::zero(); typed.len()];
    for (p, x) in pos.iter().zip(projected) {
        full[*p] = x;
    }
    let back = ops.typed.from_typed(&full);
    let off = ext.offset(2);
    let omega_t = KForm { n, degree: 2, coeffs: back[off..off + ext.dim(2)].iter().map(|z| z.re.clone()).collect() };

    let mut r = Report::new(format!("stabilize at t = {}", format_scalar(&ds.t)));
    r.set_data("t", json!(format_scalar(&ds.t)));
    r.set_data("kernel_dimension", json!(kernel.len()));
    let ce = crate::ce::CeComplex::new(&ds.lie);
    if !ce.differential(&omega_t).is_zero() {
        return Err(Error::Invariant(format!("ω_t is not closed at t = {}", ds.t)));
    }
    r.pass_stage("dω_t = 0");
    let om = two_form_matrix(&ops, &omega_t);
    let invariant = ds.j_t.transpose().mul(&om).mul(&ds.j_t);
    r.stage(
        "ω_t(J_t·, J_t·) = ω_t",
        invariant.first_difference(&om).map(|(a, b)| Witness::new("ω_t is not J_t-invariant", json!({ "pair": [a + 1, b + 1] }))),
    );
    let mut vol = KForm { n, degree: 1, coeffs: ds.base.alpha.clone() };
    for _ in 0..(n - 1) / 2 {
        vol = ext.wedge(&vol, &omega_t);
    }
    let vol_coeff = vol.coeffs.first().cloned().unwrap_or_else(Scalar::zero);
    r.stage("α∧ω_tⁿ ≠ 0", vol_coeff.is_zero().then(|| Witness::new("top coefficient vanishes", Value::Null)));
    let aa = QMatrix::from_fn(n, n, |i, j| &ds.base.alpha[i] * &ds.base.alpha[j]);
    let g_t = om.mul(&ds.j_t).add(&aa);
    r.stage(
        "g_t symmetric positive definite",
        (g_t != g_t.transpose() || !g_t.is_positive_definite()).then(|| Witness::new("g_t is not a metric", json!({ "g_t": g_t.to_json() }))),
    );
    if r.passed() {
        let s = StructureData { j: ds.j_t.clone(), xi: ds.base.xi.clone(), alpha: ds.base.alpha.clone(), g: g_t.clone() };
        r.absorb("cosymplectic", &verify_cosymplectic(&ds.lie, &s));
    } else {
        r.notes.push("degenerate at this t".into());
    }
    r.set_data("omega_t", omega_t.to_json(&ext));
    r.set_data("g_t", g_t.to_json());
    r.set_data("auxiliary_metric", ops.metric.to_json());
    Ok(Stabilized { omega_t, g_t, report: r })
}

/// Dimensions of `𝔽_t^{r,s}` for `r + s = 2` and the count
/// `dim Z^{1,1}_t = dim(∂_t∂̄_tΩ⁰ ∩ ker d_{1,0}) + dim 𝔽_t^{1,1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelDimensions {
    pub f_dims: Vec<((usize, usize), usize)>,
    pub z11: usize,
    pub ddbar_part: usize,
    pub decomposition: bool,
    /// `dim(ker □_0 ∩ ker d_{1,0} ∩ Ω^{0,1,1})` with Gram and formal
    /// adjoints, filled in when `J_t = J`.
    pub box_kernel_at_zero: Option<(usize, usize)>,
}

impl KernelDimensions {
    pub fn f11(&self) -> usize {
        self.f_dims.iter().find(|(rs, _)| *rs == (1, 1)).map(|(_, d)| *d).unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "F": self.f_dims.iter().map(|((r, s), d)| json!({ "bidegree": [0, r, s], "dim": d })).collect::<Vec<_>>(),
            "Z11": self.z11,
            "ddbar_part": self.ddbar_part,
            "decomposition": self.decomposition,
            "box_kernel_at_zero": self.box_kernel_at_zero.map(|(g, f)| json!({ "gram": g, "formal": f })),
        })
    }
}

fn embed(n: usize, pos: &[usize], v: Vec<ComplexScalar>) -> Vec<ComplexScalar> {
    let mut full = vec![ComplexScalar::zero(); n];
    for (p, x) in pos.iter().zip(v) {
        full[*p] = x;
    }
    full
}

pub fn kernel_dimensions(ds: &DeformedStructure) -> Result<KernelDimensions> {
    let ops = assemble_e(ds)?;
    let t = &ops.typed;
    let n = t.types().len();
    let all: Vec<usize> = (0..n).collect();
    let m = t.half_dim();
    let mut f_dims = Vec::new();
    for r in 0..=2usize.min(m) {
        let s = 2 - r;
        if s > m {
            continue;
        }
        f_dims.push(((r, s), ops.kernel_on(&t.positions_of(Type { u: 0, r, s })).len()));
    }
    let p11 = t.positions_of(Type { u: 0, r: 1, s: 1 });
    let p00 = t.positions_of(Type { u: 0, r: 0, s: 0 });
    let z: Vec<Vec<ComplexScalar>> = t.d().select(&all, &p11).kernel().into_iter().map(|v| embed(n, &p11, v)).collect();
    let image = ops.del.mul(&ops.delbar).select(&all, &p00).column_space();
    let b = Matrix::from_columns(n, &image);
    let ddbar: Vec<Vec<ComplexScalar>> = if image.is_empty() { Vec::new() } else { ops.d10.mul(&b).kernel().into_iter().map(|c| b.mul_vec(&c)).collect() };
    let f11 = ops.kernel_on(&p11);
    let mut union = ddbar.clone();
    union.extend(f11.iter().cloned());
    let inside_z = union.iter().all(|v| t.d().mul_vec(v).iter().all(Zero::is_zero));
    let decomposition = inside_z && span_rank(n, &union) == ddbar.len() + f11.len() && union.len() == z.len();
    let box_kernel_at_zero = (ds.j_t == ds.base.j).then(|| {
        let count = |adj: Adjoint| {
            let ops0 = crate::foliated::FoliatedOperators::build(t.clone(), adj);
            ops0.box_f.select(&all, &p11).vstack(&ops0.d10.select(&all, &p11)).kernel().len()
        };
        (count(Adjoint::Gram), count(Adjoint::Formal))
    });
    Ok(KernelDimensions { f_dims, z11: z.len(), ddbar_part: ddbar.len(), decomposition, box_kernel_at_zero })
}

/// `Ẽ_0 = □_0□_0 + ϑ_0∂̄_0 + ϑ̄_0∂_0` on `Ω^{0,1,1}`, with Gram adjoints.
pub fn check_e_tilde_at_zero(lie: &LieAlgebra, s: &StructureData) -> Result<Report> {
    let ds = DeformedStructure::new(lie, s, Scalar::zero(), s.j.clone())?;
    let ops = assemble_e(&ds)?;
    let t = &ops.typed;
    let all: Vec<usize> = (0..t.types().len()).collect();
    let p11 = t.positions_of(Type { u: 0, r: 1, s: 1 });
    let bx = ops.del.mul(&ops.theta_bar).add(&ops.theta_bar.mul(&ops.del));
    let rhs = bx.mul(&bx).add(&ops.theta.mul(&ops.delbar)).add(&ops.theta_bar.mul(&ops.del));
    let (l, rr) = (ops.e_tilde.select(&all, &p11), rhs.select(&all, &p11));
    let mut r = Report::new("Ẽ_0 on (0,1,1)-forms");
    r.stage(
        "Ẽ_0 = □_0□_0 + ϑ_0∂̄_0 + ϑ̄_0∂_0",
        l.first_difference(&rr).map(|(a, b)| Witness::new("matrices differ", json!({ "row": a + 1, "column": b + 1, "lhs": l[(a, b)].to_json(), "rhs": rr[(a, b)].to_json() }))),
    );
    Ok(r)
}

/// Runs `stabilize` on a sorted list of `t` values by bisection, assuming
/// the passing values form an initial segment; returns the largest passing
/// `t` found (if any) and the reports of the values that were evaluated.
pub fn largest_passing(lie: &LieAlgebra, base: &StructureData, family: &JFamily, ts: &[Scalar]) -> Result<(Option<Scalar>, Vec<Report>)> {
    let mut sorted = ts.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut reports = Vec::new();
    let (mut lo, mut hi) = (0usize, sorted.len());
    let mut best = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let t = sorted[mid].clone();
        let ds = DeformedStructure::new(lie, base, t.clone(), family.at(&t))?;
        let passed = match stabilize(&ds) {
            Ok(out) => {
                let ok = out.report.passed();
                reports.push(out.report);
                ok
            }
            Err(Error::Precondition(msg)) => {
                reports.push(Report::rejected(format!("stabilize at t = {}", format_scalar(&t)), Witness::new(msg, Value::Null)));
                false
            }
            Err(e) => return Err(e),
        };
        if passed {
            best = Some(t);
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok((best, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard3() -> StructureData {
        let v = |xs: &[i64]| xs.iter().map(|&x| int(x)).collect::<Vec<_>>();
        StructureData {
            j: QMatrix::from_rows(vec![v(&[0, -1, 0]), v(&[1, 0, 0]), v(&[0, 0, 0])]).unwrap(),
            xi: v(&[0, 0, 1]),
            alpha: v(&[0, 0, 1]),
            g: QMatrix::identity(3),
        }
    }

    #[test]
    fn families_square_to_minus_identity_on_the_leaf() {
        for fam in [torus3_family(), torus3_family_through_standard()] {
            for t in [int(0), rat(1, 10), rat(1, 2), int(1), int(-3)] {
                let ds = DeformedStructure::new(&LieAlgebra::abelian(3), &standard3(), t.clone(), fam.at(&t)).unwrap();
                assert!(ds.check().passed());
            }
        }
        assert_eq!(torus3_family_through_standard().at(&int(0)), standard3().j);
        assert_eq!(torus3_family().at(&int(0)), standard3().j.scale(&int(-1)));
    }

    #[test]
    fn auxiliary_metric_on_the_torus_family() {
        let t = rat(1, 2);
        let ds = DeformedStructure::new(&LieAlgebra::abelian(3), &standard3(), t.clone(), torus3_family().at(&t)).unwrap();
        let g = auxiliary_metric(&ds).unwrap();
        // J_t = [[1/2, 1], [−5/4, −1/2]]; JᵀJ = [[29/16, 9/8], [9/8, 5/4]]
        let want = QMatrix::from_rows(vec![
            vec![rat(45, 32), rat(9, 16), int(0)],
            vec![rat(9, 16), rat(9, 8), int(0)],
            vec![int(0), int(0), int(1)],
        ])
        .unwrap();
        assert_eq!(g, want);
    }

    #[test]
    fn abelian_stabilize_returns_the_auxiliary_metric() {
        let t = int(1);
        let ds = DeformedStructure::new(&LieAlgebra::abelian(3), &standard3(), t.clone(), torus3_family().at(&t)).unwrap();
        let out = stabilize(&ds).unwrap();
        assert!(out.report.passed(), "{}", out.report.to_markdown());
        assert_eq!(out.g_t, auxiliary_metric(&ds).unwrap());
    }

    #[test]
    fn non_integrable_deformation_is_refused() {
        let h3 = LieAlgebra::from_brackets(&["X", "Y", "Z"], &[(0, 1, vec![int(0), int(0), int(1)])]);
        assert!(DeformedStructure::new(&h3, &standard3(), int(0), standard3().j).is_err());
    }
}
