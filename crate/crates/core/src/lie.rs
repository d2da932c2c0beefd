//! Lie algebras given by structure constants.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::matrix::{QMatrix, Matrix};
use crate::poly::char_poly;
use crate::report::{Report, Witness};
use crate::scalar::{format_scalar, rat, Scalar};

/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`, stored flat.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    c: Vec<Scalar>,
}

fn vec_json(v: &[Scalar]) -> serde_json::Value {
    json!(v.iter().map(format_scalar).collect::<Vec<_>>())
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

impl LieAlgebra {
    /// The abelian algebra on the given basis names.
    pub fn abelian_named(names: Vec<String>) -> Self {
        let dim = names.len();
        LieAlgebra { dim, basis_names: names, c: vec![Scalar::zero(); dim * dim * dim] }
    }

    /// Abelian ℝⁿ with basis `e1..en`.
    pub fn abelian(n: usize) -> Self {
        Self::abelian_named((1..=n).map(|i| format!("e{i}")).collect())
    }

    /// Raw constructor; `c` is indexed `(i * dim + j) * dim + k`. No validation.
    pub fn from_raw(names: Vec<String>, c: Vec<Scalar>) -> Result<Self> {
        let dim = names.len();
        if dim == 0 {
            return Err(Error::Dimension("a Lie algebra needs at least one basis vector".into()));
        }
        if c.len() != dim * dim * dim {
            return Err(Error::Dimension(format!("expected {} structure constants, got {}", dim * dim * dim, c.len())));
        }
        Ok(LieAlgebra { dim, basis_names: names, c })
    }

    /// Builds an algebra from brackets `[e_i, e_j] = v` (0-based), filling in
    /// `[e_j, e_i] = -v`.
    pub fn from_brackets(names: &[&str], brackets: &[(usize, usize, Vec<Scalar>)]) -> Self {
        let mut l = Self::abelian_named(names.iter().map(|s| s.to_string()).collect());
        for (i, j, v) in brackets {
            l.set_bracket(*i, *j, v);
        }
        l
    }

    /// Sets `[e_i, e_j] = v` and `[e_j, e_i] = -v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: &[Scalar]) {
        for k in 0..self.dim {
            let (a, b) = (self.idx(i, j, k), self.idx(j, i, k));
            self.c[a] = v[k].clone();
            self.c[b] = -v[k].clone();
        }
    }

    /// Sets one constant without touching its antisymmetric partner.
    pub fn set_constant(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        let idx = self.idx(i, j, k);
        self.c[idx] = value;
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis_names[i]
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[self.idx(i, j, k)]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        unit(self.dim, i)
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!("vector of length {} in a {}-dimensional algebra", v.len(), self.dim)));
        }
        Ok(())
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let w = &x[i] * &y[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &w * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ [x, y]`.
    pub fn ad(&self, x: &[Scalar]) -> Result<QMatrix> {
        self.check_len(x)?;
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|j| self.bracket_unchecked(x, &self.basis_vector(j))).collect();
        Ok(Matrix::from_columns(self.dim, &cols))
    }

    pub fn ad_basis(&self, i: usize) -> QMatrix {
        Matrix::from_fn(self.dim, self.dim, |k, j| self.c(i, j, k).clone())
    }

    /// Checks antisymmetry and the Jacobi identity. Witness indices are 1-based.
    pub fn validate(&self) -> Report {
        let mut r = Report::new("Lie algebra");
        let n = self.dim;
        let mut anti = None;
        'outer: for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if *self.c(i, j, k) != -self.c(j, i, k).clone() {
                        anti = Some(Witness::new(
                            format!("[{},{}] is not minus [{},{}]", self.name(i), self.name(j), self.name(j), self.name(i)),
                            json!({ "i": i + 1, "j": j + 1, "k": k + 1 }),
                        ));
                        break 'outer;
                    }
                }
            }
        }
        let antisymmetric = anti.is_none();
        r.stage("antisymmetry", anti);
        if !antisymmetric {
            return r;
        }
        let mut jac = None;
        'jacobi: for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let res = self.jacobiator(i, j, k);
                    if !is_zero_vec(&res) {
                        jac = Some(Witness::new(
                            format!("Jacobi fails on ({}, {}, {})", self.name(i), self.name(j), self.name(k)),
                            json!({ "triple": [i + 1, j + 1, k + 1], "residual": vec_json(&res) }),
                        ));
                        break 'jacobi;
                    }
                }
            }
        }
        r.stage("jacobi", jac);
        r
    }

    /// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Scalar> {
        let e = |a| self.basis_vector(a);
        let mut out = self.bracket_unchecked(&e(i), &self.bracket_basis(j, k));
        let b = self.bracket_unchecked(&e(j), &self.bracket_basis(k, i));
        let c = self.bracket_unchecked(&e(k), &self.bracket_basis(i, j));
        for t in 0..self.dim {
            out[t] = &out[t] + &b[t] + &c[t];
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Basis of `[A, B]` for subspaces given by spanning vectors.
    pub fn bracket_span(&self, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let mut vs = Vec::new();
        for x in a {
            for y in b {
                let z = self.bracket_unchecked(x, y);
                if !is_zero_vec(&z) {
                    vs.push(z);
                }
            }
        }
        span_basis(self.dim, &vs)
    }

    fn full_space(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim).map(|i| self.basis_vector(i)).collect()
    }

    /// Dimensions of 𝔤⁽⁰⁾ ⊇ 𝔤⁽¹⁾ ⊇ … until it stabilizes.
    pub fn derived_series(&self) -> Vec<usize> {
        let mut cur = self.full_space();
        let mut dims = vec![cur.len()];
        loop {
            let next = self.bracket_span(&cur, &cur);
            if next.len() == cur.len() {
                return dims;
            }
            dims.push(next.len());
            if next.is_empty() {
                return dims;
            }
            cur = next;
        }
    }

    /// Dimensions of 𝔤 ⊇ [𝔤,𝔤] ⊇ [𝔤,[𝔤,𝔤]] ⊇ … until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let full = self.full_space();
        let mut cur = full.clone();
        let mut dims = vec![cur.len()];
        loop {
            let next = self.bracket_span(&full, &cur);
            if next.len() == cur.len() {
                return dims;
            }
            dims.push(next.len());
            if next.is_empty() {
                return dims;
            }
            cur = next;
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last() == Some(&0)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last() == Some(&0)
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| self.ad_basis(i).trace().is_zero())
    }

    /// Basis of the commutator ideal `[𝔤, 𝔤]`.
    pub fn commutator_ideal(&self) -> Vec<Vec<Scalar>> {
        let full = self.full_space();
        self.bracket_span(&full, &full)
    }

    pub fn classify(&self) -> ClassificationFlags {
        let abelian = self.is_abelian();
        let nilpotent = self.is_nilpotent();
        let solvable = self.is_solvable();
        let unimodular = self.is_unimodular();
        let completely_solvable = self.complete_solvability(solvable);
        ClassificationFlags { abelian, nilpotent, solvable, unimodular, completely_solvable }
    }

    fn complete_solvability(&self, solvable: bool) -> CompleteSolvability {
        if !solvable {
            return CompleteSolvability::Fail;
        }
        let n = self.dim;
        let mut tested: Vec<QMatrix> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c051);
        for _ in 0..2 * n {
            let x: Vec<Scalar> = (0..n).map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect();
            tested.push(self.ad(&x).expect("panel vector has the right length"));
        }
        for m in &tested {
            let p = char_poly(m).expect("ad is square");
            if !p.all_roots_real().expect("characteristic polynomials are monic") {
                return CompleteSolvability::Fail;
            }
        }
        if self.triangularize().is_some() {
            CompleteSolvability::Proved
        } else {
            CompleteSolvability::HeuristicPass
        }
    }

    /// Searches for a basis in which every `ad(e_i)` is upper triangular,
    /// by repeatedly finding a common eigenvector with rational eigenvalues
    /// on the quotient by the span found so far.
    pub fn triangularize(&self) -> Option<Vec<Vec<Scalar>>> {
        let n = self.dim;
        let ads: Vec<QMatrix> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut flag: Vec<Vec<Scalar>> = Vec::new();
        while flag.len() < n {
            let m = flag.len();
            let (q, complement) = adapted_basis(n, &flag);
            let qinv = q.inverse().expect("adapted basis is invertible");
            let quotients: Vec<QMatrix> = ads
                .iter()
                .map(|a| {
                    let full = qinv.mul(a).mul(&q);
                    let idx: Vec<usize> = (m..n).collect();
                    full.select(&idx, &idx)
                })
                .collect();
            let u = common_eigenvector(&quotients)?;
            let mut v = vec![Scalar::zero(); n];
            for (t, &col) in complement.iter().enumerate() {
                v[col] = u[t].clone();
            }
            flag.push(v);
        }
        Some(flag)
    }

    /// Checks `D[e_i,e_j] = [De_i,e_j] + [e_i,De_j]` on all pairs.
    pub fn is_derivation(&self, d: &QMatrix) -> Report {
        let mut r = Report::new("derivation");
        let n = self.dim;
        if d.rows() != n || d.cols() != n {
            return Report::rejected(
                "derivation",
                Witness::new(format!("expected a {n}x{n} matrix, got {}x{}", d.rows(), d.cols()), serde_json::Value::Null),
            );
        }
        let mut failure = None;
        'pairs: for i in 0..n {
            for j in i + 1..n {
                let lhs = d.mul_vec(&self.bracket_basis(i, j));
                let a = self.bracket_unchecked(&d.column(i), &self.basis_vector(j));
                let b = self.bracket_unchecked(&self.basis_vector(i), &d.column(j));
                let rhs: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                if lhs != rhs {
                    failure = Some(Witness::new(
                        format!("Leibniz rule fails on ({}, {})", self.name(i), self.name(j)),
                        json!({ "pair": [i + 1, j + 1], "lhs": vec_json(&lhs), "rhs": vec_json(&rhs) }),
                    ));
                    break 'pairs;
                }
            }
        }
        r.stage("leibniz", failure);
        r
    }

    /// `ℝξ ⋉_D L` with `[ξ, X] = D X`; ξ is appended as the last basis vector.
    pub fn semidirect_extend(&self, d: &QMatrix, new_name: &str) -> Result<LieAlgebra> {
        let rep = self.is_derivation(d);
        if !rep.passed() {
            let msg = rep.first_failure().and_then(|s| s.witness.as_ref()).map(|w| w.message.clone()).unwrap_or_default();
            return Err(Error::Precondition(format!("not a derivation: {msg}")));
        }
        let n = self.dim;
        let mut names = self.basis_names.clone();
        names.push(new_name.to_string());
        let mut out = LieAlgebra::abelian_named(names);
        for i in 0..n {
            for j in i + 1..n {
                let mut v = self.bracket_basis(i, j);
                v.push(Scalar::zero());
                out.set_bracket(i, j, &v);
            }
        }
        for j in 0..n {
            let mut v = d.column(j);
            v.push(Scalar::zero());
            out.set_bracket(n, j, &v);
        }
        Ok(out)
    }

    /// Rewrites the structure constants in the basis `f_a = Σ_i p[i][a] e_i`.
    pub fn change_basis(&self, p: &QMatrix, names: Vec<String>) -> Result<LieAlgebra> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n || names.len() != n {
            return Err(Error::Dimension("change of basis must be square of the algebra's dimension".into()));
        }
        let pinv = p.inverse().ok_or_else(|| Error::Singular("change-of-basis matrix is singular".into()))?;
        let mut out = LieAlgebra::abelian_named(names);
        for a in 0..n {
            for b in a + 1..n {
                let z = self.bracket_unchecked(&p.column(a), &p.column(b));
                out.set_bracket(a, b, &pinv.mul_vec(&z));
            }
        }
        Ok(out)
    }

    /// Restriction of the bracket to a subalgebra spanned by `basis`.
    /// Fails if the span is not closed under the bracket.
    pub fn subalgebra(&self, basis: &[Vec<Scalar>], names: Vec<String>) -> Result<LieAlgebra> {
        let m = basis.len();
        let b = Matrix::from_columns(self.dim, basis);
        let mut out = LieAlgebra::abelian_named(names);
        for a in 0..m {
            for c in a + 1..m {
                let z = self.bracket_unchecked(&basis[a], &basis[c]);
                let coords = b
                    .solve(&z)?
                    .ok_or_else(|| Error::Precondition(format!("subspace is not closed under the bracket at pair ({}, {})", a + 1, c + 1)))?;
                out.set_bracket(a, c, &coords);
            }
        }
        Ok(out)
    }
}

/// The standard basis vector `e_i` of length `n`.
pub fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

fn span_basis(n: usize, vs: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vs.to_vec()).expect("vectors share a length");
    let (r, piv) = m.rref();
    (0..piv.len()).map(|i| r.row(i)[..n].to_vec()).collect()
}

/// Returns `[W | e_c…]` with the standard vectors completing `W`, and the
/// completing column indices.
fn adapted_basis(n: usize, w: &[Vec<Scalar>]) -> (QMatrix, Vec<usize>) {
    let pivots = if w.is_empty() {
        Vec::new()
    } else {
        Matrix::from_rows(w.to_vec()).expect("same length").rref().1
    };
    let complement: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let mut cols = w.to_vec();
    for &j in &complement {
        let mut e = vec![Scalar::zero(); n];
        e[j] = Scalar::one();
        cols.push(e);
    }
    (Matrix::from_columns(n, &cols), complement)
}

fn common_eigenvector(ms: &[QMatrix]) -> Option<Vec<Scalar>> {
    let n = ms[0].rows();
    let mut roots = Vec::with_capacity(ms.len());
    for m in ms {
        let r = char_poly(m).ok()?.rational_roots();
        if r.is_empty() {
            return None;
        }
        roots.push(r);
    }
    let mut choice = vec![0usize; ms.len()];
    loop {
        let mut stacked: Option<QMatrix> = None;
        for (m, (rs, &c)) in ms.iter().zip(roots.iter().zip(&choice)) {
            let shifted = m.sub(&QMatrix::identity(n).scale(&rs[c]));
            stacked = Some(match stacked {
                None => shifted,
                Some(s) => s.vstack(&shifted),
            });
        }
        let ker = stacked.expect("at least one matrix").kernel();
        if let Some(v) = ker.into_iter().next() {
            return Some(v);
        }
        let mut t = 0;
        loop {
            if t == choice.len() {
                return None;
            }
            choice[t] += 1;
            if choice[t] < roots[t].len() {
                break;
            }
            choice[t] = 0;
            t += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompleteSolvability {
    /// A basis triangularizing every `ad` was found.
    Proved,
    /// Every sampled `ad` has real spectrum but no triangular basis was found.
    HeuristicPass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationFlags {
    pub abelian: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    pub unimodular: bool,
    pub completely_solvable: CompleteSolvability,
}

impl ClassificationFlags {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("flags serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn h3() -> LieAlgebra {
        LieAlgebra::from_brackets(&["X", "Y", "Z"], &[(0, 1, v(&[0, 0, 1]))])
    }

    fn aff() -> LieAlgebra {
        // [e2, e1] = e1
        LieAlgebra::from_brackets(&["e1", "e2"], &[(1, 0, v(&[1, 0]))])
    }

    #[test]
    fn heisenberg_is_valid_and_nilpotent() {
        let l = h3();
        assert!(l.validate().passed());
        assert_eq!(l.bracket(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(), v(&[0, 0, 1]));
        assert_eq!(l.ad(&v(&[1, 0, 0])).unwrap().mul_vec(&v(&[0, 1, 0])), v(&[0, 0, 1]));
        let f = l.classify();
        assert!(f.nilpotent && f.solvable && f.unimodular && !f.abelian);
        assert_eq!(f.completely_solvable, CompleteSolvability::Proved);
    }

    #[test]
    fn broken_jacobi_names_the_triple() {
        let l = LieAlgebra::from_brackets(
            &["e1", "e2", "e3"],
            &[(0, 1, v(&[1, 0, 0])), (1, 2, v(&[0, 1, 0])), (0, 2, v(&[0, 0, 1]))],
        );
        let r = l.validate();
        assert!(!r.passed());
        let w = r.first_failure().unwrap().witness.clone().unwrap();
        assert_eq!(w.detail["triple"], json!([1, 2, 3]));
    }

    #[test]
    fn one_sided_constant_breaks_antisymmetry() {
        let mut l = h3();
        l.set_constant(1, 0, 2, int(0));
        assert_eq!(l.validate().first_failure().unwrap().name, "antisymmetry");
    }

    #[test]
    fn heisenberg_diag_is_not_a_derivation() {
        let l = h3();
        let mut d = QMatrix::zeros(3, 3);
        d[(0, 0)] = int(1);
        let r = l.is_derivation(&d);
        assert_eq!(r.first_failure().unwrap().witness.as_ref().unwrap().detail["pair"], json!([1, 2]));
        assert!(l.is_derivation(&QMatrix::zeros(3, 3)).passed());
    }

    #[test]
    fn rotation_extension_is_not_completely_solvable() {
        let d = QMatrix::from_rows(vec![v(&[0, 1]), v(&[-1, 0])]).unwrap();
        let m = LieAlgebra::abelian(2).semidirect_extend(&d, "Z").unwrap();
        assert!(m.validate().passed());
        let f = m.classify();
        assert!(f.solvable && !f.nilpotent && f.unimodular);
        assert_eq!(f.completely_solvable, CompleteSolvability::Fail);
    }

    #[test]
    fn affine_line_is_not_unimodular() {
        let f = aff().classify();
        assert!(f.solvable && !f.nilpotent && !f.unimodular);
        assert_eq!(f.completely_solvable, CompleteSolvability::Proved);
    }

    #[test]
    fn change_basis_roundtrip() {
        let l = h3();
        let p = QMatrix::from_rows(vec![v(&[1, 1, 0]), v(&[0, 1, 0]), v(&[0, 0, 2])]).unwrap();
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let m = l.change_basis(&p, names).unwrap();
        assert!(m.validate().passed());
        let back = m.change_basis(&p.inverse().unwrap(), l.basis_names().to_vec()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn derived_algebra_of_sl2_is_everything() {
        // [h,e] = 2e, [h,f] = -2f, [e,f] = h
        let l = LieAlgebra::from_brackets(
            &["h", "e", "f"],
            &[(0, 1, v(&[0, 2, 0])), (0, 2, v(&[0, 0, -2])), (1, 2, v(&[1, 0, 0]))],
        );
        assert!(l.validate().passed());
        assert!(!l.is_solvable());
        assert_eq!(l.classify().completely_solvable, CompleteSolvability::Fail);
    }
}
