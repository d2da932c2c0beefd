//! Exterior algebra on the dual of an `n`-dimensional space.
//!
//! A basis monomial `e^{i1}∧…∧e^{ik}` (with `i1 < … < ik`) is a bitmask.
//! Within each degree the monomials are ordered lexicographically by their
//! index tuples, and forms are dense coefficient vectors in that order.
//! Forms evaluate on vectors by the determinant convention
//! `(e^1∧…∧e^k)(X_1,…,X_k) = det[e^i(X_j)]`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

pub type Mask = u32;

/// Monomial bases for every degree `0..=n`.
#[derive(Clone, Debug)]
pub struct Exterior {
    n: usize,
    bases: Vec<Vec<Mask>>,
    position: HashMap<Mask, usize>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn mask_of(indices: &[usize]) -> Mask {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn indices_of(mask: Mask) -> Vec<usize> {
    (0..Mask::BITS as usize).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of `e^A ∧ e^B` relative to `e^{A∪B}`; zero when they overlap.
pub fn wedge_sign(a: Mask, b: Mask) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0;
    for j in indices_of(b) {
        inversions += (a >> (j + 1)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn signed<F: Field>(s: i32, x: &F) -> F {
    if s > 0 {
        x.clone()
    } else {
        -x.clone()
    }
}

impl Exterior {
    pub fn new(n: usize) -> Self {
        assert!(n < Mask::BITS as usize, "dimension too large for bitmask forms");
        let mut bases = Vec::with_capacity(n + 1);
        let mut position = HashMap::new();
        for k in 0..=n {
            let b: Vec<Mask> = combinations(n, k).iter().map(|c| mask_of(c)).collect();
            for (p, &m) in b.iter().enumerate() {
                position.insert(m, p);
            }
            bases.push(b);
        }
        Exterior { n, bases, position }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `C(n, k)`, zero outside `0..=n`.
    pub fn dim(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        1 << self.n
    }

    pub fn basis(&self, k: usize) -> &[Mask] {
        &self.bases[k]
    }

    pub fn position(&self, mask: Mask) -> usize {
        self.position[&mask]
    }

    /// Offset of degree `k` inside the full algebra `⊕_k Λᵏ`.
    pub fn offset(&self, k: usize) -> usize {
        (0..k).map(|j| self.dim(j)).sum()
    }

    pub fn zero<F: Field>(&self, k: usize) -> KForm<F> {
        KForm { n: self.n, degree: k, coeffs: vec![F::zero(); self.dim(k)] }
    }

    /// The monomial `e^I` for sorted distinct `indices`.
    pub fn monomial<F: Field>(&self, indices: &[usize]) -> KForm<F> {
        let mut f = self.zero(indices.len());
        f.coeffs[self.position(mask_of(indices))] = F::one();
        f
    }

    /// Matrix of `ψ ↦ φ ∧ ψ` from degree `k` to `k + deg φ`.
    pub fn wedge_matrix<F: Field>(&self, phi: &KForm<F>, k: usize) -> Matrix<F> {
        let p = phi.degree;
        let mut m: Matrix<F> = Matrix::zeros(self.dim(k + p), self.dim(k));
        if k + p > self.n {
            return m;
        }
        for (col, &b) in self.bases[k].iter().enumerate() {
            for (a_pos, &a) in self.bases[p].iter().enumerate() {
                let c = &phi.coeffs[a_pos];
                if c.is_zero() {
                    continue;
                }
                let s = wedge_sign(a, b);
                if s != 0 {
                    let row = self.position(a | b);
                    m[(row, col)] = m[(row, col)].add_ref(&signed(s, c));
                }
            }
        }
        m
    }

    pub fn wedge<F: Field>(&self, a: &KForm<F>, b: &KForm<F>) -> KForm<F> {
        let m = self.wedge_matrix(a, b.degree);
        KForm { n: self.n, degree: a.degree + b.degree, coeffs: m.mul_vec(&b.coeffs) }
    }

    /// Matrix of the contraction `ι_v: Λᵏ → Λᵏ⁻¹`, `(ι_v φ)(…) = φ(v, …)`.
    pub fn interior_matrix<F: Field>(&self, v: &[F], k: usize) -> Matrix<F> {
        assert!(k >= 1);
        let mut m: Matrix<F> = Matrix::zeros(self.dim(k - 1), self.dim(k));
        for (col, &mask) in self.bases[k].iter().enumerate() {
            for (pos, j) in indices_of(mask).into_iter().enumerate() {
                if v[j].is_zero() {
                    continue;
                }
                let row = self.position(mask & !(1 << j));
                let term = signed(if pos % 2 == 0 { 1 } else { -1 }, &v[j]);
                m[(row, col)] = m[(row, col)].add_ref(&term);
            }
        }
        m
    }

    pub fn interior<F: Field>(&self, v: &[F], phi: &KForm<F>) -> KForm<F> {
        if phi.degree == 0 {
            return self.zero(0);
        }
        let m = self.interior_matrix(v, phi.degree);
        KForm { n: self.n, degree: phi.degree - 1, coeffs: m.mul_vec(&phi.coeffs) }
    }

    /// Matrix on `Λᵏ` induced by a linear map `a` on 1-forms (columns are the
    /// images of `e^j`): `e^I ↦ a(e^{i1}) ∧ … ∧ a(e^{ik})`. Its entries are the
    /// `k×k` minors of `a`.
    pub fn compound<F: Field>(&self, a: &Matrix<F>, k: usize) -> Matrix<F> {
        let basis = &self.bases[k];
        Matrix::from_fn(basis.len(), basis.len(), |r, c| {
            let rows = indices_of(basis[r]);
            let cols = indices_of(basis[c]);
            if k == 0 {
                F::one()
            } else {
                a.select(&rows, &cols).determinant()
            }
        })
    }

    /// Extends a linear map `a` on 1-forms (columns are images of `e^j`) to
    /// `Λᵏ` as a derivation: `e^I ↦ Σ_p e^{i1}∧…∧a(e^{ip})∧…∧e^{ik}`.
    pub fn derivation<F: Field>(&self, a: &Matrix<F>, k: usize) -> Matrix<F> {
        let basis = &self.bases[k];
        let mut m: Matrix<F> = Matrix::zeros(basis.len(), basis.len());
        for (col, &mask) in basis.iter().enumerate() {
            for (p, i) in indices_of(mask).into_iter().enumerate() {
                let rest = mask & !(1 << i);
                for l in 0..self.n {
                    let c = &a[(l, i)];
                    if c.is_zero() {
                        continue;
                    }
                    let s = wedge_sign(1 << l, rest);
                    if s == 0 {
                        continue;
                    }
                    // moving the replaced factor to the front costs (-1)^p
                    let s = if p % 2 == 0 { s } else { -s };
                    let row = self.position(rest | (1 << l));
                    m[(row, col)] = m[(row, col)].add_ref(&signed(s, c));
                }
            }
        }
        m
    }

    /// Places per-degree blocks `Λᵏ → Λ^{k+shift}` into one matrix on the
    /// full algebra. Blocks whose target degree is out of range must be empty.
    pub fn assemble<F: Field>(&self, blocks: &[Matrix<F>], shift: isize) -> Matrix<F> {
        let total = self.total_dim();
        let mut m = Matrix::zeros(total, total);
        for (k, b) in blocks.iter().enumerate() {
            let target = k as isize + shift;
            if target < 0 || target > self.n as isize {
                continue;
            }
            let (r0, c0) = (self.offset(target as usize), self.offset(k));
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    if !b[(i, j)].is_zero() {
                        m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                    }
                }
            }
        }
        m
    }

    /// Mask of the monomial at a position of the full algebra.
    pub fn full_mask(&self, pos: usize) -> Mask {
        let mut p = pos;
        for k in 0..=self.n {
            if p < self.dim(k) {
                return self.bases[k][p];
            }
            p -= self.dim(k);
        }
        panic!("position {pos} outside the exterior algebra")
    }

    /// Evaluates `φ(X_1,…,X_k)` by the determinant convention.
    pub fn evaluate<F: Field>(&self, phi: &KForm<F>, vectors: &[Vec<F>]) -> F {
        assert_eq!(vectors.len(), phi.degree);
        let mut total = F::zero();
        for (pos, &mask) in self.bases[phi.degree].iter().enumerate() {
            let c = &phi.coeffs[pos];
            if c.is_zero() {
                continue;
            }
            let idx = indices_of(mask);
            let m = Matrix::from_fn(idx.len(), idx.len(), |a, b| vectors[b][idx[a]].clone());
            let det = if idx.is_empty() { F::one() } else { m.determinant() };
            total = total.add_ref(&c.mul_ref(&det));
        }
        total
    }
}

/// A homogeneous form of a fixed degree, as a dense coefficient vector over
/// the lexicographic monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KForm<F> {
    pub n: usize,
    pub degree: usize,
    pub coeffs: Vec<F>,
}

impl<F: Field> KForm<F> {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        KForm { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add_ref(b)).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        KForm { n: self.n, degree: self.degree, coeffs: self.coeffs.iter().map(|a| a.mul_ref(s)).collect() }
    }

    /// Nonzero terms as (sorted 0-based indices, coefficient).
    pub fn terms(&self, ext: &Exterior) -> Vec<(Vec<usize>, F)> {
        ext.basis(self.degree)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&m, c)| (indices_of(m), c.clone()))
            .collect()
    }

    /// Builds a form from (indices, coefficient) terms. Indices need not be
    /// sorted; repeated indices give zero, unsorted ones pick up the sign of
    /// the sorting permutation.
    pub fn from_terms(ext: &Exterior, degree: usize, terms: &[(Vec<usize>, F)]) -> Result<Self> {
        let mut f: KForm<F> = ext.zero(degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::Dimension(format!("term {idx:?} in a {degree}-form")));
            }
            if idx.iter().any(|&i| i >= ext.n()) {
                return Err(Error::Dimension(format!("index out of range in {idx:?}")));
            }
            let mut sorted = idx.clone();
            let mut sign = 1;
            for a in 0..sorted.len() {
                for b in 0..sorted.len() - 1 - a {
                    if sorted[b] > sorted[b + 1] {
                        sorted.swap(b, b + 1);
                        sign = -sign;
                    }
                }
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let p = ext.position(mask_of(&sorted));
            f.coeffs[p] = f.coeffs[p].add_ref(&signed(sign, c));
        }
        Ok(f)
    }

    /// `{"degree": k, "terms": [{"idx": [..1-based..], "coeff": ..}]}`.
    pub fn to_json(&self, ext: &Exterior) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms(ext)
            .into_iter()
            .map(|(idx, c)| json!({ "idx": idx.iter().map(|i| i + 1).collect::<Vec<_>>(), "coeff": c.to_json() }))
            .collect();
        json!({ "degree": self.degree, "terms": terms })
    }
}

impl KForm<Scalar> {
    /// Human-readable rendering like `x∧y - 1/2 y∧z`.
    pub fn pretty(&self, ext: &Exterior, names: &[String]) -> String {
        let terms = self.terms(ext);
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (t, (idx, c)) in terms.iter().enumerate() {
            let mono = if idx.is_empty() {
                "1".to_string()
            } else {
                idx.iter().map(|&i| names[i].to_lowercase()).collect::<Vec<_>>().join("∧")
            };
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if t == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() || idx.is_empty() {
                out.push_str(&format!("{abs} "));
            }
            out.push_str(&mono);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn lexicographic_bases() {
        let e = Exterior::new(4);
        let two: Vec<Vec<usize>> = e.basis(2).iter().map(|&m| indices_of(m)).collect();
        assert_eq!(two, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(e.dim(0) + e.dim(1) + e.dim(2) + e.dim(3) + e.dim(4), e.total_dim());
    }

    #[test]
    fn wedge_signs() {
        let e = Exterior::new(3);
        let x: KForm<Scalar> = e.monomial(&[0]);
        let y: KForm<Scalar> = e.monomial(&[1]);
        let z: KForm<Scalar> = e.monomial(&[2]);
        let yx = e.wedge(&y, &x);
        assert_eq!(yx, e.monomial::<Scalar>(&[0, 1]).scale(&int(-1)));
        let xz_y = e.wedge(&e.wedge(&x, &z), &y);
        assert_eq!(xz_y, e.monomial::<Scalar>(&[0, 1, 2]).scale(&int(-1)));
        assert!(e.wedge(&x, &x).is_zero());
    }

    #[test]
    fn evaluation_is_determinant() {
        let e = Exterior::new(3);
        let xy: KForm<Scalar> = e.monomial(&[0, 1]);
        let u = vec![int(1), int(2), int(0)];
        let v = vec![int(3), int(4), int(5)];
        assert_eq!(e.evaluate(&xy, &[u.clone(), v.clone()]), int(-2));
        let iu = e.interior(&u, &xy);
        assert_eq!(e.evaluate(&iu, &[v]), int(-2));
    }

    #[test]
    fn from_terms_sorts_with_sign() {
        let e = Exterior::new(3);
        let f = KForm::from_terms(&e, 2, &[(vec![2, 0], rat(1, 2)), (vec![1, 1], int(7))]).unwrap();
        assert_eq!(f.terms(&e), vec![(vec![0, 2], rat(-1, 2))]);
        assert_eq!(f.to_json(&e), json!({"degree": 2, "terms": [{"idx": [1, 3], "coeff": "-1/2"}]}));
    }

    #[test]
    fn compound_of_diagonal() {
        let e = Exterior::new(3);
        let a = Matrix::from_fn(3, 3, |i, j| if i == j { int(i as i64 + 2) } else { int(0) });
        let c = e.compound(&a, 2);
        assert_eq!(c[(0, 0)], int(6));
        assert_eq!(c[(2, 2)], int(12));
    }
}
