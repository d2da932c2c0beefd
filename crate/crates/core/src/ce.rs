//! The Chevalley–Eilenberg complex `Λ𝔤*`, its cohomology, and finite
//! Hodge theory for a chosen inner product.
//!
//! Sign convention: `dθ(X, Y) = −θ([X, Y])` on 1-forms, i.e.
//! `d e^k = −Σ_{i<j} c_ij^k e^i∧e^j`, extended by the Leibniz rule.

use num_traits::Zero;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exterior::{indices_of, wedge_sign, Exterior, KForm};
use crate::lie::LieAlgebra;
use crate::matrix::{hermitian, span_rank, QMatrix};
use crate::report::{Report, Witness};
use crate::scalar::Scalar;
use crate::structures::levi_civita;

/// The label every Betti screening report carries.
pub const NECESSARY_ONLY: &str = "necessary conditions only: pass does not imply a cosymplectic structure exists";

/// Differential matrices of `Λ𝔤*` for one algebra.
#[derive(Clone, Debug)]
pub struct CeComplex {
    lie: LieAlgebra,
    ext: Exterior,
    d: Vec<QMatrix>,
}

impl CeComplex {
    pub fn new(lie: &LieAlgebra) -> Self {
        let n = lie.dim();
        let ext = Exterior::new(n);
        // d on 1-forms, as 2-form coefficient vectors
        let d1: Vec<Vec<Scalar>> = (0..n)
            .map(|k| {
                ext.basis(2)
                    .iter()
                    .map(|&m| {
                        let ij = indices_of(m);
                        -lie.c(ij[0], ij[1], k).clone()
                    })
                    .collect()
            })
            .collect();
        let mut d = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut m = QMatrix::zeros(ext.dim(k + 1), ext.dim(k));
            if k < n && k > 0 {
                for (col, &mask) in ext.basis(k).iter().enumerate() {
                    for (p, i) in indices_of(mask).into_iter().enumerate() {
                        let rest = mask & !(1 << i);
                        for (pos2, &pq) in ext.basis(2).iter().enumerate() {
                            let c = &d1[i][pos2];
                            if c.is_zero() {
                                continue;
                            }
                            let s = wedge_sign(pq, rest);
                            if s == 0 {
                                continue;
                            }
                            let s = if p % 2 == 0 { s } else { -s };
                            let row = ext.position(pq | rest);
                            if s > 0 {
                                m[(row, col)] += c;
                            } else {
                                m[(row, col)] -= c;
                            }
                        }
                    }
                }
            }
            d.push(m);
        }
        CeComplex { lie: lie.clone(), ext, d }
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn ext(&self) -> &Exterior {
        &self.ext
    }

    /// `d: Λᵏ → Λᵏ⁺¹` for `k = 0..=dim`.
    pub fn d(&self, k: usize) -> &QMatrix {
        &self.d[k]
    }

    /// `d` on the full exterior algebra.
    pub fn d_full(&self) -> QMatrix {
        self.ext.assemble(&self.d, 1)
    }

    pub fn differential(&self, phi: &KForm<Scalar>) -> KForm<Scalar> {
        let k = phi.degree;
        KForm { n: phi.n, degree: k + 1, coeffs: self.d[k].mul_vec(&phi.coeffs) }
    }

    /// `b_k = dim ker d_k − rank d_{k−1}`.
    pub fn betti(&self) -> Vec<usize> {
        let n = self.lie.dim();
        let ranks: Vec<usize> = self.d.iter().map(QMatrix::rank).collect();
        (0..=n).map(|k| self.ext.dim(k) - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 }).collect()
    }
}

pub fn ce_differential(lie: &LieAlgebra, phi: &KForm<Scalar>) -> KForm<Scalar> {
    if phi.degree >= lie.dim() {
        return Exterior::new(lie.dim()).zero(phi.degree + 1);
    }
    CeComplex::new(lie).differential(phi)
}

pub fn betti(lie: &LieAlgebra) -> Vec<usize> {
    CeComplex::new(lie).betti()
}

/// Orthogonal splitting `Λᵏ = ker Δ ⊕ im d ⊕ im δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeDecomposition {
    pub degree: usize,
    pub harmonic: Vec<Vec<Scalar>>,
    pub exact: Vec<Vec<Scalar>>,
    pub coexact: Vec<Vec<Scalar>>,
}

impl HodgeDecomposition {
    pub fn dims(&self) -> [usize; 3] {
        [self.harmonic.len(), self.exact.len(), self.coexact.len()]
    }

    /// True when the three summands are pairwise orthogonal under `gram`.
    pub fn pairwise_orthogonal(&self, gram: &QMatrix) -> bool {
        let parts = [&self.harmonic, &self.exact, &self.coexact];
        for a in 0..3 {
            for b in a + 1..3 {
                for x in parts[a] {
                    for y in parts[b] {
                        if !hermitian(gram, x, y).is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        let [h, e, c] = self.dims();
        json!({ "degree": self.degree, "harmonic": h, "exact": e, "coexact": c })
    }
}

/// The complex together with an inner product `g` on 𝔤, its induced Gram
/// matrices on forms, and the Gram adjoint `δ` of `d`.
#[derive(Clone, Debug)]
pub struct MetricComplex {
    ce: CeComplex,
    g: QMatrix,
    gram: Vec<QMatrix>,
    gram_inv: Vec<QMatrix>,
    delta: Vec<QMatrix>,
}

impl MetricComplex {
    pub fn new(ce: CeComplex, g: &QMatrix) -> Result<Self> {
        let n = ce.lie.dim();
        if g.rows() != n || g.cols() != n {
            return Err(Error::Dimension(format!("metric must be {n}x{n}")));
        }
        if !g.is_positive_definite() {
            return Err(Error::Precondition("metric is not symmetric positive definite".into()));
        }
        let ginv = g.inverse().expect("positive definite is invertible");
        let gram: Vec<QMatrix> = (0..=n).map(|k| ce.ext.compound(&ginv, k)).collect();
        let gram_inv: Vec<QMatrix> = gram.iter().map(|m| m.inverse().expect("Gram matrices are invertible")).collect();
        // δ_k: Λᵏ → Λᵏ⁻¹ is G_{k−1}⁻¹ d_{k−1}ᵀ G_k
        let delta: Vec<QMatrix> = (0..=n)
            .map(|k| {
                if k == 0 {
                    QMatrix::zeros(0, 1)
                } else {
                    gram_inv[k - 1].mul(&ce.d[k - 1].transpose()).mul(&gram[k])
                }
            })
            .collect();
        Ok(MetricComplex { ce, g: g.clone(), gram, gram_inv, delta })
    }

    pub fn from_lie(lie: &LieAlgebra, g: &QMatrix) -> Result<Self> {
        Self::new(CeComplex::new(lie), g)
    }

    pub fn ce(&self) -> &CeComplex {
        &self.ce
    }

    pub fn metric(&self) -> &QMatrix {
        &self.g
    }

    /// Gram matrix of the induced inner product on `Λᵏ`.
    pub fn gram(&self, k: usize) -> &QMatrix {
        &self.gram[k]
    }

    pub fn gram_inv(&self, k: usize) -> &QMatrix {
        &self.gram_inv[k]
    }

    /// `δ: Λᵏ → Λᵏ⁻¹`.
    pub fn delta(&self, k: usize) -> &QMatrix {
        &self.delta[k]
    }

    pub fn laplacian(&self, k: usize) -> QMatrix {
        let n = self.ce.lie.dim();
        let mut l = QMatrix::zeros(self.ce.ext.dim(k), self.ce.ext.dim(k));
        if k > 0 {
            l = l.add(&self.ce.d[k - 1].mul(&self.delta[k]));
        }
        if k < n {
            l = l.add(&self.delta[k + 1].mul(&self.ce.d[k]));
        }
        l
    }

    pub fn gram_full(&self) -> QMatrix {
        self.ce.ext.assemble(&self.gram, 0)
    }

    pub fn delta_full(&self) -> QMatrix {
        self.ce.ext.assemble(&self.delta, -1)
    }

    pub fn hodge(&self, k: usize) -> HodgeDecomposition {
        let n = self.ce.lie.dim();
        let harmonic = self.laplacian(k).kernel();
        let exact = if k > 0 { self.ce.d[k - 1].column_space() } else { Vec::new() };
        let coexact = if k < n { self.delta[k + 1].column_space() } else { Vec::new() };
        HodgeDecomposition { degree: k, harmonic, exact, coexact }
    }

    /// The vector `H` with `g(H, X) = tr ad_X`; zero iff the algebra is
    /// unimodular.
    pub fn mean_curvature_vector(&self) -> Vec<Scalar> {
        let l = &self.ce.lie;
        let t: Vec<Scalar> = (0..l.dim()).map(|i| l.ad_basis(i).trace()).collect();
        self.g.inverse().expect("metric is invertible").mul_vec(&t)
    }

    /// Formal adjoint of `d` on invariant forms,
    /// `δφ = −Σ g^{ij} ι_{e_i} ∇_{e_j} φ`, with `∇` the Levi-Civita
    /// connection. Agrees with the Gram adjoint exactly when the algebra is
    /// unimodular.
    pub fn formal_delta(&self, k: usize) -> QMatrix {
        let ext = &self.ce.ext;
        let n = ext.n();
        if k == 0 {
            return QMatrix::zeros(0, 1);
        }
        let conn = levi_civita(&self.ce.lie, &self.g).expect("metric already validated");
        let ginv = self.g.inverse().expect("metric is invertible");
        let mut out = QMatrix::zeros(ext.dim(k - 1), ext.dim(k));
        for j in 0..n {
            // ∇_{e_j} e^k = −Σ_l Γ_{jl}^k e^l
            let on_one_forms = conn.nabla(j).transpose().scale(&Scalar::from_integer((-1).into()));
            let nabla = ext.derivation(&on_one_forms, k);
            for i in 0..n {
                let c = &ginv[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let iota = ext.interior_matrix(&crate::lie::unit(n, i), k);
                out = out.sub(&iota.mul(&nabla).scale(c));
            }
        }
        out
    }

    pub fn formal_delta_full(&self) -> QMatrix {
        let n = self.ce.lie.dim();
        let blocks: Vec<QMatrix> = (0..=n).map(|k| self.formal_delta(k)).collect();
        self.ce.ext.assemble(&blocks, -1)
    }
}

pub fn hodge(lie: &LieAlgebra, g: &QMatrix, k: usize) -> Result<HodgeDecomposition> {
    if k > lie.dim() {
        return Err(Error::Dimension(format!("degree {k} exceeds dimension {}", lie.dim())));
    }
    Ok(MetricComplex::from_lie(lie, g)?.hodge(k))
}

/// Screens a Betti profile `b_0..b_{2n+1}` against
/// `b_0 ≤ … ≤ b_n = b_{n+1} ≥ … ≥ b_{2n+1}` with every `b_i > 0`.
pub fn check_betti_conditions(b: &[usize], n: usize) -> Result<Report> {
    if b.len() != 2 * n + 2 {
        return Err(Error::Dimension(format!("expected {} Betti numbers for n = {n}, got {}", 2 * n + 2, b.len())));
    }
    let mut r = Report::new("Betti screening");
    r.notes.push(NECESSARY_ONLY.to_string());
    r.set_data("betti", json!(b));
    r.set_data("label", json!(NECESSARY_ONLY));
    let zero = b.iter().position(|&x| x == 0);
    r.stage(
        "positivity",
        zero.map(|i| Witness::new(format!("b_{i} = 0"), json!({ "index": i, "value": b[i] }))),
    );
    let up = (0..n).find(|&i| b[i] > b[i + 1]);
    r.stage(
        "ascending",
        up.map(|i| Witness::new(format!("b_{i} ≤ b_{} fails ({} > {})", i + 1, b[i], b[i + 1]), json!({ "index": i }))),
    );
    r.stage(
        "middle",
        (b[n] != b[n + 1])
            .then(|| Witness::new(format!("b_{n} = b_{} fails ({} ≠ {})", n + 1, b[n], b[n + 1]), json!({ "index": n }))),
    );
    let down = (n + 1..2 * n + 1).find(|&i| b[i] < b[i + 1]);
    r.stage(
        "descending",
        down.map(|i| Witness::new(format!("b_{i} ≥ b_{} fails ({} < {})", i + 1, b[i], b[i + 1]), json!({ "index": i }))),
    );
    Ok(r)
}

/// Dimension of the span of several families, used for Hodge bookkeeping.
pub fn combined_rank(len: usize, parts: &[&[Vec<Scalar>]]) -> usize {
    let all: Vec<Vec<Scalar>> = parts.iter().flat_map(|p| p.iter().cloned()).collect();
    span_rank(len, &all)
}
