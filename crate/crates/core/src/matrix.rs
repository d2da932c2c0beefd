//! Dense matrices over an exact field, with elimination-based kernels,
//! solves and projections.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{ComplexScalar, Field, Scalar};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type QMatrix = Matrix<Scalar>;
pub type CMatrix = Matrix<ComplexScalar>;

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(Field::conj)
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    /// Matrix product. Zero entries of the left factor are skipped, which
    /// matters for the sparse operator matrices on exterior algebras.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add_ref(&a.mul_ref(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add_ref(&a.mul_ref(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add_ref(&self[(i, i)]))
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Sub-matrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// First position where two same-shaped matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self[(i, j)] != other[(i, j)])
    }

    /// Reduced row echelon form. Pivots are chosen at the first column with
    /// a nonzero entry at or below the current row, taking the smallest such
    /// row index, so the output depends only on the input.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = F::one().div_ref(&m[(r, c)]);
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul_ref(&inv);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let delta = f.mul_ref(&m[(r, j)]);
                    m[(i, j)] = m[(i, j)].sub_ref(&delta);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column in increasing
    /// column order. Each vector has a 1 at its free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![F::zero(); self.cols];
                v[free] = F::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, free)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self · x = b`. Free variables are set to zero. Returns `None`
    /// when `b` is outside the column space.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = F::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Determinant by Gaussian elimination over the field. Zero for a
    /// non-square matrix is not meaningful, so that panics.
    pub fn determinant(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det.mul_ref(&piv);
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].div_ref(&piv);
                for j in c..n {
                    let delta = f.mul_ref(&m[(c, j)]);
                    m[(i, j)] = m[(i, j)].sub_ref(&delta);
                }
            }
        }
        det
    }

    /// Basis of the column space, taken from the pivot columns.
    pub fn column_space(&self) -> Vec<Vec<F>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of a list of vectors of equal length.
pub fn span_rank<F: Field>(len: usize, vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(len, vectors).rank()
}

/// True when the two families span the same subspace.
pub fn same_span<F: Field>(len: usize, a: &[Vec<F>], b: &[Vec<F>]) -> bool {
    let ra = span_rank(len, a);
    let rb = span_rank(len, b);
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    ra == rb && span_rank(len, &all) == ra
}

/// Hermitian form `x† G y`.
pub fn hermitian<F: Field>(gram: &Matrix<F>, x: &[F], y: &[F]) -> F {
    let gy = gram.mul_vec(y);
    x.iter().zip(&gy).fold(F::zero(), |acc, (a, b)| acc.add_ref(&a.conj().mul_ref(b)))
}

/// Orthogonal projection of `v` onto the span of `basis` with respect to the
/// (Hermitian) inner product `gram`. Solves the normal system
/// `(B† G B) c = B† G v` and returns `B c`.
pub fn gram_projection<F: Field>(basis: &[Vec<F>], gram: &Matrix<F>, v: &[F]) -> Result<Vec<F>> {
    let n = v.len();
    if gram.rows() != n || gram.cols() != n {
        return Err(Error::Dimension("Gram matrix does not match vector length".into()));
    }
    if basis.is_empty() {
        return Ok(vec![F::zero(); n]);
    }
    if basis.iter().any(|b| b.len() != n) {
        return Err(Error::Dimension("subspace basis vector has wrong length".into()));
    }
    let b = Matrix::from_columns(n, basis);
    let bh = b.adjoint();
    let normal = bh.mul(&gram.mul(&b));
    let rhs = bh.mul_vec(&gram.mul_vec(v));
    let inv = normal
        .inverse()
        .ok_or_else(|| Error::Singular("subspace basis is not linearly independent".into()))?;
    let coeffs = inv.mul_vec(&rhs);
    Ok(b.mul_vec(&coeffs))
}

impl QMatrix {
    /// Scales each row by the lcm of its denominators, giving an integer matrix
    /// with the same row space and the same leading-minor signs.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| (x * Scalar::from_integer(l.clone())).to_integer()).collect()
            })
            .collect()
    }

    /// Fraction-free (Bareiss) elimination without row exchanges. Returns the
    /// successive pivots, which are the leading principal minors of the
    /// integer-scaled matrix, stopping at the first vanishing one.
    fn bareiss_leading_pivots(&self) -> Vec<BigInt> {
        let n = self.rows.min(self.cols);
        let mut a = self.integer_rows();
        let mut prev = BigInt::one();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let p = a[k][k].clone();
            pivots.push(p.clone());
            if p.is_zero() {
                break;
            }
            for i in k + 1..self.rows {
                for j in k + 1..self.cols {
                    let v = (&a[i][j] * &p - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = p;
        }
        pivots
    }

    /// Signs of the leading principal minors; for positive row scalings these
    /// agree with the signs of the minors of `self`.
    pub fn leading_minor_signs(&self) -> Vec<i32> {
        let pivots = self.bareiss_leading_pivots();
        let mut signs: Vec<i32> = pivots
            .iter()
            .map(|p| if p.is_zero() { 0 } else if p.is_positive() { 1 } else { -1 })
            .collect();
        signs.resize(self.rows.min(self.cols), 0);
        signs
    }

    /// Sylvester's criterion, applied exactly.
    pub fn is_positive_definite(&self) -> bool {
        self.is_square() && self == &self.transpose() && self.leading_minor_signs().iter().all(|&s| s > 0)
    }

    /// Determinant via Bareiss elimination with row pivoting.
    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Scalar::one();
        }
        let scale = (0..n).fold(Scalar::one(), |acc, i| {
            let l = self.row(i).iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
            acc * Scalar::from_integer(l)
        });
        let mut a = self.integer_rows();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Scalar::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Scalar::from_integer(sign * &a[n - 1][n - 1]) / scale
    }

    pub fn to_complex(&self) -> CMatrix {
        self.map(|x| ComplexScalar::from_scalar(x.clone()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(Field::to_json).collect()))
                .collect(),
        )
    }
}

impl CMatrix {
    /// Real part, or `None` if some entry has a nonzero imaginary part.
    pub fn to_real(&self) -> Option<QMatrix> {
        if self.data.iter().any(|z| !z.im.is_zero()) {
            return None;
        }
        Some(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.re.clone()).collect() })
    }
}
