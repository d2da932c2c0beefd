//! Univariate polynomials over ℚ: characteristic polynomials, square-free
//! decomposition and Sturm root counting.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::scalar::{int, Scalar};

/// Dense polynomial, coefficients in increasing degree. No trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_default();
                    let b = other.coeffs.get(i).cloned().unwrap_or_default();
                    a - b
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / &lc;
            for (k, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + k] -= &f * c;
            }
            quot[shift] = f;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: returns `f_1, f_2, …` with
    /// `p = c · Π f_i^i`, each `f_i` monic and square-free.
    pub fn square_free_decomposition(&self) -> Vec<Poly> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let c = df.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut factors = Vec::new();
        loop {
            let g = b.gcd(&d);
            factors.push(g.clone());
            b = b.div_rem(&g).0;
            if b.degree() == Some(0) {
                break;
            }
            let c = d.div_rem(&g).0;
            d = c.sub(&b.derivative());
        }
        while factors.last().is_some_and(|p| p.degree() == Some(0)) {
            factors.pop();
        }
        factors
    }

    /// Sturm sequence `p, p', -rem(p, p'), …`.
    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        if seq.last().unwrap().is_zero() {
            seq.pop();
        }
        seq
    }

    /// Distinct real roots, counted by sign changes of the Sturm sequence of
    /// the square-free part between −∞ and +∞.
    pub fn count_real_roots(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::Precondition("zero polynomial has no finite root count".into()));
        }
        if self.degree() == Some(0) {
            return Ok(0);
        }
        let sf = self.div_rem(&self.gcd(&self.derivative())).0;
        let seq = sf.sturm_sequence();
        let at = |neg: bool| -> usize {
            let signs: Vec<i32> = seq
                .iter()
                .map(|p| {
                    let d = p.degree().unwrap_or(0);
                    let s = if p.leading().is_positive() { 1 } else { -1 };
                    if neg && d % 2 == 1 {
                        -s
                    } else {
                        s
                    }
                })
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        Ok(at(true) - at(false))
    }

    /// Real roots counted with multiplicity, via the square-free decomposition.
    pub fn count_real_roots_with_multiplicity(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::Precondition("zero polynomial".into()));
        }
        let mut total = 0;
        for (i, f) in self.square_free_decomposition().iter().enumerate() {
            total += (i + 1) * f.count_real_roots()?;
        }
        Ok(total)
    }

    /// True when every complex root is real.
    pub fn all_roots_real(&self) -> Result<bool> {
        Ok(self.count_real_roots_with_multiplicity()? == self.degree().unwrap_or(0))
    }

    /// Distinct rational roots, in increasing order (rational root theorem).
    pub fn rational_roots(&self) -> Vec<Scalar> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut p = self.clone();
        if p.coeffs[0].is_zero() {
            roots.push(Scalar::zero());
            let k = p.coeffs.iter().position(|c| !c.is_zero()).unwrap();
            p = Poly::new(p.coeffs[k..].to_vec());
        }
        if p.degree().unwrap_or(0) > 0 {
            let l = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> =
                p.coeffs.iter().map(|c| (c * Scalar::from_integer(l.clone())).to_integer()).collect();
            let a0 = ints[0].abs();
            let an = ints.last().unwrap().abs();
            for num in divisors(&a0) {
                for den in divisors(&an) {
                    for s in [1i64, -1] {
                        let cand = Scalar::new(&num * BigInt::from(s), den.clone());
                        if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "λ")?,
                _ => write!(f, "λ^{k}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(λI − A)` by the Faddeev–LeVerrier
/// recurrence. Monic of degree `n`.
pub fn char_poly(m: &QMatrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut mk = QMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        let c = coeffs[n - k + 1].clone();
        for i in 0..n {
            next[(i, i)] += &c;
        }
        mk = next;
        coeffs[n - k] = -m.mul(&mk).trace() / int(k as i64);
    }
    Ok(Poly::new(coeffs))
}

/// Evaluates a polynomial at a square matrix (Horner).
pub fn eval_matrix(p: &Poly, m: &QMatrix) -> QMatrix {
    let n = m.rows();
    let mut acc = QMatrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m);
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}
