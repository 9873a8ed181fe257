//! Laurent polynomials in the spectral parameter with complex coefficients,
//! and square matrices of them.
//!
//! Coefficients are `f64` complex numbers. After every arithmetic operation
//! coefficients smaller than [`PRUNE_REL`] times the largest one are dropped,
//! so "exact" cancellations really leave an empty polynomial behind.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::dense::CMat;
use crate::{Error, Result, C64};

/// Relative pruning threshold applied after each arithmetic operation.
pub const PRUNE_REL: f64 = 1e-15;

/// Relative tolerance behind the "exact zero" claims of the library.
pub const EXACT_REL: f64 = 1e-13;

// ═══════════════════════════════════════════════════════════════════════════
// LaurentPoly
// ═══════════════════════════════════════════════════════════════════════════

/// Finite Laurent polynomial `Σ c_k λ^k`.
///
/// No stored coefficient is exactly zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, C64>,
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// A constant polynomial.
    pub fn constant(c: C64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c λ^k`.
    pub fn monomial(c: C64, k: i32) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != C64::zero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    /// The spectral variable `λ` itself.
    pub fn var() -> Self {
        Self::monomial(C64::new(1.0, 0.0), 1)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i32, C64)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<i32, C64> = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert_with(C64::zero) += c;
        }
        let mut p = Self { coeffs };
        p.prune();
        p
    }

    /// Coefficient of `λ^k` (zero when absent).
    pub fn coeff(&self, k: i32) -> C64 {
        self.coeffs.get(&k).copied().unwrap_or_else(C64::zero)
    }

    /// Iterates over stored `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, C64)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, *c))
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest and highest exponents, or `None` for the zero polynomial.
    pub fn exponent_range(&self) -> Option<(i32, i32)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: C64) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * s)))
    }

    /// Substitutes `λ → λ + shift` (only for polynomials without negative powers).
    pub fn shift_arg(&self, shift: C64) -> Result<Self> {
        let mut out = Self::zero();
        let base = Self::from_terms([(1, C64::new(1.0, 0.0)), (0, shift)]);
        for (k, c) in self.terms() {
            if k < 0 {
                return Err(Error::DegenerateEvaluation);
            }
            let mut power = Self::one();
            for _ in 0..k {
                power = &power * &base;
            }
            out = &out + &power.scale(c);
        }
        Ok(out)
    }

    /// Evaluates at `λ`. Fails with [`Error::DegenerateEvaluation`] at `λ = 0`
    /// when negative powers are present.
    pub fn eval(&self, lambda: C64) -> Result<C64> {
        let mut acc = C64::zero();
        for (k, c) in self.terms() {
            if k < 0 && lambda == C64::zero() {
                return Err(Error::DegenerateEvaluation);
            }
            acc += c * lambda.powi(k);
        }
        Ok(acc)
    }

    fn prune(&mut self) {
        let max = self.max_abs();
        let cut = max * PRUNE_REL;
        self.coeffs.retain(|_, c| {
            let m = c.norm();
            m != 0.0 && m >= cut
        });
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms().map(|(k, c)| (k, -c))))
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut terms = Vec::with_capacity(self.coeffs.len() * rhs.coeffs.len());
        for (ka, ca) in self.terms() {
            for (kb, cb) in rhs.terms() {
                terms.push((ka + kb, ca * cb));
            }
        }
        LaurentPoly::from_terms(terms)
    }
}

impl From<C64> for LaurentPoly {
    fn from(c: C64) -> Self {
        Self::constant(c)
    }
}

// ═══════════════════════════════════════════════════════════════════════════
// LaurentMat
// ═══════════════════════════════════════════════════════════════════════════

/// Square matrix whose entries are Laurent polynomials, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMat {
    dim: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMat {
    /// The `dim × dim` zero matrix.
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![LaurentPoly::zero(); dim * dim] }
    }

    /// The `dim × dim` identity.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    /// Builds a 2×2 matrix from its four entries.
    pub fn from_2x2(a: LaurentPoly, b: LaurentPoly, c: LaurentPoly, d: LaurentPoly) -> Self {
        Self { dim: 2, entries: vec![a, b, c, d] }
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::ShapeError { expected: dim * dim, found: entries.len() });
        }
        Ok(Self { dim, entries })
    }

    /// Constant matrix with the given numeric entries.
    pub fn from_cmat(m: &CMat) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::ShapeError { expected: m.rows(), found: m.cols() });
        }
        let dim = m.rows();
        let entries = (0..dim * dim).map(|k| LaurentPoly::constant(m[(k / dim, k % dim)])).collect();
        Ok(Self { dim, entries })
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.dim + j]
    }

    /// Replaces entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.dim + j] = p;
    }

    /// Iterates over all entries row by row.
    pub fn entries(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.entries.iter()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::ShapeError { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, entries })
    }

    /// Entry-wise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, entries })
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Multiplies every entry by the scalar polynomial `p`.
    pub fn scale(&self, p: &LaurentPoly) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|e| e * p).collect() }
    }

    /// Kronecker product `self ⊗ other` (row-major tensor ordering).
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Determinant of a 2×2 matrix: `A₁₁A₂₂ − A₁₂A₂₁`.
    pub fn det2(&self) -> Result<LaurentPoly> {
        if self.dim != 2 {
            return Err(Error::ShapeError { expected: 2, found: self.dim });
        }
        Ok(&(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)))
    }

    /// Trace as a Laurent polynomial.
    pub fn trace(&self) -> LaurentPoly {
        (0..self.dim).fold(LaurentPoly::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Numeric matrix at the spectral point `λ`.
    pub fn eval(&self, lambda: C64) -> Result<CMat> {
        let n = self.dim;
        let mut out = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.get(i, j).eval(lambda)?;
            }
        }
        Ok(out)
    }

    /// Largest coefficient magnitude over all entries.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.max_abs()))
    }
}

// ═══════════════════════════════════════════════════════════════════════════
// Zero tests
// ═══════════════════════════════════════════════════════════════════════════

/// Outcome of a residual test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroCheck {
    /// Whether the residual is below the (scaled) tolerance.
    pub pass: bool,
    /// Largest coefficient magnitude found.
    pub max_residual: f64,
}

/// Checks that every coefficient of `a` is below `tol`.
pub fn approx_zero(a: &LaurentMat, tol: f64) -> ZeroCheck {
    approx_zero_scaled(a, tol, 1.0)
}

/// Checks that every coefficient of `a` is below `tol · max(scale, 1)`,
/// where `scale` is the largest magnitude among the operands that produced `a`.
pub fn approx_zero_scaled(a: &LaurentMat, tol: f64, scale: f64) -> ZeroCheck {
    let max_residual = a.max_abs();
    ZeroCheck { pass: max_residual <= tol * scale.max(1.0), max_residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn lam_plus(c: f64) -> LaurentPoly {
        LaurentPoly::from_terms([(1, c64(1.0, 0.0)), (0, c64(c, 0.0))])
    }

    #[test]
    fn difference_of_squares() {
        let p = &lam_plus(1.0) * &lam_plus(-1.0);
        assert_eq!(p, LaurentPoly::from_terms([(2, c64(1.0, 0.0)), (0, c64(-1.0, 0.0))]));
    }

    #[test]
    fn eval_and_pole() {
        let p = LaurentPoly::from_terms([(1, c64(1.0, 0.0)), (-1, c64(1.0, 0.0))]);
        assert_eq!(p.eval(c64(1.0, 0.0)).unwrap(), c64(2.0, 0.0));
        let q = LaurentPoly::monomial(c64(1.0, 0.0), -1);
        assert_eq!(q.eval(C64::zero()), Err(Error::DegenerateEvaluation));
    }

    #[test]
    fn kron_identity_and_cancellation() {
        let i2 = LaurentMat::identity(2);
        assert_eq!(i2.kron(&i2), LaurentMat::identity(4));
        let a = LaurentMat::from_2x2(lam_plus(0.3), LaurentPoly::var(), lam_plus(2.0), LaurentPoly::one());
        let z = a.sub(&a).unwrap();
        assert!(approx_zero(&z, 1e-30).pass);
        let id = approx_zero(&i2, 1e-12);
        assert!(!id.pass);
        assert_eq!(id.max_residual, 1.0);
    }

    #[test]
    fn shape_errors() {
        let a = LaurentMat::identity(2);
        let b = LaurentMat::identity(4);
        assert!(matches!(a.mul(&b), Err(Error::ShapeError { .. })));
        assert!(matches!(b.det2(), Err(Error::ShapeError { .. })));
    }

    #[test]
    fn shift_argument() {
        let p = &lam_plus(0.0) * &lam_plus(0.0); // λ²
        let s = p.shift_arg(c64(-1.0, 0.0)).unwrap(); // (λ−1)²
        assert_eq!(s.coeff(2), c64(1.0, 0.0));
        assert_eq!(s.coeff(1), c64(-2.0, 0.0));
        assert_eq!(s.coeff(0), c64(1.0, 0.0));
    }
}
