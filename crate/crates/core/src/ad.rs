//! Forward-mode automatic differentiation over complex numbers.
//!
//! - [`Dual`] carries one directional derivative; it powers the Newton
//!   Jacobian of the fully discrete stepper and the Leibniz expansion of
//!   Poisson brackets.
//! - [`Jet`] carries a truncated Taylor series in one real variable; it
//!   evaluates the semi-discrete closed forms together with their
//!   x-derivatives.
//!
//! Lattice formulas are written once against the [`Field`] trait and then
//! evaluated over plain complex numbers or over either AD type.

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::C64;

/// Minimal field interface shared by [`C64`], [`Dual`] and [`Jet`].
pub trait Field:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Zero
    + One
{
    /// Lifts a constant.
    fn cst(c: C64) -> Self;
    /// The primal (value) part.
    fn value(&self) -> C64;

    /// Lifts a real constant.
    fn real(r: f64) -> Self {
        Self::cst(C64::new(r, 0.0))
    }
    /// Integer power by repeated squaring (negative powers via division).
    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

impl Field for C64 {
    fn cst(c: C64) -> Self {
        c
    }
    fn value(&self) -> C64 {
        *self
    }
}

// ═══════════════════════════════════════════════════════════════════════════
// Dual numbers
// ═══════════════════════════════════════════════════════════════════════════

/// Complex dual number `re + du·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dual {
    /// Primal value.
    pub re: C64,
    /// Directional derivative.
    pub du: C64,
}

impl Dual {
    /// A dual number with the given parts.
    pub const fn new(re: C64, du: C64) -> Self {
        Self { re, du }
    }

    /// An independent variable: derivative seed 1.
    pub fn var(re: C64) -> Self {
        Self { re, du: C64::one() }
    }
}

impl Field for Dual {
    fn cst(c: C64) -> Self {
        Self { re: c, du: C64::zero() }
    }
    fn value(&self) -> C64 {
        self.re
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Self::cst(C64::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.du.is_zero()
    }
}

impl One for Dual {
    fn one() -> Self {
        Self::cst(C64::one())
    }
}

impl Add for Dual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.du + o.du)
    }
}

impl Sub for Dual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.du - o.du)
    }
}

impl Mul for Dual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re, self.du * o.re + self.re * o.du)
    }
}

impl Div for Dual {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = o.re.inv();
        Self::new(self.re * inv, (self.du * o.re - self.re * o.du) * inv * inv)
    }
}

impl Neg for Dual {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.du)
    }
}

impl AddAssign for Dual {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Dual {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for Dual {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

// ═══════════════════════════════════════════════════════════════════════════
// Taylor jets
// ═══════════════════════════════════════════════════════════════════════════

/// Truncated Taylor series `Σ_{i<K} c_i h^i` around a point.
///
/// `c_i` is the i-th Taylor coefficient, i.e. `f^{(i)}/i!`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const K: usize> {
    /// Taylor coefficients.
    pub c: [C64; K],
}

impl<const K: usize> Jet<K> {
    /// Jet of the exponential `A·e^{s(x₀+h)}` at `x₀`, i.e. `A e^{s x₀} Σ sⁱhⁱ/i!`.
    pub fn exp_linear(amplitude: C64, rate: C64, x0: f64) -> Self {
        let mut c = [C64::zero(); K];
        let mut term = amplitude * (rate * x0).exp();
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = term;
            term = term * rate / (i as f64 + 1.0);
        }
        Self { c }
    }

    /// x-derivative. The top coefficient becomes unknown and is set to 0,
    /// so each differentiation costs one order of accuracy.
    pub fn deriv(&self) -> Self {
        let mut c = [C64::zero(); K];
        for (i, slot) in c.iter_mut().take(K.saturating_sub(1)).enumerate() {
            *slot = self.c[i + 1] * (i as f64 + 1.0);
        }
        Self { c }
    }

    /// `k`-th derivative value `f^{(k)}(x₀)`.
    pub fn derivative(&self, k: usize) -> C64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }
}

impl<const K: usize> Field for Jet<K> {
    fn cst(v: C64) -> Self {
        let mut c = [C64::zero(); K];
        c[0] = v;
        Self { c }
    }
    fn value(&self) -> C64 {
        self.c[0]
    }
}

impl<const K: usize> Zero for Jet<K> {
    fn zero() -> Self {
        Self::cst(C64::zero())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }
}

impl<const K: usize> One for Jet<K> {
    fn one() -> Self {
        Self::cst(C64::one())
    }
}

impl<const K: usize> Add for Jet<K> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.c.iter_mut().zip(o.c) {
            *a += b;
        }
        self
    }
}

impl<const K: usize> Sub for Jet<K> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.c.iter_mut().zip(o.c) {
            *a -= b;
        }
        self
    }
}

impl<const K: usize> Mul for Jet<K> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut c = [C64::zero(); K];
        for i in 0..K {
            for j in 0..K - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Self { c }
    }
}

impl<const K: usize> Div for Jet<K> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        // q = a / b  ⇔  q_k = (a_k − Σ_{j≥1} b_j q_{k−j}) / b_0
        let inv = o.c[0].inv();
        let mut q = [C64::zero(); K];
        for k in 0..K {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= o.c[j] * q[k - j];
            }
            q[k] = acc * inv;
        }
        Self { c: q }
    }
}

impl<const K: usize> Neg for Jet<K> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in self.c.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl<const K: usize> AddAssign for Jet<K> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<const K: usize> SubAssign for Jet<K> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<const K: usize> MulAssign for Jet<K> {
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

/// Generic counterpart of [`crate::error::guard`]: fails when the primal
/// part of `value` is within [`crate::EPS_SING`] of zero.
#[inline]
pub fn guard<F: Field>(value: F, what: &'static str) -> crate::Result<F> {
    crate::error::guard(value.value(), what).map(|_| value)
}

/// Magnitude helper usable in generic code.
pub fn norm<F: Field>(v: F) -> f64 {
    v.value().norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn dual_quotient_rule() {
        // f(x) = x² / (1 + x) at x = 2: f' = (2x(1+x) − x²)/(1+x)² = 8/9
        let x = Dual::var(c64(2.0, 0.0));
        let f = x * x / (Dual::one() + x);
        assert!((f.du - c64(8.0 / 9.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn jet_exp_and_division() {
        let k = c64(0.7, -0.2);
        let j: Jet<6> = Jet::exp_linear(C64::one(), -k, 0.3);
        // ∂x e^{−kx} = −k e^{−kx}
        assert!((j.derivative(1) + k * j.value()).norm() < 1e-14);
        let r = Jet::<6>::one() / j;
        let back = r * j;
        for i in 1..6 {
            assert!(back.c[i].norm() < 1e-14);
        }
    }

    #[test]
    fn powi_negative() {
        let v = c64(1.5, 0.5);
        assert!((Field::powi(v, -3) * v * v * v - C64::one()).norm() < 1e-14);
    }
}
