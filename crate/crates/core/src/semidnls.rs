//! The semi-discrete NLS system: continuous space `x`, discrete time `a`.
//!
//! Lax pair:
//!
//! ```text
//! U(a)  = [[λ, û_a], [u_{a−1}, 0]]
//! V¹(a) = [[λ + 1 + û_a u_a, û_a], [u_a, 1]]
//! V²(a) = [[λ² + λℕ² + 𝔸, λû_a + 𝔹], [λu_a + ℂ, 𝔻]]
//! ```
//!
//! with compatibility `∂ₓV(a) = U(a+1)V(a) − V(a)U(a)` and
//! `𝔹 = (û' − û²u')/(1 − uû)`, `ℂ = (u²û' − u')/(1 − uû)`, `𝔻 = 1 + ûu`,
//! `ℕ² = (u𝔹 + ûℂ)/𝔻`, `𝔸 = (1 + 𝔹ℂ)/𝔻` (all at time `a`).
//!
//! Exact solutions come from the semi-discrete heat flow through a Darboux
//! map; all x-derivatives are carried exactly by Taylor jets.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::ad::{self, Field, Jet};
use crate::algebra::{LaurentMat, LaurentPoly};
use crate::lattice::SweepResult;
use crate::{Error, Result, C64};

/// Jet order used for all semi-discrete evaluations.
pub const JET_ORDER: usize = 8;

/// Taylor jet in `x` used throughout this module.
pub type J = Jet<JET_ORDER>;

// ═══════════════════════════════════════════════════════════════════════════
// Linear seed flows
// ═══════════════════════════════════════════════════════════════════════════

/// Linear flow obeyed by the seed function `û⁰_a(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemiFlow {
    /// `û⁰_{a+1} − û⁰_a = ∂ₓ²û⁰_a`; modes `e^{−kx + Λa}` with `Λ = ln(1 + k²)`.
    Heat,
    /// `û⁰_{a+1} − û⁰_a = ∂ₓû⁰_a`; modes with `Λ = ln(1 − k)`.
    Transport,
}

impl SemiFlow {
    fn growth(self, k: C64) -> C64 {
        match self {
            SemiFlow::Heat => C64::one() + k * k,
            SemiFlow::Transport => C64::one() - k,
        }
    }
}

/// One mode `c e^{−kx + Λa}` of a linear seed flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiMode {
    /// Amplitude.
    pub c: C64,
    /// Wavenumber.
    pub k: C64,
    /// Time rate `Λ`.
    pub rate: C64,
}

/// Tolerance on a supplied dispersion relation.
pub const DISPERSION_TOL: f64 = 1e-12;

impl SemiMode {
    /// Mode with `Λ` fixed by the flow's dispersion relation.
    pub fn new(c: C64, k: C64, flow: SemiFlow) -> Result<Self> {
        let g = flow.growth(k);
        if g.norm() < crate::EPS_SING {
            return Err(Error::InvalidDispersion);
        }
        Ok(Self { c, k, rate: g.ln() })
    }

    /// Mode with explicit `Λ`, validated by `e^Λ` against the flow.
    pub fn with_rate(c: C64, k: C64, rate: C64, flow: SemiFlow) -> Result<Self> {
        let g = flow.growth(k);
        if (rate.exp() - g).norm() > DISPERSION_TOL * (1.0 + g.norm()) {
            return Err(Error::InvalidDispersion);
        }
        Ok(Self { c, k, rate })
    }

    /// Heat mode of period `M` in time: `Λ = 2πi·m/M`, `k = ±√(e^Λ − 1)`.
    pub fn time_periodic(c: C64, m: i32, period: usize, plus: bool) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParam("time period must be positive".into()));
        }
        let rate = C64::new(0.0, core::f64::consts::TAU * m as f64 / period as f64);
        let k = (rate.exp() - C64::one()).sqrt();
        Self::with_rate(c, if plus { k } else { -k }, rate, SemiFlow::Heat)
    }
}

/// Seed `û⁰_a(x) = Σ c e^{−kx + Λa}` together with the Darboux constant `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiSolution {
    modes: Vec<SemiMode>,
    g: C64,
}

impl SemiSolution {
    /// Validated constructor.
    pub fn new(modes: Vec<SemiMode>, g: C64) -> Result<Self> {
        crate::error::guard(g, "g")?;
        if modes.is_empty() {
            return Err(Error::InvalidParam("at least one mode is required".into()));
        }
        Ok(Self { modes, g })
    }

    /// The modes.
    pub fn modes(&self) -> &[SemiMode] {
        &self.modes
    }

    /// Jet of `û⁰_a` at `x`.
    pub fn seed(&self, a: i64, x: f64) -> J {
        let mut acc = J::zero();
        for md in &self.modes {
            acc += J::exp_linear(md.c * (md.rate * a as f64).exp(), -md.k, x);
        }
        acc
    }

    /// `u_a = g / û⁰_{a+1}`.
    pub fn u(&self, a: i64, x: f64) -> Result<J> {
        let f = ad::guard(self.seed(a + 1, x), "û⁰")?;
        Ok(J::cst(self.g) / f)
    }

    /// `û_a = −(f f'' − f'²)/(g f)` with `f = û⁰_a`.
    pub fn u_hat(&self, a: i64, x: f64) -> Result<J> {
        let f = ad::guard(self.seed(a, x), "û⁰")?;
        let d1 = f.deriv();
        let d2 = d1.deriv();
        Ok(-(f * d2 - d1 * d1) / (J::cst(self.g) * f))
    }

    /// All `V²` entries at time `a`.
    pub fn site(&self, a: i64, x: f64) -> Result<SemiSite> {
        site_from(self.u(a, x)?, self.u_hat(a, x)?)
    }
}

// ═══════════════════════════════════════════════════════════════════════════
// Site formulas and residuals
// ═══════════════════════════════════════════════════════════════════════════

/// Fields of `V²(a)` as jets in `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiSite {
    /// `u_a`.
    pub u: J,
    /// `û_a`.
    pub u_hat: J,
    /// `𝔹_a`.
    pub b: J,
    /// `ℂ_a`.
    pub c: J,
    /// `𝔻_a`.
    pub d: J,
    /// `ℕ²_a`.
    pub n2: J,
    /// `𝔸_a`.
    pub a: J,
}

/// Builds the `V²` fields from `u_a` and `û_a`.
pub fn site_from(u: J, u_hat: J) -> Result<SemiSite> {
    let one = J::one();
    let den = ad::guard(one - u * u_hat, "1 − uû")?;
    let (du, duh) = (u.deriv(), u_hat.deriv());
    let b = (duh - u_hat * u_hat * du) / den;
    let c = (u * u * duh - du) / den;
    let d = one + u_hat * u;
    let dg = ad::guard(d, "1 + ûu")?;
    Ok(SemiSite { u, u_hat, b, c, d, n2: (u * b + u_hat * c) / dg, a: (one + b * c) / dg })
}

/// Names of the seven order-2 residuals, in report order.
pub const EQUATION_NAMES: [&str; 7] = ["f1", "f2", "f3", "f4", "dg1", "dg2", "dg3"];

/// `|LHS − RHS|` of the seven order-2 equations at time `a`, point `x`.
pub fn residuals_equations(sol: &SemiSolution, a: i64, x: f64) -> Result<[f64; 7]> {
    let s = sol.site(a, x)?;
    let uh_next = sol.u_hat(a + 1, x)?;
    let u_prev = sol.u(a - 1, x)?;
    let (u, uh) = (s.u, s.u_hat);
    let r = [
        s.b - (uh.deriv() + s.n2 * uh),
        s.b.deriv() - (uh_next * s.d - s.a * uh),
        s.c - (-u.deriv() + u * s.n2),
        s.c.deriv() - (u * s.a - s.d * u_prev),
        s.d.deriv() - (u * s.b - s.c * uh),
        s.n2.deriv() - (uh_next * u - uh * u_prev),
        s.a.deriv() - (uh_next * s.c - s.b * u_prev),
    ];
    Ok(r.map(|v| v.value().norm()))
}

/// `|LHS − RHS|` of the two order-1 (transport) equations:
/// `∂ₓû_a = û_{a+1} − û_a − û_a²u_a` and `∂ₓu_a = u_a − u_{a−1} + u_a²û_a`.
pub fn residuals_transport(sol: &SemiSolution, a: i64, x: f64) -> Result<[f64; 2]> {
    let (u, uh) = (sol.u(a, x)?, sol.u_hat(a, x)?);
    let tr_hat = sol.u_hat(a + 1, x)? - uh - uh * uh * u - uh.deriv();
    let tr_u = u - sol.u(a - 1, x)? + u * u * uh - u.deriv();
    Ok([tr_hat.value().norm(), tr_u.value().norm()])
}

// ═══════════════════════════════════════════════════════════════════════════
// Lax matrices
// ═══════════════════════════════════════════════════════════════════════════

/// Selects derivative order `k` of a jet (`0` for the value).
fn part(j: J, k: usize) -> C64 {
    j.derivative(k)
}

/// `U(a)` at `x` as a Laurent matrix in λ.
pub fn build_u(sol: &SemiSolution, a: i64, x: f64) -> Result<LaurentMat> {
    Ok(LaurentMat::from_2x2(
        LaurentPoly::var(),
        LaurentPoly::constant(sol.u_hat(a, x)?.value()),
        LaurentPoly::constant(sol.u(a - 1, x)?.value()),
        LaurentPoly::zero(),
    ))
}

/// Order of the time operator.
pub use crate::dnls::VOrder;

/// `V(a)` (k = 0) or `∂ₓV(a)` (k = 1) at `x`.
pub fn build_v_part(sol: &SemiSolution, a: i64, x: f64, order: VOrder, k: usize) -> Result<LaurentMat> {
    let s = sol.site(a, x)?;
    let lam_k = if k == 0 { C64::one() } else { C64::zero() };
    let p = |j: J| part(j, k);
    Ok(match order {
        VOrder::One => LaurentMat::from_2x2(
            LaurentPoly::from_terms([(1, lam_k), (0, lam_k + p(s.u_hat * s.u))]),
            LaurentPoly::constant(p(s.u_hat)),
            LaurentPoly::constant(p(s.u)),
            LaurentPoly::constant(lam_k),
        ),
        VOrder::Two => LaurentMat::from_2x2(
            LaurentPoly::from_terms([(2, lam_k), (1, p(s.n2)), (0, p(s.a))]),
            LaurentPoly::from_terms([(1, p(s.u_hat)), (0, p(s.b))]),
            LaurentPoly::from_terms([(1, p(s.u)), (0, p(s.c))]),
            LaurentPoly::constant(p(s.d)),
        ),
    })
}

/// Coefficient-wise max norm of `∂ₓV(a) − U(a+1)V(a) + V(a)U(a)`.
pub fn residual_zero_curvature(sol: &SemiSolution, a: i64, x: f64, order: VOrder) -> Result<f64> {
    let v = build_v_part(sol, a, x, order, 0)?;
    let dv = build_v_part(sol, a, x, order, 1)?;
    let rhs = build_u(sol, a + 1, x)?.mul(&v)?.sub(&v.mul(&build_u(sol, a, x)?)?)?;
    Ok(dv.sub(&rhs)?.max_abs())
}

// ═══════════════════════════════════════════════════════════════════════════
// Sweeps and charges
// ═══════════════════════════════════════════════════════════════════════════

/// Evenly spaced sample points in `[x0, x1]`.
pub fn x_grid(x0: f64, x1: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![x0],
        p => (0..p).map(|i| x0 + (x1 - x0) * i as f64 / (p - 1) as f64).collect(),
    }
}

/// Sweeps a per-site check over `a ∈ times` and `x ∈ xs`.
/// The argmax reports `(x index, a)`.
pub fn sweep(
    times: core::ops::Range<i64>,
    xs: &[f64],
    mut check: impl FnMut(i64, f64) -> Result<f64>,
) -> Result<SweepResult> {
    let mut out = SweepResult::new();
    for a in times {
        for (i, &x) in xs.iter().enumerate() {
            out.record((i as isize, a as isize), check(a, x)?);
        }
    }
    Ok(out)
}

/// Charges `H₁ = Σ_a ℕ²_a` and `H₂ = Σ_a [û_a u_{a−1} + 𝔸_a − ½(ℕ²_a)²]`
/// over one time period `0..M`, as jets in `x`.
pub fn charges(sol: &SemiSolution, period: usize, x: f64) -> Result<(J, J)> {
    let (mut h1, mut h2) = (J::zero(), J::zero());
    let half = J::real(0.5);
    for a in 0..period as i64 {
        let s = sol.site(a, x)?;
        h1 += s.n2;
        h2 += s.u_hat * sol.u(a - 1, x)? + s.a - half * s.n2 * s.n2;
    }
    Ok((h1, h2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn heat_pair() -> SemiSolution {
        SemiSolution::new(
            alloc::vec![
                SemiMode::new(C64::one(), c64(0.4, 0.1), SemiFlow::Heat).unwrap(),
                SemiMode::new(c64(0.5, -0.2), c64(-0.3, 0.25), SemiFlow::Heat).unwrap(),
            ],
            c64(0.8, 0.3),
        )
        .unwrap()
    }

    #[test]
    fn heat_solution_satisfies_order_two_equations() {
        let sol = heat_pair();
        let xs = x_grid(-1.0, 1.0, 5);
        let eq =
            sweep(0..4, &xs, |a, x| Ok(residuals_equations(&sol, a, x)?.iter().fold(0.0, |m, v| m.max(*v)))).unwrap();
        assert!(eq.max_residual < 1e-10, "{eq:?}");
        let zc = sweep(0..4, &xs, |a, x| residual_zero_curvature(&sol, a, x, VOrder::Two)).unwrap();
        assert!(zc.max_residual < 1e-10, "{zc:?}");
    }

    #[test]
    fn transport_seed_satisfies_order_one_equations() {
        let sol = SemiSolution::new(
            alloc::vec![
                SemiMode::new(C64::one(), c64(0.3, 0.2), SemiFlow::Transport).unwrap(),
                SemiMode::new(c64(0.7, 0.1), c64(-0.2, -0.1), SemiFlow::Transport).unwrap(),
            ],
            c64(1.1, -0.2),
        )
        .unwrap();
        let xs = x_grid(-1.0, 1.0, 5);
        let tr =
            sweep(0..4, &xs, |a, x| Ok(residuals_transport(&sol, a, x)?.iter().fold(0.0, |m, v| m.max(*v)))).unwrap();
        assert!(tr.max_residual < 1e-10, "{tr:?}");
        let zc = sweep(0..4, &xs, |a, x| residual_zero_curvature(&sol, a, x, VOrder::One)).unwrap();
        assert!(zc.max_residual < 1e-10, "{zc:?}");
    }

    #[test]
    fn heat_seed_is_not_a_transport_solution() {
        let sol = heat_pair();
        assert!(residuals_transport(&sol, 1, 0.2).unwrap().iter().any(|v| *v > 1e-4));
    }

    #[test]
    fn dispersion_validation() {
        assert_eq!(SemiMode::new(C64::one(), c64(0.0, 1.0), SemiFlow::Heat), Err(Error::InvalidDispersion));
        assert_eq!(
            SemiMode::with_rate(C64::one(), c64(0.5, 0.0), c64(1.0, 0.0), SemiFlow::Heat),
            Err(Error::InvalidDispersion)
        );
        assert!(SemiMode::with_rate(C64::one(), c64(0.5, 0.0), c64(1.25f64.ln(), 0.0), SemiFlow::Heat).is_ok());
    }

    #[test]
    fn time_periodic_charges() {
        let m = 6;
        let sol = SemiSolution::new(
            alloc::vec![
                SemiMode::time_periodic(C64::one(), 0, m, true).unwrap(),
                SemiMode::time_periodic(c64(0.3, 0.1), 1, m, true).unwrap(),
            ],
            c64(0.9, 0.0),
        )
        .unwrap();
        for x in [-0.4, 0.0, 0.7] {
            let (h1, h2) = charges(&sol, m, x).unwrap();
            assert!(h1.value().norm() < 1e-10, "{:?}", h1.value());
            assert!((h2.value() - c64(m as f64, 0.0)).norm() < 1e-10, "{:?}", h2.value());
            assert!(h1.derivative(1).norm() < 1e-9 && h2.derivative(1).norm() < 1e-9);
        }
    }
}
