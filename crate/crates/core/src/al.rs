//! The fully discrete Ablowitz–Ladik lattice.
//!
//! Fields `β̂_na`, `β_na` on an `N × M` grid. Three Lax pairs share the
//! compatibility `V(n+1,a)L(n,a) = L(n,a+1)V(n,a)` (Laurent in `z`):
//!
//! ```text
//! L(n,a)  = [[z, β̂_{n,a−1}], [β_na, z⁻¹]]
//! L⁺(n,a) = [[z − z⁻¹Â_na, β̂_na], [β_{n,a−1}, z⁻¹]],          Â_na = −1 + β̂_na β_{n,a−1}
//! V⁻(n,a) = [[z, β̂_{n−1,a}], [β_na, −zA⁻_na + z⁻¹]],          A⁻_na = −1 + β_na β̂_{n−1,a}
//! V⁺(n,a) = [[z − z⁻¹A⁺_na, β̂_{n,a−1}], [β_{n−1,a+1}, z⁻¹]],  A⁺_na = −1 + β̂_{n,a−1} β_{n−1,a+1}
//! ```
//!
//! Case A is `(L, V⁻)`, case B is `(L, V⁺)` and case C is `(L⁺, V⁻)`.
//! Case C has explicit updates in both directions and is the constructive
//! stepper; cases A and B are verified, and case B is also marched in space
//! to build time-periodic configurations.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::{LaurentMat, LaurentPoly};
use crate::lattice::{Grid, SpaceBc, SweepResult};
use crate::sample;
use crate::{Error, Result, C64, EPS_SING};

// ═══════════════════════════════════════════════════════════════════════════
// Lattice container
// ═══════════════════════════════════════════════════════════════════════════

/// Which Lax pair is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlCase {
    /// `(L, V⁻)`.
    A,
    /// `(L, V⁺)`.
    B,
    /// `(L⁺, V⁻)`.
    C,
}

impl AlCase {
    /// All three cases.
    pub const ALL: [AlCase; 3] = [AlCase::A, AlCase::B, AlCase::C];
}

impl core::str::FromStr for AlCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(AlCase::A),
            "B" | "b" => Ok(AlCase::B),
            "C" | "c" => Ok(AlCase::C),
            other => Err(Error::InvalidParam(alloc::format!("unknown AL case {other:?}"))),
        }
    }
}

impl core::fmt::Display for AlCase {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            AlCase::A => "A",
            AlCase::B => "B",
            AlCase::C => "C",
        })
    }
}

/// Fields `β̂, β` of the Ablowitz–Ladik lattice.
///
/// When `time_periodic` is set, time indices wrap modulo `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlLattice {
    bh: Grid,
    b: Grid,
    time_periodic: bool,
}

impl AlLattice {
    /// Builds a lattice from `β̂` and `β` grids of equal shape.
    pub fn new(bh: Grid, b: Grid) -> Result<Self> {
        if bh.space_len() != b.space_len() || bh.time_len() != b.time_len() || bh.bc() != b.bc() {
            return Err(Error::ShapeError {
                expected: bh.space_len() * bh.time_len(),
                found: b.space_len() * b.time_len(),
            });
        }
        if bh.space_len() < 3 || bh.time_len() < 3 {
            return Err(Error::InvalidParam(alloc::format!(
                "AL lattice needs N ≥ 3 and M ≥ 3, got {}×{}",
                bh.space_len(),
                bh.time_len()
            )));
        }
        if bh.iter().chain(b.iter()).any(|(_, _, v)| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidParam("non-finite field value".into()));
        }
        Ok(Self { bh, b, time_periodic: false })
    }

    /// Marks the lattice as periodic in time.
    pub fn with_time_periodic(mut self, periodic: bool) -> Self {
        self.time_periodic = periodic;
        self
    }

    /// All-zero lattice.
    pub fn zeros(n: usize, m: usize, bc: SpaceBc) -> Result<Self> {
        Self::new(Grid::zeros(n, m, bc), Grid::zeros(n, m, bc))
    }

    /// Random fields from the disk of the given radius.
    pub fn random(n: usize, m: usize, bc: SpaceBc, radius: f64, seed: u64) -> Result<Self> {
        let mut rng = sample::rng(seed);
        let bh = Grid::from_fn(n, m, bc, |_, _| sample::disk(&mut rng, radius));
        let b = Grid::from_fn(n, m, bc, |_, _| sample::disk(&mut rng, radius));
        Self::new(bh, b)
    }

    /// The `β̂` grid.
    pub fn beta_hat(&self) -> &Grid {
        &self.bh
    }

    /// The `β` grid.
    pub fn beta(&self) -> &Grid {
        &self.b
    }

    /// Number of space sites.
    pub fn space_len(&self) -> usize {
        self.bh.space_len()
    }

    /// Number of time sites.
    pub fn time_len(&self) -> usize {
        self.bh.time_len()
    }

    /// Spatial boundary condition.
    pub fn bc(&self) -> SpaceBc {
        self.bh.bc()
    }

    /// Whether time wraps modulo `M`.
    pub fn is_time_periodic(&self) -> bool {
        self.time_periodic
    }

    fn time(&self, a: isize) -> isize {
        if self.time_periodic {
            a.rem_euclid(self.time_len() as isize)
        } else {
            a
        }
    }

    /// `β̂_{n,a}`.
    pub fn bh(&self, n: isize, a: isize) -> Result<C64> {
        self.bh.get(n, self.time(a))
    }

    /// `β_{n,a}`.
    pub fn b(&self, n: isize, a: isize) -> Result<C64> {
        self.b.get(n, self.time(a))
    }

    /// Case-B auxiliary field `γ_{n,a−1} := β_{n,a+1}`, read through an index
    /// view rather than stored separately.
    pub fn gamma(&self, n: isize, a: isize) -> Result<C64> {
        self.b(n, a + 2)
    }

    /// Sites whose stencil `(n−1..n+1, a−1..a+1)` is addressable.
    pub fn interior_sites(&self) -> Vec<(isize, isize)> {
        let (n, m) = (self.space_len() as isize, self.time_len() as isize);
        let (slo, shi) = match self.bc() {
            SpaceBc::Periodic => (0, n - 1),
            SpaceBc::Open => (1, n - 2),
        };
        let (tlo, thi) = if self.time_periodic { (0, m - 1) } else { (1, m - 2) };
        let mut out = Vec::new();
        for a in tlo..=thi {
            for s in slo..=shi {
                out.push((s, a));
            }
        }
        out
    }
}

// ═══════════════════════════════════════════════════════════════════════════
// Lax matrices and residuals
// ═══════════════════════════════════════════════════════════════════════════

fn zp(c: C64) -> LaurentPoly {
    LaurentPoly::monomial(c, 1)
}

fn zm(c: C64) -> LaurentPoly {
    LaurentPoly::monomial(c, -1)
}

fn cst(c: C64) -> LaurentPoly {
    LaurentPoly::constant(c)
}

/// `L(n, a)`.
pub fn build_l(lat: &AlLattice, n: isize, a: isize) -> Result<LaurentMat> {
    let one = C64::one();
    Ok(LaurentMat::from_2x2(zp(one), cst(lat.bh(n, a - 1)?), cst(lat.b(n, a)?), zm(one)))
}

/// `L⁺(n, a)`.
pub fn build_l_plus(lat: &AlLattice, n: isize, a: isize) -> Result<LaurentMat> {
    let one = C64::one();
    let (bh, b) = (lat.bh(n, a)?, lat.b(n, a - 1)?);
    let ahat = -one + bh * b;
    Ok(LaurentMat::from_2x2(LaurentPoly::from_terms([(1, one), (-1, -ahat)]), cst(bh), cst(b), zm(one)))
}

/// `V⁻(n, a)`.
pub fn build_v_minus(lat: &AlLattice, n: isize, a: isize) -> Result<LaurentMat> {
    let one = C64::one();
    let (bh, b) = (lat.bh(n - 1, a)?, lat.b(n, a)?);
    let am = -one + b * bh;
    Ok(LaurentMat::from_2x2(zp(one), cst(bh), cst(b), LaurentPoly::from_terms([(1, -am), (-1, one)])))
}

/// `V⁺(n, a)`.
pub fn build_v_plus(lat: &AlLattice, n: isize, a: isize) -> Result<LaurentMat> {
    let one = C64::one();
    let (bh, b) = (lat.bh(n, a - 1)?, lat.b(n - 1, a + 1)?);
    let ap = -one + bh * b;
    Ok(LaurentMat::from_2x2(LaurentPoly::from_terms([(1, one), (-1, -ap)]), cst(bh), cst(b), zm(one)))
}

/// `(L(n,a), V(n,a))` for the given case.
pub fn build_al_laxpair(lat: &AlLattice, n: isize, a: isize, case: AlCase) -> Result<(LaurentMat, LaurentMat)> {
    Ok((space_op(lat, n, a, case)?, time_op(lat, n, a, case)?))
}

fn space_op(lat: &AlLattice, n: isize, a: isize, case: AlCase) -> Result<LaurentMat> {
    match case {
        AlCase::A | AlCase::B => build_l(lat, n, a),
        AlCase::C => build_l_plus(lat, n, a),
    }
}

fn time_op(lat: &AlLattice, n: isize, a: isize, case: AlCase) -> Result<LaurentMat> {
    match case {
        AlCase::A | AlCase::C => build_v_minus(lat, n, a),
        AlCase::B => build_v_plus(lat, n, a),
    }
}

/// The four signed terms of each difference equation; the residual is their sum.
fn equation_terms(lat: &AlLattice, n: isize, a: isize, case: AlCase) -> Result<([C64; 4], [C64; 4])> {
    let bh = |s, t| lat.bh(s, t);
    let b = |s, t| lat.b(s, t);
    Ok(match case {
        AlCase::A => (
            [bh(n, a - 1)?, -bh(n - 1, a)?, -bh(n, a)?, bh(n, a)? * b(n, a)? * bh(n - 1, a)?],
            [b(n, a + 1)?, -b(n + 1, a)?, -b(n, a)?, b(n + 1, a)? * bh(n, a)? * b(n, a)?],
        ),
        AlCase::B => (
            [bh(n, a)?, -bh(n + 1, a - 1)?, -bh(n, a - 1)?, bh(n + 1, a - 1)? * b(n, a + 1)? * bh(n, a - 1)?],
            [b(n, a)?, -b(n - 1, a + 1)?, -b(n, a + 1)?, b(n, a + 1)? * bh(n, a - 1)? * b(n - 1, a + 1)?],
        ),
        AlCase::C => (
            [bh(n, a + 1)?, bh(n - 1, a)?, -bh(n, a)?, -bh(n - 1, a)? * b(n, a)? * bh(n, a + 1)?],
            [b(n + 1, a)?, b(n, a - 1)?, -b(n, a)?, -b(n + 1, a)? * bh(n, a)? * b(n, a - 1)?],
        ),
    })
}

/// Signed residuals `(r_β̂, r_β)` (LHS − RHS) of the case's two difference equations.
pub fn equation_residuals(lat: &AlLattice, n: isize, a: isize, case: AlCase) -> Result<(C64, C64)> {
    let (t1, t2) = equation_terms(lat, n, a, case)?;
    Ok((t1.iter().sum(), t2.iter().sum()))
}

fn term_scale(terms: &[C64]) -> f64 {
    terms.iter().fold(1.0, |m, t| m.max(t.norm()))
}

/// Residual triple at one site.
///
/// Each residual is divided by `max(1, largest term)`. The equations are
/// invariant under `β → sβ, β̂ → β̂/s`, and periodic evolutions drift along
/// this gauge orbit, so absolute residuals would only measure `|β|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlResidual {
    /// Scaled `|r_β̂|`.
    pub beta_hat: f64,
    /// Scaled `|r_β|`.
    pub beta: f64,
    /// Scaled max coefficient of `V(n+1,a)L(n,a) − L(n,a+1)V(n,a)`.
    pub full: f64,
}

impl AlResidual {
    /// Largest of the three.
    pub fn max(&self) -> f64 {
        self.beta_hat.max(self.beta).max(self.full)
    }
}

/// `(r_β̂, r_β, r_full)` at `(n, a)`.
pub fn residual_al(lat: &AlLattice, n: isize, a: isize, case: AlCase) -> Result<AlResidual> {
    let (t1, t2) = equation_terms(lat, n, a, case)?;
    let r1: C64 = t1.iter().sum();
    let r2: C64 = t2.iter().sum();
    let lhs = time_op(lat, n + 1, a, case)?.mul(&space_op(lat, n, a, case)?)?;
    let rhs = space_op(lat, n, a + 1, case)?.mul(&time_op(lat, n, a, case)?)?;
    let full_scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
    Ok(AlResidual {
        beta_hat: r1.norm() / term_scale(&t1),
        beta: r2.norm() / term_scale(&t2),
        full: lhs.sub(&rhs)?.max_abs() / full_scale,
    })
}

/// Sweeps [`residual_al`] over every interior site; returns the sweeps of
/// the equation residuals and of the full matrix residual.
pub fn sweep_al(lat: &AlLattice, case: AlCase) -> Result<(SweepResult, SweepResult)> {
    let (mut eq, mut full) = (SweepResult::new(), SweepResult::new());
    for (n, a) in lat.interior_sites() {
        let r = residual_al(lat, n, a, case)?;
        eq.record((n, a), r.beta_hat.max(r.beta));
        full.record((n, a), r.full);
    }
    Ok((eq, full))
}

// ═══════════════════════════════════════════════════════════════════════════
// Constructive marching
// ═══════════════════════════════════════════════════════════════════════════

/// Solves the cyclic affine recursion `x_{k+1} = (x_k − c_k)/(1 − d_k)`,
/// `k = 0..L−1`, with `x_L = x_0`. Returns `x_0..x_{L−1}`.
pub fn solve_cyclic_affine(c: &[C64], d: &[C64]) -> Result<Vec<C64>> {
    let (mut alpha, mut gamma) = (C64::one(), C64::zero());
    for (ck, dk) in c.iter().zip(d) {
        let den = crate::error::guard(C64::one() - dk, "1 − β̂β")?;
        alpha /= den;
        gamma = (gamma - ck) / den;
    }
    let x0 = gamma / crate::error::guard(C64::one() - alpha, "periodic closure")?;
    march_affine(x0, c, d).map(|mut xs| {
        xs.pop();
        xs
    })
}

/// Marches `x_{k+1} = (x_k − c_k)/(1 − d_k)` from a seed; returns `x_0..x_L`.
pub fn march_affine(x0: C64, c: &[C64], d: &[C64]) -> Result<Vec<C64>> {
    let mut xs = Vec::with_capacity(c.len() + 1);
    xs.push(x0);
    for (ck, dk) in c.iter().zip(d) {
        let den = crate::error::guard(C64::one() - dk, "1 − β̂β")?;
        let last = xs[xs.len() - 1];
        xs.push((last - ck) / den);
    }
    Ok(xs)
}

/// How the spatial march for `β` closes on a periodic ring.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Closure {
    /// Solve for the unique seed that makes the march periodic.
    Periodic,
    /// March from a user-supplied seed `β_{0,a}` and report the mismatch.
    Seed(C64),
}

/// Result of one case-C time step.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseCStep {
    /// `β_{·,a}` marched in `n`.
    pub beta: Vec<C64>,
    /// `β̂_{·,a+1}`.
    pub beta_hat_next: Vec<C64>,
    /// `|β_{N,a} − β_{0,a}|` of the spatial march.
    pub closure_residual: f64,
}

/// One case-C step on a periodic ring: given `β̂_{·,a}` and `β_{·,a−1}`,
/// computes `β_{n+1,a} = (β_na − β_{n,a−1})/(1 − β̂_na β_{n,a−1})` marched in
/// `n`, then `β̂_{n,a+1} = (β̂_na − β̂_{n−1,a})/(1 − β̂_{n−1,a}β_na)`.
pub fn step_case_c(beta_hat: &[C64], beta_prev: &[C64], closure: Closure) -> Result<CaseCStep> {
    let n = beta_hat.len();
    if n < 3 || beta_prev.len() != n {
        return Err(Error::ShapeError { expected: n.max(3), found: beta_prev.len() });
    }
    let c: Vec<C64> = beta_prev.to_vec();
    let d: Vec<C64> = beta_hat.iter().zip(beta_prev).map(|(h, b)| h * b).collect();
    let (beta, closure_residual) = match closure {
        Closure::Periodic => {
            let xs = solve_cyclic_affine(&c, &d)?;
            let full = march_affine(xs[0], &c, &d)?;
            (xs, (full[n] - full[0]).norm())
        }
        Closure::Seed(x0) => {
            let mut full = march_affine(x0, &c, &d)?;
            let r = (full[n] - full[0]).norm();
            full.pop();
            (full, r)
        }
    };
    let mut beta_hat_next = Vec::with_capacity(n);
    for s in 0..n {
        let prev = beta_hat[(s + n - 1) % n];
        let den = crate::error::guard(C64::one() - prev * beta[s], "1 − β̂β")?;
        beta_hat_next.push((beta_hat[s] - prev) / den);
    }
    Ok(CaseCStep { beta, beta_hat_next, closure_residual })
}

/// Evolves case C on a periodic ring from `β̂_{·,0}` and `β_{·,0}` for `m`
/// time slices. The result satisfies both case-C equations at every
/// interior site.
pub fn evolve_case_c(beta_hat0: &[C64], beta0: &[C64], m: usize) -> Result<AlLattice> {
    let n = beta_hat0.len();
    let mut bh = Grid::zeros(n, m, SpaceBc::Periodic);
    let mut b = Grid::zeros(n, m, SpaceBc::Periodic);
    let mut cur_bh = beta_hat0.to_vec();
    let mut cur_b = beta0.to_vec();
    for a in 0..m {
        if a > 0 {
            let step = step_case_c(&cur_bh, &cur_b, Closure::Periodic)?;
            cur_b = step.beta;
            let next = step.beta_hat_next;
            store(&mut b, a, &cur_b)?;
            if a + 1 < m {
                store(&mut bh, a, &cur_bh)?;
                cur_bh = next;
            } else {
                store(&mut bh, a, &cur_bh)?;
            }
        } else {
            store(&mut bh, 0, &cur_bh)?;
            store(&mut b, 0, &cur_b)?;
            cur_bh = next_beta_hat(&cur_bh, &cur_b)?;
        }
    }
    AlLattice::new(bh, b)
}

fn next_beta_hat(bh: &[C64], b: &[C64]) -> Result<Vec<C64>> {
    let n = bh.len();
    (0..n)
        .map(|s| {
            let prev = bh[(s + n - 1) % n];
            Ok((bh[s] - prev) / crate::error::guard(C64::one() - prev * b[s], "1 − β̂β")?)
        })
        .collect()
}

fn store(g: &mut Grid, a: usize, vals: &[C64]) -> Result<()> {
    for (s, v) in vals.iter().enumerate() {
        g.set(s as isize, a as isize, *v)?;
    }
    Ok(())
}

/// Builds a time-periodic configuration on `n` space sites by marching the
/// case's equations in space from the column `(β̂_{0,·}, β_{0,·})` of length
/// `M`. Only cases B and C admit such a march.
pub fn march_space(case: AlCase, beta_hat0: &[C64], beta0: &[C64], n: usize) -> Result<AlLattice> {
    let m = beta_hat0.len();
    if beta0.len() != m {
        return Err(Error::ShapeError { expected: m, found: beta0.len() });
    }
    let mut bh = Grid::zeros(n, m, SpaceBc::Open);
    let mut b = Grid::zeros(n, m, SpaceBc::Open);
    store_col(&mut bh, 0, beta_hat0)?;
    store_col(&mut b, 0, beta0)?;
    let (mut cbh, mut cb) = (beta_hat0.to_vec(), beta0.to_vec());
    let at = |v: &[C64], a: isize| v[a.rem_euclid(m as isize) as usize];
    for col in 1..n {
        let (nbh, nb) = match case {
            AlCase::C => {
                // β_{n+1,a} = (β_na − β_{n,a−1})/(1 − β̂_na β_{n,a−1})
                let nb: Vec<C64> = (0..m as isize)
                    .map(|a| {
                        let den = crate::error::guard(C64::one() - at(&cbh, a) * at(&cb, a - 1), "1 − β̂β")?;
                        Ok((at(&cb, a) - at(&cb, a - 1)) / den)
                    })
                    .collect::<Result<_>>()?;
                // β̂_{n+1,a+1} = (β̂_{n+1,a} − β̂_na)/(1 − β̂_na β_{n+1,a})
                let d: Vec<C64> = (0..m).map(|a| cbh[a] * nb[a]).collect();
                (solve_cyclic_affine(&cbh, &d)?, nb)
            }
            AlCase::B => {
                // β̂_{n+1,a−1} = (β̂_na − β̂_{n,a−1})/(1 − β_{n,a+1}β̂_{n,a−1})
                let nbh: Vec<C64> = (0..m as isize)
                    .map(|a| {
                        let t = a + 1;
                        let den = crate::error::guard(C64::one() - at(&cb, t + 1) * at(&cbh, t - 1), "1 − β̂β")?;
                        Ok((at(&cbh, t) - at(&cbh, t - 1)) / den)
                    })
                    .collect::<Result<_>>()?;
                // β_{n+1,a+1} = (β_{n+1,a} − β_{n,a+1})/(1 − β̂_{n+1,a−1}β_{n,a+1})
                let c: Vec<C64> = (0..m as isize).map(|a| at(&cb, a + 1)).collect();
                let d: Vec<C64> = (0..m as isize).map(|a| at(&nbh, a - 1) * at(&cb, a + 1)).collect();
                (nbh, solve_cyclic_affine(&c, &d)?)
            }
            AlCase::A => return Err(Error::InvalidParam("case A has no explicit space march".into())),
        };
        store_col(&mut bh, col, &nbh)?;
        store_col(&mut b, col, &nb)?;
        cbh = nbh;
        cb = nb;
    }
    Ok(AlLattice::new(bh, b)?.with_time_periodic(true))
}

fn store_col(g: &mut Grid, n: usize, vals: &[C64]) -> Result<()> {
    for (a, v) in vals.iter().enumerate() {
        g.set(n as isize, a as isize, *v)?;
    }
    Ok(())
}

// ═══════════════════════════════════════════════════════════════════════════
// mKdV-type reduction
// ═══════════════════════════════════════════════════════════════════════════

/// The four `β̂` values entering the mKdV-type equation at `(n, a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MkdvStencil {
    /// `β̂_{n,a}`.
    pub here: C64,
    /// `β̂_{n,a−1}`.
    pub down: C64,
    /// `β̂_{n+1,a−1}`.
    pub right_down: C64,
    /// `β̂_{n−1,a}`.
    pub left: C64,
}

impl MkdvStencil {
    /// Reads the stencil from a lattice.
    pub fn from_lattice(lat: &AlLattice, n: isize, a: isize) -> Result<Self> {
        Ok(Self {
            here: lat.bh(n, a)?,
            down: lat.bh(n, a - 1)?,
            right_down: lat.bh(n + 1, a - 1)?,
            left: lat.bh(n - 1, a)?,
        })
    }

    /// Random stencil from the disk of the given radius.
    pub fn random(rng: &mut sample::SeededRng, radius: f64) -> Self {
        Self {
            here: sample::disk(rng, radius),
            down: sample::disk(rng, radius),
            right_down: sample::disk(rng, radius),
            left: sample::disk(rng, radius),
        }
    }

    /// `β̂_na − β̂_{n,a−1} − ½(1 − β̂_na β̂_{n,a−1})(β̂_{n+1,a−1} − β̂_{n−1,a})`.
    pub fn residual_ab(&self) -> C64 {
        self.here - self.down - (C64::one() - self.here * self.down) * (self.right_down - self.left) * 0.5
    }

    /// First case-A equation with `β_{n,a} → β̂_{n,a−1}`.
    pub fn reduced_a(&self) -> C64 {
        self.down - self.left - self.here + self.here * self.down * self.left
    }

    /// First case-B equation with `β_{n,a+1} → β̂_{n,a}`.
    pub fn reduced_b(&self) -> C64 {
        self.here - self.right_down - self.down + self.right_down * self.here * self.down
    }
}

/// Coefficients `(c_A, c_B)` with `AB = c_A·A + c_B·B` on the reduction,
/// determined by [`fit_mkdv_coefficients`] and frozen.
pub const MKDV_COEFFS: (f64, f64) = (-0.5, 0.5);

/// Least-squares fit of `(c_A, c_B)` in `AB ≈ c_A·A + c_B·B` over random
/// stencils; returns the coefficients and the worst fitted residual.
pub fn fit_mkdv_coefficients(samples: usize, seed: u64) -> Result<((C64, C64), f64)> {
    let mut rng = sample::rng(seed);
    let pts: Vec<MkdvStencil> = (0..samples).map(|_| MkdvStencil::random(&mut rng, 1.0)).collect();
    // Normal equations for the 2-parameter complex least-squares problem.
    let (mut g11, mut g12, mut g22, mut r1, mut r2) = (C64::zero(), C64::zero(), C64::zero(), C64::zero(), C64::zero());
    for p in &pts {
        let (a, b, t) = (p.reduced_a(), p.reduced_b(), p.residual_ab());
        g11 += a.conj() * a;
        g12 += a.conj() * b;
        g22 += b.conj() * b;
        r1 += a.conj() * t;
        r2 += b.conj() * t;
    }
    let det = crate::error::guard(g11 * g22 - g12 * g12.conj(), "normal matrix")?;
    let ca = (g22 * r1 - g12 * r2) / det;
    let cb = (g11 * r2 - g12.conj() * r1) / det;
    let worst =
        pts.iter().map(|p| (p.residual_ab() - ca * p.reduced_a() - cb * p.reduced_b()).norm()).fold(0.0, f64::max);
    Ok(((ca, cb), worst))
}

/// `(r_AB, r_identity)`: the mKdV-type residual itself and the mismatch of
/// the frozen linear combination of the reduced case-A/B equations.
pub fn mkdv_check(s: &MkdvStencil) -> (f64, f64) {
    let ab = s.residual_ab();
    let comb = s.reduced_a() * MKDV_COEFFS.0 + s.reduced_b() * MKDV_COEFFS.1;
    (ab.norm(), (ab - comb).norm())
}

// ═══════════════════════════════════════════════════════════════════════════
// Transfer traces and charges
// ═══════════════════════════════════════════════════════════════════════════

/// `tr L(N−1,a)⋯L(0,a)` as a Laurent polynomial in `z` (case-appropriate L).
pub fn space_trace_poly(lat: &AlLattice, a: isize, case: AlCase) -> Result<LaurentPoly> {
    if lat.bc() != SpaceBc::Periodic {
        return Err(Error::InvalidParam("space transfer trace needs periodic space".into()));
    }
    let mut t = LaurentMat::identity(2);
    for n in 0..lat.space_len() as isize {
        t = space_op(lat, n, a, case)?.mul(&t)?;
    }
    Ok(t.trace())
}

/// `tr V(n,M−1)⋯V(n,0)` as a Laurent polynomial in `z` (case-appropriate V).
pub fn time_trace_poly(lat: &AlLattice, n: isize, case: AlCase) -> Result<LaurentPoly> {
    if !lat.is_time_periodic() {
        return Err(Error::InvalidParam("time transfer trace needs periodic time".into()));
    }
    let mut t = LaurentMat::identity(2);
    for a in 0..lat.time_len() as isize {
        t = time_op(lat, n, a, case)?.mul(&t)?;
    }
    Ok(t.trace())
}

/// Space transfer trace evaluated at `z`.
pub fn al_transfer_trace(lat: &AlLattice, a: isize, z: C64, case: AlCase) -> Result<C64> {
    space_trace_poly(lat, a, case)?.eval(z)
}

/// Conserved charges read off the transfer traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlCharge {
    /// `z^{N−2}` coefficient of the space trace.
    HsPlus,
    /// `z^{−(N−2)}` coefficient of the space trace.
    HsMinus,
    /// `z^{M−2}` coefficient of the `V⁺` time trace, minus `M`.
    HtPlus,
    /// `z^{−(M−2)}` coefficient of the `V⁻` time trace, minus `M`.
    HtMinus,
}

impl core::str::FromStr for AlCharge {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "HS+" | "hs+" | "HSplus" => Ok(AlCharge::HsPlus),
            "HS-" | "hs-" | "HSminus" => Ok(AlCharge::HsMinus),
            "HT+" | "ht+" | "HTplus" => Ok(AlCharge::HtPlus),
            "HT-" | "ht-" | "HTminus" => Ok(AlCharge::HtMinus),
            other => Err(Error::InvalidParam(alloc::format!("unknown charge {other:?}"))),
        }
    }
}

/// Charge at the fixed complementary index (`a` for space charges, `n` for
/// time charges). `case` selects the space operator; the time charges always
/// use `V⁺` (H_T⁺) or `V⁻` (H_T⁻). With the plain `L` the space charges are
/// `H_S⁺ = Σβ̂_{n+1,a−1}β_{n,a}` and `H_S⁻ = Σβ_{n+1,a}β̂_{n,a−1}`; with `L⁺`
/// the coefficient also collects the diagonal `Σ(1 − β̂_na β_{n,a−1})`.
pub fn conserved_charge(lat: &AlLattice, kind: AlCharge, index: isize, case: AlCase) -> Result<C64> {
    match kind {
        AlCharge::HsPlus | AlCharge::HsMinus => {
            let p = space_trace_poly(lat, index, case)?;
            let k = lat.space_len() as i32 - 2;
            Ok(p.coeff(if kind == AlCharge::HsPlus { k } else { -k }))
        }
        AlCharge::HtPlus | AlCharge::HtMinus => {
            // H_T⁺ is read from V⁺ (case B), H_T⁻ from V⁻ (cases A and C).
            let time_case = if kind == AlCharge::HtPlus { AlCase::B } else { AlCase::C };
            let p = time_trace_poly(lat, index, time_case)?;
            let m = lat.time_len() as i32;
            let k = if kind == AlCharge::HtPlus { m - 2 } else { -(m - 2) };
            Ok(p.coeff(k) - C64::new(m as f64, 0.0))
        }
    }
}

/// Plain space sums `(Σβ̂_{n+1,a−1}β_{n,a}, Σβ_{n+1,a}β̂_{n,a−1})` at time `a`.
pub fn space_charge_sums(lat: &AlLattice, a: isize) -> Result<(C64, C64)> {
    let (mut hp, mut hm) = (C64::zero(), C64::zero());
    for n in 0..lat.space_len() as isize {
        hp += lat.bh(n + 1, a - 1)? * lat.b(n, a)?;
        hm += lat.b(n + 1, a)? * lat.bh(n, a - 1)?;
    }
    Ok((hp, hm))
}

/// Largest change of a charge along its conserved direction.
pub fn charge_drift(lat: &AlLattice, kind: AlCharge, case: AlCase) -> Result<SweepResult> {
    let indices: Vec<isize> = match kind {
        AlCharge::HsPlus | AlCharge::HsMinus => (1..lat.time_len() as isize - 1).collect(),
        AlCharge::HtPlus | AlCharge::HtMinus => (1..lat.space_len() as isize - 1).collect(),
    };
    let mut out = SweepResult::new();
    let mut prev: Option<C64> = None;
    for &i in &indices {
        let h = conserved_charge(lat, kind, i, case)?;
        if let Some(p) = prev {
            out.record((i, i), (h - p).norm());
        }
        prev = Some(h);
    }
    Ok(out)
}

/// Largest change of the space transfer trace between consecutive interior
/// times, over the given spectral points.
pub fn trace_drift(lat: &AlLattice, case: AlCase, zs: &[C64]) -> Result<SweepResult> {
    let mut out = SweepResult::new();
    let m = lat.time_len() as isize;
    for &z in zs {
        if z.norm() < EPS_SING {
            return Err(Error::Singularity { what: "z", magnitude: z.norm() });
        }
        let mut prev = al_transfer_trace(lat, 1, z, case)?;
        for a in 2..m - 1 {
            let cur = al_transfer_trace(lat, a, z, case)?;
            out.record((0, a - 1), (cur - prev).norm());
            prev = cur;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn random_slice(rng: &mut sample::SeededRng, n: usize, r: f64) -> Vec<C64> {
        (0..n).map(|_| sample::disk(rng, r)).collect()
    }

    #[test]
    fn zero_field_examples() {
        let lat = AlLattice::zeros(4, 3, SpaceBc::Periodic).unwrap();
        let (l, v) = build_al_laxpair(&lat, 1, 1, AlCase::A).unwrap();
        assert_eq!(l, LaurentMat::from_2x2(zp(C64::one()), cst(C64::zero()), cst(C64::zero()), zm(C64::one())));
        assert_eq!(v.get(1, 1), &LaurentPoly::from_terms([(1, C64::one()), (-1, C64::one())]));
        let (lp, _) = build_al_laxpair(&lat, 1, 1, AlCase::C).unwrap();
        assert_eq!(lp.get(0, 0), &LaurentPoly::from_terms([(1, C64::one()), (-1, C64::one())]));
        for case in AlCase::ALL {
            assert_eq!(residual_al(&lat, 1, 1, case).unwrap().max(), 0.0);
        }
        let t = al_transfer_trace(&lat, 1, c64(2.0, 0.0), AlCase::A).unwrap();
        assert!((t - c64(16.0 + 1.0 / 16.0, 0.0)).norm() < 1e-14);
        assert_eq!(conserved_charge(&lat, AlCharge::HsPlus, 1, AlCase::A).unwrap(), C64::zero());
    }

    #[test]
    fn v_plus_readoff() {
        let mut lat = AlLattice::zeros(3, 3, SpaceBc::Periodic).unwrap();
        lat.bh.set(1, 0, c64(0.3, 0.0)).unwrap();
        lat.b.set(0, 2, c64(0.5, 0.0)).unwrap();
        let v = build_v_plus(&lat, 1, 1).unwrap();
        assert!((v.get(0, 0).coeff(-1) - c64(0.85, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_charge_example() {
        let c = c64(0.2, 0.1);
        let g = Grid::from_fn(5, 3, SpaceBc::Periodic, |_, _| c);
        let lat = AlLattice::new(g.clone(), g).unwrap();
        let h = conserved_charge(&lat, AlCharge::HsPlus, 1, AlCase::A).unwrap();
        assert!((h - c * c * 5.0).norm() < 1e-14);
        assert!((space_charge_sums(&lat, 1).unwrap().0 - h).norm() < 1e-14);
    }

    #[test]
    fn case_c_stepper_examples() {
        let mut rng = sample::rng(5);
        let b = random_slice(&mut rng, 6, 0.1);
        let zero = alloc::vec![C64::zero(); 6];
        let step = step_case_c(&zero, &b, Closure::Seed(C64::zero())).unwrap();
        assert!(step.beta_hat_next.iter().all(|v| v.norm() == 0.0));
        assert!(matches!(step_case_c(&zero, &b, Closure::Periodic), Err(Error::Singularity { .. })));
        let constant = alloc::vec![c64(0.05, 0.02); 6];
        let seeded = step_case_c(&constant, &b, Closure::Seed(c64(0.3, 0.0))).unwrap();
        assert!(seeded.beta_hat_next.iter().all(|v| v.norm() == 0.0));
        assert!(seeded.closure_residual > 1e-6);
        // With β̂ ≡ h the only periodic closure is β ≡ 1/h, where 1 − β̂β vanishes.
        assert!(matches!(step_case_c(&constant, &b, Closure::Periodic), Err(Error::Singularity { .. })));
        let generic = step_case_c(&random_slice(&mut rng, 6, 0.5), &b, Closure::Periodic).unwrap();
        assert!(generic.closure_residual < 1e-10 * generic.beta.iter().fold(1.0f64, |m, v| m.max(v.norm())));
    }

    #[test]
    fn case_c_evolution_is_exact_and_conserving() {
        for seed in 0..5 {
            let mut rng = sample::rng(seed);
            let lat = evolve_case_c(&random_slice(&mut rng, 7, 0.1), &random_slice(&mut rng, 7, 0.1), 8).unwrap();
            let (eq, full) = sweep_al(&lat, AlCase::C).unwrap();
            assert!(eq.max_residual < 1e-13, "{eq:?}");
            assert!(full.max_residual < 1e-12, "{full:?}");
            let zs = [c64(0.7, 0.3), c64(1.3, -0.2), c64(-0.9, 0.5)];
            assert!(trace_drift(&lat, AlCase::C, &zs).unwrap().max_residual < 1e-9);
            for kind in [AlCharge::HsPlus, AlCharge::HsMinus] {
                assert!(charge_drift(&lat, kind, AlCase::C).unwrap().max_residual < 1e-9);
            }
        }
    }

    #[test]
    fn random_lattices_fail() {
        let lat = AlLattice::random(6, 5, SpaceBc::Periodic, 0.5, 9).unwrap();
        for case in AlCase::ALL {
            let (eq, full) = sweep_al(&lat, case).unwrap();
            assert!(eq.max_residual > 1e-3 && full.max_residual > 1e-3);
        }
    }

    #[test]
    fn space_marched_configurations_conserve_time_charges() {
        let mut rng = sample::rng(21);
        for (case, kind) in [(AlCase::C, AlCharge::HtMinus), (AlCase::B, AlCharge::HtPlus)] {
            let lat = march_space(case, &random_slice(&mut rng, 6, 0.1), &random_slice(&mut rng, 6, 0.1), 6).unwrap();
            let (eq, full) = sweep_al(&lat, case).unwrap();
            assert!(eq.max_residual < 1e-12, "{case}: {eq:?}");
            assert!(full.max_residual < 1e-12, "{case}: {full:?}");
            let d = charge_drift(&lat, kind, case).unwrap();
            assert!(d.max_residual < 1e-9, "{case}: {d:?}");
        }
    }

    #[test]
    fn mkdv_identity() {
        let ((ca, cb), worst) = fit_mkdv_coefficients(40, 2).unwrap();
        assert!((ca - c64(MKDV_COEFFS.0, 0.0)).norm() < 1e-10);
        assert!((cb - c64(MKDV_COEFFS.1, 0.0)).norm() < 1e-10);
        assert!(worst < 1e-12);
        let mut rng = sample::rng(3);
        for _ in 0..100 {
            assert!(mkdv_check(&MkdvStencil::random(&mut rng, 1.0)).1 < 1e-12);
        }
        let flat =
            MkdvStencil { here: c64(0.3, 0.1), down: c64(0.3, 0.1), right_down: c64(0.2, 0.0), left: c64(0.2, 0.0) };
        assert_eq!(mkdv_check(&flat).0, 0.0);
    }

    #[test]
    fn gamma_is_an_index_view() {
        let lat = AlLattice::random(4, 5, SpaceBc::Periodic, 0.3, 1).unwrap();
        assert_eq!(lat.gamma(2, 1).unwrap(), lat.b(2, 3).unwrap());
    }
}
