//! Classical r-matrices and quantum R-matrices acting on `C² ⊗ C²`, plus
//! numeric checks of the classical and quantum Yang–Baxter equations.
//!
//! Trigonometric matrices are evaluated pointwise (numeric `sinh`/`cosh`).
//! Index convention: `e_ij ⊗ e_kl` sits at row `2i + k`, column `2j + l`.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};

use crate::dense::CMat;
use crate::sample::{self, SeededRng};
use crate::{Error, Result, C64};

/// Magnitude below which a pole factor (`λ` or `sinh λ`) counts as zero.
pub const POLE_EPS: f64 = 1e-10;

/// The r/R-matrix families used by the lattices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RMatrixKind {
    /// Classical rational `r(λ) = P/λ`.
    RationalClassical,
    /// Classical trigonometric matrix of the Ablowitz–Ladik lattice.
    TrigClassicalAl,
    /// Yangian `R(λ) = λ + P`.
    YangianQuantum,
    /// Trigonometric `R` of the quantum AL lattice, `q = e^μ`.
    TrigQuantumAl { mu: C64 },
    /// Symmetric XXZ / sine-Gordon `R`.
    XxzQuantum { mu: C64 },
}

impl RMatrixKind {
    /// Stable textual tag (CLI and reports).
    pub fn tag(&self) -> &'static str {
        match self {
            RMatrixKind::RationalClassical => "rational_classical",
            RMatrixKind::TrigClassicalAl => "trig_classical_AL",
            RMatrixKind::YangianQuantum => "yangian_quantum",
            RMatrixKind::TrigQuantumAl { .. } => "trig_quantum_AL",
            RMatrixKind::XxzQuantum { .. } => "xxz_quantum",
        }
    }

    /// Whether the kind is a classical r-matrix (checked with the CYBE).
    pub fn is_classical(&self) -> bool {
        matches!(self, RMatrixKind::RationalClassical | RMatrixKind::TrigClassicalAl)
    }

    /// Parses a tag, using `mu` for the trigonometric quantum kinds.
    pub fn from_tag(tag: &str, mu: C64) -> Result<Self> {
        let kind = match tag {
            "rational_classical" | "YangS" => RMatrixKind::RationalClassical,
            "trig_classical_AL" | "trig_classical_al" | "rkulish" => RMatrixKind::TrigClassicalAl,
            "yangian_quantum" | "yangian" => RMatrixKind::YangianQuantum,
            "trig_quantum_AL" | "trig_quantum_al" | "kul" => RMatrixKind::TrigQuantumAl { mu },
            "xxz_quantum" | "xxz" | "kul2" => RMatrixKind::XxzQuantum { mu },
            other => return Err(Error::InvalidParam(alloc::format!("unknown r-matrix kind `{other}`"))),
        };
        kind.validate()?;
        Ok(kind)
    }

    fn validate(&self) -> Result<()> {
        match self {
            RMatrixKind::TrigQuantumAl { mu } | RMatrixKind::XxzQuantum { mu } if mu.norm() == 0.0 => {
                Err(Error::InvalidParam(String::from("μ must be non-zero for trigonometric kinds")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for RMatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for RMatrixKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_tag(s, C64::new(0.0, core::f64::consts::PI / 5.0))
    }
}

/// The 4×4 permutation operator `P = Σ e_ij ⊗ e_ji`.
pub fn permutation() -> CMat {
    let mut p = CMat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            p[(2 * i + j, 2 * j + i)] = C64::one();
        }
    }
    p
}

fn check_pole(v: C64) -> Result<()> {
    if v.norm() < POLE_EPS {
        Err(Error::DegenerateEvaluation)
    } else {
        Ok(())
    }
}

/// Six-vertex shaped matrix: `a` on `e_jj⊗e_jj`, `c` on `e_ij⊗e_ji`,
/// `b12` on `e_11⊗e_22` and `b21` on `e_22⊗e_11`.
fn six_vertex(a: C64, c: C64, b12: C64, b21: C64) -> CMat {
    let mut r = CMat::zeros(4, 4);
    r[(0, 0)] = a;
    r[(3, 3)] = a;
    r[(1, 2)] = c;
    r[(2, 1)] = c;
    r[(1, 1)] = b12;
    r[(2, 2)] = b21;
    r
}

/// Evaluates the r/R-matrix of the given kind at `λ`.
pub fn make_r(kind: RMatrixKind, lambda: C64) -> Result<CMat> {
    kind.validate()?;
    match kind {
        RMatrixKind::RationalClassical => {
            check_pole(lambda)?;
            Ok(permutation().scale(lambda.inv()))
        }
        RMatrixKind::TrigClassicalAl => {
            let sh = lambda.sinh();
            check_pole(sh)?;
            let half = C64::new(0.5, 0.0);
            let inv = half / sh;
            // The diagonal e_ii⊗e_jj part carries sgn(j − i): antisymmetric.
            Ok(six_vertex(lambda.cosh() * inv, inv, half, -half))
        }
        RMatrixKind::YangianQuantum => Ok(CMat::identity(4).scale(lambda).add(&permutation())?),
        RMatrixKind::TrigQuantumAl { mu } => {
            let q = mu.exp();
            let b = lambda.sinh();
            Ok(six_vertex((lambda + mu).sinh(), mu.sinh(), b * q, b / q))
        }
        RMatrixKind::XxzQuantum { mu } => {
            let b = lambda.sinh();
            Ok(six_vertex((lambda + mu).sinh(), mu.sinh(), b, b))
        }
    }
}

/// The AL classical r-matrix with the diagonal sign pattern `(−1)^{j−i}`
/// (the same sign in both `e_ii ⊗ e_jj` slots). Kept as a negative control:
/// it violates the CYBE, and the AL Lax operators do not obey the Sklyanin
/// bracket with it. [`RMatrixKind::TrigClassicalAl`] uses `sgn(j − i)`.
pub fn trig_classical_al_symmetric(lambda: C64) -> Result<CMat> {
    let sh = lambda.sinh();
    check_pole(sh)?;
    let half = C64::new(0.5, 0.0);
    let inv = half / sh;
    Ok(six_vertex(lambda.cosh() * inv, inv, -half, -half))
}

/// Embeds a 4×4 operator on factors `(a, b)` of `C²⊗C²⊗C²` (0-based, `a < b`).
pub fn embed3(r: &CMat, a: usize, b: usize) -> CMat {
    let mut out = CMat::zeros(8, 8);
    let other = 3 - a - b;
    let bit = |idx: usize, slot: usize| (idx >> (2 - slot)) & 1;
    for row in 0..8 {
        for col in 0..8 {
            if bit(row, other) != bit(col, other) {
                continue;
            }
            let ri = 2 * bit(row, a) + bit(row, b);
            let ci = 2 * bit(col, a) + bit(col, b);
            out[(row, col)] = r[(ri, ci)];
        }
    }
    out
}

/// Residual of the classical Yang–Baxter equation
/// `[r₁₂(λ₁−λ₂), r₁₃(λ₁)] + [r₁₂(λ₁−λ₂), r₂₃(λ₂)] + [r₁₃(λ₁), r₂₃(λ₂)]`.
pub fn check_cybe(kind: RMatrixKind, l1: C64, l2: C64) -> Result<f64> {
    cybe_with(|l| make_r(kind, l), l1, l2)
}

/// CYBE residual for an arbitrary matrix-valued function.
pub fn cybe_with(r: impl Fn(C64) -> Result<CMat>, l1: C64, l2: C64) -> Result<f64> {
    let r12 = embed3(&r(l1 - l2)?, 0, 1);
    let r13 = embed3(&r(l1)?, 0, 2);
    let r23 = embed3(&r(l2)?, 1, 2);
    let total = r12.commutator(&r13)?.add(&r12.commutator(&r23)?)?.add(&r13.commutator(&r23)?)?;
    Ok(total.max_abs())
}

/// Residual of `R₁₂(λ₁−λ₂)R₁₃(λ₁)R₂₃(λ₂) − R₂₃(λ₂)R₁₃(λ₁)R₁₂(λ₁−λ₂)`.
pub fn check_qybe(kind: RMatrixKind, l1: C64, l2: C64) -> Result<f64> {
    let r12 = embed3(&make_r(kind, l1 - l2)?, 0, 1);
    let r13 = embed3(&make_r(kind, l1)?, 0, 2);
    let r23 = embed3(&make_r(kind, l2)?, 1, 2);
    let lhs = r12.mul(&r13)?.mul(&r23)?;
    let rhs = r23.mul(&r13)?.mul(&r12)?;
    Ok(lhs.sub(&rhs)?.max_abs())
}

/// Summary of a seeded Yang–Baxter sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YbeSweep {
    /// Number of spectral pairs tested.
    pub samples: usize,
    /// Largest residual observed.
    pub max_residual: f64,
    /// Spectral pair at which the largest residual occurred.
    pub worst: (C64, C64),
}

fn spectral_point(rng: &mut SeededRng) -> C64 {
    sample::boxed(rng, (-1.5, 1.5), (-1.0, 1.0))
}

/// Checks the CYBE (classical kinds) or QYBE (quantum kinds) on `samples`
/// seeded random pairs `(λ₁, λ₂)`, keeping every pole argument at least 0.1 away.
pub fn ybe_sweep(kind: RMatrixKind, samples: usize, seed: u64) -> Result<YbeSweep> {
    let mut rng = sample::rng(seed);
    let mut out = YbeSweep { samples: 0, max_residual: 0.0, worst: (C64::zero(), C64::zero()) };
    while out.samples < samples {
        let (l1, l2) = (spectral_point(&mut rng), spectral_point(&mut rng));
        let far = |v: C64| v.norm() > 0.1 && v.sinh().norm() > 0.1;
        if !(far(l1) && far(l2) && far(l1 - l2)) {
            continue;
        }
        let res = if kind.is_classical() { check_cybe(kind, l1, l2)? } else { check_qybe(kind, l1, l2)? };
        if res > out.max_residual || out.samples == 0 {
            out.max_residual = res;
            out.worst = (l1, l2);
        }
        out.samples += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn examples() {
        let r = make_r(RMatrixKind::RationalClassical, c64(2.0, 0.0)).unwrap();
        assert!(r.sub(&permutation().scale(c64(0.5, 0.0))).unwrap().max_abs() < 1e-15);
        let y = make_r(RMatrixKind::YangianQuantum, C64::zero()).unwrap();
        assert_eq!(y, permutation());
        let k = make_r(RMatrixKind::TrigQuantumAl { mu: c64(1.0, 0.0) }, C64::zero()).unwrap();
        assert!((k[(0, 0)] - c64(1.0f64.sinh(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn permutation_squares_to_identity() {
        let p = permutation();
        assert_eq!(p.mul(&p).unwrap(), CMat::identity(4));
    }

    #[test]
    fn poles() {
        assert_eq!(
            check_cybe(RMatrixKind::RationalClassical, c64(0.4, 0.0), c64(0.4, 0.0)),
            Err(Error::DegenerateEvaluation)
        );
        assert_eq!(make_r(RMatrixKind::TrigClassicalAl, C64::zero()), Err(Error::DegenerateEvaluation));
    }

    #[test]
    fn spot_values() {
        assert!(check_cybe(RMatrixKind::RationalClassical, c64(1.3, 0.0), c64(0.4, 0.0)).unwrap() < 1e-12);
        assert!(check_qybe(RMatrixKind::YangianQuantum, c64(0.9, 0.0), c64(-0.3, 0.0)).unwrap() < 1e-12);
    }

    #[test]
    fn symmetric_sign_variant_violates_cybe() {
        let res = cybe_with(trig_classical_al_symmetric, c64(0.7, 0.2), c64(-0.4, 0.5)).unwrap();
        assert!(res > 1e-3, "{res}");
        let good = check_cybe(RMatrixKind::TrigClassicalAl, c64(0.7, 0.2), c64(-0.4, 0.5)).unwrap();
        assert!(good < 1e-12, "{good}");
    }

    #[test]
    fn sweeps_pass_for_every_kind() {
        let mu = c64(0.0, core::f64::consts::PI / 5.0);
        for kind in [
            RMatrixKind::RationalClassical,
            RMatrixKind::TrigClassicalAl,
            RMatrixKind::YangianQuantum,
            RMatrixKind::TrigQuantumAl { mu },
            RMatrixKind::XxzQuantum { mu },
        ] {
            let sweep = ybe_sweep(kind, 100, 7).unwrap();
            assert_eq!(sweep.samples, 100);
            assert!(sweep.max_residual < 1e-11, "{kind}: {sweep:?}");
        }
    }

    #[test]
    fn zero_mu_is_rejected() {
        assert!(matches!(
            make_r(RMatrixKind::XxzQuantum { mu: C64::zero() }, c64(0.3, 0.0)),
            Err(Error::InvalidParam(_))
        ));
    }
}
