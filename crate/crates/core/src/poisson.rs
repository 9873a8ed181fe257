//! Classical Poisson structures of the Lax matrices, checked numerically.
//!
//! Brackets of arbitrary rational expressions are obtained from a table of
//! fundamental brackets by the Leibniz rule,
//!
//! ```text
//! {F, G} = Σ_{i,j} {g_i, g_j} ∂F/∂g_i ∂G/∂g_j,
//! ```
//!
//! with the partial derivatives computed by forward-mode AD. The Sklyanin
//! relation `{M(λ) ⊗, M(μ)} = [r(λ − μ), M(λ) ⊗ M(μ)]` is then tested
//! entry-wise at random points, after clearing the pole of `r`.

use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::ad::{Dual, Field};
use crate::dense::CMat;
use crate::rmatrix::{make_r, RMatrixKind};
use crate::sample;
use crate::{Error, Result, C64};

// ═══════════════════════════════════════════════════════════════════════════
// Expressions
// ═══════════════════════════════════════════════════════════════════════════

#[derive(Debug)]
enum Node {
    Gen(usize),
    Const(C64),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    Powi(Expr, i32),
}

/// Rational expression over generators, shared by reference counting.
#[derive(Clone, Debug)]
pub struct Expr(Rc<Node>);

impl Expr {
    /// The `i`-th generator.
    pub fn gen(i: usize) -> Self {
        Expr(Rc::new(Node::Gen(i)))
    }

    /// A constant.
    pub fn cst(c: C64) -> Self {
        Expr(Rc::new(Node::Const(c)))
    }

    /// A real constant.
    pub fn real(r: f64) -> Self {
        Self::cst(C64::new(r, 0.0))
    }

    /// Integer power.
    pub fn powi(&self, k: i32) -> Self {
        Expr(Rc::new(Node::Powi(self.clone(), k)))
    }

    /// Evaluates at the given generator values. Division by a value below
    /// [`crate::EPS_SING`] is an error.
    pub fn eval<F: Field>(&self, vals: &[F]) -> Result<F> {
        Ok(match &*self.0 {
            Node::Gen(i) => *vals.get(*i).ok_or(Error::ShapeError { expected: *i + 1, found: vals.len() })?,
            Node::Const(c) => F::cst(*c),
            Node::Add(a, b) => a.eval(vals)? + b.eval(vals)?,
            Node::Sub(a, b) => a.eval(vals)? - b.eval(vals)?,
            Node::Mul(a, b) => a.eval(vals)? * b.eval(vals)?,
            Node::Div(a, b) => a.eval(vals)? / crate::ad::guard(b.eval(vals)?, "expression denominator")?,
            Node::Neg(a) => -a.eval(vals)?,
            Node::Powi(a, k) => {
                let base = a.eval(vals)?;
                if *k < 0 {
                    crate::ad::guard(base, "expression base")?;
                }
                Field::powi(base, *k)
            }
        })
    }

    /// Smallest denominator magnitude met while evaluating (∞ if none).
    pub fn min_denominator(&self, vals: &[C64]) -> Result<f64> {
        Ok(match &*self.0 {
            Node::Gen(_) | Node::Const(_) => f64::INFINITY,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                a.min_denominator(vals)?.min(b.min_denominator(vals)?)
            }
            Node::Div(a, b) => a.min_denominator(vals)?.min(b.min_denominator(vals)?).min(b.eval(vals)?.norm()),
            Node::Neg(a) => a.min_denominator(vals)?,
            Node::Powi(a, k) => {
                let m = a.min_denominator(vals)?;
                if *k < 0 {
                    m.min(a.eval(vals)?.norm())
                } else {
                    m
                }
            }
        })
    }

    /// Gradient `∂F/∂g_i` at the point, one dual evaluation per generator.
    pub fn gradient(&self, vals: &[C64]) -> Result<Vec<C64>> {
        (0..vals.len())
            .map(|i| {
                let seeded: Vec<Dual> =
                    vals.iter().enumerate().map(|(j, v)| if i == j { Dual::var(*v) } else { Dual::cst(*v) }).collect();
                Ok(self.eval(&seeded)?.du)
            })
            .collect()
    }

    /// Renumbers generators `i ↦ i + offset` (used for per-site copies).
    pub fn shifted(&self, offset: usize) -> Self {
        let s = |e: &Expr| e.shifted(offset);
        Expr(Rc::new(match &*self.0 {
            Node::Gen(i) => Node::Gen(i + offset),
            Node::Const(c) => Node::Const(*c),
            Node::Add(a, b) => Node::Add(s(a), s(b)),
            Node::Sub(a, b) => Node::Sub(s(a), s(b)),
            Node::Mul(a, b) => Node::Mul(s(a), s(b)),
            Node::Div(a, b) => Node::Div(s(a), s(b)),
            Node::Neg(a) => Node::Neg(s(a)),
            Node::Powi(a, k) => Node::Powi(s(a), *k),
        }))
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $node:ident) => {
        impl core::ops::$tr for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr(Rc::new(Node::$node(self, o)))
            }
        }
        impl core::ops::$tr for &Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                Expr(Rc::new(Node::$node(self.clone(), o.clone())))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl core::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr(Rc::new(Node::Neg(self)))
    }
}

impl core::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr(Rc::new(Node::Neg(self.clone())))
    }
}

/// 2×2 matrix of expressions, row-major.
pub type ExprMat = [Expr; 4];

fn mat_mul(a: &ExprMat, b: &ExprMat) -> ExprMat {
    core::array::from_fn(|idx| {
        let (i, j) = (idx / 2, idx % 2);
        &(&a[2 * i] * &b[j]) + &(&a[2 * i + 1] * &b[2 + j])
    })
}

// ═══════════════════════════════════════════════════════════════════════════
// Bracket tables
// ═══════════════════════════════════════════════════════════════════════════

/// Fundamental brackets `{g_i, g_j}`; pairs not listed Poisson-commute.
/// Antisymmetry is built in: only one orientation of each pair is stored.
#[derive(Clone, Debug)]
pub struct BracketTable {
    names: Vec<String>,
    entries: Vec<(usize, usize, Expr)>,
}

impl BracketTable {
    /// Builds a table from generator names and `(i, j, {g_i, g_j})` entries.
    pub fn new(names: &[&str], entries: Vec<(usize, usize, Expr)>) -> Result<Self> {
        for (i, j, _) in &entries {
            if *i == *j || *i >= names.len() || *j >= names.len() {
                return Err(Error::InvalidParam(alloc::format!("invalid bracket pair ({i}, {j})")));
            }
        }
        Ok(Self { names: names.iter().map(|s| String::from(*s)).collect(), entries })
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Whether the table has no generators.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Generator names.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of a named generator.
    pub fn index(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownGenerator(String::from(name)))
    }

    /// `{g_i, g_j}` as an expression (zero if unlisted).
    pub fn fundamental(&self, i: usize, j: usize) -> Expr {
        for (a, b, e) in &self.entries {
            if (*a, *b) == (i, j) {
                return e.clone();
            }
            if (*a, *b) == (j, i) {
                return -e;
            }
        }
        Expr::real(0.0)
    }

    /// The same table with the sign of one fundamental bracket flipped.
    pub fn with_flipped(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        for (a, b, e) in out.entries.iter_mut() {
            if (*a, *b) == (i, j) || (*a, *b) == (j, i) {
                *e = -&*e;
            }
        }
        out
    }

    /// `copies` independent copies of the table (ultra-locality): copy `s`
    /// owns generators `s·len .. (s+1)·len`, and cross-copy brackets vanish.
    pub fn replicate(&self, copies: usize) -> Self {
        let n = self.len();
        let mut names = Vec::new();
        let mut entries = Vec::new();
        for s in 0..copies {
            for name in &self.names {
                names.push(alloc::format!("{name}_{s}"));
            }
            for (i, j, e) in &self.entries {
                entries.push((i + s * n, j + s * n, e.shifted(s * n)));
            }
        }
        Self { names, entries }
    }

    /// Discrete NLS space bracket `{X, Y} = −1` (generators `X, Y`).
    pub fn dnls_space() -> Self {
        Self::new(&["X", "Y"], alloc::vec![(0, 1, Expr::real(-1.0))]).expect("valid")
    }

    /// Discrete NLS `V¹` time bracket `{Y, X} = 1`.
    pub fn dnls_v1() -> Self {
        Self::new(&["X", "Y"], alloc::vec![(1, 0, Expr::real(1.0))]).expect("valid")
    }

    /// Discrete NLS `V²` time brackets on `X, Y, 𝔹, ℂ`:
    /// `{Y, 𝔹} = 1 + XY`, `{X, ℂ} = −(1 + XY)`, `{𝔹, ℂ} = −(Y𝔹 + Xℂ)`.
    pub fn dnls_v2() -> Self {
        let (x, y, b, c) = (Expr::gen(0), Expr::gen(1), Expr::gen(2), Expr::gen(3));
        let d = &Expr::real(1.0) + &(&x * &y);
        Self::new(
            &["X", "Y", "B", "C"],
            alloc::vec![(1, 2, d.clone()), (0, 3, -&d), (2, 3, -(&(&y * &b) + &(&x * &c)))],
        )
        .expect("valid")
    }

    /// Semi-discrete `V¹` bracket `{u, û} = 1` (generators `u, û`).
    pub fn semi_v1() -> Self {
        Self::new(&["u", "uh"], alloc::vec![(0, 1, Expr::real(1.0))]).expect("valid")
    }

    /// Semi-discrete `V²` brackets on `u, û, 𝔹, ℂ`:
    /// `{u, 𝔹} = 1 + ûu`, `{û, ℂ} = −(1 + ûu)`, `{𝔹, ℂ} = −(u𝔹 + ûℂ)`.
    pub fn semi_v2() -> Self {
        let (u, uh, b, c) = (Expr::gen(0), Expr::gen(1), Expr::gen(2), Expr::gen(3));
        let d = &Expr::real(1.0) + &(&uh * &u);
        Self::new(
            &["u", "uh", "B", "C"],
            alloc::vec![(0, 2, d.clone()), (1, 3, -&d), (2, 3, -(&(&u * &b) + &(&uh * &c)))],
        )
        .expect("valid")
    }

    /// Ablowitz–Ladik bracket `{β, β̂} = 1 − ββ̂` (generators `β, β̂`), used
    /// for both the space and the time structure.
    pub fn al() -> Self {
        let (b, bh) = (Expr::gen(0), Expr::gen(1));
        Self::new(&["b", "bh"], alloc::vec![(0, 1, &Expr::real(1.0) - &(&b * &bh))]).expect("valid")
    }
}

/// A valuation of the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonPoint {
    /// Generator values, indexed like the table.
    pub values: Vec<C64>,
}

/// `{F, G}` at a point by the Leibniz rule.
pub fn poisson_bracket(f: &Expr, g: &Expr, table: &BracketTable, point: &PoissonPoint) -> Result<C64> {
    let df = f.gradient(&point.values)?;
    let dg = g.gradient(&point.values)?;
    let mut acc = C64::zero();
    for (i, j, e) in &table.entries {
        let w = e.eval(&point.values)?;
        acc += w * (df[*i] * dg[*j] - df[*j] * dg[*i]);
    }
    Ok(acc)
}

/// Jacobi residual `{g_i,{g_j,g_k}} + {g_j,{g_k,g_i}} + {g_k,{g_i,g_j}}` for
/// one generator triple at a point.
pub fn jacobi_residual(table: &BracketTable, point: &PoissonPoint, i: usize, j: usize, k: usize) -> Result<f64> {
    let outer = |a: usize, b: usize, c: usize| -> Result<C64> {
        // {g_a, {g_b, g_c}} = Σ_m {g_a, g_m} ∂{g_b,g_c}/∂g_m
        let inner = table.fundamental(b, c);
        let grad = inner.gradient(&point.values)?;
        let mut acc = C64::zero();
        for (m, dm) in grad.iter().enumerate() {
            acc += table.fundamental(a, m).eval(&point.values)? * dm;
        }
        Ok(acc)
    };
    Ok((outer(i, j, k)? + outer(j, k, i)? + outer(k, i, j)?).norm())
}

/// Largest Jacobi residual over all generator triples and random points.
pub fn jacobi_sweep(table: &BracketTable, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = sample::rng(seed);
    let n = table.len();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let point = PoissonPoint { values: (0..n).map(|_| sample::disk(&mut rng, 0.8)).collect() };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    worst = worst.max(jacobi_residual(table, &point, i, j, k)?);
                }
            }
        }
    }
    Ok(worst)
}

// ═══════════════════════════════════════════════════════════════════════════
// Matrix brackets
// ═══════════════════════════════════════════════════════════════════════════

/// Lax matrices whose Sklyanin bracket is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixFamily {
    /// Discrete NLS `L` with `{X, Y} = −1`.
    LDnls,
    /// Discrete NLS `V¹` with `{Y, X} = 1`.
    V1Dnls,
    /// Discrete NLS `V²` with the `X, Y, 𝔹, ℂ` table.
    V2Dnls,
    /// Ablowitz–Ladik `L`.
    LAl,
    /// Ablowitz–Ladik `V⁻`.
    VMinusAl,
    /// Ablowitz–Ladik `V⁺`.
    VPlusAl,
    /// Semi-discrete `V¹` with `{u, û} = 1`.
    V1Semi,
    /// Semi-discrete `V²` with the `u, û, 𝔹, ℂ` table.
    V2Semi,
}

impl MatrixFamily {
    /// All families.
    pub const ALL: [MatrixFamily; 8] = [
        MatrixFamily::LDnls,
        MatrixFamily::V1Dnls,
        MatrixFamily::V2Dnls,
        MatrixFamily::LAl,
        MatrixFamily::VMinusAl,
        MatrixFamily::VPlusAl,
        MatrixFamily::V1Semi,
        MatrixFamily::V2Semi,
    ];

    /// Stable name used by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            MatrixFamily::LDnls => "L_dnls",
            MatrixFamily::V1Dnls => "V1_dnls",
            MatrixFamily::V2Dnls => "V2_dnls",
            MatrixFamily::LAl => "L_al",
            MatrixFamily::VMinusAl => "Vminus_al",
            MatrixFamily::VPlusAl => "Vplus_al",
            MatrixFamily::V1Semi => "V1_semi",
            MatrixFamily::V2Semi => "V2_semi",
        }
    }

    /// Parses a family name.
    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParam(alloc::format!("unknown matrix family {s:?}")))
    }

    /// The bracket table of the family.
    pub fn table(&self) -> BracketTable {
        match self {
            MatrixFamily::LDnls => BracketTable::dnls_space(),
            MatrixFamily::V1Dnls => BracketTable::dnls_v1(),
            MatrixFamily::V2Dnls => BracketTable::dnls_v2(),
            MatrixFamily::LAl | MatrixFamily::VMinusAl | MatrixFamily::VPlusAl => BracketTable::al(),
            MatrixFamily::V1Semi => BracketTable::semi_v1(),
            MatrixFamily::V2Semi => BracketTable::semi_v2(),
        }
    }

    /// The classical r-matrix of the family.
    pub fn r_kind(&self) -> RMatrixKind {
        if self.is_trig() {
            RMatrixKind::TrigClassicalAl
        } else {
            RMatrixKind::RationalClassical
        }
    }

    fn is_trig(&self) -> bool {
        matches!(self, MatrixFamily::LAl | MatrixFamily::VMinusAl | MatrixFamily::VPlusAl)
    }

    /// The matrix at spectral value `λ` (AL families use `z = e^λ`), with
    /// generators numbered from `offset`.
    pub fn matrix(&self, lambda: C64, offset: usize) -> ExprMat {
        let g = |i: usize| Expr::gen(i + offset);
        let one = Expr::real(1.0);
        let lam = Expr::cst(lambda);
        let z = Expr::cst(lambda.exp());
        let zi = Expr::cst((-lambda).exp());
        match self {
            MatrixFamily::LDnls | MatrixFamily::V1Dnls => {
                let (x, y) = (g(0), g(1));
                [&(&lam + &one) + &(&x * &y), x, y, one]
            }
            MatrixFamily::V1Semi => {
                let (u, uh) = (g(0), g(1));
                [&(&lam + &one) + &(&uh * &u), uh, u, one]
            }
            MatrixFamily::V2Dnls | MatrixFamily::V2Semi => {
                // (p, s) = (X, Y) for the lattice, (û, u) for the semi-discrete system.
                let (p, s) = if *self == MatrixFamily::V2Dnls { (g(0), g(1)) } else { (g(1), g(0)) };
                let (b, c) = (g(2), g(3));
                let d = &one + &(&p * &s);
                let n2 = &(&(&s * &b) + &(&p * &c)) / &d;
                let a = &(&one + &(&b * &c)) / &d;
                [&(&(&lam * &lam) + &(&lam * &n2)) + &a, &(&lam * &p) + &b, &(&lam * &s) + &c, d]
            }
            MatrixFamily::LAl => [z, g(1), g(0), zi],
            MatrixFamily::VMinusAl => {
                let a = &-&one + &(&g(1) * &g(0));
                [z.clone(), g(1), g(0), &-&(&z * &a) + &zi]
            }
            MatrixFamily::VPlusAl => {
                let a = &-&one + &(&g(1) * &g(0));
                [&z - &(&zi * &a), g(1), g(0), zi]
            }
        }
    }

    /// Factor that clears the pole of `r(λ − μ)`.
    fn clearing(&self, d: C64) -> C64 {
        if self.is_trig() {
            d.sinh() * 2.0
        } else {
            d
        }
    }
}

/// Minimum admissible denominator at a sample point.
pub const MIN_DENOMINATOR: f64 = 0.1;

fn admissible(mats: &[&ExprMat], vals: &[C64]) -> Result<bool> {
    for m in mats {
        for e in m.iter() {
            if e.min_denominator(vals)? < MIN_DENOMINATOR {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Cleared residual of `{M(λ) ⊗, M(μ)} − [r(λ−μ), M(λ) ⊗ M(μ)]` at one point.
pub fn matrix_bracket_residual(
    family: MatrixFamily,
    table: &BracketTable,
    point: &PoissonPoint,
    lambda: C64,
    mu: C64,
) -> Result<f64> {
    let a = family.matrix(lambda, 0);
    let b = family.matrix(mu, 0);
    let mut lhs = CMat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    lhs[(2 * i + k, 2 * j + l)] = poisson_bracket(&a[2 * i + j], &b[2 * k + l], table, point)?;
                }
            }
        }
    }
    let eval = |m: &ExprMat| -> Result<CMat> {
        let v: Vec<C64> = m.iter().map(|e| e.eval(&point.values)).collect::<Result<_>>()?;
        CMat::from_rows(2, 2, v)
    };
    let mm = eval(&a)?.kron(&eval(&b)?);
    let r = make_r(family.r_kind(), lambda - mu)?;
    let rhs = r.commutator(&mm)?;
    Ok(lhs.sub(&rhs)?.max_abs() * family.clearing(lambda - mu).norm())
}

/// Samples a spectral pair from the box `re ∈ [−1, 1]`, `im ∈ [−0.5, 0.5]`
/// with `|λ − μ| ≥ 0.2`.
fn spectral_pair(rng: &mut sample::SeededRng) -> (C64, C64) {
    loop {
        let l = sample::boxed(rng, (-1.0, 1.0), (-0.5, 0.5));
        let m = sample::boxed(rng, (-1.0, 1.0), (-0.5, 0.5));
        if (l - m).norm() >= 0.2 {
            return (l, m);
        }
    }
}

fn random_point(rng: &mut sample::SeededRng, n: usize, mats: &[&ExprMat]) -> Result<PoissonPoint> {
    for _ in 0..1000 {
        let values: Vec<C64> = (0..n).map(|_| sample::disk(rng, 0.6)).collect();
        if admissible(mats, &values)? {
            return Ok(PoissonPoint { values });
        }
    }
    Err(Error::Singularity { what: "no admissible sample point", magnitude: 0.0 })
}

/// Largest cleared matrix-bracket residual over random admissible points.
pub fn check_matrix_bracket(family: MatrixFamily, table: &BracketTable, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = sample::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (l, m) = spectral_pair(&mut rng);
        let (a, b) = (family.matrix(l, 0), family.matrix(m, 0));
        let point = random_point(&mut rng, table.len(), &[&a, &b])?;
        worst = worst.max(matrix_bracket_residual(family, table, &point, l, m)?);
    }
    Ok(worst)
}

/// Largest `|{tr T(λ), tr T(μ)}|` for the ordered product of `sites` copies
/// of the family's matrix, each with its own generators (cross-site
/// brackets vanish).
pub fn transfer_involution(
    family: MatrixFamily,
    table: &BracketTable,
    sites: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if sites == 0 {
        return Err(Error::InvalidParam("at least one site is required".into()));
    }
    let per = table.len();
    let big = table.replicate(sites);
    let chain = |lambda: C64| -> ExprMat {
        let mut t = family.matrix(lambda, 0);
        for s in 1..sites {
            t = mat_mul(&family.matrix(lambda, s * per), &t);
        }
        t
    };
    let mut rng = sample::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (l, m) = spectral_pair(&mut rng);
        let (tl, tm) = (chain(l), chain(m));
        let site_mats: Vec<ExprMat> =
            (0..sites).flat_map(|s| [family.matrix(l, s * per), family.matrix(m, s * per)]).collect();
        let refs: Vec<&ExprMat> = site_mats.iter().collect();
        let point = random_point(&mut rng, big.len(), &refs)?;
        let tr_l = &tl[0] + &tl[3];
        let tr_m = &tm[0] + &tm[3];
        worst = worst.max(poisson_bracket(&tr_l, &tr_m, &big, &point)?.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn bracket_examples() {
        let t = BracketTable::semi_v2();
        let p = PoissonPoint { values: alloc::vec![c64(0.5, 0.0), c64(0.2, 0.0), c64(0.3, 0.1), c64(-0.2, 0.4)] };
        let v = poisson_bracket(&Expr::gen(0), &Expr::gen(2), &t, &p).unwrap();
        assert!((v - c64(1.1, 0.0)).norm() < 1e-15);
        let f = &Expr::gen(0) * &Expr::gen(3);
        assert_eq!(poisson_bracket(&f, &f, &t, &p).unwrap(), C64::zero());
        // {û, 1 + ûu} = −û with {u, û} = 1.
        let s = BracketTable::semi_v1();
        let q = PoissonPoint { values: alloc::vec![c64(0.4, 0.0), c64(0.3, 0.0)] };
        let n1 = &Expr::real(1.0) + &(&Expr::gen(1) * &Expr::gen(0));
        let v = poisson_bracket(&Expr::gen(1), &n1, &s, &q).unwrap();
        assert!((v + c64(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn leibniz_and_antisymmetry() {
        let t = BracketTable::dnls_v2();
        let mut rng = sample::rng(4);
        let (x, y, b, c) = (Expr::gen(0), Expr::gen(1), Expr::gen(2), Expr::gen(3));
        let f = &(&x * &b) / &(&Expr::real(1.0) + &(&y * &y));
        let g = &c - &(&x * &y);
        let h = &b + &(&c * &c);
        for _ in 0..10 {
            let p = PoissonPoint { values: (0..4).map(|_| sample::disk(&mut rng, 0.5)).collect() };
            let fg = poisson_bracket(&f, &g, &t, &p).unwrap();
            assert!((fg + poisson_bracket(&g, &f, &t, &p).unwrap()).norm() < 1e-14);
            let lhs = poisson_bracket(&f, &(&g * &h), &t, &p).unwrap();
            let rhs =
                fg * h.eval(&p.values).unwrap() + g.eval(&p.values).unwrap() * poisson_bracket(&f, &h, &t, &p).unwrap();
            assert!((lhs - rhs).norm() < 1e-11);
        }
    }

    #[test]
    fn jacobi_for_every_table() {
        for t in [
            BracketTable::dnls_space(),
            BracketTable::dnls_v1(),
            BracketTable::dnls_v2(),
            BracketTable::semi_v1(),
            BracketTable::semi_v2(),
            BracketTable::al(),
        ] {
            assert!(jacobi_sweep(&t, 20, 1).unwrap() < 1e-11);
        }
        let x = Expr::gen(0);
        let broken =
            BracketTable::new(&["a", "b", "c"], alloc::vec![(0, 1, Expr::gen(2)), (1, 2, x.clone()), (0, 2, &x * &x)])
                .unwrap();
        assert!(jacobi_sweep(&broken, 5, 1).unwrap() > 1e-3);
    }

    #[test]
    fn sklyanin_brackets_hold() {
        for fam in MatrixFamily::ALL {
            let r = check_matrix_bracket(fam, &fam.table(), 50, 3).unwrap();
            assert!(r < 1e-9, "{}: {r}", fam.name());
        }
    }

    #[test]
    fn wrong_signs_are_detected() {
        let t = BracketTable::dnls_space().with_flipped(0, 1);
        assert!(check_matrix_bracket(MatrixFamily::LDnls, &t, 5, 1).unwrap() > 1e-3);
        let t = BracketTable::dnls_v2().with_flipped(2, 3);
        assert!(check_matrix_bracket(MatrixFamily::V2Dnls, &t, 5, 1).unwrap() > 1e-3);
    }

    #[test]
    fn transfer_matrices_are_in_involution() {
        for fam in [MatrixFamily::LDnls, MatrixFamily::V2Dnls, MatrixFamily::LAl, MatrixFamily::V2Semi] {
            for sites in [2, 3] {
                let r = transfer_involution(fam, &fam.table(), sites, 10, 5).unwrap();
                assert!(r < 1e-9, "{} N={sites}: {r}", fam.name());
            }
        }
        let bad = BracketTable::dnls_v2().with_flipped(2, 3);
        assert!(transfer_involution(MatrixFamily::V2Dnls, &bad, 2, 5, 5).unwrap() > 1e-3);
    }
}
