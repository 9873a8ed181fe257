//! Named checks: each builds its inputs from a seed, runs the library
//! verifiers and condenses the outcome into [`Report`]s.

use std::time::Instant;

use li_core::al::{self, AlCase, AlCharge, AlLattice, Closure, MkdvStencil};
use li_core::dnls::{self, DnlsLattice, HeatMode, SolitonKind, SolitonSpec, TodaParams, VOrder};
use li_core::lattice::{SpaceBc, SweepResult};
use li_core::ncalg::{self, Coef, RelationSet};
use li_core::poisson::{self, BracketTable, MatrixFamily};
use li_core::qboson::{self, CoproductKind, CyclicRep, QLaxKind};
use li_core::rmatrix::{self, RMatrixKind};
use li_core::semidnls::{self, SemiFlow, SemiMode, SemiSolution};
use li_core::{c64, sample, C64};

use crate::error::Result;
use crate::report::Report;

// ═══════════════════════════════════════════════════════════════════════════
// Shared helpers
// ═══════════════════════════════════════════════════════════════════════════

/// Primitive `k`-th root of unity `e^{2πi j/k}`.
pub fn root_of_unity(j: f64, k: usize) -> C64 {
    C64::from_polar(1.0, std::f64::consts::TAU * j / k as f64)
}

/// Boundary constants used by every Toda-generated lattice.
pub fn default_toda() -> TodaParams {
    TodaParams::new(c64(0.7, 0.2), c64(1.3, -0.4)).expect("nonzero constants")
}

fn from_sweep(check: &str, s: &SweepResult, tol: f64, start: Instant) -> Report {
    Report::below(check, s.max_residual, tol).at(s.argmax).param("sites", s.sites).timed(start)
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

// ═══════════════════════════════════════════════════════════════════════════
// Yang–Baxter
// ═══════════════════════════════════════════════════════════════════════════

/// Default `μ` for the trigonometric quantum R-matrices.
pub const DEFAULT_MU: C64 = C64::new(0.35, 0.2);

/// YBE gate.
pub const YBE_TOL: f64 = 1e-11;

/// CYBE/QYBE sweep of one kind.
pub fn ybe(kind: RMatrixKind, samples: usize, seed: u64) -> Result<Report> {
    let start = Instant::now();
    let s = rmatrix::ybe_sweep(kind, samples, seed)?;
    Ok(Report::below(&format!("ybe.{}", kind.tag()), s.max_residual, YBE_TOL)
        .param("kind", kind.tag())
        .param("samples", s.samples)
        .param("seed", seed)
        .param("worst_pair", format!("({}, {})", s.worst.0, s.worst.1))
        .timed(start))
}

/// The five r/R-matrices of the lattices.
pub fn ybe_kinds(mu: C64) -> [RMatrixKind; 5] {
    [
        RMatrixKind::RationalClassical,
        RMatrixKind::TrigClassicalAl,
        RMatrixKind::YangianQuantum,
        RMatrixKind::TrigQuantumAl { mu },
        RMatrixKind::XxzQuantum { mu },
    ]
}

// ═══════════════════════════════════════════════════════════════════════════
// Discrete NLS
// ═══════════════════════════════════════════════════════════════════════════

/// Soliton family selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolitonType {
    /// One space mode `ξ`.
    One,
    /// Two space modes `ξ, ξ³`.
    Two,
}

/// The canonical soliton of a type on an `n × m` window with `ξᵏ = 1`.
pub fn soliton_kind(ty: SolitonType, xi_root: usize) -> SolitonKind {
    let xi = root_of_unity(1.0, xi_root);
    match ty {
        SolitonType::One => SolitonKind::TypeI { c1: C64::new(1.0, 0.0), c2: c64(0.5, 0.2), xi },
        SolitonType::Two => SolitonKind::TypeII { c1: C64::new(1.0, 0.0), c2: c64(0.4, 0.3), eta: xi, eps: xi.powi(3) },
    }
}

/// Builds the canonical soliton lattice; periodic when `ξⁿ = 1`.
pub fn soliton_lattice(ty: SolitonType, n: usize, m: usize, xi_root: usize) -> Result<DnlsLattice> {
    let bc = if n % xi_root == 0 { SpaceBc::Periodic } else { SpaceBc::Open };
    Ok(dnls::soliton(&SolitonSpec { kind: soliton_kind(ty, xi_root), n, m, toda: default_toda(), bc })?)
}

/// DNLS solution gate.
pub const DNLS_TOL: f64 = 1e-9;

/// Equation and zero-curvature sweeps of a lattice.
pub fn verify_dnls(lat: &DnlsLattice, prefix: &str, tol: f64) -> Result<Vec<Report>> {
    let start = Instant::now();
    let eq = dnls::sweep_equations(lat)?;
    let r1 = from_sweep(&format!("{prefix}.equations"), &eq.max_nonlinear(), tol, start);
    let start = Instant::now();
    let zc = dnls::sweep_zero_curvature(lat, VOrder::Two)?;
    let r2 = from_sweep(&format!("{prefix}.zero_curvature"), &zc, tol, start);
    Ok(vec![r1, r2])
}

/// Random (non-solution) lattices must violate the equations.
pub fn dnls_negative_control(n: usize, m: usize, seed: u64) -> Result<Report> {
    let start = Instant::now();
    let lat = DnlsLattice::random(n, m, SpaceBc::Periodic, 0.5, seed)?;
    let eq = dnls::sweep_equations(&lat)?.max_nonlinear();
    let zc = dnls::sweep_zero_curvature(&lat, VOrder::Two)?;
    Ok(Report::above("dnls.random.violation", eq.max_residual.min(zc.max_residual), 1e-3)
        .param("seed", seed)
        .param("N", n)
        .param("M", m)
        .timed(start))
}

/// Type I and II solitons plus the random control.
pub fn dnls_solitons(n: usize, m: usize, xi_root: usize, seed: u64) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for (ty, name) in [(SolitonType::One, "I"), (SolitonType::Two, "II")] {
        let lat = soliton_lattice(ty, n, m, xi_root)?;
        for r in verify_dnls(&lat, &format!("dnls.soliton{name}"), DNLS_TOL)? {
            out.push(r.param("type", name).param("N", n).param("M", m).param("xi_root", xi_root));
        }
    }
    out.push(dnls_negative_control(n, m, seed)?);
    Ok(out)
}

/// Toda generality gate.
pub const TODA_TOL: f64 = 1e-8;

/// Draws an admissible random three-mode heat input: `|ξ| ∈ [0.85, 1.15]`,
/// amplitudes near 1, and Darboux denominators clear of zero.
pub fn random_toda_lattice(seed: u64, n: usize, m: usize) -> Result<(dnls::HeatSolution, DnlsLattice)> {
    let mut rng = sample::rng(seed);
    loop {
        let modes: Vec<HeatMode> = (0..3)
            .map(|_| {
                HeatMode::new(C64::new(1.0, 0.0) + sample::disk(&mut rng, 0.5), sample::annulus(&mut rng, 0.85, 1.15))
            })
            .collect::<li_core::Result<_>>()?;
        let heat = dnls::heat_solution(&modes, n, m)?;
        match dnls::toda_darboux(&heat, default_toda()) {
            Ok(lat) => {
                let scale = lat.x().max_abs().max(lat.y().max_abs());
                if scale < 10.0 {
                    return Ok((heat, lat));
                }
            }
            Err(li_core::Error::Singularity { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
}

/// Toda images of random heat data solve the lattice, and the canonical
/// mode choices reproduce the closed-form solitons.
pub fn toda_generality(samples: usize, seed: u64, n: usize, m: usize) -> Result<Vec<Report>> {
    let start = Instant::now();
    let mut worst = SweepResult::new();
    for s in 0..samples as u64 {
        let (heat, lat) = random_toda_lattice(sample::derive_seed(seed, s), n, m)?;
        worst.merge(&dnls::sweep_equations(&lat)?.max_nonlinear());
        worst.merge(&dnls::sweep_zero_curvature(&lat, VOrder::Two)?);
        worst.merge(&dnls::verify_darboux_chain(&heat, &lat)?);
    }
    let mut out = vec![from_sweep("dnls.toda.random", &worst, TODA_TOL, start)
        .param("samples", samples)
        .param("seed", seed)
        .param("N", n)
        .param("M", m)];
    for (ty, name) in [(SolitonType::One, "I"), (SolitonType::Two, "II")] {
        let start = Instant::now();
        let closed = soliton_lattice(ty, 12, 12, 12)?;
        let heat = dnls::heat_solution(&dnls::soliton_heat_modes(&soliton_kind(ty, 12))?, 12, 12)?;
        let toda = dnls::toda_darboux(&heat, default_toda())?;
        let d = toda.x().max_diff(closed.x())?.max(toda.y().max_diff(closed.y())?);
        out.push(Report::below(&format!("dnls.toda.soliton{name}"), d, 1e-12).param("type", name).timed(start));
    }
    Ok(out)
}

/// Random heat solution of `modes` modes (for dumps).
pub fn random_heat(modes: usize, n: usize, m: usize, seed: u64) -> Result<dnls::HeatSolution> {
    let mut rng = sample::rng(seed);
    let modes: Vec<HeatMode> = (0..modes)
        .map(|_| HeatMode::new(C64::new(1.0, 0.0) + sample::disk(&mut rng, 0.5), sample::annulus(&mut rng, 0.85, 1.15)))
        .collect::<li_core::Result<_>>()?;
    Ok(dnls::heat_solution(&modes, n, m)?)
}

/// Space-transfer traces are time independent on periodic solitons.
pub fn dnls_conservation(n: usize, m: usize, xi_root: usize, seed: u64) -> Result<Vec<Report>> {
    let mut rng = sample::rng(seed);
    let lambdas: Vec<C64> = (0..5).map(|_| sample::boxed(&mut rng, (-1.5, 1.5), (-1.0, 1.0))).collect();
    let mut out = Vec::new();
    for (ty, name) in [(SolitonType::One, "I"), (SolitonType::Two, "II")] {
        let start = Instant::now();
        let lat = soliton_lattice(ty, n, m, xi_root)?;
        let d = dnls::trace_drift(&lat, &lambdas)?;
        out.push(from_sweep(&format!("dnls.conservation.soliton{name}"), &d, DNLS_TOL, start).param("lambdas", 5));
    }
    Ok(out)
}

/// Newton time step against the closed-form soliton.
pub fn dnls_step(ty: SolitonType, n: usize, m: usize, xi_root: usize, a: usize) -> Result<Report> {
    let start = Instant::now();
    let lat = soliton_lattice(ty, n, m, xi_root)?;
    let step = dnls::newton_time_step(&lat, a as isize, 1e-12, 50)?;
    let mut err: f64 = 0.0;
    for s in 0..n {
        err = err.max((step.x_next[s] - lat.x().at(s, a + 1)).norm());
        err = err.max((step.y_next[s] - lat.y().at(s, a)).norm());
    }
    Ok(Report::below("dnls.step.newton", err, DNLS_TOL)
        .param("iterations", step.iterations)
        .param("residual", format!("{:.3e}", step.residual))
        .param("a", a)
        .timed(start))
}

// ═══════════════════════════════════════════════════════════════════════════
// Ablowitz–Ladik
// ═══════════════════════════════════════════════════════════════════════════

fn random_slice(rng: &mut sample::SeededRng, n: usize, r: f64) -> Vec<C64> {
    (0..n).map(|_| sample::disk(rng, r)).collect()
}

/// A seeded case-C evolution on a ring of `n` sites for `m` slices.
pub fn al_evolution(seed: u64, n: usize, m: usize) -> Result<AlLattice> {
    let mut rng = sample::rng(seed);
    Ok(al::evolve_case_c(&random_slice(&mut rng, n, 0.1), &random_slice(&mut rng, n, 0.1), m)?)
}

/// Equation sweeps of an AL lattice for a case.
pub fn verify_al(lat: &AlLattice, case: AlCase, prefix: &str, tol: f64) -> Result<Vec<Report>> {
    let start = Instant::now();
    let (eq, full) = al::sweep_al(lat, case)?;
    Ok(vec![
        from_sweep(&format!("{prefix}.equations"), &eq, tol, start).param("case", case),
        from_sweep(&format!("{prefix}.zero_curvature"), &full, tol.max(1e-12), start).param("case", case),
    ])
}

/// The case-C stepper reproduces exact solutions on every seed.
pub fn al_stepper(seeds: usize, seed: u64, n: usize, m: usize) -> Result<Vec<Report>> {
    let start = Instant::now();
    let (mut eq, mut full) = (SweepResult::new(), SweepResult::new());
    let mut closure: f64 = 0.0;
    for s in 0..seeds as u64 {
        let lat = al_evolution(sample::derive_seed(seed, s), n, m)?;
        let (e, f) = al::sweep_al(&lat, AlCase::C)?;
        eq.merge(&e);
        full.merge(&f);
        let a = 1;
        let step = al::step_case_c(lat.beta_hat().slice(a), lat.beta().slice(a - 1), Closure::Periodic)?;
        let scale = step.beta.iter().fold(1.0f64, |m, v| m.max(v.norm()));
        closure = closure.max(step.closure_residual / scale);
    }
    let params = |r: Report| r.param("seeds", seeds).param("seed", seed).param("N", n).param("M", m);
    let neg_start = Instant::now();
    let random = AlLattice::random(n, m, SpaceBc::Periodic, 0.5, seed)?;
    let (re, _) = al::sweep_al(&random, AlCase::C)?;
    Ok(vec![
        params(from_sweep("al.step.equations", &eq, 1e-13, start)),
        params(from_sweep("al.step.zero_curvature", &full, 1e-12, start)),
        params(Report::below("al.step.closure", closure, 1e-10)),
        Report::above("al.random.violation", re.max_residual, 1e-3).param("seed", seed).timed(neg_start),
    ])
}

/// The mKdV identity on random stencils.
pub fn mkdv(draws: usize, seed: u64) -> Result<Report> {
    let start = Instant::now();
    let mut rng = sample::rng(seed);
    let worst = max_of((0..draws).map(|_| al::mkdv_check(&MkdvStencil::random(&mut rng, 1.0)).1));
    Ok(Report::below("al.mkdv.identity", worst, 1e-12)
        .param("draws", draws)
        .param("coefficients", format!("{:?}", al::MKDV_COEFFS))
        .timed(start))
}

/// Traces and space charges are constant along case-C evolutions.
pub fn al_conservation(seeds: usize, seed: u64, n: usize, m: usize) -> Result<Vec<Report>> {
    let mut rng = sample::rng(seed ^ 0x5eed);
    let zs: Vec<C64> = (0..5).map(|_| sample::annulus(&mut rng, 0.6, 1.4)).collect();
    let (mut tr, mut hp, mut hm) = (SweepResult::new(), SweepResult::new(), SweepResult::new());
    let start = Instant::now();
    for s in 0..seeds as u64 {
        let lat = al_evolution(sample::derive_seed(seed, s), n, m)?;
        tr.merge(&al::trace_drift(&lat, AlCase::C, &zs)?);
        hp.merge(&al::charge_drift(&lat, AlCharge::HsPlus, AlCase::C)?);
        hm.merge(&al::charge_drift(&lat, AlCharge::HsMinus, AlCase::C)?);
    }
    let mut out = vec![
        from_sweep("al.conservation.trace", &tr, DNLS_TOL, start),
        from_sweep("al.conservation.HS+", &hp, DNLS_TOL, start),
        from_sweep("al.conservation.HS-", &hm, DNLS_TOL, start),
    ];
    // Time charges on space-marched, time-periodic configurations.
    let mut rng = sample::rng(seed);
    for (case, kind, name) in [(AlCase::C, AlCharge::HtMinus, "HT-"), (AlCase::B, AlCharge::HtPlus, "HT+")] {
        let start = Instant::now();
        let lat = al::march_space(case, &random_slice(&mut rng, m, 0.1), &random_slice(&mut rng, m, 0.1), n)?;
        let d = al::charge_drift(&lat, kind, case)?;
        out.push(from_sweep(&format!("al.conservation.{name}"), &d, DNLS_TOL, start).param("case", case));
    }
    Ok(out.into_iter().map(|r| r.param("seeds", seeds).param("N", n).param("M", m)).collect())
}

// ═══════════════════════════════════════════════════════════════════════════
// Semi-discrete NLS
// ═══════════════════════════════════════════════════════════════════════════

fn random_semi(seed: u64, flow: SemiFlow) -> Result<SemiSolution> {
    let mut rng = sample::rng(seed);
    let modes = (0..2)
        .map(|_| SemiMode::new(C64::new(1.0, 0.0) + sample::disk(&mut rng, 0.4), sample::disk(&mut rng, 0.45), flow))
        .collect::<li_core::Result<Vec<_>>>()?;
    Ok(SemiSolution::new(modes, C64::new(0.8, 0.0) + sample::disk(&mut rng, 0.3))?)
}

/// Semi-discrete gate.
pub const SEMI_TOL: f64 = 1e-8;

/// Semi-discrete equations and zero curvature on a `points × points` sample.
pub fn semi_verify(seed: u64, points: usize) -> Result<Vec<Report>> {
    let xs = semidnls::x_grid(-1.0, 1.0, points);
    let times = 0..points as i64;
    let heat = random_semi(seed, SemiFlow::Heat)?;
    let transport = random_semi(sample::derive_seed(seed, 1), SemiFlow::Transport)?;
    let worst = |v: [f64; 7]| max_of(v);
    let mut out = Vec::new();

    let start = Instant::now();
    let s = semidnls::sweep(times.clone(), &xs, |a, x| Ok(worst(semidnls::residuals_equations(&heat, a, x)?)))?;
    out.push(from_sweep("semi.heat.equations", &s, SEMI_TOL, start));
    let start = Instant::now();
    let s = semidnls::sweep(times.clone(), &xs, |a, x| semidnls::residual_zero_curvature(&heat, a, x, VOrder::Two))?;
    out.push(from_sweep("semi.heat.zero_curvature", &s, SEMI_TOL, start));
    let start = Instant::now();
    let s = semidnls::sweep(times.clone(), &xs, |a, x| Ok(max_of(semidnls::residuals_transport(&transport, a, x)?)))?;
    out.push(from_sweep("semi.transport.equations", &s, SEMI_TOL, start));
    let start = Instant::now();
    let s =
        semidnls::sweep(times.clone(), &xs, |a, x| semidnls::residual_zero_curvature(&transport, a, x, VOrder::One))?;
    out.push(from_sweep("semi.transport.zero_curvature", &s, SEMI_TOL, start));

    // Wrong dispersion: shift every rate off ln(1 + k²).
    let start = Instant::now();
    let wrong_modes: Vec<SemiMode> =
        heat.modes().iter().map(|md| SemiMode { c: md.c, k: md.k, rate: md.rate + C64::new(0.2, 0.0) }).collect();
    let wrong = SemiSolution::new(wrong_modes, C64::new(0.9, 0.0))?;
    let s = semidnls::sweep(times, &xs, |a, x| Ok(worst(semidnls::residuals_equations(&wrong, a, x)?)))?;
    out.push(Report::above("semi.wrong_dispersion.violation", s.max_residual, 1e-3).timed(start));
    Ok(out.into_iter().map(|r| r.param("seed", seed).param("points", points)).collect())
}

// ═══════════════════════════════════════════════════════════════════════════
// Quantum, exact
// ═══════════════════════════════════════════════════════════════════════════

fn exact(check: &str, failures: usize, start: Instant) -> Report {
    Report::below(check, failures as f64, 1.0).param("exact", true).timed(start)
}

fn render_poly(f: &Option<Vec<Coef>>) -> String {
    match f {
        None => "non-scalar".into(),
        Some(cs) => {
            let terms: Vec<String> = cs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| match k {
                    0 => format!("{c}"),
                    1 => format!("({c})λ"),
                    _ => format!("({c})λ^{k}"),
                })
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        }
    }
}

/// RTT and quantum-determinant checks of `ℒ¹` and `ℒ²`.
pub fn quantum_lax() -> Result<Vec<Report>> {
    let mut out = Vec::new();
    let start = Instant::now();
    let l1 = ncalg::build_l1_weyl();
    let r = ncalg::check_rtt_nc(&l1);
    out.push(exact("quantum.rtt.L1", r.nonzero, start));
    let start = Instant::now();
    let rep = ncalg::build_l2_diffrep(Coef::zero())?;
    let r = ncalg::check_rtt_nc(&rep.lax);
    out.push(exact("quantum.rtt.L2", r.nonzero, start));

    let start = Instant::now();
    let q = ncalg::check_qdet_nc(&l1, &[Coef::one(), Coef::one()]);
    out.push(exact("quantum.qdet.L1", usize::from(!q.pass()), start).param("f", render_poly(&q.scalar_f())));
    let start = Instant::now();
    let expected = [Coef::zero(), Coef::int(-1), Coef::one()];
    let q = ncalg::check_qdet_nc(&rep.lax, &expected);
    out.push(
        exact("quantum.qdet.L2", usize::from(!q.pass()), start)
            .param("f", render_poly(&q.scalar_f()))
            .param("central", q.central),
    );
    Ok(out)
}

/// Exchange-relation sets, each identity exact.
pub fn quantum_relations(set: RelationSet) -> Result<Report> {
    let start = Instant::now();
    let results = ncalg::check_relations(set)?;
    let failures: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.relation.as_str()).collect();
    let mut r =
        exact(&format!("quantum.relations.{}", set.name()), failures.len(), start).param("relations", results.len());
    if !failures.is_empty() {
        r = r.param("failing", failures.join("; "));
    }
    Ok(r)
}

/// First-order `ℏ` limit of the time-like algebra against the Poisson table.
pub fn quantum_semiclassical(seed: u64) -> Result<Report> {
    let start = Instant::now();
    let w = ncalg::semiclassical_check(5, seed)?;
    Ok(Report::below("quantum.semiclassical", w, 1e-12).param("seed", seed).timed(start))
}

// ═══════════════════════════════════════════════════════════════════════════
// q-boson representations
// ═══════════════════════════════════════════════════════════════════════════

/// q-boson checks for every `p` in the range, `draws` random draws each.
pub fn qboson_checks(p_range: std::ops::RangeInclusive<usize>, draws: usize, seed: u64) -> Result<Vec<Report>> {
    let mut rng = sample::rng(seed);
    let (mut alg, mut rtt, mut gauge, mut cop, mut cop_rtt) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    // Negative control: the same Lax operator against R with μ → −μ.
    let mut wrong_r = f64::INFINITY;
    let start = Instant::now();
    for p in p_range.clone() {
        for _ in 0..draws {
            let xi = sample::annulus(&mut rng, 0.6, 1.4);
            let zeta = sample::annulus(&mut rng, 0.6, 1.4);
            let l1 = sample::boxed(&mut rng, (-0.6, 0.6), (-0.3, 0.3));
            let l2 = sample::boxed(&mut rng, (-0.6, 0.6), (-0.3, 0.3));
            let rep1 = CyclicRep::new(p, 1, xi, zeta)?;
            alg = alg.max(qboson::check_qboson_algebra(&rep1)?.max());
            for kind in [QLaxKind::L, QLaxKind::LMinus, QLaxKind::LPlus] {
                rtt = rtt.max(qboson::check_rtt_rep(&rep1, kind, l1, l2)?);
            }
            let flipped = RMatrixKind::TrigQuantumAl { mu: -rep1.mu() };
            wrong_r = wrong_r.min(qboson::check_rtt(&qboson::qlax(&rep1, QLaxKind::L)?, flipped, l1, l2)?);
            let rep2 = CyclicRep::new(p, 2, xi, zeta)?;
            gauge = gauge.max(qboson::gauge_check(&rep2, l1, l2)?.max());
            for which in CoproductKind::ALL {
                let r = qboson::coproduct_check(&rep2, which, l1, l2)?;
                cop = cop.max(r.lower.max(r.upper));
                cop_rtt = cop_rtt.max(r.rtt);
            }
        }
    }
    let range = format!("{}..={}", p_range.start(), p_range.end());
    let tag = |r: Report| r.param("p", &range).param("draws", draws).param("seed", seed).timed(start);
    Ok(vec![
        tag(Report::below("qboson.algebra", alg, 1e-13)),
        tag(Report::below("qboson.rtt", rtt, 1e-11)),
        tag(Report::below("qboson.gauge", gauge, 1e-11)),
        tag(Report::below("qboson.coproduct", cop, 1e-12)),
        tag(Report::below("qboson.coproduct_rtt", cop_rtt, 1e-11)),
        tag(Report::above("qboson.wrong_r.violation", wrong_r, 1e-3)),
    ])
}

// ═══════════════════════════════════════════════════════════════════════════
// Poisson structures
// ═══════════════════════════════════════════════════════════════════════════

/// Matrix brackets, Jacobi identities and transfer involution.
pub fn poisson_checks(families: &[MatrixFamily], samples: usize, seed: u64) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    for fam in families {
        let start = Instant::now();
        let r = poisson::check_matrix_bracket(*fam, &fam.table(), samples, seed)?;
        out.push(
            Report::below(&format!("poisson.bracket.{}", fam.name()), r, 1e-9)
                .param("samples", samples)
                .param("seed", seed)
                .timed(start),
        );
        let start = Instant::now();
        let mut inv: f64 = 0.0;
        for sites in [2, 3] {
            inv = inv.max(poisson::transfer_involution(*fam, &fam.table(), sites, 10, seed)?);
        }
        out.push(
            Report::below(&format!("poisson.involution.{}", fam.name()), inv, 1e-9).param("sites", "2,3").timed(start),
        );
    }
    let tables = [
        ("dnls_space", BracketTable::dnls_space()),
        ("dnls_v1", BracketTable::dnls_v1()),
        ("dnls_v2", BracketTable::dnls_v2()),
        ("semi_v1", BracketTable::semi_v1()),
        ("semi_v2", BracketTable::semi_v2()),
        ("al", BracketTable::al()),
    ];
    for (name, t) in tables {
        let start = Instant::now();
        let j = poisson::jacobi_sweep(&t, samples.clamp(1, 20), seed)?;
        out.push(Report::below(&format!("poisson.jacobi.{name}"), j, 1e-11).timed(start));
    }
    let start = Instant::now();
    let bad = BracketTable::dnls_v2().with_flipped(2, 3);
    let r = poisson::check_matrix_bracket(MatrixFamily::V2Dnls, &bad, 5, seed)?;
    out.push(Report::above("poisson.flipped_sign.violation", r, 1e-3).timed(start));
    Ok(out)
}
