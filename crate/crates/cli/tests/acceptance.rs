//! End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero
//! exit status if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use li_cli::checks::{self, SolitonType};
use li_cli::report::{all_pass, Report};
use li_cli::Result;
use li_core::ncalg::RelationSet;
use li_core::poisson::MatrixFamily;

const SEED: u64 = 20_240_601;

// ═══════════════════════════════════════════════════════════════════════════
// Criteria
// ═══════════════════════════════════════════════════════════════════════════

fn ybe() -> Result<Vec<Report>> {
    checks::ybe_kinds(checks::DEFAULT_MU).into_iter().map(|k| checks::ybe(k, 100, SEED)).collect()
}

fn dnls_solitons() -> Result<Vec<Report>> {
    checks::dnls_solitons(12, 12, 12, SEED)
}

fn toda() -> Result<Vec<Report>> {
    checks::toda_generality(20, SEED, 8, 8)
}

fn conservation() -> Result<Vec<Report>> {
    let mut out = checks::dnls_conservation(12, 12, 12, SEED)?;
    out.extend(checks::al_conservation(5, SEED, 7, 8)?);
    Ok(out)
}

fn al_stepper() -> Result<Vec<Report>> {
    let mut out = checks::al_stepper(20, SEED, 7, 6)?;
    out.push(checks::mkdv(100, SEED)?);
    for ty in [SolitonType::One, SolitonType::Two] {
        out.push(checks::dnls_step(ty, 12, 6, 12, 2)?);
    }
    Ok(out)
}

fn semi() -> Result<Vec<Report>> {
    checks::semi_verify(SEED, 5)
}

fn ncalg() -> Result<Vec<Report>> {
    let mut out = checks::quantum_lax()?;
    for set in RelationSet::ALL {
        out.push(checks::quantum_relations(set)?);
    }
    out.push(checks::quantum_semiclassical(SEED)?);
    Ok(out)
}

fn qboson() -> Result<Vec<Report>> {
    checks::qboson_checks(3..=8, 20, SEED)
}

fn poisson() -> Result<Vec<Report>> {
    checks::poisson_checks(&MatrixFamily::ALL, 50, SEED)
}

// ═══════════════════════════════════════════════════════════════════════════
// Driver
// ═══════════════════════════════════════════════════════════════════════════

type Criterion = (&'static str, fn() -> Result<Vec<Report>>, Option<f64>);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Yang–Baxter equations (classical and quantum)", ybe, Some(1.0)),
        ("DNLS type I/II solitons and random-lattice control", dnls_solitons, None),
        ("Toda–Darboux generality and soliton reproduction", toda, None),
        ("conservation laws (DNLS traces, AL traces and charges)", conservation, None),
        ("AL case-C stepper, mKdV identity, DNLS Newton step", al_stepper, None),
        ("semi-discrete equations and zero curvature", semi, None),
        ("noncommutative algebra (RTT, qdet, relations)", ncalg, None),
        ("cyclic q-boson representations", qboson, Some(5.0)),
        ("Poisson brackets, Jacobi and involution", poisson, None),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match &result {
            Ok(reports) => {
                let bad: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.check.as_str()).collect();
                let worst = reports
                    .iter()
                    .filter(|r| r.tolerance < 1.0 && r.pass && matches!(r.gate, li_cli::report::Gate::Below))
                    .map(|r| r.max_residual)
                    .fold(0.0, f64::max);
                let slow = budget.is_some_and(|b| secs > b);
                let mut detail = format!("{} checks, worst gated residual {worst:.2e}, {secs:.2}s", reports.len());
                if !bad.is_empty() {
                    detail.push_str(&format!("; failing: {}", bad.join(", ")));
                }
                if slow {
                    detail.push_str(&format!("; over the {:.0}s budget", budget.unwrap_or_default()));
                }
                (all_pass(reports) && !slow, detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!("{} criterion {}: {name} ({detail})", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    if failures == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 9 criteria fail");
        ExitCode::FAILURE
    }
}
