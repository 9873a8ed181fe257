//! Argument parsing and dispatch.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use li_core::al::{AlCase, AlLattice};
use li_core::dnls::DnlsLattice;
use li_core::lattice::SpaceBc;
use li_core::ncalg::RelationSet;
use li_core::poisson::MatrixFamily;
use li_core::rmatrix::RMatrixKind;
use li_core::C64;

use crate::checks::{self, SolitonType};
use crate::config::{positive, RunConfig};
use crate::dump;
use crate::error::{CliError, Result};
use crate::report::{self, Report};

/// Verification and generation tools for discrete space–time integrable lattices.
#[derive(Debug, Parser)]
#[command(name = "li", version, about)]
pub struct Cli {
    /// Key-value configuration file (flags override its values).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// RNG seed (default: config file, then LI_SEED, then 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format on stdout.
    #[arg(long, global = true, value_enum)]
    pub report: Option<Format>,
    /// Also write the JSON reports to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// What to run.
    #[command(subcommand)]
    pub command: Command,
}

/// Report format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One summary line per check.
    Text,
    /// Pretty JSON array.
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

/// Top-level commands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical/quantum Yang–Baxter equations on seeded spectral pairs.
    Ybe(YbeArgs),
    /// Fully discrete NLS lattice.
    #[command(subcommand)]
    Dnls(DnlsCommand),
    /// Ablowitz–Ladik lattice.
    #[command(subcommand)]
    Al(AlCommand),
    /// Semi-discrete-time NLS system.
    #[command(subcommand)]
    Semi(SemiCommand),
    /// Quantum algebras.
    #[command(subcommand)]
    Quantum(QuantumCommand),
    /// Classical Poisson structures.
    #[command(subcommand)]
    Poisson(PoissonCommand),
}

/// `ybe` options.
#[derive(Debug, Args)]
pub struct YbeArgs {
    /// r/R-matrix tag (rational_classical, trig_classical_AL, yangian_quantum,
    /// trig_quantum_AL, xxz_quantum) or `all`.
    #[arg(long, default_value = "all")]
    pub kind: String,
    /// Real part of μ for the trigonometric quantum kinds.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_re: Option<f64>,
    /// Imaginary part of μ.
    #[arg(long, allow_hyphen_values = true)]
    pub mu_im: Option<f64>,
    /// Number of spectral pairs.
    #[arg(long)]
    pub samples: Option<usize>,
}

/// Lattice window options shared by several commands.
#[derive(Debug, Args, Clone)]
pub struct Window {
    /// Space sites.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Time sites.
    #[arg(long = "M")]
    pub m: Option<usize>,
}

/// Soliton type flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TypeArg {
    /// Type I.
    #[value(name = "I")]
    One,
    /// Type II.
    #[value(name = "II")]
    Two,
}

impl From<TypeArg> for SolitonType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::One => SolitonType::One,
            TypeArg::Two => SolitonType::Two,
        }
    }
}

/// Boundary condition flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BcArg {
    /// Space wraps.
    Periodic,
    /// Space is open.
    Open,
}

impl From<BcArg> for SpaceBc {
    fn from(b: BcArg) -> Self {
        match b {
            BcArg::Periodic => SpaceBc::Periodic,
            BcArg::Open => SpaceBc::Open,
        }
    }
}

/// `dnls` subcommands.
#[derive(Debug, Subcommand)]
pub enum DnlsCommand {
    /// Verify a lattice read from a CSV dump (fields X and Y).
    Verify {
        /// CSV dump.
        #[arg(long)]
        input: PathBuf,
        /// Space boundary condition of the dump.
        #[arg(long, value_enum, default_value = "periodic")]
        bc: BcArg,
    },
    /// Generate a closed-form soliton.
    Soliton {
        /// Soliton family.
        #[arg(long = "type", value_enum, default_value = "I")]
        ty: TypeArg,
        #[command(flatten)]
        window: Window,
        /// ξ is a primitive root of unity of this order.
        #[arg(long)]
        xi_root: Option<usize>,
        /// Run the equation, zero-curvature and conservation checks.
        #[arg(long)]
        verify: bool,
        /// Write the lattice to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Generate a random solution of the discrete heat equation.
    Heat {
        /// Number of modes.
        #[arg(long, default_value_t = 3)]
        modes: usize,
        #[command(flatten)]
        window: Window,
        /// Write the seed field `X0` to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Toda–Darboux images of random heat data, and soliton reproduction.
    Darboux {
        /// Number of random inputs.
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        window: Window,
        /// Write the first generated lattice to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// One implicit Newton time step compared with the closed form.
    Step {
        /// Soliton family.
        #[arg(long = "type", value_enum, default_value = "I")]
        ty: TypeArg,
        #[command(flatten)]
        window: Window,
        /// ξ is a primitive root of unity of this order.
        #[arg(long)]
        xi_root: Option<usize>,
        /// Time slice to step from.
        #[arg(long, default_value_t = 2)]
        a: usize,
    },
}

/// `al` subcommands.
#[derive(Debug, Subcommand)]
pub enum AlCommand {
    /// Verify a CSV dump (fields bh and b), or a seeded case-C evolution.
    Verify {
        /// CSV dump; a seeded evolution is used when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Equation case (A, B or C).
        #[arg(long, default_value = "C")]
        case: String,
        #[command(flatten)]
        window: Window,
    },
    /// Case-C stepper on seeded initial data, plus the mKdV identity.
    Step {
        /// Number of seeded evolutions.
        #[arg(long)]
        seeds: Option<usize>,
        #[command(flatten)]
        window: Window,
        /// Write the first evolution to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Conservation of traces and charges.
    Conserve {
        /// Number of seeded evolutions.
        #[arg(long)]
        seeds: Option<usize>,
        #[command(flatten)]
        window: Window,
    },
}

/// `semi` subcommands.
#[derive(Debug, Subcommand)]
pub enum SemiCommand {
    /// Equations and zero curvature on a seeded sample grid.
    Verify {
        /// Sample points per axis.
        #[arg(long)]
        points: Option<usize>,
    },
}

/// `quantum` subcommands.
#[derive(Debug, Subcommand)]
pub enum QuantumCommand {
    /// Exact checks: RTT, quantum determinant and exchange relations.
    Weyl {
        /// Relation set: qtime, appendixB, qboson or all.
        #[arg(long = "set", default_value = "all")]
        set: String,
    },
    /// Finite cyclic q-boson representations.
    Qboson {
        /// Smallest cyclic dimension.
        #[arg(long)]
        p_min: Option<usize>,
        /// Largest cyclic dimension.
        #[arg(long)]
        p_max: Option<usize>,
        /// Random draws per dimension.
        #[arg(long)]
        draws: Option<usize>,
    },
}

/// `poisson` subcommands.
#[derive(Debug, Subcommand)]
pub enum PoissonCommand {
    /// Sklyanin brackets, Jacobi identities and transfer involution.
    Check {
        /// Matrix family name or `all`.
        #[arg(long, default_value = "all")]
        family: String,
        /// Random points per family.
        #[arg(long)]
        samples: Option<usize>,
    },
}

/// Reports of a run plus the output settings.
#[derive(Debug)]
pub struct Outcome {
    /// Sorted reports.
    pub reports: Vec<Report>,
    /// Stdout format.
    pub format: Format,
    /// Optional JSON file.
    pub out: Option<PathBuf>,
}

impl Outcome {
    /// `0` when every report passes, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        if report::all_pass(&self.reports) {
            0
        } else {
            1
        }
    }
}

fn window(cfg: &RunConfig, w: &Window, n: usize, m: usize) -> Result<(usize, usize)> {
    Ok((positive("N", cfg.get("N", w.n, n)?)?, positive("M", cfg.get("M", w.m, m)?)?))
}

fn parse_case(s: &str) -> Result<AlCase> {
    s.parse().map_err(|e: li_core::Error| CliError::Config(e.to_string()))
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let seed = cfg.seed(cli.seed)?;
    let format = cfg.get("report", cli.report, Format::Text)?;
    let out = match (&cli.out, cfg.raw("out")) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(p)) => Some(PathBuf::from(p)),
        (None, None) => None,
    };
    let mut reports = match &cli.command {
        Command::Ybe(a) => {
            let samples = positive("samples", cfg.get("samples", a.samples, 100)?)?;
            let mu = C64::new(a.mu_re.unwrap_or(checks::DEFAULT_MU.re), a.mu_im.unwrap_or(checks::DEFAULT_MU.im));
            let kinds: Vec<RMatrixKind> = if a.kind == "all" {
                checks::ybe_kinds(mu).to_vec()
            } else {
                vec![RMatrixKind::from_tag(&a.kind, mu).map_err(|e| CliError::Config(e.to_string()))?]
            };
            kinds.into_iter().map(|k| checks::ybe(k, samples, seed)).collect::<Result<Vec<_>>>()?
        }
        Command::Dnls(c) => run_dnls(c, &cfg, seed)?,
        Command::Al(c) => run_al(c, &cfg, seed)?,
        Command::Semi(SemiCommand::Verify { points }) => {
            checks::semi_verify(seed, positive("points", cfg.get("points", *points, 5)?)?)?
        }
        Command::Quantum(QuantumCommand::Weyl { set }) => {
            let sets: Vec<RelationSet> = if set == "all" {
                RelationSet::ALL.to_vec()
            } else {
                vec![set.parse().map_err(|e: li_core::Error| CliError::Config(e.to_string()))?]
            };
            let mut r = checks::quantum_lax()?;
            for s in sets {
                r.push(checks::quantum_relations(s)?);
            }
            r.push(checks::quantum_semiclassical(seed)?);
            r
        }
        Command::Quantum(QuantumCommand::Qboson { p_min, p_max, draws }) => {
            let lo = cfg.get("p_min", *p_min, 3)?;
            let hi = cfg.get("p_max", *p_max, 8)?;
            if lo < 3 || hi < lo {
                return Err(CliError::Config(format!("invalid p range {lo}..={hi} (need 3 ≤ p_min ≤ p_max)")));
            }
            checks::qboson_checks(lo..=hi, positive("draws", cfg.get("draws", *draws, 20)?)?, seed)?
        }
        Command::Poisson(PoissonCommand::Check { family, samples }) => {
            let fams: Vec<MatrixFamily> = if family == "all" {
                MatrixFamily::ALL.to_vec()
            } else {
                vec![MatrixFamily::from_name(family).map_err(|e| CliError::Config(e.to_string()))?]
            };
            checks::poisson_checks(&fams, positive("samples", cfg.get("samples", *samples, 50)?)?, seed)?
        }
    };
    report::sort_reports(&mut reports);
    Ok(Outcome { reports, format, out })
}

fn run_dnls(c: &DnlsCommand, cfg: &RunConfig, seed: u64) -> Result<Vec<Report>> {
    match c {
        DnlsCommand::Verify { input, bc } => {
            let fields = dump::load_lattice(input, (*bc).into())?;
            let lat = DnlsLattice::new(dump::field(&fields, "X")?.clone(), dump::field(&fields, "Y")?.clone())?;
            let name = input.display().to_string();
            Ok(checks::verify_dnls(&lat, "dnls.verify", checks::DNLS_TOL)?
                .into_iter()
                .map(|r| r.param("input", &name))
                .collect())
        }
        DnlsCommand::Soliton { ty, window: w, xi_root, verify, csv } => {
            let (n, m) = window(cfg, w, 12, 12)?;
            let root = positive("xi_root", cfg.get("xi_root", *xi_root, 12)?)?;
            let lat = checks::soliton_lattice((*ty).into(), n, m, root)?;
            if let Some(path) = csv {
                dump::dump_lattice(path, &[("X", lat.x()), ("Y", lat.y())])?;
            }
            let mut out = vec![Report::below("dnls.soliton.generate", 0.0, 1.0)
                .param("type", format!("{ty:?}"))
                .param("N", n)
                .param("M", m)
                .param("xi_root", root)];
            if *verify {
                out.extend(checks::verify_dnls(&lat, "dnls.soliton", checks::DNLS_TOL)?);
                if lat.bc() == SpaceBc::Periodic {
                    let mut rng = li_core::sample::rng(seed);
                    let lambdas: Vec<C64> =
                        (0..5).map(|_| li_core::sample::boxed(&mut rng, (-1.5, 1.5), (-1.0, 1.0))).collect();
                    let d = li_core::dnls::trace_drift(&lat, &lambdas)?;
                    out.push(Report::below("dnls.soliton.conservation", d.max_residual, checks::DNLS_TOL).at(d.argmax));
                }
            }
            Ok(out)
        }
        DnlsCommand::Heat { modes, window: w, csv } => {
            let (n, m) = window(cfg, w, 8, 8)?;
            let heat = checks::random_heat(positive("modes", *modes)?, n, m, seed)?;
            if let Some(path) = csv {
                dump::dump_lattice(path, &[("X0", &heat.grid())])?;
            }
            let mut worst: f64 = 0.0;
            for a in 0..m as isize - 1 {
                for s in 1..n as isize - 1 {
                    worst = worst.max(heat.linear_residual(s, a).norm());
                }
            }
            Ok(vec![Report::below("dnls.heat.linear", worst, 1e-12).param("modes", modes).param("seed", seed)])
        }
        DnlsCommand::Darboux { samples, window: w, csv } => {
            let (n, m) = window(cfg, w, 8, 8)?;
            let samples = positive("samples", cfg.get("samples", *samples, 20)?)?;
            if let Some(path) = csv {
                let (_, lat) = checks::random_toda_lattice(li_core::sample::derive_seed(seed, 0), n, m)?;
                dump::dump_lattice(path, &[("X", lat.x()), ("Y", lat.y())])?;
            }
            checks::toda_generality(samples, seed, n, m)
        }
        DnlsCommand::Step { ty, window: w, xi_root, a } => {
            let (n, m) = window(cfg, w, 12, 6)?;
            let root = positive("xi_root", cfg.get("xi_root", *xi_root, 12)?)?;
            if a + 1 >= m {
                return Err(CliError::Config(format!("step slice a = {a} needs M > {}", a + 1)));
            }
            Ok(vec![checks::dnls_step((*ty).into(), n, m, root, *a)?])
        }
    }
}

fn run_al(c: &AlCommand, cfg: &RunConfig, seed: u64) -> Result<Vec<Report>> {
    match c {
        AlCommand::Verify { input, case, window: w } => {
            let case = parse_case(case)?;
            let lat = match input {
                Some(path) => {
                    let fields = dump::load_lattice(path, SpaceBc::Periodic)?;
                    AlLattice::new(dump::field(&fields, "bh")?.clone(), dump::field(&fields, "b")?.clone())?
                }
                None => {
                    let (n, m) = window(cfg, w, 7, 8)?;
                    checks::al_evolution(seed, n, m)?
                }
            };
            checks::verify_al(&lat, case, "al.verify", 1e-12)
        }
        AlCommand::Step { seeds, window: w, csv } => {
            let (n, m) = window(cfg, w, 7, 6)?;
            let seeds = positive("seeds", cfg.get("seeds", *seeds, 20)?)?;
            if let Some(path) = csv {
                let lat = checks::al_evolution(li_core::sample::derive_seed(seed, 0), n, m)?;
                dump::dump_lattice(path, &[("bh", lat.beta_hat()), ("b", lat.beta())])?;
            }
            let mut r = checks::al_stepper(seeds, seed, n, m)?;
            r.push(checks::mkdv(100, seed)?);
            Ok(r)
        }
        AlCommand::Conserve { seeds, window: w } => {
            let (n, m) = window(cfg, w, 7, 8)?;
            checks::al_conservation(positive("seeds", cfg.get("seeds", *seeds, 5)?)?, seed, n, m)
        }
    }
}

/// Prints an outcome and writes the JSON file if requested. A closed stdout
/// (e.g. piping into `head`) is not an error.
pub fn emit(outcome: &Outcome) -> Result<()> {
    use std::io::Write;
    let json = report::to_json(&outcome.reports)?;
    let mut text = String::new();
    match outcome.format {
        Format::Json => text.push_str(&json),
        Format::Text => {
            for r in &outcome.reports {
                text.push_str(&r.summary());
                text.push('\n');
            }
        }
    }
    if outcome.format == Format::Json {
        text.push('\n');
    }
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if let Some(path) = &outcome.out {
        std::fs::write(path, json + "\n")?;
    }
    Ok(())
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli).and_then(|o| emit(&o).map(|_| o.exit_code())) {
        Ok(code) => code,
        Err(e) => {
            let msg = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{msg}");
            e.exit_code()
        }
    }
}
