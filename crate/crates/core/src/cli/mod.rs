//! `hmlab solve|verify|refine|metric-check`.
//!
//! Exit codes: 0 pass, 1 check failure, 2 solver divergence, 3 usage or spec error.

mod checks;
mod spec;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use checks::{run_check, Check, CheckContext, CheckOutcome, Status};
pub use spec::{parse_coeffs, parse_map, parse_metric};

use crate::analysis::{JacobianBundle, DEFAULT_FLOOR};
use crate::error::{Error, Result};
use crate::grid::{ComplexField, Grid};
use crate::hmfield;
use crate::io::write_atomic;
use crate::metrics::{verify_metric_consistency, ConformalMetric, MetricKind};
use crate::refine::RefinementStudy;
use crate::solver::{solve_harmonic, HarmonicSolution, SolutionSummary, SolverConfig, Sweep};
use crate::tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "hmlab", version, about = "Harmonic-map numerical lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Dirichlet problem for a harmonic map into a conformal target.
    Solve(SolveArgs),
    /// Evaluate identity checks on an analytic map or a stored field.
    Verify(VerifyArgs),
    /// Grid-refinement study of check residuals.
    Refine(RefineArgs),
    /// Compare closed-form curvature and `(log rho^2)_w` against finite differences.
    MetricCheck(MetricCheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 65)]
    pub nx: usize,
    #[arg(long, default_value_t = 65)]
    pub ny: usize,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, default_value_t = 0.015625)]
    pub s: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<Grid> {
        Grid::new(self.x0, self.y0, self.nx, self.ny, self.s)
            .map_err(|e| Error::Config(format!("--nx/--ny/--x0/--y0/--s: {e}")))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0.8)]
    pub omega: f64,
    #[arg(long, value_enum, default_value = "fast-poisson")]
    pub sweep: SweepArg,
    #[arg(long, default_value_t = 50)]
    pub patience: usize,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum SweepArg {
    FastPoisson,
    Jacobi,
    GaussSeidelRowmajor,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            tol: self.tol,
            max_iters: self.max_iters,
            omega: self.omega,
            sweep: match self.sweep {
                SweepArg::FastPoisson => Sweep::FastPoisson,
                SweepArg::Jacobi => Sweep::Jacobi,
                SweepArg::GaussSeidelRowmajor => Sweep::GaussSeidelRowMajor,
            },
            patience: self.patience,
        };
        cfg.validate()
            .map_err(|e| Error::Config(format!("--tol/--max-iters/--omega/--patience: {e}")))?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value = "euclidean")]
    pub metric: String,
    /// Map whose samples on the grid edges are the Dirichlet data.
    #[arg(long)]
    pub boundary: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value = "euclidean")]
    pub metric: String,
    /// Analytic map, checked with exact derivatives.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub map: Option<String>,
    /// HMFIELD file, checked with finite differences; a `.json` sidecar supplies the solver residual.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Comma-separated check names; all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub checks: Vec<Check>,
    #[arg(long, default_value = "euclidean")]
    pub domain_metric: String,
    /// Write a per-node CSV for every report.
    #[arg(long)]
    pub csv: bool,
    /// Nodes skipped along every edge of a field input.
    #[arg(long, default_value_t = 0)]
    pub margin: usize,
    #[arg(long, default_value_t = DEFAULT_FLOOR)]
    pub floor: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    /// Coarsest grid; each further level halves the spacing.
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[arg(long, default_value = "euclidean")]
    pub metric: String,
    /// Analytic map, checked with exact derivatives at every level.
    #[arg(
        long,
        conflicts_with = "boundary",
        required_unless_present = "boundary"
    )]
    pub map: Option<String>,
    /// Boundary map; every level is solved and then checked on its central window.
    #[arg(long)]
    pub boundary: Option<String>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub checks: Vec<Check>,
    #[arg(long, default_value = "euclidean")]
    pub domain_metric: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = DEFAULT_FLOOR)]
    pub floor: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MetricCheckArgs {
    #[arg(long)]
    pub metric: String,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => run_solve(&a),
        Command::Verify(a) => run_verify(&a),
        Command::Refine(a) => run_refine(&a),
        Command::MetricCheck(a) => run_metric_check(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hmlab: {e}");
            match e {
                Error::Diverged { .. } | Error::MaxItersExceeded { .. } => EXIT_DIVERGED,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn flag<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{name}: {m}")),
        other => other,
    })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(Error::from)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn write_solution(dir: &Path, sol: &HarmonicSolution) -> Result<()> {
    ensure_dir(dir)?;
    hmfield::write(dir.join("solution.hmfield"), &sol.h)?;
    write_json(&dir.join("solution.json"), &sol.summary())
}

pub fn run_solve(a: &SolveArgs) -> Result<i32> {
    let grid = a.grid.grid()?;
    let metric = flag("--metric", parse_metric(&a.metric))?;
    let map = flag("--boundary", parse_map(&a.boundary))?;
    let cfg = a.solver.config()?;
    match solve_harmonic(&map.sample(&grid), &metric, &cfg) {
        Ok(sol) => {
            write_solution(&a.out, &sol)?;
            println!(
                "converged: iterations={} residual_linf={:e} energy={:.12e}",
                sol.iterations, sol.residual_linf, sol.energy
            );
            Ok(EXIT_OK)
        }
        Err(Error::Diverged { reason, best }) => {
            write_solution(&a.out, &best)?;
            eprintln!(
                "hmlab: solver diverged: {reason}; best residual {:e} written",
                best.residual_linf
            );
            Ok(EXIT_DIVERGED)
        }
        Err(Error::MaxItersExceeded { best }) => {
            write_solution(&a.out, &best)?;
            eprintln!(
                "hmlab: max iterations reached; best residual {:e} written",
                best.residual_linf
            );
            Ok(EXIT_DIVERGED)
        }
        Err(e @ Error::DomainGuard { .. }) => {
            Err(Error::Config(format!("--boundary/--metric: {e}")))
        }
        Err(e) => Err(e),
    }
}

fn check_list(checks: &[Check]) -> Vec<Check> {
    if checks.is_empty() {
        Check::ALL.to_vec()
    } else {
        checks.to_vec()
    }
}

fn run_checks(list: &[Check], b: &JacobianBundle, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for &c in list {
        out.extend(run_check(c, b, ctx)?);
    }
    Ok(out)
}

fn print_outcome(o: &CheckOutcome) {
    let mut line = format!("{:<20} {:<5}", o.name, o.status.label());
    if let Some(r) = &o.report {
        let _ = write!(
            line,
            " linf={:.3e} tol={:.3e} evaluated={} excluded={}",
            r.linf, r.tolerance_used, r.evaluated_nodes, r.excluded_nodes
        );
    }
    if let Some(m) = &o.message {
        let _ = write!(line, " {m}");
    }
    println!("{line}");
}

fn sidecar_residual(input: &Path) -> Option<f64> {
    let text = std::fs::read_to_string(input.with_extension("json")).ok()?;
    let summary: SolutionSummary = serde_json::from_str(&text).ok()?;
    Some(summary.residual_linf)
}

pub fn run_verify(a: &VerifyArgs) -> Result<i32> {
    let metric = flag("--metric", parse_metric(&a.metric))?;
    let domain = flag("--domain-metric", parse_metric(&a.domain_metric))?;
    let (bundle, solver_tol) = match (&a.map, &a.input) {
        (Some(m), _) => {
            let map = flag("--map", parse_map(m))?;
            (
                JacobianBundle::from_map(&map, &a.grid.grid()?, &metric, a.floor)?,
                0.0,
            )
        }
        (None, Some(path)) => {
            let field: ComplexField = hmfield::read(path)?.into_complex();
            let field = field.restrict(&field.grid().inset_mask(a.margin));
            let tol = sidecar_residual(path).unwrap_or(0.0);
            (JacobianBundle::from_field(&field, &metric, a.floor)?, tol)
        }
        (None, None) => return Err(Error::Config("one of --map or --input is required".into())),
    };
    let ctx = CheckContext {
        metric,
        domain,
        seed: a.seed,
        solver_tol,
    };
    let outcomes = run_checks(&check_list(&a.checks), &bundle, &ctx)?;
    ensure_dir(&a.out)?;
    for o in &outcomes {
        print_outcome(o);
        if let (true, Some(csv)) = (a.csv, &o.csv) {
            write_atomic(&a.out.join(format!("{}.csv", o.name)), csv.as_bytes())?;
        }
    }
    write_json(&a.out.join("reports.json"), &outcomes)?;
    Ok(if outcomes.iter().any(|o| o.status == Status::Fail) {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

#[derive(Debug, Serialize)]
struct RefineRow {
    check: String,
    level: usize,
    nx: usize,
    spacing: f64,
    linf: f64,
    status: Status,
}

pub fn run_refine(a: &RefineArgs) -> Result<i32> {
    if a.levels < 3 {
        return Err(Error::Config(
            "--levels: at least 3 spacings are needed".into(),
        ));
    }
    let metric = flag("--metric", parse_metric(&a.metric))?;
    let domain = flag("--domain-metric", parse_metric(&a.domain_metric))?;
    let list = check_list(&a.checks);
    let base_cfg = a.solver.config()?;
    let mut grid = a.grid.grid()?;
    let mut rows: Vec<RefineRow> = Vec::new();
    for level in 0..a.levels {
        let (bundle, solver_tol) = match (&a.map, &a.boundary) {
            (Some(m), _) => {
                let map = flag("--map", parse_map(m))?;
                (
                    JacobianBundle::from_map(&map, &grid, &metric, a.floor)?,
                    0.0,
                )
            }
            (None, Some(bd)) => {
                let map = flag("--boundary", parse_map(bd))?;
                // Solver error must stay below the discretization error being measured.
                let cfg = SolverConfig {
                    tol: base_cfg.tol.min(1e-4 * grid.s * grid.s),
                    ..base_cfg
                };
                let sol = solve_harmonic(&map.sample(&grid), &metric, &cfg)?;
                let margin = tolerances::solved_field_margin(grid.nx.min(grid.ny));
                let window = sol.h.restrict(&grid.inset_mask(margin));
                (
                    JacobianBundle::from_field(&window, &metric, a.floor)?,
                    sol.residual_linf,
                )
            }
            (None, None) => {
                return Err(Error::Config(
                    "one of --map or --boundary is required".into(),
                ))
            }
        };
        let ctx = CheckContext {
            metric: metric.clone(),
            domain: domain.clone(),
            seed: a.seed,
            solver_tol,
        };
        for o in run_checks(&list, &bundle, &ctx)? {
            rows.push(RefineRow {
                check: o.name.clone(),
                level,
                nx: grid.nx,
                spacing: grid.s,
                linf: o.linf(),
                status: o.status,
            });
        }
        grid = grid.refined();
    }

    let mut names: Vec<String> = Vec::new();
    for r in &rows {
        if !names.contains(&r.check) {
            names.push(r.check.clone());
        }
    }
    let mut studies = Vec::new();
    let mut failed = false;
    for name in &names {
        let mine: Vec<&RefineRow> = rows.iter().filter(|r| &r.check == name).collect();
        if mine
            .iter()
            .any(|r| r.status == Status::Empty || r.status == Status::HypothesisViolated)
        {
            println!("{name:<20} {}", Status::Empty.label());
            continue;
        }
        if mine
            .iter()
            .any(|r| r.status == Status::Fail && r.linf == 0.0)
        {
            // Failed without a residual (e.g. not sense-preserving).
            println!("{name:<20} FAIL  no residual");
            failed = true;
            continue;
        }
        let st = RefinementStudy::judge(
            name.clone(),
            mine.iter().map(|r| r.spacing).collect(),
            mine.iter().map(|r| r.linf).collect(),
        );
        let slope = st.slope.map_or("exact".to_string(), |s| format!("{s:.3}"));
        let errs: Vec<String> = st.errors.iter().map(|e| format!("{e:.3e}")).collect();
        println!(
            "{name:<20} {:<5} slope={slope} linf=[{}]",
            if st.passed { "PASS" } else { "FAIL" },
            errs.join(", ")
        );
        failed |= !st.passed;
        studies.push(st);
    }

    ensure_dir(&a.out)?;
    let mut csv = String::from("check,level,nx,spacing,linf,status\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.check,
            r.level,
            r.nx,
            hmfield::fmt17(r.spacing),
            hmfield::fmt17(r.linf),
            r.status.label()
        );
    }
    write_atomic(&a.out.join("refine.csv"), csv.as_bytes())?;
    write_json(&a.out.join("slopes.json"), &studies)?;
    Ok(if failed { EXIT_CHECK_FAILED } else { EXIT_OK })
}

/// Seeded sample points well inside the metric's domain.
pub fn metric_samples(metric: &ConformalMetric, n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polar = |lo: f64, hi: f64| {
        let r = rng.gen_range(lo..=hi);
        Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
    };
    match metric.kind() {
        MetricKind::Euclidean | MetricKind::Spherical => (0..n).map(|_| polar(0.0, 2.0)).collect(),
        MetricKind::Hyperbolic => (0..n).map(|_| polar(0.0, 0.9)).collect(),
        MetricKind::Radial(p) => {
            let (r0, r1) = p.interval();
            let lo = if r0 > 0.0 { 1.5 * r0 } else { 0.0 };
            let hi = if r1.is_finite() {
                (r0 + 0.9 * (r1 - r0)).min(2.0).max(lo)
            } else {
                2.0
            };
            (0..n).map(|_| polar(lo, hi)).collect()
        }
        MetricKind::Tabulated(t) => {
            let (a, b) = t.derivative_box();
            let (dx, dy) = (0.1 * (b.re - a.re), 0.1 * (b.im - a.im));
            (0..n)
                .map(|_| {
                    Complex64::new(
                        rng.gen_range(a.re + dx..=b.re - dx),
                        rng.gen_range(a.im + dy..=b.im - dy),
                    )
                })
                .collect()
        }
    }
}

pub fn run_metric_check(a: &MetricCheckArgs) -> Result<i32> {
    let metric = flag("--metric", parse_metric(&a.metric))?;
    if a.samples == 0 {
        return Err(Error::Config("--samples must be positive".into()));
    }
    let samples = metric_samples(&metric, a.samples, a.seed);
    let worst = verify_metric_consistency(&metric, &samples)?;
    let ks = samples
        .iter()
        .map(|&w| metric.curvature(w))
        .collect::<Result<Vec<f64>>>()?;
    let (kmin, kmax) = ks
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &k| {
            (a.min(k), b.max(k))
        });
    let k = if kmax - kmin <= tolerances::METRIC_CONSISTENCY {
        format!("K = {:.6}", 0.5 * (kmin + kmax) + 0.0)
    } else {
        format!("K in [{kmin:.6}, {kmax:.6}]")
    };
    let pass = worst <= tolerances::METRIC_CONSISTENCY;
    println!(
        "metric {}: {} max inconsistency {worst:.3e} over {} samples, {k}",
        metric.name(),
        if pass { "PASS" } else { "FAIL" },
        a.samples
    );
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}
