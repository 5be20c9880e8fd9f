//! Dirichlet solver for the harmonic-map equation
//! `h_zzbar + (log rho^2)_w(h) h_z h_zbar = 0`.
//!
//! The discrete problem is `Δ_h h = -4 (log rho^2)_w(h) h_z h_zbar` with central
//! differences. Each outer iteration freezes the right-hand side at the current
//! iterate and takes one damped linear step: either an exact Poisson solve or a
//! single Jacobi / row-major Gauss-Seidel sweep.

mod energy;
mod poisson;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus;
use crate::error::{Error, Result};
use crate::grid::{ComplexField, Grid, RealField};
use crate::metrics::ConformalMetric;

pub use energy::{critical_point_probe, energy, BumpResult, ProbeReport};
pub use poisson::PoissonSolver;

/// How each outer iteration relaxes the frozen linear problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sweep {
    /// Exact 5-point Poisson solve (sine transform), then damping.
    FastPoisson,
    Jacobi,
    GaussSeidelRowMajor,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// L∞ target for the discrete residual.
    pub tol: f64,
    pub max_iters: usize,
    /// Damping in `(0, 1]`.
    pub omega: f64,
    pub sweep: Sweep,
    /// Consecutive residual increases tolerated before declaring divergence.
    pub patience: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 10_000,
            omega: 0.8,
            sweep: Sweep::FastPoisson,
            patience: 50,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(Error::Config(format!(
                "omega must lie in (0, 1], got {}",
                self.omega
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HarmonicSolution {
    pub h: ComplexField,
    pub metric: ConformalMetric,
    pub residual_linf: f64,
    pub iterations: usize,
    pub energy: f64,
    pub converged: bool,
}

/// JSON sidecar written next to a solution field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub residual_linf: f64,
    pub iterations: usize,
    pub energy: f64,
    pub converged: bool,
    pub metric: String,
    pub grid: Grid,
}

impl HarmonicSolution {
    pub fn summary(&self) -> SolutionSummary {
        SolutionSummary {
            residual_linf: self.residual_linf,
            iterations: self.iterations,
            energy: self.energy,
            converged: self.converged,
            metric: self.metric.name(),
            grid: *self.h.grid(),
        }
    }
}

fn guard_error(metric: &ConformalMetric, w: Complex64, node: (usize, usize)) -> Error {
    Error::DomainGuard {
        metric: metric.name(),
        w,
        node: Some(node),
    }
}

/// First node (row-major) whose value lies outside the metric's domain.
pub fn check_domain(h: &ComplexField, metric: &ConformalMetric) -> Result<()> {
    match h.iter_valid().find(|&(_, _, w)| !metric.contains(w)) {
        Some((i, j, w)) => Err(guard_error(metric, w, (i, j))),
        None => Ok(()),
    }
}

fn check_boundary(boundary: &ComplexField) -> Result<()> {
    let g = boundary.grid();
    for j in 0..g.ny {
        for i in 0..g.nx {
            if g.is_boundary(i, j) && !boundary.is_valid(i, j) {
                return Err(Error::Config(format!(
                    "boundary trace missing at node ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Discrete harmonic function with the edge values of `boundary` (interior values are ignored).
pub fn harmonic_extension(boundary: &ComplexField) -> Result<ComplexField> {
    check_boundary(boundary)?;
    let g = *boundary.grid();
    let zero = vec![Complex64::new(0.0, 0.0); g.len()];
    let trace = edge_values(boundary);
    let values = PoissonSolver::new(g).solve(&trace, &zero);
    let h = ComplexField::from_parts(g, values, vec![true; g.len()])?;
    // Certificate on the unscaled stencil sum.
    let scale = h.max_modulus().max(1.0);
    let lap = calculus::laplacian(&h)?;
    let worst = lap.max_modulus() * g.s * g.s / scale;
    if !(worst <= 1e-10) {
        return Err(Error::InitializationFailed(worst));
    }
    Ok(h)
}

fn edge_values(boundary: &ComplexField) -> Vec<Complex64> {
    let g = boundary.grid();
    (0..g.len())
        .map(|k| {
            let (i, j) = g.ij(k);
            if g.is_boundary(i, j) {
                boundary.values()[k]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// Residual field and the frozen right-hand side `-4 (log rho^2)_w(h) h_z h_zbar`.
fn evaluate(h: &ComplexField, metric: &ConformalMetric) -> Result<(RealField, Vec<Complex64>)> {
    let g = *h.grid();
    let hz = calculus::wirtinger_dz(h)?;
    let hzb = calculus::wirtinger_dzbar(h)?;
    let lap = calculus::laplacian(h)?;
    let mut res = vec![0.0; g.len()];
    let mut rhs = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut mask = vec![false; g.len()];
    for k in 0..g.len() {
        if !(lap.mask()[k] && hz.mask()[k] && hzb.mask()[k]) {
            continue;
        }
        let w = h.values()[k];
        let gamma = metric
            .log_rho2_w(w)
            .map_err(|_| guard_error(metric, w, g.ij(k)))?;
        let nonlinear = gamma * hz.values()[k] * hzb.values()[k];
        res[k] = (lap.values()[k] * 0.25 + nonlinear).norm();
        rhs[k] = -4.0 * nonlinear;
        mask[k] = true;
    }
    Ok((RealField::from_parts(g, res, mask)?, rhs))
}

/// `|h_zzbar + (log rho^2)_w(h) h_z h_zbar|` at interior nodes, with `h_zzbar = Δh / 4`.
pub fn pde_residual(h: &ComplexField, metric: &ConformalMetric) -> Result<RealField> {
    Ok(evaluate(h, metric)?.0)
}

fn linf(f: &RealField) -> f64 {
    f.max_value().unwrap_or(0.0)
}

/// Relaxes toward a discrete harmonic map with the edge values of `boundary`.
pub fn solve_harmonic(
    boundary: &ComplexField,
    metric: &ConformalMetric,
    cfg: &SolverConfig,
) -> Result<HarmonicSolution> {
    cfg.validate()?;
    check_boundary(boundary)?;
    let g = *boundary.grid();
    let trace = edge_values(boundary);
    for k in 0..g.len() {
        let (i, j) = g.ij(k);
        if g.is_boundary(i, j) && !metric.contains(trace[k]) {
            return Err(guard_error(metric, trace[k], (i, j)));
        }
    }
    let poisson = PoissonSolver::new(g);
    let mut h = harmonic_extension(boundary)?;
    check_domain(&h, metric)?;

    let finish = |h: ComplexField,
                  residual: f64,
                  iterations: usize,
                  converged: bool|
     -> Result<HarmonicSolution> {
        let energy = energy(&h, metric, &ConformalMetric::euclidean())?;
        Ok(HarmonicSolution {
            h,
            metric: metric.clone(),
            residual_linf: residual,
            iterations,
            energy,
            converged,
        })
    };

    let mut best: Option<(f64, ComplexField, usize)> = None;
    let mut previous = f64::INFINITY;
    let mut rising = 0usize;
    for iteration in 0..=cfg.max_iters {
        let (res, rhs) = evaluate(&h, metric)?;
        let r = linf(&res);
        if r <= cfg.tol {
            return finish(h, r, iteration, true);
        }
        if best.as_ref().is_none_or(|b| r < b.0) {
            best = Some((r, h.clone(), iteration));
        }
        if iteration == cfg.max_iters {
            break;
        }
        rising = if r > previous { rising + 1 } else { 0 };
        previous = r;
        if rising >= cfg.patience {
            let (br, bh, bi) = best.take().expect("recorded");
            return Err(Error::Diverged {
                reason: format!("residual increased for {rising} consecutive iterations"),
                best: Box::new(finish(bh, br, bi, false)?),
            });
        }
        let mut values = h.values().to_vec();
        relax(&g, &mut values, &trace, &rhs, cfg, &poisson);
        if let Some(k) = values.iter().position(|&w| !metric.contains(w)) {
            let (br, bh, bi) = best.take().expect("recorded");
            return Err(Error::Diverged {
                reason: format!("iterate left the metric domain at node {:?}", g.ij(k)),
                best: Box::new(finish(bh, br, bi, false)?),
            });
        }
        h = ComplexField::from_parts(g, values, vec![true; g.len()])?;
    }
    let (br, bh, bi) = best.expect("at least one residual evaluated");
    Err(Error::MaxItersExceeded {
        best: Box::new(finish(bh, br, bi, false)?),
    })
}

/// One damped linear step on the interior; boundary entries are never written.
fn relax(
    g: &Grid,
    u: &mut [Complex64],
    trace: &[Complex64],
    rhs: &[Complex64],
    cfg: &SolverConfig,
    poisson: &PoissonSolver,
) {
    let s2 = g.s * g.s;
    let w = cfg.omega;
    match cfg.sweep {
        Sweep::FastPoisson => {
            let target = poisson.solve(trace, rhs);
            for j in 1..g.ny - 1 {
                for i in 1..g.nx - 1 {
                    let k = g.idx(i, j);
                    u[k] = u[k] * (1.0 - w) + target[k] * w;
                }
            }
        }
        Sweep::Jacobi => {
            let old = u.to_vec();
            for j in 1..g.ny - 1 {
                for i in 1..g.nx - 1 {
                    let k = g.idx(i, j);
                    let nb = old[k + 1] + old[k - 1] + old[k + g.nx] + old[k - g.nx];
                    u[k] = old[k] * (1.0 - w) + (nb - rhs[k] * s2) * (0.25 * w);
                }
            }
        }
        Sweep::GaussSeidelRowMajor => {
            for j in 1..g.ny - 1 {
                for i in 1..g.nx - 1 {
                    let k = g.idx(i, j);
                    let nb = u[k + 1] + u[k - 1] + u[k + g.nx] + u[k - g.nx];
                    u[k] = u[k] * (1.0 - w) + (nb - rhs[k] * s2) * (0.25 * w);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::max_abs_diff;
    use crate::maps::{affine, euclidean_harmonic, holomorphic_map};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    #[test]
    fn extension_reproduces_harmonic_data() {
        let g = Grid::new(-0.5, 0.25, 17, 13, 1.0 / 16.0).unwrap();
        let z = ComplexField::from_fn(g, |_, _, z| z);
        assert!(max_abs_diff(&harmonic_extension(&z).unwrap(), &z).0 < 1e-10);
        let z2 = ComplexField::from_fn(g, |_, _, z| z * z);
        assert!(max_abs_diff(&harmonic_extension(&z2).unwrap(), &z2).0 < 1e-10);
    }

    #[test]
    fn extension_of_non_harmonic_data_differs() {
        let g = Grid::new(-0.5, -0.5, 17, 17, 1.0 / 16.0).unwrap();
        let m = ComplexField::from_fn(g, |_, _, z| r(z.norm_sqr()));
        let ext = harmonic_extension(&m).unwrap();
        assert!(max_abs_diff(&ext, &m).0 > 1e-2);
        let lap = calculus::laplacian(&m).unwrap();
        assert!(lap.iter_valid().all(|(_, _, v)| (v - 4.0).norm() < 1e-10));
    }

    #[test]
    fn residual_examples() {
        let g = Grid::new(-0.5, -0.5, 17, 17, 1.0 / 16.0).unwrap();
        let e = ConformalMetric::euclidean();
        assert!(linf(&pde_residual(&affine(r(0.3)).sample(&g), &e).unwrap()) < 1e-13);
        let quad = euclidean_harmonic(vec![r(0.0), r(0.0), r(1.0)], vec![r(0.0), r(0.0), r(0.3)]);
        assert!(linf(&pde_residual(&quad.sample(&g), &e).unwrap()) < 1e-12);
        let half = holomorphic_map(vec![r(0.0), r(0.5)]);
        assert!(
            linf(&pde_residual(&half.sample(&g), &ConformalMetric::spherical()).unwrap()) < 1e-13
        );
    }

    #[test]
    fn residual_reports_guard_violation_node() {
        let g = Grid::new(0.5, 0.5, 5, 5, 0.25).unwrap();
        let h = ComplexField::from_fn(g, |_, _, z| z);
        match pde_residual(&h, &ConformalMetric::hyperbolic()) {
            Err(Error::DomainGuard { node: Some(_), .. }) => {}
            other => panic!("expected guard error, got {other:?}"),
        }
    }

    #[test]
    fn euclidean_affine_solve_is_exact() {
        let g = Grid::new(0.0, 0.0, 17, 17, 1.0 / 16.0).unwrap();
        let exact = affine(r(0.3)).sample(&g);
        let sol = solve_harmonic(
            &exact,
            &ConformalMetric::euclidean(),
            &SolverConfig::default(),
        )
        .unwrap();
        assert!(sol.converged);
        assert_eq!(sol.iterations, 0);
        assert!(max_abs_diff(&sol.h, &exact).0 <= 1e-10);
    }

    #[test]
    fn every_sweep_converges_on_a_curved_target() {
        let g = Grid::new(-0.5, -0.5, 17, 17, 1.0 / 16.0).unwrap();
        let bd = ComplexField::from_fn(g, |_, _, z| 0.5 * z + 0.1 * z.conj());
        let metric = ConformalMetric::spherical();
        let mut sols = Vec::new();
        for sweep in [
            Sweep::FastPoisson,
            Sweep::Jacobi,
            Sweep::GaussSeidelRowMajor,
        ] {
            let cfg = SolverConfig {
                tol: 1e-9,
                max_iters: 20_000,
                sweep,
                ..Default::default()
            };
            let sol = solve_harmonic(&bd, &metric, &cfg).unwrap();
            assert!(sol.converged && sol.residual_linf <= 1e-9);
            sols.push(sol);
        }
        // Same discrete problem, so the three fixed points agree.
        for s in &sols[1..] {
            assert!(max_abs_diff(&s.h, &sols[0].h).0 < 1e-9);
        }
    }

    #[test]
    fn boundary_values_are_preserved_bit_exactly() {
        let g = Grid::new(-0.5, -0.5, 17, 17, 1.0 / 16.0).unwrap();
        let bd = ComplexField::from_fn(g, |_, _, z| 0.5 * z + 0.1 * z.conj() + 0.05 * z * z);
        for sweep in [Sweep::FastPoisson, Sweep::GaussSeidelRowMajor] {
            let cfg = SolverConfig {
                tol: 1e-9,
                max_iters: 20_000,
                sweep,
                ..Default::default()
            };
            let sol = solve_harmonic(&bd, &ConformalMetric::spherical(), &cfg).unwrap();
            for j in 0..g.ny {
                for i in 0..g.nx {
                    if g.is_boundary(i, j) {
                        assert_eq!(sol.h.at(i, j), bd.at(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn solve_is_deterministic() {
        let g = Grid::new(-0.5, -0.5, 17, 17, 1.0 / 16.0).unwrap();
        let bd = ComplexField::from_fn(g, |_, _, z| 0.5 * z + 0.1 * z.conj());
        let cfg = SolverConfig {
            tol: 1e-10,
            ..Default::default()
        };
        let a = solve_harmonic(&bd, &ConformalMetric::spherical(), &cfg).unwrap();
        let b = solve_harmonic(&bd, &ConformalMetric::spherical(), &cfg).unwrap();
        assert_eq!(a.h, b.h);
        assert_eq!(a.residual_linf.to_bits(), b.residual_linf.to_bits());
    }

    #[test]
    fn reported_residual_matches_recomputation() {
        let g = Grid::new(-0.5, -0.5, 33, 33, 1.0 / 32.0).unwrap();
        let bd = ComplexField::from_fn(g, |_, _, z| 0.5 * z + 0.1 * z.conj());
        let sol =
            solve_harmonic(&bd, &ConformalMetric::spherical(), &SolverConfig::default()).unwrap();
        let again = linf(&pde_residual(&sol.h, &sol.metric).unwrap());
        assert!((again - sol.residual_linf).abs() <= 1e-12 * sol.residual_linf);
    }

    #[test]
    fn hyperbolic_boundary_outside_disk_is_rejected_before_iterating() {
        let g = Grid::new(-0.5, -0.5, 9, 9, 0.125).unwrap();
        let bd = ComplexField::constant(g, c(0.0, 2.0));
        assert!(matches!(
            solve_harmonic(
                &bd,
                &ConformalMetric::hyperbolic(),
                &SolverConfig::default()
            ),
            Err(Error::DomainGuard { .. })
        ));
    }

    #[test]
    fn iteration_cap_returns_best_iterate() {
        let g = Grid::new(-0.5, -0.5, 17, 17, 1.0 / 16.0).unwrap();
        let bd = ComplexField::from_fn(g, |_, _, z| 0.5 * z + 0.1 * z.conj());
        let cfg = SolverConfig {
            tol: 1e-12,
            max_iters: 3,
            sweep: Sweep::Jacobi,
            ..Default::default()
        };
        match solve_harmonic(&bd, &ConformalMetric::spherical(), &cfg) {
            Err(Error::MaxItersExceeded { best }) => {
                assert!(!best.converged);
                assert!(best.residual_linf > 1e-12);
            }
            other => panic!("expected MaxItersExceeded, got {other:?}"),
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for cfg in [
            SolverConfig {
                tol: 0.0,
                ..Default::default()
            },
            SolverConfig {
                omega: 1.5,
                ..Default::default()
            },
            SolverConfig {
                omega: 0.0,
                ..Default::default()
            },
            SolverConfig {
                max_iters: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        }
    }
}
