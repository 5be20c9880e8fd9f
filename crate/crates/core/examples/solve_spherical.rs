//! Harmonic map into the round sphere with non-conformal boundary data `z/2 + 0.1z̄`.

use hmlab::grid::max_abs_diff;
use hmlab::hmfield;
use hmlab::maps::euclidean_harmonic;
use hmlab::metrics::ConformalMetric;
use hmlab::solver::{harmonic_extension, pde_residual, solve_harmonic, SolverConfig, Sweep};
use hmlab::Grid;
use num_complex::Complex64;

fn main() -> hmlab::Result<()> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let boundary = euclidean_harmonic(vec![r(0.0), r(0.5)], vec![r(0.0), r(0.1)]);
    let sphere = ConformalMetric::spherical();
    let g = Grid::square(-0.5, -0.5, 1.0, 129)?;
    let data = boundary.sample(&g);

    let sol = solve_harmonic(&data, &sphere, &SolverConfig::default())?;
    let res = pde_residual(&sol.h, &sphere)?.max_value().unwrap_or(0.0);
    println!(
        "fast-poisson: {} iterations, residual {:.2e}, energy {:.8}",
        sol.iterations, res, sol.energy
    );

    let flat = harmonic_extension(&data)?;
    println!(
        "distance from the euclidean extension {:.3e}",
        max_abs_diff(&sol.h, &flat).0
    );

    let coarse = Grid::square(-0.5, -0.5, 1.0, 33)?;
    let cfg = SolverConfig {
        sweep: Sweep::GaussSeidelRowMajor,
        tol: 1e-10,
        ..SolverConfig::default()
    };
    let gs = solve_harmonic(&boundary.sample(&coarse), &sphere, &cfg)?;
    println!(
        "gauss-seidel on 33x33: {} iterations, residual {:.2e}",
        gs.iterations, gs.residual_linf
    );

    let dir = std::env::temp_dir().join("hmlab-solve-spherical");
    std::fs::create_dir_all(&dir)?;
    hmfield::write(dir.join("solution.hmfield"), &sol.h)?;
    println!("wrote {}", dir.join("solution.hmfield").display());
    Ok(())
}
