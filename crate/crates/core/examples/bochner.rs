//! Bochner and Hopf residuals on the central window of a spherical-target solve.

use hmlab::analysis::{
    bochner_residuals, hopf_check, sigma_bochner_residuals, JacobianBundle, DEFAULT_FLOOR,
};
use hmlab::maps::euclidean_harmonic;
use hmlab::metrics::ConformalMetric;
use hmlab::solver::{solve_harmonic, SolverConfig};
use hmlab::tolerances::solved_field_margin;
use hmlab::Grid;
use num_complex::Complex64;

fn main() -> hmlab::Result<()> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let boundary = euclidean_harmonic(vec![r(0.0), r(0.5)], vec![r(0.0), r(0.1)]);
    let sphere = ConformalMetric::spherical();
    for n in [33, 65, 129, 257] {
        let g = Grid::square(-0.5, -0.5, 1.0, n)?;
        let cfg = SolverConfig {
            tol: 1e-4 * g.s * g.s,
            ..SolverConfig::default()
        };
        let sol = solve_harmonic(&boundary.sample(&g), &sphere, &cfg)?;
        // Corners carry r² log r terms; stay clear of them.
        let window = sol.h.restrict(&g.inset_mask(solved_field_margin(n)));
        let b = JacobianBundle::from_field(&window, &sphere, DEFAULT_FLOOR)?;
        let pair = bochner_residuals(&b)?;
        let sigma = sigma_bochner_residuals(&b, &sphere)?;
        println!(
            "s=1/{:<3} bochner dz {:.2e} dzbar {:.2e}  sigma dz {:.2e} dzbar {:.2e}  hopf {:.2e}",
            n - 1,
            pair.holomorphic.linf(),
            pair.antiholomorphic.linf(),
            sigma.holomorphic.linf(),
            sigma.antiholomorphic.linf(),
            hopf_check(&b)?.linf()
        );
    }
    Ok(())
}
