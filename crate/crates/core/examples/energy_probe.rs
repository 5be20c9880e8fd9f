//! Dirichlet energy, and the quadratic response of a converged solution to interior bumps.

use hmlab::maps::{affine, euclidean_harmonic};
use hmlab::metrics::ConformalMetric;
use hmlab::solver::{critical_point_probe, energy, solve_harmonic, SolverConfig};
use hmlab::Grid;
use num_complex::Complex64;

fn main() -> hmlab::Result<()> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let (e, sphere) = (ConformalMetric::euclidean(), ConformalMetric::spherical());
    let unit = Grid::square(0.0, 0.0, 1.0, 65)?;
    let h = affine(r(0.3)).sample(&unit);
    println!(
        "E(z + 0.3z̄) = {:.9} (domain metric euclidean), {:.9} (spherical)",
        energy(&h, &e, &e)?,
        energy(&h, &e, &sphere)?
    );

    let g = Grid::square(-0.5, -0.5, 1.0, 65)?;
    let boundary = euclidean_harmonic(vec![r(0.0), r(0.5)], vec![r(0.0), r(0.1)]);
    let sol = solve_harmonic(
        &boundary.sample(&g),
        &sphere,
        &SolverConfig {
            tol: 1e-10,
            ..SolverConfig::default()
        },
    )?;
    let probe = critical_point_probe(&sol, 4, 1e-2, 42)?;
    println!("base energy {:.9}", probe.base_energy);
    for b in &probe.bumps {
        let de: Vec<String> = b.delta_energy.iter().map(|d| format!("{d:.3e}")).collect();
        println!(
            "modes {:?} dE {} exponent {:.3}",
            b.modes,
            de.join(" "),
            b.exponent.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
