//! `log J` is superharmonic for maps into the sphere, so `J` attains its minimum on the boundary.

use hmlab::analysis::{
    minimum_principle_check, random_subrects, superharmonicity_check, JacobianBundle, DEFAULT_FLOOR,
};
use hmlab::maps::euclidean_harmonic;
use hmlab::metrics::ConformalMetric;
use hmlab::solver::{solve_harmonic, SolverConfig};
use hmlab::Grid;
use num_complex::Complex64;

fn main() -> hmlab::Result<()> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let boundary = euclidean_harmonic(vec![r(0.0), r(0.5)], vec![r(0.0), r(0.1)]);
    let sphere = ConformalMetric::spherical();
    let g = Grid::square(-0.5, -0.5, 1.0, 129)?;
    let sol = solve_harmonic(&boundary.sample(&g), &sphere, &SolverConfig::default())?;
    let b = JacobianBundle::from_field(&sol.h, &sphere, DEFAULT_FLOOR)?;

    let sh = superharmonicity_check(&b)?;
    let worst = sh
        .evaluated()
        .map(|k| sh.lhs[k])
        .fold(f64::NEG_INFINITY, f64::max);
    println!(
        "max Δlog J = {worst:.4} over {} nodes, excluded {:.1}%",
        sh.evaluated().count(),
        100.0 * sh.excluded_fraction()
    );

    for rect in random_subrects(&b.j, 5, 42)? {
        let m = minimum_principle_check(&b.j, rect, g.s)?;
        println!(
            "[{:>3}..{:>3}]x[{:>3}..{:>3}] interior min {:.5} boundary min {:.5} {}",
            rect.i0,
            rect.i1,
            rect.j0,
            rect.j1,
            m.interior_min,
            m.boundary_min,
            if m.passed { "ok" } else { "VIOLATED" }
        );
    }
    Ok(())
}
