//! Rotationally symmetric targets: the identity into radial profiles, away from `h = 0`.

use hmlab::analysis::{radial_identity_residual, JacobianBundle, DEFAULT_FLOOR};
use hmlab::maps::{euclidean_harmonic, holomorphic_map};
use hmlab::metrics::{radial_metric, RadialProfile};
use hmlab::solver::{solve_harmonic, SolverConfig};
use hmlab::Grid;
use num_complex::Complex64;

fn main() -> hmlab::Result<()> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let identity = holomorphic_map(vec![r(0.0), r(1.0)]);
    for profile in [RadialProfile::spherical(), RadialProfile::cylinder()] {
        let metric = radial_metric(profile.clone());
        let line: Vec<String> = [33, 65, 129, 257]
            .into_iter()
            .map(|n| {
                let g = Grid::square(0.5, -0.5, 1.0, n)?;
                let b = JacobianBundle::from_field(&identity.sample(&g), &metric, DEFAULT_FLOOR)?;
                Ok(format!(
                    "{:.2e}",
                    radial_identity_residual(&b, &metric)?.linf()
                ))
            })
            .collect::<hmlab::Result<_>>()?;
        println!("identity into {:<10} {}", profile.name(), line.join(" "));
    }

    let metric = radial_metric(RadialProfile::spherical());
    let boundary = euclidean_harmonic(vec![r(0.0), r(0.5)], vec![r(0.0), r(0.1)]);
    let g = Grid::square(0.5, -0.5, 1.0, 129)?;
    let sol = solve_harmonic(&boundary.sample(&g), &metric, &SolverConfig::default())?;
    let window = sol.h.restrict(&g.inset_mask(32));
    let b = JacobianBundle::from_field(&window, &metric, DEFAULT_FLOOR)?;
    println!(
        "solved z/2 + 0.1z̄: {:.2e}",
        radial_identity_residual(&b, &metric)?.linf()
    );
    Ok(())
}
