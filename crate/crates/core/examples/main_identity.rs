//! The curvature identity for `log J` on `z² + 0.3z̄²`, exact and finite-difference routes.

use hmlab::analysis::{
    bracket_forms, log_bridge_residual, main_identity_residual, presubtraction_identity_residual,
    quadratic_form, JacobianBundle, DEFAULT_FLOOR,
};
use hmlab::maps::euclidean_harmonic;
use hmlab::metrics::ConformalMetric;
use hmlab::Grid;
use num_complex::Complex64;

fn main() -> hmlab::Result<()> {
    let r = |x: f64| Complex64::new(x, 0.0);
    let map = euclidean_harmonic(vec![r(0.0), r(0.0), r(1.0)], vec![r(0.0), r(0.0), r(0.3)]);
    let e = ConformalMetric::euclidean();

    let forms = bracket_forms(r(4.0), r(0.36), 4.0, 0.36);
    println!(
        "bracket at z=1: {:.3e} / {:.3e} / {:.3e}",
        forms.three_term, forms.single_square, forms.decomposed
    );

    for n in [33, 65, 129] {
        let g = Grid::square(0.5, 0.5, 1.0, n)?;
        let exact = JacobianBundle::from_map(&map, &g, &e, DEFAULT_FLOOR)?;
        let fd = JacobianBundle::from_field(&map.sample(&g), &e, DEFAULT_FLOOR)?;
        println!(
            "s=1/{:<3} main exact {:.2e}  main fd {:.2e}  presub {:.2e}  bridge {:.2e}  Q<0 at {} nodes",
            n - 1,
            main_identity_residual(&exact)?.residuals.linf(),
            main_identity_residual(&fd)?.residuals.linf(),
            presubtraction_identity_residual(&exact)?.residuals.linf(),
            log_bridge_residual(&exact)?.linf(),
            quadratic_form(&exact).negative_nodes
        );
    }
    Ok(())
}
