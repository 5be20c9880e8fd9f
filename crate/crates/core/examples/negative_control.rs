//! Non-harmonic inputs keep a non-holomorphic Hopf differential at every spacing.
//! The `log J` identity is pure algebra in `A` and `B`, so it only rejects `|z|²` for having `J ≡ 0`.

use hmlab::analysis::{hopf_check, main_identity_residual, JacobianBundle, DEFAULT_FLOOR};
use hmlab::maps::AnalyticMap;
use hmlab::metrics::ConformalMetric;
use hmlab::Grid;

fn main() -> hmlab::Result<()> {
    let e = ConformalMetric::euclidean();
    for map in [
        AnalyticMap::modulus_squared(),
        AnalyticMap::identity_plus_modulus(0.25),
    ] {
        for n in [33, 65, 129] {
            let g = Grid::square(0.25, 0.25, 1.0, n)?;
            let b = JacobianBundle::from_field(&map.sample(&g), &e, DEFAULT_FLOOR)?;
            let main = match main_identity_residual(&b) {
                Ok(m) => format!("{:.2e}", m.residuals.linf()),
                Err(err) => format!("rejected ({err})"),
            };
            println!(
                "{:<16} s=1/{:<3} hopf {:.3e}  main {main}",
                map.name(),
                n - 1,
                hopf_check(&b)?.linf()
            );
        }
    }
    Ok(())
}
