//! Curvature of the built-in and radial metrics, with the finite-difference cross-check.

use hmlab::metrics::{
    fd_metric_values, radial_metric, verify_metric_consistency, ConformalMetric, RadialProfile,
};
use num_complex::Complex64;

fn main() -> hmlab::Result<()> {
    let metrics = [
        ConformalMetric::euclidean(),
        ConformalMetric::spherical(),
        ConformalMetric::hyperbolic(),
        radial_metric(RadialProfile::spherical()),
        radial_metric(RadialProfile::cylinder()),
    ];
    let samples: Vec<Complex64> = (1..=8)
        .map(|k| Complex64::from_polar(0.2 + 0.08 * k as f64, 0.7 * k as f64))
        .collect();
    for m in &metrics {
        let w = samples[2];
        let fd = fd_metric_values(m, w)?;
        println!(
            "{:<20} rho={:.6} K={:+.6} fd K={:+.6} max inconsistency {:.1e}",
            m.name(),
            m.rho(w)?,
            m.curvature(w)?,
            fd.curvature,
            verify_metric_consistency(m, &samples)?
        );
    }
    let wide = ConformalMetric::spherical().scaled(2.0);
    println!(
        "spherical, density x2: K = {:+.6}",
        wide.curvature(Complex64::new(0.3, 0.1))?
    );
    Ok(())
}
