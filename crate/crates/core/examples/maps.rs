//! Analytic map families and their exact jets.

use hmlab::maps::{
    affine, euclidean_harmonic, holomorphic_map, precompose_holomorphic, AnalyticMap,
};
use hmlab::metrics::ConformalMetric;
use hmlab::solver::pde_residual;
use hmlab::Grid;
use num_complex::Complex64;

fn main() -> hmlab::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let quad = euclidean_harmonic(
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.3, 0.0)],
    );
    let maps = [
        affine(c(0.3, 0.0)),
        holomorphic_map(vec![c(0.0, 0.0), c(0.5, 0.0)]),
        quad.clone(),
        precompose_holomorphic(&quad, vec![c(0.1, 0.0), c(1.0, 0.2)]),
        AnalyticMap::modulus_squared(),
    ];
    let z = c(1.0, 0.0);
    let g = Grid::square(0.5, -0.5, 1.0, 33)?;
    let euclid = ConformalMetric::euclidean();
    for m in &maps {
        let j = m.jet(z);
        let res = pde_residual(&m.sample(&g), &euclid)?
            .max_value()
            .unwrap_or(0.0);
        println!(
            "{:<32} {:?}  h={:.3} hz={:.3} hzbar={:.3} hzz={:.3}  J={:+.3}  euclidean pde residual {res:.1e}",
            m.name(),
            m.family(),
            j.h,
            j.hz,
            j.hzbar,
            j.hzz,
            j.hz.norm_sqr() - j.hzbar.norm_sqr()
        );
    }
    Ok(())
}
