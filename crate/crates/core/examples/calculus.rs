//! Observed order of the Wirtinger and Laplacian stencils on `e^{z}·cos(y)`.

use hmlab::calculus::{laplacian, second_derivatives, wirtinger_dz, wirtinger_dzbar};
use hmlab::grid::{ComplexField, Grid};
use hmlab::refine::RefinementStudy;
use num_complex::Complex64;

fn main() -> hmlab::Result<()> {
    let i = Complex64::i();
    // f = e^z cos y, written through z and z̄ so the exact Wirtinger derivatives are easy.
    let f = |z: Complex64| z.exp() * z.im.cos();
    let fz = |z: Complex64| z.exp() * (z.im.cos() + 0.5 * i * z.im.sin());
    let fzbar = |z: Complex64| z.exp() * (-0.5 * i * z.im.sin());
    let lap = |z: Complex64| -z.exp() * (z.im.cos() + 2.0 * i * z.im.sin());

    let mut spacings = Vec::new();
    let mut errs = [Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for n in [33, 65, 129, 257] {
        let g = Grid::square(0.0, 0.0, 1.0, n)?;
        let h = ComplexField::from_fn(g, |_, _, z| f(z));
        let worst = |field: &ComplexField, exact: &dyn Fn(Complex64) -> Complex64| {
            field
                .iter_valid()
                .map(|(i, j, v)| (v - exact(g.z(i, j))).norm())
                .fold(0.0, f64::max)
        };
        spacings.push(g.s);
        errs[0].push(worst(&wirtinger_dz(&h)?, &fz));
        errs[1].push(worst(&wirtinger_dzbar(&h)?, &fzbar));
        errs[2].push(worst(&laplacian(&h)?, &lap));
        errs[3].push(worst(&second_derivatives(&h)?.zzbar, &|z| lap(z) / 4.0));
    }
    for (name, e) in ["dz", "dzbar", "laplacian", "zzbar"].into_iter().zip(errs) {
        let st = RefinementStudy::judge(name, spacings.clone(), e);
        println!(
            "{name:<10} errors {:?} slope {:.3}",
            st.errors
                .iter()
                .map(|x| format!("{x:.2e}"))
                .collect::<Vec<_>>(),
            st.slope.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
