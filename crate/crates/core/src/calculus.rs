//! Second-order finite-difference Wirtinger calculus on masked grid fields.
//!
//! Every operator evaluates a node only when its whole stencil is valid, so the
//! output mask is the input mask eroded by the stencil footprint (one ring for
//! first derivatives and the Laplacian, two rings for second Wirtinger
//! derivatives). All stencils are exact on polynomials of degree two.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, Field, RealField, Scalar};

/// Relative positivity floor used before taking logarithms.
pub const POSITIVITY_FLOOR: f64 = 1e-12;

const AXIS: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// Applies `op` to each node whose 5-point neighborhood is valid.
/// `op` receives `(east, west, north, south, center)`.
fn plus_stencil<T: Scalar, U: Scalar>(
    f: &Field<T>,
    op: impl Fn(T, T, T, T, T) -> U,
) -> Result<Field<U>> {
    let g = *f.grid();
    let vals = f.values();
    let mask = f.mask();
    let out = Field::from_partial(g, |k| {
        if !mask[k] {
            return None;
        }
        let (i, j) = g.ij(k);
        let mut nb = [0usize; 4];
        for (slot, &(di, dj)) in nb.iter_mut().zip(AXIS.iter()) {
            let n = g.offset(i, j, di, dj)?;
            if !mask[n] {
                return None;
            }
            *slot = n;
        }
        Some(op(
            vals[nb[0]],
            vals[nb[1]],
            vals[nb[2]],
            vals[nb[3]],
            vals[k],
        ))
    });
    if out.valid_count() == 0 {
        return Err(Error::EmptyInterior);
    }
    Ok(out)
}

/// `f_z = (f_x - i f_y) / 2` by central differences.
pub fn wirtinger_dz<T: Scalar>(f: &Field<T>) -> Result<ComplexField> {
    let inv = 1.0 / (4.0 * f.grid().s);
    plus_stencil(f, |e, w, n, s, _| {
        let fx = (e - w).to_complex();
        let fy = (n - s).to_complex();
        (fx - Complex64::i() * fy) * inv
    })
}

/// `f_zbar = (f_x + i f_y) / 2` by central differences.
pub fn wirtinger_dzbar<T: Scalar>(f: &Field<T>) -> Result<ComplexField> {
    let inv = 1.0 / (4.0 * f.grid().s);
    plus_stencil(f, |e, w, n, s, _| {
        let fx = (e - w).to_complex();
        let fy = (n - s).to_complex();
        (fx + Complex64::i() * fy) * inv
    })
}

/// Five-point Laplacian.
pub fn laplacian<T: Scalar>(f: &Field<T>) -> Result<Field<T>> {
    let inv = 1.0 / (f.grid().s * f.grid().s);
    // Differences against the center first keeps cancellation error proportional to the local variation.
    plus_stencil(f, |e, w, n, s, c| {
        (((e - c) + (w - c)) + ((n - c) + (s - c))) * inv
    })
}

/// Central-difference partials `(f_x, f_y)` of a real field.
pub fn partials(f: &RealField) -> Result<(RealField, RealField)> {
    let inv = 1.0 / (2.0 * f.grid().s);
    let fx = plus_stencil(f, |e, w, _, _, _| (e - w) * inv)?;
    let fy = plus_stencil(f, |_, _, n, s, _| (n - s) * inv)?;
    Ok((fx, fy))
}

/// `|grad R|^2`, computed as `4 |R_z|^2`.
pub fn grad_norm_sq(r: &RealField) -> Result<RealField> {
    Ok(wirtinger_dz(r)?.map(|v| 4.0 * v.norm_sqr()))
}

/// `|grad R|^2` as `R_x^2 + R_y^2`; the independent route for [`grad_norm_sq`].
pub fn grad_norm_sq_direct(r: &RealField) -> Result<RealField> {
    let (rx, ry) = partials(r)?;
    Ok(rx.zip_map(&ry, |a, b| a * a + b * b))
}

/// The three second Wirtinger derivatives.
#[derive(Debug, Clone)]
pub struct SecondDerivatives {
    pub zz: ComplexField,
    pub zzbar: ComplexField,
    pub zbarzbar: ComplexField,
}

/// `f_zz` and `f_zbarzbar` by composing the first-order stencils, `f_zzbar = Δf / 4`.
/// All three share the mask of `f` eroded twice.
pub fn second_derivatives(f: &ComplexField) -> Result<SecondDerivatives> {
    let zz = wirtinger_dz(&wirtinger_dz(f)?)?;
    let zbarzbar = wirtinger_dzbar(&wirtinger_dzbar(f)?)?;
    let zzbar = laplacian(f)?.map(|v| v * 0.25).restrict(zz.mask());
    let zbarzbar = zbarzbar.restrict(zz.mask());
    Ok(SecondDerivatives {
        zz,
        zzbar,
        zbarzbar,
    })
}

/// Masks nodes below `POSITIVITY_FLOOR * max(R)`.
pub fn positive_part(r: &RealField) -> Result<RealField> {
    let max = r.max_value().unwrap_or(0.0);
    if max <= 0.0 {
        return Err(Error::FieldNotPositive);
    }
    let floor = POSITIVITY_FLOOR * max;
    let out = r.map_checked(|v| (v > floor).then_some(v));
    if out.valid_count() == 0 {
        return Err(Error::FieldNotPositive);
    }
    Ok(out)
}

/// `Δ log R` assembled as `(R ΔR - |∇R|^2) / R^2`, never taking a logarithm.
pub fn log_laplacian_crosscheck(r: &RealField) -> Result<RealField> {
    let r = positive_part(r)?;
    let lap = laplacian(&r)?;
    let grad = grad_norm_sq(&r)?;
    Ok(lap.zip3_map(&r, &grad, |l, v, g| l / v - g / (v * v)))
}

/// `Δ log R` by taking the logarithm first.
pub fn laplacian_of_log(r: &RealField) -> Result<RealField> {
    laplacian(&positive_part(r)?.map(f64::ln))
}
