use num_complex::Complex64;

use crate::calculus;
use crate::error::{Error, Result};
use crate::grid::{and_masks, max_abs_diff, ComplexField, Grid, RealField};
use crate::maps::AnalyticMap;
use crate::metrics::ConformalMetric;

/// Relative floor below which `|h_z|` or `|h_zbar|` marks a node degenerate.
pub const DEFAULT_FLOOR: f64 = 1e-8;

/// Where the derivatives in a bundle came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeSource {
    FiniteDifference,
    Exact,
}

/// Jacobian-related fields of a map into a conformal target.
///
/// `A = ∂_z |h_z|^2` and `B = ∂_z |h_zbar|^2`, assembled from second derivatives as
/// `A = h_zz conj(h_z) + h_z conj(h_zzbar)` and `B = h_zzbar conj(h_zbar) + h_zbar conj(h_zbarzbar)`.
#[derive(Debug, Clone)]
pub struct JacobianBundle {
    pub source: DerivativeSource,
    pub h: ComplexField,
    pub hz: ComplexField,
    pub hzbar: ComplexField,
    /// `rho(h(z))`.
    pub rho: RealField,
    /// Target curvature at `h(z)`.
    pub curvature: RealField,
    /// `∂h = rho(h) h_z`.
    pub dh: ComplexField,
    /// `∂̄h = rho(h) h_zbar`.
    pub dbh: ComplexField,
    pub j: RealField,
    pub d: RealField,
    pub j0: RealField,
    pub d0: RealField,
    pub a: ComplexField,
    pub b: ComplexField,
    /// `|h_z|` below the floor.
    pub dz_degenerate: Vec<bool>,
    /// `|h_zbar|` below the floor.
    pub dzbar_degenerate: Vec<bool>,
    pub floor: f64,
}

fn at_image(
    h: &ComplexField,
    metric: &ConformalMetric,
    f: impl Fn(&ConformalMetric, Complex64) -> Result<f64>,
) -> Result<RealField> {
    let g = *h.grid();
    let mut values = vec![0.0; g.len()];
    for (i, j, w) in h.iter_valid() {
        values[g.idx(i, j)] = f(metric, w).map_err(|_| Error::DomainGuard {
            metric: metric.name(),
            w,
            node: Some((i, j)),
        })?;
    }
    RealField::from_parts(g, values, h.mask().to_vec())
}

impl JacobianBundle {
    /// Finite-difference route: valid two rings inside the mask of `h`.
    pub fn from_field(h: &ComplexField, metric: &ConformalMetric, floor: f64) -> Result<Self> {
        let hz = calculus::wirtinger_dz(h)?;
        let hzbar = calculus::wirtinger_dzbar(h)?;
        let sd = calculus::second_derivatives(h)?;
        Self::assemble(
            DerivativeSource::FiniteDifference,
            h.clone(),
            hz,
            hzbar,
            (sd.zz, sd.zzbar, sd.zbarzbar),
            metric,
            floor,
        )
    }

    /// Exact-derivative route: every node valid.
    pub fn from_map(
        map: &AnalyticMap,
        grid: &Grid,
        metric: &ConformalMetric,
        floor: f64,
    ) -> Result<Self> {
        let jf = map.sample_jet(grid);
        Self::assemble(
            DerivativeSource::Exact,
            jf.h,
            jf.hz,
            jf.hzbar,
            (jf.hzz, jf.hzzbar, jf.hzbarzbar),
            metric,
            floor,
        )
    }

    fn assemble(
        source: DerivativeSource,
        h: ComplexField,
        hz: ComplexField,
        hzbar: ComplexField,
        (hzz, hzzbar, hzbarzbar): (ComplexField, ComplexField, ComplexField),
        metric: &ConformalMetric,
        floor: f64,
    ) -> Result<Self> {
        let g = *h.grid();
        let rho = at_image(&h, metric, |m, w| m.rho(w))?;
        let curvature = at_image(&h, metric, |m, w| m.curvature(w))?;
        let dh = hz.zip_map(&rho, |v, r| v * r);
        let dbh = hzbar.zip_map(&rho, |v, r| v * r);
        let p = hz.norm_sqr();
        let m = hzbar.norm_sqr();
        let j0 = p.zip_map(&m, |p, m| p - m);
        let d0 = p.zip_map(&m, |p, m| p + m);
        let j = j0.zip_map(&rho, |v, r| r * r * v);
        let d = d0.zip_map(&rho, |v, r| r * r * v);

        let a = hz.zip3_map(&hzz, &hzzbar, |hz, hzz, hzzb| {
            hzz * hz.conj() + hz * hzzb.conj()
        });
        let b = hzbar.zip3_map(&hzzbar, &hzbarzbar, |hzb, hzzb, hzbzb| {
            hzzb * hzb.conj() + hzb * hzbzb.conj()
        });

        let scale = hz.max_modulus().max(hzbar.max_modulus());
        let threshold = floor * scale;
        let valid = and_masks(hz.mask(), hzbar.mask());
        let dz_degenerate = (0..g.len())
            .map(|k| valid[k] && hz.values()[k].norm() < threshold)
            .collect();
        let dzbar_degenerate = (0..g.len())
            .map(|k| valid[k] && hzbar.values()[k].norm() < threshold)
            .collect();
        Ok(Self {
            source,
            h,
            hz,
            hzbar,
            rho,
            curvature,
            dh,
            dbh,
            j,
            d,
            j0,
            d0,
            a,
            b,
            dz_degenerate,
            dzbar_degenerate,
            floor,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.h.grid()
    }

    /// Either derivative below the floor.
    pub fn degenerate(&self) -> Vec<bool> {
        self.dz_degenerate
            .iter()
            .zip(&self.dzbar_degenerate)
            .map(|(&a, &b)| a || b)
            .collect()
    }

    /// `|h_z|^2` and `|h_zbar|^2` at flat index `k`.
    #[inline]
    pub fn pm(&self, k: usize) -> (f64, f64) {
        (
            self.hz.values()[k].norm_sqr(),
            self.hzbar.values()[k].norm_sqr(),
        )
    }

    /// Max differences between `A`, `B` and central differences of `|h_z|^2`, `|h_zbar|^2`.
    pub fn ab_crosscheck(&self) -> Result<(f64, f64)> {
        let da = calculus::wirtinger_dz(&self.hz.norm_sqr())?;
        let db = calculus::wirtinger_dz(&self.hzbar.norm_sqr())?;
        Ok((max_abs_diff(&self.a, &da).0, max_abs_diff(&self.b, &db).0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{affine, euclidean_harmonic, holomorphic_map};

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn quad() -> AnalyticMap {
        euclidean_harmonic(vec![r(0.0), r(0.0), r(1.0)], vec![r(0.0), r(0.0), r(0.3)])
    }

    #[test]
    fn affine_bundle_values() {
        let g = Grid::new(0.0, 0.0, 9, 9, 0.125).unwrap();
        for b in [
            JacobianBundle::from_map(
                &affine(r(0.3)),
                &g,
                &ConformalMetric::euclidean(),
                DEFAULT_FLOOR,
            )
            .unwrap(),
            JacobianBundle::from_field(
                &affine(r(0.3)).sample(&g),
                &ConformalMetric::euclidean(),
                DEFAULT_FLOOR,
            )
            .unwrap(),
        ] {
            assert!(b.j.iter_valid().all(|(_, _, v)| (v - 0.91).abs() < 1e-14));
            assert!(b.d.iter_valid().all(|(_, _, v)| (v - 1.09).abs() < 1e-14));
            assert!(b.a.max_modulus() < 1e-12 && b.b.max_modulus() < 1e-12);
        }
    }

    #[test]
    fn quadratic_point_values_at_one() {
        let g = Grid::new(0.5, -0.5, 33, 33, 1.0 / 32.0).unwrap();
        let (i, j) = (16, 16);
        assert_eq!(g.z(i, j), r(1.0));
        let exact =
            JacobianBundle::from_map(&quad(), &g, &ConformalMetric::euclidean(), DEFAULT_FLOOR)
                .unwrap();
        let fd = JacobianBundle::from_field(
            &quad().sample(&g),
            &ConformalMetric::euclidean(),
            DEFAULT_FLOOR,
        )
        .unwrap();
        for b in [&exact, &fd] {
            assert!((b.a.at(i, j) - 4.0).norm() < 1e-12);
            assert!((b.b.at(i, j) - 0.36).norm() < 1e-12);
            assert!((b.j.at(i, j) - 3.64).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_into_sphere() {
        let g = Grid::new(-0.5, -0.5, 9, 9, 0.125).unwrap();
        let b = JacobianBundle::from_map(
            &holomorphic_map(vec![r(0.0), r(1.0)]),
            &g,
            &ConformalMetric::spherical(),
            DEFAULT_FLOOR,
        )
        .unwrap();
        for (i, jj, v) in b.j.iter_valid() {
            let z = g.z(i, jj);
            assert!((v - 4.0 / (1.0 + z.norm_sqr()).powi(2)).abs() < 1e-14);
            assert_eq!(b.j0.at(i, jj), 1.0);
        }
        assert!(b.dzbar_degenerate.iter().all(|&d| d));
        assert!(!b.dz_degenerate.iter().any(|&d| d));
    }

    #[test]
    fn bundle_invariants_on_a_solver_like_field() {
        let g = Grid::new(0.2, -0.4, 33, 33, 1.0 / 32.0).unwrap();
        let h = ComplexField::from_fn(g, |_, _, z| 0.5 * z + 0.1 * z.conj() + 0.05 * (z * z).exp());
        let m = ConformalMetric::spherical();
        let b = JacobianBundle::from_field(&h, &m, DEFAULT_FLOOR).unwrap();
        for (i, j, jv) in b.j.iter_valid() {
            let rho = b.rho.at(i, j);
            assert!((jv - rho * rho * b.j0.at(i, j)).abs() <= 1e-12 * jv.abs());
            assert!(b.d.at(i, j) >= jv.abs());
        }
        let (ea, eb) = b.ab_crosscheck().unwrap();
        assert!(ea < 1e-2 && eb < 1e-2, "{ea} {eb}");
    }

    #[test]
    fn guard_violation_names_the_node() {
        let g = Grid::new(0.5, 0.5, 9, 9, 0.125).unwrap();
        let r = JacobianBundle::from_map(
            &affine(r(0.0)),
            &g,
            &ConformalMetric::hyperbolic(),
            DEFAULT_FLOOR,
        );
        assert!(matches!(r, Err(Error::DomainGuard { node: Some(_), .. })));
    }
}
