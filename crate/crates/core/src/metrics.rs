//! Conformal metric densities `rho(w) |dw|` on planar regions.
//!
//! Curvature follows the convention `K = -2 Δ log rho / rho^2`, under which the
//! density `2 / (1 + |w|^2)` has `K = 2` and `2 / (1 - |w|^2)` has `K = -2`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::calculus;
use crate::error::{Error, Result};
use crate::grid::{ComplexField, RealField};

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A rotationally symmetric density `rho(r)` with its first two derivatives.
#[derive(Clone)]
pub struct RadialProfile {
    name: String,
    rho: RadialFn,
    drho: RadialFn,
    ddrho: RadialFn,
    /// Admissible radii: `r_min <= r < r_max`.
    r_min: f64,
    r_max: f64,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("name", &self.name)
            .field("r_min", &self.r_min)
            .field("r_max", &self.r_max)
            .finish()
    }
}

impl RadialProfile {
    pub fn new(
        name: impl Into<String>,
        rho: impl Fn(f64) -> f64 + Send + Sync + 'static,
        drho: impl Fn(f64) -> f64 + Send + Sync + 'static,
        ddrho: impl Fn(f64) -> f64 + Send + Sync + 'static,
        r_min: f64,
        r_max: f64,
    ) -> Self {
        Self {
            name: name.into(),
            rho: Arc::new(rho),
            drho: Arc::new(drho),
            ddrho: Arc::new(ddrho),
            r_min,
            r_max,
        }
    }

    /// `rho = 2 / (1 + r^2)`.
    pub fn spherical() -> Self {
        Self::new(
            "spherical",
            |r| 2.0 / (1.0 + r * r),
            |r| -4.0 * r / (1.0 + r * r).powi(2),
            |r| (12.0 * r * r - 4.0) / (1.0 + r * r).powi(3),
            0.0,
            f64::INFINITY,
        )
    }

    /// `rho = 2 / (1 - r^2)` on the unit disk.
    pub fn hyperbolic() -> Self {
        Self::new(
            "hyperbolic",
            |r| 2.0 / (1.0 - r * r),
            |r| 4.0 * r / (1.0 - r * r).powi(2),
            |r| (12.0 * r * r + 4.0) / (1.0 - r * r).powi(3),
            0.0,
            1.0,
        )
    }

    /// Flat cylinder `rho = 1 / r` on `0.1 <= r < 10`.
    pub fn cylinder() -> Self {
        Self::new(
            "cylinder",
            |r| 1.0 / r,
            |r| -1.0 / (r * r),
            |r| 2.0 / (r * r * r),
            0.1,
            10.0,
        )
    }

    pub fn constant(c: f64) -> Self {
        Self::new("flat", move |_| c, |_| 0.0, |_| 0.0, 0.0, f64::INFINITY)
    }

    /// Named builtin profiles: `spherical`, `hyperbolic`, `cylinder`, `flat`.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "spherical" => Some(Self::spherical()),
            "hyperbolic" => Some(Self::hyperbolic()),
            "cylinder" => Some(Self::cylinder()),
            "flat" => Some(Self::constant(1.0)),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.r_min, self.r_max)
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.r_min && r < self.r_max
    }

    pub fn rho(&self, r: f64) -> f64 {
        (self.rho)(r)
    }

    pub fn drho(&self, r: f64) -> f64 {
        (self.drho)(r)
    }

    pub fn ddrho(&self, r: f64) -> f64 {
        (self.ddrho)(r)
    }

    /// `K = -2 (rho rho'' - rho'^2 + rho rho'/r) / rho^4`; at `r = 0` the limit
    /// `rho'/r -> rho''(0)` is used, which requires `rho'(0) = 0`.
    pub fn curvature(&self, r: f64) -> Result<f64> {
        let (p, dp, ddp) = (self.rho(r), self.drho(r), self.ddrho(r));
        let dp_over_r = if r == 0.0 {
            if dp != 0.0 {
                return Err(Error::RadialSingularity);
            }
            ddp
        } else {
            dp / r
        };
        Ok(-2.0 * (p * ddp - dp * dp + p * dp_over_r) / p.powi(4))
    }

    /// `d/dw log rho(|w|)^2 = (rho'/rho) * conj(w) / r`.
    pub fn log_rho2_w(&self, w: Complex64) -> Result<Complex64> {
        let r = w.norm();
        if r == 0.0 {
            return if self.drho(0.0) == 0.0 {
                Ok(Complex64::new(0.0, 0.0))
            } else {
                Err(Error::RadialSingularity)
            };
        }
        Ok(w.conj() * (self.drho(r) / (self.rho(r) * r)))
    }

    /// Profile with density multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let (rho, drho, ddrho) = (self.rho.clone(), self.drho.clone(), self.ddrho.clone());
        Self {
            name: self.name.clone(),
            rho: Arc::new(move |r| c * rho(r)),
            drho: Arc::new(move |r| c * drho(r)),
            ddrho: Arc::new(move |r| c * ddrho(r)),
            r_min: self.r_min,
            r_max: self.r_max,
        }
    }

    /// Largest disagreement between the stated derivatives and Richardson-extrapolated
    /// central differences of `rho`, relative to `max(1, |rho'|, |rho''|)`.
    pub fn derivative_consistency(&self, radii: &[f64]) -> f64 {
        let mut worst = 0.0_f64;
        for &r in radii {
            let clearance = (r - self.r_min).min(self.r_max - r);
            let d = (1e-3 * r.max(1.0)).min(clearance / 8.0);
            let d1 = |h: f64| (self.rho(r + h) - self.rho(r - h)) / (2.0 * h);
            let d2 = |h: f64| (self.rho(r + h) - 2.0 * self.rho(r) + self.rho(r - h)) / (h * h);
            let fd1 = (4.0 * d1(d / 2.0) - d1(d)) / 3.0;
            let fd2 = (4.0 * d2(d / 2.0) - d2(d)) / 3.0;
            let (e1, e2) = (self.drho(r), self.ddrho(r));
            let scale = 1.0_f64.max(e1.abs()).max(e2.abs());
            worst = worst
                .max((fd1 - e1).abs() / scale)
                .max((fd2 - e2).abs() / scale);
        }
        worst
    }
}

/// Density sampled on a grid, with grid-derived `(log rho^2)_w` and curvature.
#[derive(Debug, Clone)]
pub struct TabulatedMetric {
    rho: RealField,
    log_rho2_w: ComplexField,
    curvature: RealField,
}

impl TabulatedMetric {
    /// Derivatives come from the second-order stencils, so they are only available one ring
    /// inside the valid samples, and interpolation adds a further `O(s^2)` error.
    pub fn from_samples(rho: RealField) -> Result<Self> {
        if rho.iter_valid().any(|(_, _, v)| v <= 0.0) {
            return Err(Error::FieldNotPositive);
        }
        let log_rho = rho.map(f64::ln);
        let log_rho2_w = calculus::wirtinger_dz(&log_rho)?.map(|v| 2.0 * v);
        let lap = calculus::laplacian(&log_rho)?;
        let curvature = lap.zip_map(&rho, |l, p| -2.0 * l / (p * p));
        Ok(Self {
            rho,
            log_rho2_w,
            curvature,
        })
    }

    /// Cell containing `w` with its bilinear weights, when all four corners carry derivatives.
    fn locate(&self, w: Complex64) -> Option<([(usize, usize); 4], [f64; 4])> {
        let g = self.curvature.grid();
        let u = (w.re - g.x0) / g.s;
        let v = (w.im - g.y0) / g.s;
        if !(u >= 0.0 && v >= 0.0) {
            return None;
        }
        let i = (u.floor() as usize).min(g.nx.saturating_sub(2));
        let j = (v.floor() as usize).min(g.ny.saturating_sub(2));
        let (fu, fv) = (u - i as f64, v - j as f64);
        if fu > 1.0 || fv > 1.0 {
            return None;
        }
        let corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)];
        if corners.iter().any(|&(a, b)| !self.curvature.is_valid(a, b)) {
            return None;
        }
        let weights = [
            (1.0 - fu) * (1.0 - fv),
            fu * (1.0 - fv),
            (1.0 - fu) * fv,
            fu * fv,
        ];
        Some((corners, weights))
    }

    fn interp_real(field: &RealField, cell: &([(usize, usize); 4], [f64; 4])) -> f64 {
        cell.0
            .iter()
            .zip(cell.1)
            .map(|(&(i, j), wt)| wt * field.at(i, j))
            .sum()
    }

    /// Lower-left and upper-right corners of the box of nodes carrying derivatives.
    pub fn derivative_box(&self) -> (Complex64, Complex64) {
        let g = self.curvature.grid();
        let (mut lo, mut hi) = ((usize::MAX, usize::MAX), (0, 0));
        for (i, j, _) in self.curvature.iter_valid() {
            lo = (lo.0.min(i), lo.1.min(j));
            hi = (hi.0.max(i), hi.1.max(j));
        }
        (
            Complex64::new(g.x(lo.0), g.y(lo.1)),
            Complex64::new(g.x(hi.0), g.y(hi.1)),
        )
    }

    fn clearance(&self, w: Complex64) -> f64 {
        let (lo, hi) = self.derivative_box();
        (w.re - lo.re)
            .min(hi.re - w.re)
            .min(w.im - lo.im)
            .min(hi.im - w.im)
    }
}

/// Which density a [`ConformalMetric`] uses.
#[derive(Debug, Clone)]
pub enum MetricKind {
    Euclidean,
    Spherical,
    Hyperbolic,
    Radial(RadialProfile),
    Tabulated(Arc<TabulatedMetric>),
}

/// Builtin constant-curvature densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Euclidean,
    Spherical,
    Hyperbolic,
}

#[derive(Debug, Clone)]
pub struct ConformalMetric {
    kind: MetricKind,
    scale: f64,
}

pub fn builtin_metric(kind: Builtin) -> ConformalMetric {
    ConformalMetric::new(match kind {
        Builtin::Euclidean => MetricKind::Euclidean,
        Builtin::Spherical => MetricKind::Spherical,
        Builtin::Hyperbolic => MetricKind::Hyperbolic,
    })
}

pub fn radial_metric(profile: RadialProfile) -> ConformalMetric {
    ConformalMetric::new(MetricKind::Radial(profile))
}

impl ConformalMetric {
    pub fn new(kind: MetricKind) -> Self {
        Self { kind, scale: 1.0 }
    }

    pub fn euclidean() -> Self {
        builtin_metric(Builtin::Euclidean)
    }

    pub fn spherical() -> Self {
        builtin_metric(Builtin::Spherical)
    }

    pub fn hyperbolic() -> Self {
        builtin_metric(Builtin::Hyperbolic)
    }

    pub fn tabulated(rho: RealField) -> Result<Self> {
        Ok(Self::new(MetricKind::Tabulated(Arc::new(
            TabulatedMetric::from_samples(rho)?,
        ))))
    }

    /// Parses `euclidean`, `spherical`, `hyperbolic`, or `radial:<profile>`.
    /// Tabulated metrics are loaded from files by the command-line layer.
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec {
            "euclidean" => Ok(Self::euclidean()),
            "spherical" => Ok(Self::spherical()),
            "hyperbolic" => Ok(Self::hyperbolic()),
            _ => match spec.strip_prefix("radial:") {
                Some(name) => RadialProfile::by_name(name)
                    .map(radial_metric)
                    .ok_or_else(|| Error::Parse(format!("unknown radial profile `{name}`"))),
                None => Err(Error::Parse(format!("unknown metric `{spec}`"))),
            },
        }
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Metric with density `c * rho`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            kind: self.kind.clone(),
            scale: self.scale * c,
        }
    }

    pub fn name(&self) -> String {
        let base = match &self.kind {
            MetricKind::Euclidean => "euclidean".to_string(),
            MetricKind::Spherical => "spherical".to_string(),
            MetricKind::Hyperbolic => "hyperbolic".to_string(),
            MetricKind::Radial(p) => format!("radial:{}", p.name()),
            MetricKind::Tabulated(_) => "tabulated".to_string(),
        };
        if self.scale == 1.0 {
            base
        } else {
            format!("{base}*{}", self.scale)
        }
    }

    /// Distance from `w` to the edge of the metric's domain (infinite when unbounded,
    /// negative or zero outside).
    pub fn clearance(&self, w: Complex64) -> f64 {
        match &self.kind {
            MetricKind::Euclidean | MetricKind::Spherical => f64::INFINITY,
            MetricKind::Hyperbolic => 1.0 - w.norm(),
            MetricKind::Radial(p) => {
                let r = w.norm();
                if p.r_min == 0.0 {
                    p.r_max - r
                } else {
                    (r - p.r_min).min(p.r_max - r)
                }
            }
            MetricKind::Tabulated(t) => t.clearance(w),
        }
    }

    pub fn contains(&self, w: Complex64) -> bool {
        if !(w.re.is_finite() && w.im.is_finite()) {
            return false;
        }
        match &self.kind {
            MetricKind::Euclidean | MetricKind::Spherical => true,
            MetricKind::Hyperbolic => w.norm_sqr() < 1.0,
            MetricKind::Radial(p) => p.contains(w.norm()),
            MetricKind::Tabulated(t) => t.locate(w).is_some(),
        }
    }

    fn guard(&self, w: Complex64) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::DomainGuard {
                metric: self.name(),
                w,
                node: None,
            })
        }
    }

    pub fn rho(&self, w: Complex64) -> Result<f64> {
        self.guard(w)?;
        let base = match &self.kind {
            MetricKind::Euclidean => 1.0,
            MetricKind::Spherical => 2.0 / (1.0 + w.norm_sqr()),
            MetricKind::Hyperbolic => 2.0 / (1.0 - w.norm_sqr()),
            MetricKind::Radial(p) => p.rho(w.norm()),
            MetricKind::Tabulated(t) => {
                let cell = t.locate(w).expect("guarded");
                TabulatedMetric::interp_real(&t.rho, &cell)
            }
        };
        Ok(self.scale * base)
    }

    /// `∂_w log rho^2`; unaffected by constant rescaling.
    pub fn log_rho2_w(&self, w: Complex64) -> Result<Complex64> {
        self.guard(w)?;
        Ok(match &self.kind {
            MetricKind::Euclidean => Complex64::new(0.0, 0.0),
            MetricKind::Spherical => -2.0 * w.conj() / (1.0 + w.norm_sqr()),
            MetricKind::Hyperbolic => 2.0 * w.conj() / (1.0 - w.norm_sqr()),
            MetricKind::Radial(p) => p.log_rho2_w(w)?,
            MetricKind::Tabulated(t) => {
                let (corners, weights) = t.locate(w).expect("guarded");
                corners
                    .iter()
                    .zip(weights)
                    .map(|(&(i, j), wt)| t.log_rho2_w.at(i, j) * wt)
                    .sum()
            }
        })
    }

    pub fn curvature(&self, w: Complex64) -> Result<f64> {
        self.guard(w)?;
        let base = match &self.kind {
            MetricKind::Euclidean => 0.0,
            MetricKind::Spherical => 2.0,
            MetricKind::Hyperbolic => -2.0,
            MetricKind::Radial(p) => p.curvature(w.norm())?,
            MetricKind::Tabulated(t) => {
                let cell = t.locate(w).expect("guarded");
                TabulatedMetric::interp_real(&t.curvature, &cell)
            }
        };
        Ok(base / (self.scale * self.scale))
    }

    /// The radial profile behind this metric, when it is rotationally symmetric.
    pub fn radial_profile(&self) -> Option<RadialProfile> {
        let p = match &self.kind {
            MetricKind::Euclidean => RadialProfile::constant(1.0),
            MetricKind::Spherical => RadialProfile::spherical(),
            MetricKind::Hyperbolic => RadialProfile::hyperbolic(),
            MetricKind::Radial(p) => p.clone(),
            MetricKind::Tabulated(_) => return None,
        };
        Some(if self.scale == 1.0 {
            p
        } else {
            p.scaled(self.scale)
        })
    }
}

/// Finite-difference reference values at one point.
#[derive(Debug, Clone, Copy)]
pub struct FdMetricValues {
    pub log_rho2_w: Complex64,
    pub curvature: f64,
}

/// Richardson-extrapolated central differences of `log rho` at `w`.
pub fn fd_metric_values(m: &ConformalMetric, w: Complex64) -> Result<FdMetricValues> {
    m.guard(w)?;
    let step = (1e-3_f64).min(m.clearance(w) / 20.0);
    if !(step > 0.0) {
        return Err(Error::DomainGuard {
            metric: m.name(),
            w,
            node: None,
        });
    }
    let log_rho = |dx: f64, dy: f64| -> Result<f64> { Ok(m.rho(w + Complex64::new(dx, dy))?.ln()) };
    let center = log_rho(0.0, 0.0)?;
    let lap = |h: f64| -> Result<f64> {
        let sum = (log_rho(h, 0.0)? - center)
            + (log_rho(-h, 0.0)? - center)
            + (log_rho(0.0, h)? - center)
            + (log_rho(0.0, -h)? - center);
        Ok(sum / (h * h))
    };
    let dw = |h: f64| -> Result<Complex64> {
        let fx = (log_rho(h, 0.0)? - log_rho(-h, 0.0)?) / (2.0 * h);
        let fy = (log_rho(0.0, h)? - log_rho(0.0, -h)?) / (2.0 * h);
        // ∂_w log rho^2 = 2 * (f_x - i f_y) / 2
        Ok(Complex64::new(fx, -fy))
    };
    let lap_rich = (4.0 * lap(step / 2.0)? - lap(step)?) / 3.0;
    let dw_rich = (dw(step / 2.0)? * 4.0 - dw(step)?) / 3.0;
    let rho = m.rho(w)?;
    Ok(FdMetricValues {
        log_rho2_w: dw_rich,
        curvature: -2.0 * lap_rich / (rho * rho),
    })
}

/// Max over `samples` of the curvature and `(log rho^2)_w` discrepancies against
/// [`fd_metric_values`].
pub fn verify_metric_consistency(m: &ConformalMetric, samples: &[Complex64]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for &w in samples {
        let fd = fd_metric_values(m, w)?;
        worst = worst
            .max((m.curvature(w)? - fd.curvature).abs())
            .max((m.log_rho2_w(w)? - fd.log_rho2_w).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disk_samples(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                Complex64::from_polar(
                    radius * rng.gen::<f64>().sqrt(),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect()
    }

    #[test]
    fn builtin_point_values() {
        let e = ConformalMetric::euclidean();
        assert_eq!(
            (
                e.rho(c(3.0, 4.0)).unwrap(),
                e.curvature(c(3.0, 4.0)).unwrap()
            ),
            (1.0, 0.0)
        );
        let s = ConformalMetric::spherical();
        assert_eq!(
            (
                s.rho(c(0.0, 0.0)).unwrap(),
                s.curvature(c(0.0, 0.0)).unwrap()
            ),
            (2.0, 2.0)
        );
        let h = ConformalMetric::hyperbolic();
        assert_eq!(
            (
                h.rho(c(0.0, 0.0)).unwrap(),
                h.curvature(c(0.0, 0.0)).unwrap()
            ),
            (2.0, -2.0)
        );
    }

    #[test]
    fn hyperbolic_guard_is_an_error() {
        let h = ConformalMetric::hyperbolic();
        assert!(matches!(h.rho(c(1.0, 0.0)), Err(Error::DomainGuard { .. })));
        assert!(matches!(
            h.log_rho2_w(c(0.0, -2.0)),
            Err(Error::DomainGuard { .. })
        ));
        assert!(h.rho(c(0.6, 0.7)).is_ok());
    }

    #[test]
    fn radial_profile_examples() {
        let sph = RadialProfile::spherical();
        assert!((sph.curvature(0.7).unwrap() - 2.0).abs() < 1e-13);
        assert!((sph.curvature(0.0).unwrap() - 2.0).abs() < 1e-13);
        let flat = RadialProfile::constant(3.0);
        assert_eq!(flat.curvature(0.4).unwrap(), 0.0);
        let cyl = RadialProfile::cylinder();
        for r in [0.1, 0.5, 2.0, 9.0] {
            assert!(cyl.curvature(r).unwrap().abs() < 1e-10 * r.powi(-2).max(1.0));
        }
        assert!(matches!(cyl.curvature(0.0), Err(Error::RadialSingularity)));
        let m = radial_metric(RadialProfile::cylinder());
        assert!(!m.contains(c(0.05, 0.0)) && m.contains(c(0.5, 0.5)));
    }

    #[test]
    fn radial_profiles_have_consistent_derivatives() {
        let radii = [0.05, 0.3, 0.7, 0.95];
        assert!(RadialProfile::spherical().derivative_consistency(&radii) < 1e-7);
        assert!(RadialProfile::hyperbolic().derivative_consistency(&[0.05, 0.3, 0.7]) < 1e-7);
        assert!(RadialProfile::cylinder().derivative_consistency(&[0.2, 1.0, 5.0]) < 1e-7);
    }

    #[test]
    fn radial_spherical_matches_builtin() {
        let a = ConformalMetric::spherical();
        let b = radial_metric(RadialProfile::spherical());
        for w in disk_samples(50, 3.0, 7) {
            let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(1e-300);
            assert!(rel(a.rho(w).unwrap(), b.rho(w).unwrap()) < 1e-12);
            assert!(rel(a.curvature(w).unwrap(), b.curvature(w).unwrap()) < 1e-12);
            let (p, q) = (a.log_rho2_w(w).unwrap(), b.log_rho2_w(w).unwrap());
            assert!((p - q).norm() <= 1e-12 * p.norm());
        }
    }

    #[test]
    fn scaling_law() {
        let base = ConformalMetric::hyperbolic();
        let scaled = base.scaled(3.0);
        for w in disk_samples(20, 0.9, 3) {
            assert!(
                (scaled.rho(w).unwrap() - 3.0 * base.rho(w).unwrap()).abs()
                    < 1e-12 * scaled.rho(w).unwrap()
            );
            assert!(
                (scaled.curvature(w).unwrap() - base.curvature(w).unwrap() / 9.0).abs() < 1e-15
            );
            assert_eq!(scaled.log_rho2_w(w).unwrap(), base.log_rho2_w(w).unwrap());
        }
        let radial = radial_metric(RadialProfile::spherical()).scaled(0.5);
        assert!((radial.curvature(c(0.3, 0.1)).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn builtins_are_fd_consistent() {
        let euc =
            verify_metric_consistency(&ConformalMetric::euclidean(), &disk_samples(100, 2.0, 1))
                .unwrap();
        assert!(euc <= 1e-9);
        let sph =
            verify_metric_consistency(&ConformalMetric::spherical(), &disk_samples(100, 2.0, 1))
                .unwrap();
        assert!(sph <= 1e-6, "{sph:e}");
        let hyp =
            verify_metric_consistency(&ConformalMetric::hyperbolic(), &disk_samples(100, 0.9, 1))
                .unwrap();
        assert!(hyp <= 1e-6, "{hyp:e}");
        let cyl = radial_metric(RadialProfile::cylinder());
        let samples: Vec<_> = disk_samples(100, 2.0, 5)
            .into_iter()
            .filter(|w| w.norm() > 0.3)
            .collect();
        assert!(verify_metric_consistency(&cyl, &samples).unwrap() <= 1e-6);
    }

    #[test]
    fn consistency_rejects_samples_outside_domain() {
        let r =
            verify_metric_consistency(&ConformalMetric::hyperbolic(), &[c(0.5, 0.0), c(1.2, 0.0)]);
        assert!(matches!(r, Err(Error::DomainGuard { .. })));
    }

    #[test]
    fn tabulated_spherical_approximates_builtin() {
        let g = Grid::new(-1.0, -1.0, 81, 81, 1.0 / 40.0).unwrap();
        let sph = ConformalMetric::spherical();
        let rho = RealField::from_fn(g, |_, _, w| sph.rho(w).unwrap());
        let tab = ConformalMetric::tabulated(rho).unwrap();
        for w in [c(0.0, 0.0), c(0.31, -0.47), c(-0.6, 0.55)] {
            assert!((tab.rho(w).unwrap() - sph.rho(w).unwrap()).abs() < 1e-3);
            assert!((tab.curvature(w).unwrap() - 2.0).abs() < 1e-2);
            assert!((tab.log_rho2_w(w).unwrap() - sph.log_rho2_w(w).unwrap()).norm() < 1e-2);
        }
        assert!(!tab.contains(c(0.999, 0.0)) && !tab.contains(c(2.0, 0.0)));
        assert!(tab.radial_profile().is_none());
    }

    #[test]
    fn spec_strings() {
        assert_eq!(
            ConformalMetric::from_spec("radial:cylinder")
                .unwrap()
                .name(),
            "radial:cylinder"
        );
        assert!(ConformalMetric::from_spec("radial:nope").is_err());
        assert!(ConformalMetric::from_spec("elliptic").is_err());
    }
}
