//! Pointwise identity checks for harmonic maps between conformal surfaces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bundle::JacobianBundle;
use super::report::{IdentityReport, Residuals, Tolerance};
use crate::calculus;
use crate::error::{Error, Result};
use crate::grid::{and_masks, erode_plus, Grid, RealField};
use crate::metrics::ConformalMetric;

/// Agreement required between the three algebraic forms of the bracket, relative to its terms.
pub const BRACKET_REL_TOL: f64 = 1e-12;

/// The bracket `α²|B|² + α⁻²|A|² − 2Re(A B̄)` computed three ways, with `α² = P/M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketForms {
    pub three_term: f64,
    /// `|αB − α⁻¹A|²`
    pub single_square: f64,
    /// `(α|B| − α⁻¹|A|)² + 2(|A||B| − Re(A B̄))`
    pub decomposed: f64,
    /// `α²|B|² + α⁻²|A|²`, the natural size of every form.
    pub scale: f64,
}

impl BracketForms {
    pub fn max_relative_mismatch(&self) -> f64 {
        let s = self.scale.max(f64::MIN_POSITIVE);
        let d1 = (self.three_term - self.single_square).abs();
        let d2 = (self.decomposed - self.single_square).abs();
        d1.max(d2) / s
    }
}

pub fn bracket_forms(a: Complex64, b: Complex64, p: f64, m: f64) -> BracketForms {
    let alpha2 = p / m;
    let alpha = alpha2.sqrt();
    let t1 = alpha2 * b.norm_sqr();
    let t2 = a.norm_sqr() / alpha2;
    let cross = (a * b.conj()).re;
    let (na, nb) = (a.norm(), b.norm());
    BracketForms {
        three_term: t1 + t2 - 2.0 * cross,
        single_square: (b * alpha - a / alpha).norm_sqr(),
        decomposed: (alpha * nb - na / alpha).powi(2) + 2.0 * (na * nb - cross),
        scale: t1 + t2,
    }
}

/// Treats "nothing left to evaluate" as an empty result rather than an error.
fn soft(r: Result<RealField>) -> Result<Option<RealField>> {
    match r {
        Ok(f) => Ok(Some(f)),
        Err(Error::EmptyInterior | Error::FieldNotPositive) => Ok(None),
        Err(e) => Err(e),
    }
}

fn not_degenerate(b: &JacobianBundle) -> Vec<bool> {
    b.degenerate().iter().map(|d| !d).collect()
}

/// Non-degenerate interior nodes with `J⁰ ≤ 0`.
fn require_sense_preserving(b: &JacobianBundle, interior: &[bool]) -> Result<()> {
    let deg = b.degenerate();
    let nodes: Vec<(usize, usize)> = (0..b.grid().len())
        .filter(|&k| interior[k] && !deg[k] && b.j0.mask()[k] && b.j0.values()[k] <= 0.0)
        .map(|k| b.grid().ij(k))
        .collect();
    if nodes.is_empty() {
        Ok(())
    } else {
        Err(Error::NotSensePreserving { nodes })
    }
}

/// Both Bochner-type residuals.
#[derive(Debug, Clone)]
pub struct BochnerPair {
    /// `Δ log|∂h|² + K₂J` (or its σ-form).
    pub holomorphic: Residuals,
    /// `Δ log|∂̄h|² − K₂J` (or its σ-form).
    pub antiholomorphic: Residuals,
}

impl BochnerPair {
    pub fn reports(&self, tol: &Tolerance) -> (IdentityReport, IdentityReport) {
        (
            self.holomorphic.report(tol),
            self.antiholomorphic.report(tol),
        )
    }
}

/// `Δ^σ log q` against `rhs(k)` where `q = |derivative|²/σ²`, skipping degenerate nodes
/// and every node whose stencil reaches one.
fn log_laplacian_check(
    name: &str,
    b: &JacobianBundle,
    q: &RealField,
    degenerate: &[bool],
    sigma2: &[f64],
    rhs: impl Fn(usize) -> f64,
) -> Result<Residuals> {
    let g = *b.grid();
    let interior = and_masks(
        &and_masks(&erode_plus(&g, q.mask()), b.curvature.mask()),
        b.j.mask(),
    );
    let mut r = Residuals::new(name, g);
    r.mark_interior(&interior);
    let keep: Vec<bool> = degenerate.iter().map(|d| !d).collect();
    if let Some(lhs) = soft(calculus::laplacian_of_log(&q.restrict(&keep)))? {
        for (i, j, v) in lhs.iter_valid() {
            let k = g.idx(i, j);
            if interior[k] {
                r.set(k, v / sigma2[k], rhs(k));
            }
        }
    }
    Ok(r)
}

/// `Δ log|∂h|² = −K₂J` and `Δ log|∂̄h|² = K₂J`.
pub fn bochner_residuals(b: &JacobianBundle) -> Result<BochnerPair> {
    let ones = vec![1.0; b.grid().len()];
    let kj = |k: usize| b.curvature.values()[k] * b.j.values()[k];
    Ok(BochnerPair {
        holomorphic: log_laplacian_check(
            "bochner-dz",
            b,
            &b.dh.norm_sqr(),
            &b.dz_degenerate,
            &ones,
            |k| -kj(k),
        )?,
        antiholomorphic: log_laplacian_check(
            "bochner-dzbar",
            b,
            &b.dbh.norm_sqr(),
            &b.dzbar_degenerate,
            &ones,
            kj,
        )?,
    })
}

/// Derivatives normalized by a domain metric `σ`.
#[derive(Debug, Clone)]
pub struct SigmaBundle {
    pub sigma: RealField,
    /// Domain curvature `K₁`.
    pub k1: RealField,
    /// `∂_σh = ∂h / σ`
    pub dsh: crate::grid::ComplexField,
    /// `∂̄_σh = ∂̄h / σ`
    pub dbsh: crate::grid::ComplexField,
    /// `J^σ = J / σ²`
    pub jsigma: RealField,
}

impl SigmaBundle {
    pub fn new(b: &JacobianBundle, domain: &ConformalMetric) -> Result<Self> {
        let g = *b.grid();
        let eval = |f: &dyn Fn(Complex64) -> Result<f64>| -> Result<RealField> {
            let mut v = Vec::with_capacity(g.len());
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let z = g.z(i, j);
                    v.push(f(z).map_err(|_| Error::DomainGuard {
                        metric: domain.name(),
                        w: z,
                        node: Some((i, j)),
                    })?);
                }
            }
            RealField::from_parts(g, v, vec![true; g.len()])
        };
        let sigma = eval(&|z| domain.rho(z))?;
        let k1 = eval(&|z| domain.curvature(z))?;
        Ok(Self {
            dsh: b.dh.zip_map(&sigma, |v, s| v / s),
            dbsh: b.dbh.zip_map(&sigma, |v, s| v / s),
            jsigma: b.j.zip_map(&sigma, |v, s| v / (s * s)),
            sigma,
            k1,
        })
    }
}

/// `Δ^σ log|∂_σh|² = K₁ − K₂J^σ` and `Δ^σ log|∂̄_σh|² = K₁ + K₂J^σ`, with `Δ^σ = σ⁻²Δ`.
pub fn sigma_bochner_residuals(
    b: &JacobianBundle,
    domain: &ConformalMetric,
) -> Result<BochnerPair> {
    let sb = SigmaBundle::new(b, domain)?;
    let sigma2: Vec<f64> = sb.sigma.values().iter().map(|s| s * s).collect();
    let k1 = sb.k1.values();
    let kj = |k: usize| b.curvature.values()[k] * sb.jsigma.values()[k];
    Ok(BochnerPair {
        holomorphic: log_laplacian_check(
            "sigma-bochner-dz",
            b,
            &sb.dsh.norm_sqr(),
            &b.dz_degenerate,
            &sigma2,
            |k| k1[k] - kj(k),
        )?,
        antiholomorphic: log_laplacian_check(
            "sigma-bochner-dzbar",
            b,
            &sb.dbsh.norm_sqr(),
            &b.dzbar_degenerate,
            &sigma2,
            |k| k1[k] + kj(k),
        )?,
    })
}

/// Residuals plus the worst disagreement among the three bracket forms.
#[derive(Debug, Clone)]
pub struct BracketChecked {
    pub residuals: Residuals,
    pub bracket_mismatch: f64,
}

impl BracketChecked {
    pub fn report(&self, tol: &Tolerance) -> IdentityReport {
        let mut rep = self.residuals.report(tol);
        rep.passed &= self.bracket_mismatch <= BRACKET_REL_TOL;
        rep
    }
}

/// Nodes where the bracket terms and curvature are all available.
fn bracket_interior(b: &JacobianBundle) -> Vec<bool> {
    let structural = and_masks(&erode_plus(b.grid(), b.j.mask()), b.a.mask());
    and_masks(&and_masks(&structural, b.b.mask()), b.curvature.mask())
}

/// `−Δ log J = K₂D + (4ρ⁴/J²)(α²|B|² + α⁻²|A|² − 2Re(A B̄))`, the left side assembled
/// as `(|∇J|² − JΔJ)/J²`.
pub fn main_identity_residual(b: &JacobianBundle) -> Result<BracketChecked> {
    let g = *b.grid();
    let interior = bracket_interior(b);
    require_sense_preserving(b, &interior)?;
    let mut r = Residuals::new("main", g);
    r.mark_interior(&interior);
    let mut mismatch: f64 = 0.0;
    let keep = not_degenerate(b);
    if let Some(lhs) = soft(calculus::log_laplacian_crosscheck(&b.j))? {
        for (i, j, v) in lhs.iter_valid() {
            let k = g.idx(i, j);
            if !interior[k] || !keep[k] {
                continue;
            }
            let (p, m) = b.pm(k);
            let br = bracket_forms(b.a.values()[k], b.b.values()[k], p, m);
            mismatch = mismatch.max(br.max_relative_mismatch());
            let rho = b.rho.values()[k];
            let jv = b.j.values()[k];
            let rhs = b.curvature.values()[k] * b.d.values()[k]
                + 4.0 * rho.powi(4) / (jv * jv) * br.three_term;
            r.set(k, -v, rhs);
        }
    }
    Ok(BracketChecked {
        residuals: r,
        bracket_mismatch: mismatch,
    })
}

/// `|∇J|² − JΔJ = K₂J²D + 4ρ⁴(α²|B|² + α⁻²|A|² − 2Re(A B̄))`, no logarithm, any sign of `J`.
pub fn presubtraction_identity_residual(b: &JacobianBundle) -> Result<BracketChecked> {
    let g = *b.grid();
    let interior = bracket_interior(b);
    let mut r = Residuals::new("presub", g);
    r.mark_interior(&interior);
    let keep = not_degenerate(b);
    let grad = calculus::grad_norm_sq(&b.j)?;
    let lap = calculus::laplacian(&b.j)?;
    let mut mismatch: f64 = 0.0;
    for k in 0..g.len() {
        if !interior[k] || !keep[k] || !grad.mask()[k] {
            continue;
        }
        let jv = b.j.values()[k];
        let lhs = grad.values()[k] - jv * lap.values()[k];
        let (p, m) = b.pm(k);
        let br = bracket_forms(b.a.values()[k], b.b.values()[k], p, m);
        mismatch = mismatch.max(br.max_relative_mismatch());
        let rho = b.rho.values()[k];
        let rhs =
            b.curvature.values()[k] * jv * jv * b.d.values()[k] + 4.0 * rho.powi(4) * br.three_term;
        r.set(k, lhs, rhs);
    }
    Ok(BracketChecked {
        residuals: r,
        bracket_mismatch: mismatch,
    })
}

/// `(|∇J|² − JΔJ)/J²` against `−Δ log J` taken through the logarithm.
pub fn log_bridge_residual(b: &JacobianBundle) -> Result<Residuals> {
    let g = *b.grid();
    let interior = erode_plus(&g, b.j.mask());
    require_sense_preserving(b, &interior)?;
    let mut r = Residuals::new("log-bridge", g);
    r.mark_interior(&interior);
    let keep = not_degenerate(b);
    let j = b.j.restrict(&keep);
    if let (Some(quot), Some(log)) = (
        soft(calculus::log_laplacian_crosscheck(&j))?,
        soft(calculus::laplacian_of_log(&j))?,
    ) {
        for k in 0..g.len() {
            if interior[k] && quot.mask()[k] && log.mask()[k] {
                r.set(k, -quot.values()[k], -log.values()[k]);
            }
        }
    }
    Ok(r)
}

/// The decomposed bracket `Q` and its agreement with the single-square form.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    pub q: RealField,
    /// Per node: `max(|Q − |αB − α⁻¹A|²|, max(0, −Q)) / scale`.
    pub residuals: Residuals,
    pub negative_nodes: usize,
}

impl QuadraticForm {
    pub fn report(&self) -> IdentityReport {
        let mut rep = self.residuals.report(&Tolerance::absolute(BRACKET_REL_TOL));
        rep.passed &= self.negative_nodes == 0;
        rep
    }
}

pub fn quadratic_form(b: &JacobianBundle) -> QuadraticForm {
    let g = *b.grid();
    let interior = and_masks(b.a.mask(), b.b.mask());
    let keep = not_degenerate(b);
    let mut r = Residuals::new("quadform", g);
    r.mark_interior(&interior);
    let mut negative_nodes = 0;
    let q = RealField::from_partial(g, |k| {
        (interior[k] && keep[k])
            .then(|| {
                let (p, m) = b.pm(k);
                bracket_forms(b.a.values()[k], b.b.values()[k], p, m)
            })
            .map(|br| br.decomposed)
    });
    for k in 0..g.len() {
        if !(interior[k] && keep[k]) {
            continue;
        }
        let (p, m) = b.pm(k);
        let br = bracket_forms(b.a.values()[k], b.b.values()[k], p, m);
        let s = br.scale.max(f64::MIN_POSITIVE);
        // Rounding can leave an exact zero a few ulps negative.
        let neg = (-br.decomposed).max(0.0) / s;
        if neg > BRACKET_REL_TOL {
            negative_nodes += 1;
        }
        let rel = (br.decomposed - br.single_square).abs() / s;
        r.set_with(k, br.decomposed, br.single_square, rel.max(neg));
    }
    QuadraticForm {
        q,
        residuals: r,
        negative_nodes,
    }
}

fn require_nonnegative_curvature(b: &JacobianBundle) -> Result<()> {
    for (i, j, k) in b.curvature.iter_valid() {
        if k < 0.0 {
            return Err(Error::HypothesisViolated {
                curvature: k,
                node: (i, j),
            });
        }
    }
    Ok(())
}

/// `Δ log J ≤ slack` at every evaluated node; the residual is the violation `max(0, Δ log J)`.
pub fn superharmonicity_check(b: &JacobianBundle) -> Result<Residuals> {
    require_nonnegative_curvature(b)?;
    let g = *b.grid();
    let interior = erode_plus(&g, b.j.mask());
    require_sense_preserving(b, &interior)?;
    let mut r = Residuals::new("superharm", g);
    r.mark_interior(&interior);
    let keep = not_degenerate(b);
    if let Some(lap) = soft(calculus::log_laplacian_crosscheck(&b.j))? {
        for (i, j, v) in lap.iter_valid() {
            let k = g.idx(i, j);
            if interior[k] && keep[k] {
                r.set_with(k, v, 0.0, v.max(0.0));
            }
        }
    }
    Ok(r)
}

/// Normalized `|∂_z̄ Ψ|` for `Ψ = ρ²(h) h_z conj(h_z̄)`.
pub fn hopf_check(b: &JacobianBundle) -> Result<Residuals> {
    let g = *b.grid();
    let first = b.hz.zip_map(&b.hzbar, |a, c| a * c.conj());
    let psi = first.zip_map(&b.rho, |v, r| v * (r * r));
    let dbar = calculus::wirtinger_dzbar(&psi)?;
    let max_psi = psi.max_modulus();
    let max_d = b.d.max_modulus();
    // Ψ at rounding level relative to D means a holomorphic map: report absolute values.
    let norm = if max_psi > 1e-8 * max_d { max_psi } else { 1.0 };
    let mut r = Residuals::new("hopf", g);
    r.mark_interior(dbar.mask());
    for (i, j, v) in dbar.iter_valid() {
        let n = v.norm() / norm;
        r.set(g.idx(i, j), n, 0.0);
    }
    Ok(r)
}

/// The rotationally symmetric form with `r = |h|`:
/// `−Δ log J⁰ = K₂ρ²(D⁰ − |∇r|²) + (2ρ'/(ρr))(rΔr − |∇r|²) + (4ρ⁴/J²)(bracket)`.
///
/// Where exactly one of `h_z`, `h_z̄` vanishes on a node and its whole 3×3 neighborhood,
/// the bracket takes its holomorphic limit 0; other degenerate nodes are excluded.
pub fn radial_identity_residual(b: &JacobianBundle, metric: &ConformalMetric) -> Result<Residuals> {
    let profile = metric
        .radial_profile()
        .ok_or_else(|| Error::NotRadial(metric.name()))?;
    let g: Grid = *b.grid();
    let rfield = b.h.abs();
    let rmax = rfield.max_value().unwrap_or(0.0);
    let rkeep: Vec<bool> = rfield
        .values()
        .iter()
        .map(|&v| v >= b.floor * rmax)
        .collect();
    let rfield = rfield.restrict(&rkeep);
    for (i, j, rv) in rfield.iter_valid() {
        if !profile.contains(rv) {
            return Err(Error::DomainGuard {
                metric: metric.name(),
                w: b.h.at(i, j),
                node: Some((i, j)),
            });
        }
    }
    let interior = bracket_interior(b);
    require_sense_preserving(b, &interior)?;
    let mut res = Residuals::new("radial", g);
    res.mark_interior(&interior);
    let (Some(grad_r), Some(lap_r), Some(lhs)) = (
        soft(calculus::grad_norm_sq(&rfield))?,
        soft(calculus::laplacian(&rfield))?,
        soft(calculus::log_laplacian_crosscheck(&b.j0))?,
    ) else {
        return Ok(res);
    };
    let uniform = |deg: &[bool], i: usize, j: usize| {
        (-1..=1).all(|dj| (-1..=1).all(|di| g.offset(i, j, di, dj).is_none_or(|n| deg[n])))
    };
    for k in 0..g.len() {
        if !(interior[k] && grad_r.mask()[k] && lap_r.mask()[k] && lhs.mask()[k]) {
            continue;
        }
        let (i, j) = g.ij(k);
        let (dz, dzb) = (b.dz_degenerate[k], b.dzbar_degenerate[k]);
        let bracket = match (dz, dzb) {
            (false, false) => {
                let (p, m) = b.pm(k);
                bracket_forms(b.a.values()[k], b.b.values()[k], p, m).three_term
            }
            (true, false) if uniform(&b.dz_degenerate, i, j) => 0.0,
            (false, true) if uniform(&b.dzbar_degenerate, i, j) => 0.0,
            _ => continue,
        };
        let rv = rfield.values()[k];
        let rho = profile.rho(rv);
        let drho = profile.drho(rv);
        let kk = profile.curvature(rv)?;
        let gr = grad_r.values()[k];
        let t1 = kk * rho * rho * (b.d0.values()[k] - gr);
        let t2 = 2.0 * drho / (rho * rv) * (rv * lap_r.values()[k] - gr);
        let jv = b.j.values()[k];
        let t3 = if bracket == 0.0 {
            0.0
        } else {
            4.0 * rho.powi(4) / (jv * jv) * bracket
        };
        res.set(k, -lhs.values()[k], t1 + t2 + t3);
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::bundle::DEFAULT_FLOOR;
    use crate::maps::{affine, euclidean_harmonic, holomorphic_map, AnalyticMap};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn quad() -> AnalyticMap {
        euclidean_harmonic(vec![c(0.0), c(0.0), c(1.0)], vec![c(0.0), c(0.0), c(0.3)])
    }

    fn quad_grid(n: usize) -> Grid {
        Grid::new(0.5, 0.5, n, n, 1.0 / (n - 1) as f64).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let q = bracket_forms(c(1.0), c(1.0), 1.0, 1.0);
        assert_eq!(q.decomposed, 0.0);
        let q = bracket_forms(c(1.0), c(-1.0), 1.0, 1.0);
        assert!((q.decomposed - 4.0).abs() < 1e-15);
        assert!((q.three_term - 4.0).abs() < 1e-15);
        let q = bracket_forms(c(4.0), c(0.36), 4.0, 0.36);
        assert!(q.three_term.abs() < 1e-14 && q.single_square.abs() < 1e-14);
    }

    #[test]
    fn affine_checks_vanish() {
        let g = Grid::new(0.0, 0.0, 17, 17, 1.0 / 16.0).unwrap();
        let e = ConformalMetric::euclidean();
        for b in [
            JacobianBundle::from_map(&affine(c(0.3)), &g, &e, DEFAULT_FLOOR).unwrap(),
            JacobianBundle::from_field(&affine(c(0.3)).sample(&g), &e, DEFAULT_FLOOR).unwrap(),
        ] {
            let tol = Tolerance::absolute(1e-10);
            assert!(main_identity_residual(&b).unwrap().report(&tol).passed);
            assert!(
                presubtraction_identity_residual(&b)
                    .unwrap()
                    .report(&tol)
                    .passed
            );
            let (r1, r2) = bochner_residuals(&b).unwrap().reports(&tol);
            assert!(r1.passed && r2.passed);
            assert!(superharmonicity_check(&b).unwrap().report(&tol).passed);
            assert!(hopf_check(&b).unwrap().report(&tol).passed);
            assert!(quadratic_form(&b).report().passed);
            let rad = radial_identity_residual(&b, &e).unwrap().report(&tol);
            assert!(rad.passed, "{rad:?}");
        }
    }

    #[test]
    fn quadratic_fixture_main_identity() {
        let e = ConformalMetric::euclidean();
        for n in [33, 65, 129] {
            let b = JacobianBundle::from_map(&quad(), &quad_grid(n), &e, DEFAULT_FLOOR).unwrap();
            let m = main_identity_residual(&b).unwrap();
            let rep = m.report(&Tolerance::absolute(1e-10));
            assert!(rep.passed, "{rep:?} mismatch {}", m.bracket_mismatch);
            assert_eq!(rep.excluded_nodes, 0);
        }
        // Differenced derivatives carry rounding of order eps/s^3 through the Laplacian of J.
        let b =
            JacobianBundle::from_field(&quad().sample(&quad_grid(33)), &e, DEFAULT_FLOOR).unwrap();
        assert!(main_identity_residual(&b).unwrap().residuals.linf() < 1e-10);
    }

    #[test]
    fn printed_b_does_not_close_the_identity() {
        // B' = h_zzbar conj(h_z) + h_zbarz conj(h_zzbar) vanishes on the quadratic fixture.
        let e = ConformalMetric::euclidean();
        let g = quad_grid(33);
        let mut b = JacobianBundle::from_map(&quad(), &g, &e, DEFAULT_FLOOR).unwrap();
        b.b = b.b.map(|_| Complex64::new(0.0, 0.0));
        let rep = main_identity_residual(&b)
            .unwrap()
            .report(&Tolerance::absolute(1e-6));
        assert!(!rep.passed && rep.linf > 0.1);
    }

    #[test]
    fn modulus_squared_is_rejected() {
        let g = Grid::new(0.25, 0.25, 17, 17, 1.0 / 16.0).unwrap();
        let b = JacobianBundle::from_map(
            &AnalyticMap::modulus_squared(),
            &g,
            &ConformalMetric::euclidean(),
            DEFAULT_FLOOR,
        )
        .unwrap();
        assert!(matches!(
            main_identity_residual(&b),
            Err(Error::NotSensePreserving { .. })
        ));
        assert!(hopf_check(&b).unwrap().linf() > 0.1);
    }

    #[test]
    fn negative_curvature_is_a_hypothesis_violation() {
        let g = Grid::new(-0.25, -0.25, 9, 9, 1.0 / 16.0).unwrap();
        let b = JacobianBundle::from_map(
            &affine(c(0.3)),
            &g,
            &ConformalMetric::hyperbolic(),
            DEFAULT_FLOOR,
        )
        .unwrap();
        assert!(matches!(
            superharmonicity_check(&b),
            Err(Error::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn sigma_form_collapses_for_flat_domain() {
        let g = Grid::new(-0.5, -0.5, 33, 33, 1.0 / 32.0).unwrap();
        let h = holomorphic_map(vec![c(0.1), c(0.5), c(0.2)]);
        let b =
            JacobianBundle::from_field(&h.sample(&g), &ConformalMetric::spherical(), DEFAULT_FLOOR)
                .unwrap();
        let plain = bochner_residuals(&b).unwrap();
        let sigma = sigma_bochner_residuals(&b, &ConformalMetric::euclidean()).unwrap();
        assert_eq!(plain.holomorphic.status, sigma.holomorphic.status);
        for k in plain.holomorphic.evaluated() {
            let (a, s) = (plain.holomorphic.residual[k], sigma.holomorphic.residual[k]);
            assert!((a - s).abs() <= 1e-12 * a.abs().max(1e-300), "{a} {s}");
        }
        assert!(
            plain
                .antiholomorphic
                .report(&Tolerance::absolute(1.0))
                .empty
        );
    }

    #[test]
    fn identity_into_sphere_bochner_is_second_order() {
        let s = ConformalMetric::spherical();
        let mut errs = Vec::new();
        for n in [17, 33, 65] {
            let g = Grid::new(-0.5, -0.5, n, n, 1.0 / (n - 1) as f64).unwrap();
            let b = JacobianBundle::from_field(
                &holomorphic_map(vec![c(0.0), c(1.0)]).sample(&g),
                &s,
                DEFAULT_FLOOR,
            )
            .unwrap();
            errs.push(bochner_residuals(&b).unwrap().holomorphic.linf());
        }
        let slope = crate::refine::fit_slope(&[1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0], &errs);
        assert!(slope > 1.9, "{errs:?}");
    }
}
