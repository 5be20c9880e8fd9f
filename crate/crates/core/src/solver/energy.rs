//! Energy `∫ (|∂_σ h|^2 + |∂̄_σ h|^2) dV_σ` and the critical-point probe.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarmonicSolution;
use crate::error::{Error, Result};
use crate::grid::{ComplexField, Grid};
use crate::metrics::ConformalMetric;
use crate::refine::fit_slope;

/// Second-order derivative along one axis at every node: central inside, one-sided at the ends.
fn axis_derivative(vals: &[Complex64], n: usize, stride: usize, at: usize, s: f64) -> Complex64 {
    let pos = (at / stride) % n;
    let base = at - pos * stride;
    let f = |k: usize| vals[base + k * stride];
    if pos == 0 {
        (f(0) * -3.0 + f(1) * 4.0 - f(2)) / (2.0 * s)
    } else if pos == n - 1 {
        (f(n - 1) * 3.0 - f(n - 2) * 4.0 + f(n - 3)) / (2.0 * s)
    } else {
        (f(pos + 1) - f(pos - 1)) / (2.0 * s)
    }
}

/// Trapezoidal energy on the node lattice. The domain density enters through the
/// normalized derivatives and the area element; it cancels up to rounding.
pub fn energy(h: &ComplexField, target: &ConformalMetric, domain: &ConformalMetric) -> Result<f64> {
    if !h.is_fully_valid() {
        return Err(Error::MaskedInput("energy"));
    }
    let g: Grid = *h.grid();
    let vals = h.values();
    let mut total = 0.0;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let k = g.idx(i, j);
            let hx = axis_derivative(vals, g.nx, 1, k, g.s);
            let hy = axis_derivative(vals, g.ny, g.nx, k, g.s);
            // |h_z|^2 + |h_zbar|^2 = (|h_x|^2 + |h_y|^2) / 2
            let density = 0.5 * (hx.norm_sqr() + hy.norm_sqr());
            let w = vals[k];
            let rho = target.rho(w).map_err(|_| Error::DomainGuard {
                metric: target.name(),
                w,
                node: Some((i, j)),
            })?;
            let z = g.z(i, j);
            let sigma = domain.rho(z)?;
            let sigma2 = sigma * sigma;
            let normalized = rho * rho * density / sigma2;
            let weight = match (i == 0 || i == g.nx - 1, j == 0 || j == g.ny - 1) {
                (true, true) => 0.25,
                (true, false) | (false, true) => 0.5,
                (false, false) => 1.0,
            };
            total += weight * normalized * sigma2;
        }
    }
    Ok(total * g.s * g.s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpResult {
    /// Sine mode numbers along x and y.
    pub modes: (u32, u32),
    pub phase: f64,
    pub amplitudes: Vec<f64>,
    pub delta_energy: Vec<f64>,
    /// Fitted exponent of `|ΔE|` against amplitude; `None` when every `ΔE` is zero.
    pub exponent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub base_energy: f64,
    pub bumps: Vec<BumpResult>,
}

impl ProbeReport {
    pub fn min_delta(&self) -> f64 {
        self.bumps
            .iter()
            .flat_map(|b| b.delta_energy.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn exponents(&self) -> Vec<f64> {
        self.bumps.iter().filter_map(|b| b.exponent).collect()
    }
}

/// Perturbs `sol.h` by `a * e^{iθ} sin(kπξ) sin(lπη)` (zero on the boundary) for
/// `a ∈ {amplitude, amplitude/2, amplitude/4}` and records the energy change.
pub fn critical_point_probe(
    sol: &HarmonicSolution,
    n_perturbations: usize,
    amplitude: f64,
    seed: u64,
) -> Result<ProbeReport> {
    let euclid = ConformalMetric::euclidean();
    let g = *sol.h.grid();
    let base = energy(&sol.h, &sol.metric, &euclid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bumps = Vec::with_capacity(n_perturbations);
    for _ in 0..n_perturbations {
        let kx: u32 = rng.gen_range(1..=3);
        let ky: u32 = rng.gen_range(1..=3);
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let coeff = Complex64::from_polar(1.0, phase);
        let pi = std::f64::consts::PI;
        let bump = ComplexField::from_fn(g, |i, j, _| {
            let xi = i as f64 / (g.nx - 1) as f64;
            let eta = j as f64 / (g.ny - 1) as f64;
            coeff * ((kx as f64 * pi * xi).sin() * (ky as f64 * pi * eta).sin())
        });
        let amplitudes = vec![amplitude, amplitude / 2.0, amplitude / 4.0];
        let mut delta_energy = Vec::with_capacity(3);
        for &a in &amplitudes {
            let perturbed = sol.h.zip_map(&bump, |h, d| h + d * a);
            delta_energy.push(energy(&perturbed, &sol.metric, &euclid)? - base);
        }
        let exponent = if delta_energy.iter().all(|&d| d != 0.0) && amplitude > 0.0 {
            let mags: Vec<f64> = delta_energy.iter().map(|d| d.abs()).collect();
            Some(fit_slope(&amplitudes, &mags))
        } else {
            None
        };
        bumps.push(BumpResult {
            modes: (kx, ky),
            phase,
            amplitudes,
            delta_energy,
            exponent,
        });
    }
    Ok(ProbeReport {
        base_energy: base,
        bumps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::affine;
    use crate::solver::{solve_harmonic, SolverConfig};

    #[test]
    fn affine_energy_on_unit_square() {
        let g = Grid::new(0.0, 0.0, 33, 33, 1.0 / 32.0).unwrap();
        let h = affine(Complex64::new(0.3, 0.0)).sample(&g);
        let e = energy(
            &h,
            &ConformalMetric::euclidean(),
            &ConformalMetric::euclidean(),
        )
        .unwrap();
        assert!((e - 1.09).abs() <= 1e-6, "{e}");
        let es = energy(
            &h,
            &ConformalMetric::euclidean(),
            &ConformalMetric::spherical(),
        )
        .unwrap();
        assert!((es - e).abs() <= 1e-12 * e);
        let zero = ComplexField::constant(g, Complex64::new(0.2, -0.1));
        assert!(
            energy(
                &zero,
                &ConformalMetric::spherical(),
                &ConformalMetric::euclidean()
            )
            .unwrap()
                < 1e-28
        );
    }

    #[test]
    fn energy_rejects_masked_fields() {
        let g = Grid::new(0.0, 0.0, 9, 9, 0.125).unwrap();
        let h = ComplexField::from_fn(g, |_, _, z| z);
        let partial = crate::calculus::wirtinger_dz(&h).unwrap();
        assert!(matches!(
            energy(
                &partial,
                &ConformalMetric::euclidean(),
                &ConformalMetric::euclidean()
            ),
            Err(Error::MaskedInput(_))
        ));
    }

    #[test]
    fn zero_amplitude_probe_is_flat() {
        let g = Grid::new(0.0, 0.0, 17, 17, 1.0 / 16.0).unwrap();
        let bd = affine(Complex64::new(0.3, 0.0)).sample(&g);
        let sol =
            solve_harmonic(&bd, &ConformalMetric::euclidean(), &SolverConfig::default()).unwrap();
        let rep = critical_point_probe(&sol, 3, 0.0, 1).unwrap();
        for b in &rep.bumps {
            assert!(b.delta_energy.iter().all(|&d| d == 0.0));
            assert!(b.exponent.is_none());
        }
    }

    #[test]
    fn euclidean_solution_is_a_quadratic_minimum() {
        let g = Grid::new(0.0, 0.0, 33, 33, 1.0 / 32.0).unwrap();
        let bd = affine(Complex64::new(0.3, 0.0)).sample(&g);
        let sol =
            solve_harmonic(&bd, &ConformalMetric::euclidean(), &SolverConfig::default()).unwrap();
        let rep = critical_point_probe(&sol, 4, 1e-2, 7).unwrap();
        assert!(rep.min_delta() >= -1e-12);
        for e in rep.exponents() {
            assert!((1.9..=2.1).contains(&e), "{e}");
        }
    }
}
