//! Grid-refinement order estimates.

use serde::{Deserialize, Serialize};

/// Minimum acceptable observed order.
pub const MIN_SLOPE: f64 = 1.9;
/// Errors below this at the coarsest level count as exact; the slope rule is skipped.
pub const EXACT_FLOOR: f64 = 1e-11;

/// Least-squares slope of `log(err)` against `log(h)`.
pub fn fit_slope(h: &[f64], err: &[f64]) -> f64 {
    assert_eq!(h.len(), err.len());
    let n = h.len() as f64;
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub name: String,
    pub spacings: Vec<f64>,
    pub errors: Vec<f64>,
    /// `None` when the exact-floor bypass applied.
    pub slope: Option<f64>,
    pub passed: bool,
}

impl RefinementStudy {
    /// `spacings` coarse to fine.
    pub fn judge(name: impl Into<String>, spacings: Vec<f64>, errors: Vec<f64>) -> Self {
        Self::judge_with(name, spacings, errors, MIN_SLOPE)
    }

    pub fn judge_with(
        name: impl Into<String>,
        spacings: Vec<f64>,
        errors: Vec<f64>,
        min_slope: f64,
    ) -> Self {
        let bypass = errors.first().is_some_and(|&e| e < EXACT_FLOOR);
        let (slope, passed) = if bypass {
            // Finer levels may only grow as fast as stencil rounding, ~1/s².
            let s0 = spacings[0];
            (
                None,
                spacings
                    .iter()
                    .zip(&errors)
                    .all(|(&h, &e)| e < EXACT_FLOOR * (s0 / h).powi(2)),
            )
        } else {
            let s = fit_slope(&spacings, &errors);
            (Some(s), s >= min_slope)
        };
        Self {
            name: name.into(),
            spacings,
            errors,
            slope,
            passed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let h = [0.1, 0.05, 0.025];
        let e: Vec<f64> = h.iter().map(|x| 3.0 * x * x).collect();
        assert!((fit_slope(&h, &e) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bypass_for_exact_results() {
        let st = RefinementStudy::judge("x", vec![0.1, 0.05, 0.025], vec![1e-13, 2e-13, 1e-13]);
        assert!(st.passed && st.slope.is_none());
        let st = RefinementStudy::judge("x", vec![0.1, 0.05, 0.025], vec![6e-13, 3e-12, 1.1e-11]);
        assert!(st.passed, "rounding growth");
        let st = RefinementStudy::judge("x", vec![0.1, 0.05, 0.025], vec![1e-12, 1e-6, 1e-6]);
        assert!(!st.passed);
        let st = RefinementStudy::judge("x", vec![0.1, 0.05, 0.025], vec![1e-3, 5e-4, 2.5e-4]);
        assert!(!st.passed);
    }
}
