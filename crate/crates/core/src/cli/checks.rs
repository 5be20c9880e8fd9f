//! Runs named analysis checks on a bundle and classifies the outcomes.

use clap::ValueEnum;
use serde::Serialize;

use crate::analysis::{
    bochner_residuals, hopf_check, main_identity_residual, minimum_principle_check,
    presubtraction_identity_residual, quadratic_form, radial_identity_residual, random_subrects,
    sigma_bochner_residuals, superharmonicity_check, IdentityReport, JacobianBundle, Residuals,
    Tolerance,
};
use crate::error::{Error, Result};
use crate::metrics::ConformalMetric;
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Bochner,
    SigmaBochner,
    Main,
    Presub,
    Quadform,
    Superharm,
    Minprin,
    Hopf,
    Radial,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Bochner,
        Check::SigmaBochner,
        Check::Main,
        Check::Presub,
        Check::Quadform,
        Check::Superharm,
        Check::Minprin,
        Check::Hopf,
        Check::Radial,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Every node was excluded; reported but not counted as a failure.
    Empty,
    /// Target curvature is negative somewhere, so the inequality is not claimed.
    HypothesisViolated,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Empty => "EMPTY",
            Status::HypothesisViolated => "SKIP",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<IdentityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl CheckOutcome {
    fn from_report(report: IdentityReport, csv: Option<String>) -> Self {
        let status = if report.empty {
            Status::Empty
        } else if report.passed {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name: report.name.clone(),
            status,
            report: Some(report),
            message: None,
            csv,
        }
    }

    fn from_residuals(r: &Residuals, tol: &Tolerance) -> Self {
        Self::from_report(r.report(tol), Some(r.to_csv()))
    }

    fn message(name: &str, status: Status, msg: String) -> Self {
        Self {
            name: name.into(),
            status,
            report: None,
            message: Some(msg),
            csv: None,
        }
    }

    /// The L∞ residual, zero for empty or report-less outcomes.
    pub fn linf(&self) -> f64 {
        self.report.as_ref().map_or(0.0, |r| r.linf)
    }
}

/// Settings shared by every check in one invocation.
#[derive(Debug, Clone)]
pub struct CheckContext {
    pub metric: ConformalMetric,
    pub domain: ConformalMetric,
    pub seed: u64,
    /// Residual tolerance of the solver that produced the field (0 for analytic maps).
    pub solver_tol: f64,
}

impl CheckContext {
    fn second_order(&self) -> Tolerance {
        tolerances::for_solution(self.solver_tol)
    }
}

/// Number of seeded sub-rectangles for the minimum principle.
pub const MINPRIN_RECTS: usize = 5;

/// Runs one check. A degenerate Jacobian is a failed check and negative target curvature a skip;
/// other errors propagate.
pub fn run_check(
    check: Check,
    b: &JacobianBundle,
    ctx: &CheckContext,
) -> Result<Vec<CheckOutcome>> {
    let name = check
        .to_possible_value()
        .map_or_else(String::new, |v| v.get_name().to_string());
    match evaluate(check, b, ctx) {
        Err(e @ Error::NotSensePreserving { .. }) => Ok(vec![CheckOutcome::message(
            &name,
            Status::Fail,
            e.to_string(),
        )]),
        Err(e @ Error::HypothesisViolated { .. }) => Ok(vec![CheckOutcome::message(
            &name,
            Status::HypothesisViolated,
            e.to_string(),
        )]),
        other => other,
    }
}

fn evaluate(check: Check, b: &JacobianBundle, ctx: &CheckContext) -> Result<Vec<CheckOutcome>> {
    let s = b.grid().s;
    let tol = ctx.second_order();
    match check {
        Check::Bochner => {
            let pair = bochner_residuals(b)?;
            Ok(vec![
                CheckOutcome::from_residuals(&pair.holomorphic, &tol),
                CheckOutcome::from_residuals(&pair.antiholomorphic, &tol),
            ])
        }
        Check::SigmaBochner => {
            let pair = sigma_bochner_residuals(b, &ctx.domain)?;
            Ok(vec![
                CheckOutcome::from_residuals(&pair.holomorphic, &tol),
                CheckOutcome::from_residuals(&pair.antiholomorphic, &tol),
            ])
        }
        Check::Main => {
            let m = main_identity_residual(b)?;
            Ok(vec![CheckOutcome::from_report(
                m.report(&tol),
                Some(m.residuals.to_csv()),
            )])
        }
        Check::Presub => {
            let m = presubtraction_identity_residual(b)?;
            let tol = tol.plus(tolerances::PRESUB_ROUNDING.abs);
            Ok(vec![CheckOutcome::from_report(
                m.report(&tol),
                Some(m.residuals.to_csv()),
            )])
        }
        Check::Quadform => {
            let q = quadratic_form(b);
            Ok(vec![CheckOutcome::from_report(
                q.report(),
                Some(q.residuals.to_csv()),
            )])
        }
        Check::Superharm => {
            let r = superharmonicity_check(b)?;
            let slack = Tolerance::new(
                tolerances::ROUNDING.abs,
                tolerances::SUPERHARM_SLACK_PER_S,
                0.0,
            );
            Ok(vec![CheckOutcome::from_residuals(&r, &slack)])
        }
        Check::Minprin => minprin(b, ctx.seed, s),
        Check::Hopf => Ok(vec![CheckOutcome::from_residuals(&hopf_check(b)?, &tol)]),
        Check::Radial => Ok(vec![CheckOutcome::from_residuals(
            &radial_identity_residual(b, &ctx.metric)?,
            &tol,
        )]),
    }
}

fn minprin(b: &JacobianBundle, seed: u64, s: f64) -> Result<Vec<CheckOutcome>> {
    let rects = random_subrects(&b.j, MINPRIN_RECTS, seed)?;
    let slack = tolerances::MINPRIN_SLACK_PER_S * s;
    rects
        .into_iter()
        .enumerate()
        .map(|(n, rect)| {
            let m = minimum_principle_check(&b.j, rect, slack)?;
            let mut rep = m.report(s);
            rep.name = format!("minprin-{}", n + 1);
            let mut out = CheckOutcome::from_report(rep, None);
            out.message = Some(format!(
                "rect [{}..{}]x[{}..{}] interior min {:.6e} at {:?}, boundary min {:.6e} at {:?}",
                rect.i0,
                rect.i1,
                rect.j0,
                rect.j1,
                m.interior_min,
                m.interior_at,
                m.boundary_min,
                m.boundary_at
            ));
            Ok(out)
        })
        .collect()
}
