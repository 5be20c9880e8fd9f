//! Jacobian fields and residual checks for the identities satisfied by harmonic maps.

mod bundle;
mod identities;
mod principles;
mod report;

pub use bundle::{DerivativeSource, JacobianBundle, DEFAULT_FLOOR};
pub use identities::{
    bochner_residuals, bracket_forms, hopf_check, log_bridge_residual, main_identity_residual,
    presubtraction_identity_residual, quadratic_form, radial_identity_residual,
    sigma_bochner_residuals, superharmonicity_check, BochnerPair, BracketChecked, BracketForms,
    QuadraticForm, SigmaBundle, BRACKET_REL_TOL,
};
pub use principles::{minimum_principle_check, random_subrects, MinPrinciple, SubRect};
pub use report::{IdentityReport, NodeStatus, Residuals, Tolerance};
