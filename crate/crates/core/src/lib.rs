//! Numerical laboratory for harmonic maps between conformal surfaces.
//!
//! Fields live on uniform rectangular grids ([`grid`]); derivatives are second-order
//! finite differences ([`calculus`]); targets carry conformal metrics ([`metrics`]).
//! [`solver`] relaxes the harmonic-map equation to a Dirichlet solution and
//! [`analysis`] checks the Bochner and Jacobian identities on the result.

pub mod analysis;
pub mod calculus;
pub mod cli;
pub mod error;
pub mod grid;
pub mod hmfield;
pub mod io;
pub mod maps;
pub mod metrics;
pub mod refine;
pub mod solver;
pub mod tolerances;

pub use error::{Error, Result};
pub use grid::{ComplexField, Field, Grid, RealField};
pub use metrics::{ConformalMetric, RadialProfile};
