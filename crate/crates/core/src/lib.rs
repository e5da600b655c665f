//! Dense GMRES under left, right, split and weighted preconditioning, with
//! the tools to compare placements: residual sandwich checks, eigenvalue
//! bounds, field-of-values support functions, and seeded generators for the
//! Householder-Lee and eigenvector-conditioning families.

pub mod analysis;
pub mod dense;
mod error;
pub mod experiments;
pub mod generators;
pub mod gmres;
pub mod io;
pub mod operators;

pub use error::{Error, Result};
pub use gmres::{
    gmres_solve, run_left_right_pair, stopping_report, true_residual_norm, GmresConfig,
    GmresHistory, GmresResult, GmresStatus, PreconditioningMode, StoppingReport, StoppingVerdict,
};
pub use operators::{combined, LinearOperator, PreconditionerPair};
