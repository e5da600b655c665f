//! Checks of residual bounds and spectral claims against recorded runs.

mod bound;
mod minimax;
mod range;
mod sandwich;
mod spectral;

pub use bound::{saad_bound_check, BoundReport, BoundRow};
pub use minimax::{chebyshev_interval_eps, remez_discrete_eps, MinimaxResult, ResidualPolynomial};
pub use range::{numerical_range_support, RangeSupport, DEFAULT_ANGLES};
pub use sandwich::{
    sandwich_check, split_sandwich_check, SandwichReport, SandwichRow, SANDWICH_SLACK,
};
pub use spectral::{entrywise_gap, similarity_check, EntrywiseGap, SimilarityReport};
