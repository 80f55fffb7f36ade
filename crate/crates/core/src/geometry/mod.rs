//! Pointwise differential geometry of a chart `x̂ : U → ℝ³`.
//!
//! The unit normal is always `n = (g₁ × g₂) / |g₁ × g₂|`, so swapping the two
//! parameter directions flips `n` and with it the sign of the mean curvature
//! `H_Γ = −div_Γ n`.

mod chart;
mod domain;
mod frame;
mod validate;

pub use chart::{Chart, ChartKind, MongeTerm, DEFAULT_LAMBDA_MIN_FLOOR};
pub use domain::DomainSpec;
pub use frame::{conormal, conormal_at, mean_curvature, metric_frame, MetricFrame};
pub use validate::{validate_chart, ValidationReport, WorstPoint};
