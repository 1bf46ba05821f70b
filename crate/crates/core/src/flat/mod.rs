//! Polynomial and rational-function tensor calculus on `ℝ^n`.
//!
//! The flat model uses `δ` as the metric, so indices are raised and lowered
//! freely. Constant curvature is modelled by the stereographic metric, whose
//! entries are rational functions, keeping every identity exact.

pub mod field;
pub mod killing;
pub mod metric;
pub mod poly;
pub mod ratfn;
pub mod tractor;

pub use field::{delta, PolyField, RatField, TensorField};
pub use killing::{
    higher_killing_operator, integrability_operator, killing_kernel, killing_operator, killing_potential_solve,
    lie_derivative, CoeffSpace, KillingKernel, RangeResult,
};
pub use metric::{christoffel_solve, covariant_derivative, riemann, LeviCivita, MetricField, MetricMode};
pub use poly::Poly;
pub use ratfn::{RatFn, Scalar};
pub use tractor::{tractor_curvature, tractor_derivative, FlatTractor, TractorConnection, TractorSection};
