//! Convergence sets of formal power series along curve families.

pub mod capacity;
pub mod curve;
pub mod error;
pub mod lab;
pub mod scalar;
pub mod series;

pub use curve::{ATable, Curve, DTable};
pub use error::{Error, Result};
pub use scalar::{Backend, ExactComplex, FloatComplex, Scalar};
pub use series::{
    growth_profile, GrowthProfile, MultiIndex, TruncatedSeries, VarSpace, Verdict, VerdictRule,
};
