//! Sparse truncated multivariate power series over a selectable backend.

mod growth;
mod io;
mod monomial;
mod truncated;

pub use growth::{growth_profile, GrowthProfile, Verdict, VerdictRule};
pub(crate) use io::{series_from_terms, term_records, var_space, weights_field};
pub use io::{BackendTag, SeriesFile, TermRecord};
pub use monomial::{MultiIndex, VarSpace};
pub use truncated::TruncatedSeries;

use crate::scalar::{ExactComplex, FloatComplex};

pub type RationalSeries = TruncatedSeries<ExactComplex>;
pub type FloatSeries = TruncatedSeries<FloatComplex>;
