//! Logarithmic capacity of planar compacts: Leja and Fekete configurations,
//! discrete Chebyshev constants and their extrapolated limits.

mod chebyshev;
mod estimate;
mod fekete;
mod roots;
mod set;

pub use chebyshev::{chebyshev_constant, MinimaxOptions};
pub use estimate::{
    capacity, capacity_csv, capacity_with, extrapolate, law_check, law_csv, CapacityEstimate,
    CapacityOptions, Law, LawReport, POLAR_THRESHOLD,
};
pub use fekete::{fekete_points, leja_points, transfinite_diameter, vandermonde_mean};
pub use roots::{preimage, roots};
pub use set::{cantor_intervals, make_set, CompactSet, Descriptor};
