//! Experiment drivers: the example generators, the finite-set construction,
//! parameter scans and their reports.

mod construct;
mod examples;
pub mod random;
pub mod report;
mod scan;

pub use construct::{construct_for_finite_set, target_dtable, target_polynomial};
pub use examples::{gen_example_f, gen_example_g, Convention};
pub use scan::{scan, Grid, ScanReport, ScanRow};
