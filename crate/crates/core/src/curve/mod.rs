//! The curve family `φ_s`, the forward map `a_ij ↦ d_pq`, its triangular
//! inverse and convergence probes along `φ_s`.

mod family;
mod map;
mod probe;
mod tables;

pub use family::{Curve, CurveFile};
pub use map::{forward_map, forward_map_multinomial, inverse_solve};
pub use probe::{exhaustion_index, probe, probe_dtable, restrict, Probe};
pub use tables::{
    AKind, ATable, DKind, DTable, EntryRecord, Table, TableFile, TableKind, Triangularity,
};
