//! Totally ordered chains, shift maps and their quotients.
//!
//! A chain is an inspectable term ([`ChainDescriptor`]) and its elements are
//! terms too ([`ChainValue`]); comparison always goes through the declaring
//! chain. A [`ChainShift`] pairs a chain with a monotone self-map, and an
//! oriented shift induces the equivalence relation whose classes are the
//! points reachable from each other in finitely many iterations.

mod descriptor;
mod equivalence;
mod segment;
mod shift;

pub use descriptor::{ChainDescriptor, ChainValue};
pub use equivalence::{find_witness, EquivalenceVerdict, DEFAULT_CAP};
pub use segment::{enumerate_final_segments, principal_segment_of, FinalSegmentCut};
pub use shift::{ChainShift, FixedPoints, Orientation, ShiftMap};

/// Applies a validated shift to a value already known to lie in its domain.
pub(crate) fn apply_shift_unchecked(shift: &ChainShift, v: &ChainValue) -> ChainValue {
    shift::apply_map(shift.chain(), shift.map(), v)
}
