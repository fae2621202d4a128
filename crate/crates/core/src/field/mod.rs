//! Generalized power series with finite support over a Hahn group.
//!
//! Series are ordered lexicographically by their least exponent, so the
//! positive infinite elements are those with a negative valuation and a
//! positive leading coefficient. Convex valuations are coarsenings of the
//! natural valuation, one for each final segment of the value chain.

mod automorphism;
mod equivalence;
mod series;
mod valuation;

pub use automorphism::{lift_group_automorphism_to_field, AutomorphismTower, Classification, TowerOrigin, Verdict};
pub use equivalence::{compare_powers, mult_equivalent, sigma_equivalent};
pub use series::HahnSeries;
pub use valuation::{in_natural_ring, ConvexValuation};
