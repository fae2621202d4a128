//! Exact computations with ranks and difference ranks of ordered fields.
//!
//! The crate works bottom-up through three levels of structure:
//!
//! * [`chain`]: totally ordered sets given as terms, monotone shift maps on
//!   them, the equivalence relation a shift induces, quotient chains and
//!   final segments.
//! * [`group`]: the lexicographically ordered Hahn group over a chain, with
//!   rational components and finite supports.
//! * [`field`]: finite-support generalized power series over a Hahn group,
//!   convex valuations, lifted automorphisms and the equivalence relations
//!   on the positive infinite elements.
//!
//! [`rank`] reads ranks off the chain level as order types, and
//! [`construct`] holds the two difference-field recipes together with the
//! brute-force oracles that check the correspondences on finite instances.
//!
//! ```
//! use ordrank::chain::{ChainDescriptor, ChainShift, ShiftMap};
//! use ordrank::construct::build_omega_increasing_example;
//! use ordrank::rank::OrderType;
//!
//! let example = build_omega_increasing_example(3).unwrap();
//! assert_eq!(example.principal_sigma_rank().order_type, OrderType::Finite(3));
//! assert_eq!(example.intersection().order_type, OrderType::Empty);
//! # let _ = (ChainDescriptor::Rationals, ShiftMap::Identity);
//! # let _: Option<ChainShift> = None;
//! ```

pub mod chain;
pub mod construct;
mod error;
pub mod field;
pub mod group;
pub mod rank;
pub mod rational;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/hahn-groups.md")]
    mod hahn_groups {}
    #[doc = include_str!("../../../book/src/hahn-series.md")]
    mod hahn_series {}
    #[doc = include_str!("../../../book/src/ranks.md")]
    mod ranks {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
}
