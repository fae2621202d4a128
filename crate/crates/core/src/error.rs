use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {value} is not an element of chain {chain}")]
    CrossChainComparison { chain: String, value: String },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("shift {0} has no orientation; its equivalence relation is undefined")]
    UnknownOrientation(String),
    #[error("equivalence of {a} and {b} undecided after {cap} iterations")]
    UndecidedEquivalence { a: String, b: String, cap: u32 },
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("chain {0} is not finite")]
    NotFinite(String),
    #[error("operation undefined on the zero group element")]
    ZeroElement,
    #[error("shift {0} is not invertible")]
    NotInvertible(String),
    #[error("operation undefined on the zero series")]
    ZeroSeries,
    #[error("series {0} is not in the valuation ring")]
    NotInValuationRing(String),
    #[error("series {0} is not positive infinite")]
    NotInPK(String),
    #[error("square growth hypothesis not proven: {0}")]
    HypothesisNotProven(String),
    #[error("no canonical quotient for {0}")]
    NoCanonicalQuotient(String),
    #[error("inconsistent initial segment: {0}")]
    InconsistentSegment(String),
    #[error("the automorphism of the positive rationals must be non-trivial")]
    TrivialEta,
    #[error("element pool too large for n = {0} (at most 8)")]
    PoolTooLarge(usize),
    #[error("quotient has {0} classes (at most 6 supported)")]
    QuotientTooLarge(usize),
    #[error("exponent {0} too large for exact power comparison")]
    ExponentTooLarge(String),
}
