//! Ranks of a Hahn field and their description by the value chain.
//!
//! The convex valuation rings containing the natural one form a chain under
//! inclusion. It is reported here through its order type, computed on the
//! value chain `Γ`:
//!
//! | rank | order type |
//! |---|---|
//! | rank | final segments of `Γ` |
//! | principal rank | `Γ` reversed |
//! | σ-rank | final segments of `Γ/∼` |
//! | principal σ-rank | `Γ/∼` reversed |
//! | σ-compatible principal rings | fixed points of `σ_Γ`, reversed |
//!
//! where `∼` is the equivalence induced by `σ_Γ`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::chain::{ChainDescriptor, ChainShift, EquivalenceVerdict, FinalSegmentCut, FixedPoints};
use crate::field::{
    in_natural_ring, mult_equivalent, sigma_equivalent, AutomorphismTower, ConvexValuation, HahnSeries,
};
use crate::{Error, Result};

/// An order type, exact when finite and symbolic otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderType {
    Empty,
    Finite(usize),
    /// The order type of an infinite chain term.
    Chain(ChainDescriptor),
    /// The reverse of an infinite chain term.
    Reversed(ChainDescriptor),
    /// The final segments of an infinite chain term, under inclusion.
    FinalSegments(ChainDescriptor),
}

impl OrderType {
    pub fn cardinality(&self) -> Option<usize> {
        match self {
            OrderType::Empty => Some(0),
            OrderType::Finite(n) => Some(*n),
            _ => None,
        }
    }

    fn reverse_of(chain: &ChainDescriptor) -> Self {
        match chain.normalized() {
            ChainDescriptor::Finite(0) => OrderType::Empty,
            ChainDescriptor::Finite(n) => OrderType::Finite(n),
            ChainDescriptor::Reverse(inner) => OrderType::Chain(*inner),
            other => OrderType::Reversed(other),
        }
    }

    fn final_segments_of(chain: &ChainDescriptor) -> Self {
        match chain.normalized() {
            ChainDescriptor::Finite(0) => OrderType::Empty,
            ChainDescriptor::Finite(n) => OrderType::Finite(n),
            other => OrderType::FinalSegments(other),
        }
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderType::Empty => write!(f, "empty"),
            OrderType::Finite(n) => write!(f, "finite({n})"),
            OrderType::Chain(c) => write!(f, "{c}"),
            OrderType::Reversed(c) => write!(f, "reverse({c})"),
            OrderType::FinalSegments(c) => write!(f, "final-segments({c})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankKind {
    Rank,
    PrincipalRank,
    SigmaRank,
    PrincipalSigmaRank,
    SigmaPrincipalIntersection,
}

impl fmt::Display for RankKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RankKind::Rank => "rank",
            RankKind::PrincipalRank => "principal_rank",
            RankKind::SigmaRank => "sigma_rank",
            RankKind::PrincipalSigmaRank => "principal_sigma_rank",
            RankKind::SigmaPrincipalIntersection => "sigma_principal_intersection",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankDescriptor {
    pub kind: RankKind,
    pub order_type: OrderType,
    /// The correspondence that justifies the order type.
    pub provenance: &'static str,
}

impl Serialize for RankDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Card {
            Count(usize),
            Word(&'static str),
        }
        #[derive(Serialize)]
        struct Wire<'a> {
            kind: RankKind,
            order_type: String,
            cardinality: Card,
            provenance: &'a str,
        }
        Wire {
            kind: self.kind,
            order_type: self.order_type.to_string(),
            cardinality: match self.order_type.cardinality() {
                Some(n) => Card::Count(n),
                None => Card::Word("infinite"),
            },
            provenance: self.provenance,
        }
        .serialize(s)
    }
}

impl fmt::Display for RankDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} [{}]", self.kind, self.order_type, self.provenance)
    }
}

/// The rank: one convex valuation ring per final segment of `Γ`.
pub fn rank_of(chain: &ChainDescriptor) -> Result<RankDescriptor> {
    Ok(RankDescriptor {
        kind: RankKind::Rank,
        order_type: OrderType::final_segments_of(chain),
        provenance: "rank≅final-segments(Γ)",
    })
}

/// The principal rank: `Γ` reversed.
pub fn principal_rank_of(chain: &ChainDescriptor) -> Result<RankDescriptor> {
    Ok(RankDescriptor {
        kind: RankKind::PrincipalRank,
        order_type: OrderType::reverse_of(chain),
        provenance: "principal-rank≅reverse(Γ)",
    })
}

fn canonical_quotient(shift: &ChainShift) -> Result<ChainDescriptor> {
    shift
        .canonical_quotient()
        .ok_or_else(|| Error::NoCanonicalQuotient(format!("{} under {}", shift.chain(), shift.map())))
}

/// The σ-rank: final segments of the quotient `Γ/∼`.
pub fn sigma_rank_of(shift: &ChainShift) -> Result<RankDescriptor> {
    Ok(RankDescriptor {
        kind: RankKind::SigmaRank,
        order_type: OrderType::final_segments_of(&canonical_quotient(shift)?),
        provenance: "sigma-rank≅final-segments(Γ/∼)",
    })
}

/// The principal σ-rank: the quotient `Γ/∼` reversed.
pub fn principal_sigma_rank_of(shift: &ChainShift) -> Result<RankDescriptor> {
    Ok(RankDescriptor {
        kind: RankKind::PrincipalSigmaRank,
        order_type: OrderType::reverse_of(&canonical_quotient(shift)?),
        provenance: "principal-sigma-rank≅reverse(Γ/∼)",
    })
}

/// The σ-compatible principal rings, anti-isomorphic to the fixed points of
/// `σ_Γ`. Finite fixed-point sets are self-dual, so only their size is
/// reported.
pub fn sigma_principal_intersection(shift: &ChainShift) -> Result<RankDescriptor> {
    let order_type = match shift.fixed_points() {
        FixedPoints::Everything => OrderType::reverse_of(shift.chain()),
        FixedPoints::Points(ps) if ps.is_empty() => OrderType::Empty,
        FixedPoints::Points(ps) => OrderType::Finite(ps.len()),
    };
    Ok(RankDescriptor {
        kind: RankKind::SigmaPrincipalIntersection,
        order_type,
        provenance: "sigma-principal∩principal≅reverse(fixed-points(σ_Γ))",
    })
}

/// The equivalence on positive infinite elements whose classes make up the
/// initial segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// Multiplicative equivalence: `a ∼ b` iff each is below a power of the
    /// other.
    Mult,
    /// Equivalence under a field automorphism with proven square growth.
    Sigma(AutomorphismTower),
}

impl Relation {
    pub fn equivalent(&self, a: &HahnSeries, b: &HahnSeries, cap: u32) -> Result<EquivalenceVerdict> {
        match self {
            Relation::Mult => mult_equivalent(a, b, cap),
            Relation::Sigma(tower) => sigma_equivalent(tower, a, b, cap),
        }
    }

    fn decide(&self, a: &HahnSeries, b: &HahnSeries, cap: u32) -> Result<bool> {
        self.equivalent(a, b, cap)?.is_equivalent().ok_or_else(|| Error::UndecidedEquivalence {
            a: a.to_string(),
            b: b.to_string(),
            cap,
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Mult => write!(f, "mult"),
            Relation::Sigma(_) => write!(f, "sigma"),
        }
    }
}

/// An initial segment of the classes of positive infinite elements, given by
/// increasing, pairwise inequivalent representatives.
///
/// With `has_last`, the segment is every class at or below the class of the
/// last representative. Without it, the last representative is an exclusive
/// bound: the segment is every class strictly below its class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialSegment {
    pub representatives: Vec<HahnSeries>,
    pub has_last: bool,
}

/// The convex ring `-(∪I) ∪ R_v ∪ (∪I)` of an initial segment `I`.
#[derive(Clone, Debug)]
pub struct SegmentRing {
    relation: Relation,
    bound: HahnSeries,
    has_last: bool,
    valuation: ConvexValuation,
    cap: u32,
}

impl SegmentRing {
    /// Membership, decided directly from the segment: `|a|` lies in the
    /// natural ring, below the bound, or (with a last class) in its class.
    pub fn contains(&self, a: &HahnSeries) -> Result<bool> {
        if in_natural_ring(a)? {
            return Ok(true);
        }
        let x = a.abs();
        match x.compare(&self.bound)? {
            Ordering::Greater if !self.has_last => Ok(false),
            Ordering::Less if self.has_last => Ok(true),
            _ => {
                let same = self.relation.decide(&x, &self.bound, self.cap)?;
                Ok(if self.has_last { same } else { x.compare(&self.bound)? == Ordering::Less && !same })
            }
        }
    }

    /// The last class's representative, which generates the ring as a
    /// (σ-)principal ring when the segment has a last element.
    pub fn generator(&self) -> Option<&HahnSeries> {
        self.has_last.then_some(&self.bound)
    }

    /// The coarsening of the natural valuation with this ring.
    pub fn valuation(&self) -> &ConvexValuation {
        &self.valuation
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }
}

/// Builds the convex ring of an initial segment of classes.
///
/// Representatives must be positive infinite, strictly increasing and
/// pairwise inequivalent; the sigma relation additionally needs proven
/// square growth.
pub fn ring_from_initial_segment(
    chain: &Arc<ChainDescriptor>,
    relation: Relation,
    segment: &InitialSegment,
    cap: u32,
) -> Result<SegmentRing> {
    let reps = &segment.representatives;
    let Some(last) = reps.last() else {
        return Err(Error::InconsistentSegment("no classes: the natural ring itself".into()));
    };
    if let Relation::Sigma(tower) = &relation {
        let growth = tower.square_growth()?;
        if !growth.is_proven() {
            return Err(Error::HypothesisNotProven(format!("square growth is {growth}")));
        }
    }
    for r in reps {
        if r.chain() != chain {
            return Err(Error::DomainMismatch(format!("representative {r} is over {}", r.chain())));
        }
        if !r.in_p_k() {
            return Err(Error::InconsistentSegment(format!("{r} is not positive infinite")));
        }
    }
    for pair in reps.windows(2) {
        if pair[0].compare(&pair[1])? != Ordering::Less {
            return Err(Error::InconsistentSegment(format!("{} is not below {}", pair[0], pair[1])));
        }
        if relation.decide(&pair[0], &pair[1], cap)? {
            return Err(Error::InconsistentSegment(format!("{} and {} are equivalent", pair[0], pair[1])));
        }
    }
    let gamma = last.valuation()?.value()?;
    let cut = match &relation {
        Relation::Mult if segment.has_last => FinalSegmentCut::AtOrAbove(gamma),
        Relation::Mult => FinalSegmentCut::StrictlyAbove(gamma),
        Relation::Sigma(tower) => FinalSegmentCut::classes_from(tower.sigma_chain().clone(), gamma, !segment.has_last),
    };
    Ok(SegmentRing {
        valuation: ConvexValuation::new(chain, cut),
        relation,
        bound: last.clone(),
        has_last: segment.has_last,
        cap,
    })
}
