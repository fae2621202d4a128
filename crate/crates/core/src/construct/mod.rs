//! The two construction recipes and the brute-force oracle suites.
//!
//! [`build_omega_increasing_example`] translates every copy of `ℚ` in an
//! `m`-fold concatenation one step down, giving an ω-increasing automorphism
//! whose principal σ-rank is `m`. [`build_fixed_point_example`] scales every
//! copy of `ℚ≥0` while fixing its zero, so that each copy contributes one
//! σ-compatible principal ring.

mod oracle;
pub mod pools;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::chain::{ChainDescriptor, ChainShift, ShiftMap};
use crate::field::{AutomorphismTower, Classification};
use crate::rank::{
    principal_rank_of, principal_sigma_rank_of, rank_of, sigma_principal_intersection, sigma_rank_of, RankDescriptor,
};
use crate::{Error, Result};

pub use oracle::{
    oracle_verify_rank_correspondences, oracle_verify_theorem3, OracleLine, OracleReport, RelationKind, Status,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recipe {
    FixedPoint,
    Omega,
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::FixedPoint => write!(f, "fixedpoint"),
            Recipe::Omega => write!(f, "omega"),
        }
    }
}

/// All five rank descriptors of one automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: RankDescriptor,
    pub principal_rank: RankDescriptor,
    pub sigma_rank: RankDescriptor,
    pub principal_sigma_rank: RankDescriptor,
    pub sigma_principal_intersection: RankDescriptor,
}

impl RankReport {
    pub fn of(shift: &ChainShift) -> Result<Self> {
        Ok(RankReport {
            rank: rank_of(shift.chain())?,
            principal_rank: principal_rank_of(shift.chain())?,
            sigma_rank: sigma_rank_of(shift)?,
            principal_sigma_rank: principal_sigma_rank_of(shift)?,
            sigma_principal_intersection: sigma_principal_intersection(shift)?,
        })
    }

    pub fn all(&self) -> [&RankDescriptor; 5] {
        [
            &self.rank,
            &self.principal_rank,
            &self.sigma_rank,
            &self.principal_sigma_rank,
            &self.sigma_principal_intersection,
        ]
    }
}

/// A constructed ordered difference field with its classification and
/// ranks.
#[derive(Clone, Debug)]
pub struct ConstructionResult {
    recipe: Recipe,
    m: usize,
    tower: AutomorphismTower,
    classification: Classification,
    ranks: RankReport,
}

impl ConstructionResult {
    fn from_shift(recipe: Recipe, m: usize, shift: ChainShift) -> Result<Self> {
        let tower = AutomorphismTower::from_chain_shift(&shift)?;
        Ok(ConstructionResult {
            recipe,
            m,
            classification: tower.classify()?,
            ranks: RankReport::of(&shift)?,
            tower,
        })
    }

    pub fn recipe(&self) -> Recipe {
        self.recipe
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn chain(&self) -> &Arc<ChainDescriptor> {
        self.tower.chain()
    }

    pub fn shift(&self) -> &ChainShift {
        self.tower.sigma_chain()
    }

    pub fn tower(&self) -> &AutomorphismTower {
        &self.tower
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    pub fn ranks(&self) -> &RankReport {
        &self.ranks
    }

    pub fn principal_sigma_rank(&self) -> &RankDescriptor {
        &self.ranks.principal_sigma_rank
    }

    pub fn intersection(&self) -> &RankDescriptor {
        &self.ranks.sigma_principal_intersection
    }
}

impl Serialize for ConstructionResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            recipe: Recipe,
            m: usize,
            chain: String,
            shift: String,
            classification: &'a Classification,
            ranks: &'a RankReport,
        }
        Wire {
            recipe: self.recipe,
            m: self.m,
            chain: self.chain().to_string(),
            shift: self.shift().map().to_string(),
            classification: &self.classification,
            ranks: &self.ranks,
        }
        .serialize(s)
    }
}

fn require_copies(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::DomainMismatch("the number of copies must be positive".into()));
    }
    Ok(())
}

/// `Γ = m` copies of `ℚ≥0`, with `σ_Γ` fixing each copy's zero and applying
/// `eta` to its positive part.
///
/// ```
/// use ordrank::chain::ShiftMap;
/// use ordrank::construct::build_fixed_point_example;
/// use ordrank::rank::OrderType;
/// use ordrank::rational::int;
///
/// let example = build_fixed_point_example(3, ShiftMap::Scale(int(2))).unwrap();
/// assert_eq!(example.intersection().order_type, OrderType::Finite(3));
/// ```
pub fn build_fixed_point_example(m: usize, eta: ShiftMap) -> Result<ConstructionResult> {
    require_copies(m)?;
    let eta_shift = ChainShift::new(ChainDescriptor::NonNegRationals, eta.clone())?;
    if eta_shift.is_identity() {
        return Err(Error::TrivialEta);
    }
    let chain = ChainDescriptor::concat(m, ChainDescriptor::NonNegRationals);
    let shift = ChainShift::new(chain, ShiftMap::fix_zero_per_copy(eta))?;
    ConstructionResult::from_shift(Recipe::FixedPoint, m, shift)
}

/// `Γ = m` copies of `ℚ`, with `σ_Γ` translating each copy by `-1`.
pub fn build_omega_increasing_example(m: usize) -> Result<ConstructionResult> {
    require_copies(m)?;
    let chain = ChainDescriptor::concat(m, ChainDescriptor::Rationals);
    let shift = ChainShift::new(chain, ShiftMap::per_copy(ShiftMap::Translate(crate::rational::int(-1))))?;
    ConstructionResult::from_shift(Recipe::Omega, m, shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::OrderType;
    use crate::rational::int;

    #[test]
    fn omega_examples() {
        for m in [1, 2, 3, 5] {
            let ex = build_omega_increasing_example(m).unwrap();
            assert_eq!(ex.principal_sigma_rank().order_type, OrderType::Finite(m));
            assert_eq!(ex.intersection().order_type, OrderType::Empty);
            assert!(ex.classification().omega_increasing.is_proven());
            assert!(ex.classification().square_growth.is_proven());
        }
        assert!(build_omega_increasing_example(0).is_err());
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(
            build_fixed_point_example(3, ShiftMap::Scale(int(2))).unwrap().intersection().order_type,
            OrderType::Finite(3)
        );
        let one = build_fixed_point_example(1, ShiftMap::Scale(int(2))).unwrap();
        assert_eq!(one.intersection().order_type, OrderType::Finite(1));
        assert_eq!(one.ranks().principal_sigma_rank.order_type, OrderType::Finite(2));
        assert_eq!(build_fixed_point_example(2, ShiftMap::Identity).unwrap_err(), Error::TrivialEta);
        assert_eq!(build_fixed_point_example(2, ShiftMap::Scale(int(1))).unwrap_err(), Error::TrivialEta);
    }

    #[test]
    fn construction_serializes() {
        let ex = build_omega_increasing_example(2).unwrap();
        let json = serde_json::to_value(&ex).unwrap();
        assert_eq!(json["recipe"], "omega");
        assert_eq!(json["ranks"]["principal_sigma_rank"]["order_type"], "finite(2)");
        assert_eq!(json["classification"]["omega_increasing"]["verdict"], "proven");
    }
}
