use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::automorphism::AutomorphismTower;
use super::series::HahnSeries;
use crate::chain::{ChainDescriptor, FinalSegmentCut};
use crate::group::{convex_subgroup_member, same_chain, HahnGroupElement};
use crate::{Error, Result};

/// Membership in the natural valuation ring: `a = 0` or `v(a) ≥ 0`.
pub fn in_natural_ring(a: &HahnSeries) -> Result<bool> {
    if a.is_zero() {
        return Ok(true);
    }
    Ok(a.valuation()?.sign() != Ordering::Less)
}

/// The coarsening `w(a) = v(a) + G_w` of the natural valuation, where `G_w`
/// is the convex subgroup of group elements whose leading support point lies
/// in `segment`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexValuation {
    chain: Arc<ChainDescriptor>,
    segment: FinalSegmentCut,
}

impl ConvexValuation {
    pub fn new(chain: &Arc<ChainDescriptor>, segment: FinalSegmentCut) -> Self {
        ConvexValuation {
            chain: chain.clone(),
            segment,
        }
    }

    pub fn chain(&self) -> &Arc<ChainDescriptor> {
        &self.chain
    }

    pub fn segment(&self) -> &FinalSegmentCut {
        &self.segment
    }

    /// Membership in `G_w`.
    pub fn in_value_subgroup(&self, g: &HahnGroupElement) -> Result<bool> {
        same_chain(&self.chain, g.chain())?;
        convex_subgroup_member(&self.segment, g)
    }

    /// `a ∈ R_w`: `a = 0`, `v(a) ≥ 0`, or `v(a) ∈ G_w`.
    pub fn in_ring(&self, a: &HahnSeries) -> Result<bool> {
        same_chain(&self.chain, a.chain())?;
        if a.is_zero() {
            return Ok(true);
        }
        let v = a.valuation()?;
        Ok(v.sign() != Ordering::Less || self.in_value_subgroup(&v)?)
    }

    /// `a ∈ I_w`: `a = 0`, or `v(a) > 0` with `v(a) ∉ G_w`.
    pub fn in_ideal(&self, a: &HahnSeries) -> Result<bool> {
        same_chain(&self.chain, a.chain())?;
        if a.is_zero() {
            return Ok(true);
        }
        let v = a.valuation()?;
        Ok(v.sign() == Ordering::Greater && !self.in_value_subgroup(&v)?)
    }

    pub fn is_positive_unit(&self, a: &HahnSeries) -> Result<bool> {
        same_chain(&self.chain, a.chain())?;
        Ok(a.is_positive() && self.in_value_subgroup(&a.valuation()?)?)
    }

    /// Compares `w(a)` with `w(b)` as cosets of `G_w`.
    pub fn compare(&self, a: &HahnSeries, b: &HahnSeries) -> Result<Ordering> {
        same_chain(&self.chain, a.chain())?;
        same_chain(&self.chain, b.chain())?;
        let diff = a.valuation()?.sub(&b.valuation()?)?;
        if self.in_value_subgroup(&diff)? {
            Ok(Ordering::Equal)
        } else {
            Ok(diff.sign())
        }
    }

    /// The residue of `a ∈ R_w`, as a series over `G_w`: zero when
    /// `w(a) > 0`, otherwise the terms of `a` with exponent in `G_w`.
    pub fn residue(&self, a: &HahnSeries) -> Result<HahnSeries> {
        if !self.in_ring(a)? {
            return Err(Error::NotInValuationRing(a.to_string()));
        }
        if self.in_ideal(a)? {
            return Ok(HahnSeries::zero(&self.chain));
        }
        a.restrict(|g| self.in_value_subgroup(g))
    }

    /// Whether `σ(R_w) = R_w`, decided on the chain as invariance of the
    /// segment under `σ_Γ`.
    pub fn is_sigma_compatible(&self, tower: &AutomorphismTower) -> Result<bool> {
        same_chain(&self.chain, tower.chain())?;
        let sigma = tower.sigma_chain();
        if sigma.is_identity() {
            return Ok(true);
        }
        match &self.segment {
            FinalSegmentCut::All => Ok(true),
            FinalSegmentCut::AtOrAbove(g) | FinalSegmentCut::StrictlyAbove(g) => {
                Ok(self.chain.compare(&sigma.apply(g)?, g)? == Ordering::Equal)
            }
            FinalSegmentCut::ClassesFrom { shift, .. } if **shift == *sigma => Ok(true),
            other => Err(Error::UnsupportedShape(format!(
                "segment {other} against σ_Γ = {}",
                sigma.map()
            ))),
        }
    }
}

impl fmt::Display for ConvexValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w[{}]", self.segment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainShift, ChainValue, ShiftMap};
    use crate::rational::int;

    fn fin2() -> Arc<ChainDescriptor> {
        Arc::new(ChainDescriptor::Finite(2))
    }

    fn t(chain: &Arc<ChainDescriptor>, i: usize, c: i64) -> HahnSeries {
        HahnSeries::monomial(
            HahnGroupElement::monomial(chain, ChainValue::FiniteAt(i), int(1)).unwrap(),
            int(c),
        )
    }

    fn w_top(chain: &Arc<ChainDescriptor>) -> ConvexValuation {
        ConvexValuation::new(chain, FinalSegmentCut::AtOrAbove(ChainValue::FiniteAt(1)))
    }

    #[test]
    fn coset_comparison() {
        let c = fin2();
        let w = w_top(&c);
        let one = HahnSeries::one(&c);
        assert_eq!(w.compare(&t(&c, 1, 1), &one).unwrap(), Ordering::Equal);
        assert_eq!(w.compare(&t(&c, 0, 1), &one).unwrap(), Ordering::Greater);
        let all = ConvexValuation::new(&c, FinalSegmentCut::All);
        assert_eq!(all.compare(&t(&c, 0, 1), &one).unwrap(), Ordering::Equal);
        assert_eq!(w.compare(&HahnSeries::zero(&c), &one), Err(Error::ZeroSeries));
    }

    #[test]
    fn residues() {
        let c = fin2();
        let w = w_top(&c);
        let two = HahnSeries::constant(&c, int(2));
        assert_eq!(w.residue(&two.add(&t(&c, 0, 1)).unwrap()).unwrap(), two);
        let unit = two.add(&t(&c, 1, 3)).unwrap();
        assert_eq!(w.residue(&unit).unwrap(), unit);
        assert!(w.residue(&t(&c, 0, 1)).unwrap().is_zero());
        let big = t(&c, 0, 1).inverse_truncated(1).unwrap();
        assert!(matches!(w.residue(&big), Err(Error::NotInValuationRing(_))));
    }

    #[test]
    fn ring_and_ideal() {
        let c = fin2();
        let w = w_top(&c);
        let inv_top = t(&c, 1, 1).inverse_truncated(1).unwrap();
        assert!(w.in_ring(&inv_top).unwrap());
        assert!(!w.in_ideal(&inv_top).unwrap());
        assert!(w.is_positive_unit(&inv_top).unwrap());
        assert!(w.in_ideal(&t(&c, 0, 1)).unwrap());
        assert!(!w.in_ideal(&t(&c, 1, 1)).unwrap());
        assert!(in_natural_ring(&t(&c, 1, 1)).unwrap());
        assert!(!in_natural_ring(&inv_top).unwrap());
    }

    #[test]
    fn sigma_compatibility() {
        let chain = ChainDescriptor::concat(2, ChainDescriptor::Rationals);
        let shift = ChainShift::new(chain.clone(), ShiftMap::per_copy(ShiftMap::Translate(int(-1)))).unwrap();
        let tower = AutomorphismTower::from_chain_shift(&shift).unwrap();
        let c = tower.chain().clone();
        let cut = FinalSegmentCut::AtOrAbove(ChainValue::at(1, ChainValue::q(0, 1)));
        assert!(!ConvexValuation::new(&c, cut.clone()).is_sigma_compatible(&tower).unwrap());
        assert!(ConvexValuation::new(&c, cut).is_sigma_compatible(&AutomorphismTower::identity(&c)).unwrap());
        let classes = FinalSegmentCut::classes_from(shift.clone(), ChainValue::at(1, ChainValue::q(0, 1)), false);
        assert!(ConvexValuation::new(&c, classes).is_sigma_compatible(&tower).unwrap());

        let fixed_chain = ChainDescriptor::concat(2, ChainDescriptor::NonNegRationals);
        let fz = ChainShift::new(fixed_chain, ShiftMap::fix_zero_per_copy(ShiftMap::Scale(int(2)))).unwrap();
        let tower = AutomorphismTower::from_chain_shift(&fz).unwrap();
        let c = tower.chain().clone();
        let zero1 = FinalSegmentCut::AtOrAbove(ChainValue::at(1, ChainValue::q(0, 1)));
        assert!(ConvexValuation::new(&c, zero1).is_sigma_compatible(&tower).unwrap());
    }
}
