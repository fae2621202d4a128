use std::cmp::Ordering;
use std::fmt;

use super::descriptor::{ChainDescriptor, ChainValue};
use super::shift::ChainShift;
use super::DEFAULT_CAP;
use crate::{Error, Result};

/// A non-empty final segment of a chain, represented by its cut.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FinalSegmentCut {
    /// `{γ′ ≥ γ}`; principal, with minimum `γ`.
    AtOrAbove(ChainValue),
    /// `{γ′ > γ}`.
    StrictlyAbove(ChainValue),
    All,
    /// The union of all classes of `shift` at or above (`strict = false`) or
    /// strictly above (`strict = true`) the class of `rep`. These are the
    /// shift-invariant final segments.
    ClassesFrom {
        shift: Box<ChainShift>,
        rep: ChainValue,
        strict: bool,
    },
}

impl fmt::Display for FinalSegmentCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinalSegmentCut::AtOrAbove(g) => write!(f, "at-or-above({g})"),
            FinalSegmentCut::StrictlyAbove(g) => write!(f, "above({g})"),
            FinalSegmentCut::All => write!(f, "all"),
            FinalSegmentCut::ClassesFrom { rep, strict: false, .. } => write!(f, "classes-from([{rep}])"),
            FinalSegmentCut::ClassesFrom { rep, strict: true, .. } => write!(f, "classes-above([{rep}])"),
        }
    }
}

impl FinalSegmentCut {
    pub fn classes_from(shift: ChainShift, rep: ChainValue, strict: bool) -> Self {
        FinalSegmentCut::ClassesFrom {
            shift: Box::new(shift),
            rep,
            strict,
        }
    }

    /// Membership of `gamma`, an element of `chain`.
    pub fn contains(&self, chain: &ChainDescriptor, gamma: &ChainValue) -> Result<bool> {
        chain.check(gamma)?;
        Ok(match self {
            FinalSegmentCut::AtOrAbove(m) => chain.compare(gamma, m)? != Ordering::Less,
            FinalSegmentCut::StrictlyAbove(m) => chain.compare(gamma, m)? == Ordering::Greater,
            FinalSegmentCut::All => true,
            FinalSegmentCut::ClassesFrom { shift, rep, strict } => {
                if shift.chain() != chain {
                    return Err(Error::DomainMismatch(format!(
                        "segment over {} used on {chain}",
                        shift.chain()
                    )));
                }
                let ord = shift.compare_classes(gamma, rep, DEFAULT_CAP)?;
                if *strict {
                    ord == Ordering::Greater
                } else {
                    ord != Ordering::Less
                }
            }
        })
    }

    /// The minimum, for principal segments given by their minimum.
    pub fn minimum(&self) -> Option<&ChainValue> {
        match self {
            FinalSegmentCut::AtOrAbove(g) => Some(g),
            _ => None,
        }
    }

    /// Set inclusion `self ⊆ other`, decided by enumeration on a finite chain.
    pub fn is_subset_of(&self, other: &FinalSegmentCut, chain: &ChainDescriptor) -> Result<bool> {
        let elems = chain
            .elements()
            .ok_or_else(|| Error::NotFinite(chain.to_string()))?;
        for g in &elems {
            if self.contains(chain, g)? && !other.contains(chain, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// All non-empty final segments of a finite chain, increasing by inclusion.
/// On a finite chain each one is principal.
pub fn enumerate_final_segments(chain: &ChainDescriptor) -> Result<Vec<FinalSegmentCut>> {
    match chain {
        ChainDescriptor::Finite(_) | ChainDescriptor::Singleton => {
            let mut elems = chain.elements().expect("finite");
            elems.reverse();
            Ok(elems.into_iter().map(FinalSegmentCut::AtOrAbove).collect())
        }
        _ => Err(Error::NotFinite(chain.to_string())),
    }
}

/// The principal final segment `{γ′ ≥ γ}`.
pub fn principal_segment_of(gamma: &ChainValue) -> FinalSegmentCut {
    FinalSegmentCut::AtOrAbove(gamma.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ShiftMap;
    use crate::rational::int;

    #[test]
    fn finite_enumeration() {
        let c = ChainDescriptor::Finite(3);
        let segs = enumerate_final_segments(&c).unwrap();
        assert_eq!(
            segs,
            vec![
                FinalSegmentCut::AtOrAbove(ChainValue::FiniteAt(2)),
                FinalSegmentCut::AtOrAbove(ChainValue::FiniteAt(1)),
                FinalSegmentCut::AtOrAbove(ChainValue::FiniteAt(0)),
            ]
        );
        assert_eq!(enumerate_final_segments(&ChainDescriptor::Finite(1)).unwrap().len(), 1);
        assert!(matches!(
            enumerate_final_segments(&ChainDescriptor::Rationals),
            Err(Error::NotFinite(_))
        ));
    }

    #[test]
    fn enumeration_matches_brute_force_count() {
        // every upward-closed non-empty subset of an n-chain, found by
        // checking all 2^n subsets
        for n in 1..=8usize {
            let upward_closed = (1u32..(1 << n))
                .filter(|mask| (0..n).all(|i| mask & (1 << i) == 0 || (i..n).all(|j| mask & (1 << j) != 0)))
                .count();
            let c = ChainDescriptor::Finite(n);
            let segs = enumerate_final_segments(&c).unwrap();
            assert_eq!(segs.len(), upward_closed);
            for w in segs.windows(2) {
                assert!(w[0].is_subset_of(&w[1], &c).unwrap());
                assert!(!w[1].is_subset_of(&w[0], &c).unwrap());
            }
        }
    }

    #[test]
    fn principal_membership() {
        let seg = principal_segment_of(&ChainValue::q(0, 1));
        let q = ChainDescriptor::Rationals;
        assert!(!seg.contains(&q, &ChainValue::q(-1, 1)).unwrap());
        assert!(seg.contains(&q, &ChainValue::q(0, 1)).unwrap());
        assert!(seg.contains(&q, &ChainValue::q(7, 1)).unwrap());
        let above = FinalSegmentCut::StrictlyAbove(ChainValue::q(0, 1));
        assert!(!above.contains(&q, &ChainValue::q(0, 1)).unwrap());
    }

    #[test]
    fn principal_segments_reverse_order() {
        let c = ChainDescriptor::Finite(4);
        let s1 = principal_segment_of(&ChainValue::FiniteAt(1));
        let s3 = principal_segment_of(&ChainValue::FiniteAt(3));
        assert!(s3.is_subset_of(&s1, &c).unwrap());
        assert!(!s1.is_subset_of(&s3, &c).unwrap());
        assert_eq!(principal_segment_of(&ChainValue::FiniteAt(2)).minimum(), Some(&ChainValue::FiniteAt(2)));
    }

    #[test]
    fn class_segments() {
        let shift = ChainShift::new(
            ChainDescriptor::concat(2, ChainDescriptor::Rationals),
            ShiftMap::per_copy(ShiftMap::Translate(int(-1))),
        )
        .unwrap();
        let chain = shift.chain().clone();
        let seg = FinalSegmentCut::classes_from(shift.clone(), ChainValue::at(1, ChainValue::q(0, 1)), false);
        assert!(seg.contains(&chain, &ChainValue::at(1, ChainValue::q(-50, 1))).unwrap());
        assert!(!seg.contains(&chain, &ChainValue::at(0, ChainValue::q(50, 1))).unwrap());
        let strict = FinalSegmentCut::classes_from(shift, ChainValue::at(0, ChainValue::q(0, 1)), true);
        assert!(strict.contains(&chain, &ChainValue::at(1, ChainValue::q(-50, 1))).unwrap());
        assert!(!strict.contains(&chain, &ChainValue::at(0, ChainValue::q(50, 1))).unwrap());
    }
}
