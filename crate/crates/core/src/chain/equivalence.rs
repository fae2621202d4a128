use std::cmp::Ordering;

use num_traits::Zero;
use serde::Serialize;

use super::descriptor::{ChainDescriptor, ChainValue};
use super::shift::{ChainShift, Orientation, ShiftMap};
use crate::{Error, Result};

/// Iteration cap used when none is given.
pub const DEFAULT_CAP: u32 = 64;

/// Outcome of an equivalence query under a shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EquivalenceVerdict {
    /// The minimal number of iterations after which each point has passed
    /// the other.
    Equivalent(u32),
    /// An exact reason why no number of iterations suffices.
    NotEquivalent(String),
    /// No witness up to the cap and no certificate applies.
    Undecided(u32),
}

impl EquivalenceVerdict {
    pub fn is_equivalent(&self) -> Option<bool> {
        match self {
            EquivalenceVerdict::Equivalent(_) => Some(true),
            EquivalenceVerdict::NotEquivalent(_) => Some(false),
            EquivalenceVerdict::Undecided(_) => None,
        }
    }
}

/// Searches for the least `n ≤ cap` with `φⁿ(a) ≥ b` and `φⁿ(b) ≥ a` (right
/// shift) or `φⁿ(a) ≤ b` and `φⁿ(b) ≤ a` (left shift).
///
/// This is the raw iteration shared by every level: chains, the doubling map
/// on a group's negative cone, and squaring or an automorphism on the
/// positive infinite field elements. A neutral orientation never yields a
/// witness.
pub fn find_witness<T: Clone, E>(
    a: &T,
    b: &T,
    orientation: Orientation,
    cap: u32,
    mut step: impl FnMut(&T) -> std::result::Result<T, E>,
    mut cmp: impl FnMut(&T, &T) -> std::result::Result<Ordering, E>,
) -> std::result::Result<Option<u32>, E> {
    let blocked = match orientation {
        Orientation::RightShift => Ordering::Less,
        Orientation::LeftShift => Ordering::Greater,
        Orientation::Neutral => return Ok(None),
    };
    let (mut x, mut y) = (a.clone(), b.clone());
    for n in 0..=cap {
        if cmp(&x, b)? != blocked && cmp(&y, a)? != blocked {
            return Ok(Some(n));
        }
        if n < cap {
            x = step(&x)?;
            y = step(&y)?;
        }
    }
    Ok(None)
}

impl ChainShift {
    fn domain_check(&self, a: &ChainValue) -> Result<()> {
        if self.chain().contains(a) {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "{a} is not in the domain {} of {}",
                self.chain(),
                self.map()
            )))
        }
    }

    /// The bare iteration, without certificates: the least `n ≤ cap`
    /// witnessing equivalence, if any.
    pub fn witness_within(&self, a: &ChainValue, b: &ChainValue, cap: u32) -> Result<Option<u32>> {
        self.domain_check(a)?;
        self.domain_check(b)?;
        find_witness(
            a,
            b,
            self.orientation(),
            cap,
            |x| Ok(super::shift::apply_map(self.chain(), self.map(), x)),
            |x, y| self.chain().compare_members(x, y),
        )
    }

    /// Decides `a ∼ b` for this shift.
    ///
    /// Iterates up to `cap` first; when no witness appears, the built-in
    /// shapes supply exact certificates (distinct copies, a separating fixed
    /// point, identity). Finite tables are decided exhaustively regardless
    /// of the cap.
    pub fn equivalent(&self, a: &ChainValue, b: &ChainValue, cap: u32) -> Result<EquivalenceVerdict> {
        self.domain_check(a)?;
        self.domain_check(b)?;
        if self.chain().compare_members(a, b)? == Ordering::Equal {
            return Ok(EquivalenceVerdict::Equivalent(0));
        }
        if self.orientation() == Orientation::Neutral {
            return Err(Error::UnknownOrientation(self.map().to_string()));
        }
        if let ShiftMap::Table(t) = self.map() {
            // iterates of a monotone oriented map on an n-chain settle
            // within n steps
            let limit = u32::try_from(t.len()).unwrap_or(u32::MAX);
            return Ok(match self.witness_within(a, b, limit)? {
                Some(n) => EquivalenceVerdict::Equivalent(n),
                None => EquivalenceVerdict::NotEquivalent("finite orbit exhausted".into()),
            });
        }
        if let Some(n) = self.witness_within(a, b, cap)? {
            return Ok(EquivalenceVerdict::Equivalent(n));
        }
        Ok(match self.certificate(a, b) {
            Some(reason) => EquivalenceVerdict::NotEquivalent(reason),
            None => EquivalenceVerdict::Undecided(cap),
        })
    }

    /// Exact reason why distinct `a`, `b` can never be equivalent.
    fn certificate(&self, a: &ChainValue, b: &ChainValue) -> Option<String> {
        if self.is_identity() {
            return Some("identity separates distinct points".into());
        }
        let is_zero = |v: &ChainValue| matches!(v, ChainValue::Rational(q) if q.is_zero());
        match (self.map(), a, b) {
            (ShiftMap::Scale(_), _, _) if is_zero(a) != is_zero(b) => Some("fixed point 0 separates".into()),
            (ShiftMap::PerCopy(_) | ShiftMap::FixZeroPerCopy(_), ChainValue::ConcatAt(i, u), ChainValue::ConcatAt(j, v)) => {
                if i != j {
                    return Some("copy index invariant".into());
                }
                if matches!(self.map(), ShiftMap::FixZeroPerCopy(_)) && is_zero(u) != is_zero(v) {
                    return Some(format!("fixed point ({i},0/1) separates"));
                }
                self.component_shift()?.certificate(u, v)
            }
            _ => None,
        }
    }

    /// Compares the classes of `a` and `b`: `Equal` iff equivalent,
    /// otherwise the order of the representatives.
    pub fn compare_classes(&self, a: &ChainValue, b: &ChainValue, cap: u32) -> Result<Ordering> {
        match self.equivalent(a, b, cap)? {
            EquivalenceVerdict::Equivalent(_) => Ok(Ordering::Equal),
            EquivalenceVerdict::NotEquivalent(_) => self.chain().compare_members(a, b),
            EquivalenceVerdict::Undecided(cap) => Err(Error::UndecidedEquivalence {
                a: a.to_string(),
                b: b.to_string(),
                cap,
            }),
        }
    }

    /// The quotient chain, whose elements are `ClassOf(representative)`.
    pub fn quotient(&self) -> ChainDescriptor {
        ChainDescriptor::Quotient(Box::new(self.clone()))
    }

    /// One representative per class in increasing order, when the quotient
    /// is finite and the built-in shape allows enumerating it.
    pub fn class_representatives(&self) -> Option<Vec<ChainValue>> {
        if self.orientation() == Orientation::Neutral {
            return None;
        }
        if self.is_identity() {
            return self.chain().elements();
        }
        match (self.chain(), self.map()) {
            (_, ShiftMap::Translate(_)) => Some(vec![ChainValue::q(0, 1)]),
            (ChainDescriptor::NonNegRationals, ShiftMap::Scale(_)) => {
                Some(vec![ChainValue::q(0, 1), ChainValue::q(1, 1)])
            }
            (ChainDescriptor::Concat { copies, .. }, ShiftMap::PerCopy(_)) => {
                let inner = self.component_shift()?.class_representatives()?;
                Some(
                    (0..*copies)
                        .flat_map(|i| inner.iter().map(move |v| ChainValue::at(i, v.clone())))
                        .collect(),
                )
            }
            (ChainDescriptor::Concat { copies, .. }, ShiftMap::FixZeroPerCopy(_)) => Some(
                (0..*copies)
                    .flat_map(|i| {
                        [ChainValue::q(0, 1), ChainValue::q(1, 1)]
                            .into_iter()
                            .map(move |v| ChainValue::at(i, v))
                    })
                    .collect(),
            ),
            (_, ShiftMap::Table(_)) => {
                let mut reps: Vec<ChainValue> = Vec::new();
                for v in self.chain().elements()? {
                    let fresh = match reps.last() {
                        None => true,
                        Some(prev) => self.equivalent(prev, &v, DEFAULT_CAP).ok()?.is_equivalent()? == false,
                    };
                    if fresh {
                        reps.push(v);
                    }
                }
                Some(reps)
            }
            _ => None,
        }
    }

    /// Position of `a`'s class among [`class_representatives`](Self::class_representatives).
    pub fn class_index(&self, a: &ChainValue, cap: u32) -> Result<Option<usize>> {
        let Some(reps) = self.class_representatives() else {
            return Ok(None);
        };
        for (i, r) in reps.iter().enumerate() {
            if self.compare_classes(a, r, cap)? == Ordering::Equal {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// A plain descriptor isomorphic to the quotient, for built-in shapes.
    pub fn canonical_quotient(&self) -> Option<ChainDescriptor> {
        if let Some(reps) = self.class_representatives() {
            return Some(ChainDescriptor::Finite(reps.len()));
        }
        if self.orientation() == Orientation::Neutral {
            return None;
        }
        if self.is_identity() {
            return Some(self.chain().normalized());
        }
        match (self.chain(), self.map()) {
            (ChainDescriptor::Concat { copies, .. }, ShiftMap::PerCopy(_)) => {
                let inner = self.component_shift()?.canonical_quotient()?;
                Some(ChainDescriptor::concat(*copies, inner).normalized())
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn translate_q() -> ChainShift {
        ChainShift::new(ChainDescriptor::Rationals, ShiftMap::Translate(int(-1))).unwrap()
    }

    fn omega(m: usize) -> ChainShift {
        ChainShift::new(
            ChainDescriptor::concat(m, ChainDescriptor::Rationals),
            ShiftMap::per_copy(ShiftMap::Translate(int(-1))),
        )
        .unwrap()
    }

    fn clamp5() -> ChainShift {
        ChainShift::new(ChainDescriptor::Finite(5), ShiftMap::Table(vec![0, 0, 1, 2, 3])).unwrap()
    }

    #[test]
    fn translation_witness() {
        let s = translate_q();
        let v = s.equivalent(&ChainValue::q(0, 1), &ChainValue::q(-5, 1), 64).unwrap();
        assert_eq!(v, EquivalenceVerdict::Equivalent(5));
        // independent re-check of both left-shift inequalities at the witness
        let q = s.chain();
        let a5 = s.apply_n(&ChainValue::q(0, 1), 5).unwrap();
        let b5 = s.apply_n(&ChainValue::q(-5, 1), 5).unwrap();
        assert_ne!(q.compare(&a5, &ChainValue::q(-5, 1)).unwrap(), Ordering::Greater);
        assert_ne!(q.compare(&b5, &ChainValue::q(0, 1)).unwrap(), Ordering::Greater);
        let a4 = s.apply_n(&ChainValue::q(0, 1), 4).unwrap();
        assert_eq!(q.compare(&a4, &ChainValue::q(-5, 1)).unwrap(), Ordering::Greater);
        assert_eq!(s.equivalent(&ChainValue::q(0, 1), &ChainValue::q(-5, 1), 4).unwrap(), EquivalenceVerdict::Undecided(4));
    }

    #[test]
    fn copy_index_certificate() {
        let s = omega(2);
        let v = s
            .equivalent(&ChainValue::at(0, ChainValue::q(0, 1)), &ChainValue::at(1, ChainValue::q(0, 1)), 64)
            .unwrap();
        assert_eq!(v, EquivalenceVerdict::NotEquivalent("copy index invariant".into()));
    }

    #[test]
    fn reflexive_at_zero() {
        let s = omega(2);
        let a = ChainValue::at(1, ChainValue::q(3, 2));
        assert_eq!(s.equivalent(&a, &a, 1).unwrap(), EquivalenceVerdict::Equivalent(0));
    }

    #[test]
    fn neutral_orientation_is_refused() {
        let s = ChainShift::new(ChainDescriptor::Rationals, ShiftMap::Scale(int(2))).unwrap();
        assert!(matches!(
            s.equivalent(&ChainValue::q(1, 1), &ChainValue::q(2, 1), 64),
            Err(Error::UnknownOrientation(_))
        ));
        assert_eq!(s.equivalent(&ChainValue::q(1, 1), &ChainValue::q(1, 1), 64).unwrap(), EquivalenceVerdict::Equivalent(0));
    }

    #[test]
    fn class_comparisons() {
        let s = omega(3);
        let a = ChainValue::at(0, ChainValue::q(7, 1));
        let b = ChainValue::at(2, ChainValue::q(-9, 1));
        assert_eq!(s.compare_classes(&a, &b, 64).unwrap(), Ordering::Less);
        let id = ChainShift::identity(ChainDescriptor::Finite(4));
        assert_eq!(
            id.compare_classes(&ChainValue::FiniteAt(1), &ChainValue::FiniteAt(1), 64).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            clamp5().compare_classes(&ChainValue::FiniteAt(0), &ChainValue::FiniteAt(4), 64).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn canonical_quotients() {
        assert_eq!(omega(3).canonical_quotient(), Some(ChainDescriptor::Finite(3)));
        assert_eq!(
            ChainShift::identity(ChainDescriptor::Rationals).canonical_quotient(),
            Some(ChainDescriptor::Rationals)
        );
        assert_eq!(
            ChainShift::identity(ChainDescriptor::Finite(4)).canonical_quotient(),
            Some(ChainDescriptor::Finite(4))
        );
        assert_eq!(clamp5().canonical_quotient(), Some(ChainDescriptor::Finite(1)));
        let per_copy_identity = ChainShift::new(
            ChainDescriptor::concat(2, ChainDescriptor::Rationals),
            ShiftMap::per_copy(ShiftMap::Translate(int(0))),
        )
        .unwrap();
        assert_eq!(
            per_copy_identity.canonical_quotient(),
            Some(ChainDescriptor::concat(2, ChainDescriptor::Rationals))
        );
        let neutral = ChainShift::new(ChainDescriptor::Rationals, ShiftMap::Scale(int(2))).unwrap();
        assert_eq!(neutral.canonical_quotient(), None);
    }

    #[test]
    fn quotient_chain_compares_classes() {
        let q = omega(3).quotient();
        let a = ChainValue::class_of(ChainValue::at(1, ChainValue::q(10, 1)));
        let b = ChainValue::class_of(ChainValue::at(1, ChainValue::q(-3, 1)));
        let c = ChainValue::class_of(ChainValue::at(2, ChainValue::q(-300, 1)));
        assert_eq!(q.compare(&a, &b).unwrap(), Ordering::Equal);
        assert_eq!(q.compare(&b, &c).unwrap(), Ordering::Less);
        assert_eq!(q.cardinality(), Some(3));
    }

    fn laws_on(s: &ChainShift, pool: &[ChainValue]) {
        let c = s.chain();
        let eq = |a: &ChainValue, b: &ChainValue| s.equivalent(a, b, DEFAULT_CAP).unwrap().is_equivalent();
        for a in pool {
            assert_eq!(eq(a, a), Some(true));
            assert_eq!(eq(a, &s.apply(a).unwrap()), Some(true), "closure under the shift at {a}");
            for b in pool {
                let ab = eq(a, b);
                assert_eq!(ab, eq(b, a));
                if ab != Some(true) {
                    continue;
                }
                for x in pool {
                    let between = c.compare(a, x).unwrap() != Ordering::Greater
                        && c.compare(x, b).unwrap() != Ordering::Greater;
                    if between {
                        assert_eq!(eq(a, x), Some(true), "convexity {a} {x} {b}");
                    }
                    if eq(b, x) == Some(true) {
                        assert_eq!(eq(a, x), Some(true), "transitivity {a} {b} {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn remark_laws_exhaustive_on_tables() {
        for t in [vec![0, 0, 1, 2, 3], vec![1, 2, 2, 4, 4, 5], vec![0, 1, 2, 3], vec![0, 0, 0, 3, 3, 4, 6]] {
            let s = ChainShift::new(ChainDescriptor::Finite(t.len()), ShiftMap::Table(t)).unwrap();
            laws_on(&s, &s.chain().elements().unwrap());
        }
    }

    #[test]
    fn remark_laws_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let shifts = [
            omega(3),
            ChainShift::new(
                ChainDescriptor::concat(2, ChainDescriptor::NonNegRationals),
                ShiftMap::fix_zero_per_copy(ShiftMap::Scale(int(2))),
            )
            .unwrap(),
        ];
        for s in &shifts {
            let pool: Vec<_> = (0..25).map(|_| s.chain().sample(&mut rng)).collect();
            laws_on(s, &pool);
        }
    }
}
