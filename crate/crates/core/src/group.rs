//! The Hahn group over a chain: finite-support formal sums `Σ g_γ 1_γ` with
//! rational components, ordered lexicographically (the sign of a non-zero
//! element is the sign of its coefficient at the least support point).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::chain::{find_witness, ChainDescriptor, ChainShift, ChainValue, EquivalenceVerdict, FinalSegmentCut, Orientation};
use crate::rational::{format_rational, int, Rational};
use crate::{Error, Result};

/// An element of the Hahn group over `chain`.
///
/// Terms are kept sorted strictly increasing by support point with no zero
/// coefficients, so structural equality is group equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HahnGroupElement {
    chain: Arc<ChainDescriptor>,
    terms: Vec<(ChainValue, Rational)>,
}

pub(crate) fn same_chain(a: &Arc<ChainDescriptor>, b: &Arc<ChainDescriptor>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::DomainMismatch(format!("Hahn groups over {a} and {b}")))
    }
}

fn sign_of(c: &Rational) -> Ordering {
    c.cmp(&Rational::zero())
}

impl HahnGroupElement {
    pub fn zero(chain: &Arc<ChainDescriptor>) -> Self {
        HahnGroupElement {
            chain: chain.clone(),
            terms: Vec::new(),
        }
    }

    /// `c·1_γ`.
    pub fn monomial(chain: &Arc<ChainDescriptor>, gamma: ChainValue, c: Rational) -> Result<Self> {
        Self::from_terms(chain, [(gamma, c)])
    }

    /// Builds an element from arbitrary terms, summing repeated support
    /// points and dropping zeros.
    pub fn from_terms(
        chain: &Arc<ChainDescriptor>,
        terms: impl IntoIterator<Item = (ChainValue, Rational)>,
    ) -> Result<Self> {
        let mut terms: Vec<_> = terms.into_iter().collect();
        for (g, _) in &terms {
            if !chain.contains(g) {
                return Err(Error::DomainMismatch(format!("{g} is not in {chain}")));
            }
        }
        let mut failure = None;
        terms.sort_by(|(a, _), (b, _)| {
            chain.compare_members(a, b).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                Ordering::Equal
            })
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let mut merged: Vec<(ChainValue, Rational)> = Vec::with_capacity(terms.len());
        for (g, c) in terms {
            match merged.last_mut() {
                Some((last, acc)) if chain.compare_members(last, &g)? == Ordering::Equal => *acc += c,
                _ => merged.push((g, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Ok(HahnGroupElement {
            chain: chain.clone(),
            terms: merged,
        })
    }

    pub fn chain(&self) -> &Arc<ChainDescriptor> {
        &self.chain
    }

    /// Support points with their coefficients, increasing by support point.
    pub fn terms(&self) -> &[(ChainValue, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Greater` for positive elements, `Less` for negative, `Equal` for 0.
    pub fn sign(&self) -> Ordering {
        self.terms.first().map_or(Ordering::Equal, |(_, c)| sign_of(c))
    }

    /// The natural valuation `v_G`: the least support point. The same for
    /// `g` and `-g`.
    pub fn value(&self) -> Result<ChainValue> {
        self.terms.first().map(|(g, _)| g.clone()).ok_or(Error::ZeroElement)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_chain(&self.chain, &other.chain)?;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, c) = &self.terms[i];
            let (b, d) = &other.terms[j];
            match self.chain.compare_members(a, b)? {
                Ordering::Less => {
                    out.push((a.clone(), c.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b.clone(), d.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = c + d;
                    if !s.is_zero() {
                        out.push((a.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(HahnGroupElement {
            chain: self.chain.clone(),
            terms: out,
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `q·g` for a rational `q`.
    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.chain);
        }
        HahnGroupElement {
            chain: self.chain.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * q)).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Lexicographic comparison: `g > h` iff `g - h` has a positive leading
    /// coefficient. Computed by a merge walk without forming `g - h`.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        same_chain(&self.chain, &other.chain)?;
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.terms.get(i), other.terms.get(j)) {
                (None, None) => return Ok(Ordering::Equal),
                (Some((_, c)), None) => return Ok(sign_of(c)),
                (None, Some((_, d))) => return Ok(sign_of(d).reverse()),
                (Some((a, c)), Some((b, d))) => match self.chain.compare_members(a, b)? {
                    Ordering::Less => return Ok(sign_of(c)),
                    Ordering::Greater => return Ok(sign_of(d).reverse()),
                    Ordering::Equal if c != d => return Ok(c.cmp(d)),
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }

    pub(crate) fn map_support(&self, f: impl Fn(&ChainValue) -> ChainValue) -> Self {
        HahnGroupElement {
            chain: self.chain.clone(),
            terms: self.terms.iter().map(|(g, c)| (f(g), c.clone())).collect(),
        }
    }
}

impl fmt::Display for HahnGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| format!("{}*1_{g}", format_rational(c)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serialized as a list of `[chain value, "p/q"]` pairs sorted by support.
impl Serialize for HahnGroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(g, c)| (g.to_string(), format_rational(c))))
    }
}

/// An order-preserving automorphism of a Hahn group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupAutomorphism {
    Identity,
    /// Re-indexes supports through a chain automorphism:
    /// `Σ g_γ 1_γ ↦ Σ g_γ 1_{σ(γ)}`.
    Lifted(ChainShift),
    /// `g ↦ q·g` with `q > 0`.
    CoefficientScale(Rational),
}

impl fmt::Display for GroupAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAutomorphism::Identity => write!(f, "identity"),
            GroupAutomorphism::Lifted(s) => write!(f, "lift({})", s.map()),
            GroupAutomorphism::CoefficientScale(q) => write!(f, "coefficient-scale({})", format_rational(q)),
        }
    }
}

/// Lifts a chain automorphism to the Hahn group over its chain.
pub fn lift_shift_to_group(shift: &ChainShift) -> Result<GroupAutomorphism> {
    if !shift.is_bijective() {
        return Err(Error::NotInvertible(shift.map().to_string()));
    }
    Ok(GroupAutomorphism::Lifted(shift.clone()))
}

impl GroupAutomorphism {
    pub fn coefficient_scale(q: Rational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::NotInvertible(format!("scaling by {}", format_rational(&q))));
        }
        Ok(GroupAutomorphism::CoefficientScale(q))
    }

    pub fn apply(&self, g: &HahnGroupElement) -> Result<HahnGroupElement> {
        match self {
            GroupAutomorphism::Identity => Ok(g.clone()),
            GroupAutomorphism::CoefficientScale(q) => Ok(g.scale(q)),
            GroupAutomorphism::Lifted(shift) => {
                if shift.chain() != &**g.chain() {
                    return Err(Error::DomainMismatch(format!(
                        "automorphism of {} applied over {}",
                        shift.chain(),
                        g.chain()
                    )));
                }
                // a chain automorphism is strictly increasing, so the image
                // support stays sorted
                Ok(g.map_support(|gamma| crate::chain::apply_shift_unchecked(shift, gamma)))
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match self {
            GroupAutomorphism::Identity => GroupAutomorphism::Identity,
            GroupAutomorphism::Lifted(s) => GroupAutomorphism::Lifted(s.inverse()?),
            GroupAutomorphism::CoefficientScale(q) => GroupAutomorphism::CoefficientScale(q.recip()),
        })
    }

    pub fn is_identity(&self) -> bool {
        match self {
            GroupAutomorphism::Identity => true,
            GroupAutomorphism::Lifted(s) => s.is_identity(),
            GroupAutomorphism::CoefficientScale(q) => q.is_one(),
        }
    }
}

/// Archimedean equivalence of non-zero `g`, `h`: both are moved into the
/// negative cone and compared under repeated doubling, a left shift there.
///
/// A witness is searched up to `cap` first. Without one, the verdict is
/// `NotEquivalent` when the leading support points differ (doubling never
/// changes them), else `Undecided`.
pub fn archimedean_equivalent(g: &HahnGroupElement, h: &HahnGroupElement, cap: u32) -> Result<EquivalenceVerdict> {
    if g.is_zero() || h.is_zero() {
        return Err(Error::ZeroElement);
    }
    same_chain(g.chain(), h.chain())?;
    let a = g.abs().neg();
    let b = h.abs().neg();
    let two = int(2);
    let found = find_witness(&a, &b, Orientation::LeftShift, cap, |x| Ok(x.scale(&two)), |x, y| x.compare(y))?;
    if let Some(n) = found {
        return Ok(EquivalenceVerdict::Equivalent(n));
    }
    if g.chain().compare_members(&g.value()?, &h.value()?)? != Ordering::Equal {
        return Ok(EquivalenceVerdict::NotEquivalent("doubling preserves the leading support point".into()));
    }
    Ok(EquivalenceVerdict::Undecided(cap))
}

/// Membership in the convex subgroup `{g : v_G(g) ∈ segment} ∪ {0}`.
pub fn convex_subgroup_member(segment: &FinalSegmentCut, g: &HahnGroupElement) -> Result<bool> {
    if g.is_zero() {
        return Ok(true);
    }
    segment
        .contains(g.chain(), &g.value()?)
        .map_err(|e| match e {
            Error::CrossChainComparison { chain, value } => Error::DomainMismatch(format!("{value} is not in {chain}")),
            other => other,
        })
}

/// The segment of the smallest convex subgroup containing `g`.
pub fn subgroup_generated_value(g: &HahnGroupElement) -> Result<FinalSegmentCut> {
    Ok(FinalSegmentCut::AtOrAbove(g.value()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ShiftMap;
    use crate::construct::pools;
    use crate::rational::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fin(n: usize) -> Arc<ChainDescriptor> {
        Arc::new(ChainDescriptor::Finite(n))
    }

    fn e(chain: &Arc<ChainDescriptor>, terms: &[(usize, i64)]) -> HahnGroupElement {
        HahnGroupElement::from_terms(chain, terms.iter().map(|&(i, c)| (ChainValue::FiniteAt(i), int(c)))).unwrap()
    }

    #[test]
    fn pointwise_addition() {
        let c = fin(2);
        let sum = e(&c, &[(0, 1), (1, 2)]).add(&e(&c, &[(1, 3)])).unwrap();
        assert_eq!(sum, e(&c, &[(0, 1), (1, 5)]));
        let g = e(&c, &[(0, 1)]);
        assert!(g.add(&g.neg()).unwrap().is_zero());
        assert_eq!(g.add(&HahnGroupElement::zero(&c)).unwrap(), g);
        assert_eq!(e(&c, &[(1, 2), (1, -2)]), HahnGroupElement::zero(&c));
    }

    #[test]
    fn lexicographic_order() {
        let c = fin(3);
        let zero = HahnGroupElement::zero(&c);
        assert_eq!(e(&c, &[(0, 1), (1, -100)]).compare(&zero).unwrap(), Ordering::Greater);
        assert_eq!(zero.compare(&zero).unwrap(), Ordering::Equal);
        let c2 = fin(2);
        assert_eq!(e(&c2, &[(1, 1)]).compare(&e(&c2, &[(0, 1)])).unwrap(), Ordering::Less);
        assert!(matches!(zero.compare(&HahnGroupElement::zero(&c2)), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn natural_value() {
        let c = fin(6);
        assert_eq!(e(&c, &[(2, 1), (5, 2)]).value().unwrap(), ChainValue::FiniteAt(2));
        assert_eq!(e(&c, &[(0, -3)]).value().unwrap(), ChainValue::FiniteAt(0));
        let g = e(&c, &[(1, 1), (2, -1)]);
        assert_eq!(g.value(), g.neg().value());
        assert_eq!(HahnGroupElement::zero(&c).value(), Err(Error::ZeroElement));
    }

    #[test]
    fn archimedean_examples() {
        let c = fin(2);
        let g = e(&c, &[(0, 1)]);
        let h = e(&c, &[(0, 7), (1, 1)]);
        assert_eq!(archimedean_equivalent(&g, &h, 64).unwrap(), EquivalenceVerdict::Equivalent(3));
        let g1 = e(&c, &[(1, 1)]);
        assert!(matches!(archimedean_equivalent(&g, &g1, 64).unwrap(), EquivalenceVerdict::NotEquivalent(_)));
        assert_eq!(archimedean_equivalent(&h, &h, 64).unwrap(), EquivalenceVerdict::Equivalent(0));
        assert_eq!(archimedean_equivalent(&g, &HahnGroupElement::zero(&c), 64), Err(Error::ZeroElement));
    }

    #[test]
    fn lifting_reindexes_support() {
        let q = Arc::new(ChainDescriptor::Rationals);
        let shift = ChainShift::new(ChainDescriptor::Rationals, ShiftMap::Translate(int(-1))).unwrap();
        let sigma = lift_shift_to_group(&shift).unwrap();
        let g = HahnGroupElement::from_terms(&q, [(ChainValue::q(0, 1), int(1)), (ChainValue::q(1, 1), int(1))]).unwrap();
        let expect = HahnGroupElement::from_terms(&q, [(ChainValue::q(-1, 1), int(1)), (ChainValue::q(0, 1), int(1))]).unwrap();
        assert_eq!(sigma.apply(&g).unwrap(), expect);

        let fixed_chain = ChainDescriptor::concat(2, ChainDescriptor::NonNegRationals);
        let fz = ChainShift::new(fixed_chain.clone(), ShiftMap::fix_zero_per_copy(ShiftMap::Scale(int(2)))).unwrap();
        let fc = Arc::new(fixed_chain);
        let g = HahnGroupElement::from_terms(
            &fc,
            [
                (ChainValue::at(0, ChainValue::q(0, 1)), int(1)),
                (ChainValue::at(1, ChainValue::q(3, 1)), int(1)),
            ],
        )
        .unwrap();
        let expect = HahnGroupElement::from_terms(
            &fc,
            [
                (ChainValue::at(0, ChainValue::q(0, 1)), int(1)),
                (ChainValue::at(1, ChainValue::q(6, 1)), int(1)),
            ],
        )
        .unwrap();
        assert_eq!(lift_shift_to_group(&fz).unwrap().apply(&g).unwrap(), expect);
        assert_eq!(GroupAutomorphism::Identity.apply(&g).unwrap(), g);

        let clamp = ChainShift::new(ChainDescriptor::Finite(3), ShiftMap::Table(vec![0, 0, 1])).unwrap();
        assert!(matches!(lift_shift_to_group(&clamp), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn subgroup_membership() {
        let c = fin(2);
        let seg = FinalSegmentCut::AtOrAbove(ChainValue::FiniteAt(1));
        assert!(convex_subgroup_member(&seg, &e(&c, &[(1, 1)])).unwrap());
        assert!(!convex_subgroup_member(&seg, &e(&c, &[(0, 1)])).unwrap());
        assert!(convex_subgroup_member(&seg, &HahnGroupElement::zero(&c)).unwrap());
        assert!(!convex_subgroup_member(&seg, &e(&c, &[(0, 1), (1, 5)])).unwrap());
        let c3 = fin(3);
        let g = e(&c3, &[(1, 1)]);
        assert_eq!(subgroup_generated_value(&g).unwrap(), FinalSegmentCut::AtOrAbove(ChainValue::FiniteAt(1)));
        assert!(convex_subgroup_member(&FinalSegmentCut::AtOrAbove(ChainValue::FiniteAt(1)), &g).unwrap());
        assert!(!convex_subgroup_member(&FinalSegmentCut::AtOrAbove(ChainValue::FiniteAt(2)), &g).unwrap());
        assert_eq!(
            subgroup_generated_value(&e(&c3, &[(0, 2)])).unwrap(),
            FinalSegmentCut::AtOrAbove(ChainValue::FiniteAt(0))
        );
    }

    #[test]
    fn sampled_group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let chains = [fin(3), Arc::new(ChainDescriptor::concat(2, ChainDescriptor::Rationals))];
        for c in &chains {
            let two = int(2);
            for _ in 0..300 {
                let x = pools::sample_group_element(c, &mut rng, 3);
                let y = pools::sample_group_element(c, &mut rng, 3);
                let z = pools::sample_group_element(c, &mut rng, 3);
                assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
                assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
                // order agrees with the sign of the difference
                assert_eq!(x.compare(&y).unwrap(), x.sub(&y).unwrap().sign());
                if x.sign() == Ordering::Greater && y.sign() == Ordering::Greater {
                    assert_eq!(x.add(&y).unwrap().sign(), Ordering::Greater);
                }
                if !x.is_zero() && !y.is_zero() {
                    if x.sign() == y.sign() {
                        let vx = x.value().unwrap();
                        let vy = y.value().unwrap();
                        let min = if c.compare(&vx, &vy).unwrap() == Ordering::Greater { vy } else { vx };
                        assert_eq!(x.add(&y).unwrap().value().unwrap(), min);
                    }
                    let arch = archimedean_equivalent(&x, &y, 64).unwrap().is_equivalent();
                    let same_value = x.value().unwrap() == y.value().unwrap();
                    assert_eq!(arch, Some(same_value));
                    if !same_value {
                        // the bare doubling search must fail too
                        let (a, b) = (x.abs().neg(), y.abs().neg());
                        let w = find_witness(&a, &b, Orientation::LeftShift, 64, |t| Ok::<_, Error>(t.scale(&two)), |s, t| s.compare(t)).unwrap();
                        assert_eq!(w, None);
                    }
                }
                let _ = rat(1, 1);
            }
        }
    }
}
