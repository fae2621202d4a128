use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::series::HahnSeries;
use crate::chain::{ChainDescriptor, ChainShift, ChainValue};
use crate::group::{lift_shift_to_group, same_chain, GroupAutomorphism, HahnGroupElement};
use crate::rational::{format_rational, int, Rational};
use crate::{Error, Result};

/// How a tower was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerOrigin {
    LiftedFromChain,
    LiftedFromGroup,
    Identity,
}

/// A field automorphism `σ` together with the automorphisms it induces on
/// the value group (`σ_G`) and on the value chain (`σ_Γ`).
///
/// `σ` itself re-indexes exponents: `Σ s_g t^g ↦ Σ s_g t^{σ_G(g)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutomorphismTower {
    chain: Arc<ChainDescriptor>,
    sigma_chain: ChainShift,
    sigma_group: GroupAutomorphism,
    origin: TowerOrigin,
}

/// Three-valued outcome of a classification test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "kebab-case")]
pub enum Verdict {
    Proven,
    Refuted(String),
    Undecided(String),
}

impl Verdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proven => write!(f, "proven"),
            Verdict::Refuted(w) => write!(f, "refuted ({w})"),
            Verdict::Undecided(w) => write!(f, "undecided ({w})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub isometry: Verdict,
    pub weak_isometry: Verdict,
    pub omega_increasing: Verdict,
    pub square_growth: Verdict,
}

/// Lifts an automorphism of the Hahn group over `chain` to the field.
///
/// `σ_Γ` is the lifted chain shift for [`GroupAutomorphism::Lifted`] and the
/// identity otherwise (scaling by a positive rational keeps every leading
/// support point).
pub fn lift_group_automorphism_to_field(
    chain: &Arc<ChainDescriptor>,
    sigma_group: GroupAutomorphism,
) -> Result<AutomorphismTower> {
    let sigma_chain = match &sigma_group {
        GroupAutomorphism::Lifted(shift) => {
            same_chain(chain, &Arc::new(shift.chain().clone()))?;
            if !shift.is_bijective() {
                return Err(Error::NotInvertible(shift.map().to_string()));
            }
            shift.clone()
        }
        GroupAutomorphism::CoefficientScale(q) => {
            if *q <= Rational::from_integer(0.into()) {
                return Err(Error::NotInvertible(format!("scaling by {}", format_rational(q))));
            }
            ChainShift::identity((**chain).clone())
        }
        GroupAutomorphism::Identity => ChainShift::identity((**chain).clone()),
    };
    let origin = if sigma_group.is_identity() {
        TowerOrigin::Identity
    } else {
        TowerOrigin::LiftedFromGroup
    };
    Ok(AutomorphismTower {
        chain: chain.clone(),
        sigma_chain,
        sigma_group,
        origin,
    })
}

impl AutomorphismTower {
    /// The tower generated by a chain automorphism.
    pub fn from_chain_shift(shift: &ChainShift) -> Result<Self> {
        let sigma_group = lift_shift_to_group(shift)?;
        let origin = if shift.is_identity() {
            TowerOrigin::Identity
        } else {
            TowerOrigin::LiftedFromChain
        };
        Ok(AutomorphismTower {
            chain: Arc::new(shift.chain().clone()),
            sigma_chain: shift.clone(),
            sigma_group,
            origin,
        })
    }

    pub fn identity(chain: &Arc<ChainDescriptor>) -> Self {
        AutomorphismTower {
            chain: chain.clone(),
            sigma_chain: ChainShift::identity((**chain).clone()),
            sigma_group: GroupAutomorphism::Identity,
            origin: TowerOrigin::Identity,
        }
    }

    pub fn chain(&self) -> &Arc<ChainDescriptor> {
        &self.chain
    }

    pub fn sigma_chain(&self) -> &ChainShift {
        &self.sigma_chain
    }

    pub fn sigma_group(&self) -> &GroupAutomorphism {
        &self.sigma_group
    }

    pub fn origin(&self) -> TowerOrigin {
        self.origin
    }

    pub fn apply(&self, s: &HahnSeries) -> Result<HahnSeries> {
        same_chain(&self.chain, s.chain())?;
        s.map_exponents(|g| self.sigma_group.apply(g))
    }

    pub fn apply_n(&self, s: &HahnSeries, n: u32) -> Result<HahnSeries> {
        let mut out = s.clone();
        for _ in 0..n {
            out = self.apply(&out)?;
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(AutomorphismTower {
            chain: self.chain.clone(),
            sigma_chain: self.sigma_chain.inverse()?,
            sigma_group: self.sigma_group.inverse()?,
            origin: self.origin,
        })
    }

    /// `t^(-1_γ)`, the basic positive infinite element at `γ`.
    fn probe(&self, gamma: &ChainValue) -> Result<HahnSeries> {
        let g = HahnGroupElement::monomial(&self.chain, gamma.clone(), int(-1))?;
        Ok(HahnSeries::monomial(g, Rational::one()))
    }

    /// Chain points to try when looking for a point moved by `σ_Γ`.
    fn candidate_points(&self) -> Vec<ChainValue> {
        if let Some(all) = self.chain.elements() {
            return all;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut out = vec![self.chain.some_point()];
        out.extend((0..48).map(|_| self.chain.sample(&mut rng)));
        out
    }

    fn moved_point(&self) -> Result<Option<ChainValue>> {
        for gamma in self.candidate_points() {
            let image = self.sigma_chain.apply(&gamma)?;
            if self.chain.compare(&image, &gamma)? != Ordering::Equal {
                return Ok(Some(gamma));
            }
        }
        Ok(None)
    }

    fn isometry(&self) -> Result<Verdict> {
        if self.sigma_group.is_identity() {
            return Ok(Verdict::Proven);
        }
        let gamma = match &self.sigma_group {
            GroupAutomorphism::CoefficientScale(_) => Some(self.chain.some_point()),
            _ => self.moved_point()?,
        };
        let Some(gamma) = gamma else {
            return Ok(Verdict::Undecided("no moved exponent found on samples".into()));
        };
        let g = HahnGroupElement::monomial(&self.chain, gamma, Rational::one())?;
        let image = self.apply(&HahnSeries::monomial(g.clone(), Rational::one()))?.valuation()?;
        if image == g {
            return Ok(Verdict::Undecided("sampled exponent is fixed".into()));
        }
        Ok(Verdict::Refuted(format!("v(σ(t^({g}))) = {image}")))
    }

    fn weak_isometry(&self) -> Result<Verdict> {
        if self.sigma_chain.is_identity() {
            return Ok(Verdict::Proven);
        }
        Ok(match self.moved_point()? {
            Some(gamma) => Verdict::Refuted(format!("σ_Γ({gamma}) = {}", self.sigma_chain.apply(&gamma)?)),
            None => Verdict::Undecided("no moved point found on samples".into()),
        })
    }

    fn omega_increasing(&self) -> Result<Verdict> {
        if self.sigma_chain.is_strict_left_shift() {
            return Ok(Verdict::Proven);
        }
        let Some(gamma) = self.sigma_chain.point_not_moved_left() else {
            return Ok(Verdict::Undecided("no point found that σ_Γ does not move left".into()));
        };
        let a = self.probe(&gamma)?;
        let image = self.apply(&a)?;
        let mut power = a.clone();
        for n in 1..=64u32 {
            if image.compare(&power)? != Ordering::Greater {
                return Ok(Verdict::Refuted(format!("a = {a}: σ(a) ≤ a^{n}")));
            }
            power = power.mul(&a)?;
        }
        Ok(Verdict::Undecided(format!("σ(a) > a^n for n ≤ 64 at a = {a}")))
    }

    /// Whether `σ(a) ≥ a²` on all positive infinite elements.
    ///
    /// Proven by shape: a strict left shift on the chain makes `v(σ(a))`
    /// strictly more negative in archimedean class, and scaling by `q > 2`
    /// gives `v(σ(a)) < 2·v(a)`. Refutations are checked on a concrete element.
    pub fn square_growth(&self) -> Result<Verdict> {
        let refute_at = |gamma: &ChainValue| -> Result<Verdict> {
            let a = self.probe(gamma)?;
            let image = self.apply(&a)?;
            let square = a.mul(&a)?;
            if image.compare(&square)? == Ordering::Less {
                Ok(Verdict::Refuted(format!("a = {a}: σ(a) = {image} < a²")))
            } else {
                Ok(Verdict::Undecided(format!("probe {a} did not refute")))
            }
        };
        match &self.sigma_group {
            GroupAutomorphism::CoefficientScale(q) => {
                let two = int(2);
                match q.cmp(&two) {
                    Ordering::Greater => Ok(Verdict::Proven),
                    Ordering::Equal => Ok(Verdict::Undecided(
                        "σ_G(g) = 2g: valuations tie, coefficients decide".into(),
                    )),
                    Ordering::Less => refute_at(&self.chain.some_point()),
                }
            }
            _ => {
                if self.sigma_chain.is_strict_left_shift() {
                    return Ok(Verdict::Proven);
                }
                match self.sigma_chain.point_not_moved_left() {
                    Some(gamma) => refute_at(&gamma),
                    None => Ok(Verdict::Undecided("no point found that σ_Γ does not move left".into())),
                }
            }
        }
    }

    pub fn classify(&self) -> Result<Classification> {
        Ok(Classification {
            isometry: self.isometry()?,
            weak_isometry: self.weak_isometry()?,
            omega_increasing: self.omega_increasing()?,
            square_growth: self.square_growth()?,
        })
    }
}

impl fmt::Display for AutomorphismTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ_G = {} over {}", self.sigma_group, self.chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ShiftMap;

    fn omega_tower(m: usize) -> AutomorphismTower {
        let chain = ChainDescriptor::concat(m, ChainDescriptor::Rationals);
        let shift = ChainShift::new(chain, ShiftMap::per_copy(ShiftMap::Translate(int(-1)))).unwrap();
        AutomorphismTower::from_chain_shift(&shift).unwrap()
    }

    #[test]
    fn lifting_reindexes_exponents() {
        let q = Arc::new(ChainDescriptor::Rationals);
        let shift = ChainShift::new(ChainDescriptor::Rationals, ShiftMap::Translate(int(-1))).unwrap();
        let tower = AutomorphismTower::from_chain_shift(&shift).unwrap();
        let one_at = |v: i64| HahnGroupElement::monomial(&q, ChainValue::q(v, 1), Rational::one()).unwrap();
        let s = HahnSeries::monomial(one_at(0), Rational::one());
        assert_eq!(tower.apply(&s).unwrap(), HahnSeries::monomial(one_at(-1), Rational::one()));

        let mixed = HahnSeries::from_terms(&q, [(HahnGroupElement::zero(&q), int(2)), (one_at(3), int(3))]).unwrap();
        let expect = HahnSeries::from_terms(&q, [(HahnGroupElement::zero(&q), int(2)), (one_at(2), int(3))]).unwrap();
        assert_eq!(tower.apply(&mixed).unwrap(), expect);

        let id = AutomorphismTower::identity(&q);
        assert_eq!(id.apply(&mixed).unwrap(), mixed);
    }

    #[test]
    fn identity_classification() {
        let c = AutomorphismTower::identity(&Arc::new(ChainDescriptor::Finite(2))).classify().unwrap();
        assert!(c.isometry.is_proven());
        assert!(c.weak_isometry.is_proven());
        assert!(c.omega_increasing.is_refuted());
        assert!(c.square_growth.is_refuted());
    }

    #[test]
    fn translation_tower_is_omega_increasing() {
        let c = omega_tower(2).classify().unwrap();
        assert!(c.omega_increasing.is_proven());
        assert!(c.square_growth.is_proven());
        assert!(c.isometry.is_refuted());
        assert!(c.weak_isometry.is_refuted());
    }

    #[test]
    fn scaling_tower_is_weak_isometry_only() {
        let chain = Arc::new(ChainDescriptor::Finite(2));
        let two = GroupAutomorphism::coefficient_scale(int(2)).unwrap();
        let c = lift_group_automorphism_to_field(&chain, two).unwrap().classify().unwrap();
        assert!(c.weak_isometry.is_proven());
        assert!(c.isometry.is_refuted());
        assert!(c.omega_increasing.is_refuted());
        assert!(matches!(c.square_growth, Verdict::Undecided(_)));

        let three = GroupAutomorphism::coefficient_scale(int(3)).unwrap();
        let t = lift_group_automorphism_to_field(&chain, three).unwrap();
        assert!(t.square_growth().unwrap().is_proven());
        let half = GroupAutomorphism::coefficient_scale(crate::rational::rat(3, 2)).unwrap();
        let t = lift_group_automorphism_to_field(&chain, half).unwrap();
        assert!(t.square_growth().unwrap().is_refuted());
    }

    #[test]
    fn fixed_point_tower_fails_square_growth() {
        let chain = ChainDescriptor::concat(2, ChainDescriptor::NonNegRationals);
        let shift = ChainShift::new(chain, ShiftMap::fix_zero_per_copy(ShiftMap::Scale(int(2)))).unwrap();
        let c = AutomorphismTower::from_chain_shift(&shift).unwrap().classify().unwrap();
        assert!(c.square_growth.is_refuted());
        assert!(c.omega_increasing.is_refuted());
        assert!(c.weak_isometry.is_refuted());
    }

    #[test]
    fn diagram_commutes_on_a_sample() {
        let tower = omega_tower(3);
        let chain = tower.chain().clone();
        let g = HahnGroupElement::from_terms(
            &chain,
            [
                (ChainValue::at(1, ChainValue::q(1, 2)), int(-2)),
                (ChainValue::at(2, ChainValue::q(0, 1)), int(5)),
            ],
        )
        .unwrap();
        let a = HahnSeries::monomial(g.clone(), int(4))
            .add(&HahnSeries::one(&chain))
            .unwrap();
        let v_sigma = tower.apply(&a).unwrap().valuation().unwrap();
        assert_eq!(v_sigma, tower.sigma_group().apply(&a.valuation().unwrap()).unwrap());
        let vg = tower.sigma_group().apply(&g).unwrap().value().unwrap();
        assert_eq!(vg, tower.sigma_chain().apply(&g.value().unwrap()).unwrap());
    }

    #[test]
    fn inverse_undoes_apply() {
        let tower = omega_tower(2);
        let inv = tower.inverse().unwrap();
        let chain = tower.chain().clone();
        let g = HahnGroupElement::monomial(&chain, ChainValue::at(0, ChainValue::q(2, 3)), int(-1)).unwrap();
        let s = HahnSeries::monomial(g, int(7));
        assert_eq!(inv.apply(&tower.apply(&s).unwrap()).unwrap(), s);
    }
}
