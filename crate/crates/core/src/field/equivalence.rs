use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use super::automorphism::AutomorphismTower;
use super::series::HahnSeries;
use crate::chain::{find_witness, EquivalenceVerdict, Orientation};
use crate::group::same_chain;
use crate::rational::Rational;
use crate::{Error, Result};

/// Largest exponent for which a power is expanded term by term.
const MAX_EXPANDED_EXPONENT: u64 = 1 << 12;

/// Compares `x^n` with `y^m` for positive infinite `x`, `y` without
/// expanding the powers unless their valuations tie.
pub fn compare_powers(x: &HahnSeries, n: &BigUint, y: &HahnSeries, m: &BigUint) -> Result<Ordering> {
    let scaled = |s: &HahnSeries, k: &BigUint| -> Result<_> {
        Ok(s.valuation()?.scale(&Rational::from_integer(BigInt::from(k.clone()))))
    };
    let vx = scaled(x, n)?;
    let vy = scaled(y, m)?;
    let by_value = vx.compare(&vy)?;
    if by_value != Ordering::Equal {
        return Ok(by_value.reverse());
    }
    let expand = |s: &HahnSeries, k: &BigUint| -> Result<HahnSeries> {
        match k.to_u64() {
            Some(k) if k <= MAX_EXPANDED_EXPONENT => s.pow(k),
            _ => Err(Error::ExponentTooLarge(k.to_string())),
        }
    };
    expand(x, n)?.compare(&expand(y, m)?)
}

fn require_p_k(a: &HahnSeries) -> Result<()> {
    if a.in_p_k() {
        Ok(())
    } else {
        Err(Error::NotInPK(a.to_string()))
    }
}

/// Multiplicative equivalence on positive infinite elements: the relation
/// of the squaring map `a ↦ a²`, a right shift on `P_K`.
///
/// `Equivalent(n)` means `a^(2^n) ≥ b` and `b^(2^n) ≥ a`. Without a witness
/// up to `cap`, distinct archimedean classes of `v(a)` and `v(b)` certify
/// inequivalence, since squaring only doubles valuations.
pub fn mult_equivalent(a: &HahnSeries, b: &HahnSeries, cap: u32) -> Result<EquivalenceVerdict> {
    same_chain(a.chain(), b.chain())?;
    require_p_k(a)?;
    require_p_k(b)?;
    let start = |s: &HahnSeries| (s.clone(), BigUint::one());
    let found = find_witness(
        &start(a),
        &start(b),
        Orientation::RightShift,
        cap,
        |(s, k)| Ok((s.clone(), k << 1usize)),
        |(x, n), (y, m)| compare_powers(x, n, y, m),
    );
    match found {
        Ok(Some(n)) => return Ok(EquivalenceVerdict::Equivalent(n)),
        Ok(None) | Err(Error::ExponentTooLarge(_)) => {}
        Err(e) => return Err(e),
    }
    let chain = a.chain();
    let (ga, gb) = (a.valuation()?.value()?, b.valuation()?.value()?);
    if chain.compare_members(&ga, &gb)? != Ordering::Equal {
        return Ok(EquivalenceVerdict::NotEquivalent(
            "squaring preserves the archimedean class of the valuation".into(),
        ));
    }
    Ok(EquivalenceVerdict::Undecided(cap))
}

/// Equivalence under a field automorphism with proven square growth, where
/// `σ` is a right shift on `P_K`.
///
/// Without a witness up to `cap`, the verdict falls back to the chain: the
/// leading support points of the valuations are compared under `σ_Γ`.
pub fn sigma_equivalent(tower: &AutomorphismTower, a: &HahnSeries, b: &HahnSeries, cap: u32) -> Result<EquivalenceVerdict> {
    same_chain(tower.chain(), a.chain())?;
    same_chain(a.chain(), b.chain())?;
    require_p_k(a)?;
    require_p_k(b)?;
    let growth = tower.square_growth()?;
    if !growth.is_proven() {
        return Err(Error::HypothesisNotProven(format!("square growth is {growth}")));
    }
    let found = find_witness(a, b, Orientation::RightShift, cap, |s| tower.apply(s), |x, y| x.compare(y))?;
    if let Some(n) = found {
        return Ok(EquivalenceVerdict::Equivalent(n));
    }
    let (ga, gb) = (a.valuation()?.value()?, b.valuation()?.value()?);
    match tower.sigma_chain().equivalent(&ga, &gb, cap)? {
        EquivalenceVerdict::NotEquivalent(reason) => Ok(EquivalenceVerdict::NotEquivalent(format!(
            "leading support points are inequivalent under σ_Γ: {reason}"
        ))),
        _ => Ok(EquivalenceVerdict::Undecided(cap)),
    }
}
