use std::fmt;

use num_traits::{One, Signed, Zero};

use super::descriptor::{ChainDescriptor, ChainValue};
use crate::rational::{format_rational, is_positive, Rational};
use crate::{Error, Result};

/// A monotone self-map of a chain, as a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ShiftMap {
    Identity,
    /// `x ↦ x + q` on the rationals.
    Translate(Rational),
    /// `x ↦ q·x` with `q > 0`, on the rationals or non-negative rationals.
    Scale(Rational),
    /// Applies the inner map inside every copy of a concatenation.
    PerCopy(Box<ShiftMap>),
    /// On copies of the non-negative rationals: fixes each copy's zero and
    /// applies the inner map (an automorphism of the positive rationals)
    /// elsewhere.
    FixZeroPerCopy(Box<ShiftMap>),
    /// `i ↦ table[i]` on `Finite(table.len())`.
    Table(Vec<usize>),
}

impl ShiftMap {
    pub fn per_copy(inner: ShiftMap) -> Self {
        ShiftMap::PerCopy(Box::new(inner))
    }

    pub fn fix_zero_per_copy(inner: ShiftMap) -> Self {
        ShiftMap::FixZeroPerCopy(Box::new(inner))
    }
}

impl fmt::Display for ShiftMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftMap::Identity => write!(f, "identity"),
            ShiftMap::Translate(q) => write!(f, "translate({})", format_rational(q)),
            ShiftMap::Scale(q) => write!(f, "scale({})", format_rational(q)),
            ShiftMap::PerCopy(inner) => write!(f, "percopy({inner})"),
            ShiftMap::FixZeroPerCopy(inner) => write!(f, "fixzero({inner})"),
            ShiftMap::Table(t) => {
                let parts: Vec<String> = t.iter().map(|i| i.to_string()).collect();
                write!(f, "table({})", parts.join(","))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `φ(a) ≥ a` everywhere.
    RightShift,
    /// `φ(a) ≤ a` everywhere.
    LeftShift,
    Neutral,
}

/// Exact fixed-point set of a built-in shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoints {
    Everything,
    /// Listed in increasing order.
    Points(Vec<ChainValue>),
}

/// A shift map together with the chain it acts on, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainShift {
    chain: ChainDescriptor,
    map: ShiftMap,
}

impl ChainShift {
    pub fn new(chain: ChainDescriptor, map: ShiftMap) -> Result<Self> {
        check_domain(&chain, &map)?;
        Ok(ChainShift { chain, map })
    }

    pub fn identity(chain: ChainDescriptor) -> Self {
        ChainShift {
            chain,
            map: ShiftMap::Identity,
        }
    }

    pub fn chain(&self) -> &ChainDescriptor {
        &self.chain
    }

    pub fn map(&self) -> &ShiftMap {
        &self.map
    }

    /// The chain and map of the per-copy component, for the two copy-wise
    /// shapes.
    pub(crate) fn component_shift(&self) -> Option<ChainShift> {
        match (&self.chain, &self.map) {
            (ChainDescriptor::Concat { component, .. }, ShiftMap::PerCopy(inner)) => Some(ChainShift {
                chain: (**component).clone(),
                map: (**inner).clone(),
            }),
            (ChainDescriptor::Concat { .. }, ShiftMap::FixZeroPerCopy(inner)) => Some(ChainShift {
                chain: ChainDescriptor::NonNegRationals,
                map: (**inner).clone(),
            }),
            _ => None,
        }
    }

    pub fn orientation(&self) -> Orientation {
        orientation_of(&self.chain, &self.map)
    }

    pub fn is_identity(&self) -> bool {
        is_identity_map(&self.chain, &self.map)
    }

    pub fn apply(&self, a: &ChainValue) -> Result<ChainValue> {
        if !self.chain.contains(a) {
            return Err(Error::DomainMismatch(format!(
                "{a} is not in the domain {} of {}",
                self.chain, self.map
            )));
        }
        Ok(apply_map(&self.chain, &self.map, a))
    }

    /// `φⁿ(a)`; `n = 0` returns `a`.
    pub fn apply_n(&self, a: &ChainValue, n: u32) -> Result<ChainValue> {
        self.apply(a)?;
        let mut x = a.clone();
        for _ in 0..n {
            x = apply_map(&self.chain, &self.map, &x);
        }
        Ok(x)
    }

    pub fn is_bijective(&self) -> bool {
        inverse_map(&self.chain, &self.map).is_some()
    }

    pub fn inverse(&self) -> Result<ChainShift> {
        inverse_map(&self.chain, &self.map)
            .map(|map| ChainShift {
                chain: self.chain.clone(),
                map,
            })
            .ok_or_else(|| Error::NotInvertible(self.map.to_string()))
    }

    /// `φ(γ) < γ` for every `γ`, decided exactly from the shape.
    pub fn is_strict_left_shift(&self) -> bool {
        strict_left(&self.chain, &self.map)
    }

    /// A point `γ` with `φ(γ) ≥ γ`. `None` exactly for strict left shifts.
    pub fn point_not_moved_left(&self) -> Option<ChainValue> {
        not_moved_left(&self.chain, &self.map)
    }

    pub fn fixed_points(&self) -> FixedPoints {
        if self.is_identity() {
            return FixedPoints::Everything;
        }
        match (&self.chain, &self.map) {
            (_, ShiftMap::Translate(_)) => FixedPoints::Points(Vec::new()),
            (_, ShiftMap::Scale(_)) => FixedPoints::Points(vec![ChainValue::Rational(Rational::zero())]),
            (ChainDescriptor::Concat { copies, .. }, ShiftMap::PerCopy(_)) => {
                match self.component_shift().expect("per-copy shape").fixed_points() {
                    FixedPoints::Everything => FixedPoints::Everything,
                    FixedPoints::Points(ps) => FixedPoints::Points(
                        (0..*copies)
                            .flat_map(|i| ps.iter().map(move |p| ChainValue::at(i, p.clone())))
                            .collect(),
                    ),
                }
            }
            (ChainDescriptor::Concat { copies, .. }, ShiftMap::FixZeroPerCopy(_)) => {
                // the inner map is a non-trivial scaling, which moves every
                // positive rational
                FixedPoints::Points(
                    (0..*copies)
                        .map(|i| ChainValue::at(i, ChainValue::q(0, 1)))
                        .collect(),
                )
            }
            (_, ShiftMap::Table(t)) => FixedPoints::Points(
                (0..t.len())
                    .filter(|&i| t[i] == i)
                    .map(ChainValue::FiniteAt)
                    .collect(),
            ),
            _ => unreachable!("validated shape {} on {}", self.map, self.chain),
        }
    }
}

fn mismatch(chain: &ChainDescriptor, map: &ShiftMap) -> Error {
    Error::DomainMismatch(format!("{map} is not a shift of {chain}"))
}

fn check_domain(chain: &ChainDescriptor, map: &ShiftMap) -> Result<()> {
    match (map, chain) {
        (ShiftMap::Identity, ChainDescriptor::Quotient(_)) => Err(mismatch(chain, map)),
        (ShiftMap::Identity, _) => Ok(()),
        (ShiftMap::Translate(_), ChainDescriptor::Rationals) => Ok(()),
        (ShiftMap::Scale(q), ChainDescriptor::Rationals | ChainDescriptor::NonNegRationals)
            if is_positive(q) =>
        {
            Ok(())
        }
        (ShiftMap::PerCopy(inner), ChainDescriptor::Concat { component, .. }) => {
            check_domain(component, inner)
        }
        (ShiftMap::FixZeroPerCopy(inner), ChainDescriptor::Concat { component, .. })
            if **component == ChainDescriptor::NonNegRationals =>
        {
            match **inner {
                ShiftMap::Identity => Ok(()),
                ShiftMap::Scale(ref q) if is_positive(q) => Ok(()),
                _ => Err(mismatch(chain, map)),
            }
        }
        (ShiftMap::Table(t), ChainDescriptor::Finite(_) | ChainDescriptor::Singleton) => {
            let n = chain.cardinality().expect("finite");
            if t.len() != n || t.iter().any(|&x| x >= n) {
                return Err(Error::DomainMismatch(format!(
                    "{map} must list {n} images below {n}"
                )));
            }
            if t.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::DomainMismatch(format!("{map} is not order preserving")));
            }
            Ok(())
        }
        _ => Err(mismatch(chain, map)),
    }
}

fn orientation_of(chain: &ChainDescriptor, map: &ShiftMap) -> Orientation {
    match (map, chain) {
        (ShiftMap::Identity, _) => Orientation::RightShift,
        (ShiftMap::Translate(q), _) => {
            if q.is_negative() {
                Orientation::LeftShift
            } else {
                Orientation::RightShift
            }
        }
        (ShiftMap::Scale(q), ChainDescriptor::NonNegRationals) => {
            if *q >= Rational::one() {
                Orientation::RightShift
            } else {
                Orientation::LeftShift
            }
        }
        (ShiftMap::Scale(q), _) => {
            if q.is_one() {
                Orientation::RightShift
            } else {
                Orientation::Neutral
            }
        }
        (ShiftMap::PerCopy(inner), ChainDescriptor::Concat { component, .. }) => {
            orientation_of(component, inner)
        }
        (ShiftMap::FixZeroPerCopy(inner), _) => orientation_of(&ChainDescriptor::NonNegRationals, inner),
        (ShiftMap::Table(t), _) => {
            if t.iter().enumerate().all(|(i, &x)| x >= i) {
                Orientation::RightShift
            } else if t.iter().enumerate().all(|(i, &x)| x <= i) {
                Orientation::LeftShift
            } else {
                Orientation::Neutral
            }
        }
        (ShiftMap::PerCopy(_), _) => Orientation::Neutral,
    }
}

fn is_identity_map(chain: &ChainDescriptor, map: &ShiftMap) -> bool {
    match (map, chain) {
        (ShiftMap::Identity, _) => true,
        (ShiftMap::Translate(q), _) => q.is_zero(),
        (ShiftMap::Scale(q), _) => q.is_one(),
        (ShiftMap::PerCopy(inner), ChainDescriptor::Concat { component, .. }) => {
            is_identity_map(component, inner)
        }
        (ShiftMap::FixZeroPerCopy(inner), _) => is_identity_map(&ChainDescriptor::NonNegRationals, inner),
        (ShiftMap::Table(t), _) => t.iter().enumerate().all(|(i, &x)| x == i),
        (ShiftMap::PerCopy(_), _) => false,
    }
}

/// Assumes `v` is in the domain.
pub(crate) fn apply_map(chain: &ChainDescriptor, map: &ShiftMap, v: &ChainValue) -> ChainValue {
    match (map, chain, v) {
        (ShiftMap::Identity, _, _) => v.clone(),
        (ShiftMap::Translate(q), _, ChainValue::Rational(x)) => ChainValue::Rational(x + q),
        (ShiftMap::Scale(q), _, ChainValue::Rational(x)) => ChainValue::Rational(x * q),
        (ShiftMap::PerCopy(inner), ChainDescriptor::Concat { component, .. }, ChainValue::ConcatAt(i, u)) => {
            ChainValue::at(*i, apply_map(component, inner, u))
        }
        (ShiftMap::FixZeroPerCopy(inner), _, ChainValue::ConcatAt(i, u)) => match &**u {
            ChainValue::Rational(x) if x.is_zero() => v.clone(),
            _ => ChainValue::at(*i, apply_map(&ChainDescriptor::NonNegRationals, inner, u)),
        },
        (ShiftMap::Table(t), _, ChainValue::FiniteAt(i)) => ChainValue::FiniteAt(t[*i]),
        _ => unreachable!("{v} outside the domain of {map}"),
    }
}

fn inverse_map(chain: &ChainDescriptor, map: &ShiftMap) -> Option<ShiftMap> {
    match (map, chain) {
        (ShiftMap::Identity, _) => Some(ShiftMap::Identity),
        (ShiftMap::Translate(q), _) => Some(ShiftMap::Translate(-q)),
        (ShiftMap::Scale(q), _) => Some(ShiftMap::Scale(q.recip())),
        (ShiftMap::PerCopy(inner), ChainDescriptor::Concat { component, .. }) => {
            inverse_map(component, inner).map(ShiftMap::per_copy)
        }
        (ShiftMap::FixZeroPerCopy(inner), _) => {
            inverse_map(&ChainDescriptor::NonNegRationals, inner).map(ShiftMap::fix_zero_per_copy)
        }
        // a monotone bijection of a finite chain is the identity
        (ShiftMap::Table(t), _) if t.iter().enumerate().all(|(i, &x)| x == i) => Some(map.clone()),
        _ => None,
    }
}

fn strict_left(chain: &ChainDescriptor, map: &ShiftMap) -> bool {
    match (map, chain) {
        (ShiftMap::Translate(q), _) => q.is_negative(),
        (ShiftMap::PerCopy(inner), ChainDescriptor::Concat { component, .. }) => strict_left(component, inner),
        _ => false,
    }
}

fn not_moved_left(chain: &ChainDescriptor, map: &ShiftMap) -> Option<ChainValue> {
    match (map, chain) {
        (ShiftMap::Identity, _) => Some(chain.some_point()),
        (ShiftMap::Translate(q), _) => (!q.is_negative()).then(|| ChainValue::q(0, 1)),
        (ShiftMap::Scale(_), _) => Some(ChainValue::q(0, 1)),
        (ShiftMap::PerCopy(inner), ChainDescriptor::Concat { component, .. }) => {
            not_moved_left(component, inner).map(|v| ChainValue::at(0, v))
        }
        (ShiftMap::FixZeroPerCopy(_), _) => Some(ChainValue::at(0, ChainValue::q(0, 1))),
        (ShiftMap::Table(_), _) => Some(ChainValue::FiniteAt(0)),
        _ => None,
    }
}
