use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::Rng;

use super::shift::ChainShift;
use super::DEFAULT_CAP;
use crate::rational::{format_rational, rat, Rational};
use crate::{Error, Result};

/// A totally ordered set, given as a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChainDescriptor {
    /// `0 < 1 < … < n-1`, with `n ≥ 1`.
    Finite(usize),
    Rationals,
    NonNegRationals,
    Singleton,
    /// `copies` consecutive copies of `component`, ordered lexicographically
    /// by copy index first.
    Concat { copies: usize, component: Box<ChainDescriptor> },
    Reverse(Box<ChainDescriptor>),
    /// Classes of the shift's equivalence relation, in the induced order.
    Quotient(Box<ChainShift>),
}

/// An element of some chain. Only meaningful relative to its chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChainValue {
    FiniteAt(usize),
    Rational(Rational),
    ConcatAt(usize, Box<ChainValue>),
    ReverseOf(Box<ChainValue>),
    ClassOf(Box<ChainValue>),
}

impl ChainValue {
    pub fn q(numer: i64, denom: i64) -> Self {
        ChainValue::Rational(rat(numer, denom))
    }

    pub fn at(copy: usize, inner: ChainValue) -> Self {
        ChainValue::ConcatAt(copy, Box::new(inner))
    }

    pub fn reversed(inner: ChainValue) -> Self {
        ChainValue::ReverseOf(Box::new(inner))
    }

    pub fn class_of(rep: ChainValue) -> Self {
        ChainValue::ClassOf(Box::new(rep))
    }

    pub fn copy_index(&self) -> Option<usize> {
        match self {
            ChainValue::ConcatAt(i, _) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for ChainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainValue::FiniteAt(i) => write!(f, "{i}"),
            ChainValue::Rational(q) => write!(f, "{}", format_rational(q)),
            ChainValue::ConcatAt(i, v) => write!(f, "({i},{v})"),
            ChainValue::ReverseOf(v) => write!(f, "rev({v})"),
            ChainValue::ClassOf(v) => write!(f, "[{v}]"),
        }
    }
}

impl fmt::Display for ChainDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainDescriptor::Finite(n) => write!(f, "finite({n})"),
            ChainDescriptor::Rationals => write!(f, "Q"),
            ChainDescriptor::NonNegRationals => write!(f, "Qnn"),
            ChainDescriptor::Singleton => write!(f, "singleton"),
            ChainDescriptor::Concat { copies, component } => {
                write!(f, "concat(finite({copies}),{component})")
            }
            ChainDescriptor::Reverse(inner) => write!(f, "reverse({inner})"),
            ChainDescriptor::Quotient(shift) => {
                write!(f, "quotient({},{})", shift.chain(), shift.map())
            }
        }
    }
}

impl ChainDescriptor {
    pub fn concat(copies: usize, component: ChainDescriptor) -> Self {
        ChainDescriptor::Concat {
            copies,
            component: Box::new(component),
        }
    }

    pub fn reverse(inner: ChainDescriptor) -> Self {
        ChainDescriptor::Reverse(Box::new(inner))
    }

    pub fn contains(&self, value: &ChainValue) -> bool {
        match (self, value) {
            (ChainDescriptor::Finite(n), ChainValue::FiniteAt(i)) => i < n,
            (ChainDescriptor::Singleton, ChainValue::FiniteAt(i)) => *i == 0,
            (ChainDescriptor::Rationals, ChainValue::Rational(_)) => true,
            (ChainDescriptor::NonNegRationals, ChainValue::Rational(q)) => !q.is_negative(),
            (ChainDescriptor::Concat { copies, component }, ChainValue::ConcatAt(i, v)) => {
                i < copies && component.contains(v)
            }
            (ChainDescriptor::Reverse(inner), ChainValue::ReverseOf(v)) => inner.contains(v),
            (ChainDescriptor::Quotient(shift), ChainValue::ClassOf(v)) => shift.chain().contains(v),
            _ => false,
        }
    }

    pub(crate) fn check(&self, value: &ChainValue) -> Result<()> {
        if self.contains(value) {
            Ok(())
        } else {
            Err(Error::CrossChainComparison {
                chain: self.to_string(),
                value: value.to_string(),
            })
        }
    }

    /// Compares two elements of this chain.
    ///
    /// Fails with `CrossChainComparison` if either value does not belong to
    /// the chain, and on quotient chains with `UndecidedEquivalence` when the
    /// class comparison cannot be decided within the default cap.
    pub fn compare(&self, a: &ChainValue, b: &ChainValue) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        self.compare_members(a, b)
    }

    pub(crate) fn compare_members(&self, a: &ChainValue, b: &ChainValue) -> Result<Ordering> {
        Ok(match (self, a, b) {
            (
                ChainDescriptor::Finite(_) | ChainDescriptor::Singleton,
                ChainValue::FiniteAt(i),
                ChainValue::FiniteAt(j),
            ) => i.cmp(j),
            (
                ChainDescriptor::Rationals | ChainDescriptor::NonNegRationals,
                ChainValue::Rational(p),
                ChainValue::Rational(q),
            ) => p.cmp(q),
            (
                ChainDescriptor::Concat { component, .. },
                ChainValue::ConcatAt(i, u),
                ChainValue::ConcatAt(j, v),
            ) => match i.cmp(j) {
                Ordering::Equal => component.compare_members(u, v)?,
                other => other,
            },
            (ChainDescriptor::Reverse(inner), ChainValue::ReverseOf(u), ChainValue::ReverseOf(v)) => {
                inner.compare_members(u, v)?.reverse()
            }
            (ChainDescriptor::Quotient(shift), ChainValue::ClassOf(u), ChainValue::ClassOf(v)) => {
                shift.compare_classes(u, v, DEFAULT_CAP)?
            }
            _ => {
                return Err(Error::CrossChainComparison {
                    chain: self.to_string(),
                    value: format!("{a} / {b}"),
                })
            }
        })
    }

    /// Number of elements, when finite.
    pub fn cardinality(&self) -> Option<usize> {
        match self {
            ChainDescriptor::Finite(n) => Some(*n),
            ChainDescriptor::Singleton => Some(1),
            ChainDescriptor::Rationals | ChainDescriptor::NonNegRationals => None,
            ChainDescriptor::Concat { copies, component } => {
                component.cardinality().map(|c| c * copies)
            }
            ChainDescriptor::Reverse(inner) => inner.cardinality(),
            ChainDescriptor::Quotient(shift) => shift.class_representatives().map(|r| r.len()),
        }
    }

    /// All elements in increasing order, for finite chains.
    pub fn elements(&self) -> Option<Vec<ChainValue>> {
        match self {
            ChainDescriptor::Finite(n) => Some((0..*n).map(ChainValue::FiniteAt).collect()),
            ChainDescriptor::Singleton => Some(vec![ChainValue::FiniteAt(0)]),
            ChainDescriptor::Rationals | ChainDescriptor::NonNegRationals => None,
            ChainDescriptor::Concat { copies, component } => {
                let inner = component.elements()?;
                Some(
                    (0..*copies)
                        .flat_map(|i| inner.iter().map(move |v| ChainValue::at(i, v.clone())))
                        .collect(),
                )
            }
            ChainDescriptor::Reverse(inner) => {
                let mut elems: Vec<_> = inner.elements()?.into_iter().map(ChainValue::reversed).collect();
                elems.reverse();
                Some(elems)
            }
            ChainDescriptor::Quotient(shift) => Some(
                shift
                    .class_representatives()?
                    .into_iter()
                    .map(ChainValue::class_of)
                    .collect(),
            ),
        }
    }

    /// Some element of the chain; every descriptor is non-empty.
    pub fn some_point(&self) -> ChainValue {
        match self {
            ChainDescriptor::Finite(_) | ChainDescriptor::Singleton => ChainValue::FiniteAt(0),
            ChainDescriptor::Rationals | ChainDescriptor::NonNegRationals => {
                ChainValue::Rational(Rational::zero())
            }
            ChainDescriptor::Concat { component, .. } => ChainValue::at(0, component.some_point()),
            ChainDescriptor::Reverse(inner) => ChainValue::reversed(inner.some_point()),
            ChainDescriptor::Quotient(shift) => ChainValue::class_of(shift.chain().some_point()),
        }
    }

    /// Draws an element. Rationals come from a small grid (numerators in
    /// `-6..=6`, denominators in `1..=4`) so that iteration witnesses stay
    /// small.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainValue {
        match self {
            ChainDescriptor::Finite(n) => ChainValue::FiniteAt(rng.gen_range(0..*n)),
            ChainDescriptor::Singleton => ChainValue::FiniteAt(0),
            ChainDescriptor::Rationals => ChainValue::q(rng.gen_range(-6..=6), rng.gen_range(1..=4)),
            ChainDescriptor::NonNegRationals => {
                if rng.gen_bool(0.2) {
                    ChainValue::q(0, 1)
                } else {
                    ChainValue::q(rng.gen_range(1..=6), rng.gen_range(1..=4))
                }
            }
            ChainDescriptor::Concat { copies, component } => {
                ChainValue::at(rng.gen_range(0..*copies), component.sample(rng))
            }
            ChainDescriptor::Reverse(inner) => ChainValue::reversed(inner.sample(rng)),
            ChainDescriptor::Quotient(shift) => ChainValue::class_of(shift.chain().sample(rng)),
        }
    }

    /// Collapses finite shapes to `Finite(n)` where the order type is plain.
    pub fn normalized(&self) -> ChainDescriptor {
        match self {
            ChainDescriptor::Singleton => ChainDescriptor::Finite(1),
            ChainDescriptor::Concat { copies, component } => match component.normalized() {
                ChainDescriptor::Finite(k) => ChainDescriptor::Finite(copies * k),
                other if *copies == 1 => other,
                other => ChainDescriptor::concat(*copies, other),
            },
            ChainDescriptor::Reverse(inner) => match inner.normalized() {
                ChainDescriptor::Finite(k) => ChainDescriptor::Finite(k),
                ChainDescriptor::Reverse(x) => *x,
                other => ChainDescriptor::reverse(other),
            },
            other => other.clone(),
        }
    }
}
