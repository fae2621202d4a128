use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::chain::ChainDescriptor;
use crate::group::{same_chain, HahnGroupElement};
use crate::rational::{format_rational, Rational};
use crate::{Error, Result};

/// A finite-support series `Σ s_g t^g` over the Hahn group on `chain`.
///
/// Terms are sorted strictly increasing by exponent with no zero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HahnSeries {
    chain: Arc<ChainDescriptor>,
    terms: Vec<(HahnGroupElement, Rational)>,
}

fn sort_and_merge(mut terms: Vec<(HahnGroupElement, Rational)>) -> Result<Vec<(HahnGroupElement, Rational)>> {
    let mut failure = None;
    terms.sort_by(|(a, _), (b, _)| {
        a.compare(b).unwrap_or_else(|e| {
            failure.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut merged: Vec<(HahnGroupElement, Rational)> = Vec::with_capacity(terms.len());
    for (g, c) in terms {
        match merged.last_mut() {
            Some((last, acc)) if *last == g => *acc += c,
            _ => merged.push((g, c)),
        }
    }
    merged.retain(|(_, c)| !c.is_zero());
    Ok(merged)
}

impl HahnSeries {
    pub fn zero(chain: &Arc<ChainDescriptor>) -> Self {
        HahnSeries {
            chain: chain.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(chain: &Arc<ChainDescriptor>, c: Rational) -> Self {
        Self::monomial(HahnGroupElement::zero(chain), c)
    }

    pub fn one(chain: &Arc<ChainDescriptor>) -> Self {
        Self::constant(chain, Rational::one())
    }

    /// `c·t^g`.
    pub fn monomial(exponent: HahnGroupElement, c: Rational) -> Self {
        let chain = exponent.chain().clone();
        let terms = if c.is_zero() { Vec::new() } else { vec![(exponent, c)] };
        HahnSeries { chain, terms }
    }

    pub fn from_terms(
        chain: &Arc<ChainDescriptor>,
        terms: impl IntoIterator<Item = (HahnGroupElement, Rational)>,
    ) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        for (g, _) in &terms {
            same_chain(chain, g.chain())?;
        }
        Ok(HahnSeries {
            chain: chain.clone(),
            terms: sort_and_merge(terms)?,
        })
    }

    pub fn chain(&self) -> &Arc<ChainDescriptor> {
        &self.chain
    }

    pub fn terms(&self) -> &[(HahnGroupElement, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(HahnGroupElement, Rational)> {
        self.terms.first()
    }

    pub fn sign(&self) -> Ordering {
        self.terms
            .first()
            .map_or(Ordering::Equal, |(_, c)| c.cmp(&Rational::zero()))
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    /// The natural valuation: the least exponent.
    pub fn valuation(&self) -> Result<HahnGroupElement> {
        self.terms.first().map(|(g, _)| g.clone()).ok_or(Error::ZeroSeries)
    }

    /// Positive and infinitely large: `s > 0` and `v(s) < 0`.
    pub fn in_p_k(&self) -> bool {
        match self.terms.first() {
            Some((g, c)) => c > &Rational::zero() && g.sign() == Ordering::Less,
            None => false,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_chain(&self.chain, &other.chain)?;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, c) = &self.terms[i];
            let (b, d) = &other.terms[j];
            match a.compare(b)? {
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
        Ok(HahnSeries {
            chain: self.chain.clone(),
            terms: out,
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(&self.chain);
        }
        HahnSeries {
            chain: self.chain.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * q)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        same_chain(&self.chain, &other.chain)?;
        let mut products = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (g, c) in &self.terms {
            for (h, d) in &other.terms {
                products.push((g.add(h)?, c * d));
            }
        }
        Ok(HahnSeries {
            chain: self.chain.clone(),
            terms: sort_and_merge(products)?,
        })
    }

    pub fn pow(&self, mut n: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one(&self.chain);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Lexicographic comparison: the sign of the leading coefficient of the
    /// difference, found by a merge walk.
    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        same_chain(&self.chain, &other.chain)?;
        let zero = Rational::zero();
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.terms.get(i), other.terms.get(j)) {
                (None, None) => return Ok(Ordering::Equal),
                (Some((_, c)), None) => return Ok(c.cmp(&zero)),
                (None, Some((_, d))) => return Ok(zero.cmp(d)),
                (Some((a, c)), Some((b, d))) => match a.compare(b)? {
                    Ordering::Less => return Ok(c.cmp(&zero)),
                    Ordering::Greater => return Ok(zero.cmp(d)),
                    Ordering::Equal if c != d => return Ok(c.cmp(d)),
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }

    /// Truncated inverse. Writing `s = c·t^g·(1 + ε)` with `v(ε) > 0`, returns
    /// `r = c⁻¹·t^(-g)·Σ_{i<k} (-ε)^i`, so that `s·r - 1 = -(-ε)^k`. The
    /// inverse is exact when `s` is a monomial.
    pub fn inverse_truncated(&self, k: u32) -> Result<Self> {
        let (g, c) = self.leading().ok_or(Error::ZeroSeries)?;
        if k == 0 {
            return Err(Error::DomainMismatch("truncation order must be positive".into()));
        }
        let head_inv = HahnSeries::monomial(g.neg(), c.recip());
        let unit = self.mul(&head_inv)?;
        let minus_eps = Self::one(&self.chain).sub(&unit)?;
        let mut sum = Self::one(&self.chain);
        let mut power = Self::one(&self.chain);
        for _ in 1..k {
            power = power.mul(&minus_eps)?;
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        head_inv.mul(&sum)
    }

    /// Applies an order-preserving bijection of the exponent group.
    pub(crate) fn map_exponents(&self, f: impl Fn(&HahnGroupElement) -> Result<HahnGroupElement>) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(g, c)| Ok((f(g)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(HahnSeries {
            chain: self.chain.clone(),
            terms,
        })
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub(crate) fn restrict(&self, keep: impl Fn(&HahnGroupElement) -> Result<bool>) -> Result<Self> {
        let mut terms = Vec::new();
        for (g, c) in &self.terms {
            if keep(g)? {
                terms.push((g.clone(), c.clone()));
            }
        }
        Ok(HahnSeries {
            chain: self.chain.clone(),
            terms,
        })
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| {
                if g.is_zero() {
                    format_rational(c)
                } else {
                    format!("{}*t^({g})", format_rational(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Serialized as a list of `[exponent, "p/q"]` pairs sorted by exponent,
/// each exponent in the Hahn group's own pair-list form.
impl Serialize for HahnSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(g, c)| (g, format_rational(c))))
    }
}
