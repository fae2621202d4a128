//! Deterministic element pools for samplers and oracles.
//!
//! Random samplers draw support points with [`ChainDescriptor::sample`] and
//! small rational coefficients; seed a `ChaCha8Rng` for reproducibility.
//! The exhaustive pool on `Finite(n)` uses coefficients `{-2, -1, 1, 2}`
//! and at most five support points.

use std::sync::Arc;

use num_traits::Signed;
use rand::Rng;

use crate::chain::{ChainDescriptor, ChainValue};
use crate::field::HahnSeries;
use crate::group::HahnGroupElement;
use crate::rational::{int, rat, Rational};

/// Coefficients of the exhaustive pool.
pub const POOL_COEFFICIENTS: [i64; 4] = [-2, -1, 1, 2];

/// Maximum support size of the exhaustive pool.
pub const POOL_MAX_TERMS: usize = 5;

fn sample_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let n = loop {
        let n = rng.gen_range(-3i64..=3);
        if n != 0 {
            break n;
        }
    };
    rat(n, rng.gen_range(1i64..=2))
}

/// A group element with up to `max_terms` terms; may be zero.
pub fn sample_group_element<R: Rng + ?Sized>(
    chain: &Arc<ChainDescriptor>,
    rng: &mut R,
    max_terms: usize,
) -> HahnGroupElement {
    let k = rng.gen_range(0..=max_terms);
    let terms: Vec<_> = (0..k).map(|_| (chain.sample(rng), sample_coefficient(rng))).collect();
    HahnGroupElement::from_terms(chain, terms).expect("sampled points lie in the chain")
}

pub fn sample_nonzero_group_element<R: Rng + ?Sized>(
    chain: &Arc<ChainDescriptor>,
    rng: &mut R,
    max_terms: usize,
) -> HahnGroupElement {
    loop {
        let g = sample_group_element(chain, rng, max_terms.max(1));
        if !g.is_zero() {
            return g;
        }
    }
}

/// A series with up to `max_terms` terms, exponents drawn from group
/// elements with at most two terms; may be zero.
pub fn sample_series<R: Rng + ?Sized>(chain: &Arc<ChainDescriptor>, rng: &mut R, max_terms: usize) -> HahnSeries {
    let k = rng.gen_range(0..=max_terms);
    let terms: Vec<_> = (0..k)
        .map(|_| (sample_group_element(chain, rng, 2), sample_coefficient(rng)))
        .collect();
    HahnSeries::from_terms(chain, terms).expect("exponents share the chain")
}

pub fn sample_nonzero_series<R: Rng + ?Sized>(chain: &Arc<ChainDescriptor>, rng: &mut R, max_terms: usize) -> HahnSeries {
    loop {
        let s = sample_series(chain, rng, max_terms.max(1));
        if !s.is_zero() {
            return s;
        }
    }
}

/// A positive infinite series: a negative leading exponent with a positive
/// coefficient followed by up to `max_terms - 1` higher terms.
pub fn sample_p_k<R: Rng + ?Sized>(chain: &Arc<ChainDescriptor>, rng: &mut R, max_terms: usize) -> HahnSeries {
    let lead = sample_nonzero_group_element(chain, rng, 2).abs().neg();
    let lead_coeff = sample_coefficient(rng).abs();
    let mut terms = vec![(lead.clone(), lead_coeff)];
    for _ in 1..max_terms.max(1) {
        if rng.gen_bool(0.5) {
            continue;
        }
        let e = sample_group_element(chain, rng, 2);
        if e.compare(&lead).expect("same chain") == std::cmp::Ordering::Greater {
            terms.push((e, sample_coefficient(rng)));
        }
    }
    HahnSeries::from_terms(chain, terms).expect("exponents share the chain")
}

/// Every group element over `Finite(n)` with coefficients in
/// [`POOL_COEFFICIENTS`] and at most [`POOL_MAX_TERMS`] support points,
/// including zero.
pub fn exhaustive_group_pool(n: usize) -> Vec<HahnGroupElement> {
    let chain = Arc::new(ChainDescriptor::Finite(n));
    let mut out = Vec::new();
    let mut current: Vec<(ChainValue, Rational)> = Vec::new();
    fn rec(
        chain: &Arc<ChainDescriptor>,
        n: usize,
        next: usize,
        current: &mut Vec<(ChainValue, Rational)>,
        out: &mut Vec<HahnGroupElement>,
    ) {
        out.push(HahnGroupElement::from_terms(chain, current.clone()).expect("points lie in the chain"));
        if current.len() == POOL_MAX_TERMS {
            return;
        }
        for i in next..n {
            for c in POOL_COEFFICIENTS {
                current.push((ChainValue::FiniteAt(i), int(c)));
                rec(chain, n, i + 1, current, out);
                current.pop();
            }
        }
    }
    rec(&chain, n, 0, &mut current, &mut out);
    out
}

/// Monomials `c·t^(e·1_i)` over `Finite(n)` with `c, e` drawn from
/// [`POOL_COEFFICIENTS`], plus the constants.
pub fn monomial_series_pool(n: usize) -> Vec<HahnSeries> {
    let chain = Arc::new(ChainDescriptor::Finite(n));
    let mut out = Vec::new();
    for c in POOL_COEFFICIENTS {
        out.push(HahnSeries::constant(&chain, int(c)));
        for i in 0..n {
            for e in POOL_COEFFICIENTS {
                let g = HahnGroupElement::monomial(&chain, ChainValue::FiniteAt(i), int(e)).expect("point in chain");
                out.push(HahnSeries::monomial(g, int(c)));
            }
        }
    }
    out
}
