use std::cmp::Ordering;
use std::sync::Arc;

use ordrank::chain::{ChainDescriptor, ChainValue};
use ordrank::construct::pools::{sample_nonzero_series, sample_series};
use ordrank::field::HahnSeries;
use ordrank::group::HahnGroupElement;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn groups() -> [Arc<ChainDescriptor>; 2] {
    [Arc::new(ChainDescriptor::Singleton), Arc::new(ChainDescriptor::Finite(2))]
}

fn triple(seed: u64, which: usize) -> (HahnSeries, HahnSeries, HahnSeries) {
    let chain = &groups()[which];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        sample_series(chain, &mut rng, 4),
        sample_series(chain, &mut rng, 4),
        sample_series(chain, &mut rng, 4),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), which in 0usize..2) {
        let (a, b, c) = triple(seed, which);
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.mul(&HahnSeries::one(a.chain())).unwrap(), a.clone());
    }

    #[test]
    fn order_is_compatible(seed in any::<u64>(), which in 0usize..2) {
        let (a, b, c) = triple(seed, which);
        let (a, b) = (a.abs(), b.abs());
        if a.is_positive() && b.is_positive() {
            prop_assert!(a.add(&b).unwrap().is_positive());
            prop_assert!(a.mul(&b).unwrap().is_positive());
        }
        let ab = a.compare(&b).unwrap();
        prop_assert_eq!(a.add(&c).unwrap().compare(&b.add(&c).unwrap()).unwrap(), ab);
        prop_assert_eq!(b.compare(&a).unwrap(), ab.reverse());
    }

    #[test]
    fn ultrametric_and_multiplicative_valuation(seed in any::<u64>(), which in 0usize..2) {
        let chain = &groups()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample_nonzero_series(chain, &mut rng, 4);
        let y = sample_nonzero_series(chain, &mut rng, 4);
        let vx = x.valuation().unwrap();
        let vy = y.valuation().unwrap();
        let vsum = x.mul(&y).unwrap().valuation().unwrap();
        prop_assert_eq!(vsum, vx.add(&vy).unwrap());
        let (x, y) = (x.abs(), y.abs());
        let min = if vx.compare(&vy).unwrap() == Ordering::Greater { vy } else { vx };
        prop_assert_eq!(x.add(&y).unwrap().valuation().unwrap(), min);
    }

    #[test]
    fn truncated_inverse_contract(seed in any::<u64>(), which in 0usize..2, k in 1u32..5) {
        let chain = &groups()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample_nonzero_series(chain, &mut rng, 3);
        let r = s.inverse_truncated(k).unwrap();
        let (g, c) = s.leading().unwrap().clone();
        let head = HahnSeries::monomial(g, c);
        let unit = s.mul(&head.inverse_truncated(1).unwrap()).unwrap();
        let eps = unit.sub(&HahnSeries::one(chain)).unwrap();
        let err = s.mul(&r).unwrap().sub(&HahnSeries::one(chain)).unwrap();
        if eps.is_zero() {
            prop_assert!(err.is_zero());
        } else {
            let expected = eps.valuation().unwrap().scale(&ordrank::rational::int(k as i64));
            prop_assert_eq!(err.valuation().unwrap(), expected);
            prop_assert_eq!(err, eps.neg().pow(k as u64).unwrap().neg());
        }
    }
}

#[test]
fn worked_convolution() {
    let c = Arc::new(ChainDescriptor::Singleton);
    let t = |e: i64, coeff: i64| {
        HahnSeries::monomial(
            HahnGroupElement::monomial(&c, ChainValue::FiniteAt(0), ordrank::rational::int(e)).unwrap(),
            ordrank::rational::int(coeff),
        )
    };
    let mut geometric = HahnSeries::zero(&c);
    for e in 0..5 {
        geometric = geometric.add(&t(e, 1)).unwrap();
    }
    let product = t(0, 1).sub(&t(1, 1)).unwrap().mul(&geometric).unwrap();
    assert_eq!(product, t(0, 1).sub(&t(5, 1)).unwrap());
}
