use std::sync::Arc;

use ordrank::chain::{enumerate_final_segments, ChainDescriptor, ChainShift, FinalSegmentCut, ShiftMap};
use ordrank::construct::{build_omega_increasing_example, oracle_verify_rank_correspondences, oracle_verify_theorem3, RelationKind};
use ordrank::field::{AutomorphismTower, ConvexValuation};
use ordrank::rank::{sigma_principal_intersection, OrderType};

#[test]
fn correspondences_hold_up_to_eight_points() {
    for n in 1..=8 {
        let report = oracle_verify_rank_correspondences(n).unwrap();
        assert!(report.passed(), "{}", report.to_json_lines());
    }
}

#[test]
fn identity_makes_every_segment_compatible() {
    for n in 1..=8 {
        let chain = Arc::new(ChainDescriptor::Finite(n));
        let tower = AutomorphismTower::identity(&chain);
        for segment in enumerate_final_segments(&chain).unwrap() {
            assert!(ConvexValuation::new(&chain, segment).is_sigma_compatible(&tower).unwrap());
        }
    }
}

#[test]
fn strict_left_shifts_move_every_principal_segment() {
    let ex = build_omega_increasing_example(3).unwrap();
    assert_eq!(sigma_principal_intersection(ex.shift()).unwrap().order_type, OrderType::Empty);
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
    for _ in 0..50 {
        let gamma = ex.chain().sample(&mut rng);
        let w = ConvexValuation::new(ex.chain(), FinalSegmentCut::AtOrAbove(gamma));
        assert!(!w.is_sigma_compatible(ex.tower()).unwrap());
    }
}

#[test]
fn initial_segment_round_trips() {
    let finite = ChainShift::identity(ChainDescriptor::Finite(3));
    assert!(oracle_verify_theorem3(&finite, RelationKind::Mult, 64).unwrap().passed());
    for m in [2, 3] {
        let chain = ChainDescriptor::concat(m, ChainDescriptor::Rationals);
        let shift = ChainShift::new(chain, ShiftMap::per_copy(ShiftMap::Translate(ordrank::rational::int(-1)))).unwrap();
        let report = oracle_verify_theorem3(&shift, RelationKind::Sigma, 64).unwrap();
        assert!(report.passed(), "{}", report.to_json_lines());
    }
}
