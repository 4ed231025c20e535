//! Property tests over randomly generated matrices: every run stabilizes
//! within the step bound and splits cleanly into an erratic phase and a
//! lock, and the JSON wire form is a faithful round trip.

mod common;

use giving_game::engine::{play, ChoicePolicy};
use giving_game::frame::frame_of;
use giving_game::generate::{generate, GeneratorSpec};
use giving_game::io::{matrix_from_json, matrix_to_json};
use giving_game::matrix::AgentId;
use giving_game::stability::{classify_pair, split_phases, stabilization_bound, PairClass};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    // Whatever the matrix, start, and choice seed: the run reaches its
    // boundary within n(n-1)MAX + 1 steps, the erratic prefix walks the
    // initial frame with white mirrors, and the locked pair is not white.
    #[test]
    fn every_run_stabilizes_and_splits(
        n in 2usize..=6,
        max_value in 0u64..=5,
        seed in any::<u64>(),
        policy_seed in any::<u64>(),
        start_pick in any::<usize>(),
    ) {
        let m = generate(&GeneratorSpec::Random { n, max_value, seed }).unwrap();
        let start = AgentId(start_pick % n);
        let bound = stabilization_bound(&m) as usize;
        let t = play(&m, start, &ChoicePolicy::SeededRandom(policy_seed), bound).unwrap();
        prop_assert!(t.is_stabilized(), "no boundary within {bound} steps");
        let split = split_phases(&t).unwrap();
        let f = frame_of(&m);
        for st in &split.erratic {
            prop_assert!(f.has_edge(st.submitter, st.receiver));
            prop_assert!(!st.twin_blue);
        }
        prop_assert!(t.steps()[split.boundary].twin_blue);
        let class = classify_pair(&m, split.pair.lo(), split.pair.hi()).unwrap();
        prop_assert!(class != PairClass::WhitePair);
    }

    // Serialize, parse, serialize again: same matrix, same bytes.
    #[test]
    fn matrix_wire_form_round_trips(
        n in 2usize..=7,
        max_value in 0u64..=9,
        seed in any::<u64>(),
    ) {
        let m = generate(&GeneratorSpec::Random { n, max_value, seed }).unwrap();
        let json = matrix_to_json(&m);
        let back = matrix_from_json(&json).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(matrix_to_json(&back), json);
    }
}
