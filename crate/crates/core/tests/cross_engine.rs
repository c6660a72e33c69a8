use proptest::prelude::*;

use wildstream::{
    build_matcher, oracle_match, run_to_end, secondary_partition, verify_partition_properties,
    BuildOptions, EngineKind, Pattern, Symbol,
};

fn pattern_strategy(max_m: usize, sigma: u8) -> impl Strategy<Value = Pattern> {
    proptest::collection::vec(
        prop_oneof![4 => (0..sigma).prop_map(|c| Some(Symbol::from(b'a' + c))), 1 => Just(None)],
        1..=max_m,
    )
    .prop_map(|s| Pattern::new(s).unwrap())
}

fn text_strategy(max_n: usize, sigma: u8) -> impl Strategy<Value = Vec<Symbol>> {
    proptest::collection::vec((0..sigma).prop_map(|c| Symbol::from(b'a' + c)), 0..=max_n)
}

fn run(kind: EngineKind, p: &Pattern, t: &[Symbol], seed: u64, delta: Option<f64>) -> Vec<usize> {
    let mut opts = BuildOptions::seeded(seed);
    opts.delta = delta;
    let mut m = build_matcher(kind, p, &opts).unwrap();
    run_to_end(m.as_mut(), t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn all_engines_agree_with_oracle(p in pattern_strategy(16, 2), t in text_strategy(160, 2), seed in any::<u64>()) {
        let want = oracle_match(&t, &p).positions;
        for kind in EngineKind::ALL {
            prop_assert_eq!(&run(kind, &p, &t, seed, None), &want, "{}", kind);
        }
    }

    #[test]
    fn tradeoff_agrees_for_any_delta(p in pattern_strategy(24, 3), t in text_strategy(200, 3), delta in 0.0f64..=1.0) {
        let want = oracle_match(&t, &p).positions;
        prop_assert_eq!(run(EngineKind::Tradeoff, &p, &t, 9, Some(delta)), want);
    }

    #[test]
    fn split_keeps_partition_properties(p in pattern_strategy(64, 2), at in 1usize..64) {
        prop_assume!(at < p.len());
        let mut part = secondary_partition(&p);
        part.split_at(at);
        prop_assert!(verify_partition_properties(&p, &part).is_empty());
    }
}

#[test]
fn short_text_never_matches() {
    let p = Pattern::parse("ab?ab?ab").unwrap();
    let t: Vec<Symbol> = b"ab".iter().map(|&b| Symbol::from(b)).collect();
    for kind in EngineKind::ALL {
        assert!(run(kind, &p, &t, 1, None).is_empty(), "{kind}");
    }
}
