use proptest::prelude::*;

use wildstream::offset::cover::verify_cover;
use wildstream::offset::{build_prime_cover, gamma_size, EqualLengthDictionary, DUMMY_ID};
use wildstream::{
    oracle_match, run_to_end, wildcard_period_length, FieldParams, Pattern, SmallWpMatcher, Symbol,
};

fn pattern_strategy(max_m: usize, sigma: u8) -> impl Strategy<Value = Pattern> {
    proptest::collection::vec(
        prop_oneof![3 => (0..sigma).prop_map(|c| Some(Symbol::from(b'a' + c))), 1 => Just(None)],
        1..=max_m,
    )
    .prop_map(|s| Pattern::new(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn column_table_within_twice_pi(p in pattern_strategy(14, 3)) {
        let pi = wildcard_period_length(&p).unwrap();
        for q in 1..=2 * p.len() {
            prop_assert!(gamma_size(&p, q) <= 2 * pi, "q {} gamma {} pi {}", q, gamma_size(&p, q), pi);
        }
    }

    #[test]
    fn small_period_matcher_is_exact(
        p in pattern_strategy(18, 2),
        t in proptest::collection::vec((0u8..2).prop_map(|c| Symbol::from(b'a' + c)), 0..300),
        seed in any::<u64>(),
    ) {
        let mut m = SmallWpMatcher::new(&p, FieldParams::from_seed(seed)).unwrap();
        prop_assert_eq!(run_to_end(&mut m, &t), oracle_match(&t, &p).positions);
    }

    #[test]
    fn covers_are_certified(m in 1usize..600, raw in proptest::collection::vec(any::<prop::sample::Index>(), 0..20), seed in any::<u64>()) {
        let mut w: Vec<usize> = raw.iter().map(|i| i.index(m)).collect();
        w.sort_unstable();
        w.dedup();
        let c = build_prime_cover(m, &w, seed);
        prop_assert_eq!(verify_cover(m, &w, &c.primes), Some(c.witness.clone()));
        for (j, wit) in c.witness.iter().enumerate() {
            prop_assert_eq!(wit.is_none(), w.contains(&j));
        }
    }
}

#[test]
fn dictionary_is_deterministic() {
    let entries: Vec<Vec<Symbol>> = vec![vec![1, 2, 3], vec![3, 2, 1]];
    let mk = || {
        EqualLengthDictionary::new(
            FieldParams::from_seed(4),
            3,
            2,
            entries.iter().map(|e| e.as_slice()).zip(1..),
        )
    };
    let stream: Vec<Symbol> = vec![1, 9, 2, 9, 3, 9, 2, 9, 1];
    let run = |mut d: EqualLengthDictionary| -> Vec<u64> {
        stream
            .iter()
            .enumerate()
            .map(|(a, &c)| d.process(a, c))
            .collect()
    };
    let first = run(mk());
    assert_eq!(first, run(mk()));
    // even residue reads 1,2,3,2,1
    assert_eq!(first, vec![DUMMY_ID, 0, 0, 0, 1, 0, 0, 0, 2]);
}
