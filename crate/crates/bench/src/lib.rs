//! Fixtures shared by the criterion benches.

use wildstream::bench::{bench_pattern, bench_text};
use wildstream::{build_matcher, BuildOptions, EngineKind, Pattern, StreamMatcher, Symbol};

pub struct Fixture {
    pub pattern: Pattern,
    pub text: Vec<Symbol>,
}

impl Fixture {
    pub fn new(m: usize, d: usize, n: usize, seed: u64) -> Self {
        let pattern = bench_pattern(m, d, seed);
        let text = bench_text(&pattern, n, 4, seed);
        Self { pattern, text }
    }

    pub fn matcher(&self, kind: EngineKind) -> Box<dyn StreamMatcher> {
        build_matcher(kind, &self.pattern, &BuildOptions::seeded(7)).expect("valid fixture")
    }

    /// Streams the whole text and returns the number of reports.
    pub fn run(&self, kind: EngineKind) -> usize {
        let mut m = self.matcher(kind);
        self.text
            .iter()
            .filter(|&&c| m.process_char(c).is_some())
            .count()
    }
}
