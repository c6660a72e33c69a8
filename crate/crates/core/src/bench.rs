//! Timing helpers shared by the CLI and the benchmark crate.

use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::StreamMatcher;
use crate::error::Result;
use crate::matchers::{build_matcher, BuildOptions, EngineKind};
use crate::pattern::{Pattern, Symbol};

/// Characters timed together; single-character timings are below clock resolution.
pub const BLOCK: usize = 1024;

/// Latency histogram with 1 ns buckets up to 64 us and one overflow bucket.
#[derive(Debug, Clone)]
pub struct LatencyHistogram {
    counts: Vec<u64>,
    total: u64,
}

const BUCKETS: usize = 1 << 16;

impl Default for LatencyHistogram {
    fn default() -> Self {
        Self {
            counts: vec![0; BUCKETS + 1],
            total: 0,
        }
    }
}

impl LatencyHistogram {
    pub fn record(&mut self, ns: u64) {
        self.counts[(ns as usize).min(BUCKETS)] += 1;
        self.total += 1;
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Nearest-rank percentile; the overflow bucket reads as its lower edge.
    pub fn percentile(&self, pct: f64) -> u64 {
        if self.total == 0 {
            return 0;
        }
        let rank = ((pct / 100.0) * self.total as f64).ceil().max(1.0) as u64;
        let mut seen = 0;
        for (ns, &c) in self.counts.iter().enumerate() {
            seen += c;
            if seen >= rank {
                return ns as u64;
            }
        }
        BUCKETS as u64
    }
}

/// A pattern of length `m` over `{a, b}` with `d` wildcards at random positions.
pub fn bench_pattern(m: usize, d: usize, seed: u64) -> Pattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols: Vec<Option<Symbol>> = (0..m)
        .map(|_| Some(Symbol::from(b'a' + rng.gen_range(0..2))))
        .collect();
    for i in sample(&mut rng, m, d.min(m)) {
        symbols[i] = None;
    }
    Pattern::new(symbols).expect("m >= 1")
}

/// A random text over `{a, b}` with `occurrences` planted copies of `p`.
pub fn bench_text(p: &Pattern, n: usize, occurrences: usize, seed: u64) -> Vec<Symbol> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
    let mut text: Vec<Symbol> = (0..n)
        .map(|_| Symbol::from(b'a' + rng.gen_range(0..2)))
        .collect();
    if n >= p.len() {
        for _ in 0..occurrences {
            let s = rng.gen_range(0..=n - p.len());
            for (k, c) in p.symbols().iter().enumerate() {
                if let Some(c) = c {
                    text[s + k] = *c;
                }
            }
        }
    }
    text
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub engine: EngineKind,
    pub m: usize,
    pub d: usize,
    pub n: usize,
    pub matches: u64,
    pub ns_per_char_p50: f64,
    pub ns_per_char_p99: f64,
    pub words_used_peak: usize,
}

/// Feeds `text` in blocks of [`BLOCK`] characters, timing each block.
pub fn measure(matcher: &mut dyn StreamMatcher, text: &[Symbol]) -> (Vec<f64>, u64) {
    let mut per_char = Vec::with_capacity(text.len() / BLOCK + 1);
    let mut matches = 0;
    for block in text.chunks(BLOCK) {
        let start = Instant::now();
        for &ch in block {
            matches += u64::from(matcher.process_char(ch).is_some());
        }
        per_char.push(start.elapsed().as_nanos() as f64 / block.len() as f64);
    }
    (per_char, matches)
}

pub fn percentile(samples: &[f64], pct: f64) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((pct / 100.0) * v.len() as f64).ceil().max(1.0) as usize;
    v[rank.min(v.len()) - 1]
}

pub fn bench_row(kind: EngineKind, m: usize, d: usize, n: usize, seed: u64) -> Result<BenchRow> {
    let p = bench_pattern(m, d, seed);
    let text = bench_text(&p, n, 4, seed);
    let mut matcher = build_matcher(kind, &p, &BuildOptions::seeded(seed))?;
    let (per_char, matches) = measure(matcher.as_mut(), &text);
    Ok(BenchRow {
        engine: kind,
        m,
        d,
        n,
        matches,
        ns_per_char_p50: percentile(&per_char, 50.0),
        ns_per_char_p99: percentile(&per_char, 99.0),
        words_used_peak: matcher.metrics().words_used_peak,
    })
}
