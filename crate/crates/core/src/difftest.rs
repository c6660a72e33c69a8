//! Differential testing of the streaming matchers against the offline oracle.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::run_to_end;
use crate::error::Result;
use crate::matchers::{build_matcher, BuildOptions, EngineKind};
use crate::pattern::{Pattern, Symbol};
use crate::reference::oracle_match;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Random,
    Unary,
    Periodic,
    Boundary,
    Fibonacci,
    /// Periodic patterns of period at most 4 with a few wildcards.
    SmallPeriod,
}

impl Family {
    pub const ADVERSARIAL: [Family; 4] = [
        Family::Unary,
        Family::Periodic,
        Family::Boundary,
        Family::Fibonacci,
    ];
    pub const MIXED: [Family; 5] = [
        Family::Random,
        Family::Unary,
        Family::Periodic,
        Family::Boundary,
        Family::Fibonacci,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseLimits {
    pub max_m: usize,
    pub max_d: usize,
    pub max_n: usize,
}

impl Default for CaseLimits {
    fn default() -> Self {
        Self {
            max_m: 64,
            max_d: 8,
            max_n: 2048,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub family: Family,
    pub pattern: Pattern,
    pub text: Vec<Symbol>,
}

const ALPHABETS: [u8; 3] = [2, 3, 26];

fn letter(rng: &mut ChaCha8Rng, sigma: u8) -> Symbol {
    Symbol::from(b'a' + rng.gen_range(0..sigma))
}

fn punch(rng: &mut ChaCha8Rng, symbols: &mut [Option<Symbol>], d: usize) {
    for i in sample(rng, symbols.len(), d.min(symbols.len())) {
        symbols[i] = None;
    }
}

fn plant(rng: &mut ChaCha8Rng, text: &mut [Symbol], p: &[Option<Symbol>], sigma: u8, times: usize) {
    if text.len() < p.len() {
        return;
    }
    for _ in 0..times {
        let s = rng.gen_range(0..=text.len() - p.len());
        for (k, c) in p.iter().enumerate() {
            text[s + k] = c.unwrap_or_else(|| letter(rng, sigma));
        }
    }
}

fn fibonacci_word(len: usize) -> Vec<Symbol> {
    let (mut a, mut b) = (vec![b'a' as Symbol], vec![b'a' as Symbol, b'b' as Symbol]);
    while b.len() < len {
        let next: Vec<Symbol> = b.iter().chain(&a).copied().collect();
        a = std::mem::replace(&mut b, next);
    }
    b.truncate(len);
    b
}

fn random_case(rng: &mut ChaCha8Rng, lim: &CaseLimits, force_boundary: bool) -> Case {
    let sigma = ALPHABETS[rng.gen_range(0..ALPHABETS.len())];
    let m = rng.gen_range(1..=lim.max_m);
    let d = rng.gen_range(0..=m.min(lim.max_d));
    let mut symbols: Vec<Option<Symbol>> = (0..m).map(|_| Some(letter(rng, sigma))).collect();
    punch(rng, &mut symbols, d);
    if force_boundary {
        match rng.gen_range(0..3) {
            0 => symbols[0] = None,
            1 => symbols[m - 1] = None,
            _ => {
                symbols[0] = None;
                symbols[m - 1] = None;
            }
        }
    }
    let n = rng.gen_range(m..=lim.max_n.max(m));
    let mut text: Vec<Symbol> = (0..n).map(|_| letter(rng, sigma)).collect();
    let times = rng.gen_range(0..=4);
    plant(rng, &mut text, &symbols, sigma, times);
    Case {
        family: if force_boundary {
            Family::Boundary
        } else {
            Family::Random
        },
        pattern: Pattern::new(symbols).expect("m >= 1"),
        text,
    }
}

fn unary_case(rng: &mut ChaCha8Rng, lim: &CaseLimits) -> Case {
    let a = Some(b'a' as Symbol);
    loop {
        let k = rng.gen_range(1..=8);
        let j = rng.gen_range(0..=lim.max_d.min(8));
        let mut symbols = Vec::new();
        for _ in 0..j {
            symbols.extend(std::iter::repeat(a).take(k));
            symbols.push(None);
        }
        symbols.extend(std::iter::repeat(a).take(k));
        if symbols.len() > lim.max_m {
            continue;
        }
        let n = rng.gen_range(symbols.len()..=lim.max_n.max(symbols.len()));
        return Case {
            family: Family::Unary,
            pattern: Pattern::new(symbols).expect("non-empty"),
            text: vec![b'a' as Symbol; n],
        };
    }
}

// Substring of `source` (cyclically) with punched wildcards and an occasional mismatch.
fn pattern_from(
    rng: &mut ChaCha8Rng,
    source: &[Symbol],
    lim: &CaseLimits,
    sigma: u8,
) -> Vec<Option<Symbol>> {
    let m = rng.gen_range(1..=lim.max_m);
    let start = rng.gen_range(0..source.len());
    let mut symbols: Vec<Option<Symbol>> = (0..m)
        .map(|k| Some(source[(start + k) % source.len()]))
        .collect();
    let d = rng.gen_range(0..=m.min(lim.max_d));
    punch(rng, &mut symbols, d);
    if rng.gen_bool(0.2) {
        let i = rng.gen_range(0..m);
        if symbols[i].is_some() {
            symbols[i] = Some(letter(rng, sigma));
        }
    }
    symbols
}

fn periodic_case(rng: &mut ChaCha8Rng, lim: &CaseLimits) -> Case {
    let period = rng.gen_range(2..=3);
    let sigma = 3;
    let base: Vec<Symbol> = (0..period).map(|_| letter(rng, sigma)).collect();
    let n = rng.gen_range(1..=lim.max_n);
    let mut text: Vec<Symbol> = (0..n).map(|k| base[k % period]).collect();
    if rng.gen_bool(0.3) {
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..n);
            text[i] = letter(rng, sigma);
        }
    }
    let symbols = pattern_from(
        rng,
        &base.repeat(lim.max_m.div_ceil(period) + 1),
        lim,
        sigma,
    );
    Case {
        family: Family::Periodic,
        pattern: Pattern::new(symbols).expect("non-empty"),
        text,
    }
}

fn fibonacci_case(rng: &mut ChaCha8Rng, lim: &CaseLimits) -> Case {
    let word = fibonacci_word(lim.max_n.max(lim.max_m) + 1);
    let n = rng.gen_range(1..=lim.max_n);
    let symbols = pattern_from(rng, &word[..word.len() - 1], lim, 2);
    Case {
        family: Family::Fibonacci,
        pattern: Pattern::new(symbols).expect("non-empty"),
        text: word[..n].to_vec(),
    }
}

fn small_period_case(rng: &mut ChaCha8Rng, lim: &CaseLimits) -> Case {
    let period = rng.gen_range(1..=4);
    let sigma = 3;
    let base: Vec<Symbol> = (0..period).map(|_| letter(rng, sigma)).collect();
    let m = rng.gen_range(1..=lim.max_m.min(24));
    let offset = rng.gen_range(0..period);
    let mut symbols: Vec<Option<Symbol>> =
        (0..m).map(|k| Some(base[(offset + k) % period])).collect();
    let d = rng.gen_range(0..=3.min(m));
    punch(rng, &mut symbols, d);
    let n = rng.gen_range(m..=lim.max_n.max(m));
    let mut text: Vec<Symbol> = (0..n).map(|k| base[k % period]).collect();
    for _ in 0..rng.gen_range(0..=n / 16 + 1) {
        let i = rng.gen_range(0..n);
        text[i] = letter(rng, sigma);
    }
    let times = rng.gen_range(0..=2);
    plant(rng, &mut text, &symbols, sigma, times);
    Case {
        family: Family::SmallPeriod,
        pattern: Pattern::new(symbols).expect("m >= 1"),
        text,
    }
}

pub fn generate_case(family: Family, rng: &mut ChaCha8Rng, lim: &CaseLimits) -> Case {
    match family {
        Family::Random => random_case(rng, lim, false),
        Family::Boundary => random_case(rng, lim, true),
        Family::Unary => unary_case(rng, lim),
        Family::Periodic => periodic_case(rng, lim),
        Family::Fibonacci => fibonacci_case(rng, lim),
        Family::SmallPeriod => small_period_case(rng, lim),
    }
}

/// Case `index` of a seeded run; independent of how many cases are generated.
pub fn case_at(seed: u64, index: usize, families: &[Family], lim: &CaseLimits) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    generate_case(families[index % families.len()], &mut rng, lim)
}

pub fn symbols_to_string(s: &[Symbol]) -> String {
    s.iter()
        .map(|&c| match u8::try_from(c) {
            Ok(b) if b.is_ascii_graphic() => b as char,
            _ => char::REPLACEMENT_CHARACTER,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub case_index: usize,
    pub engine: EngineKind,
    pub family: Family,
    pub pattern: String,
    pub text: String,
    pub expected: Vec<usize>,
    pub got: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct EngineRun {
    pub kind: EngineKind,
    pub opts: BuildOptions,
}

fn run_engine(run: &EngineRun, p: &Pattern, text: &[Symbol]) -> Result<Vec<usize>> {
    let mut m = build_matcher(run.kind, p, &run.opts)?;
    Ok(run_to_end(m.as_mut(), text))
}

fn diverges(run: &EngineRun, p: &Pattern, text: &[Symbol]) -> bool {
    run_engine(run, p, text).map_or(true, |got| got != oracle_match(text, p).positions)
}

/// Compares one engine with the oracle on one case.
pub fn check_case(index: usize, case: &Case, run: &EngineRun) -> Option<Divergence> {
    let expected = oracle_match(&case.text, &case.pattern).positions;
    let got = run_engine(run, &case.pattern, &case.text).unwrap_or_else(|_| vec![usize::MAX]);
    (got != expected).then(|| Divergence {
        case_index: index,
        engine: run.kind,
        family: case.family,
        pattern: case.pattern.to_string(),
        text: symbols_to_string(&case.text),
        expected,
        got,
    })
}

/// Greedily shortens the text of a diverging case while it keeps diverging.
pub fn shrink(case: &Case, run: &EngineRun) -> Case {
    let p = &case.pattern;
    let mut text = case.text.clone();
    if !diverges(run, p, &text) {
        return case.clone();
    }
    // outputs up to a position depend only on the prefix read so far
    let expected = oracle_match(&text, p).positions;
    let got = run_engine(run, p, &text).unwrap_or_default();
    let first_bad = expected
        .iter()
        .chain(&got)
        .filter(|s| expected.contains(s) != got.contains(s))
        .min()
        .copied();
    if let Some(s) = first_bad {
        text.truncate((s + p.len()).min(text.len()));
    }
    let mut chunk = text.len() / 2;
    while chunk >= 1 {
        let mut i = 0;
        while i + chunk <= text.len() {
            let mut trial = text.clone();
            trial.drain(i..i + chunk);
            if diverges(run, p, &trial) {
                text = trial;
            } else {
                i += chunk;
            }
        }
        chunk /= 2;
    }
    Case {
        family: case.family,
        pattern: p.clone(),
        text,
    }
}

#[derive(Debug, Clone)]
pub struct DiffConfig {
    pub seed: u64,
    pub count: usize,
    pub families: Vec<Family>,
    pub limits: CaseLimits,
    pub runs: Vec<EngineRun>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffSummary {
    pub cases: usize,
    pub checks: usize,
    pub divergences: usize,
    /// First divergence in case order, with the text shrunk.
    pub first: Option<Divergence>,
}

pub fn run_difftest(cfg: &DiffConfig) -> DiffSummary {
    let found: Vec<(Divergence, usize)> = (0..cfg.count)
        .into_par_iter()
        .flat_map_iter(|i| {
            let case = case_at(cfg.seed, i, &cfg.families, &cfg.limits);
            cfg.runs
                .iter()
                .enumerate()
                .filter_map(move |(r, run)| check_case(i, &case, run).map(|d| (d, r)))
                .collect::<Vec<_>>()
        })
        .collect();
    let first = found
        .iter()
        .min_by_key(|(d, r)| (d.case_index, *r))
        .map(|(d, r)| {
            let run = &cfg.runs[*r];
            let case = case_at(cfg.seed, d.case_index, &cfg.families, &cfg.limits);
            let small = shrink(&case, run);
            check_case(d.case_index, &small, run).unwrap_or_else(|| d.clone())
        });
    DiffSummary {
        cases: cfg.count,
        checks: cfg.count * cfg.runs.len(),
        divergences: found.len(),
        first,
    }
}
