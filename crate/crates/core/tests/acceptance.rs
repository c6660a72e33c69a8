//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if a
//! hard criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use wildstream::bench::{bench_pattern, bench_text, measure, percentile};
use wildstream::difftest::{case_at, run_difftest, CaseLimits, DiffConfig, EngineRun, Family};
use wildstream::offset::cover::{next_prime, verify_cover, MAX_RESAMPLE_ROUNDS};
use wildstream::offset::instance::column;
use wildstream::partition::{ceil_log2, interval_count_bound};
use wildstream::{
    build_matcher, build_prime_cover, gamma_size, oracle_match, run_to_end, secondary_partition,
    verify_partition_properties, wildcard_period_length, BuildOptions, EngineKind, EngineOptions,
    FieldParams, MatcherState, OffsetInstance, Pattern, StreamMatcher, Symbol,
};

const SEED: u64 = 0x5EED_0001;

struct Outcome {
    pass: bool,
    soft: bool,
    detail: String,
}

fn hard(pass: bool, detail: String) -> Outcome {
    Outcome {
        pass,
        soft: false,
        detail,
    }
}

fn thm1_runs(shadow: bool) -> Vec<EngineRun> {
    let mut opts = BuildOptions::seeded(SEED);
    opts.engine = EngineOptions {
        shadow,
        ..EngineOptions::default()
    };
    vec![EngineRun {
        kind: EngineKind::Thm1,
        opts,
    }]
}

fn random_cfg(count: usize, limits: CaseLimits, runs: Vec<EngineRun>) -> DiffConfig {
    DiffConfig {
        seed: SEED,
        count,
        families: vec![Family::Random],
        limits,
        runs,
    }
}

fn adversarial_cfg(count: usize, runs: Vec<EngineRun>) -> DiffConfig {
    DiffConfig {
        seed: SEED ^ 1,
        count,
        families: Family::ADVERSARIAL.to_vec(),
        limits: CaseLimits::default(),
        runs,
    }
}

const ADVERSARIAL_CASES: usize = 2_000;

fn oracle_equivalence_thm1() -> Outcome {
    let start = Instant::now();
    let random = run_difftest(&random_cfg(10_000, CaseLimits::default(), thm1_runs(false)));
    let adversarial = run_difftest(&adversarial_cfg(ADVERSARIAL_CASES, thm1_runs(false)));
    let secs = start.elapsed().as_secs_f64();
    let divergences = random.divergences + adversarial.divergences;
    let mut detail = format!(
        "{} random + {} adversarial cases, {divergences} divergences, {secs:.1} s",
        random.cases, adversarial.cases
    );
    if let Some(d) = random.first.or(adversarial.first) {
        detail += &format!("; first: {d:?}");
    }
    hard(divergences == 0 && secs < 60.0, detail)
}

fn explicit_budget(p: &Pattern) -> usize {
    16 * (p.wildcard_count() + 1) * (ceil_log2(p.len()) + 1)
}

fn space_budget() -> Outcome {
    let families = Family::ADVERSARIAL;
    let lim = CaseLimits::default();
    let worst = (0..ADVERSARIAL_CASES)
        .into_par_iter()
        .map(|i| {
            let case = case_at(SEED ^ 1, i, &families, &lim);
            let mut m =
                MatcherState::preprocess(&case.pattern, FieldParams::from_seed(SEED)).unwrap();
            run_to_end(&mut m, &case.text);
            let used = m.snapshot_metrics().max_total_explicit;
            let unit = (case.pattern.wildcard_count() + 1) * (ceil_log2(case.pattern.len()) + 1);
            (
                used as f64 / unit as f64,
                used,
                explicit_budget(&case.pattern),
                i,
            )
        })
        .collect::<Vec<_>>();
    let over = worst.iter().filter(|w| w.1 > w.2).count();
    let max = worst.iter().map(|w| w.0).fold(0.0, f64::max);
    hard(
        over == 0,
        format!("{over} cases over budget; measured max explicit / ((d+1)(ceil(log2 m)+1)) = {max:.3} (C = 16)"),
    )
}

fn progression_invariant() -> Outcome {
    let families = [Family::Random]
        .into_iter()
        .chain(Family::ADVERSARIAL)
        .collect::<Vec<_>>();
    let lim = CaseLimits::default();
    let (violations, fallbacks): (u64, u64) = (0..10_000 + ADVERSARIAL_CASES)
        .into_par_iter()
        .map(|i| {
            let case = if i < 10_000 {
                case_at(SEED, i, &families[..1], &lim)
            } else {
                case_at(SEED ^ 1, i - 10_000, &families[1..], &lim)
            };
            let opts = EngineOptions {
                shadow: true,
                ..EngineOptions::default()
            };
            let mut m =
                MatcherState::with_options(&case.pattern, FieldParams::from_seed(SEED), opts)
                    .unwrap();
            run_to_end(&mut m, &case.text);
            let metrics = m.snapshot_metrics();
            (metrics.progression_violations, metrics.fallbacks)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    hard(
        violations == 0,
        format!(
            "{violations} shadow violations over {} runs ({fallbacks} spacing fallbacks)",
            10_000 + ADVERSARIAL_CASES
        ),
    )
}

fn small_period_cases(count: usize) -> Vec<wildstream::difftest::Case> {
    let lim = CaseLimits {
        max_m: 24,
        max_d: 3,
        max_n: 512,
    };
    (0..count)
        .map(|i| case_at(SEED ^ 2, i, &[Family::SmallPeriod], &lim))
        .collect()
}

fn oracle_equivalence_smallwp() -> Outcome {
    let cases = small_period_cases(2_000);
    let bad: Vec<usize> = cases
        .par_iter()
        .enumerate()
        .filter_map(|(i, case)| {
            let pi = wildcard_period_length(&case.pattern).unwrap();
            assert!(pi >= 1);
            let mut m = build_matcher(
                EngineKind::SmallWp,
                &case.pattern,
                &BuildOptions::seeded(SEED),
            )
            .unwrap();
            let got = run_to_end(m.as_mut(), &case.text);
            (got != oracle_match(&case.text, &case.pattern).positions).then_some(i)
        })
        .collect();
    hard(
        bad.is_empty(),
        format!(
            "2000 periodic cases, {} divergences {:?}",
            bad.len(),
            &bad[..bad.len().min(5)]
        ),
    )
}

fn oracle_equivalence_tradeoff() -> Outcome {
    let lim = CaseLimits {
        max_m: 32,
        ..CaseLimits::default()
    };
    let mut total = 0;
    let mut detail = Vec::new();
    for delta in [0.0, 0.5, 1.0] {
        let mut opts = BuildOptions::seeded(SEED);
        opts.delta = Some(delta);
        let cfg = DiffConfig {
            seed: SEED ^ 3,
            count: 2_000,
            families: Family::MIXED.to_vec(),
            limits: lim,
            runs: vec![EngineRun {
                kind: EngineKind::Tradeoff,
                opts,
            }],
        };
        let s = run_difftest(&cfg);
        total += s.divergences;
        detail.push(format!("delta {delta}: {}", s.divergences));
        if let Some(d) = s.first {
            detail.push(format!("{d:?}"));
        }
    }
    hard(
        total == 0,
        format!("2000 cases per delta, divergences {}", detail.join(", ")),
    )
}

fn random_pattern(rng: &mut ChaCha8Rng) -> Pattern {
    let m = if rng.gen_bool(0.8) {
        rng.gen_range(1..=64)
    } else {
        rng.gen_range(65..=2048)
    };
    let sigma = [2u8, 3, 26][rng.gen_range(0..3)];
    let d = match rng.gen_range(0..3) {
        0 => 0,
        1 => rng.gen_range(0..=m.min(8)),
        _ => rng.gen_range(0..=m),
    };
    let mut s: Vec<Option<Symbol>> = (0..m)
        .map(|_| Some(Symbol::from(b'a' + rng.gen_range(0..sigma))))
        .collect();
    for i in sample(rng, m, d) {
        s[i] = None;
    }
    Pattern::new(s).unwrap()
}

fn partition_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut failures = Vec::new();
    for _ in 0..10_000 {
        let p = random_pattern(&mut rng);
        let part = secondary_partition(&p);
        let m = p.len();
        let distinct: BTreeSet<usize> = part.mu().iter().copied().collect();
        let ok = verify_partition_properties(&p, &part).is_empty()
            && part.len() <= interval_count_bound(m, p.wildcard_count())
            && distinct.len() <= ceil_log2(m) + 1
            && part.mu().iter().all(|mu| mu.is_power_of_two());
        if !ok {
            failures.push(p.to_string());
        }
    }
    hard(
        failures.is_empty(),
        format!(
            "10000 patterns, {} failures {:?}",
            failures.len(),
            failures.first()
        ),
    )
}

fn gamma_bound() -> Outcome {
    let cases = small_period_cases(2_000);
    let mut checked = 0;
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for case in &cases {
        let p = &case.pattern;
        let pi = wildcard_period_length(p).unwrap();
        for q in 1..=2 * p.len() {
            let g = gamma_size(p, q);
            checked += 1;
            worst = worst.max(g as f64 / pi as f64);
            if g > 2 * pi {
                bad.push((p.to_string(), q, g, pi));
            }
        }
    }
    hard(
        bad.is_empty(),
        format!(
            "{checked} (pattern, q) pairs, max gamma/pi = {worst:.2}, {} violations {:?}",
            bad.len(),
            bad.first()
        ),
    )
}

fn prime_cover() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut bad = Vec::new();
    let mut sampled = 0;
    for i in 0..1_000 {
        let m = rng.gen_range(1..=4096);
        let d = rng.gen_range(0..=m.min(64));
        let mut w: Vec<usize> = sample(&mut rng, m, d).into_vec();
        w.sort_unstable();
        let cover = build_prime_cover(m, &w, SEED ^ i);
        let log = ceil_log2(m);
        let max_q = (2 * d * log * log).max(next_prime(m));
        let ok = cover.resample_rounds <= MAX_RESAMPLE_ROUNDS
            && verify_cover(m, &w, &cover.primes).as_ref() == Some(&cover.witness)
            && cover.primes.len() <= (2 * log).max(1)
            && cover.max_prime() <= max_q;
        sampled += usize::from(cover.primes.len() > 1);
        if !ok {
            bad.push((m, d, cover.primes.clone()));
        }
    }
    hard(
        bad.is_empty(),
        format!(
            "1000 layouts ({sampled} sampled covers), {} failures {:?}",
            bad.len(),
            bad.first()
        ),
    )
}

// Horner evaluation with plain u128 remainder, independent of the library arithmetic.
fn horner(base: u64, s: &[Symbol]) -> u64 {
    let p = (1u128 << 61) - 1;
    s.iter()
        .rev()
        .fold(0u128, |acc, &c| (acc * base as u128 + c as u128) % p) as u64
}

fn fingerprint_algebra() -> Outcome {
    let f = FieldParams::from_seed(SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut wrong = 0;
    for _ in 0..100_000 {
        let u: Vec<Symbol> = (0..rng.gen_range(0..24))
            .map(|_| rng.gen_range(0..256))
            .collect();
        let v: Vec<Symbol> = (0..rng.gen_range(0..24))
            .map(|_| rng.gen_range(0..256))
            .collect();
        let uv: Vec<Symbol> = u.iter().chain(&v).copied().collect();
        let (fu, fv, fuv) = (f.of(&u), f.of(&v), f.of(&uv));
        let ok = fu.concat(&fv) == fuv
            && fuv.remove_prefix(&fu) == Ok(fv)
            && fuv.remove_suffix(&fv) == Ok(fu)
            && fuv.value() == horner(f.base(), &uv);
        wrong += usize::from(!ok);
    }
    let collisions: usize = (0..8u64)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7 ^ (chunk << 32));
            let mut hits = 0;
            for _ in 0..125_000 {
                let len = rng.gen_range(1..=32);
                let a: Vec<Symbol> = (0..len).map(|_| rng.gen_range(0..4)).collect();
                let mut b: Vec<Symbol> = (0..len).map(|_| rng.gen_range(0..4)).collect();
                if a == b {
                    b[0] = (b[0] + 1) % 4;
                }
                hits += usize::from(f.of(&a) == f.of(&b));
            }
            hits
        })
        .sum();
    hard(
        wrong == 0 && collisions == 0,
        format!("100000 roundtrips, {wrong} wrong; 1000000 unequal pairs, {collisions} collisions"),
    )
}

fn median_ns(kind: EngineKind, m: usize, d: usize, n: usize) -> (f64, usize) {
    let p = bench_pattern(m, d, SEED);
    let text = bench_text(&p, n, 8, SEED);
    let mut runs = Vec::new();
    let mut words = 0;
    for _ in 0..3 {
        let mut matcher: Box<dyn StreamMatcher> =
            build_matcher(kind, &p, &BuildOptions::seeded(SEED)).unwrap();
        let (per_char, _) = measure(matcher.as_mut(), &text);
        runs.push(percentile(&per_char, 50.0));
        words = matcher.metrics().words_used_peak;
    }
    (percentile(&runs, 50.0), words)
}

fn throughput_scaling() -> Outcome {
    let m = 1 << 16;
    let n = 1 << 18;
    let mut rows = Vec::new();
    let mut at = Vec::new();
    for d in [4, 16, 64] {
        let (ns, words) = median_ns(EngineKind::Thm1, m, d, n);
        at.push(ns);
        rows.push(format!("thm1 d={d}: {ns:.1} ns/char, {words} words"));
    }
    let (naive, _) = median_ns(EngineKind::Naive, m, 16, 4096);
    rows.push(format!("naive d=16: {naive:.1} ns/char"));
    let ratio = at[2] / at[0];
    Outcome {
        pass: ratio <= 4.0,
        soft: true,
        detail: format!(
            "m=2^16, d=64/d=4 ratio {ratio:.2} (limit 4); {}",
            rows.join("; ")
        ),
    }
}

fn figure_nine() -> Outcome {
    let p = Pattern::parse("abcab?abcabcabcabcabc").unwrap();
    let q = 5;
    let cols: Vec<Vec<Option<Symbol>>> = (0..q).map(|r| column(&p, q, r)).collect();
    let wild = cols
        .iter()
        .filter(|c| c.iter().any(Option::is_none))
        .count();
    let mut pairs = Vec::new();
    for a in 0..q {
        for b in a + 1..q {
            if cols[a] == cols[b] && cols[a].iter().all(Option::is_some) {
                pairs.push((a, b));
            }
        }
    }
    let f = FieldParams::from_seed(SEED);
    let shared = pairs.iter().all(|&(a, b)| {
        [
            wildstream::offset::LengthClass::Floor,
            wildstream::offset::LengthClass::Ceil,
        ]
        .into_iter()
        .any(|class| {
            let inst = OffsetInstance::build(&p, q, class, f).unwrap();
            inst.columns()[a].id.is_some() && inst.columns()[a].id == inst.columns()[b].id
        })
    });
    hard(
        wild == 1 && pairs.len() == 1 && shared,
        format!("{wild} wildcard column(s), equal pairs {pairs:?}, shared id {shared}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (
            "1 oracle equivalence, streaming engine",
            oracle_equivalence_thm1,
        ),
        (
            "2 oracle equivalence, small-period engine",
            oracle_equivalence_smallwp,
        ),
        (
            "3 oracle equivalence, tradeoff engine",
            oracle_equivalence_tradeoff,
        ),
        ("4 partition properties", partition_properties),
        ("5 explicit candidate budget", space_budget),
        ("6 progression invariant", progression_invariant),
        ("7 column table bound", gamma_bound),
        ("8 prime cover", prime_cover),
        ("9 fingerprint algebra", fingerprint_algebra),
        ("10 throughput scaling (soft)", throughput_scaling),
        ("11 modulus-5 column facts", figure_nine),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let status = match (out.pass, out.soft) {
            (true, _) => "PASS",
            (false, true) => "FAIL (soft, not gating)",
            (false, false) => {
                failed += 1;
                "FAIL"
            }
        };
        println!(
            "{status} criterion {name} [{:.1} s]: {}",
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} hard criteria failed");
        ExitCode::FAILURE
    }
}
