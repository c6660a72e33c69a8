//! Command-line front end: argument handling and subcommand dispatch.

pub mod args;
pub mod stream;

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Value};
use wildstream::bench::{bench_row, LatencyHistogram};
use wildstream::difftest::{run_difftest, CaseLimits, DiffConfig, EngineRun, Family};
use wildstream::offset::LengthClass;
use wildstream::periodicity::{is_periodic, pi_or_bound, EXACT_CAP};
use wildstream::{
    build_matcher, build_prime_cover, gamma_size, preliminary_partition, principle_period,
    secondary_partition, verify_partition_properties, BuildOptions, EngineKind, FieldParams,
    OffsetInstance, Pattern, StreamMatcher, Symbol, TradeoffState,
};

pub use args::Cli;
use args::*;
pub use stream::run_stream;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<wildstream::Error> for CliError {
    fn from(e: wildstream::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs a parsed command line; 0 on success, 1 on I/O failure or a found
/// divergence, 2 on a bad configuration.
pub fn run(cli: Cli) -> ExitCode {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<ExitCode> {
    match cmd {
        Command::Match(a) => cmd_match(a),
        Command::Oracle(s) => stream_cmd(&s, EngineKind::Oracle, None, None),
        Command::Smallwp(a) => stream_cmd(&a.stream, EngineKind::SmallWp, None, a.tau),
        Command::Tradeoff(a) => stream_cmd(&a.stream, EngineKind::Tradeoff, Some(a.delta), None),
        Command::Period(a) => cmd_period(&a),
        Command::Pi(a) => cmd_pi(&a),
        Command::Partition(a) => cmd_partition(&a),
        Command::Primes(a) => cmd_primes(&a),
        Command::Gamma(a) => cmd_gamma(&a),
        Command::Difftest(a) => cmd_difftest(&a),
        Command::Bench(a) => cmd_bench(&a),
    }
}

pub fn engine_kind(e: EngineArg) -> EngineKind {
    match e {
        EngineArg::Thm1 => EngineKind::Thm1,
        EngineArg::Smallwp => EngineKind::SmallWp,
        EngineArg::Tradeoff => EngineKind::Tradeoff,
        EngineArg::Naive => EngineKind::Naive,
        EngineArg::Prelim => EngineKind::Prelim,
        EngineArg::Oracle => EngineKind::Oracle,
    }
}

/// Accepts a single character or a decimal / `0x` hex byte value.
pub fn parse_wildcard(s: &str) -> CliResult<u8> {
    if let [b] = s.as_bytes() {
        return Ok(*b);
    }
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => u8::from_str_radix(hex, 16),
        None => s.parse::<u8>(),
    };
    parsed.map_err(|_| CliError::Config(format!("bad wildcard byte `{s}`")))
}

pub fn load_pattern(a: &PatternArgs) -> CliResult<Pattern> {
    let wildcard = parse_wildcard(&a.wildcard)?;
    let bytes = match (&a.pattern, &a.pattern_file) {
        (Some(p), _) => p.as_bytes().to_vec(),
        (None, Some(path)) => {
            let mut b = std::fs::read(path)?;
            if b.last() == Some(&b'\n') {
                b.pop();
                if b.last() == Some(&b'\r') {
                    b.pop();
                }
            }
            b
        }
        (None, None) => return Err(CliError::Config("no pattern given".into())),
    };
    Ok(Pattern::from_bytes(&bytes, wildcard)?)
}

fn check_delta(delta: f64) -> CliResult<()> {
    if (0.0..=1.0).contains(&delta) {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "delta must lie in [0, 1], got {delta}"
        )))
    }
}

fn cmd_match(a: MatchArgs) -> CliResult<ExitCode> {
    let kind = engine_kind(a.engine);
    if a.delta.is_some() && kind != EngineKind::Tradeoff {
        return Err(CliError::Config(
            "--delta applies to the tradeoff engine only".into(),
        ));
    }
    if a.tau.is_some() && kind != EngineKind::SmallWp {
        return Err(CliError::Config(
            "--tau applies to the smallwp engine only".into(),
        ));
    }
    stream_cmd(&a.stream, kind, a.delta, a.tau)
}

fn stream_cmd(
    s: &StreamArgs,
    kind: EngineKind,
    delta: Option<f64>,
    tau: Option<usize>,
) -> CliResult<ExitCode> {
    let p = load_pattern(&s.pattern)?;
    if let Some(d) = delta {
        check_delta(d)?;
    }
    if let Some(tau) = tau {
        let (pi, exact) = pi_or_bound(&p, EXACT_CAP);
        if pi > tau {
            let how = if exact { "" } else { " (upper bound)" };
            eprintln!("warning: wildcard-period length {pi}{how} exceeds tau {tau}; space bound not certified");
        }
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let text: Box<dyn BufRead> = match &s.text_file {
        Some(path) => Box::new(BufReader::new(open(path)?)),
        None => Box::new(io::stdin().lock()),
    };
    let (metrics, hist, amortized) = if kind == EngineKind::Tradeoff {
        let params = FieldParams::from_seed(s.seed);
        let mut m = TradeoffState::new(
            &p,
            params,
            delta.unwrap_or(wildstream::matchers::DEFAULT_DELTA),
        )?;
        let hist = run_stream(&mut m, text.bytes(), &mut out)?;
        (
            m.metrics(),
            hist,
            Some(serde_json::to_value(m.amortized_report()).expect("plain struct")),
        )
    } else {
        let mut opts = BuildOptions::seeded(s.seed);
        opts.delta = delta;
        let mut m = build_matcher(kind, &p, &opts)?;
        let hist = run_stream(m.as_mut(), text.bytes(), &mut out)?;
        (m.metrics(), hist, None)
    };
    if s.metrics == Some(MetricsFormat::Json) {
        let mut v = metrics_json(&metrics, &hist);
        if let Some(r) = amortized {
            v["amortized"] = r;
        }
        writeln!(io::stderr(), "{v}")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn open(path: &Path) -> io::Result<File> {
    File::open(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

pub fn metrics_json(m: &wildstream::Metrics, hist: &LatencyHistogram) -> Value {
    json!({
        "chars": m.chars,
        "matches": m.matches,
        "dequeues": m.dequeues,
        "assassinations": m.assassinations,
        "max_total_explicit": m.max_total_explicit,
        "words_used_peak": m.words_used_peak,
        "ns_per_char_p50": hist.percentile(50.0),
        "ns_per_char_p99": hist.percentile(99.0),
    })
}

fn solid_symbols(p: &Pattern) -> CliResult<Vec<Symbol>> {
    p.literal(0, p.len() - 1)
        .ok_or_else(|| CliError::Config("string must not contain wildcards".into()))
}

fn cmd_period(a: &PatternArgs) -> CliResult<ExitCode> {
    let s = solid_symbols(&load_pattern(a)?)?;
    let rho = principle_period(&s)?;
    println!("period {rho}");
    println!("periodic {}", is_periodic(&s)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_pi(a: &PatternArgs) -> CliResult<ExitCode> {
    let p = load_pattern(a)?;
    let (pi, exact) = pi_or_bound(&p, EXACT_CAP);
    println!("pi {pi} {}", if exact { "exact" } else { "bound" });
    Ok(ExitCode::SUCCESS)
}

fn cmd_partition(a: &PartitionArgs) -> CliResult<ExitCode> {
    let p = load_pattern(&a.pattern)?;
    let part = if a.preliminary {
        preliminary_partition(&p)
    } else {
        secondary_partition(&p)
    };
    println!("{part}");
    let violations = verify_partition_properties(&p, &part);
    if violations.is_empty() {
        println!("properties ok");
    }
    for v in violations {
        println!("violation {v:?}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_primes(a: &SeededPatternArgs) -> CliResult<ExitCode> {
    let p = load_pattern(&a.pattern)?;
    let cover = build_prime_cover(
        p.len(),
        &p.wildcard_positions(),
        wildstream::offset::smallwp::cover_seed(a.seed),
    );
    let primes: Vec<String> = cover.primes.iter().map(usize::to_string).collect();
    println!("primes {}", primes.join(" "));
    println!("resample_rounds {}", cover.resample_rounds);
    for (j, w) in cover.witness.iter().enumerate() {
        match w {
            Some(q) => println!("{j} {q}"),
            None => println!("{j} -"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gamma(a: &GammaArgs) -> CliResult<ExitCode> {
    let p = load_pattern(&a.pattern)?;
    if a.q == 0 {
        return Err(CliError::Config("q must be positive".into()));
    }
    println!("gamma {}", gamma_size(&p, a.q));
    let classes = if a.q >= p.len() {
        vec![LengthClass::Floor]
    } else {
        LengthClass::for_modulus(p.len(), a.q)
    };
    for class in classes {
        let inst = OffsetInstance::build(&p, a.q, class, FieldParams::from_seed(a.seed))?;
        print!("{inst}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_difftest(a: &DifftestArgs) -> CliResult<ExitCode> {
    check_delta(a.delta)?;
    if a.max_m == 0 || a.engines.is_empty() {
        return Err(CliError::Config(
            "need max-m >= 1 and at least one engine".into(),
        ));
    }
    let runs = a
        .engines
        .iter()
        .map(|&e| {
            let mut opts = BuildOptions::seeded(a.seed);
            opts.delta = Some(a.delta);
            let kind = engine_kind(e);
            if kind == EngineKind::Thm1 {
                opts.engine.skip_validation = a.mutate;
            }
            EngineRun { kind, opts }
        })
        .collect();
    let cfg = DiffConfig {
        seed: a.seed,
        count: a.count,
        families: Family::MIXED.to_vec(),
        limits: CaseLimits {
            max_m: a.max_m,
            max_d: a.max_d,
            max_n: a.max_n,
        },
        runs,
    };
    let summary = run_difftest(&cfg);
    println!(
        "cases {} checks {} divergences {}",
        summary.cases, summary.checks, summary.divergences
    );
    match summary.first {
        None => Ok(ExitCode::SUCCESS),
        Some(d) => {
            println!(
                "first divergence: case {} engine {} family {:?}",
                d.case_index, d.engine, d.family
            );
            println!("pattern {}", d.pattern);
            println!("text {}", d.text);
            println!("expected {:?}", d.expected);
            println!("got {:?}", d.got);
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_bench(a: &BenchArgs) -> CliResult<ExitCode> {
    if a.m.contains(&0) {
        return Err(CliError::Config("m must be positive".into()));
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for &m in &a.m {
        for &d in &a.d {
            for &e in &a.engines {
                let row = bench_row(engine_kind(e), m, d.min(m), a.n, a.seed)?;
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&row).expect("plain struct")
                )?;
                out.flush()?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
