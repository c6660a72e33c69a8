//! Space/time tradeoff matcher.
//!
//! The longest pattern prefix `P*` whose wildcard-period length is at most
//! `tau = ceil(d^delta)` is found with the small-period matcher. Its
//! occurrences are injected into the interval queue starting at `|P*|`, and
//! from there the candidate-queue machinery finishes the pattern. Only
//! queues with a candidate exiting at the current position are touched,
//! using a min-heap on exit times.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::candidate_queue::{
    precompute_ui, ui_completion, CandidateFingerprintQueue, Placement, ENTRY_WORDS,
};
use crate::engine::{MatchReport, Metrics, StreamMatcher};
use crate::error::{Error, Result};
use crate::fingerprint::{FieldParams, Fingerprint};
use crate::offset::{EqualLengthDictionary, SmallWpMatcher, DUMMY_ID};
use crate::partition::{secondary_partition, IntervalPartition};
use crate::pattern::{Pattern, Symbol};
use crate::periodicity::{pi_or_bound, EXACT_CAP};

/// `ceil(d^delta)`, and 1 when `d = 0`.
pub fn tau_for(d: usize, delta: f64) -> usize {
    if d == 0 {
        return 1;
    }
    // guard against 4^0.5 landing just above 2
    let t = (d as f64).powf(delta);
    let r = t.round();
    if (t - r).abs() < 1e-9 {
        r as usize
    } else {
        t.ceil() as usize
    }
    .max(1)
}

/// Longest prefix whose wildcard-period length (or its certified upper
/// bound above the exact cap) is at most `tau`, with its length.
pub fn compute_p_star(p: &Pattern, tau: usize) -> (Pattern, usize) {
    for len in (1..=p.len()).rev() {
        let prefix = p.prefix(len);
        if len <= tau || pi_or_bound(&prefix, EXACT_CAP).0 <= tau {
            return (prefix, len);
        }
    }
    unreachable!("a single character has wildcard-period length 1")
}

/// Length-`i_star` prefixes of the `u_I` strings of intervals at or after `i_star`.
pub fn build_psi(p: &Pattern, partition: &IntervalPartition, i_star: usize) -> Vec<Vec<Symbol>> {
    let mut psi: Vec<Vec<Symbol>> = partition
        .intervals()
        .iter()
        .filter(|iv| iv.lo >= i_star)
        .filter_map(|iv| ui_completion(p, iv))
        .map(|(u, _)| u[..i_star].to_vec())
        .collect();
    psi.sort();
    psi.dedup();
    psi
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct AmortizedReport {
    pub chars: u64,
    pub delta: f64,
    pub tau: usize,
    pub i_star: usize,
    pub p_star_occurrences: u64,
    /// Injected candidates that survived the first downstream interval.
    pub p_prime_occurrences: u64,
    pub full_injections: u64,
    pub downstream_ops: u64,
    pub touches: u64,
    pub dequeues: u64,
    pub ops_per_char: f64,
}

#[derive(Debug, Clone)]
struct Downstream {
    partition: IntervalPartition,
    // index of the first downstream interval
    first: usize,
    segment_fps: Vec<Option<Fingerprint>>,
    queues: Vec<CandidateFingerprintQueue>,
    psi: Option<EqualLengthDictionary>,
    psi_fps: Vec<Fingerprint>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
}

#[derive(Debug, Clone)]
pub struct TradeoffState {
    params: FieldParams,
    delta: f64,
    tau: usize,
    pattern_len: usize,
    i_star: usize,
    small: SmallWpMatcher,
    downstream: Option<Downstream>,
    next_pos: usize,
    text_fp: Fingerprint,
    report: AmortizedReport,
    metrics: Metrics,
}

impl TradeoffState {
    pub fn new(p: &Pattern, params: FieldParams, delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::Config(format!(
                "delta must lie in [0, 1], got {delta}"
            )));
        }
        let tau = tau_for(p.wildcard_count(), delta);
        Self::with_tau(p, params, delta, tau)
    }

    pub fn with_tau(p: &Pattern, params: FieldParams, delta: f64, tau: usize) -> Result<Self> {
        let (p_star, i_star) = compute_p_star(p, tau.max(1));
        let small = SmallWpMatcher::new(&p_star, params)?;
        let downstream = (i_star < p.len()).then(|| Self::build_downstream(p, i_star, params));
        Ok(Self {
            params,
            delta,
            tau,
            pattern_len: p.len(),
            i_star,
            small,
            downstream,
            next_pos: 0,
            text_fp: Fingerprint::EMPTY,
            report: AmortizedReport {
                delta,
                tau,
                i_star,
                ..AmortizedReport::default()
            },
            metrics: Metrics::default(),
        })
    }

    fn build_downstream(p: &Pattern, i_star: usize, params: FieldParams) -> Downstream {
        let mut partition = secondary_partition(p);
        let first = partition
            .split_at(i_star)
            .expect("i_star lies inside the pattern");
        let segment_fps = partition.segment_fingerprints(p, &params);
        let queues = partition
            .intervals()
            .iter()
            .enumerate()
            .map(|(h, iv)| CandidateFingerprintQueue::new(h, *iv, precompute_ui(p, iv, &params)))
            .collect();
        let entries = build_psi(p, &partition, i_star);
        let psi = (!entries.is_empty()).then(|| {
            EqualLengthDictionary::new(
                params,
                i_star,
                1,
                entries.iter().zip(1..).map(|(s, id)| (s.as_slice(), id)),
            )
        });
        Downstream {
            partition,
            first,
            segment_fps,
            queues,
            psi,
            psi_fps: entries.iter().map(|s| params.of(s)).collect(),
            heap: BinaryHeap::new(),
        }
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn i_star(&self) -> usize {
        self.i_star
    }

    /// The engine partition after the split at `|P*|`, if `P*` is a proper prefix.
    pub fn partition(&self) -> Option<&IntervalPartition> {
        self.downstream.as_ref().map(|d| &d.partition)
    }

    /// Index of the interval starting at `|P*|`.
    pub fn first_downstream(&self) -> Option<usize> {
        self.downstream.as_ref().map(|d| d.first)
    }

    pub fn psi_len(&self) -> usize {
        self.downstream.as_ref().map_or(0, |d| d.psi_fps.len())
    }

    pub fn queues(&self) -> &[CandidateFingerprintQueue] {
        self.downstream.as_ref().map_or(&[], |d| &d.queues)
    }

    pub fn amortized_report(&self) -> AmortizedReport {
        let mut r = self.report;
        r.chars = self.metrics.chars;
        r.ops_per_char = if r.chars == 0 {
            0.0
        } else {
            r.downstream_ops as f64 / r.chars as f64
        };
        r
    }

    fn track_explicit(metrics: &mut Metrics, before: usize, after: usize) {
        metrics.total_explicit = metrics.total_explicit + after - before;
        metrics.max_total_explicit = metrics.max_total_explicit.max(metrics.total_explicit);
    }
}

impl StreamMatcher for TradeoffState {
    fn pattern_len(&self) -> usize {
        self.pattern_len
    }

    fn process_char(&mut self, ch: Symbol) -> Option<MatchReport> {
        let alpha = self.next_pos;
        self.next_pos += 1;
        self.metrics.chars += 1;
        self.text_fp = self.params.append(&self.text_fp, ch);
        let star = self.small.process_char(ch);

        let Some(ds) = self.downstream.as_mut() else {
            if star.is_some() {
                self.report.p_star_occurrences += 1;
                self.metrics.matches += 1;
            }
            return star;
        };

        // the window must see every character, not only at injections
        let psi_hit = ds
            .psi
            .as_mut()
            .map(|d| d.process(alpha, ch))
            .filter(|&id| id != DUMMY_ID);

        if let Some(r) = star {
            self.report.p_star_occurrences += 1;
            let h = ds.first;
            let was_empty = ds.queues[h].is_empty();
            let before = ds.queues[h].explicit_len();
            // a Psi hit means the entrance prefix is known, so full info can be restored
            let placed = match psi_hit {
                Some(id) => {
                    self.report.full_injections += 1;
                    let psi_fp = ds.psi_fps[id as usize - 1];
                    let candidate_fp = self
                        .text_fp
                        .remove_suffix(&psi_fp)
                        .expect("psi is shorter than the text");
                    ds.queues[h].enqueue_full(r.start, candidate_fp, &self.text_fp)
                }
                None => ds.queues[h].enqueue_reduced(r.start, self.text_fp),
            };
            debug_assert!(placed.is_ok(), "injection precondition: {placed:?}");
            self.report.downstream_ops += 1;
            Self::track_explicit(&mut self.metrics, before, ds.queues[h].explicit_len());
            if was_empty {
                if let Some(key) = ds.queues[h].peek_next_exit() {
                    ds.heap.push(Reverse((key, h)));
                }
            }
        }

        let last = ds.queues.len() - 1;
        let mut report = None;
        while let Some(&Reverse((key, h))) = ds.heap.peek() {
            debug_assert!(key >= alpha, "scheduler missed an exit");
            if key != alpha {
                break;
            }
            ds.heap.pop();
            self.report.touches += 1;
            let before = ds.queues[h].explicit_len();
            let exit = ds.queues[h]
                .dequeue(alpha)
                .expect("scheduler key is an exit time");
            self.metrics.total_explicit -= before - ds.queues[h].explicit_len();
            self.report.dequeues += 1;
            self.report.downstream_ops += 1;
            self.metrics.dequeues += 1;
            if let Some(key) = ds.queues[h].peek_next_exit() {
                ds.heap.push(Reverse((key, h)));
            }

            let valid = match &ds.segment_fps[h] {
                None => true,
                Some(seg) => {
                    self.metrics.validations += 1;
                    self.text_fp
                        .remove_prefix(&exit.entry_text_fp)
                        .is_ok_and(|fp| fp == *seg)
                }
            };
            if !valid {
                self.metrics.assassinations += 1;
                continue;
            }
            if h == ds.first {
                self.report.p_prime_occurrences += 1;
            }
            if h == last {
                self.metrics.matches += 1;
                report = Some(MatchReport::new(exit.pos, self.pattern_len));
                continue;
            }
            let next = h + 1;
            let was_empty = ds.queues[next].is_empty();
            let before = ds.queues[next].explicit_len();
            let placed = match exit.candidate_fp {
                Some(cfp) => ds.queues[next].enqueue_full(exit.pos, cfp, &self.text_fp),
                None => ds.queues[next].enqueue_reduced(exit.pos, self.text_fp),
            };
            debug_assert!(placed.is_ok(), "forward precondition: {placed:?}");
            if matches!(
                placed,
                Ok(Placement::Explicit | Placement::ExplicitFallback)
            ) {
                Self::track_explicit(&mut self.metrics, before, before + 1);
            }
            self.report.downstream_ops += 1;
            if was_empty {
                if let Some(key) = ds.queues[next].peek_next_exit() {
                    ds.heap.push(Reverse((key, next)));
                }
            }
        }
        let words = self.metrics.total_explicit * ENTRY_WORDS
            + ds.queues.len() * crate::candidate_queue::QUEUE_BASE_WORDS
            + ds.psi.as_ref().map_or(0, EqualLengthDictionary::words_used)
            + self.small.metrics().words_used;
        self.metrics.words_used = words;
        self.metrics.words_used_peak = self.metrics.words_used_peak.max(words);
        report
    }

    fn metrics(&self) -> Metrics {
        let mut m = self.metrics;
        m.fallbacks = self.queues().iter().map(|q| q.fallbacks()).sum();
        m
    }
}
