//! The streaming matcher over the exponential partition.
//!
//! Every text position becomes a candidate right before its character
//! arrives and then walks through the candidate queues of the pattern
//! intervals in order. Whenever a candidate leaves the text interval of a
//! regular pattern interval `[i, j]`, the fingerprint of `t_{c+i}..t_{c+j}`
//! is recovered from the running text fingerprint and compared with the
//! pattern segment; failures are dropped, survivors move on, and survivors
//! of the last interval are reported.

use serde::Serialize;

use crate::candidate_queue::{precompute_ui, CandidateFingerprintQueue, Placement};
use crate::error::{Error, Result};
use crate::fingerprint::{FieldParams, Fingerprint};
use crate::partition::{secondary_partition, IntervalPartition};
use crate::pattern::{Pattern, Symbol};

/// An occurrence of the pattern starting at `start`, emitted while processing
/// `t_{reported_at}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    pub start: usize,
    pub reported_at: usize,
}

impl MatchReport {
    pub fn new(start: usize, pattern_len: usize) -> Self {
        Self {
            start,
            reported_at: start + pattern_len - 1,
        }
    }
}

/// Instrumentation counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub chars: u64,
    pub matches: u64,
    pub enqueues: u64,
    pub dequeues: u64,
    pub validations: u64,
    pub assassinations: u64,
    /// Candidates that matched `u_I` but broke the progression spacing.
    pub fallbacks: u64,
    pub total_explicit: usize,
    pub max_total_explicit: usize,
    pub words_used: usize,
    pub words_used_peak: usize,
    pub max_ops_per_char: usize,
    pub progression_violations: u64,
}

/// A matcher that consumes one text character at a time.
pub trait StreamMatcher: Send {
    fn pattern_len(&self) -> usize;

    /// Consumes the next text character and reports the occurrence ending
    /// at it, if any. At most one occurrence can end at a given position.
    fn process_char(&mut self, ch: Symbol) -> Option<MatchReport>;

    fn metrics(&self) -> Metrics {
        Metrics::default()
    }
}

/// Runs a matcher over a whole text and collects match starts.
pub fn run_to_end<M: StreamMatcher + ?Sized>(matcher: &mut M, text: &[Symbol]) -> Vec<usize> {
    text.iter()
        .filter_map(|&ch| matcher.process_char(ch))
        .map(|r| r.start)
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EngineOptions {
    /// Track every candidate explicitly to check the progression invariant.
    pub shadow: bool,
    /// Accept every candidate leaving this interval without validation.
    /// Only for exercising the differential harness.
    #[doc(hidden)]
    pub skip_validation: Option<usize>,
}

/// State of one match session.
#[derive(Debug, Clone)]
pub struct MatcherState {
    params: FieldParams,
    pattern_len: usize,
    wildcards: Vec<usize>,
    partition: IntervalPartition,
    segment_fps: Vec<Option<Fingerprint>>,
    queues: Vec<CandidateFingerprintQueue>,
    skip_validation: Option<usize>,
    // bit h set iff queue h is non-empty
    occupied: Vec<u64>,
    next_pos: usize,
    text_fp: Fingerprint,
    metrics: Metrics,
}

impl MatcherState {
    /// Builds the matcher over the exponential partition of `p`.
    pub fn preprocess(p: &Pattern, params: FieldParams) -> Result<Self> {
        Self::with_options(p, params, EngineOptions::default())
    }

    pub fn with_options(p: &Pattern, params: FieldParams, opts: EngineOptions) -> Result<Self> {
        Self::with_partition(p, secondary_partition(p), params, opts)
    }

    /// Builds the matcher over an arbitrary partition of `[0, m)`.
    pub fn with_partition(
        p: &Pattern,
        partition: IntervalPartition,
        params: FieldParams,
        opts: EngineOptions,
    ) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let covers = partition.intervals().first().map(|iv| iv.lo) == Some(0)
            && partition.intervals().last().map(|iv| iv.hi) == Some(p.len() - 1)
            && partition
                .intervals()
                .windows(2)
                .all(|w| w[0].hi + 1 == w[1].lo);
        if !covers {
            return Err(Error::Config("intervals must partition the pattern".into()));
        }
        let segment_fps = partition.segment_fingerprints(p, &params);
        let queues: Vec<_> = partition
            .intervals()
            .iter()
            .enumerate()
            .map(|(h, iv)| {
                let mut q = CandidateFingerprintQueue::new(h, *iv, precompute_ui(p, iv, &params));
                if opts.shadow {
                    q.enable_shadow();
                }
                q
            })
            .collect();
        let k = queues.len();
        let mut state = Self {
            params,
            pattern_len: p.len(),
            wildcards: p.wildcard_positions(),
            partition,
            segment_fps,
            queues,
            skip_validation: opts.skip_validation,
            occupied: vec![0; k.div_ceil(64)],
            next_pos: 0,
            text_fp: Fingerprint::EMPTY,
            metrics: Metrics::default(),
        };
        state.metrics.words_used = state.queues.iter().map(|q| q.words_used()).sum();
        state.metrics.words_used_peak = state.metrics.words_used;
        state.enqueue(0, 0, Fingerprint::EMPTY);
        state.metrics.enqueues = 0;
        Ok(state)
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn partition(&self) -> &IntervalPartition {
        &self.partition
    }

    pub fn queues(&self) -> &[CandidateFingerprintQueue] {
        &self.queues
    }

    pub fn wildcards(&self) -> &[usize] {
        &self.wildcards
    }

    pub fn wildcard_count(&self) -> usize {
        self.wildcards.len()
    }

    /// Number of characters consumed so far (`alpha + 1`).
    pub fn chars_seen(&self) -> usize {
        self.next_pos
    }

    /// Fingerprint of the text consumed so far.
    pub fn text_fp(&self) -> &Fingerprint {
        &self.text_fp
    }

    pub fn snapshot_metrics(&self) -> Metrics {
        let mut m = self.metrics;
        m.fallbacks = self.queues.iter().map(|q| q.fallbacks()).sum();
        m.progression_violations = self.queues.iter().map(|q| q.shadow_violations()).sum();
        m
    }

    fn set_occupied(&mut self, h: usize, on: bool) {
        if on {
            self.occupied[h / 64] |= 1 << (h % 64);
        } else {
            self.occupied[h / 64] &= !(1 << (h % 64));
        }
    }

    fn account_explicit(&mut self, before: usize, after: usize) {
        let m = &mut self.metrics;
        m.total_explicit = m.total_explicit + after - before;
        m.max_total_explicit = m.max_total_explicit.max(m.total_explicit);
        m.words_used += (after - before) * crate::candidate_queue::ENTRY_WORDS;
        m.words_used_peak = m.words_used_peak.max(m.words_used);
    }

    fn release_explicit(&mut self, before: usize, after: usize) {
        let m = &mut self.metrics;
        m.total_explicit -= before - after;
        m.words_used -= (before - after) * crate::candidate_queue::ENTRY_WORDS;
    }

    fn enqueue(&mut self, h: usize, c: usize, candidate_fp: Fingerprint) {
        let before = self.queues[h].explicit_len();
        let placed = self.queues[h].enqueue_full(c, candidate_fp, &self.text_fp);
        debug_assert!(placed.is_ok(), "enqueue precondition: {placed:?}");
        if matches!(
            placed,
            Ok(Placement::Explicit | Placement::ExplicitFallback)
        ) {
            self.account_explicit(before, before + 1);
        }
        self.metrics.enqueues += 1;
        self.set_occupied(h, true);
    }
}

impl StreamMatcher for MatcherState {
    fn pattern_len(&self) -> usize {
        self.pattern_len
    }

    fn process_char(&mut self, ch: Symbol) -> Option<MatchReport> {
        let alpha = self.next_pos;
        self.next_pos += 1;
        self.text_fp = self.params.append(&self.text_fp, ch);
        self.metrics.chars += 1;

        let last = self.queues.len() - 1;
        let mut report = None;
        let mut ops = 1;
        for w in 0..self.occupied.len() {
            // queues filled during this sweep cannot have a candidate exiting now
            let mut bits = self.occupied[w];
            while bits != 0 {
                let h = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                ops += 1;
                let before = self.queues[h].explicit_len();
                let Some(exit) = self.queues[h].dequeue(alpha) else {
                    continue;
                };
                let after = self.queues[h].explicit_len();
                self.release_explicit(before, after);
                if self.queues[h].is_empty() {
                    self.set_occupied(h, false);
                }
                self.metrics.dequeues += 1;

                let valid = match &self.segment_fps[h] {
                    _ if self.skip_validation == Some(h) => true,
                    None => true,
                    Some(segment) => {
                        self.metrics.validations += 1;
                        self.text_fp
                            .remove_prefix(&exit.entry_text_fp)
                            .is_ok_and(|fp| fp == *segment)
                    }
                };
                if !valid {
                    self.metrics.assassinations += 1;
                } else if h == last {
                    self.metrics.matches += 1;
                    report = Some(MatchReport::new(exit.pos, self.pattern_len));
                } else {
                    let candidate_fp = exit
                        .candidate_fp
                        .expect("engine candidates carry full info");
                    ops += 1;
                    self.enqueue(h + 1, exit.pos, candidate_fp);
                }
            }
        }
        self.enqueue(0, alpha + 1, self.text_fp);
        self.metrics.max_ops_per_char = self.metrics.max_ops_per_char.max(ops);
        report
    }

    fn metrics(&self) -> Metrics {
        self.snapshot_metrics()
    }
}
