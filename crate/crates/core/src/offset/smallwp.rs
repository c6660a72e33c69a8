//! Matcher for patterns with a small wildcard-period length, voting over
//! the column decompositions of a prime cover.

use serde::Serialize;

use super::cover::{build_prime_cover, PrimeCover};
use super::instance::{LengthClass, OffsetInstance};
use crate::engine::{MatchReport, Metrics, StreamMatcher};
use crate::error::Result;
use crate::fingerprint::FieldParams;
use crate::pattern::{Pattern, Symbol};

/// Derives the cover sampling seed from the session seed.
pub fn cover_seed(seed: u64) -> u64 {
    seed ^ 0x5eed_c0de_0ff5_e700
}

#[derive(Debug, Clone)]
pub struct SmallWpMatcher {
    pattern_len: usize,
    cover: PrimeCover,
    instances: Vec<OffsetInstance>,
    next_pos: usize,
    votes_seen: u64,
    metrics: Metrics,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub q: usize,
    pub class: LengthClass,
    pub column_len: usize,
    pub gamma: usize,
    pub direct: bool,
}

impl SmallWpMatcher {
    pub fn new(p: &Pattern, params: FieldParams) -> Result<Self> {
        let cover = build_prime_cover(p.len(), &p.wildcard_positions(), cover_seed(params.seed()));
        Self::with_cover(p, params, cover)
    }

    pub fn with_cover(p: &Pattern, params: FieldParams, cover: PrimeCover) -> Result<Self> {
        let m = p.len();
        let mut instances = Vec::new();
        for &q in &cover.primes {
            if q >= m {
                instances.push(OffsetInstance::build(p, q, LengthClass::Floor, params)?);
                continue;
            }
            for class in LengthClass::for_modulus(m, q) {
                instances.push(OffsetInstance::build(p, q, class, params)?);
            }
        }
        Ok(Self {
            pattern_len: m,
            cover,
            instances,
            next_pos: 0,
            votes_seen: 0,
            metrics: Metrics::default(),
        })
    }

    pub fn cover(&self) -> &PrimeCover {
        &self.cover
    }

    pub fn instances(&self) -> &[OffsetInstance] {
        &self.instances
    }

    pub fn summary(&self) -> Vec<InstanceSummary> {
        self.instances
            .iter()
            .map(|i| InstanceSummary {
                q: i.q(),
                class: i.class(),
                column_len: i.column_len(),
                gamma: i.gamma().len(),
                direct: i.is_direct(),
            })
            .collect()
    }

    /// Total instance votes cast so far.
    pub fn votes_seen(&self) -> u64 {
        self.votes_seen
    }
}

impl StreamMatcher for SmallWpMatcher {
    fn pattern_len(&self) -> usize {
        self.pattern_len
    }

    fn process_char(&mut self, ch: Symbol) -> Option<MatchReport> {
        let alpha = self.next_pos;
        self.next_pos += 1;
        self.metrics.chars += 1;
        // every instance consumes the character before the vote is read
        let mut votes = 0;
        for inst in &mut self.instances {
            votes += usize::from(inst.process(alpha, ch));
        }
        self.votes_seen += votes as u64;
        let words: usize = self.instances.iter().map(OffsetInstance::words_used).sum();
        self.metrics.words_used = words;
        self.metrics.words_used_peak = self.metrics.words_used_peak.max(words);
        if alpha + 1 >= self.pattern_len && votes == self.instances.len() {
            self.metrics.matches += 1;
            Some(MatchReport::new(
                alpha + 1 - self.pattern_len,
                self.pattern_len,
            ))
        } else {
            None
        }
    }

    fn metrics(&self) -> Metrics {
        let mut m = self.metrics;
        for inst in &self.instances {
            let n = inst.nested_metrics();
            m.dequeues += n.dequeues;
            m.validations += n.validations;
            m.assassinations += n.assassinations;
            m.enqueues += n.enqueues;
            m.max_total_explicit += n.max_total_explicit;
        }
        m
    }
}
