//! Ground truth and baseline matchers.

use std::collections::VecDeque;

use serde::Serialize;

use crate::engine::{MatchReport, Metrics, StreamMatcher};
use crate::fingerprint::{FieldParams, Fingerprint};
use crate::partition::{preliminary_partition, IntervalPartition};
use crate::pattern::{Pattern, Symbol};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub positions: Vec<usize>,
}

/// Direct comparison at every alignment.
pub fn oracle_match(text: &[Symbol], p: &Pattern) -> OracleResult {
    let m = p.len();
    if text.len() < m {
        return OracleResult::default();
    }
    let positions = (0..=text.len() - m)
        .filter(|&s| {
            p.symbols()
                .iter()
                .zip(&text[s..s + m])
                .all(|(pk, &t)| pk.map_or(true, |c| c == t))
        })
        .collect();
    OracleResult { positions }
}

/// The offline oracle run as a stream over a window of the last `m` characters.
#[derive(Debug, Clone)]
pub struct WindowOracle {
    pattern: Pattern,
    window: VecDeque<Symbol>,
    chars: usize,
    matches: u64,
}

impl WindowOracle {
    pub fn new(p: &Pattern) -> Self {
        Self {
            pattern: p.clone(),
            window: VecDeque::with_capacity(p.len()),
            chars: 0,
            matches: 0,
        }
    }
}

impl StreamMatcher for WindowOracle {
    fn pattern_len(&self) -> usize {
        self.pattern.len()
    }

    fn process_char(&mut self, ch: Symbol) -> Option<MatchReport> {
        let m = self.pattern.len();
        self.chars += 1;
        if self.window.len() == m {
            self.window.pop_front();
        }
        self.window.push_back(ch);
        if self.window.len() < m {
            return None;
        }
        let hit = self
            .pattern
            .symbols()
            .iter()
            .zip(&self.window)
            .all(|(pk, &t)| pk.map_or(true, |c| c == t));
        hit.then(|| {
            self.matches += 1;
            MatchReport::new(self.chars - m, m)
        })
    }

    fn metrics(&self) -> Metrics {
        Metrics {
            chars: self.chars as u64,
            matches: self.matches,
            words_used: self.pattern.len(),
            words_used_peak: self.pattern.len(),
            ..Metrics::default()
        }
    }
}

/// One queue per pattern character; a candidate is checked against
/// `p_h` when it leaves queue `h`.
#[derive(Debug, Clone)]
pub struct NaiveStream {
    pattern: Pattern,
    queues: Vec<VecDeque<usize>>,
    next_pos: usize,
    metrics: Metrics,
}

impl NaiveStream {
    pub fn new(p: &Pattern) -> Self {
        let mut queues = vec![VecDeque::new(); p.len()];
        queues[0].push_back(0);
        Self {
            pattern: p.clone(),
            queues,
            next_pos: 0,
            metrics: Metrics::default(),
        }
    }
}

impl StreamMatcher for NaiveStream {
    fn pattern_len(&self) -> usize {
        self.pattern.len()
    }

    fn process_char(&mut self, ch: Symbol) -> Option<MatchReport> {
        let alpha = self.next_pos;
        self.next_pos += 1;
        self.metrics.chars += 1;
        let m = self.pattern.len();
        let mut report = None;
        for h in 0..m {
            if self.queues[h].front().map_or(true, |&c| c + h != alpha) {
                continue;
            }
            let c = self.queues[h].pop_front().unwrap();
            self.metrics.dequeues += 1;
            if self.pattern.get(h).is_some_and(|p| p != ch) {
                self.metrics.assassinations += 1;
            } else if h + 1 == m {
                self.metrics.matches += 1;
                report = Some(MatchReport::new(c, m));
            } else {
                self.queues[h + 1].push_back(c);
            }
        }
        self.queues[0].push_back(alpha + 1);
        let live: usize = self.queues.iter().map(VecDeque::len).sum();
        self.metrics.total_explicit = live;
        self.metrics.max_total_explicit = self.metrics.max_total_explicit.max(live);
        self.metrics.words_used = live;
        self.metrics.words_used_peak = self.metrics.words_used_peak.max(live);
        report
    }

    fn metrics(&self) -> Metrics {
        self.metrics
    }
}

/// Fingerprint matcher over the wildcard-split partition, storing every
/// candidate explicitly with the text fingerprint at its interval entry.
#[derive(Debug, Clone)]
pub struct PrelimStream {
    params: FieldParams,
    pattern_len: usize,
    partition: IntervalPartition,
    segment_fps: Vec<Option<Fingerprint>>,
    queues: Vec<VecDeque<(usize, Fingerprint)>>,
    next_pos: usize,
    text_fp: Fingerprint,
    metrics: Metrics,
}

impl PrelimStream {
    pub fn new(p: &Pattern, params: FieldParams) -> Self {
        let partition = preliminary_partition(p);
        let segment_fps = partition.segment_fingerprints(p, &params);
        let mut queues = vec![VecDeque::new(); partition.len()];
        queues[0].push_back((0, Fingerprint::EMPTY));
        Self {
            params,
            pattern_len: p.len(),
            partition,
            segment_fps,
            queues,
            next_pos: 0,
            text_fp: Fingerprint::EMPTY,
            metrics: Metrics::default(),
        }
    }

    pub fn partition(&self) -> &IntervalPartition {
        &self.partition
    }
}

impl StreamMatcher for PrelimStream {
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
        for h in 0..=last {
            let hi = self.partition.intervals()[h].hi;
            if self.queues[h]
                .front()
                .map_or(true, |&(c, _)| c + hi != alpha)
            {
                continue;
            }
            let (c, entry) = self.queues[h].pop_front().unwrap();
            self.metrics.dequeues += 1;
            let valid = match &self.segment_fps[h] {
                None => true,
                Some(seg) => {
                    self.metrics.validations += 1;
                    self.text_fp
                        .remove_prefix(&entry)
                        .is_ok_and(|fp| fp == *seg)
                }
            };
            if !valid {
                self.metrics.assassinations += 1;
            } else if h == last {
                self.metrics.matches += 1;
                report = Some(MatchReport::new(c, self.pattern_len));
            } else {
                self.queues[h + 1].push_back((c, self.text_fp));
            }
        }
        self.queues[0].push_back((alpha + 1, self.text_fp));
        let live: usize = self.queues.iter().map(VecDeque::len).sum();
        self.metrics.total_explicit = live;
        self.metrics.max_total_explicit = self.metrics.max_total_explicit.max(live);
        self.metrics.words_used = 5 * live;
        self.metrics.words_used_peak = self.metrics.words_used_peak.max(5 * live);
        report
    }

    fn metrics(&self) -> Metrics {
        self.metrics
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_to_end;
    use crate::pattern::symbols_of;

    fn all(p: &str, t: &str) -> [Vec<usize>; 4] {
        let p = Pattern::parse(p).unwrap();
        let t = symbols_of(t.as_bytes());
        [
            oracle_match(&t, &p).positions,
            run_to_end(&mut WindowOracle::new(&p), &t),
            run_to_end(&mut NaiveStream::new(&p), &t),
            run_to_end(&mut PrelimStream::new(&p, FieldParams::from_seed(2)), &t),
        ]
    }

    #[test]
    fn examples_agree() {
        for r in all("abab?b", "ababbbabab") {
            assert_eq!(r, vec![0]);
        }
        for r in all("?", "xyz") {
            assert_eq!(r, vec![0, 1, 2]);
        }
        for r in all("abcd", "abc") {
            assert!(r.is_empty());
        }
    }

    #[test]
    fn hand_checked_alignments() {
        // a?a over aaaaa: every alignment of length 3
        for r in all("a?a", "aaaaa") {
            assert_eq!(r, vec![0, 1, 2]);
        }
        for r in all("ab??ba", "abxyba_abbaba_ab") {
            assert_eq!(r, vec![0, 7]);
        }
        for r in all("??", "q") {
            assert!(r.is_empty());
        }
    }

    #[test]
    fn naive_reports_on_last_character() {
        let p = Pattern::parse("ab").unwrap();
        let mut n = NaiveStream::new(&p);
        assert_eq!(n.process_char(b'a' as Symbol), None);
        assert_eq!(
            n.process_char(b'b' as Symbol),
            Some(MatchReport {
                start: 0,
                reported_at: 1
            })
        );
    }
}
