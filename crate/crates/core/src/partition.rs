//! Pattern partitionings: the wildcard split and the exponential refinement.

use std::collections::BTreeSet;
use std::fmt;

use crate::fingerprint::{FieldParams, Fingerprint};
use crate::pattern::Pattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalKind {
    Regular,
    Wildcard,
}

/// A closed range `lo..=hi` of pattern indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternInterval {
    pub lo: usize,
    pub hi: usize,
    pub kind: IntervalKind,
}

impl PatternInterval {
    pub fn regular(lo: usize, hi: usize) -> Self {
        Self {
            lo,
            hi,
            kind: IntervalKind::Regular,
        }
    }

    pub fn wildcard(at: usize) -> Self {
        Self {
            lo: at,
            hi: at,
            kind: IntervalKind::Wildcard,
        }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_wildcard(&self) -> bool {
        self.kind == IntervalKind::Wildcard
    }
}

impl fmt::Display for PatternInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            IntervalKind::Regular => "regular",
            IntervalKind::Wildcard => "wildcard",
        };
        write!(f, "{}..{} {}", self.lo, self.hi, kind)
    }
}

/// An ordered partition of `[0, m)` into pattern intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    intervals: Vec<PatternInterval>,
    mu: Vec<usize>,
}

impl IntervalPartition {
    /// Wraps an ordered interval list; `mu` is derived.
    pub fn from_intervals(intervals: Vec<PatternInterval>) -> Self {
        let mut mu = Vec::with_capacity(intervals.len());
        let mut best = 0;
        for iv in &intervals {
            best = best.max(iv.len());
            mu.push(best);
        }
        Self { intervals, mu }
    }

    /// Builds a partition from closed ranges, classifying each against `p`.
    /// A single-index range over a wildcard becomes a wildcard interval.
    pub fn from_ranges(p: &Pattern, ranges: &[(usize, usize)]) -> Self {
        Self::from_intervals(
            ranges
                .iter()
                .map(|&(lo, hi)| {
                    if lo == hi && p.is_wildcard(lo) {
                        PatternInterval::wildcard(lo)
                    } else {
                        PatternInterval::regular(lo, hi)
                    }
                })
                .collect(),
        )
    }

    pub fn intervals(&self) -> &[PatternInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `mu[x]`: longest interval among the first `x + 1`.
    pub fn mu(&self) -> &[usize] {
        &self.mu
    }

    pub fn ranges(&self) -> Vec<(usize, usize)> {
        self.intervals.iter().map(|iv| (iv.lo, iv.hi)).collect()
    }

    /// Index of the interval containing pattern index `idx`.
    pub fn locate(&self, idx: usize) -> Option<usize> {
        self.intervals
            .iter()
            .position(|iv| iv.lo <= idx && idx <= iv.hi)
    }

    /// Splits the interval containing `at - 1` so that a new interval starts
    /// at `at`. No-op when `at` already starts an interval or is out of range.
    /// Returns the index of the interval starting at `at`, if any.
    pub fn split_at(&mut self, at: usize) -> Option<usize> {
        if let Some(h) = self.intervals.iter().position(|iv| iv.lo == at) {
            return Some(h);
        }
        let h = self.locate(at.checked_sub(1)?)?;
        let iv = self.intervals[h];
        if iv.hi < at {
            return None;
        }
        debug_assert_eq!(iv.kind, IntervalKind::Regular);
        self.intervals[h] = PatternInterval::regular(iv.lo, at - 1);
        self.intervals
            .insert(h + 1, PatternInterval::regular(at, iv.hi));
        *self = Self::from_intervals(std::mem::take(&mut self.intervals));
        Some(h + 1)
    }

    /// Fingerprint of each regular interval's pattern segment; `None` for wildcards.
    pub fn segment_fingerprints(
        &self,
        p: &Pattern,
        params: &FieldParams,
    ) -> Vec<Option<Fingerprint>> {
        self.intervals
            .iter()
            .map(|iv| match iv.kind {
                IntervalKind::Wildcard => None,
                IntervalKind::Regular => Some(
                    params.of(&p
                        .literal(iv.lo, iv.hi)
                        .expect("regular interval spans a wildcard")),
                ),
            })
            .collect()
    }
}

impl fmt::Display for IntervalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for iv in &self.intervals {
            writeln!(f, "{iv}")?;
        }
        let mu: Vec<String> = self.mu.iter().map(usize::to_string).collect();
        write!(f, "mu {}", mu.join(" "))
    }
}

/// Alternating regular and wildcard intervals, with empty ones dropped.
pub fn preliminary_partition(p: &Pattern) -> IntervalPartition {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, s) in p.symbols().iter().enumerate() {
        if s.is_none() {
            if start < i {
                out.push(PatternInterval::regular(start, i - 1));
            }
            out.push(PatternInterval::wildcard(i));
            start = i + 1;
        }
    }
    if start < p.len() {
        out.push(PatternInterval::regular(start, p.len() - 1));
    }
    IntervalPartition::from_intervals(out)
}

/// Refines each regular interval of the preliminary partition: two blocks of
/// the longest length seen so far, then doubling blocks, then a tail of at
/// most two blocks.
pub fn secondary_partition(p: &Pattern) -> IntervalPartition {
    let mut out: Vec<PatternInterval> = Vec::new();
    let mut longest = 0usize;
    for prelim in preliminary_partition(p).intervals() {
        if prelim.is_wildcard() {
            out.push(*prelim);
            longest = longest.max(1);
            continue;
        }
        let delta = longest.max(1);
        let (lo, hi) = (prelim.lo, prelim.hi);
        let len = prelim.len();
        if len <= delta {
            out.push(PatternInterval::regular(lo, hi));
        } else if len <= 2 * delta {
            out.push(PatternInterval::regular(lo, lo + delta - 1));
            out.push(PatternInterval::regular(lo + delta, hi));
        } else {
            out.push(PatternInterval::regular(lo, lo + delta - 1));
            out.push(PatternInterval::regular(lo + delta, lo + 2 * delta - 1));
            let mut next = lo + 2 * delta;
            let mut last = delta;
            let mut size = 2 * delta;
            while hi + 1 - next >= size {
                out.push(PatternInterval::regular(next, next + size - 1));
                next += size;
                last = size;
                size *= 2;
            }
            let rest = hi + 1 - next;
            if rest > 0 {
                if rest <= last {
                    out.push(PatternInterval::regular(next, hi));
                } else {
                    out.push(PatternInterval::regular(next, next + last - 1));
                    out.push(PatternInterval::regular(next + last, hi));
                }
            }
        }
        longest = out.iter().map(PatternInterval::len).max().unwrap_or(1);
    }
    IntervalPartition::from_intervals(out)
}

/// A failed partition property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The intervals are not an ordered, gap-free cover of `[0, m)`.
    NotAPartition,
    /// Property 1: an interval mixes a wildcard with other characters, or its kind label is wrong.
    MixedInterval { index: usize },
    /// Property 2: more intervals than `5(d+1) + 2 ceil(log2 m) + 4`.
    TooManyIntervals { count: usize, bound: usize },
    /// Property 3: no run of `|I|` non-wildcards before a regular interval `I`.
    NoPrefixRun { index: usize },
    /// Property 4: more distinct `mu` values than `ceil(log2 m) + 1`.
    TooManyMuValues { count: usize, bound: usize },
}

pub fn ceil_log2(m: usize) -> usize {
    if m <= 1 {
        0
    } else {
        (usize::BITS - (m - 1).leading_zeros()) as usize
    }
}

/// Upper bound on the interval count used by property 2.
pub fn interval_count_bound(m: usize, d: usize) -> usize {
    5 * (d + 1) + 2 * ceil_log2(m) + 4
}

/// Checks every partition property and returns the failures.
pub fn verify_partition_properties(p: &Pattern, partition: &IntervalPartition) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = p.len();
    let ivs = partition.intervals();

    let mut expect = 0;
    let mut covered = true;
    for iv in ivs {
        if iv.lo != expect || iv.hi < iv.lo || iv.hi >= m {
            covered = false;
            break;
        }
        expect = iv.hi + 1;
    }
    if !covered || expect != m {
        out.push(Violation::NotAPartition);
        return out;
    }

    let mut mixed = vec![false; ivs.len()];
    for (index, iv) in ivs.iter().enumerate() {
        let ok = match iv.kind {
            IntervalKind::Wildcard => iv.lo == iv.hi && p.is_wildcard(iv.lo),
            IntervalKind::Regular => (iv.lo..=iv.hi).all(|k| !p.is_wildcard(k)),
        };
        if !ok {
            mixed[index] = true;
            out.push(Violation::MixedInterval { index });
        }
    }

    let bound = interval_count_bound(m, p.wildcard_count());
    if ivs.len() > bound {
        out.push(Violation::TooManyIntervals {
            count: ivs.len(),
            bound,
        });
    }

    // longest[k]: longest non-wildcard run inside p[..k]
    let mut longest = vec![0usize; m + 1];
    let mut run = 0;
    for k in 0..m {
        run = if p.is_wildcard(k) { 0 } else { run + 1 };
        longest[k + 1] = longest[k].max(run);
    }
    for (index, iv) in ivs.iter().enumerate() {
        if iv.kind == IntervalKind::Regular
            && !mixed[index]
            && iv.len() > 1
            && longest[iv.lo] < iv.len()
        {
            out.push(Violation::NoPrefixRun { index });
        }
    }

    let distinct: BTreeSet<usize> = partition.mu().iter().copied().collect();
    let bound = ceil_log2(m) + 1;
    if distinct.len() > bound {
        out.push(Violation::TooManyMuValues {
            count: distinct.len(),
            bound,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> Pattern {
        Pattern::parse(s).unwrap()
    }

    fn shape(part: &IntervalPartition) -> Vec<(usize, usize, bool)> {
        part.intervals()
            .iter()
            .map(|iv| (iv.lo, iv.hi, iv.is_wildcard()))
            .collect()
    }

    #[test]
    fn preliminary_examples() {
        assert_eq!(
            shape(&preliminary_partition(&pat("ab?cdefg?hij"))),
            vec![
                (0, 1, false),
                (2, 2, true),
                (3, 7, false),
                (8, 8, true),
                (9, 11, false)
            ]
        );
        assert_eq!(
            shape(&preliminary_partition(&pat("???"))),
            vec![(0, 0, true), (1, 1, true), (2, 2, true)]
        );
        assert_eq!(
            shape(&preliminary_partition(&pat("abc"))),
            vec![(0, 2, false)]
        );
    }

    #[test]
    fn secondary_examples() {
        assert_eq!(
            secondary_partition(&pat("abcdefgh")).ranges(),
            vec![(0, 0), (1, 1), (2, 3), (4, 7)]
        );
        assert_eq!(
            shape(&secondary_partition(&pat("ab?cdefg?hij"))),
            vec![
                (0, 0, false),
                (1, 1, false),
                (2, 2, true),
                (3, 3, false),
                (4, 4, false),
                (5, 6, false),
                (7, 7, false),
                (8, 8, true),
                (9, 10, false),
                (11, 11, false),
            ]
        );
        assert_eq!(
            shape(&secondary_partition(&pat("?abc"))),
            vec![(0, 0, true), (1, 1, false), (2, 2, false), (3, 3, false)]
        );
        assert_eq!(
            secondary_partition(&pat("abc")).ranges(),
            vec![(0, 0), (1, 1), (2, 2)]
        );
    }

    #[test]
    fn tail_rule_with_two_blocks() {
        // 1+1+2+4 = 8, remaining 6 > last (4): blocks of 4 then 2.
        assert_eq!(
            secondary_partition(&pat(&"a".repeat(14))).ranges(),
            vec![(0, 0), (1, 1), (2, 3), (4, 7), (8, 11), (12, 13)]
        );
    }

    #[test]
    fn mu_is_running_max() {
        let part = secondary_partition(&pat("ab?cdefg?hij"));
        assert_eq!(part.mu(), &[1, 1, 1, 1, 1, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn verifier_examples() {
        let p = pat("abc");
        assert!(verify_partition_properties(&p, &secondary_partition(&p)).is_empty());
        // [1,2] needs a run of two non-wildcards inside the length-1 prefix.
        let hand = IntervalPartition::from_ranges(&p, &[(0, 0), (1, 2)]);
        assert_eq!(
            verify_partition_properties(&p, &hand),
            vec![Violation::NoPrefixRun { index: 1 }]
        );

        let p = pat("a?c");
        let bad = IntervalPartition::from_ranges(&p, &[(0, 2)]);
        assert_eq!(
            verify_partition_properties(&p, &bad),
            vec![Violation::MixedInterval { index: 0 }]
        );

        let gap = IntervalPartition::from_ranges(&p, &[(0, 0), (2, 2)]);
        assert_eq!(
            verify_partition_properties(&p, &gap),
            vec![Violation::NotAPartition]
        );
    }

    #[test]
    fn split_inserts_boundary() {
        let p = pat("abcdefgh");
        let mut part = secondary_partition(&p);
        assert_eq!(part.split_at(5), Some(4));
        assert_eq!(part.ranges(), vec![(0, 0), (1, 1), (2, 3), (4, 4), (5, 7)]);
        assert_eq!(part.split_at(4), Some(3));
        assert_eq!(part.split_at(8), None);
        // Splitting the block of 4 leaves a block of 3 as the running maximum.
        assert_eq!(part.mu(), &[1, 1, 2, 2, 3]);
        assert!(verify_partition_properties(&p, &part).is_empty());
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!([1, 2, 3, 4, 5, 8, 9].map(ceil_log2), [0, 1, 2, 2, 3, 3, 4]);
    }
}
