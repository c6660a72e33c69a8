//! Periods of plain strings and the wildcard-period length of patterns.
//!
//! The wildcard-period length of `P` is `ceil(|P| / occ)` where `occ` is the
//! largest number of occurrences of `P` that fit in a text of length
//! `2|P| - 1`. A set of start offsets `D` is simultaneously realizable iff
//! its pairwise differences are all compatible shifts of `P`: every text
//! position then sees non-wildcard pattern characters that agree pairwise,
//! hence agree jointly. So `occ` is the maximum clique through offset 0 of
//! the shift-compatibility graph on `[0, |P|)`.

use crate::error::{Error, Result};
use crate::pattern::{Pattern, Symbol};

/// Default cap on `|P|` for the exact clique search.
pub const EXACT_CAP: usize = 24;

/// Failure function: `border[k]` is the longest proper border of `s[..k]`.
fn borders(s: &[Symbol]) -> Vec<usize> {
    let mut border = vec![0usize; s.len() + 1];
    let mut b = 0usize;
    for k in 1..s.len() {
        while b > 0 && s[k] != s[b] {
            b = border[b];
        }
        if s[k] == s[b] {
            b += 1;
        }
        border[k + 1] = b;
    }
    border
}

/// Length of the shortest period of a non-empty plain string.
pub fn principle_period(s: &[Symbol]) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(s.len() - borders(s)[s.len()])
}

/// `true` iff the principal period is at most half the length.
pub fn is_periodic(s: &[Symbol]) -> Result<bool> {
    Ok(2 * principle_period(s)? <= s.len())
}

/// Principal period of a pattern that must not contain wildcards.
pub fn pattern_period(p: &Pattern) -> Result<usize> {
    let plain = plain_symbols(p)?;
    principle_period(&plain)
}

fn plain_symbols(p: &Pattern) -> Result<Vec<Symbol>> {
    p.symbols()
        .iter()
        .enumerate()
        .map(|(i, s)| s.ok_or(Error::UnexpectedWildcard(i)))
        .collect()
}

/// Which shifts of a pattern can overlap itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftCompat {
    pattern_len: usize,
    // compatible[delta], index 0 unused (always true).
    compatible: Vec<bool>,
}

impl ShiftCompat {
    pub fn new(p: &Pattern) -> Self {
        let m = p.len();
        let s = p.symbols();
        let mut compatible = vec![true; m];
        for (delta, slot) in compatible.iter_mut().enumerate().skip(1) {
            *slot = (0..m - delta).all(|k| match (s[k], s[k + delta]) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            });
        }
        Self {
            pattern_len: m,
            compatible,
        }
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern_len
    }

    /// Whether two copies of the pattern offset by `delta` agree.
    pub fn is_compatible(&self, delta: usize) -> bool {
        delta == 0 || (delta < self.pattern_len && self.compatible[delta])
    }

    /// Whether offsets `a` and `b` can both hold an occurrence.
    pub fn pair(&self, a: usize, b: usize) -> bool {
        self.is_compatible(a.abs_diff(b))
    }
}

/// Greedy pairwise-compatible offset set, ascending, always containing 0.
pub fn greedy_shift_set(p: &Pattern) -> Vec<usize> {
    let compat = ShiftCompat::new(p);
    let mut chosen = vec![0usize];
    for s in 1..p.len() {
        if chosen.iter().all(|&c| compat.pair(c, s)) {
            chosen.push(s);
        }
    }
    chosen
}

/// Maximum number of occurrences of `p` in any text of length `2|p| - 1`.
pub fn max_window_occurrences(p: &Pattern) -> Result<usize> {
    max_window_occurrences_capped(p, EXACT_CAP)
}

pub fn max_window_occurrences_capped(p: &Pattern, cap: usize) -> Result<usize> {
    let m = p.len();
    if m > cap || m > 64 {
        return Err(Error::AboveExactCap { len: m, cap });
    }
    let compat = ShiftCompat::new(p);
    // adjacency over offsets 1..m restricted to those compatible with 0
    let mut adj = vec![0u64; m];
    for (a, row) in adj.iter_mut().enumerate().skip(1) {
        for b in 1..m {
            if a != b && compat.pair(a, b) {
                *row |= 1 << b;
            }
        }
    }
    let mut candidates = 0u64;
    for s in 1..m {
        if compat.is_compatible(s) {
            candidates |= 1 << s;
        }
    }
    let mut best = greedy_shift_set(p).len() - 1;
    max_clique(&adj, 0, candidates, &mut best);
    Ok(best + 1)
}

// Branch and bound over bitsets; `best` counts vertices beyond offset 0.
fn max_clique(adj: &[u64], size: usize, mut candidates: u64, best: &mut usize) {
    if candidates == 0 {
        if size > *best {
            *best = size;
        }
        return;
    }
    while candidates != 0 {
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        candidates &= !(1 << v);
        max_clique(adj, size + 1, candidates & adj[v], best);
    }
    if size > *best {
        *best = size;
    }
}

/// Exact wildcard-period length for patterns within [`EXACT_CAP`].
pub fn wildcard_period_length(p: &Pattern) -> Result<usize> {
    wildcard_period_length_capped(p, EXACT_CAP)
}

pub fn wildcard_period_length_capped(p: &Pattern, cap: usize) -> Result<usize> {
    let occ = max_window_occurrences_capped(p, cap)?;
    Ok(p.len().div_ceil(occ))
}

/// An upper bound on the wildcard-period length valid at any length.
///
/// The greedy set is realizable, so its size is at most the true maximum
/// occurrence count and the resulting ceiling can only be larger.
pub fn certified_pi_upper_bound(p: &Pattern) -> usize {
    p.len().div_ceil(greedy_shift_set(p).len())
}

/// Wildcard-period value used when scanning prefixes: exact under the cap,
/// the certified upper bound above it. The flag says whether it is exact.
pub fn pi_or_bound(p: &Pattern, cap: usize) -> (usize, bool) {
    match wildcard_period_length_capped(p, cap) {
        Ok(pi) => (pi, true),
        Err(_) => (certified_pi_upper_bound(p), false),
    }
}
