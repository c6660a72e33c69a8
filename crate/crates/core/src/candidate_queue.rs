//! Candidate-fingerprint-queues.
//!
//! A queue for pattern interval `[i, j]` holds the live candidates whose
//! text interval is `[alpha - j + 1, alpha - i + 1]`. Candidates whose
//! entrance prefix equals the interval's distinguished string `u_I` sit at
//! positions in arithmetic progression with difference `rho(u_I)` and are
//! kept as one O(1)-word block; everything else is stored explicitly with
//! its satellite fingerprints.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fingerprint::{FieldParams, Fingerprint};
use crate::partition::{IntervalKind, PatternInterval};
use crate::pattern::{Pattern, Symbol};
use crate::periodicity::principle_period;

/// Words charged for one explicitly stored candidate: a position plus two
/// fingerprints at two words each, rounded up.
pub const ENTRY_WORDS: usize = 6;

/// Fixed words per queue for the progression block and the `u_I` data.
pub const QUEUE_BASE_WORDS: usize = 12;

/// Fingerprints carried with a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatelliteInfo {
    /// `candidate_fp = fp(t_0..t_{c-1})`, `entrance_fp = fp(t_c..t_{c+i-1})`.
    Full {
        candidate_fp: Fingerprint,
        entrance_fp: Fingerprint,
    },
    /// Only `fp(t_0..t_{c+i-1})`; used for injected candidates.
    Reduced { entry_text_fp: Fingerprint },
}

impl SatelliteInfo {
    /// `fp(t_0..t_{c+i-1})`.
    pub fn entry_text_fp(&self) -> Fingerprint {
        match self {
            SatelliteInfo::Full {
                candidate_fp,
                entrance_fp,
            } => candidate_fp.concat(entrance_fp),
            SatelliteInfo::Reduced { entry_text_fp } => *entry_text_fp,
        }
    }

    pub fn candidate_fp(&self) -> Option<Fingerprint> {
        match self {
            SatelliteInfo::Full { candidate_fp, .. } => Some(*candidate_fp),
            SatelliteInfo::Reduced { .. } => None,
        }
    }

    pub fn entrance_fp(&self) -> Option<Fingerprint> {
        match self {
            SatelliteInfo::Full { entrance_fp, .. } => Some(*entrance_fp),
            SatelliteInfo::Reduced { .. } => None,
        }
    }
}

/// Precomputed data for the distinguished entrance prefix `u_I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UiData {
    pub exists: bool,
    pub u_fp: Fingerprint,
    pub rho: usize,
    pub period_fp: Fingerprint,
}

/// The only string that can be the entrance prefix of three simultaneous
/// candidates of `interval`, with its principal period.
///
/// Any such prefix contains a periodic run `v` of `|I|` non-wildcards taken
/// from the pattern prefix, and must be the `rho(v)`-periodic extension of
/// `v` over the whole prefix. If that extension disagrees with a literal of
/// the prefix, no such string exists.
pub fn ui_completion(p: &Pattern, interval: &PatternInterval) -> Option<(Vec<Symbol>, usize)> {
    if interval.kind != IntervalKind::Regular || interval.len() < 2 {
        return None;
    }
    let (i, len) = (interval.lo, interval.len());
    let run_start = find_run(p, i, len)?;
    let v = p.literal(run_start, run_start + len - 1)?;
    let rho = principle_period(&v).ok()?;
    if 2 * rho > len {
        return None;
    }
    let u: Vec<Symbol> = (0..i).map(|k| v[(k + rho * i - run_start) % rho]).collect();
    let consistent = (0..i).all(|k| p.get(k).map_or(true, |c| c == u[k]));
    consistent.then_some((u, rho))
}

// Start of the first run of `len` non-wildcards inside p[..end].
fn find_run(p: &Pattern, end: usize, len: usize) -> Option<usize> {
    let mut run = 0;
    for k in 0..end {
        run = if p.is_wildcard(k) { 0 } else { run + 1 };
        if run == len {
            return Some(k + 1 - len);
        }
    }
    None
}

pub fn precompute_ui(p: &Pattern, interval: &PatternInterval, params: &FieldParams) -> UiData {
    match ui_completion(p, interval) {
        Some((u, rho)) => UiData {
            exists: true,
            u_fp: params.of(&u),
            rho,
            period_fp: params.of(&u[..rho]),
        },
        None => UiData::default(),
    }
}

/// Compressed run of candidates sharing entrance prefix `u_I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApBlock {
    pub first_pos: usize,
    pub first_candidate_fp: Fingerprint,
    pub diff: usize,
    pub count: usize,
}

impl ApBlock {
    pub fn last_pos(&self) -> usize {
        self.first_pos + (self.count - 1) * self.diff
    }
}

/// Where an enqueued candidate was stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    Progression,
    Explicit,
    /// Matched `u_I` but broke the progression spacing.
    ExplicitFallback,
}

/// A candidate leaving its text interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exit {
    pub pos: usize,
    pub candidate_fp: Option<Fingerprint>,
    pub entry_text_fp: Fingerprint,
}

// Every stored candidate with its entrance fingerprint, for invariant checks.
#[derive(Debug, Clone, Default)]
struct Shadow {
    entries: VecDeque<(usize, Option<Fingerprint>)>,
    violations: u64,
}

#[derive(Debug, Clone)]
pub struct CandidateFingerprintQueue {
    index: usize,
    interval: PatternInterval,
    ui: UiData,
    ap: Option<ApBlock>,
    explicit: VecDeque<(usize, SatelliteInfo)>,
    last_enqueued: Option<usize>,
    fallbacks: u64,
    shadow: Option<Shadow>,
}

impl CandidateFingerprintQueue {
    pub fn new(index: usize, interval: PatternInterval, ui: UiData) -> Self {
        Self {
            index,
            interval,
            ui,
            ap: None,
            explicit: VecDeque::new(),
            last_enqueued: None,
            fallbacks: 0,
            shadow: None,
        }
    }

    /// Keeps a full copy of all candidates to check the progression invariant.
    pub fn enable_shadow(&mut self) {
        self.shadow = Some(Shadow::default());
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn interval(&self) -> &PatternInterval {
        &self.interval
    }

    pub fn ui(&self) -> &UiData {
        &self.ui
    }

    pub fn ap(&self) -> Option<&ApBlock> {
        self.ap.as_ref()
    }

    pub fn explicit_len(&self) -> usize {
        self.explicit.len()
    }

    pub fn len(&self) -> usize {
        self.explicit.len() + self.ap.map_or(0, |ap| ap.count)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Candidates that matched `u_I` but had to go to the explicit list.
    pub fn fallbacks(&self) -> u64 {
        self.fallbacks
    }

    pub fn shadow_violations(&self) -> u64 {
        self.shadow.as_ref().map_or(0, |s| s.violations)
    }

    pub fn words_used(&self) -> usize {
        QUEUE_BASE_WORDS + ENTRY_WORDS * self.explicit.len()
    }

    fn check_order(&mut self, c: usize) -> Result<()> {
        if let Some(last) = self.last_enqueued {
            if c <= last {
                return Err(Error::OutOfOrder {
                    pos: c,
                    expected: last + 1,
                });
            }
        }
        self.last_enqueued = Some(c);
        Ok(())
    }

    /// Adds candidate `c` given its candidate fingerprint and the current
    /// text fingerprint `fp(t_0..t_{c+i-1})`.
    pub fn enqueue_full(
        &mut self,
        c: usize,
        candidate_fp: Fingerprint,
        text_fp_now: &Fingerprint,
    ) -> Result<Placement> {
        debug_assert_eq!(candidate_fp.len() as usize, c);
        debug_assert_eq!(text_fp_now.len() as usize, c + self.interval.lo);
        self.check_order(c)?;
        let entrance_fp = text_fp_now.remove_prefix(&candidate_fp)?;
        self.shadow_push(c, Some(entrance_fp));

        if self.ui.exists && entrance_fp == self.ui.u_fp {
            match &mut self.ap {
                Some(ap) if ap.count > 0 => {
                    if c == ap.last_pos() + ap.diff {
                        ap.count += 1;
                        return Ok(Placement::Progression);
                    }
                }
                _ => {
                    self.ap = Some(ApBlock {
                        first_pos: c,
                        first_candidate_fp: candidate_fp,
                        diff: self.ui.rho,
                        count: 1,
                    });
                    return Ok(Placement::Progression);
                }
            }
            self.fallbacks += 1;
            self.explicit.push_back((
                c,
                SatelliteInfo::Full {
                    candidate_fp,
                    entrance_fp,
                },
            ));
            return Ok(Placement::ExplicitFallback);
        }
        self.explicit.push_back((
            c,
            SatelliteInfo::Full {
                candidate_fp,
                entrance_fp,
            },
        ));
        Ok(Placement::Explicit)
    }

    /// Adds candidate `c` carrying only `fp(t_0..t_{c+i-1})`.
    pub fn enqueue_reduced(&mut self, c: usize, entry_text_fp: Fingerprint) -> Result<Placement> {
        debug_assert_eq!(entry_text_fp.len() as usize, c + self.interval.lo);
        self.check_order(c)?;
        self.shadow_push(c, None);
        self.explicit
            .push_back((c, SatelliteInfo::Reduced { entry_text_fp }));
        Ok(Placement::Explicit)
    }

    /// Smallest stored position.
    pub fn head(&self) -> Option<usize> {
        let ap = self.ap.filter(|ap| ap.count > 0).map(|ap| ap.first_pos);
        let ex = self.explicit.front().map(|&(pos, _)| pos);
        match (ap, ex) {
            (Some(a), Some(e)) => Some(a.min(e)),
            (a, e) => a.or(e),
        }
    }

    /// Removes the candidate at `alpha - j`, if one is stored.
    pub fn dequeue(&mut self, alpha: usize) -> Option<Exit> {
        let target = alpha.checked_sub(self.interval.hi)?;
        let head = self.head()?;
        debug_assert!(
            head >= target,
            "candidate {head} missed its exit at {target}"
        );
        if head != target {
            return None;
        }
        self.shadow_pop(head);
        if let Some(ap) = self
            .ap
            .as_mut()
            .filter(|ap| ap.count > 0 && ap.first_pos == head)
        {
            let candidate_fp = ap.first_candidate_fp;
            ap.count -= 1;
            if ap.count > 0 {
                ap.first_pos += ap.diff;
                ap.first_candidate_fp = candidate_fp.concat(&self.ui.period_fp);
            } else {
                self.ap = None;
            }
            return Some(Exit {
                pos: head,
                candidate_fp: Some(candidate_fp),
                entry_text_fp: candidate_fp.concat(&self.ui.u_fp),
            });
        }
        let (pos, si) = self
            .explicit
            .pop_front()
            .expect("head came from the explicit list");
        Some(Exit {
            pos,
            candidate_fp: si.candidate_fp(),
            entry_text_fp: si.entry_text_fp(),
        })
    }

    /// Time at which the smallest stored candidate leaves: `head + j`.
    pub fn peek_next_exit(&self) -> Option<usize> {
        self.head().map(|h| h + self.interval.hi)
    }

    /// All stored candidates in position order with resolved satellite info.
    pub fn entries(&self) -> Vec<(usize, SatelliteInfo, bool)> {
        let mut out = Vec::with_capacity(self.len());
        if let Some(ap) = self.ap {
            let mut fp = ap.first_candidate_fp;
            for k in 0..ap.count {
                out.push((
                    ap.first_pos + k * ap.diff,
                    SatelliteInfo::Full {
                        candidate_fp: fp,
                        entrance_fp: self.ui.u_fp,
                    },
                    true,
                ));
                fp = fp.concat(&self.ui.period_fp);
            }
        }
        out.extend(self.explicit.iter().map(|&(pos, si)| (pos, si, false)));
        out.sort_by_key(|e| e.0);
        out
    }

    /// One `pos kind` line per stored candidate.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (pos, _, in_ap) in self.entries() {
            let _ = writeln!(s, "{pos} {}", if in_ap { "ap" } else { "explicit" });
        }
        s
    }

    fn shadow_push(&mut self, c: usize, entrance: Option<Fingerprint>) {
        let ui = self.ui;
        let Some(shadow) = self.shadow.as_mut() else {
            return;
        };
        shadow.entries.push_back((c, entrance));
        let Some(fp) = entrance else {
            return;
        };
        let group: Vec<usize> = shadow
            .entries
            .iter()
            .filter(|(_, e)| *e == Some(fp))
            .map(|&(p, _)| p)
            .collect();
        if group.len() >= 3 {
            let ok = ui.exists && fp == ui.u_fp && group.windows(2).all(|w| w[1] - w[0] == ui.rho);
            if !ok {
                shadow.violations += 1;
            }
        }
    }

    fn shadow_pop(&mut self, pos: usize) {
        if let Some(shadow) = self.shadow.as_mut() {
            let front = shadow.entries.pop_front();
            debug_assert_eq!(front.map(|e| e.0), Some(pos));
        }
    }
}
