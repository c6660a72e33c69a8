//! Streaming dictionary matching for entries of a single common length.
//!
//! The text is split into `q` interleaved offset texts by position modulo
//! `q`. Each keeps its last `len` characters and their fingerprint; when
//! the window fingerprint is in the table, the entry id is emitted.

use std::collections::{HashMap, VecDeque};

use crate::fingerprint::{FieldParams, Fingerprint};
use crate::pattern::Symbol;

/// Id emitted when no entry ends at the current position.
pub const DUMMY_ID: u64 = 0;

#[derive(Debug, Clone, Default)]
struct Window {
    chars: VecDeque<Symbol>,
    fp: Fingerprint,
}

#[derive(Debug, Clone)]
pub struct EqualLengthDictionary {
    params: FieldParams,
    len: usize,
    table: HashMap<Fingerprint, u64>,
    windows: Vec<Window>,
}

impl EqualLengthDictionary {
    /// `entries` are `(string, id)` pairs with ids `>= 1`, all of length `len`.
    pub fn new<'a>(
        params: FieldParams,
        len: usize,
        residues: usize,
        entries: impl IntoIterator<Item = (&'a [Symbol], u64)>,
    ) -> Self {
        assert!(len >= 1 && residues >= 1);
        let table = entries
            .into_iter()
            .map(|(s, id)| {
                assert_eq!(s.len(), len, "dictionary entries share one length");
                assert_ne!(id, DUMMY_ID);
                (params.of(s), id)
            })
            .collect();
        Self {
            params,
            len,
            table,
            windows: vec![Window::default(); residues],
        }
    }

    pub fn entry_len(&self) -> usize {
        self.len
    }

    pub fn entries(&self) -> usize {
        self.table.len()
    }

    /// Consumes `t_alpha` into offset text `alpha mod q`.
    pub fn process(&mut self, alpha: usize, ch: Symbol) -> u64 {
        let q = self.windows.len();
        let w = &mut self.windows[alpha % q];
        w.chars.push_back(ch);
        w.fp = self.params.append(&w.fp, ch);
        if w.chars.len() > self.len {
            let old = w.chars.pop_front().unwrap();
            w.fp =
                w.fp.remove_prefix(&self.params.of_symbol(old))
                    .expect("window holds the removed character");
        }
        if w.chars.len() < self.len {
            return DUMMY_ID;
        }
        self.table.get(&w.fp).copied().unwrap_or(DUMMY_ID)
    }

    /// Buffered characters plus table entries.
    pub fn words_used(&self) -> usize {
        self.windows
            .iter()
            .map(|w| w.chars.len() + 4)
            .sum::<usize>()
            + 5 * self.table.len()
    }
}
