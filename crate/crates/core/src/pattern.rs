use std::fmt;

use crate::error::{Error, Result};

/// A text character. Bytes embed directly; nested matchers run over column ids.
pub type Symbol = u64;

/// Default wildcard byte.
pub const WILDCARD: u8 = b'?';

/// A pattern over `Symbol`s where `None` is the wildcard.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    symbols: Vec<Option<Symbol>>,
}

impl Pattern {
    pub fn new(symbols: Vec<Option<Symbol>>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(Self { symbols })
    }

    /// Parses a byte pattern in which `wildcard` marks a don't-care position.
    pub fn from_bytes(bytes: &[u8], wildcard: u8) -> Result<Self> {
        Self::new(
            bytes
                .iter()
                .map(|&b| (b != wildcard).then_some(Symbol::from(b)))
                .collect(),
        )
    }

    /// Parses with the default `?` wildcard.
    pub fn parse(s: &str) -> Result<Self> {
        Self::from_bytes(s.as_bytes(), WILDCARD)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Option<Symbol>] {
        &self.symbols
    }

    pub fn get(&self, idx: usize) -> Option<Symbol> {
        self.symbols[idx]
    }

    pub fn is_wildcard(&self, idx: usize) -> bool {
        self.symbols[idx].is_none()
    }

    /// Ascending wildcard indices.
    pub fn wildcard_positions(&self) -> Vec<usize> {
        self.symbols
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.is_none().then_some(i))
            .collect()
    }

    pub fn wildcard_count(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_none()).count()
    }

    /// The first `len` positions as a pattern of its own.
    pub fn prefix(&self, len: usize) -> Pattern {
        assert!(len >= 1 && len <= self.len(), "prefix length out of range");
        Pattern {
            symbols: self.symbols[..len].to_vec(),
        }
    }

    /// Whether `window` (same length as the pattern) matches.
    pub fn matches_at(&self, window: &[Symbol]) -> bool {
        window.len() == self.len()
            && self
                .symbols
                .iter()
                .zip(window)
                .all(|(p, t)| p.map_or(true, |p| p == *t))
    }

    /// The literal symbols of `lo..=hi`, or `None` if the range spans a wildcard.
    pub fn literal(&self, lo: usize, hi: usize) -> Option<Vec<Symbol>> {
        self.symbols[lo..=hi].iter().copied().collect()
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern(\"{self}\")")
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            match s {
                None => f.write_str("?")?,
                Some(v) if *v < 128 && (*v as u8).is_ascii_graphic() => {
                    write!(f, "{}", *v as u8 as char)?
                }
                Some(v) => write!(f, "<{v}>")?,
            }
        }
        Ok(())
    }
}

/// Widens bytes into symbols.
pub fn symbols_of(bytes: &[u8]) -> Vec<Symbol> {
    bytes.iter().map(|&b| Symbol::from(b)).collect()
}
