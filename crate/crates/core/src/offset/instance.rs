//! Column decomposition of a pattern modulo a prime.
//!
//! Writing the pattern row by row into a matrix with `q` columns, column
//! `r` is `p_r p_{r+q} p_{r+2q} ...`. An occurrence of the pattern at `s`
//! makes every column appear in the offset text of residue `(s + r) mod q`,
//! ending at some position in `[s+m-q, s+m-1]`. Emitting the id of each
//! detected column yields a column text, and the pattern's columns ordered
//! by their end position form a length-`q` column pattern that occurs there.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::dictionary::EqualLengthDictionary;
use crate::engine::{MatcherState, StreamMatcher};
use crate::error::Result;
use crate::fingerprint::FieldParams;
use crate::pattern::{Pattern, Symbol};

/// Which of the (at most two) column lengths an instance handles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LengthClass {
    Floor,
    Ceil,
}

impl LengthClass {
    pub fn column_len(self, m: usize, q: usize) -> usize {
        match self {
            LengthClass::Floor => m / q,
            LengthClass::Ceil => m.div_ceil(q),
        }
    }

    /// Classes present for `q < m`.
    pub fn for_modulus(m: usize, q: usize) -> Vec<LengthClass> {
        if m % q == 0 {
            vec![LengthClass::Floor]
        } else {
            vec![LengthClass::Floor, LengthClass::Ceil]
        }
    }
}

/// Column `r` of the pattern modulo `q`.
pub fn column(p: &Pattern, q: usize, r: usize) -> Vec<Option<Symbol>> {
    p.symbols().iter().skip(r).step_by(q).copied().collect()
}

/// Number of distinct wildcard-free non-empty columns modulo `q`.
pub fn gamma_size(p: &Pattern, q: usize) -> usize {
    assert!(q >= 1);
    let mut seen: Vec<Vec<Option<Symbol>>> = (0..q.min(p.len()))
        .map(|r| column(p, q, r))
        .filter(|c| c.iter().all(Option::is_some))
        .collect();
    seen.sort();
    seen.dedup();
    seen.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnInfo {
    pub residue: usize,
    pub content: Vec<Option<Symbol>>,
    /// Shared by equal columns; `None` for columns outside the class or with a wildcard.
    pub id: Option<u64>,
}

#[derive(Debug, Clone)]
enum Body {
    Columns {
        dictionary: EqualLengthDictionary,
        nested: Box<MatcherState>,
    },
    // q >= m: every column is a single character
    Direct(Box<MatcherState>),
}

#[derive(Debug, Clone)]
pub struct OffsetInstance {
    q: usize,
    class: LengthClass,
    column_len: usize,
    columns: Vec<ColumnInfo>,
    column_pattern: Vec<Option<u64>>,
    body: Body,
}

impl OffsetInstance {
    pub fn build(p: &Pattern, q: usize, class: LengthClass, params: FieldParams) -> Result<Self> {
        assert!(q >= 2, "modulus must be at least 2");
        let m = p.len();
        if q >= m {
            let columns = (0..m)
                .map(|r| ColumnInfo {
                    residue: r,
                    content: vec![p.get(r)],
                    id: None,
                })
                .collect();
            return Ok(Self {
                q,
                class,
                column_len: 1,
                columns,
                column_pattern: Vec::new(),
                body: Body::Direct(Box::new(MatcherState::preprocess(p, params)?)),
            });
        }

        let column_len = class.column_len(m, q);
        let mut ids: HashMap<Vec<Symbol>, u64> = HashMap::new();
        let mut columns = Vec::with_capacity(q);
        for r in 0..q {
            let content = column(p, q, r);
            let id = if content.len() == column_len && content.iter().all(Option::is_some) {
                let key: Vec<Symbol> = content.iter().map(|c| c.unwrap()).collect();
                let next = ids.len() as u64 + 1;
                Some(*ids.entry(key).or_insert(next))
            } else {
                None
            };
            columns.push(ColumnInfo {
                residue: r,
                content,
                id,
            });
        }
        // position x holds the column through pattern index m - q + x
        let column_pattern: Vec<Option<u64>> =
            (0..q).map(|x| columns[(m - q + x) % q].id).collect();

        let dictionary = EqualLengthDictionary::new(
            params,
            column_len,
            q,
            ids.iter().map(|(s, &id)| (s.as_slice(), id)),
        );
        let nested = MatcherState::preprocess(&Pattern::new(column_pattern.clone())?, params)?;
        Ok(Self {
            q,
            class,
            column_len,
            columns,
            column_pattern,
            body: Body::Columns {
                dictionary,
                nested: Box::new(nested),
            },
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn class(&self) -> LengthClass {
        self.class
    }

    pub fn column_len(&self) -> usize {
        self.column_len
    }

    pub fn is_direct(&self) -> bool {
        matches!(self.body, Body::Direct(_))
    }

    pub fn columns(&self) -> &[ColumnInfo] {
        &self.columns
    }

    /// The id sequence matched over the column text; `None` is a wildcard.
    pub fn column_pattern(&self) -> &[Option<u64>] {
        &self.column_pattern
    }

    /// Distinct columns in this instance's table, ordered by id.
    pub fn gamma(&self) -> Vec<(u64, Vec<Symbol>)> {
        let mut out: Vec<(u64, Vec<Symbol>)> = Vec::new();
        for c in &self.columns {
            if let Some(id) = c.id {
                if out.iter().all(|(seen, _)| *seen != id) {
                    out.push((id, c.content.iter().map(|s| s.unwrap()).collect()));
                }
            }
        }
        out.sort();
        out
    }

    /// Consumes `t_alpha`; true when this instance sees an occurrence ending at `alpha`.
    pub fn process(&mut self, alpha: usize, ch: Symbol) -> bool {
        match &mut self.body {
            Body::Columns { dictionary, nested } => {
                let id = dictionary.process(alpha, ch);
                nested.process_char(id).is_some()
            }
            Body::Direct(engine) => engine.process_char(ch).is_some(),
        }
    }

    pub fn nested_metrics(&self) -> crate::engine::Metrics {
        match &self.body {
            Body::Columns { nested, .. } => nested.snapshot_metrics(),
            Body::Direct(engine) => engine.snapshot_metrics(),
        }
    }

    pub fn words_used(&self) -> usize {
        let dict = match &self.body {
            Body::Columns { dictionary, .. } => dictionary.words_used(),
            Body::Direct(_) => 0,
        };
        dict + self.nested_metrics().words_used
    }
}

fn show(s: Option<Symbol>) -> String {
    match s {
        None => "?".into(),
        Some(c) if c < 128 && (c as u8).is_ascii_graphic() => (c as u8 as char).to_string(),
        Some(c) => format!("<{c}>"),
    }
}

impl fmt::Display for OffsetInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "q {} class {:?} column_len {}",
            self.q, self.class, self.column_len
        )?;
        for c in &self.columns {
            let text: String = c.content.iter().map(|&s| show(s)).collect();
            match c.id {
                Some(id) => writeln!(f, "  r {:>3} {text} id {id}", c.residue)?,
                None => writeln!(f, "  r {:>3} {text} -", c.residue)?,
            }
        }
        if !self.is_direct() {
            let ids: Vec<String> = self
                .column_pattern
                .iter()
                .map(|c| c.map_or("?".to_string(), |id| id.to_string()))
                .collect();
            writeln!(f, "  pattern {}", ids.join(" "))?;
        }
        Ok(())
    }
}
