//! Uniform construction of every matcher behind [`StreamMatcher`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::engine::{EngineOptions, MatcherState, StreamMatcher};
use crate::error::{Error, Result};
use crate::fingerprint::FieldParams;
use crate::offset::SmallWpMatcher;
use crate::pattern::Pattern;
use crate::reference::{NaiveStream, PrelimStream, WindowOracle};
use crate::tradeoff::TradeoffState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Thm1,
    SmallWp,
    Tradeoff,
    Naive,
    Prelim,
    Oracle,
}

impl EngineKind {
    pub const ALL: [EngineKind; 6] = [
        EngineKind::Thm1,
        EngineKind::SmallWp,
        EngineKind::Tradeoff,
        EngineKind::Naive,
        EngineKind::Prelim,
        EngineKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Thm1 => "thm1",
            EngineKind::SmallWp => "smallwp",
            EngineKind::Tradeoff => "tradeoff",
            EngineKind::Naive => "naive",
            EngineKind::Prelim => "prelim",
            EngineKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EngineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown engine `{s}`")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub seed: u64,
    /// Tradeoff exponent; defaults to 0.5.
    pub delta: Option<f64>,
    pub engine: EngineOptions,
}

impl BuildOptions {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            delta: None,
            engine: EngineOptions::default(),
        }
    }
}

pub const DEFAULT_DELTA: f64 = 0.5;

pub fn build_matcher(
    kind: EngineKind,
    p: &Pattern,
    opts: &BuildOptions,
) -> Result<Box<dyn StreamMatcher>> {
    let params = FieldParams::from_seed(opts.seed);
    Ok(match kind {
        EngineKind::Thm1 => Box::new(MatcherState::with_options(p, params, opts.engine)?),
        EngineKind::SmallWp => Box::new(SmallWpMatcher::new(p, params)?),
        EngineKind::Tradeoff => Box::new(TradeoffState::new(
            p,
            params,
            opts.delta.unwrap_or(DEFAULT_DELTA),
        )?),
        EngineKind::Naive => Box::new(NaiveStream::new(p)),
        EngineKind::Prelim => Box::new(PrelimStream::new(p, params)),
        EngineKind::Oracle => Box::new(WindowOracle::new(p)),
    })
}
