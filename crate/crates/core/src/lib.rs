//! Streaming pattern matching for patterns with wildcards.
//!
//! The text arrives one character at a time and every occurrence of the
//! pattern is reported as soon as its last character is read. Matching is
//! Monte Carlo: fingerprints are drawn from a seeded Karp-Rabin family and a
//! false positive has probability polynomially small in the text length.

pub mod bench;
pub mod candidate_queue;
pub mod difftest;
pub mod engine;
pub mod error;
pub mod fingerprint;
pub mod matchers;
pub mod offset;
pub mod partition;
pub mod pattern;
pub mod periodicity;
pub mod reference;
pub mod tradeoff;

pub use candidate_queue::{CandidateFingerprintQueue, SatelliteInfo};
pub use engine::{run_to_end, EngineOptions, MatchReport, MatcherState, Metrics, StreamMatcher};
pub use error::{Error, Result};
pub use fingerprint::{FieldParams, Fingerprint};
pub use matchers::{build_matcher, BuildOptions, EngineKind};
pub use offset::{build_prime_cover, gamma_size, OffsetInstance, PrimeCover, SmallWpMatcher};
pub use partition::{
    preliminary_partition, secondary_partition, verify_partition_properties, IntervalKind,
    IntervalPartition, PatternInterval, Violation,
};
pub use pattern::{symbols_of, Pattern, Symbol, WILDCARD};
pub use periodicity::{principle_period, wildcard_period_length};
pub use reference::{oracle_match, NaiveStream, OracleResult, PrelimStream, WindowOracle};
pub use tradeoff::{compute_p_star, AmortizedReport, TradeoffState};
