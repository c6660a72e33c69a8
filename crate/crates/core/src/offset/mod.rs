//! Matching through residue-class decompositions of the pattern.

pub mod cover;
pub mod dictionary;
pub mod instance;
pub mod smallwp;

pub use cover::{build_prime_cover, PrimeCover};
pub use dictionary::{EqualLengthDictionary, DUMMY_ID};
pub use instance::{gamma_size, LengthClass, OffsetInstance};
pub use smallwp::SmallWpMatcher;
