//! Exact Littelmann path model, alcove galleries and saturation checks.
//!
//! All arithmetic is over exact rationals. Coweights are written in the
//! basis of fundamental coweights, so `α_i(x)` is the `i`-th coordinate.

pub mod alcove;
pub mod coweight;
pub mod galleries;
pub mod paths;
pub mod repthy;
pub mod rootsys;
pub mod weyl;

pub use coweight::{Coweight, Q};
pub use rootsys::{CartanType, RootSystem};

/// Library version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
