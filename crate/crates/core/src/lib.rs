//! Fixed-length burst Levenshtein balls over q-ary alphabets.
//!
//! A burst of `b` deletions removes `b` consecutive symbols; a burst of
//! `b` insertions inserts `b` consecutive symbols. The radius-`t` ball
//! around a word collects everything reachable by `t` deletion bursts
//! followed by `t` insertion bursts. This crate pairs brute-force
//! enumeration oracles for these balls with exact closed forms for their
//! sizes, extremal bounds, and expectations, plus the sweep/scan/Monte
//! Carlo experiments that verify one against the other.
//!
//! All arithmetic is exact: big integers and big rationals by default
//! (the [`Int`] and [`Rat`] aliases), with every formula generic over the
//! integer scalar via [`scalar::ExactInt`].
//!
//! ```
//! use burstlev::formulas::explicit_ball_size;
//! use burstlev::oracle::levenshtein_ball;
//! use burstlev::{BallParams, Int, Word};
//!
//! let x = Word::parse("00110", 2)?;
//! let breakdown = x.size_breakdown(2)?;
//! let params = BallParams::new(5, 2, 2, 1)?;
//! let formula: Int = explicit_ball_size(&breakdown, &params)?;
//! assert_eq!(formula, Int::from(25));
//! assert_eq!(formula, Int::from(levenshtein_ball(&x, 2, 1)?.len()));
//! # Ok::<(), burstlev::Error>(())
//! ```

pub mod enclosure;
pub mod error;
pub mod experiments;
pub mod formulas;
pub mod oracle;
pub mod runs;
pub mod scalar;
pub mod word;

pub use error::{Error, Result};
pub use formulas::BallParams;
pub use oracle::WordSet;
pub use word::{SizeBreakdown, Word};

/// Default exact integer scalar.
pub type Int = num_bigint::BigInt;
/// Default exact rational scalar.
pub type Rat = num_rational::BigRational;
