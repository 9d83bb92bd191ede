//! Membership in the typical code: near-average run count and no long
//! 2b-periodic substring. Backs the census and the concentration runs.

use std::time::Instant;

use serde::Serialize;

use super::sampling::sample_word;
use super::shard::run_sharded;
use super::{rat_decimal, rat_str};
use crate::enclosure::{ln_enclosure, sqrt_enclosure};
use crate::error::{Error, Result};
use crate::word::{for_each_word_in_range, word_count, Word};
use crate::{Int, Rat};

/// Precision of the directed-rounding enclosures, in bits.
const ENCLOSURE_BITS: u32 = 96;

/// The membership thresholds of the typical code, precomputed as exact
/// rationals with directed rounding: the run-count window is shrunk and
/// the periodic-length threshold lowered, so membership is never granted
/// by rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalityBounds {
    pub n: usize,
    pub q: u32,
    pub b: usize,
    pub run_lower: Rat,
    pub run_upper: Rat,
    pub periodic_threshold: Rat,
}

impl TypicalityBounds {
    /// Bounds for `Sigma_q^n` and burst length `b`:
    /// run count within `((q-1)/q ± sqrt(ln n / (2(n-b)))) (n-b)`
    /// (`+2` on the lower side), longest 2b-periodic substring shorter
    /// than `2 log_q n + 2b`.
    pub fn new(n: usize, q: u32, b: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        if b < 1 || n < b + 1 {
            return Err(Error::domain(format!(
                "typicality bounds need n >= b + 1, got n={n}, b={b}"
            )));
        }
        let int = |v: usize| Rat::from_integer(Int::from(v));
        let ln_n = ln_enclosure(&int(n), ENCLOSURE_BITS);
        let ln_q = ln_enclosure(&int(q as usize), ENCLOSURE_BITS);
        let nb = int(n - b);
        // delta = sqrt(ln n / (2(n-b))); its lower bound shrinks the
        // window on both sides
        let delta_lo = sqrt_enclosure(&(&ln_n.lo / (&nb * int(2))), ENCLOSURE_BITS).lo;
        let ratio = Rat::new(Int::from(q - 1), Int::from(q));
        let run_lower = (&ratio - &delta_lo) * &nb + int(2);
        let run_upper = (&ratio + &delta_lo) * &nb;
        // 2 ln n / ln q + 2b, rounded down
        let periodic_threshold = int(2) * &ln_n.lo / &ln_q.hi + int(2 * b);
        Ok(TypicalityBounds {
            n,
            q,
            b,
            run_lower,
            run_upper,
            periodic_threshold,
        })
    }

    pub fn is_member_stats(&self, run_count: usize, max_periodic: usize) -> bool {
        let r = Rat::from_integer(Int::from(run_count));
        let m = Rat::from_integer(Int::from(max_periodic));
        self.run_lower <= r && r <= self.run_upper && m < self.periodic_threshold
    }

    pub fn is_member(&self, x: &Word) -> Result<bool> {
        if x.n() != self.n || x.q() != self.q {
            return Err(Error::domain("word shape does not match the bounds"));
        }
        Ok(self.is_member_stats(
            x.b_run_count(self.b)?,
            x.max_periodic_substring_length(2 * self.b),
        ))
    }
}

/// Per-word typicality evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypicalityReport {
    pub word: String,
    pub n: usize,
    pub q: u32,
    pub b: usize,
    pub run_count: usize,
    pub run_lower: String,
    pub run_lower_decimal: String,
    pub run_upper: String,
    pub run_upper_decimal: String,
    pub max_periodic: usize,
    pub periodic_threshold: String,
    pub periodic_threshold_decimal: String,
    pub member: bool,
}

/// Evaluates both typical-code conditions for one word.
pub fn typicality_test(x: &Word, b: usize) -> Result<TypicalityReport> {
    let bounds = TypicalityBounds::new(x.n(), x.q(), b)?;
    let run_count = x.b_run_count(b)?;
    let max_periodic = x.max_periodic_substring_length(2 * b);
    Ok(TypicalityReport {
        word: x.render(),
        n: x.n(),
        q: x.q(),
        b,
        run_count,
        run_lower: rat_str(&bounds.run_lower),
        run_lower_decimal: rat_decimal(&bounds.run_lower, 4),
        run_upper: rat_str(&bounds.run_upper),
        run_upper_decimal: rat_decimal(&bounds.run_upper, 4),
        max_periodic,
        periodic_threshold: rat_str(&bounds.periodic_threshold),
        periodic_threshold_decimal: rat_decimal(&bounds.periodic_threshold, 4),
        member: bounds.is_member_stats(run_count, max_periodic),
    })
}

/// How a census walks the word space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum CensusMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// The measured fraction of the space that belongs to the typical code,
/// compared against the `1 - 3/n` floor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub q: u32,
    pub b: usize,
    #[serde(flatten)]
    pub mode: CensusMode,
    pub members: u64,
    pub total: u64,
    pub fraction: String,
    pub fraction_decimal: String,
    pub bound: String,
    pub meets_bound: bool,
    /// Two standard errors of the sampled estimate (rounded down);
    /// absent in exhaustive mode.
    pub two_standard_errors: Option<String>,
    pub meets_bound_minus_two_se: Option<bool>,
    pub wall_time_ms: u128,
}

impl CensusReport {
    /// The criterion appropriate to the mode: the exact bound when
    /// exhaustive, the two-standard-error relaxation when sampled.
    pub fn passed(&self) -> bool {
        self.meets_bound_minus_two_se.unwrap_or(self.meets_bound)
    }
}

/// Measures the typical-code fraction of `Sigma_q^n`, exhaustively or by
/// seeded sampling. The floor is asymptotic; small-n shortfalls are
/// reported, not errors.
pub fn code_census(
    n: usize,
    q: u32,
    b: usize,
    mode: CensusMode,
    shard_count: usize,
    budget: u128,
) -> Result<CensusReport> {
    let bounds = TypicalityBounds::new(n, q, b)?;
    let started = Instant::now();
    let (members, total) = match mode {
        CensusMode::Exhaustive => {
            let total = word_count(q, n).unwrap_or(u128::MAX);
            if total > budget {
                return Err(Error::BudgetExceeded {
                    required: total,
                    budget,
                });
            }
            let partials = run_sharded(total, shard_count, |lo, hi| {
                let mut members = 0u64;
                for_each_word_in_range(q, n, lo, hi, |x| {
                    if bounds.is_member(x).expect("matching shape") {
                        members += 1;
                    }
                });
                members
            });
            (partials.into_iter().sum::<u64>(), total as u64)
        }
        CensusMode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::domain("sampled census needs at least one sample"));
            }
            let partials = run_sharded(samples as u128, shard_count, |lo, hi| {
                let mut members = 0u64;
                for k in lo..hi {
                    let x = sample_word(q, n, seed, k as u64);
                    if bounds.is_member(&x).expect("matching shape") {
                        members += 1;
                    }
                }
                members
            });
            (partials.into_iter().sum::<u64>(), samples)
        }
    };

    let fraction = Rat::new(Int::from(members), Int::from(total));
    let bound = Rat::new(Int::from(n as i64 - 3), Int::from(n));
    let (two_se, meets_relaxed) = match mode {
        CensusMode::Exhaustive => (None, None),
        CensusMode::Sampled { samples, .. } => {
            let variance = &fraction * (Rat::from_integer(Int::from(1)) - &fraction)
                / Rat::from_integer(Int::from(samples));
            let se_lo = sqrt_enclosure(&variance, ENCLOSURE_BITS).lo;
            let two_se = Rat::from_integer(Int::from(2)) * se_lo;
            let meets = fraction >= &bound - &two_se;
            (Some(two_se), Some(meets))
        }
    };

    Ok(CensusReport {
        n,
        q,
        b,
        mode,
        members,
        total,
        fraction: rat_str(&fraction),
        fraction_decimal: rat_decimal(&fraction, 6),
        bound: rat_str(&bound),
        meets_bound: fraction >= bound,
        two_standard_errors: two_se.as_ref().map(|se| rat_decimal(se, 8)),
        meets_bound_minus_two_se: meets_relaxed,
        wall_time_ms: started.elapsed().as_millis(),
    })
}
