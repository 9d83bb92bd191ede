//! Monte Carlo concentration of the radius-one ball size around its
//! expectation.

use std::time::Instant;

use num_traits::Signed;
use serde::Serialize;

use super::sampling::sample_word;
use super::shard::run_sharded;
use super::typical::TypicalityBounds;
use super::{rat_decimal, rat_str};
use crate::enclosure::{ln_enclosure, sqrt_enclosure};
use crate::error::{Error, Result};
use crate::formulas::{expected_ball_size, explicit_ball_size, BallParams};
use crate::{Int, Rat};

const ENCLOSURE_BITS: u32 = 96;

/// The calibration ladder for the concentration constant.
const C_LADDER: [(i64, i64); 5] = [(1, 4), (1, 2), (1, 1), (2, 1), (4, 1)];

/// The frozen concentration constant: the smallest ladder value whose
/// outlier fraction stays within `3/n` at the calibration configuration
/// `(n=256, q=2, b=2, 10^4 samples, seed 1)`. [`calibrate_c`] reproduces
/// this choice.
pub fn default_c() -> Rat {
    Rat::from_integer(Int::from(1))
}

/// `c * sqrt(n^3 log_q n)`, rounded down so deviations are never excused
/// by rounding.
fn deviation_threshold(n: usize, q: u32, c: &Rat) -> Rat {
    let int = |v: usize| Rat::from_integer(Int::from(v));
    let ln_n = ln_enclosure(&int(n), ENCLOSURE_BITS);
    let ln_q = ln_enclosure(&int(q as usize), ENCLOSURE_BITS);
    let arg_lo = int(n * n * n) * &ln_n.lo / &ln_q.hi;
    c * sqrt_enclosure(&arg_lo, ENCLOSURE_BITS).lo
}

/// Outcome of a concentration run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub q: u32,
    pub b: usize,
    pub samples: u64,
    pub seed: u64,
    pub c: String,
    pub mean: String,
    /// The deviation threshold `c * sqrt(n^3 log_q n)` as a decimal.
    pub threshold: String,
    pub outliers: u64,
    pub outlier_fraction: String,
    pub bound: String,
    pub within_bound: bool,
    pub max_deviation: String,
    /// Largest `deviation / threshold` seen, as a decimal.
    pub max_normalized: String,
    /// Samples inside the typical code, and how many of those exceeded
    /// the threshold.
    pub members: u64,
    pub member_violations: u64,
    pub member_max_normalized: String,
    pub wall_time_ms: u128,
}

#[derive(Default)]
struct McState {
    outliers: u64,
    members: u64,
    member_violations: u64,
    max_dev: Option<Rat>,
    member_max_dev: Option<Rat>,
}

/// Samples `samples` words uniformly and reports how often the ball size
/// deviates from its expectation by more than `c * sqrt(n^3 log_q n)`,
/// overall and restricted to typical-code members.
pub fn concentration_mc(
    n: usize,
    q: u32,
    b: usize,
    samples: u64,
    seed: u64,
    c: &Rat,
    shard_count: usize,
) -> Result<ConcentrationReport> {
    if samples == 0 {
        return Err(Error::domain("concentration run needs at least one sample"));
    }
    if c <= &Rat::from_integer(Int::from(0)) {
        return Err(Error::domain("the concentration constant must be positive"));
    }
    let params = BallParams::new(n as u32, q, b as u32, 1)?;
    let mean = expected_ball_size::<Int>(n as u32, q, b as u32)?;
    let bounds = TypicalityBounds::new(n, q, b)?;
    let threshold = deviation_threshold(n, q, c);
    let started = Instant::now();

    let partials = run_sharded(samples as u128, shard_count, |lo, hi| {
        let mut state = McState::default();
        for k in lo..hi {
            let x = sample_word(q, n, seed, k as u64);
            let bd = x.size_breakdown(b).expect("n >= b+1");
            let size: Int = explicit_ball_size(&bd, &params).expect("radius one");
            let dev = (Rat::from_integer(size) - &mean).abs();
            let member =
                bounds.is_member_stats(bd.run_count, x.max_periodic_substring_length(2 * b));
            if dev > threshold {
                state.outliers += 1;
                if member {
                    state.member_violations += 1;
                }
            }
            if member {
                state.members += 1;
                if state.member_max_dev.as_ref().is_none_or(|m| dev > *m) {
                    state.member_max_dev = Some(dev.clone());
                }
            }
            if state.max_dev.as_ref().is_none_or(|m| dev > *m) {
                state.max_dev = Some(dev);
            }
        }
        state
    });

    let mut merged = McState::default();
    for p in partials {
        merged.outliers += p.outliers;
        merged.members += p.members;
        merged.member_violations += p.member_violations;
        if let Some(d) = p.max_dev {
            if merged.max_dev.as_ref().is_none_or(|m| d > *m) {
                merged.max_dev = Some(d);
            }
        }
        if let Some(d) = p.member_max_dev {
            if merged.member_max_dev.as_ref().is_none_or(|m| d > *m) {
                merged.member_max_dev = Some(d);
            }
        }
    }

    let outlier_fraction = Rat::new(Int::from(merged.outliers), Int::from(samples));
    let bound = Rat::new(Int::from(3), Int::from(n));
    let max_dev = merged
        .max_dev
        .unwrap_or_else(|| Rat::from_integer(Int::from(0)));
    let member_max_dev = merged
        .member_max_dev
        .unwrap_or_else(|| Rat::from_integer(Int::from(0)));
    Ok(ConcentrationReport {
        n,
        q,
        b,
        samples,
        seed,
        c: rat_str(c),
        mean: rat_str(&mean),
        threshold: rat_decimal(&threshold, 3),
        outliers: merged.outliers,
        outlier_fraction: rat_str(&outlier_fraction),
        bound: rat_str(&bound),
        within_bound: outlier_fraction <= bound,
        max_deviation: rat_decimal(&max_dev, 3),
        max_normalized: rat_decimal(&(&max_dev / &threshold), 4),
        members: merged.members,
        member_violations: merged.member_violations,
        member_max_normalized: rat_decimal(&(&member_max_dev / &threshold), 4),
        wall_time_ms: started.elapsed().as_millis(),
    })
}

/// Replays the calibration: the smallest ladder value of `c` whose
/// outlier fraction stays within `3/n` for the given configuration.
pub fn calibrate_c(
    n: usize,
    q: u32,
    b: usize,
    samples: u64,
    seed: u64,
    shard_count: usize,
) -> Result<Rat> {
    if samples == 0 {
        return Err(Error::domain("calibration needs at least one sample"));
    }
    let params = BallParams::new(n as u32, q, b as u32, 1)?;
    let mean = expected_ball_size::<Int>(n as u32, q, b as u32)?;
    let unit = deviation_threshold(n, q, &Rat::from_integer(Int::from(1)));

    // one pass to collect deviations, then scan the ladder
    let partials = run_sharded(samples as u128, shard_count, |lo, hi| {
        let mut devs = Vec::with_capacity((hi - lo) as usize);
        for k in lo..hi {
            let x = sample_word(q, n, seed, k as u64);
            let bd = x.size_breakdown(b).expect("n >= b+1");
            let size: Int = explicit_ball_size(&bd, &params).expect("radius one");
            devs.push((Rat::from_integer(size) - &mean).abs());
        }
        devs
    });
    let devs: Vec<Rat> = partials.into_iter().flatten().collect();

    let bound = Rat::new(Int::from(3), Int::from(n));
    for (num, den) in C_LADDER {
        let c = Rat::new(Int::from(num), Int::from(den));
        let threshold = &c * &unit;
        let outliers = devs.iter().filter(|d| **d > threshold).count();
        let fraction = Rat::new(Int::from(outliers), Int::from(samples));
        if fraction <= bound {
            return Ok(c);
        }
    }
    Err(Error::domain(
        "no ladder constant satisfies the outlier bound",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::min_ball_size;

    #[test]
    fn forced_minimum_deviation() {
        // the all-zero word sits exactly at the minimum size, so its
        // deviation is mean - min
        let n = 12;
        let params = BallParams::new(n, 2, 2, 1).unwrap();
        let x = crate::Word::parse(&"0".repeat(n as usize), 2).unwrap();
        let bd = x.size_breakdown(2).unwrap();
        let size: Int = explicit_ball_size(&bd, &params).unwrap();
        assert_eq!(size, min_ball_size::<Int>(&params).unwrap());
        let mean = expected_ball_size::<Int>(n, 2, 2).unwrap();
        let dev = (Rat::from_integer(size.clone()) - &mean).abs();
        assert_eq!(dev, mean - Rat::from_integer(size));
    }

    #[test]
    fn deterministic_and_shard_invariant() {
        let c = default_c();
        let a = concentration_mc(32, 2, 2, 200, 5, &c, 1).unwrap();
        let b = concentration_mc(32, 2, 2, 200, 5, &c, 4).unwrap();
        assert_eq!(a.outliers, b.outliers);
        assert_eq!(a.max_deviation, b.max_deviation);
        assert_eq!(a.members, b.members);
        let again = concentration_mc(32, 2, 2, 200, 5, &c, 1).unwrap();
        assert_eq!(
            a,
            ConcentrationReport {
                wall_time_ms: a.wall_time_ms,
                ..again
            }
        );
    }

    /// A mid-size configuration with its own seed keeps the outlier
    /// fraction within 3/n at the calibrated constant.
    #[test]
    fn outlier_bound_holds_at_n64() {
        let report = concentration_mc(64, 2, 1, 10_000, 2, &default_c(), 4).unwrap();
        assert!(
            report.within_bound,
            "fraction {} > {}",
            report.outlier_fraction, report.bound
        );
    }

    #[test]
    fn threshold_is_rounded_down() {
        // n = 1024, q = 2: log_q n = 10 exactly, so the threshold must be
        // strictly below c * sqrt(n^3 * 10)
        let c = Rat::from_integer(Int::from(1));
        let thr = deviation_threshold(1024, 2, &c);
        let exact_sq = Rat::from_integer(Int::from(1024u64 * 1024 * 1024 * 10));
        assert!(&thr * &thr < exact_sq);
        // but within 2^-60 of it
        let slack = Rat::new(Int::from(1), Int::from(1u64 << 60));
        assert!(&thr * &thr > exact_sq * (Rat::from_integer(Int::from(1)) - slack));
    }
}
