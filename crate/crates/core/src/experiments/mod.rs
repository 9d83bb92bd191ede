//! Exhaustive sweeps, extremal scans, exact-average checks, the typical
//! code census, and Monte Carlo concentration runs.
//!
//! Reports are deterministic given their configuration: exhaustive
//! enumeration is lexicographic, shards partition the index space by
//! contiguous ranges and merge in shard order, and sampled runs derive
//! each sample from `(seed, sample index)` so shard counts never change
//! an outcome.

mod concentration;
mod extremal;
mod sampling;
mod shard;
mod sweep;
mod typical;

pub use concentration::{calibrate_c, concentration_mc, default_c, ConcentrationReport};
pub use extremal::{average_check, extremal_scan, AverageReport, ExtremalReport};
pub use sampling::sample_word;
pub use sweep::{
    exhaustive_sweep, Check, ConventionReport, Counterexample, SweepConfig, SweepReport,
};
pub use typical::{
    code_census, typicality_test, CensusMode, CensusReport, TypicalityBounds, TypicalityReport,
};

use crate::{Int, Rat};

/// Default exhaustiveness budget: the largest `q^n` (and sweep total)
/// an experiment will enumerate without refusing.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Renders a rational as `num/den`.
pub(crate) fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Renders a rational as a decimal string rounded to `digits` places.
pub(crate) fn rat_decimal(r: &Rat, digits: u32) -> String {
    let scale = num_traits::pow(Int::from(10), digits as usize);
    let scaled = (r * Rat::from_integer(scale.clone())).round().to_integer();
    let negative = scaled < Int::from(0);
    let mag = if negative { -scaled } else { scaled };
    let (int_part, frac_part) = (mag.clone() / &scale, mag % &scale);
    let frac = format!(
        "{:0>width$}",
        frac_part.to_string(),
        width = digits as usize
    );
    format!("{}{}.{}", if negative { "-" } else { "" }, int_part, frac)
}

/// One row of the per-n summary table (the CSV schema).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PerNRow {
    pub n: usize,
    pub q: u32,
    pub b: usize,
    pub words: u64,
    pub min: Option<String>,
    pub max: Option<String>,
    pub mean_num: Option<String>,
    pub mean_den: Option<String>,
    pub mismatches: u64,
}

/// Renders summary rows as CSV with the fixed header.
pub fn rows_to_csv(rows: &[PerNRow]) -> String {
    let mut out = String::from("n,q,b,min,max,mean_num,mean_den,mismatches\n");
    for r in rows {
        let blank = String::new();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.q,
            r.b,
            r.min.as_ref().unwrap_or(&blank),
            r.max.as_ref().unwrap_or(&blank),
            r.mean_num.as_ref().unwrap_or(&blank),
            r.mean_den.as_ref().unwrap_or(&blank),
            r.mismatches,
        ));
    }
    out
}
