//! Exact closed forms: ball sizes, extremal bounds, and expectations.
//!
//! Every evaluator is generic over the integer scalar (see
//! [`crate::scalar::ExactInt`]); the crate-root aliases [`crate::Int`] and
//! [`crate::Rat`] are the defaults used by the experiments and the CLI.
//! No floating point appears on any path here.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{binomial, ipow, ExactInt};
use crate::word::{SizeBreakdown, Word};

/// The four parameters every ball formula depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallParams {
    pub n: u32,
    pub q: u32,
    pub b: u32,
    pub t: u32,
}

impl BallParams {
    pub fn new(n: u32, q: u32, b: u32, t: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        if b < 1 || t < 1 || n < 1 {
            return Err(Error::domain(format!(
                "ball parameters need n, b, t >= 1, got n={n}, b={b}, t={t}"
            )));
        }
        Ok(BallParams { n, q, b, t })
    }

    fn require_deletable(&self) -> Result<()> {
        if self.n < self.b * self.t + 1 {
            return Err(Error::domain(format!(
                "need n >= b*t + 1, got n={}, b={}, t={}",
                self.n, self.b, self.t
            )));
        }
        Ok(())
    }

    fn require_radius_one(&self) -> Result<()> {
        if self.t != 1 {
            return Err(Error::UnsupportedRadius(self.t as usize));
        }
        Ok(())
    }

    fn require_two_runs_span(&self) -> Result<()> {
        if self.n < 2 * self.b + 1 {
            return Err(Error::domain(format!(
                "need n >= 2b + 1, got n={}, b={}",
                self.n, self.b
            )));
        }
        Ok(())
    }
}

/// `|I_t^b(x)| = q^(t(b-1)) * sum_{i=0}^{t} C(n+t, i) (q-1)^i`,
/// independent of the center.
pub fn insertion_ball_size<T: ExactInt>(p: &BallParams) -> Result<T> {
    let mut sum = T::zero();
    for i in 0..=p.t {
        sum += binomial::<T>(p.n + p.t, i) * ipow::<T>(p.q - 1, i);
    }
    Ok(ipow::<T>(p.q, p.t * (p.b - 1)) * sum)
}

/// Minimum ball size `q^(t(b-1)) * sum_{i=0}^{t} C(n - t(b-1), i) (q-1)^i`,
/// attained exactly when the deletion ball is a singleton.
pub fn min_ball_size<T: ExactInt>(p: &BallParams) -> Result<T> {
    p.require_deletable()?;
    let reduced = p.n - p.t * (p.b - 1);
    let mut sum = T::zero();
    for i in 0..=p.t {
        sum += binomial::<T>(reduced, i) * ipow::<T>(p.q - 1, i);
    }
    Ok(ipow::<T>(p.q, p.t * (p.b - 1)) * sum)
}

fn leading_coefficient<T: ExactInt>(p: &BallParams) -> T {
    // q^(b-1) * ((n-b+1)(q-1) - 1)
    let span = T::from(p.n - p.b + 1) * T::from(p.q - 1) - T::one();
    ipow::<T>(p.q, p.b - 1) * span
}

/// The exact radius-one ball size assembled from a word's statistics:
///
/// `q^(b-1)((n-b+1)(q-1)-1) r_b + 2q^(b-1)
///  - sum_j q^(b-j-1) f_{b,j} - sum_i g_{b,i}`
pub fn explicit_ball_size<T: ExactInt>(bd: &SizeBreakdown, p: &BallParams) -> Result<T> {
    let mut size = ball_size_envelope(bd, p)?;
    for &gi in &bd.g {
        size -= T::from(gi as u32);
    }
    Ok(size)
}

/// The run/f part of the explicit size (the periodic-coincidence sum
/// dropped): an upper bound on the ball size that is strictly increasing
/// in the run count.
pub fn ball_size_envelope<T: ExactInt>(bd: &SizeBreakdown, p: &BallParams) -> Result<T> {
    p.require_radius_one()?;
    if bd.n != p.n as usize || bd.b != p.b as usize {
        return Err(Error::domain(format!(
            "breakdown shape (n={}, b={}) does not match params (n={}, b={})",
            bd.n, bd.b, p.n, p.b
        )));
    }
    if p.n < p.b + 1 {
        return Err(Error::domain(format!(
            "need n >= b + 1, got n={}, b={}",
            p.n, p.b
        )));
    }
    let two = T::from(2u32);
    let mut size =
        leading_coefficient::<T>(p) * T::from(bd.run_count as u32) + two * ipow::<T>(p.q, p.b - 1);
    for (idx, &fj) in bd.f.iter().enumerate() {
        let j = idx as u32 + 1;
        size -= ipow::<T>(p.q, p.b - j - 1) * T::from(fj as u32);
    }
    Ok(size)
}

/// How the alternating-segment lengths enter the unit-burst size formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentConvention {
    /// Subtract each segment length `s_i` as published.
    SumLengths,
    /// Subtract `s_i - 1`.
    SumLengthsMinusOne,
    /// Subtract `C(s_i - 1, 2)`, the number of mismatch-position pairs
    /// inside the segment.
    MismatchPairs,
}

impl SegmentConvention {
    pub const ALL: [SegmentConvention; 3] = [
        SegmentConvention::SumLengths,
        SegmentConvention::SumLengthsMinusOne,
        SegmentConvention::MismatchPairs,
    ];

    pub fn token(self) -> &'static str {
        match self {
            SegmentConvention::SumLengths => "sum_lengths",
            SegmentConvention::SumLengthsMinusOne => "sum_lengths_minus_one",
            SegmentConvention::MismatchPairs => "mismatch_pairs",
        }
    }

    pub fn from_token(tok: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.token() == tok)
    }

    fn adjust(self, s: usize) -> usize {
        match self {
            SegmentConvention::SumLengths => s,
            SegmentConvention::SumLengthsMinusOne => s - 1,
            SegmentConvention::MismatchPairs => (s - 1) * (s - 2) / 2,
        }
    }
}

/// The unit-burst ball size via runs and alternating segments:
/// `(n(q-1) - 1) r + 2 - sum_i adjust(s_i)` under the chosen convention.
/// The sweep machinery arbitrates which convention matches the oracle.
pub fn segment_formula_size<T: ExactInt>(x: &Word, convention: SegmentConvention) -> Result<T> {
    let n = x.n();
    if n < 2 {
        return Err(Error::domain("the segment formula needs n >= 2"));
    }
    let r = x.b_run_count(1)?;
    let coeff = T::from(n as u32) * T::from(x.q() - 1) - T::one();
    let mut size = coeff * T::from(r as u32) + T::from(2u32);
    for s in x.alternating_segments() {
        size -= T::from(convention.adjust(s) as u32);
    }
    Ok(size)
}

/// General maximum `q^(b-1) (n-b+1) ((n-b+1)(q-1) + 1)`, valid for any
/// alphabet.
pub fn max_ball_bound<T: ExactInt>(p: &BallParams) -> Result<T> {
    p.require_radius_one()?;
    p.require_two_runs_span()?;
    let span = T::from(p.n - p.b + 1) * T::from(p.q - 1) + T::one();
    Ok(ipow::<T>(p.q, p.b - 1) * T::from(p.n - p.b + 1) * span)
}

/// Refined maximum for `q >= 3`, attained by centers with
/// `x_i != x_{i+b}` and `x_i != x_{i+2b}` everywhere.
pub fn max_ball_bound_refined<T: ExactInt>(p: &BallParams) -> Result<T> {
    p.require_radius_one()?;
    if p.q < 3 {
        return Err(Error::UnsupportedAlphabet(p.q));
    }
    p.require_two_runs_span()?;
    let base = leading_coefficient::<T>(p) * T::from(p.n - p.b + 1)
        + T::from(2u32) * ipow::<T>(p.q, p.b - 1);
    let q1 = T::from(p.q - 1);
    // (n-b)(q^(b-1) - 1) / (q-1)
    let f_num = T::from(p.n - p.b) * (ipow::<T>(p.q, p.b - 1) - T::one());
    let (f_corr, rem) = f_num.div_rem(&q1);
    assert!(
        rem.is_zero(),
        "refined maximum f-correction must be integral"
    );
    // (q^b - q - (b-1)(q-1)) / (q-1)^2
    let tail_num = ipow::<T>(p.q, p.b) - T::from(p.q) - T::from(p.b - 1) * q1.clone();
    let (tail_corr, rem) = tail_num.div_rem(&(q1.clone() * q1));
    assert!(
        rem.is_zero(),
        "refined maximum tail correction must be integral"
    );
    Ok(base - f_corr + tail_corr)
}

/// `E[r_b] = 1 + (q-1)(n-b)/q` over a uniform word of `Sigma_q^n`.
pub fn expected_run_count<T: ExactInt>(n: u32, q: u32, b: u32) -> Result<Ratio<T>> {
    let p = BallParams::new(n, q, b, 1)?;
    p.require_deletable()?;
    let num = T::from(q - 1) * T::from(n - b);
    Ok(Ratio::from_integer(T::one()) + Ratio::new(num, T::from(q)))
}

/// `E[f_{b,j}] = (q-1)^2 (n-b-j) / q^2` for `j in [1, b-1]`.
pub fn expected_f<T: ExactInt>(n: u32, q: u32, b: u32, j: u32) -> Result<Ratio<T>> {
    let p = BallParams::new(n, q, b, 1)?;
    if j < 1 || j > b.saturating_sub(1) {
        return Err(Error::domain(format!(
            "expected f needs j in [1, b-1], got j={j}, b={b}"
        )));
    }
    p.require_two_runs_span()?;
    let num = ipow::<T>(q - 1, 2) * T::from(n - b - j);
    Ok(Ratio::new(num, ipow::<T>(q, 2)))
}

/// `E[g_{b,i}] = sum_{j=i+b}^{n-b} k_{i,j} / q^(j+b-i+1)`, where the
/// weight `k_{i,j}` is `(q-1)q^(2b-1)` when `b | (j-i)` and
/// `(q-1)^2 q^(2b-2)` otherwise.
pub fn expected_g<T: ExactInt>(n: u32, q: u32, b: u32, i: u32) -> Result<Ratio<T>> {
    let p = BallParams::new(n, q, b, 1)?;
    p.require_two_runs_span()?;
    if i < 1 || i > n - 2 * b {
        return Err(Error::domain(format!(
            "expected g needs i in [1, n-2b], got i={i}, n={n}, b={b}"
        )));
    }
    expected_g_with_exponent(n, q, b, i, 1)
}

fn expected_g_with_exponent<T: ExactInt>(
    n: u32,
    q: u32,
    b: u32,
    i: u32,
    shift: i64,
) -> Result<Ratio<T>> {
    let mut sum = Ratio::from_integer(T::zero());
    for j in (i + b)..=(n - b) {
        let weight = if (j - i).is_multiple_of(b) {
            T::from(q - 1) * ipow::<T>(q, 2 * b - 1)
        } else {
            ipow::<T>(q - 1, 2) * ipow::<T>(q, 2 * b - 2)
        };
        let exponent = (j + b - i) as i64 + shift;
        debug_assert!(exponent >= 0);
        sum += Ratio::new(weight, ipow::<T>(q, exponent as u32));
    }
    Ok(sum)
}

/// Expected radius-one ball size, assembled from the three per-statistic
/// expectations. Equals the exhaustive mean of [`explicit_ball_size`]
/// exactly.
pub fn expected_ball_size<T: ExactInt>(n: u32, q: u32, b: u32) -> Result<Ratio<T>> {
    expected_ball_size_impl(n, q, b, 1)
}

/// Alternate assembly with each periodic-coincidence term scaled by `q^2`
/// (denominator exponent `j+b-i-1` instead of `j+b-i+1`). The average-size
/// report evaluates both assemblies against the exhaustive mean.
pub fn expected_ball_size_alt_g<T: ExactInt>(n: u32, q: u32, b: u32) -> Result<Ratio<T>> {
    expected_ball_size_impl(n, q, b, -1)
}

fn expected_ball_size_impl<T: ExactInt>(n: u32, q: u32, b: u32, shift: i64) -> Result<Ratio<T>> {
    let p = BallParams::new(n, q, b, 1)?;
    p.require_two_runs_span()?;
    let coeff = Ratio::from_integer(leading_coefficient::<T>(&p));
    let mut mean = coeff * expected_run_count::<T>(n, q, b)?
        + Ratio::from_integer(T::from(2u32) * ipow::<T>(q, b - 1));
    for j in 1..b {
        mean -= Ratio::from_integer(ipow::<T>(q, b - j - 1)) * expected_f::<T>(n, q, b, j)?;
    }
    for i in 1..=(n - 2 * b) {
        mean -= expected_g_with_exponent::<T>(n, q, b, i, shift)?;
    }
    Ok(mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{insertion_ball, levenshtein_ball};
    use crate::word::for_each_word;
    use crate::{Int, Rat};
    use num_bigint::BigInt;

    fn w(text: &str, q: u32) -> Word {
        Word::parse(text, q).unwrap()
    }

    fn params(n: u32, q: u32, b: u32, t: u32) -> BallParams {
        BallParams::new(n, q, b, t).unwrap()
    }

    fn explicit_of(text: &str, q: u32, b: u32) -> Int {
        let x = w(text, q);
        let bd = x.size_breakdown(b as usize).unwrap();
        explicit_ball_size(&bd, &params(x.n() as u32, q, b, 1)).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn insertion_sizes() {
        assert_eq!(insertion_ball_size::<i128>(&params(3, 2, 1, 1)).unwrap(), 5);
        assert_eq!(
            insertion_ball_size::<i128>(&params(3, 2, 2, 1)).unwrap(),
            10
        );
        assert_eq!(insertion_ball_size::<i128>(&params(1, 2, 1, 1)).unwrap(), 3);
        assert_eq!(
            insertion_ball(&w("0", 2), 1, 1).unwrap().len() as i128,
            insertion_ball_size::<i128>(&params(1, 2, 1, 1)).unwrap()
        );
    }

    #[test]
    fn minimum_sizes() {
        assert_eq!(min_ball_size::<i128>(&params(5, 2, 2, 1)).unwrap(), 10);
        assert_eq!(min_ball_size::<i128>(&params(2, 2, 1, 1)).unwrap(), 3);
        assert_eq!(min_ball_size::<i128>(&params(4, 2, 1, 2)).unwrap(), 11);
        assert!(min_ball_size::<i128>(&params(4, 2, 2, 2)).is_err());
        assert_eq!(
            levenshtein_ball(&w("0000", 2), 1, 2).unwrap().len() as i128,
            min_ball_size::<i128>(&params(4, 2, 1, 2)).unwrap()
        );
    }

    #[test]
    fn explicit_sizes() {
        assert_eq!(explicit_of("0101", 2, 1), Int::from(11));
        assert_eq!(explicit_of("00110", 2, 2), Int::from(25));
        assert_eq!(explicit_of("01201", 3, 2), Int::from(88));
        let bd = w("0101", 2).size_breakdown(1).unwrap();
        assert!(matches!(
            explicit_ball_size::<Int>(&bd, &params(4, 2, 1, 2)),
            Err(Error::UnsupportedRadius(2))
        ));
    }

    #[test]
    fn segment_formula() {
        use SegmentConvention::*;
        assert_eq!(
            segment_formula_size::<i128>(&w("0000", 2), SumLengths).unwrap(),
            5
        );
        assert_eq!(
            segment_formula_size::<i128>(&w("0101", 2), SumLengths).unwrap(),
            10
        );
        assert_eq!(
            segment_formula_size::<i128>(&w("0101", 2), SumLengthsMinusOne).unwrap(),
            11
        );
        assert_eq!(
            segment_formula_size::<i128>(&w("0101", 2), MismatchPairs).unwrap(),
            11
        );
        // oracle gives 4 on "01": only the pair convention matches
        assert_eq!(
            segment_formula_size::<i128>(&w("01", 2), SumLengthsMinusOne).unwrap(),
            3
        );
        assert_eq!(
            segment_formula_size::<i128>(&w("01", 2), MismatchPairs).unwrap(),
            4
        );
    }

    #[test]
    fn maximum_bounds() {
        assert_eq!(max_ball_bound::<i128>(&params(5, 2, 2, 1)).unwrap(), 40);
        assert_eq!(max_ball_bound::<i128>(&params(5, 3, 2, 1)).unwrap(), 108);
        assert_eq!(max_ball_bound::<i128>(&params(3, 2, 1, 1)).unwrap(), 12);
        assert_eq!(
            max_ball_bound_refined::<i128>(&params(5, 3, 2, 1)).unwrap(),
            88
        );
        assert_eq!(
            max_ball_bound_refined::<i128>(&params(6, 3, 2, 1)).unwrap(),
            138
        );
        assert_eq!(
            max_ball_bound_refined::<i128>(&params(5, 4, 2, 1)).unwrap(),
            182
        );
        // b = 1: the f-correction vanishes
        assert_eq!(
            max_ball_bound_refined::<i128>(&params(5, 3, 1, 1)).unwrap(),
            47
        );
        assert!(matches!(
            max_ball_bound_refined::<i128>(&params(5, 2, 2, 1)),
            Err(Error::UnsupportedAlphabet(2))
        ));
    }

    #[test]
    fn envelope_values() {
        let x = w("01201", 3);
        let bd = x.size_breakdown(2).unwrap();
        assert_eq!(
            ball_size_envelope::<i128>(&bd, &params(5, 3, 2, 1)).unwrap(),
            88
        );
        let bd = w("00110", 2).size_breakdown(2).unwrap();
        assert_eq!(
            ball_size_envelope::<i128>(&bd, &params(5, 2, 2, 1)).unwrap(),
            26
        );
        let bd = w("00000", 2).size_breakdown(2).unwrap();
        assert_eq!(
            ball_size_envelope::<i128>(&bd, &params(5, 2, 2, 1)).unwrap(),
            10
        );
    }

    fn exhaustive_mean<F: Fn(&Word) -> usize>(q: u32, n: usize, stat: F) -> Rat {
        let mut sum = Int::from(0);
        let mut count = Int::from(0);
        for_each_word(q, n, |x| {
            sum += Int::from(stat(x));
            count += 1;
        });
        Rat::new(sum, count)
    }

    #[test]
    fn expected_run_count_values() {
        assert_eq!(expected_run_count::<Int>(5, 2, 2).unwrap(), rat(5, 2));
        assert_eq!(expected_run_count::<Int>(4, 2, 1).unwrap(), rat(5, 2));
        assert_eq!(expected_run_count::<Int>(4, 3, 3).unwrap(), rat(5, 3));
        assert_eq!(
            expected_run_count::<Int>(5, 2, 2).unwrap(),
            exhaustive_mean(2, 5, |x| x.b_run_count(2).unwrap())
        );
        assert_eq!(
            expected_run_count::<Int>(4, 2, 1).unwrap(),
            exhaustive_mean(2, 4, |x| x.b_run_count(1).unwrap())
        );
    }

    #[test]
    fn expected_f_values() {
        assert_eq!(expected_f::<Int>(5, 2, 2, 1).unwrap(), rat(1, 2));
        assert_eq!(expected_f::<Int>(7, 3, 3, 2).unwrap(), rat(8, 9));
        // n = 2b + j leaves exactly b index positions
        assert_eq!(expected_f::<Int>(8, 3, 3, 2).unwrap(), rat(4 * 3, 9));
        assert!(expected_f::<Int>(5, 2, 2, 2).is_err());
        assert_eq!(
            expected_f::<Int>(5, 2, 2, 1).unwrap(),
            exhaustive_mean(2, 5, |x| x.f_stat(2, 1).unwrap())
        );
        assert_eq!(
            expected_f::<Int>(7, 3, 3, 2).unwrap(),
            exhaustive_mean(3, 7, |x| x.f_stat(3, 2).unwrap())
        );
    }

    #[test]
    fn expected_g_values() {
        assert_eq!(expected_g::<Int>(5, 2, 2, 1).unwrap(), rat(1, 4));
        // single-term case j = i + b with b | (j - i)
        assert_eq!(expected_g::<Int>(5, 3, 2, 1).unwrap(), rat(2, 9));
        assert_eq!(expected_g::<Int>(6, 2, 1, 1).unwrap(), rat(15, 32));
        assert!(expected_g::<Int>(5, 2, 2, 2).is_err());
        assert_eq!(
            expected_g::<Int>(6, 2, 1, 1).unwrap(),
            exhaustive_mean(2, 6, |x| x.g_stat(1, 1).unwrap())
        );
        assert_eq!(
            expected_g::<Int>(5, 2, 2, 1).unwrap(),
            exhaustive_mean(2, 5, |x| x.g_stat(2, 1).unwrap())
        );
    }

    #[test]
    fn expected_ball_size_matches_exhaustive_mean() {
        for (q, n, b) in [(2u32, 5usize, 2u32), (2, 4, 1), (2, 7, 3)] {
            let mean = expected_ball_size::<Int>(n as u32, q, b).unwrap();
            let brute = exhaustive_mean(q, n, |x| {
                let bd = x.size_breakdown(b as usize).unwrap();
                let v: Int = explicit_ball_size(&bd, &params(n as u32, q, b, 1)).unwrap();
                use num_traits::ToPrimitive;
                v.to_usize().unwrap()
            });
            assert_eq!(mean, brute, "q={q}, n={n}, b={b}");
            let alt = expected_ball_size_alt_g::<Int>(n as u32, q, b).unwrap();
            assert_ne!(alt, brute, "the shifted assembly must not match");
        }
    }

    /// The g-free envelope is strictly increasing in the run count, and
    /// its maximum over the whole space is the refined bound, attained
    /// exactly at the maximal run count.
    #[test]
    fn envelope_is_monotone_in_run_count() {
        for (q, n) in [(3u32, 5usize), (3, 6), (4, 5)] {
            let b = 2u32;
            let p = params(n as u32, q, b, 1);
            let mut best_by_runs: std::collections::BTreeMap<usize, (Int, Int)> =
                std::collections::BTreeMap::new();
            for_each_word(q, n, |x| {
                let bd = x.size_breakdown(b as usize).unwrap();
                let h: Int = ball_size_envelope(&bd, &p).unwrap();
                let entry = best_by_runs
                    .entry(bd.run_count)
                    .or_insert_with(|| (h.clone(), h.clone()));
                if h < entry.0 {
                    entry.0 = h.clone();
                }
                if h > entry.1 {
                    entry.1 = h;
                }
            });
            let ordered: Vec<_> = best_by_runs.iter().collect();
            for pair in ordered.windows(2) {
                let (r_low, (_, max_low)) = pair[0];
                let (r_high, (min_high, _)) = pair[1];
                assert!(
                    max_low < min_high,
                    "envelope not strictly increasing between r={r_low} and r={r_high} (q={q}, n={n})"
                );
            }
            let top_runs = n - b as usize + 1;
            let (top_min, top_max) = &best_by_runs[&top_runs];
            let refined: Int = max_ball_bound_refined(&p).unwrap();
            assert_eq!(*top_min, refined);
            assert_eq!(*top_max, refined);
            assert!(best_by_runs
                .iter()
                .all(|(r, (_, max))| *r == top_runs || *max < refined));
        }
    }

    #[test]
    fn primitive_and_bigint_paths_agree() {
        for n in 3..=9u32 {
            for q in 2..=4u32 {
                for b in 1..=2u32 {
                    if n < 2 * b + 1 {
                        continue;
                    }
                    let p = params(n, q, b, 1);
                    assert_eq!(
                        Int::from(insertion_ball_size::<i128>(&p).unwrap()),
                        insertion_ball_size::<Int>(&p).unwrap()
                    );
                    assert_eq!(
                        Int::from(min_ball_size::<i128>(&p).unwrap()),
                        min_ball_size::<Int>(&p).unwrap()
                    );
                    let mean128 = expected_ball_size::<i128>(n, q, b).unwrap();
                    let meanbig = expected_ball_size::<Int>(n, q, b).unwrap();
                    assert_eq!(Int::from(*mean128.numer()), meanbig.numer().clone());
                    assert_eq!(Int::from(*mean128.denom()), meanbig.denom().clone());
                }
            }
        }
    }
}
