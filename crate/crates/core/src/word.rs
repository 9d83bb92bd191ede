//! q-ary words and the per-word statistics consumed by the size formulas.
//!
//! Positions are 1-based in every public signature and report, matching the
//! usual coding-theory convention; storage is 0-based internally.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// An immutable q-ary word: symbols in `[0, q-1]`, length at least 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    q: u32,
    symbols: Vec<u32>,
}

impl Word {
    pub fn new(q: u32, symbols: Vec<u32>) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::SymbolOutOfRange { symbol: bad, q });
        }
        Ok(Word { q, symbols })
    }

    /// Skips validation; callers guarantee `q >= 2` and all symbols `< q`.
    pub(crate) fn from_parts(q: u32, symbols: Vec<u32>) -> Self {
        debug_assert!(q >= 2 && !symbols.is_empty() && symbols.iter().all(|&s| s < q));
        Word { q, symbols }
    }

    /// Parses the word text format: a digit string for `q <= 10`
    /// (`"01201"`), comma-separated integers for `q > 10` (`"0,1,12,3"`).
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::EmptyWord);
        }
        let symbols = if q <= 10 {
            text.chars()
                .map(|ch| {
                    ch.to_digit(10).ok_or_else(|| {
                        Error::MalformedWord(format!("non-digit {ch:?} in {text:?}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            text.split(',')
                .map(|tok| {
                    tok.parse::<u32>().map_err(|_| {
                        Error::MalformedWord(format!("bad symbol {tok:?} in {text:?}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?
        };
        Word::new(q, symbols)
    }

    /// Inverse of [`Word::parse`].
    pub fn render(&self) -> String {
        if self.q <= 10 {
            self.symbols
                .iter()
                .map(|s| char::from_digit(*s, 10).unwrap())
                .collect()
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            parts.join(",")
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn reversed(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word { q: self.q, symbols }
    }

    /// 1-based inclusive slice `x_[lo, hi]`; empty when `lo > hi`.
    pub(crate) fn seg(&self, lo: usize, hi: usize) -> &[u32] {
        if lo > hi {
            return &[];
        }
        debug_assert!(lo >= 1 && hi <= self.n());
        &self.symbols[lo - 1..hi]
    }

    fn require_longer_than(&self, b: usize) -> Result<()> {
        if b == 0 {
            return Err(Error::domain("burst length b must be at least 1"));
        }
        if self.n() < b + 1 {
            return Err(Error::domain(format!(
                "word length {} must exceed burst length {b}",
                self.n()
            )));
        }
        Ok(())
    }

    /// `r_b(x) = 1 + |{i in [1, n-b] : x_i != x_{i+b}}|`, the number of
    /// b-runs and the size of the radius-one burst-deletion ball.
    pub fn b_run_count(&self, b: usize) -> Result<usize> {
        self.require_longer_than(b)?;
        let s = &self.symbols;
        Ok(1 + (0..s.len() - b).filter(|&k| s[k] != s[k + b]).count())
    }

    /// `f_{b,j}(x)`: indices `i in [1, n-b-j]` with `x_i != x_{i+b}` and
    /// `x_{i+j} != x_{i+j+b}`. Zero when the index range is empty.
    pub fn f_stat(&self, b: usize, j: usize) -> Result<usize> {
        if j == 0 || j + 1 > b {
            return Err(Error::domain(format!(
                "f statistic needs j in [1, b-1], got j={j}, b={b}"
            )));
        }
        let s = &self.symbols;
        let n = s.len();
        if n < b + j + 1 {
            return Ok(0);
        }
        Ok((0..n - b - j)
            .filter(|&k| s[k] != s[k + b] && s[k + j] != s[k + j + b])
            .count())
    }

    /// `g_{b,i}(x)`: indices `j in [i+b, n-b]` with `x_i != x_{i+b}`,
    /// `x_j != x_{j+b}`, and `x_[i, j+b]` 2b-periodic. `i` is 1-based.
    pub fn g_stat(&self, b: usize, i: usize) -> Result<usize> {
        let n = self.n();
        if b == 0 || n < 2 * b + 1 || i == 0 || i > n - 2 * b {
            return Err(Error::domain(format!(
                "g statistic needs i in [1, n-2b], got i={i}, n={n}, b={b}"
            )));
        }
        let s = &self.symbols;
        let i0 = i - 1;
        if s[i0] == s[i0 + b] {
            return Ok(0);
        }
        let mut count = 0;
        for j0 in (i0 + b)..=(n - 1 - b) {
            // extending the window to [i, j+b] adds the constraint x_{j-b} = x_{j+b}
            if s[j0 - b] != s[j0 + b] {
                break;
            }
            if s[j0] != s[j0 + b] {
                count += 1;
            }
        }
        Ok(count)
    }

    /// True iff `x_k = x_{k+p}` for all `k in [lo, hi-p]` (1-based).
    /// Intervals of length at most `p` are vacuously p-periodic.
    pub fn is_periodic(&self, lo: usize, hi: usize, p: usize) -> Result<bool> {
        let n = self.n();
        if lo == 0 || lo > hi || hi > n || p == 0 {
            return Err(Error::domain(format!(
                "periodicity range [{lo}, {hi}] with period {p} is invalid for length {n}"
            )));
        }
        let s = &self.symbols;
        Ok((lo..=hi.saturating_sub(p)).all(|k| s[k - 1] == s[k - 1 + p]))
    }

    /// The maximal p-periodic intervals, 1-based inclusive, left to right.
    ///
    /// Single left-to-right scan: stretches of satisfied constraints
    /// `x_k = x_{k+p}` yield the intervals longer than `p`; a length-p
    /// window is maximal exactly when the constraints on both sides fail.
    pub fn maximal_periodic_intervals(&self, p: usize) -> Vec<(usize, usize)> {
        assert!(p >= 1, "period must be at least 1");
        let n = self.n();
        if n <= p {
            return vec![(1, n)];
        }
        let s = &self.symbols;
        let sat = |k: usize| s[k - 1] == s[k - 1 + p]; // constraint k in [1, n-p]
        let mut out = Vec::new();
        let mut k = 1;
        while k <= n - p {
            if sat(k) {
                let start = k;
                while k <= n - p && sat(k) {
                    k += 1;
                }
                out.push((start, k - 1 + p));
            } else {
                k += 1;
            }
        }
        for lo in 1..=(n - p + 1) {
            let left_open = lo == 1 || !sat(lo - 1);
            let right_open = lo + p - 1 == n || !sat(lo);
            if left_open && right_open {
                out.push((lo, lo + p - 1));
            }
        }
        out.sort_unstable();
        out
    }

    /// Length of the longest p-periodic interval.
    pub fn max_periodic_substring_length(&self, p: usize) -> usize {
        self.maximal_periodic_intervals(p)
            .iter()
            .map(|(lo, hi)| hi - lo + 1)
            .max()
            .expect("a word always has at least one maximal periodic interval")
    }

    /// Lengths of the maximal substrings that are 2-periodic but not
    /// 1-periodic, left to right.
    pub fn alternating_segments(&self) -> Vec<usize> {
        self.maximal_periodic_intervals(2)
            .into_iter()
            .filter(|&(lo, hi)| hi > lo && self.symbols[lo - 1] != self.symbols[lo])
            .map(|(lo, hi)| hi - lo + 1)
            .collect()
    }

    /// All statistics the explicit size formula consumes, in one pass.
    /// Empty index ranges become empty lists, so the formula sums are zero.
    pub fn size_breakdown(&self, b: usize) -> Result<SizeBreakdown> {
        self.require_longer_than(b)?;
        let n = self.n();
        let s = &self.symbols;
        let run_count = 1 + (0..n - b).filter(|&k| s[k] != s[k + b]).count();
        let f = (1..b)
            .map(|j| self.f_stat(b, j).expect("j in range"))
            .collect();
        let g = if n > 2 * b { self.g_all(b) } else { Vec::new() };
        Ok(SizeBreakdown {
            n,
            b,
            run_count,
            f,
            g,
            alt_lengths: self.alternating_segments(),
        })
    }

    /// All `g_{b,i}` in linear time: suffix run-lengths of the 2b-period
    /// constraints plus prefix sums of the b-mismatch indicator.
    fn g_all(&self, b: usize) -> Vec<usize> {
        let s = &self.symbols;
        let n = s.len();
        let m = n - 2 * b;
        let mismatch: Vec<bool> = (0..n - b).map(|k| s[k] != s[k + b]).collect();
        let mut pref = vec![0usize; n - b + 1];
        for k in 0..n - b {
            pref[k + 1] = pref[k] + mismatch[k] as usize;
        }
        // ext[k]: consecutive satisfied constraints x_k = x_{k+2b} starting at k
        let mut ext = vec![0usize; m + 1];
        for k in (0..m).rev() {
            ext[k] = if s[k] == s[k + 2 * b] {
                ext[k + 1] + 1
            } else {
                0
            };
        }
        (0..m)
            .map(|i0| {
                if !mismatch[i0] {
                    return 0;
                }
                let jlo = i0 + b;
                let jmax = (n - 1 - b).min(i0 + b - 1 + ext[i0]);
                if jmax < jlo {
                    0
                } else {
                    pref[jmax + 1] - pref[jlo]
                }
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The statistics bundle behind the explicit size formula: run count,
/// the close-mismatch counts `f_{b,j}`, the periodic-coincidence counts
/// `g_{b,i}`, and the alternating-segment lengths used at `b = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeBreakdown {
    pub n: usize,
    pub b: usize,
    pub run_count: usize,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub alt_lengths: Vec<usize>,
}

/// Number of words in `Sigma_q^n`, or `None` on overflow.
pub fn word_count(q: u32, n: usize) -> Option<u128> {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.checked_mul(q as u128)?;
    }
    Some(total)
}

/// Calls `f` for every word of `Sigma_q^n` in lexicographic order.
pub fn for_each_word(q: u32, n: usize, f: impl FnMut(&Word)) {
    let total = word_count(q, n).expect("word count overflow");
    for_each_word_in_range(q, n, 0, total, f);
}

/// Calls `f` for the words with lexicographic index in `[start, end)`.
/// The same buffer is reused across calls; clone to keep a word.
pub fn for_each_word_in_range(q: u32, n: usize, start: u128, end: u128, mut f: impl FnMut(&Word)) {
    debug_assert!(n >= 1);
    debug_assert!(end <= word_count(q, n).expect("word count overflow"));
    if start >= end {
        return;
    }
    // decode the start index as base-q digits, most significant first
    let mut symbols = vec![0u32; n];
    let mut idx = start;
    for pos in (0..n).rev() {
        symbols[pos] = (idx % q as u128) as u32;
        idx /= q as u128;
    }
    let mut word = Word { q, symbols };
    let mut remaining = end - start;
    loop {
        f(&word);
        remaining -= 1;
        if remaining == 0 {
            return;
        }
        for pos in (0..n).rev() {
            if word.symbols[pos] + 1 < q {
                word.symbols[pos] += 1;
                break;
            }
            word.symbols[pos] = 0;
        }
    }
}

/// Calls `f` for every symbol string of length `len` over `[0, q-1]`, in
/// lexicographic order. Unlike [`for_each_word`], the length may be zero.
pub fn for_each_symbol_string(q: u32, len: usize, mut f: impl FnMut(&[u32])) {
    let mut buf = vec![0u32; len];
    loop {
        f(&buf);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if buf[pos] + 1 < q {
                buf[pos] += 1;
                break;
            }
            buf[pos] = 0;
        }
    }
}
