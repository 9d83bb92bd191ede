//! Exhaustive verification sweeps over `Sigma_q^n`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::shard::run_sharded;
use super::{PerNRow, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::formulas::{
    explicit_ball_size, insertion_ball_size, min_ball_size, segment_formula_size, BallParams,
    SegmentConvention,
};
use crate::oracle::{
    commutativity_check, deletion_ball, insertion_ball, insertion_intersection_oracle,
    levenshtein_ball,
};
use crate::runs::{
    closed_form_insertion_intersection, overlap_decomposition_check, pair_intersection_check,
};
use crate::word::{for_each_symbol_string, for_each_word_in_range, word_count, Word};
use crate::{Int, Rat};

/// Cap on the counterexample listing carried in a report.
const MAX_COUNTEREXAMPLES: usize = 10;

/// The per-word checks a sweep can run against the enumeration oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Explicit radius-one size formula versus the enumerated ball.
    Theorem2,
    /// Minimum-size bound, with equality exactly for singleton deletion
    /// balls.
    Theorem1Equality,
    /// Insertion-ball cardinality formula.
    Lemma3,
    /// Deletions-then-insertions equals insertions-then-deletions.
    Observation1,
    /// Pairwise intersection decomposition `X_i ∩ X_j = A ⊔ B`.
    Claim1,
    /// Triple witness relations and the union-size expansion.
    Claim23,
    /// Closed-form pairwise insertion-ball intersection on every
    /// decomposition of the word.
    Lemma4,
    /// Arbitration of the alternating-segment convention in the
    /// unit-burst size formula (b = 1 only).
    Eq1Convention,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Theorem2,
        Check::Theorem1Equality,
        Check::Lemma3,
        Check::Observation1,
        Check::Claim1,
        Check::Claim23,
        Check::Lemma4,
        Check::Eq1Convention,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Check::Theorem2 => "theorem2",
            Check::Theorem1Equality => "theorem1_equality",
            Check::Lemma3 => "lemma3",
            Check::Observation1 => "observation1",
            Check::Claim1 => "claim1",
            Check::Claim23 => "claim23",
            Check::Lemma4 => "lemma4",
            Check::Eq1Convention => "eq1_convention",
        }
    }

    pub fn from_token(tok: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.token() == tok)
    }

    /// Checks that enumerate deletion balls need `n >= b*t + 1`.
    fn needs_deletion(self) -> bool {
        !matches!(self, Check::Lemma3)
    }

    /// Checks whose statements only exist at radius one.
    fn radius_one_only(self) -> bool {
        matches!(
            self,
            Check::Theorem2 | Check::Claim1 | Check::Claim23 | Check::Lemma4 | Check::Eq1Convention
        )
    }
}

/// Configuration of an exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub q: u32,
    pub b: usize,
    #[serde(default = "default_t")]
    pub t: usize,
    /// Inclusive range of word lengths.
    pub n_range: (usize, usize),
    pub checks: Vec<Check>,
    #[serde(default = "default_shards")]
    pub shard_count: usize,
    #[serde(default = "default_budget")]
    pub budget: u128,
}

fn default_t() -> usize {
    1
}

fn default_shards() -> usize {
    1
}

fn default_budget() -> u128 {
    DEFAULT_BUDGET
}

impl SweepConfig {
    /// Total number of words the sweep would enumerate, `None` on overflow.
    pub fn total_words(&self) -> Option<u128> {
        let mut total: u128 = 0;
        for n in self.n_range.0..=self.n_range.1 {
            total = total.checked_add(word_count(self.q, n)?)?;
        }
        Some(total)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::AlphabetTooSmall(self.q));
        }
        if self.b < 1 || self.t < 1 {
            return Err(Error::domain("sweep needs b >= 1 and t >= 1"));
        }
        let (lo, hi) = self.n_range;
        if lo < 1 || lo > hi {
            return Err(Error::domain(format!("bad length range [{lo}, {hi}]")));
        }
        if self.checks.is_empty() {
            return Err(Error::domain("no checks enabled"));
        }
        for c in &self.checks {
            if c.radius_one_only() && self.t != 1 {
                return Err(Error::domain(format!(
                    "check {} is only defined at radius t=1",
                    c.token()
                )));
            }
            if *c == Check::Eq1Convention && self.b != 1 {
                return Err(Error::domain("eq1_convention only applies to b=1"));
            }
            if c.needs_deletion() && lo < self.b * self.t + 1 {
                return Err(Error::domain(format!(
                    "check {} needs n >= b*t + 1 = {}, but the range starts at {lo}",
                    c.token(),
                    self.b * self.t + 1
                )));
            }
        }
        let required = self.total_words().unwrap_or(u128::MAX);
        if required > self.budget {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

/// A counterexample as recorded in a report: the word, what the oracle
/// says, and what the formula or construction produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: Check,
    pub n: usize,
    pub word: String,
    pub expected: String,
    pub actual: String,
}

/// Per-convention mismatch tallies for the segment-formula arbitration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConventionReport {
    pub tallies: Vec<(String, u64)>,
    /// The convention matching the oracle on every word, when exactly one
    /// does.
    pub winner: Option<String>,
    pub unique: bool,
}

/// Outcome of an exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub words_checked: u64,
    pub mismatches: u64,
    pub counterexamples: Vec<Counterexample>,
    pub per_n: Vec<PerNRow>,
    pub convention: Option<ConventionReport>,
    /// Always `None`: exhaustive enumeration uses no randomness.
    pub seed: Option<u64>,
    pub wall_time_ms: u128,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Default)]
struct ShardState {
    words: u64,
    mismatches: u64,
    counterexamples: Vec<Counterexample>,
    min: Option<Int>,
    max: Option<Int>,
    sum: Int,
    convention_mismatches: [u64; 3],
}

struct NContext {
    n: usize,
    q: u32,
    b: usize,
    t: usize,
    checks: Vec<Check>,
    params: Option<BallParams>,
    min_size: Option<Int>,
    insertion_size: Option<Int>,
}

impl NContext {
    fn new(cfg: &SweepConfig, n: usize) -> NContext {
        let deletable = n > cfg.b * cfg.t;
        let params = BallParams::new(n as u32, cfg.q, cfg.b as u32, cfg.t as u32).ok();
        let min_size = params
            .as_ref()
            .filter(|_| deletable)
            .map(|p| min_ball_size::<Int>(p).expect("deletable params"));
        let insertion_size = params
            .as_ref()
            .map(|p| insertion_ball_size::<Int>(p).expect("valid params"));
        NContext {
            n,
            q: cfg.q,
            b: cfg.b,
            t: cfg.t,
            checks: cfg.checks.clone(),
            params,
            min_size,
            insertion_size,
        }
    }

    fn check_word(&self, x: &Word, state: &mut ShardState) {
        state.words += 1;
        let mut oracle_size: Option<usize> = None;
        let mut oracle = |x: &Word| -> usize {
            *oracle_size.get_or_insert_with(|| {
                levenshtein_ball(x, self.b, self.t)
                    .expect("deletable word")
                    .len()
            })
        };
        let mut record =
            |state: &mut ShardState, check: Check, expected: String, actual: String| {
                state.mismatches += 1;
                if state.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    state.counterexamples.push(Counterexample {
                        check,
                        n: self.n,
                        word: x.render(),
                        expected,
                        actual,
                    });
                }
            };

        // per-n summary statistic: the radius-one formula size when t=1,
        // otherwise the enumerated ball size
        let summary: Option<Int> = if self.n > self.b * self.t {
            if self.t == 1 {
                let bd = x.size_breakdown(self.b).expect("n >= b+1");
                Some(explicit_ball_size::<Int>(&bd, self.params.as_ref().unwrap()).unwrap())
            } else {
                Some(Int::from(oracle(x)))
            }
        } else {
            None
        };
        if let Some(size) = &summary {
            state.sum += size;
            if state.min.as_ref().is_none_or(|m| size < m) {
                state.min = Some(size.clone());
            }
            if state.max.as_ref().is_none_or(|m| size > m) {
                state.max = Some(size.clone());
            }
        }

        for check in &self.checks {
            match check {
                Check::Theorem2 => {
                    let actual = summary.clone().expect("validated range");
                    let expected = Int::from(oracle(x));
                    if actual != expected {
                        record(
                            state,
                            Check::Theorem2,
                            expected.to_string(),
                            actual.to_string(),
                        );
                    }
                }
                Check::Theorem1Equality => {
                    let size = oracle(x);
                    let min = self.min_size.as_ref().expect("validated range");
                    let singleton = deletion_ball(x, self.b, self.t).unwrap().len() == 1;
                    let mut ok =
                        Int::from(size) >= *min && ((Int::from(size) == *min) == singleton);
                    if self.t == 1 {
                        // at radius one the singleton case is exactly the
                        // single-run case
                        ok &= singleton == (x.b_run_count(self.b).unwrap() == 1);
                    }
                    if !ok {
                        record(
                            state,
                            Check::Theorem1Equality,
                            format!("size >= {min}, equality iff singleton deletion ball"),
                            format!("size={size}, singleton={singleton}"),
                        );
                    }
                }
                Check::Lemma3 => {
                    let actual = insertion_ball(x, self.b, self.t).unwrap().len();
                    let expected = self.insertion_size.as_ref().unwrap();
                    if Int::from(actual) != *expected {
                        record(
                            state,
                            Check::Lemma3,
                            expected.to_string(),
                            actual.to_string(),
                        );
                    }
                }
                Check::Observation1 => {
                    if !commutativity_check(x, self.b, self.t).unwrap() {
                        record(
                            state,
                            Check::Observation1,
                            "order-independent ball".into(),
                            "order changes the ball".into(),
                        );
                    }
                }
                Check::Claim1 => {
                    let r = x.b_run_count(self.b).unwrap();
                    for i in 1..=r {
                        for j in i + 1..=r {
                            if !pair_intersection_check(x, self.b, i, j).unwrap() {
                                record(
                                    state,
                                    Check::Claim1,
                                    format!("A ⊔ B decomposition at ({i},{j})"),
                                    "witness differs from oracle intersection".into(),
                                );
                            }
                        }
                    }
                }
                Check::Claim23 => {
                    let report = overlap_decomposition_check(x, self.b).unwrap();
                    if !report.pass {
                        record(
                            state,
                            Check::Claim23,
                            "witness relations and size expansion".into(),
                            report.failure.unwrap_or_default(),
                        );
                    }
                }
                Check::Lemma4 => self.check_decompositions(x, state, &mut record),
                Check::Eq1Convention => {
                    let expected = oracle(x);
                    let mut any_match = false;
                    for (slot, convention) in SegmentConvention::ALL.into_iter().enumerate() {
                        let value = segment_formula_size::<Int>(x, convention).unwrap();
                        if value == Int::from(expected) {
                            any_match = true;
                        } else {
                            state.convention_mismatches[slot] += 1;
                        }
                    }
                    if !any_match {
                        record(
                            state,
                            Check::Eq1Convention,
                            expected.to_string(),
                            "no segment convention matches".into(),
                        );
                    }
                }
            }
        }
    }

    /// Closed-form pairwise intersection versus the oracle, over every
    /// decomposition `x = u v w` and every same-length replacement of `v`
    /// differing in its first and last symbols.
    fn check_decompositions(
        &self,
        x: &Word,
        state: &mut ShardState,
        record: &mut impl FnMut(&mut ShardState, Check, String, String),
    ) {
        let n = self.n;
        let xs = x.symbols().to_vec();
        for a in 1..=n {
            for c in a..=n {
                let d = c - a + 1;
                let u = &xs[..a - 1];
                let w = &xs[c..];
                let v = Word::new(self.q, xs[a - 1..c].to_vec()).unwrap();
                for_each_symbol_string(self.q, d, |v2s| {
                    if v2s[0] == xs[a - 1] || v2s[d - 1] == xs[c - 1] {
                        return;
                    }
                    let v2 = Word::new(self.q, v2s.to_vec()).unwrap();
                    let closed = closed_form_insertion_intersection(u, &v, &v2, w, self.b).unwrap();
                    let mut ys = Vec::with_capacity(n);
                    ys.extend_from_slice(u);
                    ys.extend_from_slice(v2s);
                    ys.extend_from_slice(w);
                    let y = Word::new(self.q, ys).unwrap();
                    let oracle = insertion_intersection_oracle(x, &y, self.b).unwrap();
                    if closed != oracle {
                        record(
                            state,
                            Check::Lemma4,
                            format!("{} members against {}", oracle.len(), y.render()),
                            format!("{} members", closed.len()),
                        );
                    }
                });
            }
        }
    }
}

/// Runs every enabled check on every word of `Sigma_q^n` for each `n` in
/// the configured range. Zero mismatches on a correct build.
pub fn exhaustive_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let started = Instant::now();
    let mut cfg = cfg.clone();
    cfg.checks.sort_unstable();
    cfg.checks.dedup();

    let mut per_n = Vec::new();
    let mut counterexamples = Vec::new();
    let mut words_checked = 0u64;
    let mut mismatches = 0u64;
    let mut convention_mismatches = [0u64; 3];

    for n in cfg.n_range.0..=cfg.n_range.1 {
        let ctx = NContext::new(&cfg, n);
        let total = word_count(cfg.q, n).expect("budget-checked");
        let partials = run_sharded(total, cfg.shard_count, |lo, hi| {
            let mut state = ShardState::default();
            for_each_word_in_range(cfg.q, n, lo, hi, |x| ctx.check_word(x, &mut state));
            state
        });

        let mut n_state = ShardState::default();
        for p in partials {
            n_state.words += p.words;
            n_state.mismatches += p.mismatches;
            n_state.counterexamples.extend(p.counterexamples);
            n_state.sum += p.sum;
            if let Some(m) = p.min {
                if n_state.min.as_ref().is_none_or(|cur| m < *cur) {
                    n_state.min = Some(m);
                }
            }
            if let Some(m) = p.max {
                if n_state.max.as_ref().is_none_or(|cur| m > *cur) {
                    n_state.max = Some(m);
                }
            }
            for (acc, v) in convention_mismatches
                .iter_mut()
                .zip(p.convention_mismatches)
            {
                *acc += v;
            }
        }

        let has_summary = n > cfg.b * cfg.t;
        let mean = has_summary.then(|| Rat::new(n_state.sum.clone(), Int::from(n_state.words)));
        per_n.push(PerNRow {
            n,
            q: cfg.q,
            b: cfg.b,
            words: n_state.words,
            min: n_state.min.map(|m| m.to_string()),
            max: n_state.max.map(|m| m.to_string()),
            mean_num: mean.as_ref().map(|m| m.numer().to_string()),
            mean_den: mean.as_ref().map(|m| m.denom().to_string()),
            mismatches: n_state.mismatches,
        });
        words_checked += n_state.words;
        mismatches += n_state.mismatches;
        counterexamples.extend(n_state.counterexamples);
        counterexamples.truncate(MAX_COUNTEREXAMPLES);
    }

    let convention = cfg.checks.contains(&Check::Eq1Convention).then(|| {
        let tallies: Vec<(String, u64)> = SegmentConvention::ALL
            .into_iter()
            .zip(convention_mismatches)
            .map(|(c, m)| (c.token().to_string(), m))
            .collect();
        let zero: Vec<&(String, u64)> = tallies.iter().filter(|(_, m)| *m == 0).collect();
        ConventionReport {
            winner: (zero.len() == 1).then(|| zero[0].0.clone()),
            unique: zero.len() == 1,
            tallies,
        }
    });

    Ok(SweepReport {
        config: cfg,
        words_checked,
        mismatches,
        counterexamples,
        per_n,
        convention,
        seed: None,
        wall_time_ms: started.elapsed().as_millis(),
    })
}
