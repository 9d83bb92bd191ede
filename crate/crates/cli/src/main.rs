//! Command-line front end: every operation and experiment of the library
//! behind machine-readable subcommands.
//!
//! Exit codes: 0 success, 1 verification mismatch (a counterexample or a
//! failed bound in the report), 2 usage or domain errors (including
//! budget refusals).

use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use burstlev::experiments::{
    average_check, code_census, concentration_mc, default_c, exhaustive_sweep, extremal_scan,
    rows_to_csv, typicality_test, CensusMode, Check, PerNRow, SweepConfig, DEFAULT_BUDGET,
};
use burstlev::formulas::{
    ball_size_envelope, expected_ball_size, expected_ball_size_alt_g, expected_f, expected_g,
    expected_run_count, explicit_ball_size, insertion_ball_size, max_ball_bound,
    max_ball_bound_refined, min_ball_size, segment_formula_size, BallParams, SegmentConvention,
};
use burstlev::oracle::{deletion_ball, insertion_ball, levenshtein_ball};
use burstlev::runs::{intersection_witness, run_decomposition};
use burstlev::word::Word;
use burstlev::{Int, Rat};

#[derive(Parser)]
#[command(
    name = "burstlev",
    version,
    about = "Burst Levenshtein balls: enumeration oracles, exact formulas, verification experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; csv only applies to per-n summary tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct WordInput {
    /// Word text: digits for q <= 10, comma-separated integers above.
    #[arg(long = "word")]
    words: Vec<String>,
    /// File with one word per line.
    #[arg(long)]
    words_file: Option<PathBuf>,
}

impl WordInput {
    fn collect(&self, q: u32) -> Result<Vec<Word>, CliError> {
        let mut texts = self.words.clone();
        if let Some(path) = &self.words_file {
            let body = fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            texts.extend(
                body.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from),
            );
        }
        if texts.is_empty() {
            return Err(CliError::usage(
                "no input words (use --word or --words-file)",
            ));
        }
        texts
            .iter()
            .map(|t| Word::parse(t, q).map_err(CliError::from))
            .collect()
    }

    fn single(&self, q: u32) -> Result<Word, CliError> {
        let words = self.collect(q)?;
        if words.len() != 1 {
            return Err(CliError::usage("exactly one --word is required here"));
        }
        Ok(words.into_iter().next().unwrap())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-word statistics: run count, f/g statistics, alternating
    /// segments, run intervals.
    Stats {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        #[command(flatten)]
        input: WordInput,
    },
    /// Enumerate a ball (or just its size) around a word.
    Ball {
        #[arg(long, value_enum)]
        kind: BallKind,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[command(flatten)]
        input: WordInput,
        /// Emit only the cardinality.
        #[arg(long)]
        size_only: bool,
    },
    /// Evaluate a closed form.
    Formula {
        /// One of: insertion, min, explicit, envelope, segment,
        /// max-general, max-refined, mean-runs, mean-f, mean-g,
        /// mean-size, mean-size-alt-g.
        #[arg(long)]
        name: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        input: WordInput,
        #[arg(long)]
        j: Option<u32>,
        #[arg(long)]
        i: Option<u32>,
        /// Segment convention: sum_lengths, sum_lengths_minus_one,
        /// mismatch_pairs.
        #[arg(long)]
        convention: Option<String>,
    },
    /// Exhaustive verification sweep against the enumeration oracle.
    Verify {
        /// JSON sweep configuration file; overrides the other flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Inclusive length range `a..b` (or a single length).
        #[arg(long)]
        n: Option<String>,
        /// Comma-separated check names (theorem2, theorem1_equality,
        /// lemma3, observation1, claim1, claim23, lemma4, eq1_convention).
        #[arg(long)]
        checks: Option<String>,
        #[arg(long)]
        shards: Option<usize>,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// Scan a whole space for extremal ball sizes.
    Extremal {
        /// Inclusive length range `a..b` (or a single length).
        #[arg(long)]
        n: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        shards: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Compare the expected-size formula with the exhaustive mean.
    Average {
        /// Inclusive length range `a..b` (or a single length).
        #[arg(long)]
        n: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        shards: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Evaluate typical-code membership for words.
    Typicality {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        #[command(flatten)]
        input: WordInput,
    },
    /// Measure the typical-code fraction of a space.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        /// Walk the whole space instead of sampling.
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        shards: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Monte Carlo concentration of ball sizes around the expectation.
    Concentrate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Concentration constant as `num` or `num/den`; defaults to the
        /// calibrated value.
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        shards: Option<usize>,
    },
    /// Dump the A/B intersection witness for a pair of runs.
    Witness {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        b: usize,
        #[command(flatten)]
        input: WordInput,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BallKind {
    Del,
    Ins,
    Lev,
}

struct CliError {
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
        }
    }
}

impl From<burstlev::Error> for CliError {
    fn from(e: burstlev::Error) -> Self {
        CliError {
            message: e.to_string(),
        }
    }
}

fn default_shards() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn parse_range(text: &str) -> Result<(usize, usize), CliError> {
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| CliError::usage(format!("bad length {s:?} in range {text:?}")))
    };
    match text.split_once("..") {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi)?)),
        None => {
            let n = parse(text)?;
            Ok((n, n))
        }
    }
}

fn parse_rational(text: &str) -> Result<Rat, CliError> {
    let parse_int = |s: &str| {
        s.trim()
            .parse::<Int>()
            .map_err(|_| CliError::usage(format!("bad rational {text:?}")))
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den == Int::from(0) {
                return Err(CliError::usage("rational denominator must be nonzero"));
            }
            Ok(Rat::new(parse_int(num)?, den))
        }
        None => Ok(Rat::from_integer(parse_int(text)?)),
    }
}

fn parse_checks(text: &str) -> Result<Vec<Check>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            Check::from_token(t).ok_or_else(|| CliError::usage(format!("unknown check {t:?}")))
        })
        .collect()
}

/// The `{"formula", "params", "value"}` JSON shape.
fn formula_json(name: &str, params: serde_json::Value, value: impl Display) -> serde_json::Value {
    serde_json::json!({ "formula": name, "params": params, "value": value.to_string() })
}

fn emit(cli: &Cli, body: String) -> Result<(), CliError> {
    let body = if body.ends_with('\n') {
        body
    } else {
        body + "\n"
    };
    match &cli.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn require_json(cli: &Cli, what: &str) -> Result<(), CliError> {
    if cli.format == Format::Csv {
        return Err(CliError::usage(format!(
            "{what} has no csv form; use --format json"
        )));
    }
    Ok(())
}

fn summary_output(cli: &Cli, json: String, rows: Vec<PerNRow>) -> Result<(), CliError> {
    match cli.format {
        Format::Json => emit(cli, json),
        Format::Csv => emit(cli, rows_to_csv(&rows)),
    }
}

/// Exit status 1 signals a verification mismatch; the report still goes
/// to the requested output.
fn run(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Stats { q, b, input } => {
            require_json(cli, "stats")?;
            let mut reports = Vec::new();
            for x in input.collect(*q)? {
                let bd = x.size_breakdown(*b)?;
                let rd = run_decomposition(&x, *b)?;
                reports.push(serde_json::json!({
                    "word": x.render(),
                    "q": q,
                    "n": x.n(),
                    "b": b,
                    "run_count": bd.run_count,
                    "f": bd.f,
                    "g": bd.g,
                    "alt_lengths": bd.alt_lengths,
                    "runs": rd.runs(),
                }));
            }
            let body = if reports.len() == 1 {
                to_json(&reports[0])
            } else {
                to_json(&reports)
            };
            emit(cli, body)?;
            Ok(true)
        }
        Command::Ball {
            kind,
            q,
            b,
            t,
            input,
            size_only,
        } => {
            require_json(cli, "ball")?;
            let x = input.single(*q)?;
            let set = match kind {
                BallKind::Del => deletion_ball(&x, *b, *t)?,
                BallKind::Ins => insertion_ball(&x, *b, *t)?,
                BallKind::Lev => levenshtein_ball(&x, *b, *t)?,
            };
            let body = if *size_only {
                serde_json::json!({ "size": set.len() }).to_string()
            } else {
                to_json(&set)
            };
            emit(cli, body)?;
            Ok(true)
        }
        Command::Formula {
            name,
            q,
            b,
            t,
            n,
            input,
            j,
            i,
            convention,
        } => {
            require_json(cli, "formula")?;
            let body =
                evaluate_formula(name, *q, *b, *t, *n, input, *j, *i, convention.as_deref())?;
            emit(cli, body.to_string())?;
            Ok(true)
        }
        Command::Verify {
            config,
            q,
            b,
            t,
            n,
            checks,
            shards,
            budget,
        } => {
            let cfg = match config {
                Some(path) => {
                    let body = fs::read_to_string(path).map_err(|e| {
                        CliError::usage(format!("cannot read {}: {e}", path.display()))
                    })?;
                    let mut cfg: SweepConfig = serde_json::from_str(&body)
                        .map_err(|e| CliError::usage(format!("bad config: {e}")))?;
                    if let Some(s) = shards {
                        cfg.shard_count = *s;
                    }
                    cfg
                }
                None => {
                    let missing = |flag: &str| {
                        CliError::usage(format!("--{flag} is required without --config"))
                    };
                    SweepConfig {
                        q: q.ok_or_else(|| missing("q"))?,
                        b: b.ok_or_else(|| missing("b"))?,
                        t: *t,
                        n_range: parse_range(n.as_deref().ok_or_else(|| missing("n"))?)?,
                        checks: parse_checks(checks.as_deref().ok_or_else(|| missing("checks"))?)?,
                        shard_count: shards.unwrap_or_else(default_shards),
                        budget: budget.unwrap_or(DEFAULT_BUDGET),
                    }
                }
            };
            let report = exhaustive_sweep(&cfg)?;
            summary_output(cli, to_json(&report), report.per_n.clone())?;
            Ok(report.passed())
        }
        Command::Extremal {
            n,
            q,
            b,
            shards,
            budget,
        } => {
            let (lo, hi) = parse_range(n)?;
            let shard_count = shards.unwrap_or_else(default_shards);
            let mut reports = Vec::new();
            for n in lo..=hi {
                reports.push(extremal_scan(n, *q, *b, shard_count, *budget)?);
            }
            let pass = reports.iter().all(|r| r.passed());
            let rows = reports.iter().map(|r| r.to_row()).collect();
            summary_output(cli, to_json(&reports), rows)?;
            Ok(pass)
        }
        Command::Average {
            n,
            q,
            b,
            shards,
            budget,
        } => {
            let (lo, hi) = parse_range(n)?;
            let shard_count = shards.unwrap_or_else(default_shards);
            let mut reports = Vec::new();
            for n in lo..=hi {
                reports.push(average_check(n, *q, *b, shard_count, *budget)?);
            }
            let pass = reports.iter().all(|r| r.equal);
            let rows = reports.iter().map(|r| r.to_row()).collect();
            summary_output(cli, to_json(&reports), rows)?;
            Ok(pass)
        }
        Command::Typicality { q, b, input } => {
            require_json(cli, "typicality")?;
            let mut reports = Vec::new();
            for x in input.collect(*q)? {
                reports.push(typicality_test(&x, *b)?);
            }
            let body = if reports.len() == 1 {
                to_json(&reports[0])
            } else {
                to_json(&reports)
            };
            emit(cli, body)?;
            Ok(true)
        }
        Command::Census {
            n,
            q,
            b,
            exhaustive,
            samples,
            seed,
            shards,
            budget,
        } => {
            require_json(cli, "census")?;
            let mode = if *exhaustive {
                CensusMode::Exhaustive
            } else {
                let samples = samples
                    .ok_or_else(|| CliError::usage("census needs --samples or --exhaustive"))?;
                CensusMode::Sampled {
                    samples,
                    seed: *seed,
                }
            };
            let report = code_census(
                *n,
                *q,
                *b,
                mode,
                shards.unwrap_or_else(default_shards),
                *budget,
            )?;
            let pass = report.passed();
            emit(cli, to_json(&report))?;
            Ok(pass)
        }
        Command::Concentrate {
            n,
            q,
            b,
            samples,
            seed,
            c,
            shards,
        } => {
            require_json(cli, "concentrate")?;
            let c = match c {
                Some(text) => parse_rational(text)?,
                None => default_c(),
            };
            let report = concentration_mc(
                *n,
                *q,
                *b,
                *samples,
                *seed,
                &c,
                shards.unwrap_or_else(default_shards),
            )?;
            let pass = report.within_bound;
            emit(cli, to_json(&report))?;
            Ok(pass)
        }
        Command::Witness { q, b, input, i, j } => {
            require_json(cli, "witness")?;
            let x = input.single(*q)?;
            let witness = intersection_witness(&x, *b, *i, *j)?;
            emit(cli, to_json(&witness))?;
            Ok(true)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn evaluate_formula(
    name: &str,
    q: u32,
    b: u32,
    t: u32,
    n: Option<u32>,
    input: &WordInput,
    j: Option<u32>,
    i: Option<u32>,
    convention: Option<&str>,
) -> Result<serde_json::Value, CliError> {
    let need_n = || n.ok_or_else(|| CliError::usage(format!("formula {name} needs --n")));
    let need_word = || input.single(q);
    match name {
        "insertion" => {
            let p = BallParams::new(need_n()?, q, b, t)?;
            Ok(formula_json(
                name,
                serde_json::to_value(p).unwrap(),
                insertion_ball_size::<Int>(&p)?,
            ))
        }
        "min" => {
            let p = BallParams::new(need_n()?, q, b, t)?;
            Ok(formula_json(
                name,
                serde_json::to_value(p).unwrap(),
                min_ball_size::<Int>(&p)?,
            ))
        }
        "max-general" => {
            let p = BallParams::new(need_n()?, q, b, t)?;
            Ok(formula_json(
                name,
                serde_json::to_value(p).unwrap(),
                max_ball_bound::<Int>(&p)?,
            ))
        }
        "max-refined" => {
            let p = BallParams::new(need_n()?, q, b, t)?;
            Ok(formula_json(
                name,
                serde_json::to_value(p).unwrap(),
                max_ball_bound_refined::<Int>(&p)?,
            ))
        }
        "explicit" | "envelope" => {
            let x = need_word()?;
            let p = BallParams::new(x.n() as u32, q, b, t)?;
            let bd = x.size_breakdown(b as usize)?;
            let value: Int = if name == "explicit" {
                explicit_ball_size(&bd, &p)?
            } else {
                ball_size_envelope(&bd, &p)?
            };
            let params =
                serde_json::json!({ "q": q, "b": b, "t": t, "n": x.n(), "word": x.render() });
            Ok(formula_json(name, params, value))
        }
        "segment" => {
            let x = need_word()?;
            let convention =
                convention.ok_or_else(|| CliError::usage("formula segment needs --convention"))?;
            let convention = SegmentConvention::from_token(convention)
                .ok_or_else(|| CliError::usage(format!("unknown convention {convention:?}")))?;
            let value: Int = segment_formula_size(&x, convention)?;
            let params = serde_json::json!({
                "q": q, "n": x.n(), "word": x.render(), "convention": convention.token()
            });
            Ok(formula_json(name, params, value))
        }
        "mean-runs" => {
            let n = need_n()?;
            let params = serde_json::json!({ "n": n, "q": q, "b": b });
            Ok(formula_json(
                name,
                params,
                expected_run_count::<Int>(n, q, b)?,
            ))
        }
        "mean-f" => {
            let n = need_n()?;
            let j = j.ok_or_else(|| CliError::usage("formula mean-f needs --j"))?;
            let params = serde_json::json!({ "n": n, "q": q, "b": b, "j": j });
            Ok(formula_json(name, params, expected_f::<Int>(n, q, b, j)?))
        }
        "mean-g" => {
            let n = need_n()?;
            let i = i.ok_or_else(|| CliError::usage("formula mean-g needs --i"))?;
            let params = serde_json::json!({ "n": n, "q": q, "b": b, "i": i });
            Ok(formula_json(name, params, expected_g::<Int>(n, q, b, i)?))
        }
        "mean-size" => {
            let n = need_n()?;
            let params = serde_json::json!({ "n": n, "q": q, "b": b });
            Ok(formula_json(
                name,
                params,
                expected_ball_size::<Int>(n, q, b)?,
            ))
        }
        "mean-size-alt-g" => {
            let n = need_n()?;
            let params = serde_json::json!({ "n": n, "q": q, "b": b });
            Ok(formula_json(
                name,
                params,
                expected_ball_size_alt_g::<Int>(n, q, b)?,
            ))
        }
        other => Err(CliError::usage(format!("unknown formula {other:?}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(2)
        }
    }
}
