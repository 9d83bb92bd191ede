//! End-to-end checks of the binary: golden outputs, exit codes, and
//! determinism of seeded runs.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burstlev"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).unwrap_or_else(|e| panic!("bad json: {e}\n{}", stdout(out)))
}

#[test]
fn ball_size_only_golden() {
    let out = run(&[
        "ball",
        "--kind",
        "lev",
        "--b",
        "1",
        "--t",
        "1",
        "--q",
        "2",
        "--word",
        "0101",
        "--size-only",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\"size\":11}\n");
}

#[test]
fn ball_enumeration_lists_members() {
    let out = run(&[
        "ball", "--kind", "ins", "--b", "1", "--q", "2", "--word", "101",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["q"], 2);
    assert_eq!(v["n"], 4);
    let members: Vec<&str> = v["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m.as_str().unwrap())
        .collect();
    assert_eq!(members, vec!["0101", "1001", "1010", "1011", "1101"]);
}

#[test]
fn formula_explicit_golden() {
    let out = run(&[
        "formula", "--name", "explicit", "--q", "3", "--b", "2", "--word", "01201",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["value"], "88");
    assert_eq!(v["formula"], "explicit");
    assert_eq!(v["params"]["word"], "01201");
}

#[test]
fn formula_rational_values() {
    let out = run(&[
        "formula",
        "--name",
        "mean-runs",
        "--q",
        "2",
        "--b",
        "2",
        "--n",
        "5",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["value"], "5/2");
    let out = run(&[
        "formula", "--name", "mean-g", "--q", "2", "--b", "1", "--n", "6", "--i", "1",
    ]);
    assert_eq!(json(&out)["value"], "15/32");
}

#[test]
fn verify_clean_sweep_exits_zero() {
    let out = run(&[
        "verify", "--q", "2", "--b", "2", "--n", "3..9", "--checks", "theorem2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["mismatches"], 0);
    assert_eq!(v["words_checked"], 8 + 16 + 32 + 64 + 128 + 256 + 512);
}

#[test]
fn verify_csv_summary() {
    let out = run(&[
        "verify", "--q", "2", "--b", "1", "--n", "2..4", "--checks", "theorem2", "--format", "csv",
    ]);
    assert!(out.status.success());
    let body = stdout(&out);
    let mut lines = body.lines();
    assert_eq!(
        lines.next(),
        Some("n,q,b,min,max,mean_num,mean_den,mismatches")
    );
    // |L| over length 2: two words of size 3, two of size 4
    assert_eq!(lines.next(), Some("2,2,1,3,4,7,2,0"));
    assert_eq!(body.lines().count(), 4);
}

#[test]
fn verify_config_file() {
    let dir = std::env::temp_dir().join("burstlev-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.json");
    std::fs::write(
        &path,
        r#"{"q":2,"b":1,"n_range":[2,5],"checks":["theorem2","eq1_convention"]}"#,
    )
    .unwrap();
    let out = run(&["verify", "--config", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["mismatches"], 0);
    assert_eq!(v["convention"]["winner"], "mismatch_pairs");
}

#[test]
fn budget_refusal_exits_two() {
    let out = run(&[
        "verify", "--q", "2", "--b", "1", "--n", "2..40", "--checks", "theorem2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn malformed_word_exits_two() {
    let out = run(&[
        "ball", "--kind", "lev", "--b", "1", "--q", "2", "--word", "012",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("outside the alphabet"));
}

#[test]
fn domain_error_exits_two() {
    // n = b: no deletion is possible
    let out = run(&[
        "ball", "--kind", "del", "--b", "2", "--q", "2", "--word", "01",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("domain error"));
}

#[test]
fn unknown_flag_rejected() {
    let out = run(&[
        "stats",
        "--q",
        "2",
        "--b",
        "1",
        "--word",
        "0101",
        "--frobnicate",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_check_rejected() {
    let out = run(&[
        "verify", "--q", "2", "--b", "1", "--n", "2..4", "--checks", "theorem9",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown check"));
}

#[test]
fn failed_bound_exits_one() {
    // at n = 4 the typical code is empty, so the census bound fails
    let out = run(&["census", "--n", "4", "--q", "2", "--b", "1", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["members"], 0);
    assert_eq!(v["meets_bound"], false);
}

#[test]
fn stats_report_shape() {
    let out = run(&["stats", "--q", "2", "--b", "2", "--word", "00110"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["run_count"], 4);
    assert_eq!(v["f"], serde_json::json!([2]));
    assert_eq!(v["g"], serde_json::json!([1]));
    assert_eq!(
        v["runs"],
        serde_json::json!([[1, 2], [2, 3], [3, 4], [4, 5]])
    );
}

#[test]
fn witness_dump_shape() {
    let out = run(&[
        "witness", "--q", "2", "--b", "2", "--word", "00110", "--i", "1", "--j", "3",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["d"], 2);
    assert_eq!(v["A"], serde_json::json!(["00110"]));
    assert_eq!(v["B"], serde_json::json!(["11000"]));
}

#[test]
fn words_file_input() {
    let dir = std::env::temp_dir().join("burstlev-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("words.txt");
    std::fs::write(&path, "0101\n\n0011\n").unwrap();
    let out = run(&[
        "stats",
        "--q",
        "2",
        "--b",
        "1",
        "--words-file",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("burstlev-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let _ = std::fs::remove_file(&path);
    let out = run(&[
        "ball",
        "--kind",
        "lev",
        "--b",
        "1",
        "--q",
        "2",
        "--word",
        "0101",
        "--size-only",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "{\"size\":11}\n");
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = [
        "concentrate",
        "--n",
        "32",
        "--q",
        "2",
        "--b",
        "2",
        "--samples",
        "100",
        "--seed",
        "5",
        "--shards",
        "1",
    ];
    let a = run(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    let mut reshard = args.to_vec();
    let last = reshard.len() - 1;
    reshard[last] = "4";
    let b = run(&reshard);
    let (mut va, mut vb) = (json(&a), json(&b));
    // wall time is the only field allowed to differ
    va["wall_time_ms"] = 0.into();
    vb["wall_time_ms"] = 0.into();
    assert_eq!(va, vb);
}

#[test]
fn typicality_membership() {
    let out = run(&[
        "typicality",
        "--q",
        "2",
        "--b",
        "1",
        "--word",
        "0010011101100011",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["member"], true);
    assert_eq!(v["run_count"], 8);
}

#[test]
fn extremal_csv_and_json() {
    let out = run(&["extremal", "--n", "5", "--q", "3", "--b", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v[0]["max"], "88");
    assert_eq!(v[0]["max_refined"], "88");
    let out = run(&[
        "extremal", "--n", "5..6", "--q", "3", "--b", "2", "--format", "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 3);
}

#[test]
fn average_reports_alt_exponent_failure() {
    let out = run(&["average", "--n", "5", "--q", "2", "--b", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v[0]["equal"], true);
    assert_eq!(v[0]["alt_g_equal"], false);
}

#[test]
fn library_and_cli_agree() {
    // the CLI is a thin adapter: identical inputs give identical values
    let out = run(&[
        "formula", "--name", "min", "--q", "2", "--b", "2", "--n", "5",
    ]);
    let v = json(&out);
    let lib: burstlev::Int =
        burstlev::formulas::min_ball_size(&burstlev::BallParams::new(5, 2, 2, 1).unwrap()).unwrap();
    assert_eq!(v["value"].as_str().unwrap(), lib.to_string());

    let out = run(&[
        "ball",
        "--kind",
        "lev",
        "--b",
        "2",
        "--q",
        "2",
        "--word",
        "00110",
        "--size-only",
    ]);
    let v = json(&out);
    let x = burstlev::Word::parse("00110", 2).unwrap();
    let lib = burstlev::oracle::levenshtein_ball(&x, 2, 1).unwrap().len();
    assert_eq!(v["size"].as_u64().unwrap() as usize, lib);
}

#[test]
fn csv_rejected_for_single_value_commands() {
    let out = run(&[
        "formula", "--name", "min", "--q", "2", "--b", "2", "--n", "5", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_lists_subcommands() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let body = stdout(&out);
    for sub in [
        "stats",
        "ball",
        "formula",
        "verify",
        "extremal",
        "average",
        "typicality",
        "census",
        "concentrate",
        "witness",
    ] {
        assert!(body.contains(sub), "help is missing {sub}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_burstlev")).exists());
}
