use std::fs;
use std::path::PathBuf;

use msoword::cli::{exit_code, run, to_json_text, CliConfig, Format, Outcome};
use msoword::Error;
use serde_json::Value;

fn msoword(args: &[&str]) -> Outcome {
    run(std::iter::once("msoword").chain(args.iter().copied()))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("msoword-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(args: &[&str]) -> (Outcome, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = msoword(&full);
    let v: Value = serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout));
    (o, v)
}

#[test]
fn decide_prints_truth_values() {
    let o = msoword(&["decide", "--word", "up:u=1,v=0", "--formula", "E x. P(x)"]);
    assert_eq!((o.code, o.stdout.trim()), (0, "true"));
    let o = msoword(&["decide", "--word", "bi:x=0|y=|z=0", "--formula", "E x. P(x)"]);
    assert_eq!((o.code, o.stdout.trim()), (0, "false"));
    let o = msoword(&["decide", "--word", "fin:0110", "--formula", "E x. E y. succ(x, y) & P(x) & P(y)"]);
    assert_eq!((o.code, o.stdout.trim()), (0, "true"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["decide", "--word", "up:u=1", "--formula", "E x. P(x)"],
        &["decide", "--word", "up:u=1,v=0", "--formula", "E x P(x)"],
        &["decide", "--word", "up:u=1,v=0", "--formula", "P(x)"],
        &["biinf", "classify"],
    ] {
        let o = msoword(args);
        assert_eq!(o.code, 2, "{args:?}: {}", o.stderr);
        assert!(o.stderr.starts_with("error:"), "{args:?}: {}", o.stderr);
    }
    assert_eq!(msoword(&["--help"]).code, 0);
    assert_eq!(msoword(&["--version"]).code, 0);
}

#[test]
fn json_output_round_trips() {
    for args in [
        &["types", "unary", "-k", "2"][..],
        &["types", "equiv", "-k", "1", "01", "10"],
        &["types", "rep", "up:u=1,v=01", "-k", "2"],
        &["biinf", "classify", "bi:x=0|y=1|z=0"],
        &["biinf", "realize", "--lang", "golden", "--steps", "3"],
        &["indicator", "--word", "up:u=1,v=0", "--formula", "E x. P(x)"],
        &["selftest", "--list"],
    ] {
        let (o, v) = json(args);
        assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
        assert_eq!(to_json_text(&v), o.stdout, "{args:?}");
    }
}

#[test]
fn json_errors_carry_exit_code() {
    let (o, v) = json(&["decide", "--word", "nope", "--formula", "E x. P(x)"]);
    assert_eq!(o.code, 2);
    assert_eq!(v["exit"], 2);
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn budget_errors_exit_3() {
    let cfg = scratch("tight.conf");
    fs::write(&cfg, "# tiny search\ntype.max_search_len = 2\n").unwrap();
    let o = msoword(&["--config", cfg.to_str().unwrap(), "types", "unary", "-k", "2"]);
    assert_eq!(o.code, 3, "{}", o.stderr);
    assert_eq!(exit_code(&Error::Exhausted("x".into())), 3);
    assert_eq!(exit_code(&Error::Certificate("x".into())), 1);
    assert_eq!(exit_code(&Error::Unbound("x".into())), 2);
}

#[test]
fn config_files() {
    let c = CliConfig::parse("format = json\nseed = 0\ncond.max_len = 5 # comment\n").unwrap();
    assert_eq!(c.format, Format::Json);
    assert_eq!(c.seed, 0);
    assert_eq!(c.bounds.max_len, 5);
    assert!(CliConfig::parse("nonsense = 1").is_err());
    assert!(CliConfig::parse("search.budget = 0").is_err());
    assert!(CliConfig::parse("type.strategy = psychic").is_err());

    let path = scratch("json.conf");
    fs::write(&path, "format = json\n").unwrap();
    let o = msoword(&["--config", path.to_str().unwrap(), "types", "unary", "-k", "1"]);
    assert_eq!(o.code, 0);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["t"], 1);
    let bad = scratch("bad.conf");
    fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(msoword(&["--config", bad.to_str().unwrap(), "types", "unary", "-k", "1"]).code, 2);
}

#[test]
fn compiled_automaton_feeds_language_commands() {
    let dfa = scratch("golden.dfa");
    let o = msoword(&[
        "compile",
        "--formula",
        "A x. A y. succ(x, y) -> !(P(x) & P(y))",
        "--out",
        dfa.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = msoword(&["biinf", "classify", "--lang", dfa.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.starts_with("recurrent non-periodic"), "{}", o.stdout);
    let o = msoword(&["biinf", "equiv", &format!("lang:{}", dfa.display()), "lang:golden"]);
    assert_eq!((o.code, o.stdout.trim()), (0, "true"), "{}", o.stderr);
}

#[test]
fn embed_then_decode() {
    let stream = scratch("embed.stream");
    let o = msoword(&["biinf", "embed", "--lang", "golden", "--bits", "10110", "--out", stream.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = msoword(&["biinf", "decode", "--lang", "golden", "--stream", stream.to_str().unwrap()]);
    assert_eq!((o.code, o.stdout.trim()), (0, "10110"), "{}", o.stderr);
}

#[test]
fn interleave_reports_decoded_bits() {
    let o = msoword(&["biinf", "interleave", "--bits", "0110"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.trim_end().ends_with("decoded 0110"), "{}", o.stdout);
}

#[test]
fn selftest_quick_suite() {
    let o = msoword(&["selftest", "--quick", "--suite", "divides", "--suite", "shift"]);
    assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    assert!(o.stdout.contains("divides") && o.stdout.contains("shift"));
    assert_eq!(msoword(&["selftest", "--suite", "nope"]).code, 2);
}
