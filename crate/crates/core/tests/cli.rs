//! End-to-end tests of the `bigo-wa` binary: verdicts, exit codes and
//! diagnostics.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn instance(name: &str) -> String {
    format!("{}/instances/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bigo-wa")).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bigo-wa"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(bytes)))
}

/// Exit code and the parsed stderr diagnostic.
fn failure(out: &Output) -> (i32, String, String) {
    let v = json(&out.stderr);
    (out.status.code().unwrap(), v["error"].as_str().unwrap().into(), v["message"].as_str().unwrap().into())
}

const ONE_EDGE: &str = r#"{"states":["s","t"],"alphabet":["a"],"finals":["t"],
    "transitions":[{"from":"s","symbol":"a","to":"t","weight":"W"}]}"#;

#[test]
fn verdicts_map_to_exit_codes() {
    let out = run(&["check", &instance("unbounded_ratio"), "--mode", "unary"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out.stdout);
    assert_eq!(v["verdict"], "NotBigO");
    assert_eq!(v["witness"]["type"], "DegreeGap");

    let out = run(&["check", &instance("unbounded_ratio"), "--s", "s'", "--s-prime", "s"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out.stdout)["verdict"], "IsBigO");
}

#[test]
fn auto_mode_falls_through_to_the_bounded_decider() {
    let out = run(&["check", &instance("bounded_ab_62")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert_eq!(v["decider"], "bounded");
    let skipped = v["skipped"].as_array().unwrap();
    assert!(skipped.iter().any(|s| s.as_str().unwrap().contains("unary")), "{skipped:?}");
}

#[test]
fn equal_states_are_trivially_big_o() {
    let out = run(&["check", &instance("periodic_phases"), "--s", "s", "--s-prime", "s"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out.stdout)["decider"], "trivial");
}

#[test]
fn oracle_reports_the_exact_maximum() {
    let out = run(&["oracle", &instance("bounded_ab_62"), "--max-len", "10"]);
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["maxRatio"], "1600/1579");
    assert_eq!(v["argmax"], "aab");
}

#[test]
fn finitely_ambiguous_mode_reads_delta_documents() {
    let out = run(&["check", &instance("delta_doubling"), "--mode", "finitely-ambiguous"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out.stdout);
    assert_eq!(v["witness"]["type"], "Divergence");
    assert!(v["witness"]["grid"].as_array().unwrap().len() >= 3);
}

#[test]
fn errors_have_distinct_kinds_and_codes() {
    let dir = std::env::temp_dir().join(format!("bigo-wa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let negative = write("neg.json", &ONE_EDGE.replace('W', "-1/2"));
    let malformed = write("bad.json", "{\"states\": [");
    let decimal = write("dec.json", &ONE_EDGE.replace('W', "0.5"));
    let unknown_state = write("us.json", &ONE_EDGE.replace("\"to\":\"t\"", "\"to\":\"x\"").replace('W', "1"));

    let (ur, ro) = (instance("unbounded_ratio"), instance("bounded_ab_62"));
    let cases: Vec<(Vec<&str>, i32, &str, &str)> = vec![
        (vec!["check", &negative, "--s", "s", "--s-prime", "t"], 68, "invalid-input", "negative"),
        (vec!["check", &malformed, "--s", "s", "--s-prime", "t"], 65, "parse", "JSON"),
        (vec!["check", &decimal, "--s", "s", "--s-prime", "t"], 65, "parse", "#0"),
        (vec!["check", &unknown_state, "--s", "s", "--s-prime", "t"], 66, "unknown-state", "`x`"),
        (vec!["check", &ur, "--s", "zz"], 66, "unknown-state", "`zz`"),
        (vec!["check", &ro, "--mode", "bounded", "--words", "a,c"], 67, "unknown-symbol", "`c`"),
        (vec!["check", &ro, "--mode", "unary"], 69, "not-applicable", "one symbol"),
        (vec!["check", "/definitely/missing.json"], 74, "io", "missing.json"),
    ];
    for (args, code, kind, needle) in cases {
        let out = run(&args);
        let (c, k, m) = failure(&out);
        assert_eq!((c, k.as_str()), (code, kind), "{args:?}: {m}");
        assert!(m.contains(needle), "{args:?}: {m}");
        assert!(out.stdout.is_empty());
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["check"]).status.code(), Some(64));
    assert_eq!(run(&["check", &instance("unbounded_ratio"), "--mode", "nope"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn reduced_weights_warn_without_failing() {
    let out = run_stdin(&["check", "/dev/stdin", "--s", "s", "--s-prime", "s"], &ONE_EDGE.replace('W', "2/4"));
    assert_eq!(out.status.code(), Some(0));
    let warnings = json(&out.stdout)["warnings"].clone();
    assert!(warnings[0].as_str().unwrap().contains("canonicalized to `1/2`"), "{warnings}");
}

#[test]
fn reductions_compose_through_pipes() {
    let out = run(&["reduce", "big-theta", &instance("unbounded_ratio")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let out = run_stdin(&["check", "/dev/stdin", "--mode", "unary"], &text);
    assert_eq!(out.status.code(), Some(1));
    let out = run_stdin(&["check", "/dev/stdin", "--mode", "unary", "--s", "q'", "--s-prime", "q"], &text);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn generated_hardness_instances_carry_their_label() {
    for (name, expect) in [("chrobak_universal", true), ("chrobak_2_3", false)] {
        let out = run(&["generate", "hardness", &instance(name)]);
        assert!(out.status.success());
        let doc = String::from_utf8(out.stdout).unwrap();
        let label = if expect { "IsBigO" } else { "NotBigO" };
        assert_eq!(json(doc.as_bytes())["groundTruth"], label, "{name}");
        let out = run_stdin(&["check", "/dev/stdin", "--mode", "unary"], &doc);
        assert_eq!(out.status.code(), Some(if expect { 0 } else { 1 }), "{name}");
    }
}

#[test]
fn instance_files_are_in_canonical_form() {
    for name in ["unbounded_ratio", "periodic_phases", "bounded_ab_61", "bounded_ab_62"] {
        let text = std::fs::read_to_string(instance(name)).unwrap();
        let q = bigo_wa::io::parse_query(&text, None, None).unwrap();
        assert!(q.warnings.is_empty(), "{name}: {:?}", q.warnings);
        let again = bigo_wa::io::to_pretty_json(&bigo_wa::io::query_to_doc(&q.value, None));
        assert_eq!(again.trim_end(), text.trim_end(), "{name}");
    }
    let text = std::fs::read_to_string(instance("pa_two_letter")).unwrap();
    let pa = bigo_wa::io::pa_from_doc(&bigo_wa::io::parse_document(&text).unwrap()).unwrap().value;
    assert_eq!(bigo_wa::io::to_pretty_json(&bigo_wa::io::pa_to_doc(&pa)).trim_end(), text.trim_end());
    for name in ["chrobak_2_3", "chrobak_universal"] {
        let text = std::fs::read_to_string(instance(name)).unwrap();
        let c = bigo_wa::io::parse_chrobak(&text).unwrap();
        assert_eq!(bigo_wa::io::to_pretty_json(&bigo_wa::io::chrobak_to_doc(&c)).trim_end(), text.trim_end(), "{name}");
    }
}

#[test]
fn human_output_is_plain_text() {
    let out = run(&["--human", "check", &instance("unbounded_ratio")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: NotBigO"), "{text}");
    let out = run(&["--human", "check", "/definitely/missing.json"]);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error: "));
}
