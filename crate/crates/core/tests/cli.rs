use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn run(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pboxposs"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn run_file(args: &[&str], file: &str) -> Run {
    let path = data(file);
    let mut full = args.to_vec();
    full.extend(["--input", path.to_str().unwrap()]);
    run(&full, None)
}

#[test]
fn upper_on_p1() {
    let r = run_file(&["upper", "--event", "a,c", "--json"], "p1.json");
    assert_eq!((r.stdout.as_str(), r.code), ("{\"upper\":\"1\"}\n", 0));
    let r = run_file(&["upper", "--event", "b", "--json"], "p1.json");
    assert_eq!(r.stdout, "{\"upper\":\"4/5\"}\n");
}

#[test]
fn two_point_example_converts() {
    let r = run_file(&["to-possibility", "--json"], "two_point.json");
    assert_eq!(r.stdout, "{\"pi\":{\"x1\":\"1/2\",\"x2\":\"1\"}}\n");
}

#[test]
fn non_maxitive_pbox_is_refused_with_a_witness() {
    let r = run_file(&["is-maxitive", "--json"], "p2.json");
    assert_eq!(r.stdout, "{\"lower_is_01\":false,\"maxitive\":false,\"upper_is_01\":false}\n");
    let r = run_file(&["to-possibility", "--json"], "p2.json");
    assert!(r.stdout.starts_with("{\"pi\":null,\"witness\":["), "{}", r.stdout);
    assert_eq!(r.code, 0);
}

#[test]
fn independent_joint() {
    let r = run_file(&["joint", "--rule", "independent", "--json"], "family.json");
    assert_eq!(r.stdout, "{\"pi\":{\"u|s\":\"1/4\",\"u|t\":\"1\",\"v|s\":\"1\",\"v|t\":\"1\"}}\n");
    let r = run_file(&["joint", "--rule", "rsi", "--json"], "family.json");
    assert!(r.stdout.contains("\"u|s\":\"51/100\""), "{}", r.stdout);
}

#[test]
fn decompose_and_bounds_on_p2() {
    let r = run_file(&["decompose", "--json"], "p2.json");
    assert_eq!(
        r.stdout,
        "{\"pi1\":{\"a\":\"1\",\"b\":\"4/5\",\"c\":\"3/5\"},\"pi2\":{\"a\":\"1/2\",\"b\":\"4/5\",\"c\":\"1\"}}\n"
    );
    // (a, b] = {b}: the gap is min(lower(a), 1 - upper(b)) = 1/5
    let r = run_file(&["bounds", "--event", "b", "--json"], "p2.json");
    assert_eq!(
        r.stdout,
        "{\"approx_lower\":\"0\",\"approx_upper\":\"4/5\",\"lower\":\"0\",\"upper\":\"3/5\"}\n"
    );
}

#[test]
fn possibility_round_trip_through_documents() {
    let r = run(&["from-possibility", "--json"], Some(r#"{"pi":{"p":"1","q":"1/3","r":"1/3"}}"#));
    assert_eq!(
        r.stdout,
        "{\"classes\":[[\"q\",\"r\"],[\"p\"]],\"lower\":[\"0\",\"1\"],\"upper\":[\"1/3\",\"1\"]}\n"
    );
    let back = run(&["to-possibility", "--json"], Some(&r.stdout));
    assert_eq!(back.stdout, "{\"pi\":{\"p\":\"1\",\"q\":\"1/3\",\"r\":\"1/3\"}}\n");
}

#[test]
fn stdin_and_file_agree_and_repeat_identically() {
    let text = std::fs::read_to_string(data("p2.json")).unwrap();
    let a = run(&["lower", "--event", "a,b", "--complement"], Some(&text));
    let b = run_file(&["lower", "--event", "a,b", "--complement"], "p2.json");
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, "lower: 1/5\n");
    let first = run(&["verify", "--suite", "oracle", "--max-classes", "2", "--json"], None);
    let second = run(&["verify", "--suite", "oracle", "--max-classes", "2", "--json"], None);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn errors_exit_two_with_context() {
    let r = run(&["validate"], Some("{\"classes\": [[\"a\"],\n [\"a\"]] "));
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);

    let r = run(&["validate"], Some(r#"{"classes":[["a"],["b"]],"lower":["0","1"],"upper":["1/2","2"]}"#));
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("field `upper`"), "{}", r.stderr);

    let r = run_file(&["upper", "--event", "a,z"], "p1.json");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains('z'), "{}", r.stderr);

    let r = run(&["verify", "--suite", "oracle", "--max-classes", "12", "--grid", "8"], None);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("limit"), "{}", r.stderr);

    assert_eq!(run(&["joint", "--rule", "minimum"], None).code, 2);
}

#[test]
fn validate_lists_models() {
    let r = run_file(&["validate", "--json"], "p1.json");
    assert_eq!(r.stdout, "{\"models\":[\"pbox\"],\"valid\":true}\n");
}

#[test]
fn verify_exit_codes_follow_the_outcome() {
    let ok = run(&["verify", "--suite", "conjunction", "--max-classes", "2", "--grid", "2"], None);
    assert_eq!(ok.code, 0, "{}", ok.stdout);
    assert!(ok.stdout.contains("passed: true"));

    let bad =
        run(&["verify", "--suite", "multivariate", "--max-classes", "2", "--grid", "4", "--json"], None);
    assert_eq!(bad.code, 1);
    let report: serde_json::Value = serde_json::from_str(&bad.stdout).unwrap();
    let doc = serde_json::to_string(&report["counterexample"]["document"]).unwrap();
    let replay = run(&["joint", "--rule", "frechet"], Some(&doc));
    assert_eq!(replay.code, 0, "{}", replay.stderr);
}
