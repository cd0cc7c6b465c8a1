use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use ttk::io::Document;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn ttk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ttk_in(args: &[&str]) -> (i32, String, String) {
    let o = ttk(args);
    (
        o.status.code().unwrap(),
        String::from_utf8(o.stdout).unwrap(),
        String::from_utf8(o.stderr).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn validator() -> jsonschema::Validator {
    let text =
        fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json"))
            .unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

/// Runs a command with `--json`, checks its exit code and validates the
/// report against the schema.
fn json_report(args: &[&str], code: i32) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (c, out, err) = ttk_in(&full);
    assert_eq!(c, code, "{args:?}: {err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(
        errors.is_empty(),
        "{args:?} violates the schema: {errors:?}\n{out}"
    );
    v
}

fn canonical_corpus() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(data(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            let n = p.file_name().unwrap().to_str().unwrap();
            n.ends_with(".tt") && !n.starts_with("broken_")
        })
        .collect();
    files.sort();
    files
}

#[test]
fn golden_corpus_round_trips() {
    let files = canonical_corpus();
    assert!(files.len() >= 10);
    for f in files {
        let text = fs::read_to_string(&f).unwrap();
        let doc = Document::parse(&text).unwrap();
        assert_eq!(doc.serialize(), text, "{}", f.display());
    }
}

#[test]
fn inp_on_fibonacci() {
    let fib = data("fib.tt");
    let (c, out, _) = ttk_in(&["inp", path(&fib), "--map", "F"]);
    assert_eq!(c, 0);
    assert!(out.contains("eta: ~b ~a b a"), "{out}");
    assert!(out.contains("period: 2 (ordered)"), "{out}");
    assert!(out.contains("branches: (a b, b a)"), "{out}");
}

#[test]
fn certify_fibonacci_is_inconclusive() {
    let (c, out, _) = ttk_in(&["certify", path(&data("fib.tt")), "--map", "F"]);
    assert_eq!(c, 1);
    assert!(out.contains("Inconclusive: periodic INP"), "{out}");
}

#[test]
fn input_errors_exit_with_two() {
    for (file, needle) in [
        ("broken_contracted.tt", "line 10: contracted edge"),
        ("broken_partition.tt", "line 9: partition violated"),
        ("broken_valence.tt", "line 5"),
    ] {
        let (c, _, err) = ttk_in(&["validate", path(&data(file))]);
        assert_eq!(c, 2, "{file}");
        assert!(err.contains(needle), "{file}: {err}");
    }
    assert_eq!(ttk_in(&["validate", path(&data("fib.tt")), "--bogus"]).0, 2);
    assert_eq!(
        ttk_in(&["inp", path(&data("fib.tt")), "--map", "nope"]).0,
        2
    );
    assert_eq!(ttk_in(&["validate", "/nonexistent/file.tt"]).0, 2);
    assert_eq!(
        ttk_in(&["survey", "--rank", "1", "--count", "1", "--seed", "0"]).0,
        2
    );
}

#[test]
fn analysis_failures_exit_with_one() {
    let (c, out, _) = ttk_in(&["inp", path(&data("perm.tt")), "--map", "P"]);
    assert_eq!(c, 1);
    assert!(out.contains("not expanding"), "{out}");
    let v = json_report(
        &[
            "monoid",
            path(&data("fib.tt")),
            "--maps",
            "F",
            "--word",
            "1",
        ],
        1,
    );
    assert!(v["error"].as_str().unwrap().contains("M(f) not positive"));
}

#[test]
fn every_subcommand_report_matches_schema() {
    let fib = data("fib.tt");
    let r3 = data("r3.tt");
    let r3l = data("r3_legal.tt");
    let v = json_report(&["validate", path(&fib)], 0);
    assert_eq!(v["items"].as_array().unwrap().len(), 5);
    let v = json_report(&["gates", path(&fib), "--map", "F"], 0);
    assert_eq!(v["gates"].as_array().unwrap().len(), 3);
    let v = json_report(&["certify", path(&fib), "--map", "F"], 1);
    assert_eq!(v["inp"]["outcome"], "present");
    let v = json_report(&["inp", path(&fib), "--map", "F"], 0);
    assert_eq!(v["certificate"]["eta"], "~b ~a b a");
    assert_eq!(v["certificate"]["map_ordered_period"], 2);
    let v = json_report(&["inp", path(&r3), "--map", "f"], 0);
    assert_eq!(v["found"], false);
    let v = json_report(
        &["legalizing", path(&fib), "--map", "FF", "--gates", "G_F"],
        1,
    );
    assert!(v["witness"].is_object());
    let v = json_report(
        &[
            "legalizing",
            path(&r3l),
            "--map",
            "g",
            "--gates",
            "G3",
            "--power",
        ],
        0,
    );
    assert_eq!(v["legalizing_power"], 1);
    let v = json_report(&["index", path(&fib), "--map", "F"], 0);
    assert_eq!(v["list"], "[1/2]");
    let v = json_report(&["index", path(&fib), "--map", "F", "--gates", "G_pm"], 0);
    assert_eq!(v["list"], "[]");
    let out = scratch("ff.tt");
    let v = json_report(
        &["compose", path(&fib), "--maps", "F,F", "--out", path(&out)],
        0,
    );
    assert_eq!(v["images"][0]["image"], "a b a");
    let v = json_report(&["theorem", path(&fib), "--f", "F", "--g", "FF"], 1);
    assert!(v["conclusions"].is_null());
    let v = json_report(&["theorem", path(&r3l), "--f", "f", "--g", "g"], 0);
    assert_eq!(v["conclusions"]["index"]["list"], "[3/2]");
    let leg = scratch("leg.tt");
    let v = json_report(
        &[
            "legalizers",
            path(&r3),
            "--gates",
            "G3",
            "--length",
            "2",
            "--out",
            path(&leg),
        ],
        0,
    );
    let specs: Vec<&str> = v["assigned"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["spec"].as_str().unwrap())
        .collect();
    assert_eq!(specs.len(), 25);
    let g = scratch("g.tt");
    let v = json_report(
        &[
            "factory",
            path(&r3),
            "--gates",
            "G3",
            "--legalizers",
            &specs.join(","),
            "--expander",
            "h",
            "--out",
            path(&g),
        ],
        0,
    );
    assert_eq!(v["steps"].as_array().unwrap().len(), 2);
    let v = json_report(&["monoid", path(&r3), "--maps", "f", "--word", "1 1"], 0);
    assert_eq!(v["iwip"]["verdict"], "certified");
    let v = json_report(&["survey", "--rank", "2", "--count", "3", "--seed", "1"], 0);
    assert_eq!(v["count"], 3);
}

#[test]
fn factory_output_matches_fixture() {
    let r3 = data("r3.tt");
    let leg = scratch("leg2.tt");
    let v = json_report(
        &[
            "legalizers",
            path(&r3),
            "--gates",
            "G3",
            "--length",
            "2",
            "--out",
            path(&leg),
        ],
        0,
    );
    let specs: Vec<&str> = v["assigned"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["spec"].as_str().unwrap())
        .collect();
    let g = scratch("g2.tt");
    let (c, _, err) = ttk_in(&[
        "factory",
        path(&r3),
        "--gates",
        "G3",
        "--legalizers",
        &specs.join(","),
        "--expander",
        "h",
        "--out",
        path(&g),
    ]);
    assert_eq!(c, 0, "{err}");
    let produced = Document::parse(&fs::read_to_string(&g).unwrap()).unwrap();
    let fixture = Document::parse(&fs::read_to_string(data("r3_legal.tt")).unwrap()).unwrap();
    assert_eq!(
        produced.map("g").unwrap().image_strings(),
        fixture.map("g").unwrap().image_strings()
    );
}

#[test]
fn factory_rejects_missing_legalizers() {
    let (c, out, _) = ttk_in(&[
        "factory",
        path(&data("r3.tt")),
        "--gates",
        "G3",
        "--legalizers",
        "l2:a.c/b.a",
        "--expander",
        "h",
        "--out",
        path(&scratch("unused.tt")),
    ]);
    assert_eq!(c, 1);
    assert!(out.contains("missing elementary legalizer"), "{out}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let fib = data("fib.tt");
    for args in [
        vec!["--json", "certify", path(&fib), "--map", "F"],
        vec!["inp", path(&fib), "--map", "F"],
        vec!["survey", "--rank", "3", "--count", "5", "--seed", "7"],
    ] {
        assert_eq!(ttk(&args).stdout, ttk(&args).stdout);
    }
}
