use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const INFIX_GHG: &str = "start S
S -> (s (A (c) (b)) ())
S -> (s (A () (d)) ())
S -> (s (B) ())
A -> (a)
B -> (A () (b))
";

fn headdrive(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_headdrive")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn example_trace() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "infix.ghg", INFIX_GHG);
    let o = headdrive(&["recognize", "--grammar", s(&g), "--algorithm", "ghi", "--input", "c a b s", "--trace"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let clauses: Vec<&str> = out
        .lines()
        .skip_while(|l| !l.starts_with("Stack"))
        .skip(2)
        .map(|l| l.rsplit(" | ").next().unwrap())
        .collect();
    assert_eq!(
        clauses,
        ["3a", "1a", "3b", "1a", "1d", "7b", "2a", "1a, 1d", "4a", "3b", "1a, 1d", "5b", "5b", "7a", "1a, 1d", "5a"]
    );
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let tiny = file(&dir, "tiny.hg", "start S\nS -> *a\n");
    let rec = |extra: &[&str]| {
        let mut args = vec!["recognize", "--grammar", s(&tiny)];
        args.extend_from_slice(extra);
        code(&headdrive(&args))
    };
    assert_eq!(rec(&["--algorithm", "td", "--input", "a"]), 0);
    assert_eq!(rec(&["--algorithm", "td", "--input", "b"]), 1);
    assert_eq!(rec(&["--algorithm", "hc", "--input", "a", "--max-steps", "0"]), 2);
    assert_eq!(rec(&["--algorithm", "ghi", "--input", "a"]), 3);
    assert_eq!(rec(&["--algorithm", "ghi", "--input", "a", "--embed"]), 0);
    assert_eq!(rec(&["--algorithm", "nope"]), 3);

    let bad = file(&dir, "bad.hg", "start S\nS -> a b\n");
    let o = headdrive(&["recognize", "--grammar", s(&bad), "--algorithm", "hc"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.hg:2:"));
    assert_eq!(code(&headdrive(&["recognize", "--grammar", "/no/such.hg", "--algorithm", "hc"])), 5);
}

#[test]
fn json_report() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "ci.hg", "start S\nS -> c *A b\nS -> c *A d\nA -> *a\n");
    let o = headdrive(&["recognize", "--grammar", s(&g), "--algorithm", "phi", "--input", "cad", "--chars", "--json", "--trace"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["grammar"], "ci.hg");
    assert_eq!(v["algorithm"], "phi");
    assert_eq!(v["verdict"], "accept");
    assert_eq!(v["input"], serde_json::json!(["c", "a", "d"]));
    assert!(v["stats"]["configurations_explored"].as_u64().unwrap() > 0);
    assert_eq!(v["stats"]["consulted_positions"], serde_json::json!([1, 2, 3]));
    assert!(!v["trace"]["steps"].as_array().unwrap().is_empty());
}

#[test]
fn transforms() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "infix.ghg", INFIX_GHG);
    let o = headdrive(&["transform", "--tau-head", s(&g)]);
    assert_eq!(code(&o), 0);
    let mut rules: Vec<String> = stdout(&o).lines().map(String::from).collect();
    rules.sort();
    let mut want = vec![
        "start S",
        "S -> [(c)A(b)] *s",
        "S -> [A(d)] *s",
        "S -> [B] *s",
        "[(c)A(b)] -> [c] *A [b]",
        "[c] -> *c",
        "[b] -> *b",
        "[A(d)] -> *A [d]",
        "[d] -> *d",
        "[B] -> *B",
        "B -> *A [b]",
        "A -> *a",
    ];
    want.sort();
    assert_eq!(rules, want);

    let out = dir.path().join("out.hg");
    assert_eq!(code(&headdrive(&["transform", "--tau-head", s(&g), "-o", s(&out)])), 0);
    let o = headdrive(&["recognize", "--grammar", s(&out), "--algorithm", "hc", "--input", "c a b s"]);
    assert_eq!(code(&o), 0);

    let abc = file(&dir, "abc.hg", "start S\nS -> a *b c\n");
    let o = headdrive(&["transform", "--tau-two", s(&abc)]);
    assert_eq!(stdout(&o), "start S\nS -> *a [bc]\n[bc] -> *b [c]\n[c] -> *c\n");
    assert_eq!(code(&headdrive(&["transform", "--tau-head", s(&abc)])), 3);
}

#[test]
fn compare_table_and_batch() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "ci.hg", "start S\nS -> c *A b\nS -> c *A d\nA -> *a\n");
    let o = headdrive(&["compare", "--grammar", s(&g), "--input", "c a b", "--exhaustive"]);
    assert_eq!(code(&o), 0);
    let counts: Vec<u64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts.len(), 5);
    assert!(counts[..4].windows(2).all(|w| w[0] >= w[1]), "{counts:?}");

    let o = headdrive(&["compare", "--grammar", s(&g), "--input", "c a a", "--json", "--algorithm", "hc,hi"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);

    let o = headdrive(&["compare", "--random", "10", "--max-len", "3", "--seed", "5"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("seed 5\n"));
    assert!(out.contains(" 0 disagreements"));
}

#[test]
fn enumerate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "infix.ghg", INFIX_GHG);
    let first = headdrive(&["enumerate", "--grammar", s(&g), "--max-len", "4"]);
    assert_eq!(stdout(&first), "a b s\na d s\nc a b s\n");
    let again = headdrive(&["enumerate", "--grammar", s(&g), "--max-len", "4"]);
    assert_eq!(first.stdout, again.stdout);
    let tiny = file(&dir, "tiny.hg", "start S\nS -> *a\n");
    assert_eq!(stdout(&headdrive(&["enumerate", "--grammar", s(&tiny), "--max-len", "2"])), "a\n");
}
