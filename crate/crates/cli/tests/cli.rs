use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_symcirc")).current_dir(self.0.path()).args(args).output().unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn host_json(rows: &[&[&str]]) -> String {
    serde_json::json!({"n": rows.len(), "m": rows[0].len(), "entries": rows}).to_string()
}

const P3: &str = r#"{"left": 2, "right": 1, "edges": [[0, 0, 1], [1, 0, 1]], "labels": {"left": [], "right": []}}"#;

#[test]
fn hom_synthesis_with_decomposition_verifies() {
    let d = Dir::new();
    d.write("p3.json", P3);
    let tw = d.run(&["treewidth", "--pattern", "p3.json", "--out", "p3.td"]);
    assert_eq!(code(&tw), 0);
    assert_eq!(stdout(&tw).trim(), "treewidth 1");
    let o = d.run(&["synth", "hom", "--pattern", "p3.json", "--td", "p3.td", "--n", "3", "--m", "3", "--out", "hom.txt", "--report", "hom.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(d.path("hom.json")).unwrap()).unwrap();
    assert_eq!(report["job"]["version"], symcirc_version());
    assert_eq!(report["job"]["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(report["job"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(report["result"]["within_bound"], Value::Bool(true));
    let v = d.run(&["verify", "hom.txt", "--pattern", "p3.json", "--trials", "20", "--seed", "5"]);
    assert_eq!(code(&v), 0);
    assert!(stdout(&v).starts_with("PASS"));
}

fn symcirc_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

#[test]
fn reports_are_deterministic() {
    let d = Dir::new();
    d.write("p3.json", P3);
    let a = d.run(&["synth", "sub-moebius", "--pattern", "p3.json", "--n", "3", "--m", "2", "--out", "a.txt", "--report", "a.json"]);
    let b = d.run(&["synth", "sub-moebius", "--pattern", "p3.json", "--n", "3", "--m", "2", "--out", "b.txt", "--report", "b.json"]);
    assert_eq!((code(&a), code(&b)), (0, 0));
    assert_eq!(fs::read(d.path("a.txt")).unwrap(), fs::read(d.path("b.txt")).unwrap());
    let strip = |p: &Path| {
        let mut v: Value = serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap();
        v["job"]["output"] = Value::Null;
        v
    };
    assert_eq!(strip(&d.path("a.json")), strip(&d.path("b.json")));
}

#[test]
fn every_synth_kind_round_trips_through_verify() {
    let d = Dir::new();
    d.write("p3.json", P3);
    let cases: Vec<(Vec<&str>, Vec<&str>)> = vec![
        (vec!["synth", "sub-moebius", "--pattern", "p3.json", "--n", "3", "--m", "3"], vec!["--oracle", "sub", "--pattern", "p3.json"]),
        (vec!["synth", "sub-cover", "--pattern", "p3.json", "--n", "3", "--m", "3"], vec!["--oracle", "sub", "--pattern", "p3.json"]),
        (vec!["synth", "determinant", "--n", "4"], vec!["--oracle", "determinant"]),
        (vec!["synth", "immanant", "--lambda", "2,1", "--seed", "3"], vec!["--oracle", "immanant", "--lambda", "2,1"]),
        (vec!["synth", "immanant", "--lambda", "3", "--seed", "3"], vec!["--oracle", "permanent"]),
    ];
    for (i, (synth, oracle)) in cases.into_iter().enumerate() {
        let out = format!("c{i}.txt");
        let mut args = synth.clone();
        args.extend(["--out", out.as_str()]);
        let o = d.run(&args);
        assert_eq!(code(&o), 0, "{synth:?}: {}", String::from_utf8_lossy(&o.stderr));
        let mut v = vec!["verify", out.as_str(), "--trials", "5", "--seed", "9"];
        v.extend(oracle);
        let r = d.run(&v);
        assert_eq!(code(&r), 0, "{synth:?}: {}", stdout(&r));
    }
    let k = d.write("k22.json", r#"{"left": 2, "right": 2, "edges": [[0,0],[0,1],[1,0],[1,1]]}"#);
    let o = d.run(&["synth", "biclique", "--kind", "k", "--k", "2", "--n", "3", "--out", "b.txt"]);
    assert_eq!(code(&o), 0);
    let r = d.run(&["verify", "b.txt", "--oracle", "sub", "--pattern", k.to_str().unwrap(), "--trials", "5", "--seed", "1"]);
    assert_eq!(code(&r), 0, "{}", stdout(&r));
}

#[test]
fn corrupted_constant_is_caught() {
    let d = Dir::new();
    d.write("p3.json", P3);
    assert_eq!(code(&d.run(&["synth", "sub-moebius", "--pattern", "p3.json", "--n", "3", "--m", "3", "--out", "s.txt"])), 0);
    let text = fs::read_to_string(d.path("s.txt")).unwrap();
    let mut done = false;
    let corrupted: Vec<String> = text
        .lines()
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            if !done && t.len() == 4 && t[2] == "CONST" {
                done = true;
                format!("g {} CONST 7/3", t[1])
            } else {
                l.to_string()
            }
        })
        .collect();
    assert!(done, "sub circuit carries constants");
    d.write("bad.txt", &(corrupted.join("\n") + "\n"));
    let r = d.run(&["verify", "bad.txt", "--oracle", "sub", "--pattern", "p3.json", "--trials", "10", "--seed", "2", "--report", "r.json"]);
    assert_eq!(code(&r), 4);
    let out = stdout(&r);
    assert!(out.starts_with("FAIL"));
    let cx: Value = serde_json::from_str(out.lines().nth(1).unwrap()).unwrap();
    assert_eq!(cx["host"]["n"], 3);
    let report: Value = serde_json::from_str(&fs::read_to_string(d.path("r.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["verdict"], "FAIL");
    assert_eq!(report["job"]["seed"], 2);
}

#[test]
fn eval_examples() {
    let d = Dir::new();
    assert_eq!(code(&d.run(&["synth", "determinant", "--n", "3", "--out", "det.txt"])), 0);
    assert_eq!(code(&d.run(&["synth", "immanant", "--lambda", "3", "--seed", "0", "--out", "perm.txt"])), 0);
    d.write("id.json", &host_json(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]));
    d.write("ones.json", &host_json(&[&["1", "1", "1"], &["1", "1", "1"], &["1", "1", "1"]]));
    d.write("sparse.json", r#"{"n": 3, "m": 3, "triples": [[0,0,"1"],[1,1,"1"],[2,2,"1/2"]]}"#);
    d.write("two.json", &host_json(&[&["1", "0"], &["0", "1"]]));
    assert_eq!(stdout(&d.run(&["eval", "det.txt", "id.json"])).trim(), "1/1");
    assert_eq!(stdout(&d.run(&["eval", "perm.txt", "ones.json"])).trim(), "6/1");
    assert_eq!(stdout(&d.run(&["eval", "det.txt", "sparse.json"])).trim(), "1/2");
    assert_eq!(code(&d.run(&["eval", "det.txt", "two.json"])), 2);
    d.write("junk.json", "{not json");
    assert_eq!(code(&d.run(&["eval", "det.txt", "junk.json"])), 2);
    d.write("junk.txt", "g 0 FOO\n");
    assert_eq!(code(&d.run(&["eval", "junk.txt", "id.json"])), 2);
}

#[test]
fn exit_codes() {
    let d = Dir::new();
    d.write("p3.json", P3);
    assert_eq!(code(&d.run(&[])), 1);
    assert_eq!(code(&d.run(&["synth", "hom", "--pattern", "p3.json"])), 1);
    assert_eq!(code(&d.run(&["--help"])), 0);
    assert_eq!(code(&d.run(&["synth", "determinant", "--n", "3", "--out", "det.txt"])), 0);
    assert_eq!(code(&d.run(&["verify", "det.txt", "--oracle", "determinant", "--trials", "0", "--seed", "1"])), 1);
    assert_eq!(code(&d.run(&["verify", "det.txt", "--oracle", "hom", "--seed", "1"])), 1);
    let big: Vec<Vec<u32>> = (0..7).map(|i| vec![i, i]).collect();
    d.write("big.json", &serde_json::json!({"left": 7, "right": 7, "edges": big}).to_string());
    let o = d.run(&["synth", "hom", "--pattern", "big.json", "--n", "2", "--m", "2"]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&d.run(&["synth", "immanant", "--lambda", "3,3", "--seed", "0", "--cap-n", "5"])), 3);
    d.write("bad.json", r#"{"left": 1, "right": 1, "edges": [[0, 5]]}"#);
    assert_eq!(code(&d.run(&["synth", "hom", "--pattern", "bad.json", "--n", "2", "--m", "2"])), 2);
    assert_eq!(code(&d.run(&["synth", "hom", "--pattern", "missing.json", "--n", "2", "--m", "2"])), 2);
}

#[test]
fn cfi_and_wl_examples() {
    let d = Dir::new();
    let o = d.run(&["cfi", "--base", "c4", "--twist", "0001", "--out", "g1.json", "--host-out", "h1.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&d.run(&["cfi", "--base", "c4", "--out", "g0.json"])), 0);
    let g: Value = serde_json::from_str(&fs::read_to_string(d.path("g1.json")).unwrap()).unwrap();
    assert_eq!(g["vertices"], 8);
    assert_eq!(g["twist"], "0001");
    let eq = d.run(&["wl", "--k", "2", "g0.json", "g1.json", "--report", "wl.json"]);
    assert_eq!(stdout(&eq).trim(), "EQUIVALENT");
    let report: Value = serde_json::from_str(&fs::read_to_string(d.path("wl.json")).unwrap()).unwrap();
    assert_eq!(report["job"]["params"]["wl_dimension"], 1);
    assert_eq!(stdout(&d.run(&["wl", "--k", "3", "g0.json", "g1.json"])).trim(), "DISTINGUISHED");
    assert_eq!(stdout(&d.run(&["wl", "--k", "2", "h1.json", "g1.json"])).trim(), "EQUIVALENT");
    assert_eq!(code(&d.run(&["cfi", "--base", "c4", "--twist", "01"])), 1);
    assert_eq!(code(&d.run(&["cfi", "--base", "banana"])), 1);
    for base in ["k3,3", "grid2x3", "k4", "p3"] {
        assert_eq!(code(&d.run(&["cfi", "--base", base])), 0, "{base}");
    }
}

#[test]
fn widthlab_reports() {
    let d = Dir::new();
    d.write("p3.json", P3);
    let o = d.run(&["widthlab", "--poly", "perm", "--k", "2", "--bases", "auto", "--pairs", "8", "--seed", "1", "--out", "perm.jsonl"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<Value> = fs::read_to_string(d.path("perm.jsonl")).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0]["job"]["seed"], 1);
    assert_eq!(lines[9]["summary"]["pairs"], 8);
    let o = d.run(&["widthlab", "--poly", "hom", "--pattern", "p3.json", "--k", "2", "--pairs", "8", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let last: Value = serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["gaps"], 0);
    assert_eq!(last["summary"]["equal"], 8);
    assert_eq!(code(&d.run(&["widthlab", "--poly", "hom", "--k", "2"])), 1);
    assert_eq!(code(&d.run(&["widthlab", "--poly", "perm", "--k", "2", "--bases", "c4"])), 1);
}
