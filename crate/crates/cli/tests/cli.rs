use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rees_core::corpus::CORPUS;
use rees_core::document::ModuleDocument;
use serde_json::Value;
use tempfile::TempDir;

fn rees(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rees"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn export(dir: &Path, name: &str) -> String {
    let file = format!("{name}.json");
    let o = rees(dir, &["corpus", "export", name, "--out", &file]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    file
}

#[test]
fn density_writes_one_csv_per_kind() {
    let dir = TempDir::new().unwrap();
    let m = export(dir.path(), "x2-xy");
    let o = rees(dir.path(), &["density", "--module", &m, "--kind", "adic,saturated,epsilon", "--nmax", "40", "--csv-out", "out"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut files: Vec<String> = fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    files.sort();
    assert_eq!(files, ["x2-xy-adic.csv", "x2-xy-epsilon.csv", "x2-xy-saturated.csv"]);

    let text = fs::read_to_string(dir.path().join("out/x2-xy-adic.csv")).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,n8,n16,n24,n32,n40,extrapolated,diagnostic,exact,x_f64,extrapolated_f64"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // default grid [-1, 4] at step 1/8
    assert_eq!(rows.len(), 41);
    assert!(rows.iter().all(|r| r.len() == 11));
    let xs: Vec<f64> = rows.iter().map(|r| r[9].parse().unwrap()).collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
    let at3 = rows.iter().find(|r| r[0] == "3/1").unwrap();
    assert_eq!(at3[6], "4/1");
    assert_eq!(at3[8], "true");
}

#[test]
fn density_fit_and_json_report() {
    let dir = TempDir::new().unwrap();
    let o = rees(
        dir.path(),
        &["density", "--module", "corpus:x2-y3", "--grid", "0:6:1/4", "--ladder", "12,24,36", "--fit", "--json-out", "d.json"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["grids"][0]["kind"], "adic");
    let polys: Vec<&str> = doc["fit"]["chambers"].as_array().unwrap().iter().map(|c| c["polynomial"].as_str().unwrap()).collect();
    assert_eq!(polys, ["0", "6*x - 12", "2*x"]);
}

#[test]
fn check_rees_pair_is_a_reduction() {
    let dir = TempDir::new().unwrap();
    let n = export(dir.path(), "x2-y2");
    let m = export(dir.path(), "maximal-squared");
    let o = rees(dir.path(), &["check", "--sub", &n, "--sup", &m, "--json-out", "-"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["verdict"], "reduction");
    assert_eq!(doc["certificate"], 1);

    let table = rees(dir.path(), &["check", "--sub", &n, "--sup", &m]);
    assert!(stdout(&table).contains("verdict: reduction"));
}

#[test]
fn check_non_reduction_pair() {
    let dir = TempDir::new().unwrap();
    let o = rees(dir.path(), &["check", "--sub", "corpus:x2-xy", "--sup", "corpus:maximal-squared", "--json-out", "-"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["verdict"], "not-reduction");
    assert!(doc["certificate"].is_null());
    let eps = doc["criteria"].as_array().unwrap().iter().find(|c| c["name"] == "epsilon").unwrap();
    assert_eq!(eps["status"], "differ");
}

#[test]
fn input_errors_exit_with_code_two() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    fs::write(
        p.join("rank.json"),
        r#"{"schema_version":1,"ring":{"variables":["x","y"]},"free_module":{"shifts":[0,0]},"generators":[{"exponents":[1,0],"basis":0}]}"#,
    )
    .unwrap();
    let o = rees(p, &["density", "--module", "rank.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("versal"));

    fs::write(p.join("broken.json"), "{\"ring\":\n").unwrap();
    let o = rees(p, &["density", "--module", "broken.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(code(&rees(p, &["density", "--module", "missing.json"])), 2);
    assert_eq!(code(&rees(p, &["density", "--module", "corpus:x2-xy", "--ladder", "8,8"])), 2);
    assert_eq!(code(&rees(p, &["density", "--module", "corpus:x2-xy", "--kind", "bogus"])), 2);
    assert_eq!(code(&rees(p, &["multiplicity", "--module", "corpus:x2-xy", "--diagonal", "2"])), 2);
    assert_eq!(code(&rees(p, &["check", "--sub", "corpus:maximal-squared", "--sup", "corpus:x2-y2"])), 2);
}

#[test]
fn warm_cache_outputs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let run = |tag: &str, extra: &[&str]| {
        let out = format!("{tag}-csv");
        let json = format!("{tag}.json");
        let mut args = vec!["density", "--module", "corpus:mixed-rank-two", "--kind", "adic,epsilon", "--csv-out", &out, "--json-out", &json];
        args.extend_from_slice(extra);
        let o = rees(p, &args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let mut bytes = fs::read(p.join(&json)).unwrap();
        for kind in ["adic", "epsilon"] {
            bytes.extend(fs::read(p.join(&out).join(format!("mixed-rank-two-{kind}.csv"))).unwrap());
        }
        (stdout(&o).replace(&out, ""), bytes)
    };
    let cold = run("cold", &["--cache-dir", "cache"]);
    assert!(p.join("cache").read_dir().unwrap().next().is_some());
    let warm = run("warm", &["--cache-dir", "cache"]);
    let none = run("none", &["--no-cache"]);
    let seq = run("seq", &["--no-cache", "--sequential"]);
    assert_eq!(cold, warm);
    assert_eq!(cold, none);
    assert_eq!(cold, seq);
}

#[test]
fn corrupt_cache_entries_are_ignored() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let args = ["multiplicity", "--module", "corpus:x2-xy", "--epsilon", "--cache-dir", "cache", "--json-out", "-"];
    let first = rees(p, &args);
    assert_eq!(code(&first), 0);
    for shard in fs::read_dir(p.join("cache")).unwrap() {
        for f in fs::read_dir(shard.unwrap().path()).unwrap() {
            fs::write(f.unwrap().path(), "not json").unwrap();
        }
    }
    let second = rees(p, &args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn corpus_documents_round_trip() {
    let dir = TempDir::new().unwrap();
    let list = stdout(&rees(dir.path(), &["corpus", "list"]));
    for entry in CORPUS {
        assert!(list.contains(entry.name));
        let o = rees(dir.path(), &["corpus", "export", entry.name]);
        assert_eq!(code(&o), 0);
        let doc = ModuleDocument::parse(&stdout(&o)).unwrap();
        assert_eq!(doc.to_module().unwrap(), entry.module().unwrap(), "{}", entry.name);
        // serializing a parsed module is a fixed point
        let canonical = ModuleDocument::from_module(&doc.to_module().unwrap(), doc.name.clone()).unwrap();
        let again = ModuleDocument::parse(&canonical.to_json()).unwrap();
        assert_eq!(again, canonical);
        assert_eq!(again.to_module().unwrap(), entry.module().unwrap());
    }
    assert_eq!(code(&rees(dir.path(), &["corpus", "export", "no-such-module"])), 2);
}

#[test]
fn epsilon_of_x2_xy() {
    let dir = TempDir::new().unwrap();
    let m = export(dir.path(), "x2-xy");
    let o = rees(dir.path(), &["multiplicity", "--module", &m, "--epsilon", "--json-out", "-"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let eps = &doc["epsilon"];
    assert_eq!(eps["exact"], "1/1");
    let estimate = eps["estimate_f64"].as_f64().unwrap();
    assert!((estimate - 1.0).abs() < 0.1, "{estimate}");
    assert!(eps["diagnostic"].is_string());
    assert_eq!(eps["integral_check"]["agrees"], true);
}

#[test]
fn multiplicity_defaults_run_every_invariant() {
    let dir = TempDir::new().unwrap();
    let o = rees(dir.path(), &["multiplicity", "--module", "corpus:maximal-ideal", "--json-out", "-"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    // the saturation of (x, y) is A, so the quotient is everything below degree n
    assert_eq!(doc["epsilon"]["exact"], "1/1");
    let diag = doc["diagonal"].as_array().unwrap();
    assert_eq!(diag.len(), 2);
    assert_eq!(diag[0]["status"], "determined");
    assert_eq!(diag[0]["dimension"], 2);
    assert!(doc["mixed"]["values"].is_array());
}
