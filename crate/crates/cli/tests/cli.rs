use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ncpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncpoly"))
        .args(args)
        .env_remove("NCPOLY_SEED")
        .output()
        .expect("binary runs")
}

fn to_file(dir: &Path, name: &str, out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let p = dir.join(name);
    std::fs::write(&p, &out.stdout).unwrap();
    p.to_string_lossy().into_owned()
}

fn parse(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn graph_gen_examples() {
    let ci8 = parse(&ncpoly(&["graph", "gen", "--type", "circulant", "--n", "8", "--offsets", "1,4"]));
    assert_eq!(ci8["n"], 8);
    assert_eq!(ci8["edges"].as_array().unwrap().len(), 12);
    let c5 = parse(&ncpoly(&["graph", "gen", "--type", "cycle", "--n", "5"]));
    assert_eq!(c5["edges"].as_array().unwrap().len(), 5);
    let anti = parse(&ncpoly(&["graph", "gen", "--type", "anticycle", "--n", "7"]));
    assert_eq!(anti["edges"].as_array().unwrap().len(), 14);
}

#[test]
fn bad_flags_exit_nonzero() {
    assert_eq!(ncpoly(&["graph", "gen", "--type", "wheel", "--n", "5"]).status.code(), Some(2));
    assert_eq!(ncpoly(&["graph", "gen", "--type", "circulant", "--n", "8"]).status.code(), Some(2));
    assert_eq!(ncpoly(&["graph", "gen", "--type", "circulant", "--n", "8", "--offsets", "4,4,0"]).status.code(), Some(2));
    assert_eq!(ncpoly(&["verify", "nothing"]).status.code(), Some(2));
}

#[test]
fn polytope_round_trip_on_the_pentagon() {
    let dir = tempfile::tempdir().unwrap();
    let g = to_file(dir.path(), "c5.json", &ncpoly(&["graph", "gen", "--type", "cycle", "--n", "5"]));
    let q = to_file(dir.path(), "qstab.json", &ncpoly(&["polytope", "qstab", "-g", &g]));
    let qv = parse(&ncpoly(&["polytope", "vertices", "-i", &q]));
    assert_eq!(qv["kind"], "V");
    assert_eq!(qv["rows"].as_array().unwrap().len(), 12);
    let s = to_file(dir.path(), "stab.json", &ncpoly(&["polytope", "stab", "-g", &g]));
    let sv: Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(sv["rows"].as_array().unwrap().len(), 11);
    let f = parse(&ncpoly(&["polytope", "facets", "-i", &s]));
    assert_eq!(f["kind"], "H");
    assert_eq!(f["bounds"].as_array().unwrap().len(), 11);
    // Feeding the wrong kind is a named error.
    let wrong = ncpoly(&["polytope", "vertices", "-i", &s]);
    assert_eq!(wrong.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&wrong.stderr).contains("not an H-polytope"));
}

#[test]
fn unbounded_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("ray.json");
    std::fs::write(&p, r#"{"dim": 2, "kind": "H", "rows": [["-1", "0"], ["0", "-1"]], "bounds": ["0", "0"]}"#).unwrap();
    let out = ncpoly(&["polytope", "vertices", "-i", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("unbounded"));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(ncpoly(&["verify", "fcnc", "--n", "5,7"]).status.code(), Some(0));
    assert_eq!(ncpoly(&["verify", "kcbs-bridge", "--n", "5", "--seed", "7"]).status.code(), Some(0));
    let cap = ncpoly(&["verify", "fcnc", "--n", "15"]);
    assert_eq!(cap.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&cap.stderr).contains("resource limit"));
    let lowered = ncpoly(&["--max-cycle-n", "5", "verify", "fcnc", "--n", "7"]);
    assert_eq!(lowered.status.code(), Some(2));
}

#[test]
fn report_bundle_embeds_run_settings() {
    let out = ncpoly(&["verify", "kcbs-bridge", "--n", "5", "--seed", "11", "--samples", "20"]);
    let v = parse(&out);
    assert_eq!(v["tool"], "ncpoly");
    assert!(v["version"].is_string());
    assert_eq!(v["seed"], 11);
    assert_eq!(v["samples"], 20);
    assert_eq!(v["caps"]["max_cycle_n"], 13);
    assert_eq!(v["inputs"][0]["digest"].as_str().unwrap().len(), 64);
    assert!(v.get("wall_time_ms").is_none());
    let timed = parse(&ncpoly(&["verify", "fcnc", "--n", "5", "--timings"]));
    assert_eq!(timed["wall_time_ms"].as_array().unwrap().len(), 1);
}

#[test]
fn environment_fallbacks() {
    let out = Command::new(env!("CARGO_BIN_EXE_ncpoly"))
        .args(["verify", "oracle", "--samples", "5"])
        .env("NCPOLY_SEED", "99")
        .env("NCPOLY_FORMAT", "markdown")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# ncpoly oracle: PASS"));
    assert!(text.contains("seed 99"));
}

#[test]
fn circulant_bell_markdown_lists_families() {
    let out = ncpoly(&["verify", "circulant-bell", "--format", "markdown"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    for family in ["### pentagonal (8 rows)", "### heptagonal (8 rows)", "### chsh (1 rows)"] {
        assert!(text.contains(family), "{family}");
    }
    assert!(text.contains("| 7 | `x0 + x1 + x2 + x3 + x7 <= 2` | yes | yes | 7 |"));
}

#[test]
fn inheritance_on_a_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = dir.path().join("k3.json");
    std::fs::write(&k3, r#"{"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}"#).unwrap();
    let out = ncpoly(&["verify", "inheritance", "-g", k3.to_str().unwrap()]);
    assert!(out.status.success());
    let v = parse(&out);
    assert_eq!(v["reports"][0]["graph"]["name"], "k3");
    let sandwich = ncpoly(&["verify", "sandwich", "-g", k3.to_str().unwrap()]);
    assert!(sandwich.status.success());
}
