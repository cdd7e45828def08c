use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rgiso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rgiso"))
        .args(args)
        .env_remove("RGISO_WORKERS")
        .output()
        .expect("binary runs")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = rgiso(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(name: &str, args: &[&str]) -> Value {
    let doc: Value = serde_json::from_str(&ok_stdout(args)).unwrap();
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
    doc
}

#[test]
fn json_outputs_match_schemas() {
    let doc = assert_valid("threshold", &["threshold", "--p1", "0.5", "--p2", "0.3", "--N", "1000"]);
    assert_eq!(doc["report"]["f_samples"].as_array().unwrap().len(), 21);
    assert_valid("mcis-location", &["mcis-location", "--p1", "0.5", "--p2", "0.05", "--N", "1000"]);
    assert_valid("region-map", &["region-map", "--grid", "8", "--format", "json"]);
    let sim = ["simulate", "--trials", "6", "--format", "json"];
    let with = |extra: &[&'static str]| -> Vec<&str> { sim.iter().copied().chain(extra.iter().copied()).collect() };
    assert_valid("estimate", &with(&["containment", "--n", "5", "--N", "20", "--p1", "0.5", "--p2", "0.5"]));
    assert_valid("estimate", &with(&["fixed-pattern", "--n", "4", "--m", "3", "--N", "20", "--p2", "0.5"]));
    assert_valid("estimate", &with(&["pseudorandom", "--n", "12", "--p", "0.5", "--property", "asymmetric"]));
    assert_valid("distribution", &with(&["copies", "--n", "4", "--N", "12", "--p1", "0.5", "--p2", "0.5"]));
    assert_valid("distribution", &with(&["copies", "--n", "4", "--N", "12", "--p1", "0.5", "--p2", "0.3"]));
    assert_valid("mcis", &with(&["mcis", "--N", "16", "--p1", "0.5", "--p2", "0.5"]));
    assert_valid("check-pseudorandom", &["check-pseudorandom", "--n", "10", "--m", "20"]);
}

#[test]
fn threshold_at_half_has_no_f_samples() {
    let doc = assert_valid("threshold", &["threshold", "--p1", "0.3", "--p2", "0.5", "--N", "500"]);
    assert_eq!(doc["report"]["sigma2"], 0.0);
    assert!(doc["report"]["f_samples"].as_array().unwrap().is_empty());
}

#[test]
fn check_reads_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.txt");
    std::fs::write(&path, "8 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let doc = assert_valid("check-pseudorandom", &["check-pseudorandom", "--graph", path.to_str().unwrap()]);
    assert_eq!(doc["report"]["asymmetric"], false);
    assert_eq!(doc["report"]["m"], 6);
}

#[test]
fn heatmap_svg_has_one_cell_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h.csv");
    let svg = dir.path().join("h.svg");
    ok_stdout(&[
        "heatmap", "--N", "30", "--n", "7", "--grid", "8", "--trials", "4",
        "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let cells = doc.descendants().filter(|n| n.attribute("class") == Some("cell")).count();
    assert_eq!(cells, 64);
    let dashed = doc
        .descendants()
        .find(|n| n.attribute("id") == Some("threshold"))
        .expect("threshold overlay");
    assert!(dashed.attribute("stroke-dasharray").is_some());
    assert!(dashed.children().any(|c| c.has_tag_name("polyline")));

    let table = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "x,y,n,N,trials,rate,ci_lo,ci_hi,timeouts");
    assert_eq!(rows.len(), 65);
}

#[test]
fn region_map_svg_and_csv() {
    let text = ok_stdout(&["region-map", "--grid", "10", "--format", "svg"]);
    let doc = roxmltree::Document::parse(&text).unwrap();
    let regions: Vec<&str> = doc.descendants().filter_map(|n| n.attribute("data-region")).collect();
    assert_eq!(regions.len(), 100);
    assert!(regions.contains(&"A") && regions.contains(&"B1") && regions.contains(&"B2"));

    let csv = ok_stdout(&["region-map", "--grid", "8"]);
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "p1,p2,region,p0,ambiguous");
    assert_eq!(rows.len(), 65);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_workers() {
    let args = |w: &'static str| {
        vec!["--workers", w, "simulate", "containment", "--n", "7", "--N", "30", "--p1", "0.4", "--p2", "0.6", "--trials", "30", "--seed", "9"]
    };
    let a = rgiso(&args("1"));
    let b = rgiso(&args("1"));
    let c = rgiso(&args("3"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);

    let dir = tempfile::tempdir().unwrap();
    let mut svgs = Vec::new();
    for w in ["1", "2"] {
        let svg = dir.path().join(format!("h{w}.svg"));
        let csv = dir.path().join(format!("h{w}.csv"));
        ok_stdout(&[
            "--workers", w, "heatmap", "--N", "24", "--n", "6", "--grid", "8", "--trials", "3",
            "--out", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
        ]);
        svgs.push((std::fs::read(&csv).unwrap(), std::fs::read(&svg).unwrap()));
    }
    assert_eq!(svgs[0], svgs[1]);
}

#[test]
fn csv_starts_with_meta_lines() {
    let csv = ok_stdout(&["simulate", "mcis", "--N", "16", "--p1", "0.5", "--p2", "0.5", "--trials", "4"]);
    let first = csv.lines().next().unwrap();
    assert!(first.starts_with("# "));
    assert!(csv.contains("\nvalue,count\n"));
    assert!(csv.contains("# seed=1\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(rgiso(&[]).status.code(), Some(2));
    assert_eq!(rgiso(&["threshold", "--p1", "0.5"]).status.code(), Some(2));
    assert_eq!(rgiso(&["simulate", "containment", "--n", "5"]).status.code(), Some(2));
    assert_eq!(rgiso(&["threshold", "--p1", "1.5", "--p2", "0.5", "--N", "100"]).status.code(), Some(3));
    assert_eq!(rgiso(&["region-map", "--grid", "4"]).status.code(), Some(3));
    assert_eq!(rgiso(&["mcis-location", "--p1", "0.5", "--p2", "0.5", "--N", "8"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 1\n0 7\n").unwrap();
    assert_eq!(rgiso(&["check-pseudorandom", "--graph", bad.to_str().unwrap()]).status.code(), Some(3));
    let starved = rgiso(&[
        "simulate", "containment", "--n", "30", "--N", "150", "--p1", "0.5", "--p2", "0.5", "--trials", "2", "--budget-ms", "1",
    ]);
    assert_eq!(starved.status.code(), Some(4));
    let missing = dir.path().join("absent.txt");
    assert_eq!(rgiso(&["check-pseudorandom", "--graph", missing.to_str().unwrap()]).status.code(), Some(1));
}
