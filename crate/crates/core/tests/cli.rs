use annulus_cluster::{Angulation, AnnulusConfig, ColouredQuiver};
use serde_json::Value;
use std::process::{Command, Output};

fn annulus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annulus"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn enumerate_reports_counts() {
    let out = annulus(&["enumerate", "--p", "2", "--q", "2", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["counts"]["angulation_classes"], 4);
    assert_eq!(v["counts"]["quiver_classes"], 4);
    assert_eq!(v["bijection"], "pass");
    assert_eq!(v["formula"]["value"], 4);

    let v = json(&annulus(&[
        "enumerate",
        "--p",
        "2",
        "--q",
        "2",
        "--no-flip",
    ]));
    assert_eq!(v["counts"]["angulation_classes"], 5);
    assert_eq!(v["formula"]["matches"], true);

    let out = annulus(&["enumerate", "--p", "3", "--q", "2", "--m", "1", "--no-flip"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["counts"]["angulation_classes"], 12);
}

#[test]
fn enumerate_is_deterministic() {
    let args = [
        "enumerate",
        "--p",
        "3",
        "--q",
        "2",
        "--m",
        "2",
        "--seed",
        "5",
    ];
    assert_eq!(annulus(&args).stdout, annulus(&args).stdout);
}

#[test]
fn resource_guard_exits_with_2() {
    let out = annulus(&[
        "enumerate",
        "--p",
        "3",
        "--q",
        "2",
        "--m",
        "2",
        "--limit",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn database_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("classes.jsonl");
    let out = annulus(&[
        "enumerate",
        "--p",
        "3",
        "--q",
        "2",
        "--database",
        db.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&db).unwrap();
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn mutate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let start = dir.path().join("delta0.json");
    let cfg = AnnulusConfig::new(3, 2, 2).unwrap();
    let original = serde_json::to_string_pretty(&Angulation::delta0(cfg)).unwrap() + "\n";
    std::fs::write(&start, &original).unwrap();

    let cycled = dir.path().join("cycled.json");
    let out = annulus(&[
        "mutate",
        "--input",
        start.to_str().unwrap(),
        "--position",
        "0",
        "--times",
        "3",
        "--output",
        cycled.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&cycled).unwrap(), original);

    let out = annulus(&[
        "mutate",
        "--input",
        start.to_str().unwrap(),
        "--position",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let once: Angulation = serde_json::from_slice(&out.stdout).unwrap();
    assert_ne!(once, Angulation::delta0(cfg));

    let out = annulus(&[
        "mutate",
        "--p",
        "3",
        "--q",
        "2",
        "--m",
        "2",
        "--position",
        "1",
        "--emit-quiver",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["commutes"], true);
    let q: ColouredQuiver = serde_json::from_value(v["quiver"].clone()).unwrap();
    assert_eq!(q, Angulation::delta0(cfg).quiver().mutate(1).unwrap());
}

#[test]
fn mutate_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"p":2,"q":2,"m":1,"strict":true,"diagonals":[{"t":"S","u":0,"v":0},{"t":"S","u":1,"v":1},{"t":"S","u":0,"v":1},{"t":"S","u":0,"v":3}]}"#,
    )
    .unwrap();
    let out = annulus(&["mutate", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rejected"));
}

#[test]
fn quiver_formats() {
    let out = annulus(&["quiver", "--p", "2", "--q", "2", "--format", "dot"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("digraph"));
    let v = json(&annulus(&["quiver", "--p", "2", "--q", "2"]));
    assert_eq!(v["n"], 4);
}

#[test]
fn verify_passes() {
    let out = annulus(&[
        "verify",
        "--p",
        "2",
        "--q",
        "2",
        "--m",
        "1",
        "--samples",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
    let missing_seed = annulus(&["verify", "--p", "2", "--q", "2"]);
    assert_eq!(missing_seed.status.code(), Some(1));
}

#[test]
fn arquiver_components() {
    let v = json(&annulus(&[
        "arquiver", "--p", "2", "--q", "2", "--m", "1", "--window", "6",
    ]));
    assert_eq!(v["components"].as_array().unwrap().len(), 3);
    let out = annulus(&[
        "arquiver", "--p", "3", "--q", "2", "--m", "2", "--window", "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["components"].as_array().unwrap().len(), 6);
    let dot = annulus(&[
        "arquiver", "--p", "2", "--q", "2", "--window", "4", "--format", "dot",
    ]);
    let text = String::from_utf8_lossy(&dot.stdout);
    assert!(text.contains("style=dashed") && text.contains("Tp^0:Q("));
}

#[test]
fn formula_command() {
    let v = json(&annulus(&["formula", "--p", "3", "--q", "3"]));
    assert_eq!(v["value"], 22);
    let v = json(&annulus(&["formula", "--p", "4", "--q", "2", "--no-flip"]));
    assert_eq!(v["value"], 36);
}
