use std::process::Command;

use serde_json::Value;

fn hermsurf(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hermsurf")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = hermsurf(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).expect("valid JSON")
}

const X0_PLUS_X1: &str = r#"{"q":2,"degree":1,"terms":[{"exp":[1,0,0,0],"c":"1"},{"exp":[0,1,0,0],"c":"1"}]}"#;
const AXIS: &str = r#"[["1","0","0","0"],["0","1","0","0"]]"#;

fn assert_header(v: &Value, q: u64) {
    let h = &v["header"];
    assert_eq!(h["tool"], "hermsurf");
    assert_eq!(h["modulus_table"], "least-irreducible-v1");
    assert_eq!(h["q"], q);
    assert!(h["modulus"].is_string());
}

#[test]
fn count_plane_form_inline_and_from_file() {
    let v = json(&["count", "--q", "2", "--form", X0_PLUS_X1]);
    assert_eq!(v["count"], 13);
    assert_header(&v, 2);
    let dir = std::env::temp_dir().join(format!("hermsurf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.json");
    std::fs::write(&path, X0_PLUS_X1).unwrap();
    let v = json(&["count", "--q", "2", "--form", path.to_str().unwrap()]);
    assert_eq!(v["count"], 13);
    let out = dir.join("report.json");
    let (code, stdout, _) = hermsurf(&["count", "--q", "2", "--form", X0_PLUS_X1, "--out", out.to_str().unwrap()]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["count"], 13);
}

#[test]
fn construct_reports_measured_counts() {
    let v = json(&["construct", "sorensen", "--q", "3", "--d", "3"]);
    assert_eq!(v["measured_count"], 103);
    assert_eq!(v["expected_count"], 103);
    assert_eq!(v["planes"].as_array().unwrap().len(), 3);
    assert_eq!(v["form"]["degree"], 3);
    let v = json(&["construct", "second", "--q", "3"]);
    assert_eq!(v["measured_count"], 100);
    assert_eq!(v["points"].as_array().unwrap().len(), 1);
    let v = json(&["construct", "generator-book", "--q", "2", "--d", "3", "--seed", "4"]);
    assert_eq!(v["measured_count"], 29);
}

#[test]
fn incidence_commands() {
    let v = json(&["classify-line", "--q", "2", "--line", AXIS]);
    assert_eq!(v["class"], "secant");
    assert_eq!(v["surface_points"], 3);
    assert_eq!(v["book"]["tangent"], 3);
    let v = json(&["book", "--q", "2", "--line", AXIS]);
    let planes = v["planes"].as_array().unwrap();
    assert_eq!(planes.len(), 5);
    assert_eq!(planes.iter().filter(|p| p["tangent"] == true).count(), 3);
    let v = json(&["classify-plane", "--q", "2", "--plane", r#"["1","1","0","0"]"#]);
    assert_eq!(v["tangent"], true);
    assert_eq!(v["surface_points"], 13);
    assert_eq!(v["point_of_tangency"], v["pole"]);
    let v = json(&["classify-plane", "--q", "2", "--plane", r#"["1","0","0","0"]"#]);
    assert_eq!(v["tangent"], false);
    assert_eq!(v["surface_points"], 9);
}

#[test]
fn normal_form_and_dichotomy() {
    // x0 x2 x3 + x1 x2 x3 contains V(x2, x3) and V(x0, x1) and is reducible
    let form = r#"{"q":3,"degree":3,"terms":[{"exp":[1,0,1,1],"c":"1"},{"exp":[0,1,1,1],"c":"1"}]}"#;
    let axis = r#"[["1","0","0","0"],["0","1","0","0"]]"#;
    let other = r#"[["0","0","1","0"],["0","0","0","1"]]"#;
    let v = json(&["nf", "--q", "3", "--form", form, "--line", other, "--line2", axis]);
    assert_eq!(v["even"], false);
    assert_eq!(v["invariant_nonzero"], false);
    assert_eq!(v["book"].as_array().unwrap().len(), 10);
    assert_eq!(v["dichotomy"]["result"], "reducible");
}

#[test]
fn verify_surveys() {
    let v = json(&["verify", "quadrics", "--q", "2"]);
    assert_eq!(v["max_count"], 23);
    assert_eq!(v["samples"], 349_525);
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert_header(&v, 2);
    let v = json(&["verify", "triples", "--q", "2"]);
    assert!(v["histogram"].get("31").is_none());
    assert_eq!(v["histogram"]["33"], 240);
    let v = json(&["verify", "structure", "--q", "2"]);
    assert_eq!(v["mode"], "exhaustive");
    assert_eq!(v["surface_points"], 45);
    let v = json(&["verify", "structure", "--q", "4", "--samples", "50"]);
    assert_eq!(v["mode"], "random");
    let v = json(&["verify", "cubics", "--q", "3", "--samples", "200", "--strict-conjecture"]);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["histogram"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).sum::<u64>(), 200);
}

#[test]
fn csv_output() {
    let (code, out, _) = hermsurf(&["verify", "triples", "--q", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("count,frequency"));
    let mut mass = 0;
    for l in lines {
        let (a, b) = l.split_once(',').unwrap();
        a.parse::<u64>().unwrap();
        mass += b.parse::<u64>().unwrap();
    }
    assert_eq!(mass, 3570);
    let (code, out, _) = hermsurf(&["count", "--q", "2", "--form", X0_PLUS_X1, "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("key,value\n"));
    assert!(out.contains("\ncount,13\n"));
}

#[test]
fn jobs_and_reruns_do_not_change_output() {
    let args = ["verify", "cubics", "--q", "3", "--samples", "150", "--seed", "8"];
    let (_, a, _) = hermsurf(&args);
    let (_, b, _) = hermsurf(&args);
    let (_, c, _) = hermsurf(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn bad_input_exits_with_2() {
    for args in [
        &["count", "--q", "2", "--form", r#"{"q":2"#][..],
        &["count", "--q", "2", "--form", r#"{"q":3,"degree":1,"terms":[]}"#],
        &["count", "--q", "6", "--form", X0_PLUS_X1],
        &["count", "--q", "9", "--form", X0_PLUS_X1],
        &["count", "--form", X0_PLUS_X1],
        &["count", "--q", "2", "--form", "/nonexistent/form.json"],
        &["construct", "sorensen", "--q", "2", "--d", "9"],
        &["verify", "quadrics", "--q", "3"],
        &["verify", "cubics", "--q", "2"],
        &["verify", "cubics", "--q", "3", "--jobs", "0"],
        &["classify-line", "--q", "2", "--line", r#"[["1","0","0","0"],["t","0","0","0"]]"#],
        &["frobnicate"],
    ] {
        let (code, _, err) = hermsurf(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty());
    }
}

#[test]
fn ceiling_is_configurable() {
    let (code, _, _) = hermsurf(&["count", "--q", "9", "--q-ceiling", "9", "--form", r#"{"q":9,"degree":1,"terms":[{"exp":[1,0,0,0],"c":"1"}]}"#]);
    assert_eq!(code, 0);
}

#[test]
fn custom_and_degenerate_matrices() {
    let m = r#"[["0","1","0","0"],["1","0","0","0"],["0","0","1","0"],["0","0","0","1"]]"#;
    let v = json(&["construct", "sorensen", "--q", "2", "--d", "2", "--matrix", m]);
    assert_eq!(v["measured_count"], 23);
    let degenerate = r#"[["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","0"]]"#;
    let (code, _, err) = hermsurf(&["verify", "structure", "--q", "2", "--matrix", degenerate]);
    assert_eq!(code, 2);
    assert!(err.contains("non-degenerate"));
}
