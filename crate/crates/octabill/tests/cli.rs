use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octabill")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn svg_is_default() {
    let o = run(&["fractal", "--family", "snowflake", "--depth", "1"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("<?xml"));
    assert!(s.trim_end().ends_with("</svg>"));
    assert_eq!(s, stdout(&run(&["fractal", "--family", "snowflake", "--depth", "1"])));
}

#[test]
fn json_scene_parses() {
    let o = run(&["--format", "json", "fractal", "--family", "carpet", "--depth", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["approximate"], false);
    let n: usize = v["layers"].as_array().unwrap().iter().map(|l| l["items"].as_array().unwrap().len()).sum();
    assert!(n >= 8 * 25);
}

#[test]
fn psi_orbit_code() {
    let o = run(&["--format", "json", "orbit", "--system", "psi", "--depth", "1", "--steps", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["data"]["code"], serde_json::json!([9, 25, 39]));
}

#[test]
fn ngon_is_approximate() {
    let o = run(&["--format", "json", "orbit", "--system", "ngon", "--ngon", "7", "--steps", "20", "--seed", "3,1/7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["approximate"], true);
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "substitution"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("PASS"));
    let bad = run(&["verify", "vector-tables"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).starts_with("FAIL"));
    let unknown = run(&["verify", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown suite"));
}

#[test]
fn bad_input_is_an_error() {
    for args in [
        &["orbit", "--system", "phi2", "--seed", "1,zz"][..],
        &["graph", "--depth", "9"],
        &["graph", "--kite", "1/0"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn writes_to_file() {
    let path = std::env::temp_dir().join(format!("octabill-cli-{}.svg", std::process::id()));
    let o = run(&["toy", "--depth", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let s = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(s.contains("<svg"));
}
