use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn planet(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_planet"))
        .args(args)
        .env_remove("PLANET_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn planet");
    let input = stdin.unwrap_or("").to_owned();
    let mut pipe = child.stdin.take().unwrap();
    std::thread::spawn(move || {
        let _ = pipe.write_all(input.as_bytes());
    });
    child.wait_with_output().expect("planet output")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn infeasible_parameters_exit_one() {
    let o = planet(&["euler", "-k", "5", "-m", "5"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["verdict"], "infeasible");
    let o = planet(&["euler", "-k", "5", "-m", "6"], None);
    assert_eq!(o.status.code(), Some(0));
    let o = planet(&["--format", "text", "euler", "-k", "4", "-m", "3", "-r", "1"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("infeasible"));
}

#[test]
fn pencil_pipes_into_group() {
    let net = planet(&["construct", "pencil", "-m", "4"], None);
    assert!(net.status.success());
    let o = planet(&["group", "-"], Some(&stdout(&net)));
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["group"]["invariant_factors"], serde_json::json!([4]));
    assert_eq!(doc["m"], 4);
}

#[test]
fn group_accepts_latin_squares() {
    let net = planet(&["construct", "torus", "--invariants", "2,2"], None);
    let ls = planet(&["latin", "-", "--shuffle", "9"], Some(&stdout(&net)));
    assert!(ls.status.success());
    let o = planet(&["group", "-"], Some(&stdout(&ls)));
    assert_eq!(json(&o)["group"]["invariant_factors"], serde_json::json!([2, 2]));
    let bad = r#"{"table": [[0,1,2],[1,2,0],[2,1,0]]}"#;
    assert_eq!(planet(&["group", "-"], Some(bad)).status.code(), Some(2));
}

#[test]
fn torus_net_algebraizes_on_a_smooth_cubic() {
    let net = planet(&["construct", "torus", "--invariants", "2,4"], None);
    let o = planet(&["algebraize", "-"], Some(&stdout(&net)));
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["class"]["tag"], "smooth");
    assert_eq!(doc["regular"], true);
    let max = doc["residuals"].as_array().unwrap().iter().map(|r| r.as_f64().unwrap()).fold(0.0, f64::max);
    assert!(max < 1e-7, "{max}");
}

#[test]
fn constructions_round_trip_through_verify() {
    for args in [
        vec!["construct", "pencil", "-m", "5"],
        vec!["construct", "braid"],
        vec!["construct", "hessian"],
        vec!["construct", "singular", "--case", "3a", "-m", "4"],
        vec!["construct", "torus", "--invariants", "3", "--tau", "0.1,1.3"],
    ] {
        let net = planet(&args, None);
        assert!(net.status.success(), "{args:?}");
        let o = planet(&["verify", "-"], Some(&stdout(&net)));
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert_eq!(json(&o)["ok"], true);
    }
}

#[test]
fn exact_output_is_reproducible() {
    let a = planet(&["construct", "singular", "--case", "2a", "-m", "3"], None);
    let b = planet(&["--seed", "77", "construct", "singular", "--case", "2a", "-m", "3"], None);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["field"]["cyclotomic"], 12);
}

#[test]
fn broken_nets_fail_verification() {
    let net = r#"{"field": "complex", "classes": [
        [[[1,0],[0,0],[0,0]], [[0,0],[1,0],[-1,0]]],
        [[[0,0],[1,0],[0,0]], [[1,0],[0,0],[-1,0]]],
        [[[0,0],[0,0],[1,0]], [[1,0],[-2,0],[0,0]]]
    ]}"#;
    let o = planet(&["verify", "-"], Some(net));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["ok"], false);
}

#[test]
fn malformed_input_reports_location() {
    let o = planet(&["verify", "-"], Some("{\"field\": \"complex\",\n \"classes\": ["));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = planet(&["verify", "-"], Some(r#"{"field": "complex", "classes": [[[[1,0],[0,0]]]]}"#));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("$.classes[0][0]"));
    assert_eq!(planet(&["verify", "/nonexistent/net.json"], None).status.code(), Some(2));
    assert_eq!(planet(&["euler", "-k", "5"], None).status.code(), Some(2));
}

#[test]
fn three_invariant_factors_are_refused() {
    let o = planet(&["construct", "torus", "--invariants", "2,2,2"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at most two invariant factors"));
}

#[test]
fn resonance_reports_the_essential_component() {
    let net = stdout(&planet(&["construct", "braid"], None));
    let dir = std::env::temp_dir().join(format!("planet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let v = dir.join("v.json");
    std::fs::write(&v, r#"{"vector": [{"N": 1, "coeffs": [[2, 1]]}, {"N": 1, "coeffs": [[2, 1]]},
        {"N": 1, "coeffs": [[-1, 1]]}, {"N": 1, "coeffs": [[-1, 1]]},
        {"N": 1, "coeffs": [[-1, 1]]}, {"N": 1, "coeffs": [[-1, 1]]}]}"#)
        .unwrap();
    let o = planet(&["resonance", "-", "--vector", v.to_str().unwrap()], Some(&net));
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&o);
    assert_eq!(doc["dimV"], 2);
    assert_eq!(doc["h1"], 1);
    assert_eq!(doc["Q"].as_array().unwrap().len(), 6);
    assert_eq!(doc["covers_all"], true);
}

#[test]
fn backend_conversion() {
    let net = stdout(&planet(&["construct", "pencil", "-m", "3"], None));
    let o = planet(&["--backend", "complex", "group", "-"], Some(&net));
    assert_eq!(json(&o)["group"]["invariant_factors"], serde_json::json!([3]));
    let torus = stdout(&planet(&["construct", "torus", "--invariants", "3"], None));
    assert_eq!(planet(&["--backend", "cyclotomic", "verify", "-"], Some(&torus)).status.code(), Some(2));
    assert_eq!(
        planet(&["--backend", "cyclotomic", "construct", "torus", "--invariants", "3"], None).status.code(),
        Some(2)
    );
    let o = planet(&["--backend", "cyclotomic:6", "construct", "pencil", "-m", "3"], None);
    assert_eq!(json(&o)["field"]["cyclotomic"], 6);
}

#[test]
fn selftest_passes_with_seed_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_planet"))
        .args(["selftest", "--trials", "10"])
        .env("PLANET_SEED", "12345")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    assert!(doc["suites"].as_array().unwrap().len() >= 10);
}
