use std::io::Write;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_entangle-ring");

const BELL: &str = r#"{"dim":4,"re":[[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
const MIXED: &str = r#"{"dim":4,"re":[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .env("ENTANGLE_RING_THREADS", "2")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn binary");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            pipe.write_all(s.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn classify_bell() {
    let o = run(&["classify"], Some(BELL));
    assert!(o.status.success());
    assert_eq!(stdout(&o), "pure, boundary, region:boundary\n");
}

#[test]
fn classify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    std::fs::write(&path, BELL).unwrap();
    let o = run(&["classify", "--input", path.to_str().unwrap()], None);
    assert_eq!(stdout(&o), "pure, boundary, region:boundary\n");
}

#[test]
fn positivity_maximally_mixed() {
    let o = run(&["positivity"], Some(MIXED));
    assert!(o.status.success());
    let v = json(&o);
    let s: Vec<f64> = v["S"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let want = [1.0, 3.0 / 8.0, 1.0 / 16.0, 1.0 / 256.0];
    for (a, b) in s.iter().zip(want) {
        assert!((a - b).abs() < 1e-15, "{a} vs {b}");
    }
    assert_eq!(v["class"], "positive");
    assert!(stdout(&o).contains("3.7500000000000000e-1"));
}

#[test]
fn decompose_then_compose_round_trips() {
    let f = run(&["decompose"], Some(BELL));
    assert!(f.status.success());
    let v = json(&f);
    assert_eq!(v["C"][1][1].as_f64(), Some(-1.0));
    let back = run(&["compose"], Some(&stdout(&f)));
    let state = json(&back);
    assert_eq!(state["dim"], 4);
    assert!((state["re"][0][3].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn invariants_json_and_csv() {
    let o = run(&["invariants"], Some(BELL));
    let v = json(&o);
    assert_eq!(v["invariants"]["c002"].as_f64(), Some(3.0));
    assert_eq!(v["basis"]["K"].as_array().unwrap().len(), 10);
    assert_eq!(v["basis"]["J"].as_array().unwrap().len(), 15);
    assert!(v["casimirs"]["c2"].is_number());

    let csv = stdout(&run(&["invariants", "--format", "csv"], Some(BELL)));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "name,value");
    assert_eq!(lines.len(), 1 + 20 + 10 + 15 + 3);
    assert!(lines[1].starts_with("c002,"));
    assert!(!csv.contains('\r'));
}

#[test]
fn molien_series() {
    let o = run(&["molien", "--kmax", "6", "--format", "json"], None);
    let v = json(&o);
    let got: Vec<i64> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect();
    assert_eq!(got, vec![1, 1, 4, 6, 16, 23, 52]);
}

#[test]
fn stochastic_output_is_byte_stable() {
    let a = run(&["region-sample", "--seed", "11", "--n", "50"], None);
    let b = run(&["region-sample", "--seed", "11", "--n", "50"], None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().next(), Some("C2,C3,C4,S2,S3,S4,inside"));
    assert_eq!(text.lines().count(), 51);

    let r1 = run(&["random-state", "--seed", "5", "--kind", "pure"], None);
    let r2 = run(&["random-state", "--seed", "5", "--kind", "pure"], None);
    assert_eq!(r1.stdout, r2.stdout);
    let c = run(&["classify"], Some(&stdout(&r1)));
    assert!(stdout(&c).starts_with("pure, "));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["region-sample", "--n", "3"], None).status.code(),
        Some(2)
    );
    assert_eq!(run(&["verify"], None).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(
        run(&["molien", "--kmax", "65"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["classify", "--format", "csv"], Some(BELL))
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn malformed_input_exits_3() {
    assert_eq!(
        run(&["classify"], Some("{\"dim\": 4")).status.code(),
        Some(3)
    );
    assert_eq!(run(&["classify"], Some("[1, 2]")).status.code(), Some(3));
    let non_hermitian = r#"{"dim":2,"re":[[0.5,1],[0,0.5]],"im":[[0,0],[0,0]]}"#;
    assert_eq!(
        run(&["positivity"], Some(non_hermitian)).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["classify", "--input", "/nonexistent/state.json"], None)
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "--all", "--seed", "42"], None);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v["passed"], true);
    for key in ["positivity", "invariance", "casimir", "hilbert"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn verify_single_check() {
    let o = run(&["verify", "--casimir", "--seed", "3"], None);
    assert!(o.status.success());
    let v = json(&o);
    assert!(v.get("casimir").is_some());
    assert!(v.get("hilbert").is_none());
}

#[test]
fn bad_thread_count_is_usage_error() {
    let o = Command::new(BIN)
        .args(["molien", "--kmax", "3"])
        .env("ENTANGLE_RING_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
