use std::process::{Command, Output};

use serde_json::Value;

fn mfq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfq")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = mfq(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn fails(args: &[&str]) -> String {
    let out = mfq(args);
    assert!(!out.status.success(), "{args:?} should fail");
    assert!(out.stdout.is_empty(), "nothing on stdout for {args:?}");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn beta_crit_examples() {
    let v = json(&["beta-crit", "--r", "2", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5"]);
    assert_eq!(v["schema"], "mfq.beta-crit.v1");
    assert_eq!(v["beta_crit"].as_f64(), Some(2.0));
    assert_eq!(v["method"], "closed-form-r2");
    assert_eq!(v["params"]["rho"].as_f64(), Some(0.5));
    assert!(v["version"].is_string());

    let v = json(&["beta-crit", "--r", "2", "--a", "-1", "--b", "-1", "--c", "1", "--rho", "0.5"]);
    assert!(v["beta_crit"].is_null());
    assert_eq!(v["reason"], "Q negative semidefinite");

    let v = json(&["beta-crit", "--r", "3", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5"]);
    assert_eq!(v["method"], "closed-form-tcond");
    assert!((v["beta_crit"].as_f64().unwrap() - 4.0 * 2f64.ln()).abs() < 1e-11);
}

#[test]
fn exact_check_example() {
    let v = json(&["exact-check", "--r", "2", "--n", "8", "--m", "3", "--a", "1", "--b", "-1", "--c", "2", "--beta", "0.7"]);
    assert!(v["relative_gap"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["agree"], true);
    let v = json(&["exact-check", "--r", "3", "--n", "4", "--m", "2", "--kind", "wb-p", "--a", "0.5", "--c", "-1", "--beta", "1.3"]);
    assert_eq!(v["agree"], true);
}

#[test]
fn validation_failures() {
    assert!(fails(&["beta-crit", "--r", "1", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5"]).contains("--r"));
    assert!(fails(&["beta-crit", "--r", "2", "--a", "1", "--b", "1", "--c", "1", "--rho", "1"]).contains("--rho"));
    assert!(fails(&["free-energy", "--r", "2", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5", "--beta", "0"]).contains("--beta"));
    assert!(fails(&["free-energy", "--r", "2", "--a", "nan", "--b", "1", "--c", "1", "--rho", "0.5", "--beta", "1"]).contains("finite"));
    fails(&["beta-crit", "--r", "2", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5", "--bogus", "3"]);
    fails(&["no-such-command"]);
    assert!(fails(&["magnetisation", "--r", "3", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5", "--beta", "1", "--w", "1,0"]).contains("--w"));
    assert!(fails(&["spectrum", "--r", "2", "--n", "20", "--m", "3"]).contains("dense limit"));
    assert!(fails(&["phase-diagram", "--r", "3", "--c", "0", "--rho", "0.5"]).contains("--c"));
    assert!(fails(&["scaling-study", "--r", "2", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5", "--beta", "1", "--n", "6,80"]).contains("limit"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["maximize", "--r", "3", "--a", "-1", "--b", "2", "--c", "-1.5", "--rho", "0.4", "--beta", "3"];
    assert_eq!(mfq(&args).stdout, mfq(&args).stdout);
    let grid = ["phase-diagram", "--r", "3", "--c", "-1", "--rho", "0.3", "--resolution", "30"];
    let one = Command::new(env!("CARGO_BIN_EXE_mfq")).args(grid).env("MFQ_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_mfq")).args(grid).env("MFQ_THREADS", "4").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_mfq")).args(grid).env("MFQ_THREADS", "zero").output().unwrap();
    assert!(!bad.status.success());
}

#[test]
fn phase_diagram_csv() {
    let dir = std::env::temp_dir().join(format!("mfq-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.csv");
    let v = json(&["phase-diagram", "--r", "3", "--c", "1", "--rho", "0.5", "--resolution", "11", "--out", path.to_str().unwrap()]);
    assert_eq!(v["cells"].as_u64(), Some(121));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,b,region,k,maxG"));
    assert_eq!(lines.count(), 121);
    // the far corner a = b = -4 is disordered
    assert!(text.contains("-4.0,-4.0,D,,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn observables() {
    let below = ["--r", "3", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5", "--beta", "2", "--w", "1,0,-1"];
    let m = json(&[&["magnetisation"][..], &below].concat());
    assert_eq!(m["right"].as_f64(), Some(0.0));
    assert_eq!(m["left"].as_f64(), Some(0.0));
    let c = json(&[&["correlation", "--kind", "wb"][..], &below].concat());
    assert!((c["value"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let at = ["correlation", "--r", "3", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5", "--beta", "2.7725887222397811", "--w", "1,0,0"];
    let c = json(&at);
    assert!(c["value"].is_null());
    assert_eq!(c["candidates"].as_array().unwrap().len(), 2);
}

#[test]
fn spectrum_levels() {
    let v = json(&["spectrum", "--r", "2", "--n", "2", "--m", "1", "--c", "1"]);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    assert_eq!(levels[0]["energy"].as_f64(), Some(-0.5));
    assert_eq!(levels[0]["multiplicity"].as_u64(), Some(3));
    let v = json(&["spectrum", "--r", "3", "--n", "2", "--m", "1", "--kind", "bb", "--j1", "0", "--j2", "1"]);
    assert_eq!(v["dimension"].as_u64(), Some(9));
}

#[test]
fn multi_block_config() {
    let dir = std::env::temp_dir().join(format!("mfq-cli-mb-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("model.cfg");
    std::fs::write(&cfg, "# one effective block\nr = 2\nrho = 0.5, 0.5\nbeta = 1\ngamma = 2:0.5\n").unwrap();
    let c = cfg.to_str().unwrap();
    let v = json(&["mb-free-energy", "--config", c, "--beta-crit"]);
    assert_eq!(v["schema"], "mfq.mb-free-energy.v1");
    // a global transposition term of weight c/2 is the homogeneous r = 2 model
    assert!((v["beta_crit"].as_f64().unwrap() - 2.0).abs() < 1e-5);
    let v = json(&["mb-free-energy", "--config", c, "--gamma", "2:0.5,3:-0.1", "--beta", "0.5"]);
    assert_eq!(v["params"]["terms"].as_array().unwrap().len(), 2);
    assert_eq!(v["params"]["beta"].as_f64(), Some(0.5));
    assert!(fails(&["mb-free-energy", "--config", c, "--gamma", "1:0.5"]).contains("cycle"));
    std::fs::write(&cfg, "r = 2\nrho = 0.5, 0.6\nbeta = 1\ngamma = 2:1\n").unwrap();
    assert!(fails(&["mb-free-energy", "--config", c]).contains("sum to 1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scaling_study_table() {
    let out = mfq(&["scaling-study", "--r", "2", "--a", "1", "--b", "1", "--c", "1", "--rho", "0.5", "--beta", "1", "--n", "6,8,10,12"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,m,log_z_per_site,limit,gap");
    let gaps: Vec<f64> = rows[1..].iter().map(|r| r.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}
