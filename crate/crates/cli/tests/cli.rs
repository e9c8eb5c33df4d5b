use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn m2dq(args: &[&str]) -> Output {
    m2dq_env(args, &[])
}

fn m2dq_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_m2dq"));
    cmd.args(args).env_remove("M2DQ_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(v: &Value, idx: usize) -> &Value {
    &v["reports"][idx]
}

#[test]
fn orbit_cylinder() {
    let out = m2dq(&["orbit", "--mu", "0", "--alpha", "3,4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout_json(&out),
        json!({"kind": "cylinder", "radius": 5.0, "rep": {"principal": 5.0}})
    );
}

#[test]
fn orbit_integer_point() {
    let out = m2dq(&["orbit", "--mu", "2", "--alpha", "0,0"]);
    assert_eq!(
        stdout_json(&out),
        json!({"kind": "point", "mu": 2.0, "rep": {"character": 2}})
    );
}

#[test]
fn orbit_non_integral_point_is_flagged() {
    let out = m2dq(&["orbit", "--mu", "0.5", "--alpha", "0,0"]);
    let v = stdout_json(&out);
    assert_eq!(v["rep"], json!({"character_non_integral": 0.5}));
    assert!(v["warning"].as_str().unwrap().contains("not a UIR"));
}

#[test]
fn orbit_rejects_malformed_alpha() {
    assert_eq!(code(&m2dq(&["orbit", "--mu", "0", "--alpha", "3"])), 2);
}

fn star(lhs: &str, rhs: &str) -> Value {
    let out = m2dq(&["star", lhs, rhs]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    stdout_json(&out)
}

#[test]
fn star_x_cos() {
    let cos = r#"[{"k":0,"n":1,"re":0.5,"im":0},{"k":0,"n":-1,"re":0.5,"im":0}]"#;
    // x cosθ + (i/2) sinθ, with (i/2) sinθ = (e^{iθ} − e^{−iθ})/4
    assert_eq!(
        star(r#"[{"k":1,"n":0,"re":1,"im":0}]"#, cos),
        json!([
            {"k": 0, "n": -1, "re": -0.25, "im": 0.0},
            {"k": 0, "n": 1, "re": 0.25, "im": 0.0},
            {"k": 1, "n": -1, "re": 0.5, "im": 0.0},
            {"k": 1, "n": 1, "re": 0.5, "im": 0.0},
        ])
    );
}

#[test]
fn star_with_unit_is_identity() {
    let rhs = r#"[{"k":2,"n":-3,"re":0.125,"im":-7.5},{"k":0,"n":1,"re":1,"im":0}]"#;
    let expected: Value = serde_json::from_str(
        r#"[{"k":0,"n":1,"re":1.0,"im":0.0},{"k":2,"n":-3,"re":0.125,"im":-7.5}]"#,
    )
    .unwrap();
    assert_eq!(star("1", rhs), expected);
}

#[test]
fn star_worked_value() {
    assert_eq!(
        star(
            r#"[{"k":1,"n":1,"re":1,"im":0}]"#,
            r#"[{"k":1,"n":-1,"re":1,"im":0}]"#
        ),
        json!([
            {"k": 0, "n": 0, "re": 0.25, "im": 0.0},
            {"k": 1, "n": 0, "re": -1.0, "im": 0.0},
            {"k": 2, "n": 0, "re": 1.0, "im": 0.0},
        ])
    );
}

#[test]
fn star_reads_files_and_reports_bad_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.json");
    std::fs::write(&p, r#"[{"k":1,"n":0,"re":1,"im":0}]"#).unwrap();
    let arg = format!("@{}", p.display());
    assert_eq!(
        star(&arg, "2"),
        json!([{"k": 1, "n": 0, "re": 2.0, "im": 0.0}])
    );

    let out = m2dq(&["star", "[{\"k\":1}]", "1"]);
    assert_eq!(code(&out), 2);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "json");
}

#[test]
fn verify_covariance_is_exact() {
    let out = m2dq(&["verify", "--suite", "covariance", "--no-timestamp"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(report(&v, 0)["max_residual"], 0.0);
}

#[test]
fn verify_brackets_is_exact() {
    let out = m2dq(&["verify", "--suite", "brackets", "--no-timestamp"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&stdout_json(&out), 0)["max_residual"], 0.0);
}

#[test]
fn verify_evolve_with_flags() {
    let out = m2dq(&[
        "verify", "--suite", "evolve", "--dt", "1e-3", "--t", "1", "--N", "64",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let r = report(&v, 0);
    assert_eq!(r["passed"], true);
    assert!(r["checks"][0]["value"].as_f64().unwrap() < 1e-6);
    assert!(r["runtime_s"].is_number());
    assert!(v["timestamp_unix"].is_u64());
}

#[test]
fn verify_failure_exits_one() {
    // dt = 0.04 is stable but too coarse for the 1e-6 closed-form tolerance
    let out = m2dq(&[
        "verify",
        "--suite",
        "evolve",
        "--dt",
        "0.04",
        "--no-timestamp",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["passed"], false);
}

#[test]
fn verify_requires_a_suite() {
    assert_eq!(code(&m2dq(&["verify"])), 2);
    assert_eq!(code(&m2dq(&["verify", "--suite", "nope"])), 2);
    assert_eq!(code(&m2dq(&["verify", "--suite", "trivial", "--all"])), 2);
}

#[test]
fn verify_is_deterministic_without_timestamp() {
    let args = [
        "verify",
        "--suite",
        "group-law",
        "--suite",
        "representation",
        "--no-timestamp",
    ];
    let a = m2dq(&args);
    let b = m2dq(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert!(v.get("timestamp_unix").is_none());
    assert!(report(&v, 0).get("runtime_s").is_none());
}

#[test]
fn seed_precedence() {
    let seed_of = |out: &Output| {
        report(&stdout_json(out), 0)["config"]["seed"]
            .as_u64()
            .unwrap()
    };
    let base = ["verify", "--suite", "trivial", "--no-timestamp"];

    assert_eq!(seed_of(&m2dq(&base)), 0xC0FFEE);
    assert_eq!(seed_of(&m2dq_env(&base, &[("M2DQ_SEED", "17")])), 17);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("m2dq.conf");
    std::fs::write(&cfg, "# overrides\nseed = 0x20\nnx = 128\n").unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let mut with_file = base.to_vec();
    with_file.extend(["--config", cfg_s]);
    let out = m2dq_env(&with_file, &[("M2DQ_SEED", "17")]);
    assert_eq!(seed_of(&out), 32);
    assert_eq!(report(&stdout_json(&out), 0)["config"]["nx"], 128);

    with_file.extend(["--seed", "5", "--nx", "64"]);
    let out = m2dq_env(&with_file, &[("M2DQ_SEED", "17")]);
    assert_eq!(seed_of(&out), 5);
    assert_eq!(report(&stdout_json(&out), 0)["config"]["nx"], 64);

    assert_eq!(code(&m2dq_env(&base, &[("M2DQ_SEED", "zzz")])), 2);
}

#[test]
fn different_seeds_change_samples() {
    let run = |seed: &str| {
        let out = m2dq(&[
            "verify",
            "--suite",
            "group-law",
            "--no-timestamp",
            "--seed",
            seed,
        ]);
        report(&stdout_json(&out), 0)["checks"][0]["value"].clone()
    };
    assert_ne!(run("1"), run("2"));
}

fn read_circle(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn evolve_rotation_matches_shift() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let csv_path = dir.path().join("series.csv");
    let out = m2dq(&[
        "evolve",
        "--u",
        "1,0,0",
        "--t",
        "1",
        "--dt",
        "1e-3",
        "--N",
        "64",
        "--output",
        out_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
        "--csv-every",
        "100",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["steps"], 1000);
    assert!(v["closed_form_error"].as_f64().unwrap() < 1e-8);

    let state = read_circle(&out_path);
    assert_eq!(state["N"], 64);
    assert_eq!(state["coeffs"].as_array().unwrap().len(), 129);

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,norm,drift,closed_form_error"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r[3] < 1e-6));
}

#[test]
fn evolve_translation_branch_against_closed_form() {
    let out = m2dq(&[
        "evolve", "--u", "1,1,1", "--a", "1", "--t", "1", "--dt", "1e-3",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out)["closed_form_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn evolve_zero_time_copies_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let output = dir.path().join("out.json");
    let text = r#"{"N":2,"coeffs":[[0.0,0.0],[0.25,-1.5],[1.0,0.0],[0.1,0.2],[0.0,0.0]]}"#;
    std::fs::write(&input, text).unwrap();
    let out = m2dq(&[
        "evolve",
        "--u",
        "0.3,1,2",
        "--t",
        "0",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        read_circle(&output),
        serde_json::from_str::<Value>(text).unwrap()
    );
}

#[test]
fn evolve_instability_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("edge.json");
    let mut coeffs = vec![json!([0.0, 0.0]); 129];
    coeffs[128] = json!([1.0, 0.0]);
    std::fs::write(&input, json!({"N": 64, "coeffs": coeffs}).to_string()).unwrap();
    let out = m2dq(&[
        "evolve",
        "--u",
        "1,0,0",
        "--t",
        "1",
        "--dt",
        "0.1",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "instability");
}

#[test]
fn evolve_rejects_bad_radius_and_missing_input() {
    assert_eq!(code(&m2dq(&["evolve", "--a", "0"])), 2);
    assert_eq!(
        code(&m2dq(&["evolve", "--input", "/nonexistent/in.json"])),
        2
    );
}

#[test]
fn evolve_reads_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "c1 = 0\nc2 = 1\nc3 = 0\na = 2\nt = 0.5\ndt = 0.01\n").unwrap();
    let out = m2dq(&["evolve", "--config", cfg.to_str().unwrap(), "--dt", "0.005"]);
    let v = stdout_json(&out);
    assert_eq!(v["u"], json!([0.0, 1.0, 0.0]));
    assert_eq!(v["a"], 2.0);
    assert_eq!(v["t"], 0.5);
    assert_eq!(v["dt"], 0.005);
    assert_eq!(v["steps"], 100);
}

#[test]
fn table_lists_both_families() {
    let out = m2dq(&["table", "--mu-range", "-1:1:0.5", "--radius-range", "1:2:1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "mu,alpha1,alpha2,orbit,radius,representation,parameter,uir"
    );
    assert_eq!(lines.len(), 1 + 5 + 2);
    assert!(lines.contains(&"-1,0,0,point,,character,-1,true"));
    assert!(lines.contains(&"0.5,0,0,point,,character_non_integral,0.5,false"));
    assert!(lines.contains(&"0,2,0,cylinder,2,principal,2,true"));
}
