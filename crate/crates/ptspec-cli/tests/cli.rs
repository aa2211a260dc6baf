//! End-to-end tests of the command-line binary: exit codes, report fields,
//! CSV shapes, and byte-level determinism.

use std::env;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const DIRICHLET_DISCRETE: &str = r#"{"l":1.0,"phi":0.0,"outer":{"family":"symmetric","U":[[[-1.0,0.0],[0.0,0.0]],[[0.0,0.0],[-1.0,0.0]]],"L0":1.0}}"#;
const DIRICHLET_ENTIRE: &str = r#"{"l":1.0,"phi":1.5707963267948966,"outer":{"family":"symmetric","U":[[[-1.0,0.0],[0.0,0.0]],[[0.0,0.0],[-1.0,0.0]]],"L0":1.0}}"#;
const SEPARATED_EMPTY: &str = r#"{"l":1.0,"phi":1.5707963267948966,"outer":{"family":"separated","theta":0.7853981633974483,"h0":0.7071067811865476,"h1":0.7071067811865476}}"#;
const SEPARATED_GENERIC: &str = r#"{"l":1.0,"phi":0.7853981633974483,"outer":{"family":"separated","theta":1.0471975511965976,"h0":0.7071067811865476,"h1":0.7071067811865476}}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptspec-cli"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn json_report(out: &Output) -> Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout is a JSON report")
}

/// Scratch path unique to this test process so parallel runs don't collide.
fn scratch(name: &str) -> PathBuf {
    env::temp_dir().join(format!("ptspec-cli-{}-{name}", std::process::id()))
}

#[test]
fn classify_reports_all_three_regimes() {
    for (model, expected) in [
        (DIRICHLET_DISCRETE, "Discrete"),
        (DIRICHLET_ENTIRE, "EntireComplexPlane"),
        (SEPARATED_EMPTY, "Empty"),
    ] {
        let out = run(&["classify", "--no-timestamp", "--model", model]);
        assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
        let report = json_report(&out);
        assert_eq!(report["class"], expected);
        assert!(
            report["condition_evaluated"].as_str().unwrap().len() > 10,
            "condition string should explain the decision"
        );
        assert!(
            !report["witness_values"].as_array().unwrap().is_empty(),
            "classification should carry witnesses"
        );
        assert!(report.get("generated_at_unix_s").is_none());
    }
}

#[test]
fn classify_is_byte_deterministic_without_timestamp() {
    let a = run(&["classify", "--no-timestamp", "--model", DIRICHLET_DISCRETE]);
    let b = run(&["classify", "--no-timestamp", "--model", DIRICHLET_DISCRETE]);
    assert_eq!(a.stdout, b.stdout);

    let stamped = run(&["classify", "--model", DIRICHLET_DISCRETE]);
    let report = json_report(&stamped);
    assert!(
        report["generated_at_unix_s"].is_u64(),
        "default output carries a generation timestamp"
    );
}

#[test]
fn classify_accepts_model_file_and_inline_equally() {
    let path = scratch("model.json");
    fs::write(&path, DIRICHLET_DISCRETE).unwrap();
    let from_file = run(&[
        "classify",
        "--no-timestamp",
        "--model",
        path.to_str().unwrap(),
    ]);
    let inline = run(&["classify", "--no-timestamp", "--model", DIRICHLET_DISCRETE]);
    fs::remove_file(&path).ok();
    assert_eq!(code(&from_file), 0, "stderr: {}", stderr_str(&from_file));
    assert_eq!(from_file.stdout, inline.stdout);
}

#[test]
fn classify_rejects_bad_model_input() {
    // Not JSON at all (and not an existing file).
    let out = run(&["classify", "--model", "no-such-file.json"]);
    assert_eq!(code(&out), 2);

    // Syntactically valid JSON, semantically invalid parameters.
    let out = run(&[
        "classify",
        "--model",
        r#"{"l":-1.0,"phi":0.0,"outer":{"family":"separated","theta":0.0,"h0":1.0,"h1":0.0}}"#,
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr_str(&out).contains("invalid model JSON"));
}

#[test]
fn spectrum_finds_dirichlet_eigenvalues() {
    let out = run(&[
        "spectrum",
        "--model",
        DIRICHLET_DISCRETE,
        "--region",
        "0.1,10,-1,1",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "re_k,im_k,re_lambda,im_lambda,multiplicity,residual"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6, "six roots in the strip:\n{text}");
    let first_k: f64 = rows[0].split(',').next().unwrap().parse().unwrap();
    assert!(
        (first_k - std::f64::consts::FRAC_PI_2).abs() < 1e-8,
        "lowest root should be pi/2, got {first_k}"
    );
}

#[test]
fn spectrum_refuses_outside_discrete_regime() {
    let out = run(&[
        "spectrum",
        "--model",
        SEPARATED_EMPTY,
        "--region",
        "0.1,10,-1,1",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr_str(&out).contains("Empty"));
}

#[test]
fn spectrum_rejects_malformed_region() {
    let out = run(&[
        "spectrum",
        "--model",
        DIRICHLET_DISCRETE,
        "--region",
        "0.1,10,-1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn line_demo_builds_verified_eigenfunction() {
    let out = run(&[
        "line-demo",
        "--no-timestamp",
        "--phi",
        "1.5707963267948966",
        "--lambda",
        "-1,0",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let report = json_report(&out);
    assert_eq!(report["branch"]["branch"], "exp_decay");
    assert!(report["fd_eigen_residual"].as_f64().unwrap() < 1e-8);
    assert!(report["interface_residual"].as_f64().unwrap() < 1e-12);
    assert!((report["norm"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn line_demo_refuses_outside_point_spectrum() {
    // On the ray [0, inf) there is no eigenfunction even at phi = pi/2.
    let on_ray = run(&[
        "line-demo",
        "--phi",
        "1.5707963267948966",
        "--lambda",
        "1,0",
    ]);
    assert_eq!(code(&on_ray), 3);

    // Away from the critical angles the point spectrum is empty.
    let wrong_phi = run(&["line-demo", "--phi", "0", "--lambda", "-1,0"]);
    assert_eq!(code(&wrong_phi), 3);
}

#[test]
fn metric_reports_degeneracy_at_critical_angle() {
    let out = run(&["metric", "--no-timestamp", "--phi", "1.5707963267948966"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let report = json_report(&out);
    let eigs = report["metric_eigenvalues"].as_array().unwrap();
    assert!(eigs[0].as_f64().unwrap().abs() < 1e-15);
    assert!((eigs[1].as_f64().unwrap() - 2.0).abs() < 1e-15);
    assert_eq!(report["invertible"], false);
}

#[test]
fn weyl_table_halves_residual_per_doubling() {
    let out = run(&["weyl", "--k", "1", "--n-list", "8,16,32"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,residual,bound");
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[1].parse().unwrap(), cols[2].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 3);
    for (residual, bound) in &rows {
        assert!(residual <= bound, "residual {residual} exceeds bound {bound}");
    }
    for pair in rows.windows(2) {
        let ratio = pair[1].0 / pair[0].0;
        assert!(
            (0.45..=0.55).contains(&ratio),
            "doubling n should roughly halve the residual, got ratio {ratio}"
        );
    }
}

#[test]
fn resolvent_solves_and_verifies() {
    let csv = scratch("resolvent.csv");
    let out = run(&[
        "resolvent",
        "--no-timestamp",
        "--model",
        SEPARATED_GENERIC,
        "--lambda",
        "2,1.5",
        "--g",
        "gaussian",
        "--grid-n",
        "2048",
        "--fd-order",
        "6",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr_str(&out));
    let report = json_report(&out);
    assert!(report["residuals"]["pde"].as_f64().unwrap() < 1e-6);
    assert!(report["residuals"]["interface"].as_f64().unwrap() < 1e-10);
    assert!(report["residuals"]["outer"].as_f64().unwrap() < 1e-10);

    let text = fs::read_to_string(&csv).unwrap();
    fs::remove_file(&csv).ok();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,side,re_g,im_g,re_resolvent,im_resolvent"
    );
    // One row per node on each side, junction sampled from both sides.
    assert_eq!(lines.count(), 2 * (2048 + 1));
}

#[test]
fn resolvent_rejects_wrong_family_and_refuses_near_spectrum() {
    let wrong_family = run(&[
        "resolvent",
        "--model",
        DIRICHLET_DISCRETE,
        "--lambda",
        "2,1.5",
    ]);
    assert_eq!(code(&wrong_family), 2);
    assert!(stderr_str(&wrong_family).contains("separated"));

    let at_origin = run(&["resolvent", "--model", SEPARATED_GENERIC, "--lambda", "0,0"]);
    assert_eq!(code(&at_origin), 3);

    let bad_profile = run(&[
        "resolvent",
        "--model",
        SEPARATED_GENERIC,
        "--lambda",
        "2,1.5",
        "--g",
        "sawtooth",
    ]);
    assert_eq!(code(&bad_profile), 2);
}
