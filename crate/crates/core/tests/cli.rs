//! End-to-end tests of the compiled binary: exit codes, JSON shapes,
//! determinism, and the documented failure paths.

use std::path::Path;
use std::process::{Command, Output};

use sigma_mpc::gf::FieldSpec;
use sigma_mpc::linalg::FqMatrix;
use sigma_mpc::quasi;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sigma-mpc"));
    // Keep every invocation hermetic regardless of the outer shell.
    cmd.env_remove("SIGMA_MPC_BUDGET");
    cmd.env_remove("SIGMA_MPC_CATALOG");
    cmd
}

fn run_ok(args: &[&str]) -> serde_json::Value {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}: stdout={} stderr={}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    parse_stdout(&out)
}

fn parse_stdout(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_json(path: &Path, v: &serde_json::Value) {
    std::fs::write(path, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

#[test]
fn field_inspection_reports_pairing_parameters() {
    let v = run_ok(&["field", "--q", "9", "--e", "1"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["order"], 9);
    assert_eq!(v["field"]["p"], 3);
    assert_eq!(v["field"]["h"], 2);
    assert_eq!(v["pairing"]["r"], 2);
    assert_eq!(v["pairing"]["g"], 2);

    let w = run_ok(&["field", "--p", "3", "--h", "2"]);
    assert_eq!(w["field"]["modulus"], v["field"]["modulus"]);
}

#[test]
fn nsc_failure_exits_two_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    write_json(
        &path,
        &serde_json::json!({
            "field": {"q": 9},
            "matrix": {"rows": 2, "cols": 2, "entries": [["0","0"],["0","0"]]},
        }),
    );
    let out = bin()
        .args(["nsc", "--in", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v = parse_stdout(&out);
    assert_eq!(v["is_nsc"], false);
    assert_eq!(v["witness"]["ell"], 1);
}

#[test]
fn malformed_input_reports_json_error_on_stderr() {
    let out = bin()
        .args(["nsc", "--in", "/nonexistent/file.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["exit_code"], 3);
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("cannot read"));
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let args = [
        "quasi", "sample", "--q", "9", "--s", "2", "--e", "1", "--trials", "200", "--seed", "42",
    ];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");
    let v = parse_stdout(&a);
    assert_eq!(v["trials"], 200);
    assert!(v["successes"].as_u64().unwrap() > 0);

    let c = bin()
        .args([
            "quasi", "sample", "--q", "9", "--s", "2", "--e", "1", "--trials", "200", "--seed",
            "43",
        ])
        .output()
        .unwrap();
    assert_ne!(a.stdout, c.stdout, "different seeds must differ");
}

#[test]
fn lift_runs_on_a_matrix_file() {
    let f = FieldSpec::new(3, 4, None).unwrap();
    let w = |k: i64| f.format_element(f.omega_pow(k));
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.json");
    let m_path = dir.path().join("m.json");
    write_json(
        &a_path,
        &serde_json::json!({
            "field": {"q": 81},
            "matrix": {"rows": 3, "cols": 3, "entries": [
                [w(10), w(50), w(20)],
                [w(30), w(10), w(50)],
                [w(0),  w(30), w(10)],
            ]},
        }),
    );
    write_json(
        &m_path,
        &serde_json::json!({
            "matrix": {"rows": 3, "cols": 3, "entries": [
                ["0", w(10), "0"],
                [w(40), "0", "0"],
                ["0", "0", w(60)],
            ]},
        }),
    );
    let v = run_ok(&[
        "quasi",
        "lift",
        "--in",
        a_path.to_str().unwrap(),
        "--m-tilde",
        m_path.to_str().unwrap(),
        "--e",
        "3",
    ]);
    assert_eq!(v["diagonal"], serde_json::json!(["1", "w^40", "1"]));
}

#[test]
fn constructions_verify_and_distance_compose_through_files() {
    let dir = tempfile::tempdir().unwrap();
    // Deterministically find a lift over F_9 to define the product.
    let f = FieldSpec::new(3, 2, None).unwrap();
    let report = quasi::sampling_campaign(
        &f,
        3,
        &FqMatrix::identity(&f, 3),
        1,
        64,
        7,
        1,
        sigma_mpc::DEFAULT_NSC_RETRY_LIMIT,
    )
    .unwrap();
    let a = &report.hits[0].matrix;
    let inst = dir.path().join("inst.json");
    let code = serde_json::json!({"generator": {"rows": 1, "cols": 2, "entries": [["1","w"]]}});
    write_json(
        &inst,
        &serde_json::json!({
            "field": {"q": 9},
            "matrix": a.to_json(),
            "inputs": [code, code, code],
            "inner": "hermitian",
        }),
    );
    let built = run_ok(&["construct", "ii", "--in", inst.to_str().unwrap()]);
    assert_eq!(built["claimed_dim"], 3);
    assert_eq!(built["certificate"]["kind"], "lifted_quasi_diagonal");

    // Feed the emitted code and isometry straight back into verify.
    let verify_in = dir.path().join("verify.json");
    write_json(
        &verify_in,
        &serde_json::json!({
            "field": {"q": 9},
            "code": {"generator": built["code"]["code"]["generator"]},
            "sigma": built["sigma"],
        }),
    );
    let verdict = run_ok(&["verify", "--in", verify_in.to_str().unwrap()]);
    assert_eq!(verdict["self_orthogonal"], true);

    let dist_in = dir.path().join("dist.json");
    write_json(
        &dist_in,
        &serde_json::json!({
            "field": {"q": 9},
            "code": {"generator": built["code"]["code"]["generator"]},
        }),
    );
    let dist = run_ok(&["distance", "--in", dist_in.to_str().unwrap()]);
    assert_eq!(dist["distance"].as_u64().unwrap(), 2);
    assert!(dist["distance"].as_u64().unwrap() >= built["claimed_d_bound"].as_u64().unwrap());
}

#[test]
fn construction_precondition_failures_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.json");
    // A full [2,2] input is not Hermitian self-orthogonal, so the
    // blockwise certificate must fail.
    let code = serde_json::json!({"generator": {"rows": 2, "cols": 2, "entries": [["1","0"],["0","1"]]}});
    write_json(
        &inst,
        &serde_json::json!({
            "field": {"q": 9},
            "matrix": {"rows": 1, "cols": 1, "entries": [["1"]]},
            "inputs": [code],
            "inner": "hermitian",
        }),
    );
    let out = bin()
        .args(["construct", "ii", "--in", inst.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("block self-orthogonality"));
}

#[test]
fn budget_exhaustion_exits_four_naming_the_knob() {
    let dir = tempfile::tempdir().unwrap();
    let dist_in = dir.path().join("big.json");
    write_json(
        &dist_in,
        &serde_json::json!({
            "field": {"q": 9},
            "code": {"generator": {"rows": 3, "cols": 6, "entries": [
                ["1","0","0","1","w","0"],
                ["0","1","0","0","1","w"],
                ["0","0","1","w","0","1"],
            ]}},
        }),
    );
    let out = bin()
        .args(["distance", "--in", dist_in.to_str().unwrap(), "--budget", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    let msg = err["error"]["message"].as_str().unwrap();
    assert!(msg.contains("budget"), "{msg}");
}

#[test]
fn reproduce_items_run_and_unknown_items_fail_cleanly() {
    let v = run_ok(&["reproduce", "example_tauod_f8"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["representation"], "canonical");

    let listed = run_ok(&["reproduce", "--list"]);
    assert!(listed["items"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x == "table5"));

    let out = bin().args(["reproduce", "table9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reproduce_table2_accepts_row_overrides() {
    let v = run_ok(&[
        "reproduce", "table2", "--base-q", "3", "--s", "3", "--trials", "600", "--seed", "9",
    ]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["item"], "table2");
}

#[test]
fn catalog_roundtrip_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("catalog.jsonl");
    let cat_s = cat.to_str().unwrap();

    // Produce a certified lift over F_9 and store it.
    let f = FieldSpec::new(3, 2, None).unwrap();
    let report = quasi::sampling_campaign(
        &f,
        2,
        &FqMatrix::identity(&f, 2),
        1,
        64,
        5,
        1,
        sigma_mpc::DEFAULT_NSC_RETRY_LIMIT,
    )
    .unwrap();
    let hit = &report.hits[0];
    let m_path = dir.path().join("m.json");
    let c_path = dir.path().join("c.json");
    write_json(
        &m_path,
        &serde_json::json!({"field": {"q": 9}, "matrix": hit.lift.lifted.to_json()}),
    );
    write_json(&c_path, &serde_json::json!({"matrix": hit.lift.m_hat.to_json()}));

    let added = run_ok(&[
        "--catalog",
        cat_s,
        "catalog",
        "add",
        "--in",
        m_path.to_str().unwrap(),
        "--kind",
        "quasi",
        "--companion",
        c_path.to_str().unwrap(),
        "--e",
        "1",
        "--seed",
        "5",
        "--trial",
        "0",
    ]);
    assert_eq!(added["added"]["kind"], "quasi_unitary");

    let listed = run_ok(&["--catalog", cat_s, "catalog", "list"]);
    assert_eq!(listed["count"], 1);

    let clean = run_ok(&["--catalog", cat_s, "catalog", "check"]);
    assert_eq!(clean["valid"], 1);

    // Flip one matrix entry on disk; check must quarantine the record.
    let text = std::fs::read_to_string(&cat).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    v["matrix"]["entries"][0][0] = serde_json::json!("0");
    std::fs::write(&cat, serde_json::to_string(&v).unwrap() + "\n").unwrap();
    let out = bin()
        .args(["--catalog", cat_s, "catalog", "check"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let rep = parse_stdout(&out);
    assert_eq!(rep["valid"], 0);
    assert_eq!(rep["quarantined"].as_array().unwrap().len(), 1);
    assert!(cat
        .with_file_name("catalog.jsonl.quarantine")
        .exists());
    // The catalog itself is now empty.
    let relisted = run_ok(&["--catalog", cat_s, "catalog", "list"]);
    assert_eq!(relisted["count"], 0);
}

#[test]
fn tau_od_reports_both_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    write_json(
        &good,
        &serde_json::json!({
            "field": {"q": 8},
            "matrix": {"rows": 3, "cols": 3, "entries": [
                ["1","w^2","w^3"],
                ["w^3","1","w^2"],
                ["w^2","w^3","1"],
            ]},
        }),
    );
    let v = run_ok(&["tau-od", "--in", good.to_str().unwrap()]);
    assert_eq!(v["is_monomial"], true);

    let bad = dir.path().join("bad.json");
    write_json(
        &bad,
        &serde_json::json!({
            "field": {"q": 64},
            "matrix": {"rows": 3, "cols": 3, "entries": [
                ["1","w^54","w^27"],
                ["w^36","1","w^54"],
                ["w^54","w^36","1"],
            ]},
        }),
    );
    let out = bin()
        .args(["tau-od", "--in", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(parse_stdout(&out)["is_monomial"], false);
}
