//! End-to-end tests driving the installed binary: exit codes, exact
//! output, and round-trips between the CLI's files and the library's
//! in-memory results.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sdom::constructions::example_counter_pair;
use sdom::dist::{distribution_from_json, distribution_to_json};
use sdom::dominance::{check_nsd_interval, check_nsd_real, iterated_cdf_at, verdict_to_json};
use sdom::dual::{mixture_eu, mixture_from_json};
use sdom::exactalg::{parse_rational, rat, rat_int};

fn sdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdom"))
        .args(args)
        .output()
        .expect("binary must spawn")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Writes the canonical constructed pair through the CLI and returns the
/// x.json / y.json paths.
fn constructed_example(dir: &Path) -> (PathBuf, PathBuf) {
    let out = sdom(&[
        "construct",
        "example1",
        "--eps",
        "1/100",
        "--out-dir",
        path_str(dir),
    ]);
    assert_eq!(out.status.code(), Some(0));
    (dir.join("x.json"), dir.join("y.json"))
}

#[test]
fn check_reproduces_library_verdicts_after_file_round_trip() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (x_path, y_path) = constructed_example(dir.path());
    let (x, y) = (path_str(&x_path), path_str(&y_path));

    // The files parse back into the same distributions the library built.
    let pair = example_counter_pair(rat(1, 100)).expect("eps in range");
    let x_read = distribution_from_json(&std::fs::read_to_string(&x_path).unwrap()).unwrap();
    let y_read = distribution_from_json(&std::fs::read_to_string(&y_path).unwrap()).unwrap();
    assert_eq!(x_read, pair.x);
    assert_eq!(y_read, pair.y);

    // Real line: holds, exit 0.
    let real = sdom(&["check", "--order", "4", "--real", x, y]);
    assert_eq!(real.status.code(), Some(0));
    assert!(stdout_of(&real).contains("holds: true"));

    // Tight interval: fails, exit 1, JSON identical to the library's.
    let tight = sdom(&[
        "check",
        "--order",
        "4",
        "--interval",
        "0",
        "1",
        "--json",
        x,
        y,
    ]);
    assert_eq!(tight.status.code(), Some(1));
    let expected =
        check_nsd_interval(&pair.x, &pair.y, 4, &rat_int(0), &rat_int(1)).expect("supports fit");
    assert_eq!(stdout_of(&tight).trim_end(), verdict_to_json(&expected));

    // Wide interval: holds, exit 0.
    let wide = sdom(&["check", "--order", "4", "--interval", "0", "2", x, y]);
    assert_eq!(wide.status.code(), Some(0));
}

#[test]
fn verdict_json_reverifies_through_the_witness_subcommand() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (x_path, y_path) = constructed_example(dir.path());
    let (x, y) = (path_str(&x_path), path_str(&y_path));

    let checked = sdom(&[
        "check",
        "--order",
        "4",
        "--interval",
        "0",
        "1",
        "--json",
        x,
        y,
    ]);
    let verdict_path = dir.path().join("verdict.json");
    std::fs::write(&verdict_path, checked.stdout).expect("write verdict");
    let v = path_str(&verdict_path);

    let verified = sdom(&[
        "witness",
        "--verdict",
        v,
        "--order",
        "4",
        "--interval",
        "0",
        "1",
        x,
        y,
    ]);
    assert_eq!(verified.status.code(), Some(0));
    assert!(stdout_of(&verified).contains("verified"));

    // Swapping the pair makes the stored verdict stale: exit 1.
    let mismatched = sdom(&[
        "witness",
        "--verdict",
        v,
        "--order",
        "4",
        "--interval",
        "0",
        "1",
        y,
        x,
    ]);
    assert_eq!(mismatched.status.code(), Some(1));
    assert!(stdout_of(&mismatched).contains("mismatch"));

    // A corrupted verdict file is an input error: exit 2.
    std::fs::write(&verdict_path, "{\"holds\": false}").expect("write verdict");
    let corrupt = sdom(&[
        "witness",
        "--verdict",
        v,
        "--order",
        "4",
        "--interval",
        "0",
        "1",
        x,
        y,
    ]);
    assert_eq!(corrupt.status.code(), Some(2));
}

#[test]
fn bad_inputs_exit_2() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (x_path, y_path) = constructed_example(dir.path());
    let (x, y) = (path_str(&x_path), path_str(&y_path));

    // Missing file.
    let missing = sdom(&[
        "check",
        "--order",
        "4",
        "--interval",
        "0",
        "1",
        x,
        "missing.json",
    ]);
    assert_eq!(missing.status.code(), Some(2));

    // Malformed distribution JSON.
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, "{}").expect("write file");
    let malformed = sdom(&["check", "--order", "4", "--real", x, path_str(&bad_path)]);
    assert_eq!(malformed.status.code(), Some(2));

    // Order below 1.
    let zero_order = sdom(&["check", "--order", "0", "--real", x, y]);
    assert_eq!(zero_order.status.code(), Some(2));

    // Degenerate interval.
    let degenerate = sdom(&["check", "--order", "4", "--interval", "1", "1", x, y]);
    assert_eq!(degenerate.status.code(), Some(2));

    // Mean-preserving degree above order - 1.
    let bad_degrees = sdom(&["check", "--order", "4", "--mpres", "4", "--real", x, y]);
    assert_eq!(bad_degrees.status.code(), Some(2));

    // Support outside the reference interval.
    let outside = sdom(&["check", "--order", "4", "--interval", "0", "1/2", x, y]);
    assert_eq!(outside.status.code(), Some(2));

    // Missing scope flag is a usage error (clap exits 2).
    let no_scope = sdom(&["check", "--order", "4", x, y]);
    assert_eq!(no_scope.status.code(), Some(2));
}

#[test]
fn boundary_table_matches_shifted_moments_exactly() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (x_path, y_path) = constructed_example(dir.path());

    let out = sdom(&[
        "boundary",
        "--order",
        "3",
        "--at",
        "1",
        path_str(&x_path),
        path_str(&y_path),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let pair = example_counter_pair(rat(1, 100)).expect("eps in range");
    let b = rat_int(1);
    let mut expected = String::from("boundary conditions at b = 1\n");
    for k in 1..=3u32 {
        let lhs = pair.x.shifted_moment(&b, k - 1);
        let rhs = pair.y.shifted_moment(&b, k - 1);
        let state = if lhs <= rhs { "ok" } else { "violated" };
        expected.push_str(&format!(
            "k={k} lhs={lhs} rhs={rhs} gap={} {state}\n",
            &lhs - &rhs
        ));
    }
    assert_eq!(stdout_of(&out), expected);
}

#[test]
fn eval_prints_exact_expected_utility_and_gap_curve() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (x_path, y_path) = constructed_example(dir.path());
    let pair = example_counter_pair(rat(1, 100)).expect("eps in range");

    // Expected utility of a mixture, machine-readable exact rational.
    let mixture_text = r#"{
        "order": 4,
        "affine": { "c0": "0", "c1": "1" },
        "terms": [ { "weight": "1/2", "eta": "1" } ]
    }"#;
    let u_path = dir.path().join("u.json");
    std::fs::write(&u_path, mixture_text).expect("write mixture");
    let eu = sdom(&["eval", "--mixture", path_str(&u_path), path_str(&x_path)]);
    assert_eq!(eu.status.code(), Some(0));
    let u = mixture_from_json(mixture_text).expect("valid mixture");
    assert_eq!(
        stdout_of(&eu).trim_end(),
        mixture_eu(&pair.x, &u).to_string()
    );

    // Gap curve: header plus exact samples matching the library.
    let curve = sdom(&[
        "eval",
        "--curve",
        "--order",
        "4",
        "--from",
        "0",
        "--to",
        "2",
        "--samples",
        "8",
        path_str(&x_path),
        path_str(&y_path),
    ]);
    assert_eq!(curve.status.code(), Some(0));
    let text = stdout_of(&curve);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eta,diff"));
    let mut rows = 0;
    for line in lines {
        let (eta_text, diff_text) = line.split_once(',').expect("two columns");
        let eta = parse_rational(eta_text).expect("exact eta");
        let diff = parse_rational(diff_text).expect("exact diff");
        let oracle = iterated_cdf_at(&pair.y, 4, &eta) - iterated_cdf_at(&pair.x, 4, &eta);
        assert_eq!(diff, oracle);
        rows += 1;
    }
    assert_eq!(rows, 9);
}

#[test]
fn construct_rescale_and_gamma_write_checkable_pairs() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (x_path, y_path) = constructed_example(dir.path());

    // Rescale [0,1] -> [0,2]: the boundary failure survives with its gap
    // scaled by the square of the stretch factor.
    let rescaled_dir = dir.path().join("rescaled");
    let rescale = sdom(&[
        "construct",
        "rescale",
        "--a",
        "0",
        "--b",
        "1",
        "--c",
        "0",
        "--d",
        "2",
        "--out-dir",
        path_str(&rescaled_dir),
        path_str(&x_path),
        path_str(&y_path),
    ]);
    assert_eq!(rescale.status.code(), Some(0));
    let rx = rescaled_dir.join("x.json");
    let ry = rescaled_dir.join("y.json");
    let checked = sdom(&[
        "check",
        "--order",
        "4",
        "--interval",
        "0",
        "2",
        "--json",
        path_str(&rx),
        path_str(&ry),
    ]);
    assert_eq!(checked.status.code(), Some(1));
    let verdict: serde_json::Value =
        serde_json::from_str(&stdout_of(&checked)).expect("valid JSON");
    assert_eq!(verdict["witness"]["kind"], "boundary");
    assert_eq!(verdict["witness"]["k"], 3);
    let lhs = parse_rational(verdict["witness"]["lhs"].as_str().unwrap()).unwrap();
    let rhs = parse_rational(verdict["witness"]["rhs"].as_str().unwrap()).unwrap();
    assert_eq!(lhs - rhs, rat(341, 18225));

    // Gamma construction: order-4 dominance separates [0,9] from [0,10].
    let gamma_dir = dir.path().join("gamma");
    let gamma = sdom(&[
        "construct",
        "gamma",
        "--m",
        "1/10",
        "--c",
        "9",
        "--d",
        "10",
        "--out-dir",
        path_str(&gamma_dir),
    ]);
    assert_eq!(gamma.status.code(), Some(0));
    let gx = gamma_dir.join("x.json");
    let gy = gamma_dir.join("y.json");
    let narrow = sdom(&[
        "check",
        "--order",
        "4",
        "--interval",
        "0",
        "9",
        path_str(&gx),
        path_str(&gy),
    ]);
    assert_eq!(narrow.status.code(), Some(1));
    let broad = sdom(&[
        "check",
        "--order",
        "4",
        "--interval",
        "0",
        "10",
        path_str(&gx),
        path_str(&gy),
    ]);
    assert_eq!(broad.status.code(), Some(0));

    // Invalid endpoints are an input error.
    let inverted = sdom(&[
        "construct",
        "gamma",
        "--m",
        "1/10",
        "--c",
        "10",
        "--d",
        "9",
        "--out-dir",
        path_str(&gamma_dir),
    ]);
    assert_eq!(inverted.status.code(), Some(2));
}

#[test]
fn scan_is_deterministic_and_writes_recheckable_witnesses() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(
        &cfg_path,
        r#"{
            "seed": 11,
            "trials": 40,
            "interval": { "lo": "0", "hi": "1" },
            "orders": [1, 4]
        }"#,
    )
    .expect("write config");
    let cfg = path_str(&cfg_path);

    let first = sdom(&["scan", "--config", cfg, "--json"]);
    let second = sdom(&["scan", "--config", cfg, "--json"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let csv = sdom(&["scan", "--config", cfg, "--csv"]);
    assert!(stdout_of(&csv).starts_with("n,m,pair,both_hold,both_fail,tight_only,loose_only"));

    // The injected trial 0 is a discrepancy pair; its files re-check.
    let wit_dir = dir.path().join("wit");
    let with_pairs = sdom(&["scan", "--config", cfg, "--out-dir", path_str(&wit_dir)]);
    assert_eq!(with_pairs.status.code(), Some(0));
    let x = distribution_from_json(
        &std::fs::read_to_string(wit_dir.join("witness-0-x.json")).expect("witness written"),
    )
    .expect("valid distribution");
    let y = distribution_from_json(
        &std::fs::read_to_string(wit_dir.join("witness-0-y.json")).expect("witness written"),
    )
    .expect("valid distribution");
    assert!(check_nsd_real(&x, &y, 4).holds());
    assert!(!check_nsd_interval(&x, &y, 4, &rat_int(0), &rat_int(1))
        .expect("supports fit")
        .holds());

    // Re-serializing the parsed witnesses is lossless.
    assert_eq!(
        distribution_from_json(&distribution_to_json(&x)).expect("own output"),
        x
    );
}

#[test]
fn construct_params_sidecar_records_family_and_parameters() {
    let dir = tempfile::tempdir().expect("tempdir");
    constructed_example(dir.path());
    let sidecar: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("params.json")).expect("sidecar written"),
    )
    .expect("valid JSON");
    assert_eq!(sidecar["family"], "example1");
    assert_eq!(sidecar["params"]["eps"], "1/100");
}
