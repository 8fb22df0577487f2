//! End-to-end checks of the command-line surface: subcommands, exit codes,
//! machine-parsable errors, and byte-level determinism.

use mirrork::cli::run;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["mirrork".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn kzero_sign_agrees() {
    let (code, out, _) = run_cli(&["kzero", "catalog:sign"]);
    assert_eq!(code, 0);
    assert!(out.contains("Z + Z/2"));
    assert!(out.contains("verdict: AGREE"));
    // The group is printed once per route.
    assert_eq!(out.matches("Z + Z/2").count(), 3);
}

#[test]
fn cells_build_cubical_rejects_non_monomial() {
    let (code, _, err) = run_cli(&["cells", "build", "catalog:norm_one_cyclic3", "--backend", "cubical"]);
    assert_eq!(code, 3);
    assert!(err.starts_with("error: unsupported:"), "got: {err}");
    assert_eq!(err.lines().count(), 1, "one machine-parsable line");
}

#[test]
fn e2_sign_f3_has_z4_and_certificate() {
    let (code, out, _) = run_cli(&[
        "e2",
        "catalog:sign",
        "--preset",
        "ff:3,2",
        "--qmax",
        "3",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("Z/4"));
    assert!(out.contains("collapse: certified"));
    assert!(out.contains("gr K_2 = {Z/4 (p=1)}"));
}

#[test]
fn swan_preset_table() {
    let (code, out, _) = run_cli(&["swan", "--preset", "ff:3", "--nmax", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("Z + Z/2"));
    assert!(out.contains("Z/4"));
}

#[test]
fn catalog_list_contains_all_entries() {
    let (code, out, _) = run_cli(&["catalog", "list"]);
    assert_eq!(code, 0);
    for name in mirrork::catalog::names() {
        assert!(out.contains(name), "missing {name}");
    }
}

#[test]
fn missing_file_is_validation_error() {
    let (code, _, err) = run_cli(&["kzero", "/nonexistent/lattice.json"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: io:"));
}

#[test]
fn malformed_json_is_validation_error() {
    let dir = std::env::temp_dir().join("mirrork-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"version\": \"glattice/1\"").unwrap();
    let (code, _, err) = run_cli(&["lattice", "info", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: json:"));
}

#[test]
fn lattice_from_file_runs_pipeline() {
    let dir = std::env::temp_dir().join("mirrork-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sign.json");
    std::fs::write(
        &path,
        r#"{
            "version": "glattice/1",
            "group": {"order": 2, "table": [[0, 1], [1, 0]]},
            "lattice": {"rank": 1, "action": {"1": [[-1]]}}
        }"#,
    )
    .unwrap();
    let (code, out, _) = run_cli(&["kzero", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("AGREE"));
}

#[test]
fn mackey_file_coefficients() {
    let dir = std::env::temp_dir().join("mirrork-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("mackey.json");
    // K₁ data of F₉/F₃ in the mackey/1 schema.
    std::fs::write(
        &path,
        r#"{
            "version": "mackey/1",
            "classes": [[0], [0, 1]],
            "objects": [[0, [8]], [0, [2]]],
            "restrictions": [{"sub": 0, "sup": 1, "matrix": [[4]]}],
            "transfers": [{"sub": 0, "sup": 1, "matrix": [[1]]}],
            "conjugations": [{"element": 1, "class": 0, "matrix": [[3]]}]
        }"#,
    )
    .unwrap();
    let (code, out, _) = run_cli(&[
        "bredon",
        "catalog:sign",
        "--coeff",
        &format!("mackey:{}", path.display()),
    ]);
    assert_eq!(code, 0);
    // H₀ = coker(tr, -tr) = Z/2, H₁ = ker = Z/4.
    assert!(out.contains("H_0 = Z/2"));
    assert!(out.contains("H_1 = Z/4"));
}

#[test]
fn json_outputs_are_byte_identical_across_runs() {
    for args in [
        vec!["kzero", "catalog:norm_one_cyclic3", "--format", "json"],
        vec![
            "e2",
            "catalog:sign",
            "--preset",
            "ff:5,2",
            "--qmax",
            "4",
            "--format",
            "json",
        ],
        vec!["lattice", "info", "catalog:regular_c2", "--format", "json"],
        vec!["cells", "build", "catalog:sign_plus_sign", "--format", "json"],
    ] {
        let (c1, o1, _) = run_cli(&args);
        let (c2, o2, _) = run_cli(&args);
        assert_eq!(c1, 0);
        assert_eq!(c2, 0);
        assert_eq!(o1, o2, "non-deterministic output for {args:?}");
    }
}

#[test]
fn cells_export_writes_schema_file() {
    let dir = std::env::temp_dir().join("mirrork-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sign-complex.json");
    let (code, _, _) = run_cli(&[
        "cells",
        "build",
        "catalog:sign",
        "--export",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["version"], "eqcw/1");
    assert_eq!(v["rank"], 1);
}

#[test]
fn unknown_subcommand_is_validation_error() {
    let (code, _, err) = run_cli(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: validation:"));
}

#[test]
fn unknown_catalog_entry() {
    let (code, _, err) = run_cli(&["kzero", "catalog:nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown catalog entry"));
}
