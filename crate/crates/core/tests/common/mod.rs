#![allow(dead_code)]

pub mod finsler;

use std::process::Command;

/// Runs the built binary; returns (code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kropina")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

pub fn cli_json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = cli(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\nstdout: {out}\nstderr: {err}"));
    (code, v)
}

pub fn check_value(report: &serde_json::Value, name: &str) -> f64 {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["value"]
        .as_f64()
        .unwrap_or(f64::INFINITY)
}

/// One invocation per documented example, with its exit code.
pub const INVOCATIONS: &[&[&str]] = &[
    &["inspect", "--builtin", "so_n", "--param", "n=4"],
    &["inspect", "--builtin", "r3_abelian"],
    &["ricci", "--builtin", "so_n", "--param", "n=3"],
    &["ricci", "--builtin", "su2_diag", "--param", "1,2,3"],
    &["ricci", "--builtin", "e0tilde2", "--param", "nu=2", "--oracle"],
    &["killing", "--builtin", "e0tilde2", "--param", "nu=3"],
    &["killing", "--builtin", "r3_abelian"],
    &["killing", "--builtin", "su2_diag", "--param", "1,2,3"],
    &["verify", "--builtin", "so_n", "--param", "n=3", "--w", "W_thm3", "--w-kind", "right", "--samples", "20"],
    &["verify", "--builtin", "e0tilde2", "--param", "nu=1", "--w", "W_thm3", "--w-kind", "left"],
    &["verify", "--builtin", "su2_diag", "--param", "1,2,3", "--w", "1,0,0"],
    &["classify3d"],
    &["homog", "--builtin", "sphere_u", "--param", "n=1", "--w", "hopf"],
    &["homog", "--builtin", "sphere_so", "--param", "n=2"],
];

pub const EXPECTED_CODES: &[i32] = &[0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 2, 0, 0, 2];

