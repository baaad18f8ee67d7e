use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn header() -> String {
    std::fs::read_to_string(crate_dir().join("include/lsq_stability.h")).expect("generated header")
}

#[test]
fn header_declares_every_export() {
    let h = header();
    for symbol in [
        "lsq_last_error_message",
        "lsq_basis_new",
        "lsq_basis_free",
        "lsq_basis_eval",
        "lsq_basis_christoffel_k",
        "lsq_condition_number",
        "lsq_least_squares_fit",
        "lsq_sample_iid",
        "lsq_b_exact",
        "lsq_witness_lower_bound",
        "typedef struct LsqBasis LsqBasis;",
        "LSQ_STATUS_OK = 0",
        "LSQ_STATUS_DOMAIN = 2",
        "LSQ_WITNESS_CASE_II = 2",
    ] {
        assert!(h.contains(symbol), "missing {symbol}");
    }
    assert!(h.starts_with("#ifndef LSQ_STABILITY_H"));
}

/// Directory holding the static library built alongside this test binary.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "lsq_stability.h"

int main(void) {
    LsqBasis *b = NULL;
    if (lsq_basis_new(0.0, 0.0, 3, &b) != LSQ_STATUS_OK) return 1;
    double k = 0.0;
    if (lsq_basis_christoffel_k(b, &k) != LSQ_STATUS_OK) return 2;
    lsq_basis_free(b);
    if (k < 16.0 - 1e-9 || k > 16.0 + 1e-9) return 3;
    if (lsq_basis_new(-2.0, 0.0, 3, &b) != LSQ_STATUS_DOMAIN) return 4;
    if (strcmp(lsq_last_error_message(), "alpha must exceed -1") != 0) return 5;
    double pts[3] = {-1.0, 0.0, 1.0};
    double v = 0.0;
    if (lsq_b_exact(pts, 3, 2, 64, &v) != LSQ_STATUS_OK) return 6;
    printf("%.6f\n", v);
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let dir = artifact_dir();
    let lib = dir.join("liblsq_stability_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let tmp = tempdir();
    let src = tmp.join("main.c");
    let exe = tmp.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1.250000");
}

fn tempdir() -> PathBuf {
    let p = Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("c-abi-{}", std::process::id()));
    std::fs::create_dir_all(&p).unwrap();
    p
}
