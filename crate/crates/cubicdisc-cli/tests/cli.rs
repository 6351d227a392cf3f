//! End-to-end checks of the command-line surface and its exit codes.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubicdisc"))
}

fn write_temp(name: &str, content: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("cubicdisc-test-{}-{}", std::process::id(), name));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(content.as_bytes()).unwrap();
    path
}

const FERMAT: &str = "vars x0 x1 x2 x3\nfield Q\n1 ; 3 0 0 0\n1 ; 0 3 0 0\n1 ; 0 0 3 0\n1 ; 0 0 0 3\n";
const CAYLEY: &str = "vars x0 x1 x2 x3\nfield Q\n1 ; 1 1 1 0\n1 ; 1 1 0 1\n1 ; 1 0 1 1\n1 ; 0 1 1 1\n";
const DIAG_QUADS: &str = "vars x0 x1 x2 x3\nfield Fp:32003\n1 ; 2 0 0 0\n--\n1 ; 0 2 0 0\n--\n1 ; 0 0 2 0\n--\n1 ; 0 0 0 2\n";

#[test]
fn disc_fermat_rank_20_nonzero() {
    let path = write_temp("fermat", FERMAT);
    let out = bin().arg("disc").arg(&path).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rank"], 20);
    assert_eq!(v["discriminant_is_zero"], false);
    // 3^32: the partials of the Fermat cubic are 3 x_i^2
    assert_eq!(v["discriminant"], "1853020188851841");
}

#[test]
fn disc_cayley_vanishes() {
    let path = write_temp("cayley", CAYLEY);
    let out = bin().arg("disc").arg(&path).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["discriminant_is_zero"], true);
}

#[test]
fn res_diagonal_all_methods_one() {
    let path = write_temp("diag", DIAG_QUADS);
    let out = bin().arg("res").arg(&path).arg("--method").arg("all").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pfaffian"], "1");
    assert_eq!(v["nanson"], "1");
    assert_eq!(v["macaulay"], "1");
    assert_eq!(v["ratios"]["pfaffian/nanson"], "1");
}

#[test]
fn malformed_input_exits_2() {
    let path = write_temp("bad", "vars x0 x1\nfield Q\nnot a term\n");
    let out = bin().arg("disc").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let missing = bin().arg("disc").arg("/no/such/file").output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn unknown_method_exits_2() {
    let path = write_temp("diag2", DIAG_QUADS);
    let out = bin().arg("res").arg(&path).arg("--method").arg("bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn slice_is_deterministic_for_fixed_seed() {
    let out_a = std::env::temp_dir().join(format!("cubicdisc-slice-a-{}", std::process::id()));
    let out_b = std::env::temp_dir().join(format!("cubicdisc-slice-b-{}", std::process::id()));
    for out in [&out_a, &out_b] {
        let st = bin()
            .args(["slice", "--dim", "2", "--seed", "9"])
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert!(st.status.success());
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn verify_core_passes() {
    let out = bin()
        .args(["verify", "--suite", "core", "--format", "text"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn disc_binodal_rank_drops() {
    // all twelve binodal normal-form coefficients equal to 1
    let binodal = "vars x0 x1 x2 x3\nfield Q\n\
1 ; 1 2 0 0\n1 ; 1 1 1 0\n1 ; 1 1 0 1\n1 ; 1 0 2 0\n1 ; 1 0 1 1\n\
1 ; 0 3 0 0\n1 ; 0 2 1 0\n1 ; 0 1 2 0\n1 ; 0 1 1 1\n1 ; 0 2 0 1\n\
1 ; 0 0 3 0\n1 ; 0 0 2 1\n";
    let path = write_temp("binodal", binodal);
    let out = bin().arg("disc").arg(&path).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["rank"].as_u64().unwrap() <= 18);
    assert_eq!(v["discriminant_is_zero"], true);
    assert_eq!(v["flags"][1], true); // rank <= 18
}
