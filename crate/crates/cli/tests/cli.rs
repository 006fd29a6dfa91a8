use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_psu-designs"));
    c.env("PSU_DESIGNS_DATA", data());
    c
}

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn run(args: &[&str]) -> (i32, String) {
    let Output {
        status,
        stdout,
        stderr,
    } = bin().args(args).output().unwrap();
    let mut s = String::from_utf8(stdout).unwrap();
    s.push_str(&String::from_utf8(stderr).unwrap());
    (status.code().unwrap(), s)
}

#[test]
fn imprimitive_family_recomputes_both_rows() {
    let (code, out) = run(&["eliminate", "--family", "5", "--qmax", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("v: 1408"));
    assert!(out.contains("v: 8404641"));
    assert_eq!(out.matches("discrepancy: printed row").count(), 2);
}

#[test]
fn empty_family_range_is_reported() {
    let (code, out) = run(&["eliminate", "--family", "6", "--qmax", "2"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("== lemma 6 ==\nno valid cells for q <= 2"),
        "{out}"
    );
}

#[test]
fn bad_arguments_are_operational_errors() {
    assert_eq!(run(&["eliminate", "--qmax", "1"]).0, 1);
    assert_eq!(run(&["sieve", "--family", "12"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn shipped_design_verifies() {
    let d = data().join("designs/PSU_3_3_v36_k21_PSL_2_7_1.design");
    let g = data().join("psu3_3_deg36.txt");
    let (code, out) = run(&[
        "verify",
        "--design",
        d.to_str().unwrap(),
        "--generators",
        g.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("symmetric design (36,21,12)"));
    assert!(out.contains("flag-transitive true point-primitive true"));
}

#[test]
fn corrupted_block_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let text =
        std::fs::read_to_string(data().join("designs/PSU_3_3_v36_k21_PSL_2_7_1.design")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    // swap one point of block 5 for a point it lacks
    let mut pts: Vec<u32> = lines[5]
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    let missing = (1..=36).find(|x| !pts.contains(x)).unwrap();
    pts[0] = missing;
    lines[5] = pts.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let bad = dir.path().join("bad.design");
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let g = data().join("psu3_3_deg36.txt");
    let (code, out) = run(&[
        "verify",
        "--design",
        bad.to_str().unwrap(),
        "--generators",
        g.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL:"), "{out}");
}

#[test]
fn degree_mismatch_is_a_format_error() {
    let d = data().join("designs/PSU_3_3_v36_k21_PSL_2_7_1.design");
    let g = data().join("psu4_2_deg45.txt");
    let (code, out) = run(&[
        "verify",
        "--design",
        d.to_str().unwrap(),
        "--generators",
        g.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.contains("format error"), "{out}");
}

#[test]
fn json_is_deterministic() {
    for args in [
        &["--json", "sieve"][..],
        &["--json", "eliminate", "--qmax", "16"],
        &["--json", "catalog"],
    ] {
        let (c1, a) = run(args);
        let (c2, b) = run(args);
        assert_eq!((c1, c2), (0, 0), "{a}");
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], 1);
    }
}

#[test]
fn construct_one_design_and_verify_it() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let (code, out) = run(&[
        "construct",
        "--group",
        "PSU_4(2)",
        "--v",
        "45",
        "--out",
        out_dir,
    ]);
    assert_eq!(code, 0, "{out}");
    let file = dir.path().join("PSU_4_2_v45_k12_2_A_4xA_4_2_1.design");
    assert!(file.exists(), "{out}");
    let g = data().join("psu4_2_deg45.txt");
    let (code, out) = run(&[
        "verify",
        "--design",
        file.to_str().unwrap(),
        "--generators",
        g.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("(45,12,3)"));
}

#[test]
fn line_thirteen_design_needs_the_outer_automorphism() {
    let d = data().join("designs/PSU_3_3_v63_k32_4_2_S_3_1.design");
    let d = d.to_str().unwrap();
    let x = data().join("psu3_3_deg63b.txt");
    let x2 = data().join("psu3_3_deg63b_ext.txt");
    let (code, out) = run(&["verify", "--design", d, "--generators", x.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("flag-transitive false"), "{out}");
    let (code, _) = run(&[
        "verify",
        "--design",
        d,
        "--generators",
        x2.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
}
