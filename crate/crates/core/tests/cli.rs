use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_split-hecke"))
}

#[test]
fn divisibility_passes_with_exit_zero() {
    let out = bin().args(["verify", "divisibility", "--n", "1", "--q", "3", "--k", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["status"], "PASS");
    for field in ["check", "params", "status", "witness", "counts", "millis"] {
        assert!(r.get(field).is_some(), "missing {field}");
    }
}

#[test]
fn root_identity_n1() {
    let out = bin().args(["verify", "root", "--n", "1", "--q", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failing_check_exits_one() {
    let out = bin()
        .args(["verify", "congruence", "--n", "2", "--q", "3", "--variant", "plain", "--level", "h0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tight_cap_skips_with_exit_two() {
    let out = bin().args(["verify", "root", "--n", "2", "--q", "2", "--cap", "100"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["status"], "SKIP");
}

#[test]
fn malformed_matrix_exits_two() {
    let dir = std::env::temp_dir().join(format!("split-hecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "w 1 x\n0 1\nw\n").unwrap();
    let out = bin().args(["normal-form", "--n", "1", "--q", "3", "--matrix"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let good = dir.join("good.txt");
    std::fs::write(&good, "w, 1\n0, 1\nw\n").unwrap();
    let out = bin().args(["normal-form", "--n", "1", "--q", "3", "--matrix"]).arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("conductor: 1"));
}

#[test]
fn hecke_poly_against_fixture() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/v1/hecke_n2.txt");
    let out = bin().args(["hecke-poly", "--n", "2", "--fixture", fixture]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin().args(["hecke-poly", "--n", "1"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), "z^2 : 1\nz^1 : -T1V*T1W\nz^0 : s^2*T2V*T1W^2\n");
}

#[test]
fn usage_error_exits_two() {
    let out = bin().args(["verify", "root", "--n"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
