use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn orbitsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitsat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

#[test]
fn classify_kronecker() {
    let o = orbitsat(&["classify", "--quiver", &fixture("theta2.quiver")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Euclidean Ã1");
    let o = orbitsat(&["classify", "--fixture", "kron3"]);
    assert_eq!(stdout(&o).trim(), "Wild");
}

#[test]
fn member_non_member_and_witness() {
    let skew = fixture("skew.rep");
    let o = orbitsat(&[
        "orbit", "member", "--rep", &skew, "--weight", "1,-1", "--mode", "symbolic",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("NotMember (certified: zero polynomial)"),
        "{}",
        stdout(&o)
    );

    let o = orbitsat(&["orbit", "member", "--rep", &skew, "--weight", "1,-1"]);
    assert!(stdout(&o).starts_with("ProbablyNotMember"), "{}", stdout(&o));
    let o = orbitsat(&["orbit", "member", "--rep", &skew, "--weight", "1,-1", "--escalate"]);
    assert!(stdout(&o).starts_with("NotMember (certified"), "{}", stdout(&o));

    let o = orbitsat(&["orbit", "member", "--rep", &skew, "--weight", "2,-2"]);
    let out = stdout(&o);
    assert!(out.starts_with("Member"), "{out}");
    assert!(out.contains("witness\nrep kron3.quiver dim 2,4"), "{out}");
}

#[test]
fn thin_count_and_membership() {
    let o = orbitsat(&[
        "thin",
        "count",
        "--quiver",
        &fixture("theta2.quiver"),
        "--weight",
        "2,-2",
    ]);
    assert_eq!(stdout(&o).trim(), "3");

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a3.quiver"), "v 1\nv 2\nv 3\na x 1 2\na y 2 3\n").unwrap();
    let rep = dir.path().join("a3.rep");
    std::fs::write(&rep, "rep a3.quiver dim 1,1,1\nm x\n2\nm y\n3\n").unwrap();
    let rep = rep.to_string_lossy();
    let o = orbitsat(&["thin", "member", "--rep", &rep, "--weight", "1,0,-1"]);
    assert_eq!(stdout(&o), "Member\nflow 1,1\nmonomial t_x*t_y\nvalue 6\n");
    let o = orbitsat(&["thin", "member", "--rep", &rep, "--weight", "1,-1,1"]);
    assert_eq!(stdout(&o).trim(), "NotMember (certified: infeasible-flow)");
}

#[test]
fn scan_writes_certificates_that_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("certs.txt");
    let skew = fixture("skew.rep");
    let o = orbitsat(&[
        "orbit",
        "scan",
        "--rep",
        &skew,
        "--box",
        "2",
        "--nmax",
        "3",
        "--cert",
        &cert.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certificates 1"), "{}", stdout(&o));

    let o = orbitsat(&[
        "orbit",
        "verify-certificate",
        "--rep",
        &skew,
        "--cert",
        &cert.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("weight 1,-1 multiple 2: witness ok"));

    // The same evidence does not certify a different weight.
    let text = std::fs::read_to_string(&cert)
        .unwrap()
        .replacen("weight 1,-1", "weight 1,-2", 1);
    std::fs::write(&cert, text).unwrap();
    let o = orbitsat(&[
        "orbit",
        "verify-certificate",
        "--rep",
        &skew,
        "--cert",
        &cert.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(orbitsat(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        orbitsat(&["classify", "--quiver", "/nonexistent/q"]).status.code(),
        Some(2)
    );
    let o = orbitsat(&["orbit", "member", "--rep", &fixture("skew.rep"), "--weight", "1,2,3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn precondition_errors_exit_three() {
    let o = orbitsat(&[
        "reflect",
        "--fixture",
        "kron3",
        "--vertex",
        "1",
        "--rep",
        &fixture("skew.rep"),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn exceptional_fixture_reaches_kronecker() {
    let o = orbitsat(&["exceptional", "--fixture", "b"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).ends_with("terminal quiver: three-arrow Kronecker\n"),
        "{}",
        stdout(&o)
    );
    let o = orbitsat(&["exceptional", "--fixture", "kron3", "--alpha", "1,0", "--alpha", "0,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reference_checks_single_item() {
    let o = orbitsat(&["verify-paper", "--only", "zwara"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS zwara"));
}

#[test]
fn reference_checks_detect_corrupted_skew() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("sym.rep");
    let text = std::fs::read_to_string(fixtures().join("skew.rep"))
        .unwrap()
        .replace("-1", "1");
    std::fs::write(&rep, text).unwrap();
    let o = orbitsat(&["verify-paper", "--only", "kron3", "--rep", &rep.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("FAIL kron3"));
}

#[test]
fn output_is_deterministic() {
    let args = ["candecomp", "--fixture", "kron3", "--alpha", "2,3", "--seed", "9"];
    let a = orbitsat(&args);
    let b = orbitsat(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = [
        "orbit",
        "member",
        "--rep",
        &fixture("skew.rep"),
        "--weight",
        "3,-3",
        "--seed",
        "5",
    ];
    assert_eq!(orbitsat(&args).stdout, orbitsat(&args).stdout);
}
