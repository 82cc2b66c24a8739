use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.divide"))
}

fn divlink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divlink")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn counts_chord() {
    let o = divlink(&["counts", fixture("chord").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("δ=0 r=1 μ=0"));
}

#[test]
fn invariants_loop() {
    let o = divlink(&["invariants", fixture("loop").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("δ=1 r=1 μ=2 genus=1 gordian=1 Δ=t^2 - t + 1"), "{s}");
    assert!(s.contains("status: PASS"));
    assert!(!s.contains("FAIL"));
}

#[test]
fn sum_then_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("granny.divide");
    let lp = fixture("loop");
    let o = divlink(&["sum", lp.to_str().unwrap(), lp.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = divlink(&["invariants", out.to_str().unwrap()]);
    assert!(stdout(&o).contains("alexander_monodromy: t^4 - 2t^3 + 3t^2 - 2t + 1"), "{}", stdout(&o));
}

#[test]
fn header_echoes_configuration() {
    let o = divlink(&["--seed", "7", "--resolution", "80", "counts", fixture("hart").to_str().unwrap()]);
    let s = stdout(&o);
    assert!(s.contains("# seed: 0x7"));
    assert!(s.contains("# resolution: 80"));
}

#[test]
fn exit_codes() {
    assert_eq!(divlink(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(divlink(&["counts"]).status.code(), Some(2));
    assert_eq!(divlink(&["--seed", "zebra", "counts", "x"]).status.code(), Some(2));
    let o = divlink(&["counts", "/nonexistent/file.divide"]);
    assert_eq!(o.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.divide");
    std::fs::write(&bad, "divide v1\narc 1: (-1,0) (0,0.2) (0.3,0) (0.9,0)\n").unwrap();
    let o = divlink(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not on the unit circle"));
    let o = divlink(&["monodromy", fixture("disjoint-chords").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not connected"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let hart = fixture("hart");
    for cmd in ["diagram", "svg", "lift", "monodromy", "untangle"] {
        let mut runs = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{cmd}-{k}"));
            let o = divlink(&[cmd, hart.to_str().unwrap(), "-o", out.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0));
            runs.push(std::fs::read(out).unwrap());
        }
        assert_eq!(runs[0], runs[1], "{cmd}");
    }
}
