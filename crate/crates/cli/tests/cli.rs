use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SIX_CNOT: &str = "OPENQASM 2.0;
include \"qelib1.inc\";
qreg q[4];
cx q[0],q[1];
cx q[2],q[3];
cx q[0],q[2];
cx q[0],q[3];
cx q[2],q[3];
cx q[1],q[2];
";

fn sabre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sabre"))
        .args(args)
        .env_remove("SABRE_SEED")
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stats(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn worked_example_adds_one_swap() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "six_cnot.qasm", SIX_CNOT);
    let out = dir.path().join("out.qasm");
    let st = dir.path().join("stats.json");
    let run = sabre(&[
        "route", "--input", s(&input), "--coupling", "ring4", "--initial-layout", "0,1,2,3",
        "--restarts", "1", "--traversals", "1", "--output", s(&out), "--stats", s(&st),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let j = stats(&st);
    assert_eq!(j["g_ori"], 6);
    assert_eq!(j["swaps"], 1);
    assert_eq!(j["g_add"], 3);
    assert_eq!(j["g_tot"], 9);
    assert_eq!(j["d_ori"], 5);
    assert_eq!(j["d_out"], 8);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.matches("cx ").count(), 9);
    assert!(!text.contains("swap"));
}

#[test]
fn perfect_layout_adds_nothing() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("OPENQASM 2.0;\nqreg q[5];\n");
    for _ in 0..5 {
        for i in 0..4 {
            text += &format!("h q[{i}];\ncx q[{i}],q[{}];\n", i + 1);
        }
    }
    let input = write(&dir, "chain.qasm", &text);
    let st = dir.path().join("stats.json");
    let run = sabre(&["route", "--input", s(&input), "--coupling", "line5", "--stats", s(&st)]);
    assert!(run.status.success());
    let j = stats(&st);
    assert_eq!(j["g_add"], 0);
    assert_eq!(j["d_out"], j["d_ori"]);
}

#[test]
fn same_seed_same_bytes() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("OPENQASM 2.0;\nqreg q[12];\n");
    for i in 0..150 {
        text += &format!("cx q[{}],q[{}];\n", (i * 5) % 12, (i * 5 + 7) % 12);
    }
    let input = write(&dir, "rand.qasm", &text);
    let run = |tag: &str, seed: Option<&str>| {
        let out = dir.path().join(format!("{tag}.qasm"));
        let st = dir.path().join(format!("{tag}.json"));
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sabre"));
        cmd.args(["route", "--input", s(&input), "--coupling", "ibm-q20-tokyo"])
            .args(["--output", s(&out), "--stats", s(&st)]);
        match seed {
            Some(seed) => cmd.env("SABRE_SEED", seed),
            None => cmd.env_remove("SABRE_SEED").args(["--seed", "42"]),
        };
        assert!(cmd.output().unwrap().status.success());
        let mut j = stats(&st);
        j.as_object_mut().unwrap().remove("runtime_ms");
        (fs::read(&out).unwrap(), j)
    };
    let a = run("a", None);
    let b = run("b", None);
    assert_eq!(a, b);
    // The environment variable is only a fallback for --seed.
    let c = run("c", Some("42"));
    assert_eq!(a, c);
}

#[test]
fn verify_accepts_route_output_and_rejects_tampering() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "six_cnot.qasm", SIX_CNOT);
    for form in ["swap", "decomposed"] {
        let out = dir.path().join(format!("{form}.qasm"));
        let st = dir.path().join(format!("{form}.json"));
        let run = sabre(&[
            "route", "--input", s(&input), "--coupling", "ring4", "--emit", form,
            "--output", s(&out), "--stats", s(&st),
        ]);
        assert!(run.status.success());
        let ok = sabre(&["verify", "--input", s(&input), "--routed", s(&out), "--coupling", "ring4", "--stats", s(&st)]);
        assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stdout));
    }

    // The original circuit is not compliant under the identity layout.
    let bad = sabre(&[
        "verify", "--input", s(&input), "--routed", s(&input), "--coupling", "ring4",
        "--initial-layout", "0,1,2,3",
    ]);
    assert_eq!(bad.status.code(), Some(4));
    let report: serde_json::Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(report["compliant"], false);
}

#[test]
fn oracle_and_devices() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "six_cnot.qasm", SIX_CNOT);
    let run = sabre(&["oracle", "--input", s(&input), "--coupling", "ring4", "--initial-layout", "0,1,2,3"]);
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "1");
    let run = sabre(&["devices"]);
    let listing = String::from_utf8_lossy(&run.stdout);
    assert!(listing.contains("ibm-q20-tokyo") && listing.contains("43 couplers"));
}

#[test]
fn sweep_writes_one_row_per_delta() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "six_cnot.qasm", SIX_CNOT);
    let csv = dir.path().join("sweep.csv");
    let run = sabre(&[
        "sweep", "--input", s(&input), "--coupling", "grid3x3", "--deltas", "0,0.01,0.1",
        "--output", s(&csv), "--restarts", "2",
    ]);
    assert!(run.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("delta,"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "six_cnot.qasm", SIX_CNOT);

    assert_eq!(sabre(&["route", "--coupling", "ring4"]).status.code(), Some(1));
    assert_eq!(sabre(&["route", "--input", s(&input), "--coupling", "nowhere"]).status.code(), Some(1));
    assert_eq!(
        sabre(&["route", "--input", s(&input), "--coupling", "ring4", "--traversals", "2"]).status.code(),
        Some(1)
    );

    let broken = write(&dir, "broken.qasm", "OPENQASM 2.0;\nqreg q[3];\ncx q[0],q[5];\n");
    let run = sabre(&["route", "--input", s(&broken), "--coupling", "ring4"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("line 3"));

    let split = write(&dir, "split.txt", "4\n0 1\n2 3\n");
    assert_eq!(sabre(&["route", "--input", s(&input), "--coupling", s(&split)]).status.code(), Some(3));
    assert_eq!(sabre(&["route", "--input", s(&input), "--coupling", "line3"]).status.code(), Some(3));
}

#[test]
fn coupling_file_matches_builtin() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "six_cnot.qasm", SIX_CNOT);
    let ring = write(&dir, "ring.txt", "# ring\n4\n0 1\n1 3\n3 2\n2 0\n");
    let from_file = sabre(&["route", "--input", s(&input), "--coupling", s(&ring)]);
    let builtin = sabre(&["route", "--input", s(&input), "--coupling", "ring4"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, builtin.stdout);
}
