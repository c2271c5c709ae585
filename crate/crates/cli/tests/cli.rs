use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcorr")).args(args).output().unwrap()
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn write_config(dir: &tempfile::TempDir, body: &str) -> String {
    let path = dir.path().join("s.json");
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn sweep_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let o = qcorr(&[
        "sweep",
        "--config",
        &scenario("frozen_discord.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("p,QD,GQD1"));
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        if cells[0] <= 0.333 {
            assert!((cells[1] - 0.118709).abs() < 1e-6, "{line}");
        }
    }
    let report = String::from_utf8(o.stderr).unwrap();
    assert!(report.contains("p_sc=0.333333"), "{report}");
}

#[test]
fn sweep_is_byte_stable_on_stdout() {
    let a = qcorr(&[
        "sweep",
        "--config",
        &scenario("filtered_gqd_type2_q0.06.json"),
        "--grid",
        "201",
    ]);
    let b = qcorr(&[
        "sweep",
        "--config",
        &scenario("filtered_gqd_type2_q0.06.json"),
        "--grid",
        "201",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 202);
}

#[test]
fn monotone_g4_report() {
    let o = qcorr(&["sweep", "--config", &scenario("filtered_gqd_type1_q0.80.json")]);
    assert!(o.status.success());
    let report = String::from_utf8(o.stderr).unwrap();
    assert!(report.contains("regime g4, no transitions"), "{report}");
    assert!(report.contains("GQD1_k: monotone=true"), "{report}");
}

#[test]
fn grid_two_gives_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        r#"{"c1": 0.1, "c2": 0.2, "c3": 0.3, "channel": "BPF", "grid": 2}"#,
    );
    let o = qcorr(&["sweep", "--config", &cfg]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 3);
}

#[test]
fn validation_and_parse_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, r#"{"c1": 0.9, "c2": 0.9, "c3": 0.9, "channel": "PF"}"#);
    let o = qcorr(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lambda"));

    let cfg = write_config(&dir, "{\n\"c1\": 0.9,\n\"c2\" 1}");
    let o = qcorr(&["transitions", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(qcorr(&["sweep"]).status.code(), Some(1));
}

#[test]
fn transitions_report() {
    let o = qcorr(&["transitions", "--config", &scenario("filtered_gqd_type1_q0.16.json")]);
    assert!(o.status.success());
    let r = String::from_utf8(o.stderr).unwrap();
    assert!(r.contains("regime g2: pk_sc=- pk_sc1=0.134102 pk_sc2=0.216586"), "{r}");
}

#[test]
fn measure_single_point() {
    let o = qcorr(&[
        "measure",
        "--config",
        &scenario("filtered_discord_k0.2.json"),
        "--p",
        "0.2",
    ]);
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    let qd: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("QD="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((qd - 0.118709).abs() < 1e-6);
    assert!(out.contains("QD_k="));
    let bad = qcorr(&["measure", "--config", &scenario("frozen_discord.json"), "--p", "1.5"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_zero_counts_passes() {
    let o = qcorr(&["verify", "--counts", "0"]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().contains("overall PASS"));
}

#[test]
fn verify_small_run_is_seed_independent() {
    for seed in ["1", "2", "3"] {
        let o = qcorr(&["verify", "--seed", seed, "--counts", "2"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
}
