use std::process::Command;

use emq_cli::{CONVERGE_CSV, CSV_HEADER, EXIT_CONFIG, EXIT_PASS, REPORT_JSON};

fn emq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_emq"))
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# small run\nN = 16\nseed = 5\nsuite = maxwell\n").unwrap();
    let out = dir.path().join("out");
    let status = emq()
        .args(["verify", "--suite", "tensoralg", "--seed", "9", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_PASS));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join(REPORT_JSON)).unwrap()).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["config"]["grid_points"], 16);
    assert_eq!(json["config"]["seed"], 9);
    let suites: Vec<&str> = json["suites"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(suites, ["tensoralg"]);
}

#[test]
fn converge_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let output = emq()
        .args(["converge", "--kmax", "8", "--kmax", "16", "--kmax", "30", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(EXIT_PASS), "{}", String::from_utf8_lossy(&output.stderr));
    let csv = std::fs::read_to_string(dir.path().join(CONVERGE_CSV)).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.len() == 10));
    let eb: Vec<f64> = rows.iter().filter(|r| r[0] == "equal_time_E_B").map(|r| r[9].parse().unwrap()).collect();
    assert!(eb.windows(2).all(|w| w[1] < w[0]), "{eb:?}");
    assert_eq!(String::from_utf8(output.stdout).unwrap(), csv);
}

#[test]
fn malformed_input_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "N = many\n").unwrap();
    let run = |args: &[&str]| emq().args(args).output().unwrap();
    let output = emq().args(["verify", "--config"]).arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&output.stderr).contains("line 1: cannot parse `many` for key `N`"));
    assert_eq!(run(&["verify", "--kmax", "5", "--kmax", "6"]).status.code(), Some(EXIT_CONFIG));
    assert_eq!(run(&["verify", "--set", "colour=red"]).status.code(), Some(EXIT_CONFIG));
    assert_eq!(run(&["verify", "--set", "N=4"]).status.code(), Some(EXIT_CONFIG));
}
