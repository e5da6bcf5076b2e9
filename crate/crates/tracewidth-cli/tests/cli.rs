use std::path::Path;
use std::process::{Command, Output};
use tracewidth::trace::{Spectrum, SpectrumMeta};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracewidth")).args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("scenario.toml");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

const POINT: &str = r#"
n = 2
k = 6.283185307179586
m_max = 60

[circle]
radius = 5.01
axes = [1, 2]

[source]
kind = "point"
y = [5.0, 0.0]
axis = 1
nu = 0
"#;

#[test]
fn constant_field_has_a_single_nonzero_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "n = 3\nk = 1.0\nm_max = 10\n[circle]\nradius = 2.0\naxes = [1, 3]\n[source]\nkind = \"constant\"\nvalue = 1.0\n",
    );
    let out = dir.path().join("out");
    let o = run(&["spectrum", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&out, "spectrum.csv");
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    assert!((rows[0][3] - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!(rows[1..].iter().all(|r| r[3] < 1e-14 * rows[0][3]));
}

#[test]
fn spectrum_output_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), POINT);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["spectrum", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["spectrum.csv", "normalized.csv", "spectrum_meta.json"] {
        assert_eq!(read(&a, name), read(&b, name), "{name}");
    }
    let meta: SpectrumMeta = serde_json::from_str(&read(&a, "spectrum_meta.json")).unwrap();
    assert!(meta.converged && meta.symmetric);
    let text = read(&a, "spectrum.csv");
    let spec = Spectrum::from_csv(&text, meta).unwrap();
    assert_eq!(spec.m_max, 60);
    assert_eq!(spec.to_csv(), text);
}

#[test]
fn bound_and_bandwidth_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), POINT);
    let out = dir.path().join("o");
    let o = run(&["bound", "--config", &cfg, "--out", out.to_str().unwrap(), "--m-max", "80"]);
    assert!(o.status.success());
    let bound = read(&out, "bound.csv");
    assert_eq!(bound.lines().next().unwrap(), "m,value,normalized");
    assert_eq!(bound.lines().count(), 82);

    let o = run(&["bandwidth", "--config", &cfg, "--out", out.to_str().unwrap(), "--m-max", "100"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&out, "bandwidth.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,k,R,nu,source,predicted,measured,bracket_lo,bracket_hi,flagged");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[4], "point");
    let predicted: i64 = row[5].parse().unwrap();
    let measured: i64 = row[6].parse().unwrap();
    assert!((predicted - 29).abs() <= 2 && (measured - 29).abs() <= 2);
    let json = read(&out, "bandwidth.json");
    assert!(json.contains("exit-climb"));
}

#[test]
fn skewed_frame_is_reorthonormalized_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let body = POINT.replace("axes = [1, 2]", "e1 = [1.0, 0.0]\ne2 = [1e-6, 1.0]");
    let cfg = write_config(dir.path(), &body);
    let out = dir.path().join("o");
    let o = run(&["bound", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("re-orthonormalized"));

    let body = POINT.replace("axes = [1, 2]", "e1 = [1.0, 0.0]\ne2 = [1e-14, 1.0]");
    let cfg = write_config(dir.path(), &body);
    let o = run(&["bound", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stderr.is_empty());
}

#[test]
fn config_errors_exit_with_code_two_and_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let cfg = write_config(dir.path(), &POINT.replace("axis = 1", "axis = 7"));
    let o = run(&["spectrum", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let record: serde_json::Value = serde_json::from_str(&read(&out, "error.json")).unwrap();
    assert_eq!(record["kind"], "config");
    assert_eq!(record["exit_code"], 2);
    assert!(record["message"].as_str().unwrap().contains("axis"));

    let cfg = write_config(dir.path(), "n = 2\nk = oops\n");
    assert_eq!(run(&["spectrum", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(run(&["table", "--which", "4"]).status.code(), Some(2));
    let missing = dir.path().join("nope.toml");
    assert_eq!(run(&["bound", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    // the source sits on the circle
    let cfg = write_config(dir.path(), &POINT.replace("y = [5.0, 0.0]", "y = [5.01, 0.0]"));
    let o = run(&["spectrum", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let record: serde_json::Value = serde_json::from_str(&read(&out, "error.json")).unwrap();
    assert_eq!(record["kind"], "numerical");
}

#[test]
fn table_one_matches_within_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["table", "--which", "1", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path(), "table1.csv");
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let (p, m): (i64, i64) = (r[5].parse().unwrap(), r[6].parse().unwrap());
        let (pp, pm): (i64, i64) = (r[10].parse().unwrap(), r[11].parse().unwrap());
        assert!((p - pp).abs() <= 2 && (m - pm).abs() <= 2);
    }
}

#[test]
fn three_circle_volume_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["pcsource", "--dim", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path(), "pcsource3d.csv");
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",3,5,false")));
}

#[test]
fn verify_reports_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--seed", "7", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(dir.path(), "verify.csv");
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
    assert!(csv.contains("multiplier,n2-double-root"));
}
