use std::f64::consts::PI;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regge-area"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_row(line: &str) -> Vec<f64> {
    line.split(',').map(|x| x.parse().unwrap()).collect()
}

#[test]
fn distribution_right_panel() {
    let out = run(&[
        "distribution",
        "--gamma",
        "10",
        "--vsq-min",
        "0",
        "--vsq-max",
        "44",
        "--samples",
        "441",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("vsq,N,scaledN"));
    let rows: Vec<Vec<f64>> = lines.map(parse_row).collect();
    assert_eq!(rows.len(), 441);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[440][0], 44.0);
    assert!((rows[0][2] - 1.0).abs() < 1e-12);
    for r in &rows {
        assert!(r[1] >= 0.0);
        assert!((r[2] - 4.0 * PI * PI * r[1]).abs() <= 1e-15 * r[2].abs().max(1e-300));
    }
}

#[test]
fn distribution_left_panel_json() {
    let out = run(&[
        "distribution",
        "--gamma",
        "0.05",
        "--vsq-min",
        "-0.09",
        "--vsq-max",
        "0.01",
        "--samples",
        "11",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = value.as_array().unwrap();
    assert_eq!(rows.len(), 11);
    for row in rows {
        let obj = row.as_object().unwrap();
        assert_eq!(obj.len(), 3);
        assert!(obj["vsq"].is_f64() && obj["N"].is_f64() && obj["scaledN"].is_f64());
    }
}

#[test]
fn csv_round_trips() {
    let out = run(&[
        "distribution",
        "--gamma",
        "0.7",
        "--samples",
        "5",
        "--vsq-min",
        "-3.3",
        "--vsq-max",
        "2.2",
    ]);
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        assert!(!line.contains(' '));
        let row = parse_row(line);
        let n =
            regge_area::closed_form::distribution(row[0].into(), 0.7, regge_area::Variant::Arcsin)
                .unwrap();
        assert!((row[1] - n).abs() <= 1e-15 * n);
    }
}

#[test]
fn moments_spot_value_and_agreement() {
    let out = run(&["moments", "--gamma", "1", "--l", "0", "--variant", "arcsin"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    for route in [
        "series_unrescaled",
        "series_rescaled",
        "integral_rep",
        "radial_quadrature",
    ] {
        let re = header
            .iter()
            .position(|h| *h == format!("{route}_re"))
            .unwrap();
        let (a, b): (f64, f64) = (row[re].parse().unwrap(), row[re + 1].parse().unwrap());
        assert!(
            (a - PI).abs() < 1e-12 && (b - PI).abs() < 1e-12,
            "{route}: {a} {b}"
        );
    }

    let out = run(&["moments", "--gamma", "1", "--l", "3"]);
    let text = stdout(&out);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let agree = header.iter().position(|h| *h == "routes_agree").unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.split(',').nth(agree) == Some("true")));
}

#[test]
fn moments_linear_json_has_null_integral_route() {
    let out = run(&[
        "moments",
        "--gamma",
        "2",
        "--l",
        "1",
        "--variant",
        "linear",
        "--m",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value.as_array().unwrap().len(), 2);
    assert!(value[0]["routes"]["integral_rep"].is_null());
    assert_eq!(value[1]["routes_agree"], true);
    assert_eq!(value[1]["m"], 1);
}

#[test]
fn invalid_gamma_is_usage_error() {
    assert_eq!(run(&["moments", "--gamma", "0"]).status.code(), Some(2));
    assert_eq!(
        run(&["distribution", "--samples", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--only", "no-such-check"]).status.code(),
        Some(2)
    );
}

#[test]
fn singularities_rows() {
    let out = run(&["singularities", "--gamma", "1", "--n-max", "1"]);
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("n,re,im,order"));
    let row = parse_row(text.lines().nth(1).unwrap());
    assert_eq!(row[0], 1.0);
    assert!(row[1].abs() < 1e-15 && (row[2] + 2.0).abs() < 1e-15);
    assert_eq!(row[3], 2.0);

    let text = stdout(&run(&["singularities", "--gamma", "1000", "--n-max", "3"]));
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(parse_row).collect();
    assert_eq!(rows.len(), 3);
    assert!((rows[0][1] - 4.0).abs() < 1e-4 && rows[0][2].abs() < 1e-2);
}

#[test]
fn verify_single_group() {
    let out = run(&["verify", "--only", "table-integral"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let checks: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|l| l.starts_with("PASS table-integral/")));

    let out = run(&["verify", "--only", "measure-norm", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value.as_array().unwrap().len(), 1);
    assert_eq!(value[0]["name"], "measure-norm");
}

#[test]
fn verify_exit_status_tracks_failures() {
    let out = run(&[
        "verify",
        "--only",
        "table-integral",
        "--tolerance",
        "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_file_and_config_file() {
    let dir = std::env::temp_dir().join(format!("regge-area-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    let csv = dir.join("out.csv");
    std::fs::write(&cfg, "gamma=2\nsamples=4\nvsq-min=-1\nvsq-max=1\n").unwrap();
    let out = run(&[
        "distribution",
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "3",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}
