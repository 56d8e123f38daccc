use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_aerial-interference"));
    c.env_remove("AERIAL_INTERFERENCE_OUT");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

#[test]
fn empty_config_uses_table_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    fs::write(&cfg, "").unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "run",
        "--preset",
        "fig7-rate-standalone",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "200",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let meta: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("fig7-rate-standalone.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["config"]["topology"]["pairs"], 5);
    assert_eq!(meta["config"]["topology"]["m0"], 10.0);
    assert_eq!(meta["config"]["tx_power_dbm"], 23.0);
    let (header, rows) = read_csv(&out.join("fig7-rate-standalone-rate.csv"));
    assert_eq!(
        header,
        [
            "h",
            "antenna",
            "rate_mean",
            "rate_se",
            "analytic_exact",
            "analytic_closed_form"
        ]
    );
    assert_eq!(rows.len(), 16);
    let (header, _) = read_csv(&out.join("fig7-rate-standalone-power.csv"));
    assert_eq!(
        header,
        ["h", "antenna", "desired_dbm", "interference_dbm", "gap_db"]
    );
}

#[test]
fn inverted_annulus_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"m0": 200, "m_max": 100}"#).unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "run",
        "--preset",
        "custom",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m0 < m_max"), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    let o = run(&[
        "run",
        "--preset",
        "custom",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));
}

#[test]
fn zero_trials_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"trials": 0}"#).unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "run",
        "--preset",
        "custom",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`trials`"));
    assert!(!out.exists());
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let go = |sub: &str, threads: &str| {
        let out = dir.path().join(sub);
        let o = run(&[
            "run",
            "--preset",
            "fig9-sumrate",
            "--seed",
            "42",
            "--trials",
            "300",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(out.join("fig9-sumrate.csv")).unwrap()
    };
    let a = go("a", "1");
    let b = go("b", "3");
    assert_eq!(a, b);
    assert_ne!(a, {
        let out = dir.path().join("c");
        run(&[
            "run",
            "--preset",
            "fig9-sumrate",
            "--seed",
            "43",
            "--trials",
            "300",
            "--out",
            out.to_str().unwrap(),
        ]);
        fs::read(out.join("fig9-sumrate.csv")).unwrap()
    });
}

#[test]
fn env_var_sets_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["run", "--preset", "fig6-gain-standalone"])
        .env("AERIAL_INTERFERENCE_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("fig6-gain-standalone.csv"));
    assert_eq!(header[0], "h");
    assert_eq!(rows.len(), 36);
}

#[test]
fn unwritable_output_exits_one_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = run(&[
        "run",
        "--preset",
        "fig6-gain-standalone",
        "--out",
        blocker.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains(blocker.to_str().unwrap()),
        "{}",
        stderr(&o)
    );
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "run",
        "--preset",
        "fig7-gain-multipair",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("fig7-gain-multipair.json")).unwrap())
            .unwrap();
    assert_eq!(t["columns"][1], "zeta_z_exact");
    assert!(t["rows"][0][1].as_f64().unwrap() > 0.0);
}

#[test]
fn sum_rate_peaks_by_aerial_share() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "run",
        "--preset",
        "fig9b-sumrate-vs-percent",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = read_csv(&dir.path().join("fig9b-sumrate-vs-percent-peaks.csv"));
    let peaks: Vec<(String, String)> = rows
        .into_iter()
        .map(|r| (r[0].clone(), r[1].clone()))
        .collect();
    assert_eq!(
        peaks,
        [
            ("50".into(), "50".into()),
            ("150".into(), "30".into()),
            ("400".into(), "10".into())
        ]
    );
}

#[test]
fn pdf_preset_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "run",
        "--preset",
        "fig3-pdf-theta",
        "--trials",
        "100000",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("fig3-pdf-theta.csv"));
    assert_eq!(header, ["theta_bin_center", "density", "theta", "pdf"]);
    for r in rows {
        let density: f64 = r[1].parse().unwrap();
        let pdf: f64 = r[3].parse().unwrap();
        assert!((density - pdf).abs() < 0.1 * pdf);
    }
}

#[test]
fn pattern_subcommand() {
    let o = run(&["pattern", "--antenna", "z", "--grid", "3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,field,gain");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("1.5707963267948966,1,1"));

    let o = run(&["pattern", "--antenna", "y", "--grid", "4"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 17);
    assert_eq!(
        run(&["pattern", "--antenna", "y", "--grid", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fit_b_subcommand() {
    let o = run(&[
        "fit-b",
        "--m0",
        "10",
        "--mmax",
        "100",
        "--samples",
        "200000",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let b: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((b - 60.8).abs() < 0.5, "{b}");
    assert_eq!(
        run(&["fit-b", "--m0", "100", "--mmax", "10"]).status.code(),
        Some(2)
    );
}
