use dpgap::family::FamilyName;
use dpgap::table::{density, RunSpec};
use dpgap::{BigFloat, Real};
use std::process::{Command, Output};

type B = BigFloat;

fn dpgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpgap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[derive(Debug, serde::Deserialize)]
struct Record {
    s: usize,
    #[allow(dead_code)]
    x_coord: String,
    #[serde(rename = "D")]
    d: String,
    density: String,
    method: String,
}

fn records(csv_text: &str) -> Vec<Record> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .deserialize()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn list_families_text_and_json() {
    let o = dpgap(&["list-families"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 15);
    assert!(text.contains("little_q_jacobi"));

    let o = dpgap(&["list-families", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 14);
    let flagged = list.iter().filter(|e| e["recurrence"] == true).count();
    assert_eq!(flagged, 8);
}

#[test]
fn charlier_methods_agree() {
    let o = dpgap(&[
        "compute", "--family", "charlier", "--param", "a=20", "--k", "6", "--smax", "80", "--method", "all",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("methods agree"));
    let recs = records(&stdout(&o));
    assert_eq!(recs.len(), 3 * 76);
    let by = |m: &str| -> Vec<B> {
        recs.iter()
            .filter(|r| r.method == m)
            .map(|r| B::with_precision(256, || B::parse(&r.d).unwrap()))
            .collect()
    };
    let (o, g, p) = (by("oracle"), by("general"), by("painleve"));
    for i in 0..o.len() {
        assert!(B::rel_diff(&o[i], &g[i]) < B::lit(1e-20));
        assert!(B::rel_diff(&p[i], &g[i]) < B::lit(1e-20));
    }
}

#[test]
fn meixner_figure_parameters() {
    let o = dpgap(&[
        "compute", "--family", "meixner", "--param", "c=0.01", "--param", "beta=3000", "--k", "4",
        "--method", "painleve", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["k"], 4);
    let rows = v["runs"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.first().unwrap()["s"], 4);
    assert!(rows.last().unwrap()["density"].is_null());
    for r in &rows[..rows.len() - 1] {
        let d: f64 = r["density"].as_str().unwrap().parse().unwrap();
        assert!(d >= -1e-15);
    }
}

#[test]
fn empty_range_is_a_config_error() {
    let o = dpgap(&["compute", "--family", "charlier", "--k", "6", "--smax", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty range"));
}

#[test]
fn bad_parameters_are_rejected() {
    let o = dpgap(&["compute", "--family", "meixner", "--param", "c=1.5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = dpgap(&["compute", "--family", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    let o = dpgap(&["compute", "--family", "charlier", "--param", "a"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unsupported_method_exits_3() {
    let o = dpgap(&["compute", "--family", "hahn", "--method", "painleve"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("family=hahn"));
}

#[test]
fn csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qk.csv");
    let o = dpgap(&[
        "compute", "--family", "q_charlier", "--param", "a=2", "--param", "q=0.7", "--k", "3", "--smax", "30",
        "--method", "general", "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let script = std::fs::read_to_string(dir.path().join("qk.gp")).unwrap();
    assert!(script.contains("'qk.csv'") && script.contains("separator ','"));

    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("s,x_coord,D,density,method\n"));
    let recs = records(&text);
    B::with_precision(256, || {
        let f = RunSpec::new(FamilyName::QCharlier, &[("a", "2"), ("q", "0.7")], 3, 30)
            .build::<B>()
            .unwrap();
        let digits = B::decimal_digits();
        for w in recs.windows(2) {
            let (a, b) = (B::parse(&w[0].d).unwrap(), B::parse(&w[1].d).unwrap());
            assert_eq!(density(&f, w[0].s, &a, &b).to_sci(digits), w[0].density);
        }
    });
    assert!(recs.last().unwrap().density.is_empty());
}

#[test]
fn verify_charlier_defaults() {
    let o = dpgap(&["verify", "--family", "charlier"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("all checks passed"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_q_pvi_relations() {
    let o = dpgap(&["verify", "--family", "q_krawtchouk", "--param", "N=20", "--param", "q=0.9", "--k", "2", "--smax", "12"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS js step"));
}

#[test]
fn verify_reports_degradation_at_low_precision() {
    let o = dpgap(&["verify", "--family", "charlier", "--precision", "32"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("FAIL"));
    assert!(out.contains("first degraded:"));
}

#[test]
fn verify_skips_oracle_only_families() {
    let o = dpgap(&["verify", "--family", "hahn"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("oracle-only family; recurrence checks skipped"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"family": "charlier", "params": {"a": 3}, "k": 2, "smax": 10, "method": "oracle"}"#,
    )
    .unwrap();
    let o = dpgap(&["compute", "--config", cfg.to_str().unwrap(), "--smax", "12"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let recs = records(&stdout(&o));
    assert_eq!(recs.len(), 12);
    assert!(recs.iter().all(|r| r.method == "oracle"));
    assert_eq!(recs[0].s, 2);
    assert_eq!(recs.last().unwrap().s, 13);

    std::fs::write(&cfg, r#"{"family": "charlier", "colour": "red"}"#).unwrap();
    let o = dpgap(&["compute", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn low_precision_disagreement_exits_2() {
    let o = dpgap(&["compute", "--family", "charlier", "--precision", "32", "--no-adaptive"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("step="));
}
