use std::path::Path;
use std::process::{Command, Output};

use fastmi::{sample_copula, CopulaFamily, CopulaSpec};
use fastmi_cli::io::write_pairs;
use serde_json::Value;

fn fastmi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fastmi"))
        .args(args)
        .env_remove("FASTMI_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn write_sample(dir: &Path, name: &str, family: CopulaFamily, tau: f64, n: usize, seed: u64) -> String {
    let s = sample_copula(&CopulaSpec::new(family, tau).unwrap(), n, seed);
    let path = dir.join(name);
    write_pairs(std::fs::File::create(&path).unwrap(), ("x", "y"), s.x(), s.y()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn estimate_gaussian_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_sample(dir.path(), "g.csv", CopulaFamily::Gaussian, 0.5, 1000, 11);
    let v = json(&fastmi(&["estimate", "--input", &path, "--cols", "x,y"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["estimator"], "fastMI");
    assert_eq!(v["n"], 1000);
    let nats = v["mi_nats"].as_f64().unwrap();
    let bits = v["mi_bits"].as_f64().unwrap();
    assert!((bits - nats / std::f64::consts::LN_2).abs() < 1e-12);
    assert!(nats > 0.1, "{nats}");
}

#[test]
fn round_trip_gives_identical_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let spec = CopulaSpec::new(CopulaFamily::Clayton, 0.4).unwrap();
    let s = sample_copula(&spec, 300, 5);
    let path = dir.path().join("c.csv");
    write_pairs(std::fs::File::create(&path).unwrap(), ("a", "b"), s.x(), s.y()).unwrap();
    let direct = fastmi::estimate_mi(&s, &Default::default()).unwrap().value;
    let v = json(&fastmi(&["estimate", "--input", path.to_str().unwrap()]));
    assert_eq!(v["mi_nats"].as_f64().unwrap(), direct);
}

#[test]
fn duplicated_column_has_large_mi() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.csv");
    let x: Vec<f64> = (0..200).map(|i| ((i * 7919) % 211) as f64 / 3.0).collect();
    write_pairs(std::fs::File::create(&path).unwrap(), ("x", "y"), &x, &x).unwrap();
    let v = json(&fastmi(&["estimate", "--input", path.to_str().unwrap()]));
    assert!(v["mi_nats"].as_f64().unwrap() > 1.0);
}

#[test]
fn bad_cell_reports_line_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    let mut text = String::from("x,y\n");
    for i in 2..=30 {
        text.push_str(&if i == 17 { "0.5,n/a\n".to_string() } else { format!("{i},{}\n", i * i) });
    }
    std::fs::write(&path, text).unwrap();
    let out = fastmi(&["estimate", "--input", path.to_str().unwrap(), "--cols", "x,y"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 17"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_sample(dir.path(), "s.csv", CopulaFamily::Gaussian, 0.2, 50, 1);
    let missing = dir.path().join("missing.csv");
    assert_eq!(fastmi(&["estimate", "--input", missing.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(fastmi(&["estimate"]).status.code(), Some(2));
    assert_eq!(fastmi(&["estimate", "--input", &path, "--format", "xml"]).status.code(), Some(2));
    assert_eq!(fastmi(&["estimate", "--input", &path, "--grid-size", "100"]).status.code(), Some(4));
    assert_eq!(fastmi(&["test", "--input", &path, "--perms", "10"]).status.code(), Some(4));
    assert_eq!(fastmi(&["estimate", "--input", &path, "--cols", "x,nope"]).status.code(), Some(4));
    let short = dir.path().join("short.csv");
    std::fs::write(&short, "1,2\n3,4\n5,7\n").unwrap();
    assert_eq!(fastmi(&["estimate", "--input", short.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(fastmi(&["estimate", "--input", &path]).status.code(), Some(0));
}

#[test]
fn test_is_deterministic_under_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_sample(dir.path(), "ind.csv", CopulaFamily::Gaussian, 0.0, 120, 2);
    let run = |seed: &str, threads: &str| {
        json(&fastmi(&["test", "--input", &path, "--perms", "199", "--seed", seed, "--threads", threads, "--grid-size", "64"]))
    };
    let a = run("42", "1");
    assert_eq!(a, run("42", "2"));
    assert_eq!(a["r"], 199);
    assert_eq!(a["seed"], 42);
    let env = Command::new(env!("CARGO_BIN_EXE_fastmi"))
        .args(["test", "--input", &path, "--perms", "199", "--grid-size", "64"])
        .env("FASTMI_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(json(&env), a);
}

#[test]
fn comonotone_file_has_minimal_p_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("co.csv");
    let x: Vec<f64> = (0..150).map(|i| (i as f64 * 0.37).sin() * 10.0 + i as f64 * 0.01).collect();
    let y: Vec<f64> = x.iter().map(|v| v.exp()).collect();
    write_pairs(std::fs::File::create(&path).unwrap(), ("x", "y"), &x, &y).unwrap();
    let v = json(&fastmi(&["test", "--input", path.to_str().unwrap(), "--perms", "999", "--grid-size", "64"]));
    assert_eq!(v["p_value"].as_f64().unwrap(), 0.001);
    assert_eq!(v["reject"], true);
}

#[test]
fn study_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "simulate-mse".to_string(),
            "--family".into(),
            "gaussian,gumbel".into(),
            "--tau-grid".into(),
            "0,0.5".into(),
            "--n-grid".into(),
            "80".into(),
            "--reps".into(),
            "5".into(),
            "--grid-size".into(),
            "64".into(),
            "--records".into(),
            "--format".into(),
            "csv".into(),
            "--output".into(),
            out.into(),
        ]
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (p, threads) in [(&a, "1"), (&b, "3")] {
        let mut argv = args(p.to_str().unwrap());
        argv.extend(["--threads".into(), threads.into()]);
        let out = Command::new(env!("CARGO_BIN_EXE_fastmi")).args(&argv).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let strip = |p: &Path| -> Vec<Vec<String>> {
        let mut r = csv::Reader::from_path(p).unwrap();
        let h = r.headers().unwrap().clone();
        let t = h.iter().position(|c| c == "elapsed_s").unwrap();
        r.records()
            .map(|rec| rec.unwrap().iter().enumerate().filter(|&(i, _)| i != t).map(|(_, v)| v.to_string()).collect())
            .collect()
    };
    let (ra, rb) = (strip(&a), strip(&b));
    assert_eq!(ra.len(), 20);
    assert_eq!(ra, rb);
    assert_eq!(ra[0][0], "fastMI");
}

#[test]
fn power_report_records_alpha() {
    let v = json(&fastmi(&[
        "simulate-power", "--family", "gaussian", "--tau-grid", "0.8", "--n-grid", "100", "--reps", "2", "--perms", "99",
        "--grid-size", "64",
    ]));
    assert_eq!(v["alpha"], 0.05);
    assert_eq!(v["cells"][0]["power"], 1.0);
    assert_eq!(v["design"]["families"][0], "gaussian");
}

#[test]
fn real_data_groups_scatter() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rd.csv");
    let mut text = String::from("country,continent,death,birth\n");
    for i in 0..120 {
        let t = i as f64 / 20.0;
        let cont = ["Africa", "Asia", "Europe"][i % 3];
        text.push_str(&format!("c{i},{cont},{},{}\n", t.cos() * 5.0 + 9.0, t.sin() * 8.0 + 20.0));
    }
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&fastmi(&["real-data", "--input", p, "--cols", "death,birth", "--group", "continent", "--perms", "99"]));
    assert_eq!(v["n"], 120);
    assert_eq!(v["groups"]["Asia"]["x"].as_array().unwrap().len(), 40);
    let pr = fastmi::stats::pearson(
        &(0..120).map(|i| (i as f64 / 20.0).cos()).collect::<Vec<_>>(),
        &(0..120).map(|i| (i as f64 / 20.0).sin()).collect::<Vec<_>>(),
    );
    assert!((v["pearson_r"].as_f64().unwrap() - pr).abs() < 1e-12);
    let out = fastmi(&["real-data", "--input", p, "--cols", "death,birth", "--perms", "99", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 2);
    let out = fastmi(&["real-data", "--input", p, "--cols", "death,rate"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'rate' not found"));
}
