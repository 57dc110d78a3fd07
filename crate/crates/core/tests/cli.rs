use std::process::{Command, Output};

use serde_json::Value;

fn corrgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corrgeo"))
        .args(args)
        .env_remove("CORRGEO_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn elliptope_check_labels_and_exit_codes() {
    let o = corrgeo(&["check", "--chi", "-0.5,-0.5,-0.5", "elliptope"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "on-surface (value 0.000000)");

    let o = corrgeo(&["check", "--chi", "0.1,0.2,0.3", "elliptope"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("inside"));

    let o = corrgeo(&["check", "--chi", "-0.9,-0.9,-0.9", "elliptope"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("outside"));

    let o = corrgeo(&["check", "--chi", "-0.5,-0.5,-0.5", "tetrahedron"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(corrgeo(&["check", "--chi", "2,0,0", "elliptope"]).status.code(), Some(2));
    assert_eq!(corrgeo(&["check", "--chi", "0,0", "elliptope"]).status.code(), Some(2));
    assert_eq!(corrgeo(&["quantum-array", "--spin", "0", "--angles", "1,2,3"]).status.code(), Some(2));
    assert_eq!(corrgeo(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn spin_half_minimum_sum() {
    let o = corrgeo(&["polytope", "--spin", "0.5", "min-sum"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1");
}

#[test]
fn slice_is_csv() {
    let o = corrgeo(&["slice", "--chi-bc", "-0.5", "--resolution", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert!(rdr.headers().unwrap().len() >= 2);
    assert!(rdr.records().count() > 0);
}

#[test]
fn env_seed_overrides_flag() {
    let run = |env: Option<&str>, seed: &str| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_corrgeo"));
        c.args(["simulate", "--source", "prbox", "--runs", "2000", "--seed", seed]);
        match env {
            Some(v) => c.env("CORRGEO_SEED", v),
            None => c.env_remove("CORRGEO_SEED"),
        };
        let o = c.output().unwrap();
        assert_eq!(o.status.code(), Some(0));
        serde_json::from_slice::<Value>(&o.stdout).unwrap()
    };
    let a = run(Some("9"), "1");
    let b = run(None, "9");
    let c = run(None, "1");
    assert_eq!(a["seed"], 9);
    assert_eq!(a, b);
    assert_ne!(a["counts"], c["counts"]);

    let mut bad = Command::new(env!("CARGO_BIN_EXE_corrgeo"));
    bad.args(["simulate", "--source", "prbox", "--runs", "10"]).env("CORRGEO_SEED", "x");
    assert_eq!(bad.output().unwrap().status.code(), Some(2));
}

#[test]
fn simulate_writes_the_log() {
    let dir = std::env::temp_dir().join(format!("corrgeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("runs.csv");
    let o = corrgeo(&[
        "simulate",
        "--source",
        "quantum",
        "--runs",
        "500",
        "--fixed-pair",
        "a,b",
        "--log",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["run", "setA", "setB", "outA", "outB"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 500);
    assert!(rows.iter().all(|r| &r[1] == "a" || &r[1] == "0"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn raffle_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("corrgeo-fit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let arr = dir.join("array.json");
    let o = corrgeo(&["quantum-array", "--spin", "1/2", "--angles", "120,120,120", "--json"]);
    std::fs::write(&arr, &o.stdout).unwrap();
    // The singlet at 120° has no raffle model.
    let o = corrgeo(&["fit", "--array", arr.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let o = corrgeo(&["quantum-array", "--spin", "1/2", "--angles", "0,0,0", "--json"]);
    std::fs::write(&arr, &o.stdout).unwrap();
    let o = corrgeo(&["fit", "--array", arr.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let spec = dir.join("raffle.json");
    std::fs::write(&spec, &o.stdout).unwrap();
    let o = corrgeo(&["raffle", "--spec", spec.to_str().unwrap(), "admissible"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "admissible");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn chsh_thresholds_and_landau() {
    let o = corrgeo(&["chsh", "t-family"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["classical_threshold"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert!((v["quantum_threshold"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-6);
    let o = corrgeo(&["chsh", "landau", "--chi4", "1,1,1,-1"]);
    assert_eq!(o.status.code(), Some(3));
}
