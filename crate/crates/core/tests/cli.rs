use std::process::{Command, Output};

use serde_json::Value;

const FIXTURE: &str = include_str!("fixtures/representations.csv");

fn pillai(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pillai")).args(args).env_remove("PILLAI_PRECISION_BITS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn search_csv_is_the_fixture() {
    let o = pillai(&["search", "--m-max", "189", "--n-max", "300", "--min-reps", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), FIXTURE);
}

#[test]
fn search_json_and_table() {
    let o = pillai(&["search", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 35);
    assert_eq!(recs[0]["c"], "-226");
    assert_eq!(recs[0]["pairs"], serde_json::json!([[8, 13], [19, 14]]));

    let o = pillai(&["search", "--m-max", "4", "--n-max", "2", "--min-reps", "1"]);
    assert_eq!(stdout(&o), "c  pairs\n1  (4, 2)\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["search", "--min-reps", "0"][..],
        &["frobnicate"],
        &["--precision-bits", "32", "cf"],
        &["reduce", "--campaign", "gamma9"],
        &["reduce", "--campaign", "gamma1", "--sign", "up"],
        &["verify", "--out", "a", "--check", "b"],
    ] {
        let o = pillai(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = Command::new(env!("CARGO_BIN_EXE_pillai")).args(["cf"]).env("PILLAI_PRECISION_BITS", "8").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(pillai(&["--help"]).status.code(), Some(0));
}

#[test]
fn continued_fraction_text_and_json() {
    let o = pillai(&["cf", "--terms", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[1; 1, 2, 2, 6, 2, 1, 2, 1, 2, 1, 1, 11, 1, 2, 3, 1, 7, 37, 4]"), "{text}");

    let o = pillai(&["cf", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["published_index"], 98);
    assert_eq!(v["convergents"][98]["q"], "45634243076387457097046528084208490147594968308975");

    let o = pillai(&["cf", "--tau", "alpha-over-delta", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["published_index"], 98);
}

#[test]
fn pinned_low_precision_exits_3() {
    let o = pillai(&["--precision-bits", "64", "cf", "--terms", "200"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("64 bits"));
}

#[test]
fn bound_rows() {
    let o = pillai(&["bound"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().all(|l| !l.ends_with(' ')));
    assert!(text.lines().any(|l| l.starts_with("n_absolute ")));

    let o = pillai(&["bound", "--format", "json"]);
    let rows: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    let lambda = rows.iter().find(|r| r["key"] == "lambda").unwrap();
    assert!(lambda["deviation"].as_f64().unwrap().abs() < 0.05);
}

#[test]
fn reduce_small_ranges() {
    let o = pillai(&["reduce", "--campaign", "gamma1", "--sign", "pos", "--k-max", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0]["label"], "gamma1+/alpha");
    assert_eq!(v[0]["entries"].as_array().unwrap().len(), 5);

    let o = pillai(&["reduce", "--campaign", "gamma3", "--k-max", "3", "--l-max", "4", "--summary"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 2);
    for r in &v {
        assert_eq!(r["points"], 12);
        assert!(r.get("entries").is_none());
        assert!(r["max_k_bound"].as_u64().unwrap() <= 274 + 5);
    }
}

#[test]
fn verify_writes_a_checkable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    let o = pillai(&["verify", "--out", p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("theorem check pass"));

    let o = pillai(&["verify", "--check", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with(" ok\n"));

    // any change to a digested field is caught
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["final_n_bound"] = Value::from(v["final_n_bound"].as_u64().unwrap() + 1);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let o = pillai(&["verify", "--check", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("MISMATCH"));

    // timings are outside the digest
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["timings"]["search"] = Value::from(1234.5);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(pillai(&["verify", "--check", p]).status.code(), Some(0));
}
