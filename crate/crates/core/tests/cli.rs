use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinomial-fp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn lemma26_finding_is_reported_without_failing() {
    let out = run(&["sweep", "--primes", "3..12", "--checks", "lemma26"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let hit = report["summary"]["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .find(|d| d["p"] == 7 && d["c"] == 0)
        .expect("(7,0) finding");
    assert_eq!(hit["observed"]["binom"], "5");
    assert_eq!(hit["expected"]["binom"], "0");
    assert_eq!(hit["safe_suite"], false);

    let strict = run(&[
        "sweep",
        "--primes",
        "3..12",
        "--checks",
        "lemma26",
        "--fail-on-discrepancy",
    ]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn single_wsn_entry() {
    let out = run(&["sweep", "--primes", "5..5", "--checks", "wsn"]);
    assert!(out.status.success());
    let report = json(&out);
    let results = report["results"].as_array().unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0]["status"], "pass");
    assert_eq!(results[0]["observed"]["det"], "3");
    assert_eq!(results[0]["c"], Value::Null);
    assert_eq!(report["meta"]["instance_count"], 1);
}

#[test]
fn csv_carries_the_json_fields() {
    let args = [
        "sweep",
        "--primes",
        "3..13",
        "--checks",
        "thm11,lemma24,cauchy",
        "--seed",
        "9",
    ];
    let j = json(&run(&args));
    let out = run(&[&args[..], &["--format", "csv"]].concat());
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["check", "p", "c", "d", "status", "observed", "expected", "witness", "note"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let results = j["results"].as_array().unwrap();
    assert_eq!(rows.len(), results.len());
    let field = |v: &Value| match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let flat = |v: &Value| {
        v.as_object()
            .unwrap()
            .iter()
            .map(|(k, v)| format!("{k}={}", v.as_str().unwrap()))
            .collect::<Vec<_>>()
            .join(";")
    };
    for (row, r) in rows.iter().zip(results) {
        assert_eq!(row[0], field(&r["check"]));
        assert_eq!(row[1], field(&r["p"]));
        assert_eq!(row[2], field(&r["c"]));
        assert_eq!(row[3], field(&r["d"]));
        assert_eq!(row[4], field(&r["status"]));
        assert_eq!(row[5], flat(&r["observed"]));
        assert_eq!(row[6], flat(&r["expected"]));
        assert_eq!(row[7], field(&r["witness"]));
        assert_eq!(row[8], field(&r["note"]));
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("trinomial-fp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let args = [
        "sweep",
        "--primes",
        "3..20",
        "--checks",
        "thm12,lerch",
        "--threads",
        "3",
    ];
    let to_file = run(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), run(&args).stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn dump_matrix() {
    let out = run(&["sweep", "--dump-matrix", "5,2,4"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "3 1 2 2\n3 2 3 4\n4 3 2 3\n2 2 1 3\n"
    );
}

#[test]
fn usage_errors() {
    for args in [
        &["sweep", "--primes", "50..40"][..],
        &["sweep", "--primes", "2..40"],
        &["sweep", "--primes", "3-40"],
        &["sweep", "--checks", "thm99"],
        &["sweep", "--format", "xml"],
        &["sweep", "--dump-matrix", "6,1,1"],
    ] {
        let out = run(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
