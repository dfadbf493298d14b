use std::process::{Command, Output};

use serde_json::Value;

fn amiforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amiforge"))
        .args(args)
        .env_remove("AMIFORGE_SIEVE_LIMIT")
        .env_remove("AMIFORGE_WORKERS")
        .output()
        .expect("run amiforge")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn check_member() {
    let out = amiforge(&["check", "multiamicable", "--alphas", "1,2", "--tuple", "1560,1740"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "check");
    assert_eq!(v["results"]["member"], true);
    assert_eq!(v["results"]["sigmas"], serde_json::json!([5040, 5040]));
    for key in ["params", "timing", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn check_non_member_prints_both_sides() {
    let out = amiforge(&["check", "pm", "--p", "1", "--q", "2", "--tuple", "3,21"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["member"], false);
    assert_eq!(v["results"]["violation"]["lhs"], "36");
    assert_eq!(v["results"]["violation"]["rhs"], "48");
}

#[test]
fn factored_tuples_are_accepted() {
    let out = amiforge(&["check", "multiamicable", "--alphas", "3,1", "--tuple", "2^3*3^3*5*7*13^2,2^3*3^3*5*11^3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1277640,1437480;") && text.contains(";true;"), "{text}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["check", "pmx", "--tuple", "1,2"][..],
        &["check", "gm", "--p", "1", "--tuple", "28,84"],
        &["check", "pm", "--p", "1", "--q", "2", "--tuple", "3,x"],
        &["check", "mp", "--p", "1", "--q", "2", "--tuple", "1,2"],
        &["search", "perfect", "--limit", "100", "--sieve-limit", "50"],
        &["nonsense"],
    ] {
        let out = amiforge(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_tables_passes() {
    let out = amiforge(&["verify-tables"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["failed"], 0);
    assert_eq!(v["results"]["rows"].as_array().unwrap().len(), 134);
}

#[test]
fn search_csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pm.csv");
    let out = amiforge(&[
        "search", "pm", "--p", "1", "--q", "2", "--limit", "30", "--format", "csv", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tuple;sigmas;family;params"));
    let rows: Vec<&str> = lines.collect();
    for t in ["3,20;", "5,12;", "6,28;", "10,20;"] {
        assert!(rows.iter().any(|r| r.starts_with(t)), "{t} missing");
    }
}

#[test]
fn json_is_stable_across_runs_and_workers() {
    let a = amiforge(&["search", "hm", "--p", "1", "--q", "2", "--limit", "300", "--workers", "1"]);
    let b = amiforge(&["search", "hm", "--p", "1", "--q", "2", "--limit", "300", "--workers", "1"]);
    let c = amiforge(&["search", "hm", "--p", "1", "--q", "2", "--limit", "300", "--workers", "8"]);
    assert_eq!(without_timing(json(&a)), without_timing(json(&b)));
    assert_eq!(json(&a)["results"], json(&c)["results"]);
}

#[test]
fn environment_supplies_defaults() {
    let out = Command::new(env!("CARGO_BIN_EXE_amiforge"))
        .args(["search", "perfect", "--limit", "100"])
        .env("AMIFORGE_SIEVE_LIMIT", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_amiforge"))
        .args(["search", "perfect", "--limit", "100", "--sieve-limit", "200"])
        .env("AMIFORGE_SIEVE_LIMIT", "50")
        .env("AMIFORGE_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["params"]["workers"], 3);
}

#[test]
fn every_subcommand_honors_csv() {
    let cases: [&[&str]; 9] = [
        &["sieve", "--limit", "3"],
        &["check", "gm", "--tuple", "28,84"],
        &["search", "amicable-pair", "--limit", "300"],
        &["construct", "--alphas", "1,2", "--ns", "104,116", "--a-bound", "20"],
        &["density", "amicable", "--checkpoints", "300"],
        &["density", "lemma", "--k", "1,2", "--checkpoints", "1,10"],
        &["scan-question", "--limit", "100"],
        &["verify-tables"],
        &["census", "--alphas", "1,1", "--limits", "300"],
    ];
    let headers = [
        "n,sigma",
        "tuple;sigmas;family;params;member;detail",
        "tuple;sigmas;family;params",
        "alphas;ns;target;a;tuple",
        "x,count,ratio,bound",
        "x,k,lhs,rhs,margin,holds,exact",
        "tuple;sigmas;family;params",
        "table;tuple;sigmas;family;params;passed;detail",
        "limit,count",
    ];
    for (args, header) in cases.iter().zip(headers) {
        let mut a = args.to_vec();
        a.extend(["--format", "csv"]);
        let out = amiforge(&a);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(text.lines().next(), Some(header), "{args:?}");
    }
}

#[test]
fn construct_from_seed_search() {
    let out = amiforge(&["construct", "--alphas", "1,2", "--seed-limit", "120", "--a-bound", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let tuples = v["results"]["tuples"].as_array().unwrap();
    let hit = tuples.iter().find(|t| t["tuple"] == serde_json::json!([1560, 1740])).expect("1560,1740");
    assert_eq!(hit["seed"]["target"], "8/5");
    assert_eq!(hit["a"], 15);
}

#[test]
fn density_multi_and_pomerance() {
    let v = json(&amiforge(&["density", "multi", "--alpha", "1", "--beta", "2", "--checkpoints", "1000,2000"]));
    assert_eq!(v["results"]["series"]["counts"], serde_json::json!([0, 1]));
    let v = json(&amiforge(&["density", "pomerance", "--checkpoints", "300"]));
    let bound = v["results"][0]["bound"].as_f64().unwrap();
    assert!((bound - 27.537).abs() < 1e-3);
}
