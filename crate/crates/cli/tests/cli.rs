use std::process::{Command, Output};

use proptest::prelude::*;

use picard_cli::invariants::{self, InvariantsDocument};
use picard_cli::local_models::{self, LocalModelsDocument};
use picard_cli::report::{self, ReportDocument};
use picard_cli::{Envelope, Format, GridConfig, RunConfig};
use picard_core::Exact;

fn picard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_picard"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn invariants_example() {
    let o = picard(&["invariants", "--d", "-7", "--p", "3", "--index", "7", "--reproducible"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("n       = 1"));
    assert!(s.contains("n_ssp   = 7"));
    assert!(s.contains("g_a     = 45"));
    assert!(s.contains("all 16 checks pass"));
}

#[test]
fn hypothesis_gates_exit_2() {
    let o = picard(&["invariants", "--d", "-1", "--p", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("prime to 2N"));
    let o = picard(&["invariants", "--d", "-1", "--p", "5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("splits"));
    let o = picard(&["invariants", "--d", "-12", "--p", "5"]);
    assert_eq!(code(&o), 2);
    let o = picard(&["invariants", "--d", "-1", "--p", "3", "--level", "25"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--index"));
}

#[test]
fn identity_failure_exits_1() {
    // index 1 gives a non-integral number of components
    let o = picard(&["invariants", "--d", "-7", "--p", "3", "--index", "1", "--reproducible"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("[FAIL] n is an integer"));
}

#[test]
fn resource_guard_exits_3() {
    let o = picard(&["local-models", "--p", "17"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource guard"));
}

#[test]
fn local_models_examples() {
    let o = picard(&["local-models", "--d", "-1", "--p", "3", "--reproducible"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("ssp Hasse invariant: u^4 + v^4"));
    assert!(s.contains("gss Hasse invariant: -u (order 1)"));
    assert!(s.contains("branches u = zeta v (4)"));
    assert_eq!(s.matches("(order 8)").count(), 4);

    let o = picard(&["local-models", "--d", "-7", "--p", "2"]);
    assert_eq!(code(&o), 2);
    let o = picard(&["local-models", "--d", "-3", "--p", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: LocalModelsDocument = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc.results.vanishing_dimension, 9);
}

#[test]
fn small_truncation_is_refused() {
    let o = picard(&["local-models", "--d", "-1", "--p", "3", "--truncation", "20"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("truncation"));
}

#[test]
fn report_grid_shapes() {
    let o = picard(&[
        "report", "--d", "-4", "--d", "-7", "--d", "-8", "--p", "3", "--p", "7", "--format", "csv",
    ]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[0].starts_with("d,D,p,N,index"));
    assert!(lines.iter().any(|l| l.ends_with("skipped: p split")));

    let o = picard(&["report", "--reproducible"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);
}

#[test]
fn json_schema_and_out_file() {
    let dir = std::env::temp_dir().join(format!("picard-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inv.json");
    let p = path.to_str().unwrap();
    let o = picard(&["invariants", "--d", "-7", "--p", "3", "--index", "7", "--format", "json", "--out", p]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["config", "results", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let check = &v["checks"][0];
    for key in ["name", "lhs", "rhs", "pass"] {
        assert!(check.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["results"]["surface"]["n"], serde_json::json!({"num": "1", "den": "1"}));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let runs: [&[&str]; 6] = [
        &["invariants", "--d", "-7", "--p", "3", "--format", "json"],
        &["invariants", "--d", "-1", "--p", "3", "--format", "csv"],
        &["invariants", "--d", "-2", "--p", "5", "--reproducible"],
        &["local-models", "--p", "5", "--format", "json"],
        &["local-models", "--p", "3", "--reproducible"],
        &["report", "--d", "-1", "--d", "-7", "--p", "3", "--p", "5", "--format", "json"],
    ];
    for args in runs {
        let a = picard(args);
        let b = picard(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn timestamp_only_without_reproducible() {
    let o = picard(&["invariants", "--d", "-7", "--p", "3"]);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("# picard invariants, generated at"));
    let o = picard(&["invariants", "--d", "-7", "--p", "3", "--format", "json"]);
    assert!(!String::from_utf8(o.stdout).unwrap().contains("generated"));
}

fn roundtrip<T>(doc: &T) -> T
where
    T: serde::Serialize + serde::de::DeserializeOwned,
{
    serde_json::from_str(&serde_json::to_string(doc).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn invariants_json_roundtrips(
        d in prop::sample::select(vec![-1i64, -2, -3, -7, -11, -15, -19, -4, -8, -20]),
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 101]),
        num in 0i64..100_000, den in 1i64..50,
        given in any::<bool>(),
    ) {
        let mut cfg = RunConfig::new(d, p);
        cfg.series_terms = 2_000;
        cfg.format = Format::Json;
        if given {
            cfg.index = Some(Exact::ratio(num, den));
        }
        prop_assume!(invariants::compute(&cfg).is_ok());
        let (results, checks) = invariants::compute(&cfg).unwrap();
        let doc: InvariantsDocument = Envelope { config: cfg.clone(), results, checks };
        prop_assert_eq!(roundtrip(&doc), doc.clone());
        let text = invariants::render(&cfg, doc.results.clone(), doc.checks.clone());
        let parsed: InvariantsDocument = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(parsed, doc);
    }

    #[test]
    fn report_json_roundtrips(
        ds in prop::collection::vec(prop::sample::select(vec![-1i64, -2, -3, -4, -7, -12]), 0..3),
        ps in prop::collection::vec(prop::sample::select(vec![2u64, 3, 5, 7, 9]), 0..3),
    ) {
        let cfg = GridConfig {
            d: ds,
            p: ps,
            level: None,
            index: None,
            series_terms: 2_000,
            format: Format::Json,
            out: None,
            reproducible: true,
        };
        let (results, checks) = report::compute(&cfg);
        let doc: ReportDocument = Envelope { config: cfg, results, checks };
        prop_assert_eq!(roundtrip(&doc), doc);
    }
}

#[test]
fn local_models_json_roundtrips() {
    for (d, p) in [(-3, 2), (-1, 3), (-2, 5), (-1, 7)] {
        let mut cfg = RunConfig::new(d, p);
        cfg.format = Format::Json;
        let (results, checks) = local_models::compute(&cfg).unwrap();
        let doc: LocalModelsDocument = Envelope { config: cfg, results, checks };
        assert_eq!(roundtrip(&doc), doc);
    }
}
