use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use ztwo_cli::records::{ClassGroupRecord, ClassifyRecord, PredictionRecord, VerifyRecord, WitnessRecord};
use ztwo_cli::scan::{Cell, JsonScanRow, ScanRow, CSV_HEADER};
use ztwo_core::arith::factor_squarefree;
use ztwo_core::classifier::{classify, exponent_r_corollary, predict, Family, Tower};

fn ztwo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ztwo")).args(args).env_remove("ZTWO_CACHE").output().expect("binary runs")
}

fn with_cache(cache: &Path, args: &[&str]) -> Output {
    let mut full = vec!["--cache", cache.to_str().unwrap()];
    full.extend_from_slice(args);
    ztwo(&full)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_lines<T: DeserializeOwned>(o: &Output) -> Vec<T> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{l}: {e}"))).collect()
}

#[test]
fn classify_examples() {
    let o = ztwo(&["classify", "209"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "A2 p=11 q=19 (p/q)=+1");

    let o = ztwo(&["classify", "21"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "UNCLASSIFIED");

    let o = ztwo(&["classify", "45"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not squarefree"));

    for bad in ["0", "1", "10", "-5", "abc"] {
        assert_eq!(code(&ztwo(&["classify", bad])), 1, "{bad}");
    }
}

#[test]
fn classify_json() {
    let recs: Vec<ClassifyRecord> = json_lines(&ztwo(&["classify", "89", "--json"]));
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].schema, "ztwo/1");
    assert_eq!(recs[0].tag, Family::A1);
    assert_eq!(recs[0].primes, vec![89]);
}

#[test]
fn predict_examples() {
    let o = ztwo(&["predict", "55", "--n", "2", "--tower", "L", "--json"]);
    assert_eq!(code(&o), 0);
    let recs: Vec<PredictionRecord> = json_lines(&o);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].shape, vec![16]);
    assert_eq!(recs[0].tower, Tower::L);
    assert_eq!(recs[0].r, Some(3));

    let o = ztwo(&["predict", "89", "--n", "1", "--tower", "both", "--json"]);
    let recs: Vec<PredictionRecord> = json_lines(&o);
    let shapes: Vec<(Tower, Vec<u64>)> = recs.into_iter().map(|r| (r.tower, r.shape)).collect();
    assert_eq!(shapes, vec![(Tower::L, vec![2, 4]), (Tower::K, vec![2, 8])]);

    let o = ztwo(&["predict", "89"]);
    let text = stdout(&o);
    assert!(text.contains("L: [2,4]") && text.contains("K: [2,8]"), "{text}");

    assert_eq!(code(&ztwo(&["predict", "7", "--n", "1", "--tower", "L"])), 2);
    assert_eq!(code(&ztwo(&["predict", "21"])), 2);
    assert_eq!(code(&ztwo(&["predict", "45"])), 1);
    assert_eq!(code(&ztwo(&["predict", "89", "--n", "0"])), 1);
}

#[test]
fn scan_examples() {
    let o = ztwo(&["scan", "--min", "3", "--max", "100", "--family", "B", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    let ds: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    // 39 = 13*3 and 87 = 29*3 also have p = 5, q = 3 (mod 8).
    assert_eq!(ds, ["15", "39", "55", "87", "95"]);

    let o = ztwo(&["scan", "--min", "3", "--max", "3"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("3,UNCLASSIFIED"), "{}", rows[0]);

    let o = ztwo(&["scan", "--min", "200", "--max", "250", "--family", "A2", "--format", "json"]);
    let rows: Vec<JsonScanRow> = json_lines(&o);
    assert!(rows.iter().all(|r| r.schema == "ztwo/1" && r.row.tag == Family::A2));
    let r209 = rows.iter().find(|r| r.row.d == 209).expect("209 present");
    assert_eq!(r209.row.shape_L_n1, Some(Cell::Value("[2,4]".into())));

    assert_eq!(code(&ztwo(&["scan", "--min", "10", "--max", "5"])), 1);
    assert_eq!(code(&ztwo(&["scan", "--max", "1000001"])), 1);
    assert_eq!(code(&ztwo(&["scan", "--max", "50", "--family", "Z"])), 1);
}

#[test]
fn scan_rows_are_odd_squarefree_in_order() {
    let o = ztwo(&["scan", "--min", "1", "--max", "400", "--format", "json"]);
    let ds: Vec<u64> = json_lines::<JsonScanRow>(&o).into_iter().map(|r| r.row.d).collect();
    let expected: Vec<u64> = (3..=400).filter(|&d| factor_squarefree(d).is_ok()).collect();
    assert_eq!(ds, expected);
}

#[test]
fn scan_is_byte_identical_across_runs() {
    let args = ["scan", "--min", "3", "--max", "2000"];
    let a = ztwo(&args);
    let b = ztwo(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let c = with_cache(&cache, &args);
    let d = with_cache(&cache, &args);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn cache_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let commands: [&[&str]; 4] = [
        &["predict", "209", "--json"],
        &["classgroup", "-712", "--json"],
        &["verify", "--max", "600", "--suite", "oracle"],
        &["scan", "--min", "3", "--max", "300", "--format", "json"],
    ];
    for args in commands {
        let first = with_cache(&cache, args);
        let size = std::fs::metadata(&cache).unwrap().len();
        let second = with_cache(&cache, args);
        assert_eq!(code(&first), 0, "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
        assert_eq!(std::fs::metadata(&cache).unwrap().len(), size, "cache hits must not append: {args:?}");
        assert_eq!(first.stdout, ztwo(args).stdout, "{args:?}");
    }
}

#[test]
fn cache_from_environment_and_corrupt_lines() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    std::fs::write(&cache, "not json\n{\"schema\":\"ztwo/1\",\"D\":-55,\"h\":5,\"divisors\":[5],\"computed_at\":0}\n")
        .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ztwo"))
        .args(["classgroup", "-55", "--json"])
        .env("ZTWO_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert_eq!(stderr.matches("warning").count(), 2, "{stderr}");
    let rec: Vec<ClassGroupRecord> = json_lines(&o);
    assert_eq!((rec[0].h, rec[0].divisors.clone()), (4, vec![4]));
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.lines().any(|l| l.contains("\"D\":-55") && l.contains("\"h\":4")));
}

#[test]
fn classgroup_examples() {
    let o = ztwo(&["classgroup", "-55"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("h=4") && text.contains("divisors=[4]"), "{text}");

    let recs: Vec<ClassGroupRecord> = json_lines(&ztwo(&["classgroup", "-407", "--json"]));
    assert_eq!((recs[0].h, recs[0].h2), (16, 16));

    assert_eq!(code(&ztwo(&["classgroup", "-60"])), 1);
    assert_eq!(code(&ztwo(&["classgroup", "5"])), 1);
}

#[test]
fn symbol_examples() {
    let cases: [(&[&str], &str); 5] = [
        (&["symbol", "--quartic", "11", "5"], "+1"),
        (&["symbol", "--jacobi", "-2", "7"], "-1"),
        (&["symbol", "--jacobi", "13", "19"], "-1"),
        (&["symbol", "--quartic", "17", "89"], "-1"),
        (&["symbol", "--quartic2", "89"], "-1"),
    ];
    for (args, want) in cases {
        let o = ztwo(args);
        assert_eq!(code(&o), 0, "{args:?}");
        assert_eq!(stdout(&o).trim(), want, "{args:?}");
    }
    assert_eq!(code(&ztwo(&["symbol", "--jacobi", "3", "8"])), 1);
    assert_eq!(code(&ztwo(&["symbol"])), 1);
}

#[test]
fn witness_output() {
    let recs: Vec<WitnessRecord> = json_lines(&ztwo(&["witness", "89"]));
    let expected = exponent_r_corollary(&classify(&factor_squarefree(89).unwrap()).unwrap()).unwrap();
    assert_eq!(recs[0].r_corollary, expected.r);
    assert_eq!(recs[0].witness, expected.witness);
    assert_eq!(code(&ztwo(&["witness", "21"])), 2);
}

#[test]
fn verify_corollary_suite() {
    let o = ztwo(&["verify", "--max", "5000", "--suite", "corollary"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs: Vec<VerifyRecord> = json_lines(&o);
    assert_eq!(recs.len(), 1);
    assert!(recs[0].checked > 0 && recs[0].violations.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&ztwo(&["--bogus"])), 1);
    assert_eq!(code(&ztwo(&[])), 1);
    assert_eq!(code(&ztwo(&["--help"])), 0);
    assert_eq!(code(&ztwo(&["predict", "89", "--tower", "M"])), 1);
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: &T) {
    let s = serde_json::to_string(x).unwrap();
    assert!(s.contains("\"schema\":\"ztwo/1\""));
    let y: T = serde_json::from_str(&s).unwrap();
    assert_eq!(&y, x);
}

fn odd_squarefree() -> impl Strategy<Value = u64> {
    (1u64..20_000).prop_map(|k| 2 * k + 1).prop_filter("squarefree", |&d| factor_squarefree(d).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn records_round_trip(d in odd_squarefree(), n in 1u32..6) {
        let sf = factor_squarefree(d).unwrap();
        let tag = classify(&sf).unwrap();
        round_trip(&ClassifyRecord::from(&tag));
        if tag.family.has_exponent() {
            round_trip(&WitnessRecord::new(&tag, &exponent_r_corollary(&tag).unwrap()));
            for t in [Tower::L, Tower::K] {
                round_trip(&PredictionRecord::from(&predict(&sf, n, t).unwrap()));
            }
        }
        let g = ztwo_core::qforms::class_group(&ztwo_core::qforms::discriminant_of(-(d as i64)).unwrap()).unwrap();
        round_trip(&ClassGroupRecord::from(&g));
    }

    #[test]
    fn scan_rows_round_trip(d in odd_squarefree(), skip in any::<bool>()) {
        let oracle = ztwo_cli::cache::CachedOracle::in_memory();
        let rows = ztwo_cli::scan::scan(d, d, None, &Default::default(), &oracle);
        prop_assert_eq!(rows.len(), 1);
        let mut row: ScanRow = rows[0].clone();
        if skip && row.tag.has_exponent() {
            row.shape_L_n1 = Some(Cell::Skipped(ztwo_cli::scan::Skipped::Skipped));
            row.r_oracle = Some(Cell::Skipped(ztwo_cli::scan::Skipped::Skipped));
        }
        round_trip(&JsonScanRow::new(&row));
    }
}

#[test]
fn verify_record_round_trip() {
    round_trip(&VerifyRecord::new("oracle", 10, 3, vec!["x".into()]));
}
