//! End-to-end tests of the `kxxz` command line, run in process.

use kxxz_cli::config::ReportFormat;
use kxxz_cli::{decode_report, run, RunConfig, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_INCOMPLETE, EXIT_OK};
use kxxz_core::wire::parse_c64;
use kxxz_core::{c64, C64};
use proptest::prelude::*;
use std::path::Path;

/// Runs the CLI and returns (exit code, stdout, stderr).
fn kxxz(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kxxz").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_bethe_finds_every_solution() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.jsonl");
    let (code, stdout, _) = kxxz(&[
        "solve-bethe", "--n", "4", "--k", "2", "--a", "1.0,1.3,1.7,2.1", "--hbar", "0.35", "--z", "0.2", "--out", path_str(&out),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("6 solutions"), "{stdout}");
    let (code, csv, _) = kxxz(&["report", "--solutions", path_str(&out), "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn solve_bethe_at_zero_gives_classical_subsets() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.jsonl");
    let a = [1.0, 1.3, 1.7];
    let (code, _, _) = kxxz(&["solve-bethe", "--n", "3", "--k", "2", "--a", "1.0,1.3,1.7", "--hbar", "0.35", "--z", "0", "--out", path_str(&out)]);
    assert_eq!(code, EXIT_OK);
    let (_, csv, _) = kxxz(&["report", "--solutions", path_str(&out), "--format", "csv"]);
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let mut seen = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let members: Vec<usize> = rec[0].trim_matches(|c| c == '{' || c == '}').split(',').map(|m| m.parse().unwrap()).collect();
        let mut roots: Vec<f64> = (1..=2).map(|i| parse_c64(&rec[i]).unwrap().re).collect();
        roots.sort_by(f64::total_cmp);
        let expect: Vec<f64> = members.iter().map(|&m| a[m - 1]).collect();
        for (r, e) in roots.iter().zip(&expect) {
            assert!((r - e).abs() < 1e-12, "{r} vs {e}");
        }
        seen += 1;
    }
    assert_eq!(seen, 3);
}

/// Roots of `(s - a1)(s - a2) = c (hbar a1 - s)(hbar a2 - s)`, `c = z / hbar`.
fn quadratic_roots(a: [C64; 2], hbar: C64, z: C64) -> [C64; 2] {
    let c = z / hbar;
    let qa = 1.0 - c;
    let qb = -(a[0] + a[1]) + c * hbar * (a[0] + a[1]);
    let qc = a[0] * a[1] * (1.0 - c * hbar * hbar);
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
}

#[test]
fn report_table_matches_quadratic_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.jsonl");
    let a = [c64(1.0, 0.1), c64(2.1, -0.2)];
    let hbar = c64(0.8, 0.15);
    let z = c64(0.3, 0.1);
    let (code, _, _) = kxxz(&[
        "solve-bethe", "--n", "2", "--k", "1", "--a", "1.0+0.1i,2.1-0.2i", "--hbar", "0.8+0.15i", "--z", "0.3+0.1i", "--out", path_str(&out),
    ]);
    assert_eq!(code, EXIT_OK);
    let (_, json, _) = kxxz(&["report", "--solutions", path_str(&out), "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&json).unwrap();
    let oracle = quadratic_roots(a, hbar, z);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let s = parse_c64(row["roots"][0].as_str().unwrap()).unwrap();
        let best = oracle.iter().map(|r| (r - s).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 1e-10, "root {s} misses the oracle by {best}");
    }
}

#[test]
fn malformed_parameters_exit_with_config_code() {
    let (code, _, err) = kxxz(&["solve-bethe", "--n", "2", "--k", "1", "--a", "1.0,abc", "--z", "0.1"]);
    assert_eq!(code, EXIT_CONFIG, "{err}");
    let (code, _, _) = kxxz(&["solve-bethe", "--n", "2", "--k", "3", "--z", "0.1"]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _, _) = kxxz(&["verify", "nosuch"]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _, _) = kxxz(&["verify", "algebra", "--bogus-flag"]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn empty_or_missing_solutions_exit_incomplete() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.jsonl");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(kxxz(&["report", "--solutions", path_str(&empty)]).0, EXIT_INCOMPLETE);
    let missing = dir.path().join("missing.jsonl");
    assert_eq!(kxxz(&["report", "--solutions", path_str(&missing)]).0, EXIT_INCOMPLETE);
    assert_eq!(kxxz(&["report", "--input", path_str(&missing)]).0, EXIT_INCOMPLETE);
}

#[test]
fn verify_algebra_passes() {
    let (code, stdout, _) = kxxz(&["verify", "algebra", "--n", "3"]);
    assert_eq!(code, EXIT_OK, "{stdout}");
    assert!(stdout.contains("0 failed"));
}

#[test]
fn sabotage_flags_fail_verification() {
    for flag in ["--sabotage-sign", "--sabotage-branch", "--sabotage-am"] {
        let (code, stdout, _) = kxxz(&["verify", "all", "--n", "2", flag]);
        assert_eq!(code, EXIT_CHECK_FAILED, "{flag}: {stdout}");
        assert!(stdout.contains("FAIL "));
    }
}

#[test]
fn reports_are_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run_once = |name: &str| {
        let path = dir.path().join(name);
        let (code, _, _) = kxxz(&["verify", "transfer", "--n", "3", "--report", path_str(&path)]);
        assert_eq!(code, EXIT_OK);
        std::fs::read(path).unwrap()
    };
    assert_eq!(run_once("a.json"), run_once("b.json"));
}

#[test]
fn csv_and_json_reports_agree() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    for (path, format) in [(&json, "json"), (&csv, "csv")] {
        let (code, _, _) = kxxz(&["verify", "wronskian", "--n", "2", "--report", path_str(path), "--format", format]);
        assert_eq!(code, EXIT_OK);
    }
    let from_json = decode_report(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let from_csv = decode_report(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert!(!from_json.entries.is_empty());
    assert_eq!(from_json.entries, from_csv.entries);
    let (code, table, _) = kxxz(&["report", "--input", path_str(&json)]);
    assert_eq!(code, EXIT_OK);
    assert!(table.contains("wronskian.fp.x0"));
}

#[test]
fn tolerance_overrides_regrade_checks() {
    let (code, stdout, _) = kxxz(&["verify", "transfer", "--n", "2", "--tol", "transfer.eigen=1e-300"]);
    assert_eq!(code, EXIT_CHECK_FAILED, "{stdout}");
    assert!(stdout.lines().filter(|l| l.starts_with("FAIL")).all(|l| l.contains("transfer.eigen")));
    let (code, _, _) = kxxz(&["verify", "transfer", "--n", "2", "--tol", "nosuch=1e-3"]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _, _) = kxxz(&["verify", "transfer", "--n", "2", "--tol", "transfer.eigen"]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn config_file_drives_verify() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("out.json");
    let mut cfg = RunConfig::default();
    cfg.params.n = 2;
    cfg.task.checks = vec!["algebra".into(), "tq".into()];
    cfg.io.report = Some(report.clone());
    cfg.io.format = ReportFormat::Json;
    let path = dir.path().join("run.toml");
    std::fs::write(&path, cfg.to_toml()).unwrap();
    let (code, stdout, _) = kxxz(&["verify", "--config", path_str(&path)]);
    assert_eq!(code, EXIT_OK, "{stdout}");
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["suites"], serde_json::json!(["algebra", "tq"]));
    assert_eq!(doc["status"], "pass");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let text = RunConfig::default().to_toml().replace("[task]", "[task]\nsurprise = 1");
    assert!(RunConfig::from_toml(&text).is_err());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, text).unwrap();
    assert_eq!(kxxz(&["verify", "--config", path_str(&path)]).0, EXIT_CONFIG);
}

fn complex_text() -> impl Strategy<Value = String> {
    (-5.0f64..5.0, -5.0f64..5.0).prop_map(|(re, im)| kxxz_core::wire::format_c64(c64(re, im)))
}

/// Valid parameter blocks: `a` empty or `n` well-separated values, and
/// `|hbar|` inside the unit disk away from its boundary.
fn params_strategy() -> impl Strategy<Value = (usize, Vec<String>, String)> {
    (
        1usize..7,
        any::<bool>(),
        proptest::collection::vec((-0.3f64..0.3, -0.3f64..0.3), 6),
        0.3f64..0.9,
        0.1f64..3.0,
    )
        .prop_map(|(n, explicit, offsets, r, theta)| {
            let a = if explicit {
                (0..n)
                    .map(|i| kxxz_core::wire::format_c64(c64(1.0 + 1.2 * i as f64 + offsets[i].0, offsets[i].1)))
                    .collect()
            } else {
                Vec::new()
            };
            (n, a, kxxz_core::wire::format_c64(C64::from_polar(r, theta)))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn run_config_round_trips_through_toml(
        (n, a, hbar) in params_strategy(),
        m in 0usize..12,
        d_max in 1usize..40,
        z in proptest::collection::vec(complex_text(), 0..4),
        tol in proptest::collection::btree_map("[a-z]{1,8}(\\.[a-z0-9]{1,6})?", 1e-20f64..1.0, 0..4),
        csv in any::<bool>(),
    ) {
        let mut cfg = RunConfig::default();
        cfg.params.n = n;
        cfg.params.a = a;
        cfg.params.hbar = hbar;
        cfg.task.m = m;
        cfg.task.d_max = d_max;
        cfg.task.z = z;
        cfg.task.tolerances = tol;
        cfg.io.format = if csv { ReportFormat::Csv } else { ReportFormat::Json };
        let back = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
