use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;

use schmidt_cli::{digest, parse, serialize, RunReport};
use schmidt_core::scenarios::MeasurementSet;
use schmidt_core::stats::{score_dataset, CountsTable, JobCounts, SETTINGS};
use schmidt_core::{Error, ScenarioKind};

fn schmidt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schmidt")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn simulate(dir: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut args = vec!["simulate", "-o", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = schmidt(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn simulate_is_deterministic_and_scores_like_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--scenario", "a-set2", "--shots", "20000", "--jobs", "3", "--seed", "11"];
    let first = simulate(dir.path(), "one.txt", &args);
    let second = simulate(dir.path(), "two.txt", &args);
    let text = std::fs::read_to_string(&first).unwrap();
    assert_eq!(text, std::fs::read_to_string(&second).unwrap());

    let table = parse(&text).unwrap();
    assert_eq!(table.job_count(), 3);
    assert_eq!(table.set(), MeasurementSet::SetII);
    let o = schmidt(&["score", "--json", first.to_str().unwrap()]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let library = score_dataset(&table).unwrap();
    let w = json["witness"][0]["report"]["w"].as_f64().unwrap();
    assert!((w - library.reports[0].1.w).abs() <= 1e-15 * w.abs());
    assert_eq!(json["input_digest"], digest(&table));
    assert!(json["no_signaling"].is_object());
}

#[test]
fn sequential_flag_gives_identical_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--scenario", "b", "--shots", "5000", "--jobs", "4", "--seed", "2"];
    let par = simulate(dir.path(), "p.txt", &args);
    let mut seq_args = vec!["--sequential"];
    seq_args.extend_from_slice(&args);
    let seq = simulate(dir.path(), "s.txt", &seq_args);
    assert_eq!(std::fs::read_to_string(par).unwrap(), std::fs::read_to_string(seq).unwrap());
}

#[test]
fn scenario_b_report_lists_four_spectators() {
    let dir = tempfile::tempdir().unwrap();
    let file = simulate(dir.path(), "b.txt", &["--scenario", "b", "--shots", "10000", "--seed", "5"]);
    let table = parse(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let report = RunReport::build(&table).unwrap();
    assert_eq!(report.witness.len(), 4);
    assert!(report.no_signaling.is_none());
    let text = stdout(&schmidt(&["score", file.to_str().unwrap()]));
    assert!(text.contains("units of 1e-12"), "{text}");
    let o = schmidt(&["nosignal", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn perturbation_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let file = simulate(dir.path(), "a.txt", &["--scenario", "a-set1", "--shots", "1000000", "--seed", "3"]);
    let out = dir.path().join("p.txt");
    let o = schmidt(&[
        "perturb",
        file.to_str().unwrap(),
        "--epsilon",
        "0.01",
        "--mode",
        "signaling",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&schmidt(&["nosignal", "--json", out.to_str().unwrap()]))).unwrap();
    assert!(json["max_abs_z"].as_f64().unwrap() > 5.0);
    let bad = schmidt(&["perturb", file.to_str().unwrap(), "--epsilon", "2", "--mode", "extra-dim"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn maxima_reports_published_value() {
    let o = schmidt(&["maxima", "--kind", "a", "--model", "classical", "--n", "4", "--d", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("2304/3125") && text.contains("MATCH"), "{text}");
    let o = schmidt(&["maxima", "--kind", "b", "--model", "real", "--n", "4", "--d", "3", "--json"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((json["value"].as_f64().unwrap() - 1.6875e-5).abs() < 1e-12);
    let o = schmidt(&["maxima", "--kind", "a", "--model", "classical", "--n", "9", "--d", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_reports_the_conflict() {
    let o = schmidt(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("det 1/8"));
    assert!(text.contains("CONFLICT"));
    assert!(text.contains(", 0 failed,"), "{text}");
}

#[test]
fn malformed_files_exit_with_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = simulate(dir.path(), "a.txt", &["--scenario", "a-set1", "--shots", "100", "--seed", "1"]);
    let text = std::fs::read_to_string(&file).unwrap();
    let negative = dir.path().join("neg.txt");
    std::fs::write(&negative, text.replacen("setting 2 3 ", "setting 2 3 -", 1)).unwrap();
    let o = schmidt(&["score", negative.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("job 1") && err.contains("negative"), "{err}");
    assert_eq!(schmidt(&["score", "/nonexistent/counts.txt"]).status.code(), Some(2));
}

#[test]
fn count_sums_must_match_shots() {
    let text = serialize(&table_a(vec![grid(7)]));
    let broken = text.replacen("shots 7", "shots 8", 1);
    assert!(matches!(parse(&broken), Err(Error::Counts { .. })));
}

fn grid(shots: u64) -> JobCounts {
    JobCounts::A(Box::new([[[shots, 0, 0, 0]; SETTINGS]; SETTINGS]))
}

fn table_a(jobs: Vec<JobCounts>) -> CountsTable {
    let shots = match &jobs[0] {
        JobCounts::A(g) => g[0][0].iter().sum(),
        JobCounts::B(r) => r.iter().sum(),
    };
    CountsTable::new(ScenarioKind::A, MeasurementSet::SetI, shots, 1, jobs, Some(1), "sim").unwrap()
}

fn split(total: u64, cuts: [u64; 3]) -> [u64; 4] {
    let mut c = cuts.map(|x| x % (total + 1));
    c.sort_unstable();
    [c[0], c[1] - c[0], c[2] - c[1], total - c[2]]
}

fn arb_table() -> impl Strategy<Value = CountsTable> {
    (
        1u64..10_000,
        prop::collection::vec(prop::array::uniform3(any::<u64>()), SETTINGS * SETTINGS),
        1usize..4,
        prop::option::of(any::<u64>()),
        "[a-z][a-z0-9 _-]{0,20}",
        prop::sample::select(vec![MeasurementSet::SetI, MeasurementSet::SetII]),
    )
        .prop_map(|(shots, cuts, jobs, seed, device, set)| {
            let mut g = [[[0; 4]; SETTINGS]; SETTINGS];
            for (k, c) in cuts.iter().enumerate() {
                g[k / SETTINGS][k % SETTINGS] = split(shots, *c);
            }
            let device = device.trim().to_string();
            CountsTable::new(ScenarioKind::A, set, shots, 1, vec![JobCounts::A(Box::new(g)); jobs], seed, device)
                .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_then_parse_is_identity(table in arb_table()) {
        let text = serialize(&table);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &table);
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(digest(&back), digest(&table));
    }

    #[test]
    fn raw_b_tables_round_trip(raw in prop::collection::vec(0u64..500, 64), jobs in 1usize..3) {
        let total: u64 = raw.iter().sum();
        prop_assume!(total > 0);
        let table = CountsTable::new(
            ScenarioKind::B,
            MeasurementSet::Tetrahedron,
            total,
            1,
            vec![JobCounts::B(raw); jobs],
            None,
            "",
        )
        .unwrap();
        prop_assert_eq!(parse(&serialize(&table)).unwrap(), table);
    }
}
