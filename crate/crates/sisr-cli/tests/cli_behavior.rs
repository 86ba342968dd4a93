use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_sisr");

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn sisr")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn missing_empty_coalition_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.csv"), "mask,value\n1,1\n2,2\n3,4\n").unwrap();
    let output = run_in(dir.path(), &["shapley", "--payoffs", "bad.csv"]);
    assert_eq!(output.status.code(), Some(1), "{}", stderr(&output));
    assert!(
        stderr(&output).contains("empty coalition"),
        "stderr: {}",
        stderr(&output)
    );
}

#[test]
fn unknown_scheme_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(dir.path(), &["gen", "--scheme", "bogus", "--p", "4"]);
    assert_eq!(output.status.code(), Some(2), "{}", stderr(&output));
    assert!(
        stderr(&output).contains("unknown transform scheme"),
        "stderr: {}",
        stderr(&output)
    );
}

#[test]
fn flat_payoffs_are_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("flat.csv"),
        "mask,value\n0,5\n1,5\n2,5\n3,5\n",
    )
    .unwrap();
    let output = run_in(
        dir.path(),
        &["solve", "--payoffs", "flat.csv", "--sparsity", "1"],
    );
    assert_eq!(output.status.code(), Some(3), "{}", stderr(&output));
    assert!(
        stderr(&output).contains("flat"),
        "stderr: {}",
        stderr(&output)
    );
}

#[test]
fn shapley_matches_hand_computation() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("game.csv"),
        "mask,value\n0,0\n1,1\n2,2\n3,4\n",
    )
    .unwrap();
    let output = run_in(
        dir.path(),
        &["shapley", "--payoffs", "game.csv", "--check-wls"],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let csv = fs::read_to_string(dir.path().join("shapley.csv")).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("feature,beta"));
    let betas: Vec<(usize, f64)> = rows
        .map(|line| {
            let (feature, beta) = line.split_once(',').unwrap();
            (feature.parse().unwrap(), beta.parse().unwrap())
        })
        .collect();
    assert_eq!(betas.len(), 2);
    assert_eq!(betas[0].0, 1);
    assert_eq!(betas[1].0, 2);
    assert!((betas[0].1 - 1.5).abs() < 1e-12, "beta_1 = {}", betas[0].1);
    assert!((betas[1].1 - 2.5).abs() < 1e-12, "beta_2 = {}", betas[1].1);

    let summary = stdout(&output);
    let discrepancy: f64 = summary
        .split("wls_discrepancy=")
        .nth(1)
        .expect("summary reports the wls discrepancy")
        .trim()
        .parse()
        .unwrap();
    assert!(discrepancy < 1e-8, "routes disagree by {discrepancy}");
}

#[test]
fn gen_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["first", "second"] {
        let output = run_in(
            dir.path(),
            &[
                "gen",
                "--scheme",
                "sparse",
                "--p",
                "5",
                "--sigma0",
                "1e-2",
                "--seed",
                "42",
                "--out",
                &format!("{name}.csv"),
                "--truth-out",
                &format!("{name}.json"),
            ],
        );
        assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    }
    let first = fs::read(dir.path().join("first.csv")).unwrap();
    let second = fs::read(dir.path().join("second.csv")).unwrap();
    assert_eq!(first, second, "same seed produced different payoff tables");
}

#[test]
fn ric_selection_recovers_true_sparsity() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &[
            "gen", "--scheme", "sparse", "--p", "5", "--sigma0", "1e-3", "--seed", "9",
        ],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let output = run_in(
        dir.path(),
        &["solve", "--payoffs", "payoffs.csv", "--ric", "1:5"],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let text = fs::read_to_string(dir.path().join("solution.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["ric"]["selected"], 3);
    assert_eq!(doc["ric"]["curve"].as_array().unwrap().len(), 5);
    assert_eq!(doc["sparsity"], 3);
}

#[test]
fn isotonic_pools_order_violations() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("in.csv"), "value,weight\n3,1\n1,1\n2,1\n").unwrap();
    let output = run_in(dir.path(), &["isotonic", "--data", "in.csv"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let csv = fs::read_to_string(dir.path().join("isotonic.csv")).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("value,weight,fitted"));
    for line in rows {
        let fitted: f64 = line.rsplit_once(',').unwrap().1.parse().unwrap();
        assert!((fitted - 2.0).abs() < 1e-12, "fitted {fitted}");
    }
}

#[test]
fn transform_tsv_is_sorted_and_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &[
            "gen", "--scheme", "tangent", "--p", "6", "--seed", "5",
        ],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let output = run_in(
        dir.path(),
        &["solve", "--payoffs", "payoffs.csv", "--sparsity", "6"],
    );
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let tsv = fs::read_to_string(dir.path().join("transform.tsv")).unwrap();
    let mut rows = tsv.lines();
    assert_eq!(rows.next(), Some("nu\tt"));
    let mut previous: Option<(f64, f64)> = None;
    let mut count = 0;
    for line in rows {
        let (nu, t) = line.split_once('\t').unwrap();
        let point: (f64, f64) = (nu.parse().unwrap(), t.parse().unwrap());
        if let Some(last) = previous {
            assert!(point.0 >= last.0, "nu column not sorted");
            assert!(point.1 >= last.1 - 1e-12, "fitted transform not monotone");
        }
        previous = Some(point);
        count += 1;
    }
    assert_eq!(count, 64, "one row per coalition");
}
