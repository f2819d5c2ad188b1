use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ghype::sampling::{empirical_marginal, read_batch};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn ghype(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghype"))
        .args(args)
        .output()
        .unwrap()
}

fn path(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn toy_args(report: &Path) -> Vec<String> {
    [
        "--input",
        &fixture("toy.edges"),
        "--directed",
        "--allow-loops",
        "--alpha",
        "0.5",
        "--report",
        report.to_str().unwrap(),
    ]
    .map(String::from)
    .to_vec()
}

fn run(args: &[String]) -> Output {
    ghype(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn toy_report_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = path(&dir, "report.csv");
    let out = run(&toy_args(&report));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&report).unwrap();
    assert_eq!(text, fs::read_to_string(fixture("toy_report.csv")).unwrap());

    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .take(2)
        .map(|l| l.split(',').collect())
        .collect();
    let value = |row: usize, col: usize| rows[row][col].parse::<f64>().unwrap();
    assert!((value(0, 3) - 80.0 / 84.0).abs() < 1e-12);
    assert!((value(0, 4) - 34.0 / 84.0).abs() < 1e-12);
    assert_eq!(value(1, 3), 1.0);
    assert!((value(1, 4) - 28.0 / 84.0).abs() < 1e-12);
}

#[test]
fn json_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = path(&dir, "report.json");
    let mut args = toy_args(&report);
    args.push("--json".into());
    assert!(run(&args).status.success());
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(value["dyads"].as_array().unwrap().len(), 2);
    assert_eq!(value["summary"]["edges_before"], 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| ghype(args).status.code().unwrap();
    let toy = fixture("toy.edges");
    assert_eq!(code(&["--input", &toy, "--directed", "--alpha", "1.5"]), 2);
    assert_eq!(code(&["--input", &toy]), 2);
    assert_eq!(
        code(&["--input", &toy, "--directed", "--omega", "cubic"]),
        2
    );
    assert_eq!(
        code(&["--input", "/nonexistent/graph.edges", "--directed"]),
        3
    );

    let bad = path(&dir, "bad.edges");
    fs::write(&bad, "a b 1\nb c -1\n").unwrap();
    let out = ghype(&["--input", bad.to_str().unwrap(), "--directed"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-positive weight at line 2"));

    let classes = path(&dir, "classes.txt");
    fs::write(&classes, "a x\n").unwrap();
    let spec = format!("block:{},2,1", classes.display());
    assert_eq!(code(&["--input", &toy, "--directed", "--omega", &spec]), 4);

    let unwritable = path(&dir, "missing/dir/out.edges");
    assert_eq!(
        code(&[
            "--input",
            &toy,
            "--directed",
            "--output",
            unwritable.to_str().unwrap()
        ]),
        7
    );
}

#[test]
fn zkc_summary() {
    let spec = format!("block:{},2,1", fixture("zkc_classes.txt"));
    let out = ghype(&[
        "--input",
        &fixture("zkc.edges"),
        "--undirected",
        "--omega",
        &spec,
        "--alpha",
        "0.01",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("links: 78 observed"), "{stdout}");
    assert!(stdout.contains("multi-edges: 231 observed"), "{stdout}");
}

#[test]
fn filter_outputs_are_consistent_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let spec = format!("block:{},2.5,1", fixture("zkc_classes.txt"));
    let mut outputs = Vec::new();
    for k in 0..2 {
        let edges = path(&dir, &format!("filtered{k}.edges"));
        let report = path(&dir, &format!("report{k}.csv"));
        let out = ghype(&[
            "--input",
            &fixture("zkc.edges"),
            "--undirected",
            "--omega",
            &spec,
            "--output",
            edges.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        outputs.push((
            out.stdout,
            fs::read(&edges).unwrap(),
            fs::read(&report).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);

    let (_, edges, report) = &outputs[0];
    let edges = String::from_utf8_lossy(edges);
    let report = String::from_utf8_lossy(report);
    let kept: u64 = edges
        .lines()
        .map(|l| l.split('\t').nth(2).unwrap().parse::<u64>().unwrap())
        .sum();
    let footer = |key: &str| {
        report
            .lines()
            .find_map(|l| l.strip_prefix(&format!("# {key},")))
            .unwrap()
            .to_owned()
    };
    assert_eq!(footer("edges_after"), kept.to_string());
    assert_eq!(footer("links_after"), edges.lines().count().to_string());
    let flagged = report.lines().filter(|l| l.ends_with(",true")).count();
    assert_eq!(flagged, edges.lines().count());
}

#[test]
fn matrix_propensities() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = path(&dir, "omega.csv");
    fs::write(&matrix, ",b,a\na,1,2\nb,1,1\n").unwrap();
    let report = path(&dir, "r.csv");
    let spec = format!("matrix:{}", matrix.display());
    let out = ghype(&[
        "--input",
        &fixture("toy.edges"),
        "--directed",
        "--allow-loops",
        "--omega",
        &spec,
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let partial = path(&dir, "partial.csv");
    fs::write(&partial, ",a\na,1\n").unwrap();
    let spec = format!("matrix:{}", partial.display());
    assert_eq!(
        ghype(&[
            "--input",
            &fixture("toy.edges"),
            "--directed",
            "--omega",
            &spec
        ])
        .status
        .code(),
        Some(4)
    );
}

#[test]
fn self_loops_are_dropped_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let input = path(&dir, "loops.edges");
    fs::write(&input, "a b 2\nb a 1\na a 4\n").unwrap();
    let out = ghype(&["--input", input.to_str().unwrap(), "--directed"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("multi-edges: 3 observed"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-loop"));
    let out = ghype(&[
        "--input",
        input.to_str().unwrap(),
        "--directed",
        "--allow-loops",
    ]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("multi-edges: 7 observed"));
}

#[test]
fn sampling_is_seeded() {
    let toy = fixture("toy.edges");
    let sample = |seed: &str, n: &str| {
        ghype(&[
            "--input",
            &toy,
            "--directed",
            "--allow-loops",
            "--sample",
            n,
            "--seed",
            seed,
        ])
        .stdout
    };
    assert_eq!(sample("7", "100"), sample("7", "100"));
    assert_ne!(sample("7", "100"), sample("8", "100"));
    let empty = String::from_utf8(sample("7", "0")).unwrap();
    assert_eq!(empty.lines().count(), 1);
    assert!(empty.starts_with("# ghype-sample v1 fingerprint="));
}

#[test]
fn sample_means_match_expected_weights() {
    let toy = fixture("toy.edges");
    let out = ghype(&[
        "--input",
        &toy,
        "--directed",
        "--allow-loops",
        "--sample",
        "100000",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let batch = read_batch(out.stdout.as_slice()).unwrap();
    assert_eq!(batch.len(), 100_000);
    // Ξ = [[2, 4], [1, 2]], M = 9, m = 3
    for ((i, j), xi) in [((0, 0), 2.0), ((0, 1), 4.0), ((1, 0), 1.0), ((1, 1), 2.0)] {
        let hist = empirical_marginal(&batch, i, j);
        let mean: f64 = hist.iter().enumerate().map(|(x, f)| x as f64 * f).sum();
        let var: f64 = hist
            .iter()
            .enumerate()
            .map(|(x, f)| (x as f64 - mean).powi(2) * f)
            .sum();
        let se = (var / batch.len() as f64).sqrt();
        assert!(
            (mean - 3.0 * xi / 9.0).abs() < 4.0 * se,
            "({i},{j}): {mean}"
        );
    }
}
