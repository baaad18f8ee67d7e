use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsq-stability"))
        .args(args)
        .env("RAYON_NUM_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const SUBCOMMANDS: [&str; 10] = [
    "condition",
    "kfun",
    "sample",
    "stability-map",
    "orderstats",
    "convergence",
    "cohen",
    "witness",
    "b-oracle",
    "witness-vs-oracle",
];

#[test]
fn condition_prints_one_row_with_header() {
    let o = run(&["condition", "--alpha", "0", "--beta", "0", "--m", "10", "--n", "200", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "alpha,beta,m,n,seed,kappa,clamped");
    let kappa: f64 = lines[1].split(',').nth(5).unwrap().parse().unwrap();
    assert!((1.0..10.0).contains(&kappa));
    assert!(stderr(&o).is_empty());
}

#[test]
fn b_oracle_quadratic_example() {
    let o = run(&["b-oracle", "--m", "2", "--points", "-1,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.25).abs() < 1e-6);
}

#[test]
fn domain_errors_exit_two_on_stderr_only() {
    let o = run(&["condition", "--alpha", "-1", "--m", "2", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert_eq!(stderr(&o).trim(), "error: domain: alpha must exceed -1");

    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).starts_with("error: "));

    let o = run(&["stability-map", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let line = stderr(&o);
    assert_eq!(line.lines().count(), 1);
    let mut parts = line.splitn(3, ": ");
    assert_eq!(parts.next(), Some("error"));
    assert!(!parts.next().unwrap().is_empty());
}

#[test]
fn help_documents_defaults_everywhere() {
    for sub in SUBCOMMANDS {
        let o = run(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        let text = stdout(&o);
        for needle in ["1e-13", "--trials 100", "2e^2*cbar + 1", "RAYON_NUM_THREADS"] {
            assert!(text.contains(needle), "{sub} --help lacks {needle}");
        }
    }
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cases: [&[&str]; 5] = [
        &["stability-map", "--m-max", "4", "--n-max", "12", "--trials", "5", "--seed", "3"],
        &["sample", "--alpha", "0.5", "--beta", "-0.5", "--n", "20", "--seed", "11"],
        &["orderstats", "--n", "50", "--trials", "200"],
        &["witness-vs-oracle", "--m-max", "4", "--n-max", "8", "--trials", "2"],
        &["convergence", "--m-min", "3", "--m-max", "6", "--trials", "3", "--function", "exp"],
    ];
    for args in cases {
        let a = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        let b = Command::new(env!("CARGO_BIN_EXE_lsq-stability"))
            .args(args)
            .env("RAYON_NUM_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file_and_keeps_stdout_clean() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.csv");
    let p = path.to_str().unwrap();
    let o = run(&["stability-map", "--m-min", "0", "--m-max", "3", "--n-max", "6", "--trials", "3", "--out", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("alpha,beta,m,n,trials,mean_kappa,mean_log10_kappa,clamped_fraction"));
    for row in lines.filter(|l| l.split(',').nth(2) == Some("0")) {
        assert_eq!(row.split(',').nth(5), Some("1"));
    }

    let bad = dir.path().join("missing").join("x.csv");
    let o = run(&["kfun", "--m", "3", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"alpha": 0.5, "beta": 0.5, "m": 3, "n": 9, "seed": 4}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = stdout(&run(&["condition", "--config", c]));
    assert!(from_file.lines().nth(1).unwrap().starts_with("0.5,0.5,3,9,4,"));
    let overridden = stdout(&run(&["condition", "--config", c, "--m", "2"]));
    assert!(overridden.lines().nth(1).unwrap().starts_with("0.5,0.5,2,9,4,"));

    std::fs::write(&cfg, r#"{"nonsense": 1}"#).unwrap();
    let o = run(&["condition", "--config", c]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: config: "));
}

#[test]
fn kfun_matches_closed_forms() {
    let k: f64 = stdout(&run(&["kfun", "--m", "7"])).lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((k - 64.0).abs() < 1e-9);
    let cheb = run(&["kfun", "--alpha", "-0.5", "--beta", "-0.5", "--m", "4"]);
    let k: f64 = stdout(&cheb).lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((k - 9.0).abs() < 1e-9);
}

#[test]
fn notes_go_to_stderr() {
    let o = run(&["cohen", "--m", "0", "--r", "1", "--trials", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).starts_with("note: "));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[6], "52");
    assert_eq!(row[8], "1");
}
