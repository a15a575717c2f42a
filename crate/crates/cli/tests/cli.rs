use std::path::Path;
use std::process::{Command, Output};

use domrt::algo::{Metric, SampleMeta, SampleSet};
use domrt::dist::{sample_spec, GatedGeomSpec};

fn domrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_domrt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `(k, pmf)` rows of a distribution table.
fn table(text: &str) -> Vec<(u64, f64)> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('k'))
        .map(|l| {
            let mut f = l.split(',');
            (
                f.next().unwrap().parse().unwrap(),
                f.next().unwrap().parse().unwrap(),
            )
        })
        .collect()
}

/// The bound column of the first data row.
fn first_bound(text: &str) -> f64 {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|&h| h == "bound").unwrap();
    lines
        .next()
        .unwrap()
        .split(',')
        .nth(col)
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let base = [
        "simulate",
        "--algo",
        "rls",
        "--bench",
        "leadingones",
        "--n",
        "20",
        "--runs",
        "1000",
        "--seed",
        "7",
    ];
    let first = domrt(&[&base[..], &["--out", path_str(&a)]].concat());
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    let second = Command::new(env!("CARGO_BIN_EXE_domrt"))
        .args(base)
        .args(["--out", path_str(&b)])
        .env("DOMRT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&second), 0);

    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let set = SampleSet::read_csv(text.as_bytes()).unwrap();
    assert_eq!(set.n_samples(), 1000);
    assert!((set.mean() - 200.0).abs() < 4.0 * set.std_err());
    assert!(text.contains("# config.seed=7\n"));
}

#[test]
fn censored_runs_exit_two() {
    let o = domrt(&[
        "simulate", "--algo", "ea", "--bench", "jump", "--k", "5", "--n", "20", "--budget", "10",
        "--runs", "50",
    ]);
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("50 of 50 runs censored"),
        "{}",
        stderr(&o)
    );
    assert!(stdout(&o).contains("# censored=50\n"));
}

#[test]
fn unknown_ids_list_the_valid_ones() {
    let cases: [&[&str]; 5] = [
        &["simulate", "--algo", "sa", "--bench", "onemax", "--n", "5"],
        &["simulate", "--algo", "ea", "--bench", "twomax", "--n", "5"],
        &["model", "--preset", "trap", "--n", "5"],
        &["bound", "--family", "chebyshev", "--n", "5", "--delta", "1"],
        &["report", "--suite", "everything"],
    ];
    for args in cases {
        let o = domrt(args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(stderr(&o).contains("valid ids"), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(code(&domrt(&["simulate", "--algo", "ea", "--n", "5"])), 1);
    assert_eq!(code(&domrt(&["--help"])), 0);
}

#[test]
fn model_tables() {
    let o = domrt(&["model", "--preset", "general", "--n", "3", "--p", "0.5"]);
    assert_eq!(code(&o), 0);
    let rows = table(&stdout(&o));
    assert_eq!(rows[0], (1, 0.125));
    assert_eq!(rows[1], (2, 0.125 * 0.875));

    let o = domrt(&[
        "model", "--preset", "lo-exact", "--op", "onebit", "--n", "10",
    ]);
    assert_eq!(code(&o), 0);
    let mean: f64 = table(&stdout(&o)).iter().map(|&(k, p)| k as f64 * p).sum();
    assert!((mean - 50.0).abs() < 1e-3, "{mean}");
}

#[test]
fn zero_eps_needs_finite_support() {
    assert_eq!(
        code(&domrt(&[
            "model", "--preset", "general", "--n", "3", "--p", "0.5", "--eps", "0"
        ])),
        1
    );
    let o = domrt(&[
        "model", "--preset", "general", "--n", "3", "--p", "1", "--eps", "0",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(table(&stdout(&o)), vec![(1, 1.0)]);
}

#[test]
fn bound_values_and_validation() {
    let o = domrt(&["bound", "--family", "equal", "--n", "11", "--delta", "1"]);
    assert_eq!(code(&o), 0);
    assert!((first_bound(&stdout(&o)) - 0.0821).abs() < 5e-5);

    let o = domrt(&[
        "bound", "--family", "coupon", "--n", "10", "--m", "1", "--k", "10", "--delta", "0",
    ]);
    assert_eq!(first_bound(&stdout(&o)), 1.0);

    for family in [
        "janson1",
        "janson2",
        "scheideler",
        "weak",
        "witt",
        "lower-janson",
        "lower-middle",
        "lower-scheideler",
    ] {
        let grid = if family.starts_with("lower") {
            "0:1:6"
        } else {
            "0:3:7"
        };
        let o = domrt(&[
            "bound",
            "--family",
            family,
            "--validate",
            "0.5x4,0.3x4,0.1x4",
            "--grid",
            grid,
        ]);
        assert_eq!(code(&o), 0, "{family}: {}", stdout(&o));
        assert!(stdout(&o).contains("# validation PASS"), "{family}");
        let rows = stdout(&o).lines().filter(|l| l.starts_with(family)).count();
        assert_eq!(
            rows,
            if family == "witt" {
                14
            } else {
                grid.rsplit(':').next().unwrap().parse().unwrap()
            }
        );
    }
    let o = domrt(&[
        "bound",
        "--family",
        "equal",
        "--validate",
        "0.2x12",
        "--delta",
        "0.5",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("# config.mu=60\n"));
}

#[test]
fn compare_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let file = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let (ea, onemax, slow, fast) = (
        file("ea.csv"),
        file("onemax.csv"),
        file("slow.csv"),
        file("fast.csv"),
    );

    assert_eq!(
        code(&domrt(&[
            "simulate", "--algo", "ea", "--bench", "onemax", "--n", "15", "--runs", "2000",
            "--out", &ea
        ])),
        0
    );
    assert_eq!(
        code(&domrt(&[
            "model", "--preset", "onemax", "--n", "15", "--out", &onemax
        ])),
        0
    );
    assert_eq!(
        code(&domrt(&[
            "model", "--preset", "general", "--n", "1", "--p", "0.8", "--out", &fast
        ])),
        0
    );
    let spec = GatedGeomSpec::geometric_sum(&[0.2]).unwrap();
    let values = (0..2000).map(|i| sample_spec(&spec, i)).collect();
    let set = SampleSet::new(values, Metric::Iterations, SampleMeta::default()).unwrap();
    set.write_csv(std::fs::File::create(&slow).unwrap())
        .unwrap();

    let same = domrt(&["compare", "--a", &ea, "--b", &ea]);
    assert_eq!(code(&same), 0);
    assert!(stdout(&same).contains("\nconsistent,"));
    assert_eq!(
        code(&domrt(&[
            "compare", "--a", &ea, "--b", &onemax, "--alpha", "0.001"
        ])),
        0
    );

    let refuted = domrt(&["compare", "--a", &slow, "--b", &fast]);
    assert_eq!(code(&refuted), 3);
    let line = stdout(&refuted).lines().last().unwrap().to_string();
    assert!(line.starts_with("refuted,1,"), "{line}");

    std::fs::write(file("junk.csv"), "x,y\n1,2\n").unwrap();
    assert_eq!(
        code(&domrt(&["compare", "--a", &file("junk.csv"), "--b", &ea])),
        1
    );
    let censored = domrt(&[
        "simulate", "--algo", "rs", "--bench", "onemax", "--n", "30", "--budget", "5", "--runs",
        "5",
    ]);
    std::fs::write(file("censored.csv"), &censored.stdout).unwrap();
    let o = domrt(&["compare", "--a", &file("censored.csv"), "--b", &ea]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("censored"));
}

#[test]
fn report_rows_and_overlay() {
    let o = domrt(&["report", "--suite", "list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 13);
    assert!(stdout(&o).lines().any(|l| l.starts_with("lo-exactness\t")));

    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("overlay.csv");
    let o = domrt(&[
        "report",
        "--suite",
        "fitness-level",
        "--plot",
        path_str(&plot),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = stdout(&o);
    assert!(rows.contains("suite,check,expected,observed,tolerance,pass\n"));
    assert!(rows
        .lines()
        .filter(|l| l.starts_with("fitness-level,"))
        .all(|l| l.ends_with(",true")));
    let overlay = std::fs::read_to_string(&plot).unwrap();
    assert!(overlay.contains("series,lambda,cdf_empirical,cdf_model,band\n"));
    assert!(overlay.lines().filter(|l| !l.starts_with('#')).count() > 1);
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        "# shared settings\nalgo = ea\nbench = onemax\nn = 12\nruns = 30\nseed = 5\n",
    )
    .unwrap();
    let o = domrt(&["--config", path_str(&config), "simulate", "--n", "8"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    for line in [
        "# config.n=8",
        "# config.seed=5",
        "# config.runs=30",
        "# config.rate=0.125",
        "# config.metric=iterations",
    ] {
        assert!(
            text.lines().any(|l| l == line),
            "{line} missing from\n{text}"
        );
    }
    assert_eq!(
        SampleSet::read_csv(text.as_bytes()).unwrap().n_samples(),
        30
    );

    std::fs::write(&config, "n: 12\n").unwrap();
    assert_eq!(
        code(&domrt(&[
            "--config",
            path_str(&config),
            "simulate",
            "--algo",
            "rls"
        ])),
        1
    );
}
