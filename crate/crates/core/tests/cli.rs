use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperg-gauss"))
        .args(args)
        .env_remove("HYPERG_PRECISION_BITS")
        .output()
        .expect("spawn binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// `key=[lo,hi]` from the distance output.
fn bounds(text: &str, key: &str) -> (f64, f64) {
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"));
    let inner = line.trim_start_matches('[').trim_end_matches(']');
    let (lo, hi) = inner.split_once(',').unwrap();
    (lo.parse().unwrap(), hi.parse().unwrap())
}

#[test]
fn pmf_hypergeometric() {
    let o = run(&["pmf", "--hyper", "2", "3", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["0:1/5", "1:3/5", "2:1/5", "variance=2/5", "sigma0_sq=1/3", "symmetric=true"] {
        assert!(s.lines().any(|l| l == line), "{line} missing:\n{s}");
    }
}

#[test]
fn pmf_json_and_binomial() {
    let o = run(&["pmf", "--binom", "3", "1/3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["variance"], "2/3");
    let s = v.to_string();
    assert!(s.contains("8/27") && s.contains("1/27"), "{s}");
}

#[test]
fn pmf_rejects_bad_parameters() {
    let o = run(&["pmf", "--hyper", "5", "2", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds population"));
    assert_eq!(run(&["pmf"]).status.code(), Some(2));
    assert_eq!(run(&["pmf", "--binom", "3", "3/2"]).status.code(), Some(2));
}

#[test]
fn distance_exception_case() {
    let o = run(&["distance", "--N", "2", "--n", "1", "--tau", "sigma0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let (lo, hi) = bounds(&s, "sigma_d_sqrt_8pi");
    assert!(lo > 1.0561 && hi < 1.0562, "{lo} {hi}");
    assert!(s.contains("exception=true"));
    assert!(s.lines().any(|l| l.starts_with("sigma_d_upper") && l.contains("EXPECTED_FAIL")));
}

#[test]
fn distance_cases() {
    let o = run(&["distance", "--N", "6", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let (lo, hi) = bounds(&stdout(&o), "d_closed");
    assert!(lo <= 0.3 && 0.3 <= hi);

    let o = run(&["distance", "--binom", "--n", "9", "--style", "bounds"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let (_, hi) = bounds(&s, "sigma_d");
    assert!(hi < 1.0 / (8.0 * std::f64::consts::PI).sqrt());
    assert!(s.contains("argmax=4"));

    let o = run(&["distance", "--N", "10", "--n", "3", "--tau", "mid", "--style", "mid"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains('±'));
}

#[test]
fn distance_json() {
    let o = run(&["distance", "--N", "8", "--n", "4", "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["N"], "8");
    assert_eq!(v["sigma_sq"], "4/7");
    assert_eq!(v["argmax"], 2);
    assert_eq!(v["exception"], false);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "PASS"));
}

#[test]
fn distance_usage_errors() {
    for args in [
        &["distance", "--N", "5", "--n", "2"][..],
        &["distance", "--N", "6", "--n", "2", "--tau", "3/2"],
        &["distance", "--N", "6", "--n", "2", "--tau", "nonsense"],
        &["distance", "--N", "6", "--n", "7"],
        &["distance", "--N", "6"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn verify_small_sweep() {
    let o = run(&["verify", "--N-max", "2", "--suites", "theorem"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.starts_with("# hyperg-gauss-report v1\n"));
    assert_eq!(s.lines().filter(|l| l.contains("EXPECTED_FAIL")).count(), 1);
    assert!(stderr(&o).contains("3 cases: 2 PASS, 1 EXPECTED_FAIL, 0 FAIL, 0 INCONCLUSIVE"));
}

#[test]
fn verify_config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    let out = dir.path().join("report.json");
    std::fs::write(&cfg, "N_max = 40\nsuites = [\"remarks\"]\nformat = \"csv\"\n").unwrap();
    // Flags win over the file.
    let o = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--N-max",
        "6",
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["config"].as_str().unwrap().starts_with("N_max=6 "), "{}", v["config"]);
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty() && rows.iter().all(|r| r["suite"] == "remarks"));

    std::fs::write(&cfg, "N_max = 4\nbogus = 1\n").unwrap();
    let o = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));

    for args in [
        &["verify", "--N-max", "1"][..],
        &["verify", "--suites", "nope"],
        &["verify", "--N-max", "4", "--tau", "5"],
        &["verify", "--jobs", "0"],
        &["verify", "--precision-bits", "7"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn limit_sweep_rows() {
    let o = run(&["limit-sweep", "--n", "1,3,5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(rows[0].starts_with("n,sigma_sq,"));
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("1,1/4,3.41344746068542"));
    assert!(rows[3].ends_with(",true"));
    assert_eq!(run(&["limit-sweep", "--n", "2"]).status.code(), Some(2));
}

#[test]
fn factorize_and_sandwich() {
    let o = run(&["factorize", "--hyper", "3", "4", "4", "--sandwich"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("3 factors") && s.contains("0.500000000000000"));
    assert!(s.lines().filter(|l| l.contains("PASS")).count() >= 2, "{s}");

    let o = run(&["factorize", "--pmf", "1/4,1/2,1/4"]);
    assert_eq!(o.status.code(), Some(0));

    // Not a convolution of Bernoulli laws.
    let o = run(&["factorize", "--pmf", "1/2,0,1/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["factorize", "--pmf", "1/2,1/3"]).status.code(), Some(2));
}

#[test]
fn concentration_commands() {
    let o = run(&["concentration", "--binom", "4", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("h=1 sup=3/8") && s.contains("h=2 sup=5/8"), "{s}");

    let o = run(&["concentration", "--levy", "2", "1/2", "--h", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equality: PASS"));

    let o = run(&["concentration", "--hyper", "4", "4", "4", "--h", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_subcommand() {
    let o = run(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!stderr(&o).contains('\x1b'));
}
