use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polarint"))
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn assert_valid(schema_file: &str, value: &Value) {
    let path = repo_root().join("docs/schemas").join(schema_file);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}\n{value:#}");
}

#[test]
fn constants_for_the_sphere() {
    let out = run(&["constants", "--n", "3", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid("constants.schema.json", &v);
    let log_c = v["logC"].as_f64().unwrap();
    assert!((log_c - (2.0 * std::f64::consts::PI).ln()).abs() < 1e-14);
}

#[test]
fn constants_omit_unrepresentable_c() {
    let v = json(&run(&["constants", "--n", "400", "--k", "200"]));
    assert!(v.get("C").is_none());
    assert_valid("constants.schema.json", &v);
    let lit = json(&run(&["constants", "--n", "2", "--k", "1", "--variant", "paper"]));
    assert_eq!(lit["variant"], "paper");
    assert!(lit["logC"].as_f64().unwrap().abs() < 1e-14);
}

#[test]
fn polar_of_identity() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("id.csv");
    std::fs::write(&input, "3,3\n1,0,0\n0,1,0\n0,0,1\n").unwrap();
    let out = run(&["polar", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid("polar.schema.json", &v);
    assert!(v["reconstruction_error"].as_f64().unwrap() <= 1e-15);
    for key in ["O", "P"] {
        for (i, row) in v[key].as_array().unwrap().iter().enumerate() {
            for (j, x) in row.as_array().unwrap().iter().enumerate() {
                assert_eq!(x.as_f64().unwrap(), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    let target = dir.path().join("out.json");
    let out = run(&[
        "polar",
        "--input",
        input.to_str().unwrap(),
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(written, v);
}

#[test]
fn polar_rejects_singular_and_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let singular = dir.path().join("s.csv");
    std::fs::write(&singular, "2,2\n1,2\n2,4\n").unwrap();
    let out = run(&["polar", "--input", singular.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let broken = dir.path().join("b.csv");
    std::fs::write(&broken, "2,2\n1,x\n0,1\n").unwrap();
    assert_eq!(
        run(&["polar", "--input", broken.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["polar", "--input", "/nonexistent.csv"]).status.code(),
        Some(2)
    );
}

#[test]
fn sample_blocks_parse_back() {
    let out = run(&[
        "sample", "stiefel", "--n", "4", "--k", "2", "--count", "3", "--seed", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let blocks = polarint::matcore::csv::parse_blocks(&text).unwrap();
    assert_eq!(blocks.len(), 3);
    for b in &blocks {
        assert_eq!(b.shape(), (4, 2));
        assert!(b.orthonormality_defect() <= 1e-12);
    }
    let other = run(&[
        "sample", "stiefel", "--n", "4", "--k", "2", "--count", "3", "--seed", "5", "--stream", "1",
    ]);
    assert_ne!(text.as_bytes(), other.stdout.as_slice());

    for (ens, shape) in [("ginibre", (3, 2)), ("posdef", (2, 2)), ("symmetric", (2, 2))] {
        let out = run(&["sample", ens, "--n", "3", "--k", "2"]);
        assert_eq!(out.status.code(), Some(0), "{ens}");
        let b = polarint::matcore::csv::parse_blocks(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert_eq!(b[0].shape(), shape, "{ens}");
    }
}

#[test]
fn literal_det_moment_fails_with_exit_one() {
    let out = run(&[
        "verify",
        "det-moment",
        "--k",
        "2",
        "--r",
        "1",
        "--variant",
        "paper",
        "--samples",
        "1000000",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_valid("report.schema.json", &v);
    assert!(!v["pass"].as_bool().unwrap());
    assert!((v["estimate"].as_f64().unwrap() - 2.0).abs() < 0.05);
    assert!((v["reference_value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn every_verify_subcommand_emits_valid_reports() {
    let cases: &[&[&str]] = &[
        &[
            "verify",
            "pif",
            "--n",
            "3",
            "--k",
            "2",
            "--testfn",
            "exp_gram",
            "--samples",
            "50000",
            "--seed",
            "2",
        ],
        &[
            "verify",
            "gaussian-identity",
            "--n",
            "4",
            "--k",
            "2",
            "--samples",
            "50000",
            "--seed",
            "3",
        ],
        &[
            "verify",
            "det-moment",
            "--k",
            "3",
            "--r",
            "1",
            "--samples",
            "50000",
            "--seed",
            "4",
        ],
        &["verify", "normalization", "--n", "2", "--k", "1"],
        &[
            "verify",
            "normalization",
            "--n",
            "2",
            "--k",
            "2",
            "--step",
            "0.05",
        ],
        &[
            "verify",
            "invariance",
            "--kind",
            "two_sided_gaussian",
            "--n",
            "4",
            "--k",
            "2",
            "--samples",
            "20000",
        ],
        &[
            "verify",
            "invariance",
            "--kind",
            "conjugation_P",
            "--n",
            "4",
            "--k",
            "2",
            "--samples",
            "20000",
            "--probe",
            "identity",
        ],
        &[
            "verify",
            "invariance",
            "--kind",
            "stiefel_angle_ks",
            "--n",
            "2",
            "--k",
            "1",
            "--samples",
            "20000",
        ],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_valid("report.schema.json", &json(&out));
    }
}

#[test]
fn moments_with_and_without_monte_carlo() {
    let v = json(&run(&["moments", "--k", "2", "--r", "1"]));
    assert_valid("moments.schema.json", &v);
    assert!((v["moment"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(v.get("report").is_none());

    let out = run(&[
        "moments",
        "--k",
        "2",
        "--r",
        "1",
        "--mc",
        "--samples",
        "50000",
        "--seed",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_valid("moments.schema.json", &v);
    assert_valid("report.schema.json", &v["report"]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--n", "1", "--k", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["constants", "--n", "3", "--k", "1", "--variant", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "pif", "--n", "3", "--k", "1", "--z-max", "-1"])
            .status
            .code(),
        Some(2)
    );
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(!help.stdout.is_empty());
}

#[test]
fn small_scale_is_a_numeric_error() {
    let out = run(&[
        "verify", "pif", "--n", "3", "--k", "1", "--testfn", "exp_gram", "--scale", "0.25",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn overflow_is_a_numeric_error() {
    let out = run(&["verify", "pif", "--n", "400", "--k", "2", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overflow"));
}

#[test]
fn suite_is_byte_identical_across_runs_and_threads() {
    let config = repo_root().join("configs/smoke.json");
    let config = config.to_str().unwrap();
    let config_value: Value = serde_json::from_str(&std::fs::read_to_string(config).unwrap()).unwrap();
    assert_valid("suite-config.schema.json", &config_value);

    let one = run(&["--threads", "1", "verify", "suite", "--config", config]);
    assert_eq!(
        one.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&one.stderr)
    );
    let again = run(&["--threads", "1", "verify", "suite", "--config", config]);
    let four = run(&["--threads", "4", "verify", "suite", "--config", config]);
    assert_eq!(one.stdout, again.stdout);
    assert_eq!(one.stdout, four.stdout);
    let v = json(&one);
    assert_valid("report.schema.json", &v);
    assert_eq!(
        v.as_array().unwrap().len(),
        config_value["experiments"].as_array().unwrap().len()
    );
}

#[test]
fn suite_failures_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = repo_root().join("configs/discrepancies.json");
    let config_value: Value = serde_json::from_str(&std::fs::read_to_string(&config).unwrap()).unwrap();
    assert_valid("suite-config.schema.json", &config_value);
    let target = dir.path().join("reports.json");
    let out = run(&[
        "verify",
        "suite",
        "--config",
        config.to_str().unwrap(),
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_valid("report.schema.json", &v);
    assert!(v.as_array().unwrap().iter().all(|r| r["pass"] == false));
    assert_eq!(std::fs::read(&target).unwrap(), out.stdout);
}

#[test]
fn bad_suite_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"experiments": [{"id": "pif", "n": 3}]}"#).unwrap();
    assert_eq!(
        run(&["verify", "suite", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&cfg, r#"{"experiments": [{"id": "warp"}]}"#).unwrap();
    assert_eq!(
        run(&["verify", "suite", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn timings_are_opt_in() {
    let args = [
        "verify",
        "det-moment",
        "--k",
        "1",
        "--r",
        "1",
        "--samples",
        "1000",
    ];
    let plain = json(&run(&args));
    assert!(plain.get("elapsed_wall_time_s").is_none());
    let mut timed_args = vec!["--timings"];
    timed_args.extend(args);
    let timed = json(&run(&timed_args));
    assert!(timed["elapsed_wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_valid("report.schema.json", &timed);
}
