use std::path::Path;
use std::process::{Command, Output};

use orderembed::config::{Fraction, InvariantEntry, PrimeSpec};
use orderembed::{BaseField, ScenarioConfig};

fn scenarios() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios"))
}

fn orderembed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderembed"))
        .args(args)
        .output()
        .unwrap()
}

fn run_config(config: &ScenarioConfig, extra: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, config.to_json()).unwrap();
    let mut args = vec!["--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    orderembed(&args)
}

fn hilbert() -> ScenarioConfig {
    ScenarioConfig::matrix(-23, &[(-1, 0), (-1, 0), (0, 0), (1, 0)])
}

fn with_invariants(primes: &[PrimeSpec]) -> ScenarioConfig {
    let mut c = hilbert();
    c.invariants = primes
        .iter()
        .zip([Fraction::new(1, 3), Fraction::new(2, 3)])
        .map(|(p, f)| InvariantEntry {
            prime: p.clone(),
            invariant: f,
        })
        .collect();
    c
}

#[test]
fn json_report() {
    let path = scenarios().join("hilbert_d23.json");
    let out = orderembed(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], "orderembed.report/v1");
    assert_eq!(doc["ratio"], serde_json::json!(["1", "3"]));
    assert_eq!(doc["oracle"]["verdict"], "match");
}

#[test]
fn text_report_and_flags() {
    let out = run_config(
        &hilbert(),
        &["--format", "text", "--check-oracle", "--bound", "500", "--seed", "7"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1 of 3 conjugacy classes admits the embedding"));
    assert!(text.contains("sampled to bound 500"));
    assert!(text.contains("Steinitz oracle: match"));
}

#[test]
fn version() {
    let out = orderembed(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn validation_errors_exit_1() {
    let path = scenarios().join("reciprocity_violation.json");
    let out = orderembed(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "reciprocity_violation");

    assert_eq!(
        orderembed(&["--config", "/nonexistent/scenario.json"]).status.code(),
        Some(1)
    );
    assert_eq!(run_config(&hilbert(), &["--bound", "1"]).status.code(), Some(1));
}

#[test]
fn obstruction_exits_1() {
    // 59 = N(5 + w) is split by a principal prime, which splits completely in K
    let k = BaseField::new(-23).unwrap();
    let primes: Vec<PrimeSpec> = k.prime_ideals_above(59).unwrap().iter().map(PrimeSpec::from).collect();
    let out = run_config(&with_invariants(&primes), &[]);
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "not_embeddable");
}

#[test]
fn undetermined_prime_exits_2() {
    let k = BaseField::new(-23).unwrap();
    let p23 = PrimeSpec::from(&k.prime_ideals_above(23).unwrap()[0]);
    let p2 = PrimeSpec::from(&k.prime_ideals_above(2).unwrap()[0]);
    let out = run_config(&with_invariants(&[p23, p2]), &[]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "undetermined_prime");
}
