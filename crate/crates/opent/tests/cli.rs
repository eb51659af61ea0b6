//! End-to-end runs of the `opent` binary: outputs, exit codes, files.

use std::path::Path;
use std::process::{Command, Output};

use opent::exit;
use opent::format::{KrausJson, MatrixJson};
use opent_core::choi::KrausMap;
use opent_core::gates;
use serde_json::Value;

fn opent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opent"))
        .args(args)
        .env_remove("OPENT_SEED")
        .output()
        .expect("run opent")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("invalid JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn entanglement_examples() {
    let out = opent(&["entanglement", "--gate", "swap", "--dim", "2"]);
    assert_eq!(code(&out), exit::OK);
    let v = json(&out);
    assert!((num(&v["linearEntropy"]) - 0.75).abs() < 1e-12);
    assert!(num(&v["maxDeviation"]) < 1e-12);
    assert_eq!(v["agrees"], true);

    let v = json(&opent(&["entanglement", "--gate", "identity", "--dim", "3"]));
    assert!(num(&v["linearEntropy"]).abs() < 1e-12);

    let v = json(&opent(&["entanglement", "--gate", "cnot"]));
    assert!((num(&v["linearEntropy"]) - 0.5).abs() < 1e-12);
    assert_eq!(v["schmidtRank"], 2);
    assert!((num(&v["crossChecks"]["protocolPath"]) - 0.5).abs() < 1e-12);
}

#[test]
fn numbers_have_seventeen_digits() {
    let out = opent(&["entanglement", "--gate", "cnot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"linearEntropy\": 5.0000000000000000e-1"), "{text}");
}

#[test]
fn entanglement_from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let cz = write_json(dir.path(), "cz.json", &MatrixJson::from_matrix(gates::cz().matrix()));
    let v = json(&opent(&["entanglement", "--file", &cz]));
    assert!((num(&v["linearEntropy"]) - 0.5).abs() < 1e-12);

    // A 2x3 operator space: only the Schmidt path applies.
    let id6 = write_json(dir.path(), "id6.json", &MatrixJson::from_matrix(&opent_core::ComplexMatrix::identity(6)));
    let v = json(&opent(&["entanglement", "--file", &id6, "--dim", "2"]));
    assert_eq!((v["dimA"].as_u64(), v["dimB"].as_u64()), (Some(2), Some(3)));
    assert_eq!(v["crossChecks"]["swapPath"], Value::Null);
}

#[test]
fn error_classes_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&opent(&["entanglement", "--file", missing.to_str().unwrap()])), exit::IO);

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(code(&opent(&["entanglement", "--file", garbage.to_str().unwrap()])), exit::PARSE);

    let short = dir.path().join("short.json");
    std::fs::write(&short, r#"{"rows":2,"cols":2,"entries":[[1,0]]}"#).unwrap();
    assert_eq!(code(&opent(&["entanglement", "--file", short.to_str().unwrap()])), exit::PARSE);

    let rect = write_json(dir.path(), "rect.json", &MatrixJson::from_matrix(&opent_core::ComplexMatrix::zeros(4, 2)));
    let out = opent(&["entanglement", "--file", &rect]);
    assert_eq!(code(&out), exit::DIMENSION);
    assert!(String::from_utf8_lossy(&out.stderr).contains("square"));

    assert_eq!(code(&opent(&["entanglement", "--gate", "cnot", "--dim", "3"])), exit::DIMENSION);
    assert_eq!(code(&opent(&["entanglement"])), exit::USAGE);
    assert_eq!(code(&opent(&["entanglement", "--gate", "toffoli"])), exit::USAGE);

    let scaled = write_json(
        dir.path(),
        "scaled.json",
        &MatrixJson::from_matrix(&gates::cnot().matrix().scale_real(2.0)),
    );
    assert_eq!(code(&opent(&["epower", "--file", &scaled])), exit::ARGUMENT);
    assert_eq!(code(&opent(&["protocol", "--file", &scaled])), exit::ARGUMENT);
    assert_eq!(code(&opent(&["haar-average", "--samples", "1"])), exit::ARGUMENT);
    assert_eq!(code(&opent(&["help"])), exit::OK);
}

#[test]
fn sweep_csv() {
    let out = opent(&["sweep", "--theta-start", "0", "--theta-end", "pi/2", "--steps", "5"]);
    assert_eq!(code(&out), exit::OK);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["theta", "E", "closedForm", "absError"]);
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    for (row, expect) in rows.iter().zip([0.0, 0.25, 0.5, 0.25, 0.0]) {
        assert!((row[1] - expect).abs() < 1e-12);
        assert!(row[3] <= 1e-10);
        let s = (2.0 * row[0]).sin();
        assert_eq!(row[2].to_bits(), (0.5 * s * s).to_bits());
    }
    let two = opent(&["sweep", "--steps", "2"]);
    assert_eq!(String::from_utf8(two.stdout).unwrap().lines().count(), 3);
    assert_eq!(code(&opent(&["sweep", "--steps", "1"])), exit::ARGUMENT);
    assert_eq!(code(&opent(&["sweep", "--theta-start", "1", "--theta-end", "0"])), exit::ARGUMENT);
    assert_eq!(code(&opent(&["sweep", "--gate", "cnot"])), exit::ARGUMENT);
    let v = json(&opent(&["sweep", "--steps", "3", "--output", "json"]));
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn epower_reports() {
    let v = json(&opent(&["epower", "--gate", "swap"]));
    assert_eq!(num(&v["ep"]), 0.0);
    assert_eq!(v["optimal"], false);
    assert!(v.get("monteCarlo").is_none());

    let out = opent(&["epower", "--gate", "cnot", "--mc-samples", "5000", "--seed", "7"]);
    assert_eq!(code(&out), exit::OK);
    let v = json(&out);
    assert!((num(&v["ep"]) - 2.0 / 9.0).abs() < 1e-12);
    assert!((num(&v["bound"]) - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(v["monteCarlo"]["seed"], 7);
    assert_eq!(v["monteCarlo"]["agrees"], true);

    let v = json(&opent(&["epower", "--gate", "identity", "--dim", "3"]));
    assert_eq!(num(&v["ep"]), 0.0);
}

#[test]
fn seed_comes_from_flag_then_environment_then_default() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_opent"));
        cmd.args(["haar-average", "--samples", "50"]).env_remove("OPENT_SEED");
        if let Some(e) = env {
            cmd.env("OPENT_SEED", e);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        json(&cmd.output().unwrap())["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 42);
    assert_eq!(run(Some("9"), None), 9);
    assert_eq!(run(Some("9"), Some("5")), 5);
}

#[test]
fn haar_average_reports() {
    let a = opent(&["haar-average", "--dim", "2", "--samples", "20000", "--seed", "42"]);
    assert_eq!(code(&a), exit::OK);
    let v = json(&a);
    assert_eq!(num(&v["analytic"]), 0.6);
    assert_eq!(v["withinBand"], true);
    let b = opent(&["haar-average", "--dim", "2", "--samples", "20000", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&opent(&["haar-average", "--dim", "3", "--samples", "200"]));
    assert!((num(&v["analytic"]) - 0.8).abs() < 1e-15);
    let csv = opent(&["haar-average", "--samples", "20", "--output", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("dim,samples,seed,rng,mean,stderr,analytic,withinBand\n"));
}

#[test]
fn choi_reports() {
    let dir = tempfile::tempdir().unwrap();
    let id = write_json(dir.path(), "id.json", &KrausJson::from_map(&KrausMap::pure(&gates::identity(2))));
    let v = json(&opent(&["choi", "--file", &id]));
    assert!((num(&v["trace"]) - 4.0).abs() < 1e-12);
    assert!((num(&v["purity"]) - 1.0).abs() < 1e-12);
    assert_eq!(v["isPure"], true);

    let cnot = write_json(dir.path(), "cnot.json", &KrausJson::from_map(&KrausMap::pure(&gates::cnot())));
    let via_choi = json(&opent(&["choi", "--file", &cnot]));
    let direct = json(&opent(&["entanglement", "--gate", "cnot"]));
    for key in ["linearEntropy", "vonNeumannEntropy", "schmidtRank", "coefficients"] {
        assert_eq!(via_choi["entanglement"][key], direct[key], "{key}");
    }

    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mix = KrausMap::new(
        vec![gates::identity(2).matrix().scale_real(half), gates::swap(2).matrix().scale_real(half)],
        2,
        2,
        true,
    )
    .unwrap();
    let mix = write_json(dir.path(), "mix.json", &KrausJson::from_map(&mix));
    let v = json(&opent(&["choi", "--file", &mix]));
    assert_eq!(v["isPure"], false);
    assert_eq!(v["rank"], 2);

    let not_tp = dir.path().join("not_tp.json");
    let mut bad = KrausJson::from_map(&KrausMap::pure(&gates::cnot()));
    bad.kraus[0] = MatrixJson::from_matrix(&gates::cnot().matrix().scale_real(2.0));
    std::fs::write(&not_tp, serde_json::to_string(&bad).unwrap()).unwrap();
    assert_eq!(code(&opent(&["choi", "--file", not_tp.to_str().unwrap()])), exit::ARGUMENT);
}

#[test]
fn protocol_reports() {
    let v = json(&opent(&["protocol", "--gate", "swap"]));
    assert!((num(&v["probability"]) - 0.25).abs() < 1e-12);
    assert_eq!(v["agrees"], true);
    let v = json(&opent(&["protocol", "--gate", "identity"]));
    assert!(num(&v["probability"]).abs() < 1e-15);
    let out = opent(&["protocol", "--gate", "cnot", "--shots", "100000", "--seed", "42"]);
    assert_eq!(code(&out), exit::OK);
    let v = json(&out);
    let p = num(&v["probability"]);
    let f = num(&v["sampled"]["frequency"]);
    assert!((f - p).abs() <= 3.0 * (p * (1.0 - p) / 1e5).sqrt());
    assert!((num(&v["rescaledE"]) - 0.5).abs() < 1e-12);
}

#[test]
fn verify_machine_readable() {
    let out = opent(&["verify", "--seed", "42", "--output", "json"]);
    assert_eq!(code(&out), exit::OK);
    let v = json(&out);
    let rows = v.as_array().unwrap();
    assert!(rows.iter().all(|r| r["passed"] == true));
    assert_eq!(rows.last().unwrap()["id"], "9");
}
