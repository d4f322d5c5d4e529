use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::io::Write;

use fintorsion::document::{self, ComplexDocument, CwDocument, MsDocument, OrderDocument};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fintorsion")).args(args).output().unwrap()
}

fn bin_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fintorsion"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn tau_of_z_two_z() {
    let o = bin(&["tau", &data("z2z.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["value"]["factors"], serde_json::json!({"2": "-1"}));
    assert_eq!(v["value"]["value"], "0.5");
    assert_eq!(v["conventions_version"], fintorsion::verify::CONVENTIONS_VERSION);
}

#[test]
fn product_zeta_suite_passes() {
    let o = bin(&["verify", "--suite", "product-zeta", "--seed", "7", "--count", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 50);
    assert!(reports.iter().all(|r| r["verdict"] == "exact-pass"));
    assert_eq!(v["summary"], serde_json::json!({"exact-pass": 50}));
}

#[test]
fn d_squared_nonzero_is_input_error() {
    let o = bin(&["cohomology", &data("not_a_complex.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("differentials[1]"), "{err}");
    assert!(err.contains("degree 0"), "{err}");
}

#[test]
fn syntax_error_reports_line() {
    let o = bin_stdin(&["tau", "-"], "{\n  \"name\": \"x\",\n  \"ranks\": [1,\n}\n");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn failing_check_exits_one() {
    // rt-sigma-decomposition fails on order-5 inputs whose isotypic parts
    // are Galois conjugate; find one among the first seeds.
    let o = bin(&["verify", "--suite", "rt-sigma-decomposition", "--seed", "0", "--count", "40"]);
    let v = json(&o);
    let failed = v["reports"].as_array().unwrap().iter().any(|r| r["verdict"] == "fail");
    assert!(failed);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_byte_identical() {
    let a = bin(&["verify", "--suite", "untwisted-cm-finite", "--seed", "3", "--count", "5"]);
    let b = bin(&["verify", "--suite", "untwisted-cm-finite", "--seed", "3", "--count", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let a = bin(&["tau-sigma", "--numeric", &data("swap_metric.json")]);
    let b = bin(&["tau-sigma", "--numeric", &data("swap_metric.json")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tensor_square_anchor_through_pipeline() {
    let sq = bin(&["build", "tensor-power", "--p", "2", &data("z2z.json")]);
    assert_eq!(sq.status.code(), Some(0));
    let text = String::from_utf8(sq.stdout).unwrap();
    let doc: ComplexDocument = document::parse(&text).unwrap();
    assert_eq!(doc.ranks, vec![1, 2, 1]);

    let exact = json(&bin_stdin(&["tau-sigma", "-"], &text));
    assert_eq!(exact["value"]["factors"], serde_json::json!({"2": "-3"}));
    let numeric = json(&bin_stdin(&["tau-sigma", "--numeric", "--precision", "96", "-"], &text));
    let mid = numeric["numeric"]["midpoint"].as_f64().unwrap();
    let radius = numeric["numeric"]["radius"].as_f64().unwrap();
    assert!((mid + 3.0 * 2f64.ln()).abs() <= radius + 1e-12);
    assert_eq!(numeric["numeric"]["precision_bits"], 96);

    let zeta = json(&bin_stdin(&["zeta0", "-"], &text));
    assert_eq!(zeta["exp_twisted_zeta_derivative_at_zero"]["factors"], serde_json::json!({"2": "6"}));
    let nrt = json(&bin_stdin(&["nrt", "-"], &text));
    assert_eq!(nrt["value"]["factors"], serde_json::json!({"2": "-4"}));
}

#[test]
fn builders_produce_valid_documents() {
    for (cmd, file, torsion) in [
        ("cw", "reflection_circle.cw.json", vec!["1", "1"]),
        ("morse", "twisted_circle.ms.json", vec!["1", "2"]),
        ("restrict", "gaussian.order.json", vec!["1", "2"]),
    ] {
        let o = bin(&["build", cmd, &data(file)]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        let text = String::from_utf8(o.stdout).unwrap();
        let doc: ComplexDocument = document::parse(&text).unwrap();
        doc.to_complex().unwrap();
        let h = json(&bin_stdin(&["cohomology", "-"], &text));
        let orders: Vec<&str> = h["degrees"]
            .as_array()
            .unwrap()
            .iter()
            .map(|d| d["torsion_order"].as_str().unwrap())
            .collect();
        assert_eq!(orders, torsion, "{cmd}");
    }
}

#[test]
fn rt_sigma_uses_document_metric() {
    let v = json(&bin(&["rt-sigma", &data("swap_metric.json")]));
    assert_eq!(v["metric"], "document");
    assert_eq!(v["value"]["factors"], serde_json::json!({"3": "1/4"}));
}

#[test]
fn sample_documents_round_trip() {
    fn check<T: serde::de::DeserializeOwned + serde::Serialize + PartialEq + std::fmt::Debug>(file: &str) {
        let text = std::fs::read_to_string(data(file)).unwrap();
        let a: T = document::parse(&text).unwrap();
        let canonical = document::to_text(&a);
        let b: T = document::parse(&canonical).unwrap();
        assert_eq!(a, b, "{file}");
        assert_eq!(document::to_text(&b), canonical, "{file}");
    }
    check::<ComplexDocument>("z2z.json");
    check::<ComplexDocument>("swap_metric.json");
    check::<CwDocument>("reflection_circle.cw.json");
    check::<MsDocument>("twisted_circle.ms.json");
    check::<OrderDocument>("gaussian.order.json");
}

#[test]
fn wrong_document_kind_is_rejected() {
    let o = bin(&["tau", &data("gaussian.order.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("document error"));
}
