use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn imslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_imslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = imslab(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "catalog:koebe"]);
    assert_eq!(v["label"]["family"], "L_III");
    assert_eq!(v["label"]["s"], 1);
    let v = json(&["classify", "--num", "0,1", "--den", "1"]);
    assert_eq!(v["label"]["family"], "L_I");
    assert_eq!(v["label"]["s"], 0);
    let v = json(&["classify", "catalog:R2"]);
    assert_eq!(v["label"]["family"], "L_II");
    assert_eq!(v["label"]["s"], 1);
    let v = json(&["classify", "num=0,1;den=1,-1"]);
    assert_eq!(v["label"]["family"], "L_II");
}

#[test]
fn triple_circle_pole_is_reported_not_rejected() {
    let v = json(&["classify", "--num", "0,1", "--den", "1,-3,3,-1"]);
    assert_eq!(v["label"]["family"], "NotClassified");
    assert!(v["verdict"].as_str().unwrap().starts_with("not classified"));
}

#[test]
fn spectrum_examples() {
    let v = json(&["spectrum", "catalog:koebe", "--tau", "-2", "--mode", "both"]);
    assert_eq!(v["closed"], 1.0);
    assert!((v["numeric"].as_f64().unwrap() - 1.0).abs() <= 0.05);
    assert!(v["discrepancy"].as_f64().unwrap() <= 0.05);

    let v = json(&["spectrum", "catalog:identity", "--tau", "5"]);
    assert_eq!(v["closed"], 0.0);
    assert_eq!(v["numeric"], 0.0);

    let v = json(&["spectrum", "catalog:koebe", "--tau", "0+1i", "--mode", "numeric"]);
    assert!(v["numeric"].is_f64());
    assert!(v.get("closed").is_none() && v.get("discrepancy").is_none());
    assert_eq!(v["tau_im"], 1.0);
}

#[test]
fn coefficient_mode() {
    let v = json(&["spectrum", "P3", "--tau", "-3", "--mode", "coeff"]);
    assert!((v["coefficient"].as_f64().unwrap() - 2.0).abs() < 0.05);
}

#[test]
fn ladder_csv() {
    let path = scratch("ladder.csv");
    json(&["spectrum", "koebe", "--tau", "1", "--mode", "numeric", "--ladder", path.to_str().unwrap()]);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,r,logI,abscissa"));
    assert_eq!(lines.count(), 13);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| imslab(args).status.code().unwrap();
    assert_eq!(code(&["classify", "catalog:nope"]), 2);
    assert_eq!(code(&["classify", "--num", "0,x"]), 2);
    assert_eq!(code(&["spectrum", "koebe", "--tau", "1+"]), 2);
    assert_eq!(code(&["spectrum", "koebe"]), 2);
    assert_eq!(code(&["spectrum", "koebe", "--tau", "-2", "--threads", "0"]), 2);
    // f′ = (1 − z)² has a double zero on the circle.
    assert_eq!(
        code(&["spectrum", "--num", "0,1,-1,0.3333333333333333", "--tau", "-2", "--mode", "closed"]),
        3
    );
    assert_eq!(code(&["spectrum", "koebe", "--tau", "1+1i", "--mode", "closed"]), 3);
    assert_eq!(code(&["classify", "E1"]), 3);
    assert_eq!(code(&["classify", "--num", "1", "--den", "0,1"]), 3);
}

#[test]
fn norms_and_multipliers() {
    let v = json(&["norms", "koebe"]);
    assert!((v["schwarzian"]["value"].as_f64().unwrap() - 6.0).abs() < 1e-4);
    assert!((v["pre_schwarzian"]["value"].as_f64().unwrap() - 6.0).abs() < 1e-4);
    let v = json(&["norms", "spiral"]);
    assert!((v["schwarzian"]["value"].as_f64().unwrap() - 6.0).abs() < 1e-4);

    let v = json(&["multiplier", "E2", "--alpha", "1"]);
    assert_eq!(v["koebe_target"], 57.6);
    let q = v["ratio_to_target"].as_f64().unwrap();
    assert!((0.99..=1.0 + 1e-6).contains(&q), "{q}");

    let v = json(&["shimorin", "koebe", "--alphas", "1"]);
    assert_eq!(v["verdict"], "consistent");
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn formats_out_and_config() {
    let text = imslab(&["classify", "koebe", "--format", "text"]);
    assert!(String::from_utf8(text.stdout).unwrap().contains("label.family: L_III\n"));
    let csv = imslab(&["classify", "koebe", "--format", "csv"]);
    let csv = String::from_utf8(csv.stdout).unwrap();
    assert!(csv.starts_with("key,value\n") && csv.contains("label.family,L_III\n"));

    let cfg = scratch("run.toml");
    std::fs::write(&cfg, "format = \"text\"\nk_max = 14\n").unwrap();
    let out = scratch("report.txt");
    let o = imslab(&[
        "spectrum", "koebe", "--tau", "-2", "--mode", "numeric",
        "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success() && o.stdout.is_empty());
    let report = std::fs::read_to_string(&out).unwrap();
    assert!(report.contains("mode: numeric\n"), "{report}");

    std::fs::write(&cfg, "k_max = 30\n").unwrap();
    assert_eq!(imslab(&["classify", "koebe", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn catalog_extension() {
    let path = scratch("extra.toml");
    std::fs::write(
        &path,
        "[[entry]]\nname = \"cube\"\nkind = \"rational\"\nnum = [0, 1, 0, 0]\nden = [1, 0, 0, -1]\n",
    )
    .unwrap();
    let v = json(&["classify", "catalog:cube", "--catalog", path.to_str().unwrap()]);
    assert_eq!(v["label"]["family"], "L_II");
    let list = json(&["catalog-list", "--catalog", path.to_str().unwrap()]);
    assert!(list.as_array().unwrap().iter().any(|e| e["name"] == "cube"));
    assert!(list.as_array().unwrap().iter().any(|e| e["name"] == "koebe"));
}

#[test]
fn verify_suites() {
    let v = json(&["verify", "--suite", "norms"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"][0]["id"], 6);
    let v = json(&["verify", "--suite", "oracles"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_is_byte_identical_across_thread_counts() {
    let one = imslab(&["verify", "--suite", "all", "--threads", "1"]);
    let four = imslab(&["verify", "--suite", "all", "--threads", "4"]);
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.status.code(), four.status.code());
}
