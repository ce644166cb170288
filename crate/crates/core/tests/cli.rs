use std::io::Write;
use std::process::{Command, Output};

use pi_conn::fixtures::{ex_l, ex_r_substitution, EX_L_JSON};
use pi_conn::scalar::parse_scalar;
use serde_json::Value;

fn pi_conn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pi-conn"))
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
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

fn temp_json(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn validate_ex_0_passes() {
    let o = pi_conn(&["validate", "EX-0.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn report_ends_with_the_class() {
    let o = pi_conn(&["report", "EX-L.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("class: F7\n"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["report", "EX-L.json", "--format", "json"][..],
        &["report", "EX-L.json"],
        &["check", "EX-L.json", "--format", "json"],
    ] {
        let (a, b) = (pi_conn(args), pi_conn(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn spec_t2_example() {
    let o = pi_conn(&[
        "tensor",
        "EX-L.json",
        "--which",
        "T2",
        "--subst",
        "m1=1,m2=-2,l1=1,l2=2,l3=-1,l4=3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["index"] == serde_json::json!([2, 1, 0]) && c["value"] == "2"));
}

#[test]
fn text_lists_components_in_index_order_and_zero_tensors() {
    let out = stdout(&pi_conn(&["tensor", "EX-L.json", "--which", "T1"]));
    let idx: Vec<Vec<usize>> = out
        .lines()
        .map(|l| {
            let inside = &l[l.find('[').unwrap() + 1..l.find(']').unwrap()];
            inside.split(',').map(|s| s.parse().unwrap()).collect()
        })
        .collect();
    assert_eq!(idx.len(), 24);
    assert!(idx.windows(2).all(|w| w[0] < w[1]));
    let zero = stdout(&pi_conn(&["tensor", "EX-L.json", "--which", "Nhat"]));
    assert_eq!(zero, "Nhat: all components zero\n");
}

#[test]
fn substitution_commutes_with_the_pipeline() {
    let inst = ex_l();
    let subst = ex_r_substitution();
    for which in ["nabla", "F", "N", "D1", "D2", "T1", "T2", "dEta"] {
        let sym = stdout(&pi_conn(&[
            "tensor",
            "EX-L.json",
            "--which",
            which,
            "--format",
            "json",
        ]));
        let num = stdout(&pi_conn(&[
            "tensor",
            "EX-L.json",
            "--which",
            which,
            "--subst-file",
            "EX-R.subst.json",
            "--format",
            "json",
        ]));
        let sym: Value = serde_json::from_str(&sym).unwrap();
        let num: Value = serde_json::from_str(&num).unwrap();
        let substituted: Vec<(Value, String)> = sym
            .as_array()
            .unwrap()
            .iter()
            .filter_map(|c| {
                let v = parse_scalar(c["value"].as_str().unwrap(), inst.params())
                    .unwrap()
                    .substitute(&subst);
                (!v.is_zero()).then(|| (c["index"].clone(), v.to_text(inst.params())))
            })
            .collect();
        let direct: Vec<(Value, String)> = num
            .as_array()
            .unwrap()
            .iter()
            .map(|c| (c["index"].clone(), c["value"].as_str().unwrap().to_string()))
            .collect();
        assert_eq!(substituted, direct, "{which}");
    }
}

#[test]
fn classify_json_shape() {
    let v: Value = serde_json::from_str(&stdout(&pi_conn(&[
        "classify",
        "EX-L.json",
        "--format",
        "json",
    ])))
    .unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["classes", "unions", "F0"]);
    assert_eq!(v["classes"]["F7"], true);
    assert_eq!(v["classes"].as_object().unwrap().len(), 11);
}

#[test]
fn malformed_file_exits_2_with_position() {
    let f = temp_json("{\n  \"dimension\": 5,\n  \"basis\": [\n}");
    let o = pi_conn(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn undeclared_substitution_parameter_exits_2() {
    let o = pi_conn(&["tensor", "EX-L.json", "--which", "F", "--subst", "mu=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mu"));
}

#[test]
fn broken_structure_exits_1() {
    // φξ ≠ 0 once e0 is sent to e1
    let broken = EX_L_JSON.replace(
        r#""phi": {"e1": {"e3": "1"}"#,
        r#""phi": {"e0": {"e1": "1"}, "e1": {"e3": "1"}"#,
    );
    assert_ne!(broken, EX_L_JSON);
    let f = temp_json(&broken);
    let path = f.path().to_str().unwrap();
    let o = pi_conn(&["validate", path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL phi_xi"));
    assert_eq!(pi_conn(&["classify", path]).status.code(), Some(1));
}

#[test]
fn single_suites_and_lee_selector() {
    for suite in [
        "naturality",
        "identities",
        "torsion-paths",
        "t2-property",
        "forms",
        "coincidence",
        "theorems",
    ] {
        let o = pi_conn(&["check", "EX-L.json", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).starts_with(&format!("== {suite} ==\n")));
    }
    let lee: Value = serde_json::from_str(&stdout(&pi_conn(&[
        "tensor",
        "EX-L.json",
        "--which",
        "lee",
        "--format",
        "json",
    ])))
    .unwrap();
    assert_eq!(
        lee,
        serde_json::json!({"theta": [], "theta_star": [], "omega": []})
    );
}
