//! Deterministic text and JSON rendering of tensors, checks and verdicts.
//!
//! Components are listed in lexicographic index order, zero components are
//! omitted, and scalars use their canonical printed form.

use serde_json::{json, Map, Value};

use crate::analysis::ClassificationReport;
use crate::classifier::ClassVerdict;
use crate::report::{CheckResult, Outcome, ValidationReport};
use crate::scalar::ParamSet;
use crate::tensor::Tensor;

pub const ALL_ZERO: &str = "all components zero";

pub fn components_json(t: &Tensor, params: &ParamSet) -> Value {
    Value::Array(
        t.nonzero()
            .into_iter()
            .map(|(idx, v)| json!({"index": idx, "value": v.to_text(params)}))
            .collect(),
    )
}

/// One `name[i,j,k] = value` line per nonzero component, or a single
/// `name: all components zero` line.
pub fn components_text(name: &str, t: &Tensor, params: &ParamSet) -> String {
    let nz = t.nonzero();
    if nz.is_empty() {
        return format!("{name}: {ALL_ZERO}\n");
    }
    let mut out = String::new();
    for (idx, v) in nz {
        let idx: Vec<String> = idx.iter().map(usize::to_string).collect();
        out.push_str(&format!(
            "{name}[{}] = {}\n",
            idx.join(","),
            v.to_text(params)
        ));
    }
    out
}

pub fn check_json(c: &CheckResult, params: &ParamSet) -> Value {
    match &c.outcome {
        Outcome::Pass => json!({"name": c.name, "status": "pass"}),
        Outcome::Skipped(why) => json!({"name": c.name, "status": "skip", "reason": why}),
        Outcome::Fail { witness, residual } => json!({
            "name": c.name,
            "status": "fail",
            "witness": witness,
            "residual": residual.to_text(params),
        }),
    }
}

pub fn report_json(r: &ValidationReport, params: &ParamSet) -> Value {
    json!({
        "passed": r.all_passed(),
        "checks": r.checks.iter().map(|c| check_json(c, params)).collect::<Vec<_>>(),
    })
}

pub fn report_text(r: &ValidationReport, params: &ParamSet) -> String {
    r.checks.iter().map(|c| c.describe(params) + "\n").collect()
}

fn verdict_map(verdicts: &[ClassVerdict]) -> Value {
    let mut m = Map::new();
    for v in verdicts {
        m.insert(v.class.label().into(), Value::Bool(v.holds()));
    }
    Value::Object(m)
}

/// `{"classes": {...}, "unions": {...}, "F0": bool}`.
pub fn classification_json(c: &ClassificationReport) -> Value {
    json!({
        "classes": verdict_map(&c.by_f.classes),
        "unions": {
            "U0": c.unions.u0.passed(),
            "U0hat": c.unions.u0_hat.passed(),
            "U1": c.unions.u1.passed(),
        },
        "F0": c.by_f.f0.passed(),
    })
}

/// Classification JSON plus torsion verdicts, coincidence and summary.
pub fn classification_json_full(c: &ClassificationReport, params: &ParamSet) -> Value {
    let mut v = classification_json(c);
    let m = v.as_object_mut().expect("object");
    m.insert(
        "torsion".into(),
        json!({"T1": verdict_map(&c.torsion_first), "T2": verdict_map(&c.torsion_second)}),
    );
    m.insert(
        "coincidence".into(),
        json!({
            "D1_equals_D2": c.coincidence.coincide,
            "witness": c.coincidence.witness.map(|(i, j)| vec![i, j]),
        }),
    );
    if let Some(p) = &c.f7_projection {
        m.insert("F7_projection".into(), components_json(p, params));
    }
    m.insert("class".into(), Value::String(c.by_f.summary()));
    v
}

fn verdict_line(label: &str, c: &CheckResult, params: &ParamSet) -> String {
    match &c.outcome {
        Outcome::Fail { witness, residual } => format!(
            "{label}: false ({} fails at {witness:?}, residual {})\n",
            c.name,
            residual.to_text(params)
        ),
        _ => format!("{label}: true\n"),
    }
}

pub fn classification_text(c: &ClassificationReport, params: &ParamSet) -> String {
    let mut out = verdict_line("F0", &c.by_f.f0, params);
    for v in &c.by_f.classes {
        out.push_str(&verdict_line(v.class.label(), &v.result, params));
    }
    out.push_str(&verdict_line("U0", &c.unions.u0, params));
    out.push_str(&verdict_line("U0hat", &c.unions.u0_hat, params));
    out.push_str(&verdict_line("U1", &c.unions.u1, params));
    out
}

pub fn summary_line(c: &ClassificationReport) -> String {
    match c.by_f.summary().as_str() {
        "mixed" => "class: mixed (not a single basic class)\n".into(),
        s => format!("class: {s}\n"),
    }
}

pub fn torsion_verdicts_text(which: &str, verdicts: &[ClassVerdict]) -> String {
    let held: Vec<&str> = verdicts
        .iter()
        .filter(|v| v.holds())
        .map(|v| v.class.label())
        .collect();
    if held.is_empty() {
        format!("{which} characterises: none\n")
    } else {
        format!("{which} characterises: {}\n", held.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn zero_tensor_and_sorted_components() {
        let p = ParamSet::new(["a"]).unwrap();
        let t = Tensor::covariant(2, 2);
        assert_eq!(components_text("X", &t, &p), "X: all components zero\n");
        let mut t = t;
        t.set(&[1, 0], p.var("a").unwrap());
        t.set(&[0, 1], Scalar::from_int(-2));
        assert_eq!(components_text("X", &t, &p), "X[0,1] = -2\nX[1,0] = a\n");
        assert_eq!(
            components_json(&t, &p).to_string(),
            r#"[{"index":[0,1],"value":"-2"},{"index":[1,0],"value":"a"}]"#
        );
    }
}
