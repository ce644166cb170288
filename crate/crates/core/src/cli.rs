//! Command-line front end. [`run`] returns the process exit code:
//! 0 on success, 1 when a validation or check fails (the report is still
//! written), 2 on input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::analysis::{fuzz, run_suite, seed_from_env, Analysis, Suite};
use crate::emit::*;
use crate::input::{read_instance, read_substitution, InputError};
use crate::natural::Which;
use crate::report::ValidationReport;
use crate::scalar::{ParamSet, Substitution};
use crate::structure::{validate, PiManifold};
use crate::tensor::Tensor;

/// Random substitutions tried by `check --suite all`.
pub const FUZZ_COUNT: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "pi-conn",
    version,
    about = "Natural connections on left-invariant Riemannian Π-structures"
)]
pub struct Cli {
    /// Parameter values, `name=value,...` with rational values.
    #[arg(long, global = true, value_name = "BINDINGS")]
    pub subst: Option<String>,
    /// JSON file `{"name": "value", ...}`; `--subst` entries take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub subst_file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Jacobi identity and the structure axioms.
    Validate { file: PathBuf },
    /// Class verdicts of the fundamental tensor.
    Classify { file: PathBuf },
    /// Nonzero components of one computed tensor.
    Tensor {
        file: PathBuf,
        #[arg(long, value_enum)]
        which: TensorKind,
    },
    /// Run a check suite; `all` adds the seeded substitution fuzz.
    Check {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Full pipeline report.
    Report { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TensorKind {
    #[value(name = "nabla")]
    Nabla,
    #[value(name = "F")]
    F,
    #[value(name = "lee")]
    Lee,
    #[value(name = "N")]
    N,
    #[value(name = "Nhat")]
    Nhat,
    #[value(name = "D1")]
    D1,
    #[value(name = "D2")]
    D2,
    #[value(name = "T1")]
    T1,
    #[value(name = "T2")]
    T2,
    #[value(name = "dEta")]
    DEta,
}

impl TensorKind {
    const ALL: [TensorKind; 10] = [
        TensorKind::Nabla,
        TensorKind::F,
        TensorKind::Lee,
        TensorKind::N,
        TensorKind::Nhat,
        TensorKind::D1,
        TensorKind::D2,
        TensorKind::T1,
        TensorKind::T2,
        TensorKind::DEta,
    ];

    /// Named tensors behind the selector; only `lee` has more than one.
    fn tensors(self, a: &Analysis) -> Vec<(&'static str, &Tensor)> {
        match self {
            TensorKind::Nabla => vec![("nabla", a.conn.tensor())],
            TensorKind::F => vec![("F", &a.f)],
            TensorKind::Lee => vec![
                ("theta", &a.lee.theta),
                ("theta_star", &a.lee.theta_star),
                ("omega", &a.lee.omega),
            ],
            TensorKind::N => vec![("N", &a.pair.n_low)],
            TensorKind::Nhat => vec![("Nhat", &a.pair.n_hat_low)],
            TensorKind::D1 => vec![("D1", a.d1.coefficients.tensor())],
            TensorKind::D2 => vec![("D2", a.d2.coefficients.tensor())],
            TensorKind::T1 => vec![("T1", &a.t1.t_low)],
            TensorKind::T2 => vec![("T2", &a.t2.t_low)],
            TensorKind::DEta => vec![("dEta", &a.d_eta)],
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("unknown suite `{0}` (expected all, naturality, identities, torsion-paths, t2-property, forms, coincidence or theorems)")]
    UnknownSuite(String),
}

/// Output of one command: the stream to write and the exit code.
struct Emitted {
    body: String,
    code: i32,
}

pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, err) {
        Ok(Emitted { body, code }) => {
            let _ = out.write_all(body.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn file_of(c: &Command) -> &Path {
    match c {
        Command::Validate { file }
        | Command::Classify { file }
        | Command::Tensor { file, .. }
        | Command::Check { file, .. }
        | Command::Report { file } => file,
    }
}

fn substitution(cli: &Cli, params: &ParamSet) -> Result<Substitution, CliError> {
    let mut s = match &cli.subst_file {
        Some(p) => read_substitution(p, params)?,
        None => Substitution::new(),
    };
    if let Some(text) = &cli.subst {
        let inline =
            Substitution::parse_bindings(text, params).map_err(|source| InputError::Scalar {
                context: "--subst".into(),
                source,
            })?;
        for (i, v) in inline.iter() {
            s.bind(params, params.name(i), v.clone())
                .expect("index comes from the same parameter set");
        }
    }
    Ok(s)
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

fn execute(cli: &Cli, err: &mut impl Write) -> Result<Emitted, CliError> {
    let suite = match &cli.command {
        Command::Check { suite, .. } if suite != "all" => {
            Some(Suite::from_label(suite).ok_or_else(|| CliError::UnknownSuite(suite.clone()))?)
        }
        _ => None,
    };
    let input = read_instance(file_of(&cli.command))?;
    let params = input.algebra.params().clone();
    let subst = substitution(cli, &params)?;
    let algebra = input.algebra.substitute(&subst);
    let structure = input.structure.substitute(&subst);
    let validation = validate(&algebra, &structure).map_err(InputError::from)?;
    let json = cli.format == Format::Json;

    if let Command::Validate { .. } = cli.command {
        let body = if json {
            json_text(&report_json(&validation, &params))
        } else {
            let verdict = if validation.all_passed() {
                "valid"
            } else {
                "invalid"
            };
            format!("{}{verdict}\n", report_text(&validation, &params))
        };
        return Ok(Emitted {
            body,
            code: if validation.all_passed() { 0 } else { 1 },
        });
    }
    if !validation.all_passed() {
        let _ = write!(err, "{}", report_text(&validation, &params));
        let _ = writeln!(err, "error: the instance violates the structure axioms");
        return Ok(Emitted {
            body: if json {
                json_text(&json!({"validation": report_json(&validation, &params)}))
            } else {
                String::new()
            },
            code: 1,
        });
    }
    let inst = PiManifold::new_unchecked(algebra, structure).map_err(InputError::from)?;
    let a = Analysis::new(inst);

    Ok(match &cli.command {
        Command::Validate { .. } => unreachable!("handled above"),
        Command::Classify { .. } => {
            let c = a.classify();
            let body = if json {
                json_text(&classification_json(&c))
            } else {
                classification_text(&c, &params) + &summary_line(&c)
            };
            Emitted { body, code: 0 }
        }
        Command::Tensor { which, .. } => Emitted {
            body: tensor_body(&a, *which, json, &params),
            code: 0,
        },
        Command::Check { .. } => check(&a, suite, json, &params),
        Command::Report { file } => report(&a, file, &subst, &validation, json, &params),
    })
}

fn tensor_body(a: &Analysis, kind: TensorKind, json: bool, params: &ParamSet) -> String {
    let named = kind.tensors(a);
    if json {
        let v = match named.as_slice() {
            [(_, t)] => components_json(t, params),
            many => Value::Object(
                many.iter()
                    .map(|(n, t)| (n.to_string(), components_json(t, params)))
                    .collect(),
            ),
        };
        json_text(&v)
    } else {
        named
            .iter()
            .map(|(n, t)| components_text(n, t, params))
            .collect()
    }
}

fn check(a: &Analysis, only: Option<Suite>, json: bool, params: &ParamSet) -> Emitted {
    let mut sections: Vec<(String, ValidationReport)> = match only {
        Some(s) => vec![(s.label().to_string(), run_suite(a, s))],
        None => Suite::ALL
            .into_iter()
            .map(|s| (s.label().to_string(), run_suite(a, s)))
            .collect(),
    };
    let seed = seed_from_env();
    if only.is_none() {
        sections.push(("fuzz".into(), fuzz(a, seed, FUZZ_COUNT)));
    }
    let passed = sections.iter().all(|(_, r)| r.all_passed());
    let failed: usize = sections.iter().map(|(_, r)| r.failures().count()).sum();
    let body = if json {
        let suites: Map<String, Value> = sections
            .iter()
            .map(|(n, r)| (n.clone(), report_json(r, params)))
            .collect();
        let mut v = json!({"passed": passed, "suites": suites});
        if only.is_none() {
            v["seed"] = json!(seed);
        }
        json_text(&v)
    } else {
        let mut s = String::new();
        for (n, r) in &sections {
            s.push_str(&format!("== {n} ==\n"));
            s.push_str(&report_text(r, params));
        }
        if only.is_none() {
            s.push_str(&format!("fuzz seed: {seed}\n"));
        }
        if passed {
            s.push_str("all checks passed\n");
        } else {
            s.push_str(&format!("{failed} check(s) failed\n"));
        }
        s
    };
    Emitted {
        body,
        code: if passed { 0 } else { 1 },
    }
}

fn subst_text(subst: &Substitution, params: &ParamSet) -> String {
    subst
        .iter()
        .map(|(i, v)| format!("{}={v}", params.name(i)))
        .collect::<Vec<_>>()
        .join(",")
}

fn report(
    a: &Analysis,
    file: &Path,
    subst: &Substitution,
    validation: &ValidationReport,
    json: bool,
    params: &ParamSet,
) -> Emitted {
    let c = a.classify();
    let forms: Vec<(String, bool)> = [Which::First, Which::Second]
        .into_iter()
        .map(|w| {
            (
                format!("{}_torsion_forms_vanish", w.label()),
                a.torsion(w).forms_vanish(),
            )
        })
        .collect();
    let body = if json {
        let tensors: Map<String, Value> = TensorKind::ALL
            .into_iter()
            .flat_map(|k| k.tensors(a))
            .map(|(n, t)| (n.to_string(), components_json(t, params)))
            .collect();
        json_text(&json!({
            "instance": file.display().to_string(),
            "dimension": a.inst.dim(),
            "parameters": params.names(),
            "substitution": subst_text(subst, params),
            "validation": report_json(validation, params),
            "tensors": tensors,
            "torsion_forms_vanish": forms.iter().map(|(n, b)| (n.clone(), Value::Bool(*b))).collect::<Map<_, _>>(),
            "classification": classification_json_full(&c, params),
        }))
    } else {
        let mut s = format!(
            "instance: {} (dimension {}, parameters: {})\n",
            file.display(),
            a.inst.dim(),
            if params.is_empty() {
                "none".to_string()
            } else {
                params.names().join(", ")
            }
        );
        if !subst.is_empty() {
            s.push_str(&format!("substitution: {}\n", subst_text(subst, params)));
        }
        s.push_str(&format!(
            "validation: passed ({} checks)\n",
            validation.checks.len()
        ));
        for (title, kind) in [
            ("Levi-Civita connection", TensorKind::Nabla),
            ("fundamental tensor", TensorKind::F),
            ("Lee forms", TensorKind::Lee),
            ("Nijenhuis tensor", TensorKind::N),
            ("associated Nijenhuis tensor", TensorKind::Nhat),
            ("first natural connection", TensorKind::D1),
            ("second natural connection", TensorKind::D2),
            ("torsion of D1", TensorKind::T1),
            ("torsion of D2", TensorKind::T2),
            ("d eta", TensorKind::DEta),
        ] {
            s.push_str(&format!("== {title} ==\n"));
            s.push_str(&tensor_body(a, kind, false, params));
        }
        s.push_str("== torsion forms ==\n");
        for (n, b) in &forms {
            s.push_str(&format!("{n}: {b}\n"));
        }
        s.push_str("== classification ==\n");
        s.push_str(&classification_text(&c, params));
        s.push_str(&torsion_verdicts_text("T1", &c.torsion_first));
        s.push_str(&torsion_verdicts_text("T2", &c.torsion_second));
        s.push_str(&format!("D1 = D2: {}\n", c.coincidence.coincide));
        if let Some(p) = &c.f7_projection {
            s.push_str(&components_text("F7_projection", p, params));
        }
        s.push_str(&summary_line(&c));
        s
    };
    Emitted { body, code: 0 }
}
