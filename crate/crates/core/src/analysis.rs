//! The whole pipeline for one instance, and the named check suites run on it.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::{
    characterize_by_torsion, classify_by_f, classify_unions, compact_torsion_forms, f7_projection,
    BasicClass, ClassVerdict, FClassification, UnionVerdicts,
};
use crate::levi_civita::{
    check_f_properties, check_lee_relations, check_lemma_identities, check_metric_compatible,
    check_torsion_free, fundamental_tensor, lee_forms, levi_civita, LeeForms,
};
use crate::natural::*;
use crate::nijenhuis::{
    check_nn_properties, f_from_nn, f_restricted, nijenhuis_pair, nn_from_f, NijenhuisPair,
    NijenhuisUnion,
};
use crate::report::{check_equal, CheckResult, Outcome, ValidationReport};
use crate::scalar::{Rational, Substitution};
use crate::structure::PiManifold;
use crate::tensor::{ConnectionCoefficients, Tensor};

/// Every tensor the checks and reports need, computed once.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub inst: PiManifold,
    pub conn: ConnectionCoefficients,
    pub f: Tensor,
    pub lee: LeeForms,
    pub pair: NijenhuisPair,
    pub d1: NaturalConnection,
    pub d2: NaturalConnection,
    pub t1: TorsionData,
    pub t2: TorsionData,
    pub d_eta: Tensor,
}

impl Analysis {
    pub fn new(inst: PiManifold) -> Self {
        let conn = levi_civita(&inst);
        let f = fundamental_tensor(&inst, &conn).0;
        let lee = lee_forms(&f, &inst);
        let pair = nijenhuis_pair(&inst, &conn);
        let d1 = first_connection(&inst, &conn);
        let d2 = second_connection(&inst, &conn, &pair);
        let t1 = torsion(&d1, &inst);
        let t2 = torsion(&d2, &inst);
        let d_eta = d_eta(&inst, &conn);
        Analysis {
            inst,
            conn,
            f,
            lee,
            pair,
            d1,
            d2,
            t1,
            t2,
            d_eta,
        }
    }

    pub fn connection(&self, which: Which) -> &NaturalConnection {
        match which {
            Which::First => &self.d1,
            Which::Second => &self.d2,
        }
    }

    pub fn torsion(&self, which: Which) -> &TorsionData {
        match which {
            Which::First => &self.t1,
            Which::Second => &self.t2,
        }
    }

    pub fn classify(&self) -> ClassificationReport {
        let by_f = classify_by_f(&self.inst, &self.f, &self.lee);
        let f7 = by_f
            .holds(BasicClass::F7)
            .then(|| f7_projection(&self.inst, &self.f));
        ClassificationReport {
            unions: classify_unions(&self.inst, &self.pair),
            torsion_first: characterize_by_torsion(&self.inst, &self.t1, Which::First),
            torsion_second: characterize_by_torsion(&self.inst, &self.t2, Which::Second),
            coincidence: coincidence_test(&self.inst, &self.pair),
            by_f,
            f7_projection: f7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub by_f: FClassification,
    pub unions: UnionVerdicts,
    pub torsion_first: Vec<ClassVerdict>,
    pub torsion_second: Vec<ClassVerdict>,
    pub coincidence: Coincidence,
    /// Only computed when the `F₇` verdict holds.
    pub f7_projection: Option<Tensor>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Naturality,
    Identities,
    TorsionPaths,
    T2Property,
    Forms,
    Coincidence,
    Theorems,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Naturality,
        Suite::Identities,
        Suite::TorsionPaths,
        Suite::T2Property,
        Suite::Forms,
        Suite::Coincidence,
        Suite::Theorems,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Naturality => "naturality",
            Suite::Identities => "identities",
            Suite::TorsionPaths => "torsion-paths",
            Suite::T2Property => "t2-property",
            Suite::Forms => "forms",
            Suite::Coincidence => "coincidence",
            Suite::Theorems => "theorems",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.label() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn run_suite(a: &Analysis, suite: Suite) -> ValidationReport {
    match suite {
        Suite::Naturality => naturality(a),
        Suite::Identities => identities(a),
        Suite::TorsionPaths => torsion_paths(a),
        Suite::T2Property => {
            let mut r = ValidationReport::new();
            r.push(t2_property(&a.inst, &a.t2.t_low, "t2_property"));
            r
        }
        Suite::Forms => forms(a),
        Suite::Coincidence => coincidence(a),
        Suite::Theorems => theorems(a),
    }
}

pub fn run_all(a: &Analysis) -> ValidationReport {
    let mut r = ValidationReport::new();
    for s in Suite::ALL {
        r.extend(run_suite(a, s));
    }
    r
}

fn naturality(a: &Analysis) -> ValidationReport {
    let mut r = ValidationReport::new();
    for d in [&a.d1, &a.d2] {
        let p = d.which.label();
        r.extend(check_naturality(&a.inst, &d.coefficients, p));
        r.extend(check_potential(&a.inst, &d.potential, &a.f, p));
    }
    r
}

fn identities(a: &Analysis) -> ValidationReport {
    let inst = &a.inst;
    let mut r = check_f_properties(&a.f, inst);
    r.extend(check_lee_relations(&a.lee, inst));
    r.extend(check_lemma_identities(inst, &a.conn, &a.f));
    r.push(check_torsion_free(inst, &a.conn));
    r.push(check_metric_compatible(inst, &a.conn));
    r.extend(check_nn_properties(&a.pair, inst));

    let from_f = nn_from_f(inst, &a.f);
    r.push(check_equal("N_from_F", &from_f.n_low, &a.pair.n_low));
    r.push(check_equal(
        "Nhat_from_F",
        &from_f.n_hat_low,
        &a.pair.n_hat_low,
    ));
    r.push(check_equal("F_from_NN", &f_from_nn(inst, &a.pair), &a.f));
    let unions = classify_unions(inst, &a.pair);
    for (union, verdict, name) in [
        (NijenhuisUnion::U0, &unions.u0, "F_from_N_on_U0"),
        (
            NijenhuisUnion::U0Hat,
            &unions.u0_hat,
            "F_from_Nhat_on_U0hat",
        ),
    ] {
        r.push(if verdict.passed() {
            match f_restricted(inst, &a.pair, union) {
                Ok(f) => check_equal(name, &f, &a.f),
                Err(e) => CheckResult::from_bool(format!("{name}: {e}"), false, vec![]),
            }
        } else {
            CheckResult::skipped(name, "instance is outside the union")
        });
    }
    r
}

fn torsion_paths(a: &Analysis) -> ValidationReport {
    let inst = &a.inst;
    let mut r = ValidationReport::new();
    for which in [Which::First, Which::Second] {
        let t = &a.torsion(which).t_low;
        let p = which.label();
        r.push(check_equal(
            format!("{p}_torsion_F_path"),
            &torsion_via_f(inst, &a.f, which),
            t,
        ));
        r.push(check_equal(
            format!("{p}_torsion_N_path"),
            &torsion_via_n(inst, &a.pair, which),
            t,
        ));
        r.push(check_equal(
            format!("{p}_torsion_hv_path"),
            &torsion_via_n_hv(inst, &a.pair, which),
            t,
        ));
    }
    r.push(check_equal(
        "D1_torsion_d_eta_path",
        &first_torsion_via_d_eta(inst, &a.conn),
        &a.t1.t_low,
    ));
    r.push(check_equal(
        "d_eta_from_brackets",
        &d_eta_from_brackets(inst),
        &a.d_eta,
    ));
    r.push(if coincidence_test(inst, &a.pair).coincide {
        check_equal("U1_torsion", &u1_torsion(inst, &a.pair), &a.t1.t_low)
    } else {
        CheckResult::skipped("U1_torsion", "N(φ·,φ·) ≠ 0")
    });
    r
}

fn forms(a: &Analysis) -> ValidationReport {
    let mut r = torsion_form_relations(&a.inst, &a.lee, &a.t1, &a.t2);
    for class in [CompactClass::U0Hat, CompactClass::F3, CompactClass::F7] {
        for which in [Which::First, Which::Second] {
            let name = format!("{}_compact_{}", which.label(), class.label());
            let compact =
                compact_torsion_forms(&a.inst, &a.f, &a.lee, &a.pair, &a.d_eta, class, which);
            r.push(match compact {
                Ok(t) => check_equal(name, &t, &a.torsion(which).t_low),
                Err(e) => CheckResult::skipped(name, e.to_string()),
            });
        }
    }
    r
}

fn coincidence(a: &Analysis) -> ValidationReport {
    let test = coincidence_test(&a.inst, &a.pair).coincide;
    let unions = classify_unions(&a.inst, &a.pair);
    let u1 = unions.u1.passed();
    let equal = a.d1.coefficients == a.d2.coefficients;
    let mut r = ValidationReport::new();
    r.push(CheckResult::from_bool(
        format!("coincidence_agreement (test {test}, U1 {u1}, D1=D2 {equal})"),
        test == u1 && u1 == equal,
        vec![],
    ));
    let hat_side = unions.u0_hat.passed() && !unions.u0.passed();
    r.push(if hat_side {
        CheckResult::from_bool("U1_false_on_U0hat_side", !u1, vec![])
    } else {
        CheckResult::skipped("U1_false_on_U0hat_side", "needs N̂ = 0 and N ≠ 0")
    });
    r
}

fn theorems(a: &Analysis) -> ValidationReport {
    let by_f = classify_by_f(&a.inst, &a.f, &a.lee);
    let mut r = ValidationReport::new();
    for which in [Which::First, Which::Second] {
        let by_t = characterize_by_torsion(&a.inst, a.torsion(which), which);
        for v in by_t {
            let f_holds = by_f.holds(v.class);
            r.push(CheckResult::from_bool(
                format!(
                    "{}_{}_by_torsion (F {}, torsion {})",
                    which.label(),
                    v.class,
                    f_holds,
                    v.holds()
                ),
                f_holds == v.holds(),
                vec![],
            ));
        }
    }
    r.push(if by_f.f0.passed() {
        CheckResult::from_bool(
            "F0_in_every_class",
            by_f.classes.iter().all(ClassVerdict::holds),
            vec![],
        )
    } else {
        CheckResult::skipped("F0_in_every_class", "F ≠ 0")
    });
    r
}

/// Seed used when `PI_CONN_SEED` is unset or unparsable.
pub const DEFAULT_SEED: u64 = 20;

pub fn seed_from_env() -> u64 {
    std::env::var("PI_CONN_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// A random rational value for every parameter: numerator in `-6..=6`,
/// denominator in `1..=3`.
pub fn random_substitution(inst: &PiManifold, rng: &mut impl Rng) -> Substitution {
    let params = inst.params();
    let mut s = Substitution::new();
    for name in params.names() {
        let v = Rational::new(
            rng.gen_range(-6i64..=6).into(),
            rng.gen_range(1i64..=3).into(),
        );
        s.bind(params, name, v).expect("declared parameter");
    }
    s
}

/// `count` random substitutions: every suite must pass on the substituted
/// instance, and substituting after the pipeline must agree with running it
/// on the substituted instance. One check per substitution.
pub fn fuzz(symbolic: &Analysis, seed: u64, count: usize) -> ValidationReport {
    let mut r = ValidationReport::new();
    if symbolic.inst.params().is_empty() {
        r.push(CheckResult::skipped("fuzz", "instance has no parameters"));
        return r;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..count {
        let subst = random_substitution(&symbolic.inst, &mut rng);
        let name = format!("fuzz_{k}");
        let inst = match symbolic.inst.substitute(&subst) {
            Ok(i) => i,
            Err(e) => {
                r.push(CheckResult::skipped(name, e.to_string()));
                continue;
            }
        };
        let a = Analysis::new(inst);
        let mut checks = run_all(&a);
        checks.extend(commutes(symbolic, &a, &subst));
        r.push(match checks.failures().next() {
            None => CheckResult::pass(name),
            Some(c) => match &c.outcome {
                Outcome::Fail { witness, residual } => CheckResult::fail(
                    format!("{name}: {}", c.name),
                    witness.clone(),
                    residual.clone(),
                ),
                _ => unreachable!("failures are failures"),
            },
        });
    }
    r
}

fn commutes(symbolic: &Analysis, a: &Analysis, subst: &Substitution) -> ValidationReport {
    let pairs: [(&str, &Tensor, &Tensor); 8] = [
        ("nabla", symbolic.conn.tensor(), a.conn.tensor()),
        ("F", &symbolic.f, &a.f),
        ("N", &symbolic.pair.n_low, &a.pair.n_low),
        ("Nhat", &symbolic.pair.n_hat_low, &a.pair.n_hat_low),
        (
            "D1",
            symbolic.d1.coefficients.tensor(),
            a.d1.coefficients.tensor(),
        ),
        (
            "D2",
            symbolic.d2.coefficients.tensor(),
            a.d2.coefficients.tensor(),
        ),
        ("T1", &symbolic.t1.t_low, &a.t1.t_low),
        ("T2", &symbolic.t2.t_low, &a.t2.t_low),
    ];
    let mut r = ValidationReport::new();
    for (name, sym, num) in pairs {
        r.push(check_equal(
            format!("{name}_substitution_commutes"),
            &sym.substitute(subst),
            num,
        ));
    }
    r
}
