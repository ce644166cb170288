mod common;

use common::{base, basis, d_eta_from_f, member, q, sum_of};
use pi_conn::classifier::*;
use pi_conn::levi_civita::{check_f_properties, check_lee_relations, lee_forms};
use pi_conn::natural::*;
use pi_conn::nijenhuis::*;
use pi_conn::report::check_identity;
use pi_conn::synthetic::{span_rank, torsion_class_basis};
use pi_conn::tensor::Tensor;
use proptest::prelude::*;

const U0: [BasicClass; 5] = [
    BasicClass::F1,
    BasicClass::F2,
    BasicClass::F4,
    BasicClass::F5,
    BasicClass::F6,
];

fn torsions(f: &Tensor) -> (TorsionData, TorsionData) {
    let inst = base();
    (
        TorsionData::from_lowered(&inst, torsion_via_f(&inst, f, Which::First)),
        TorsionData::from_lowered(&inst, torsion_via_f(&inst, f, Which::Second)),
    )
}

#[test]
fn members_classify_to_their_class() {
    let inst = base();
    for c in BasicClass::ALL {
        let f = member(c, 3);
        assert!(check_f_properties(&f, &inst).all_passed());
        let cl = classify_by_f(&inst, &f, &lee_forms(&f, &inst));
        assert_eq!(cl.summary(), c.label());
    }
}

#[test]
fn sums_are_mixed() {
    let inst = base();
    let f = sum_of(&[BasicClass::F3, BasicClass::F7], 5);
    let cl = classify_by_f(&inst, &f, &lee_forms(&f, &inst));
    assert_eq!(cl.summary(), "mixed");
}

#[test]
fn torsion_rows_characterise_each_class() {
    let inst = base();
    for c in BasicClass::ALL {
        let own = basis(c);
        for which in [Which::First, Which::Second] {
            let by_t = torsion_class_basis(&inst, c, which);
            let mut both = own.clone();
            both.extend(by_t.iter().cloned());
            assert_eq!(by_t.len(), own.len(), "{c} {which}");
            assert_eq!(span_rank(&both), own.len(), "{c} {which}");
        }
    }
}

#[test]
fn torsion_verdicts_single_out_the_class() {
    let inst = base();
    for c in BasicClass::ALL {
        let (t1, t2) = torsions(&member(c, 11));
        for (which, t) in [(Which::First, &t1), (Which::Second, &t2)] {
            for v in characterize_by_torsion(&inst, t, which) {
                assert_eq!(v.holds(), v.class == c, "{c} {which} {}", v.class);
            }
        }
    }
}

fn split(t: &TorsionData, sign: i64) -> bool {
    let i = base();
    let s = pi_conn::scalar::Scalar::from_int(sign);
    check_identity("split", i.dim(), 3, |k| {
        let (x, y, z) = (i.e(k[0]), i.e(k[1]), i.e(k[2]));
        t.at(x, y, z) - i.eta_e(k[0]) * t.at(i.xi(), y, z) + i.eta_e(k[1]) * t.at(i.xi(), x, z)
            - &s * t.at(x, y, i.xi()) * i.eta_e(k[2])
    })
    .passed()
}

#[test]
fn printed_f8_split_sign_fails() {
    for f in [member(BasicClass::F8, 1), member(BasicClass::F8, 2)] {
        let (t1, t2) = torsions(&f);
        assert!(!split(&t1, -1) && !split(&t2, -1));
        assert!(split(&t1, 1) && split(&t2, 1));
    }
}

#[test]
fn printed_f6_chain_fails() {
    let i = base();
    let (t1, t2) = torsions(&member(BasicClass::F6, 1));
    for t in [&t1, &t2] {
        let skew = check_identity("skew", i.dim(), 2, |k| {
            t.at(i.xi(), i.e(k[0]), i.e(k[1])) + t.at(i.xi(), i.e(k[1]), i.e(k[0]))
        });
        let half = check_identity("half", i.dim(), 2, |k| {
            t.at(i.xi(), i.e(k[0]), i.e(k[1])) - q(1, 2) * t.at(i.e(k[0]), i.e(k[1]), i.xi())
        });
        assert!(!skew.passed() && !half.passed());
    }
}

#[test]
fn printed_f3_row_fails_for_first_torsion_only() {
    let i = base();
    let (t1, t2) = torsions(&member(BasicClass::F3, 1));
    let row = |t: &TorsionData| {
        check_identity("F3.phi", i.dim(), 3, |k| {
            t.at(i.e(k[0]), i.e(k[1]), i.e(k[2])) + t.at(i.e(k[0]), i.phi_e(k[1]), i.phi_e(k[2]))
        })
        .passed()
    };
    assert!(!row(&t1));
    assert!(row(&t2));
}

#[test]
fn unions_match_the_nijenhuis_tensors() {
    let inst = base();
    for c in BasicClass::ALL {
        let pair = nn_from_f(&inst, &member(c, 4));
        let u = classify_unions(&inst, &pair);
        assert_eq!(u.u0.passed(), U0.contains(&c), "U0 {c}");
        assert_eq!(
            u.u0_hat.passed(),
            matches!(c, BasicClass::F3 | BasicClass::F7),
            "U0hat {c}"
        );
        assert_eq!(u.u1.passed(), c.in_u1(), "U1 {c}");
        assert_eq!(coincidence_test(&inst, &pair).coincide, c.in_u1());
    }
}

#[test]
fn f_is_recovered_from_the_nijenhuis_pair() {
    let inst = base();
    for c in BasicClass::ALL {
        let f = member(c, 6);
        let pair = nn_from_f(&inst, &f);
        assert_eq!(f_from_nn(&inst, &pair), f, "{c}");
        assert!(check_nn_properties(&pair, &inst).all_passed());
        let restricted = if U0.contains(&c) {
            Some(NijenhuisUnion::U0)
        } else if !c.in_u1() {
            Some(NijenhuisUnion::U0Hat)
        } else {
            None
        };
        if let Some(u) = restricted {
            assert_eq!(f_restricted(&inst, &pair, u).unwrap(), f, "{c}");
        }
    }
    let f = sum_of(&[BasicClass::F3, BasicClass::F6], 2);
    let pair = nn_from_f(&inst, &f);
    assert!(f_restricted(&inst, &pair, NijenhuisUnion::U0).is_err());
    assert!(f_restricted(&inst, &pair, NijenhuisUnion::U0Hat).is_err());
}

#[test]
fn compact_forms_on_hat_u0() {
    let inst = base();
    let cases = [
        (CompactClass::F3, sum_of(&[BasicClass::F3], 8)),
        (CompactClass::F7, sum_of(&[BasicClass::F7], 8)),
        (
            CompactClass::U0Hat,
            sum_of(&[BasicClass::F3, BasicClass::F7], 8),
        ),
    ];
    for (class, f) in cases {
        let lee = lee_forms(&f, &inst);
        let pair = nn_from_f(&inst, &f);
        let de = d_eta_from_f(&inst, &f);
        for which in [Which::First, Which::Second] {
            let expected = torsion_via_f(&inst, &f, which);
            let got = compact_torsion_forms(&inst, &f, &lee, &pair, &de, class, which).unwrap();
            assert_eq!(got, expected, "{} {which}", class.label());
            assert_eq!(class_torsion_via_n_hv(&inst, &pair, class, which), expected);
        }
    }
    let f = member(BasicClass::F7, 1);
    let (lee, pair) = (lee_forms(&f, &inst), nn_from_f(&inst, &f));
    let de = d_eta_from_f(&inst, &f);
    assert!(
        compact_torsion_forms(&inst, &f, &lee, &pair, &de, CompactClass::F3, Which::First).is_err()
    );
}

#[test]
fn f7_projection_extracts_the_f7_part() {
    let inst = base();
    let f7 = member(BasicClass::F7, 21);
    let mut f = f7.clone();
    for c in BasicClass::ALL.into_iter().filter(|c| *c != BasicClass::F7) {
        f = f.add(&member(c, 21));
    }
    assert_eq!(f7_projection(&inst, &f), f7);
}

#[test]
fn lee_relations_hold_and_printed_sign_fails() {
    let i = base();
    for c in BasicClass::ALL {
        let f = member(c, 9);
        assert!(
            check_lee_relations(&lee_forms(&f, &i), &i).all_passed(),
            "{c}"
        );
    }
    // θ*∘φ² = θ∘φ as printed contradicts θ*∘φ = -θ∘φ² once θ ≠ 0
    let lee = lee_forms(&member(BasicClass::F1, 9), &i);
    let printed = check_identity("printed", i.dim(), 1, |k| {
        lee.theta_star_at(i.phi2_e(k[0])) - lee.theta_at(i.phi_e(k[0]))
    });
    assert!(!printed.passed());
}

#[test]
fn traces_run_over_the_horizontal_distribution() {
    let i = base();
    let f = member(BasicClass::F11, 2);
    let lee = lee_forms(&f, &i);
    assert!(!lee.omega.is_zero());
    assert!(lee.theta.is_zero());
    // the full-basis trace would pick up ω and break θ*∘φ = -θ∘φ²
    let full = |k: usize| {
        (0..i.dim())
            .map(|a| f.get(&[a, a, k]).clone())
            .fold(q(0, 1), |s, v| s + v)
    };
    assert_eq!(full(1), lee.omega.get(&[1]).clone());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn torsion_paths_agree_on_mixtures(seed in any::<u64>(), mask in 1u16..(1 << 11)) {
        let inst = base();
        let classes: Vec<_> = BasicClass::ALL
            .into_iter()
            .filter(|c| mask >> (*c as u16) & 1 == 1)
            .collect();
        let f = sum_of(&classes, seed);
        let pair = nn_from_f(&inst, &f);
        let lee = lee_forms(&f, &inst);
        for which in [Which::First, Which::Second] {
            let via_f = torsion_via_f(&inst, &f, which);
            prop_assert_eq!(&torsion_via_n(&inst, &pair, which), &via_f);
            prop_assert_eq!(&torsion_via_n_hv(&inst, &pair, which), &via_f);
            prop_assert!(t2_property(&inst, &torsion_via_f(&inst, &f, Which::Second), "t2").passed());
        }
        let (t1, t2) = torsions(&f);
        prop_assert!(torsion_form_relations(&inst, &lee, &t1, &t2).all_passed());
        prop_assert!(check_lee_relations(&lee, &inst).all_passed());
        if classes.iter().all(|c| c.in_u1()) {
            prop_assert_eq!(u1_torsion(&inst, &pair), t1.t_low.clone());
            prop_assert_eq!(&t1, &t2);
        }
    }
}
