//! The Nijenhuis tensor `N` and the associated Nijenhuis tensor `N̂`, their
//! expressions through `F`, and the inverse expression of `F`.

use crate::levi_civita::{nabla_eta, nabla_phi, run_conditions, Condition};
use crate::report::{check_identity, ValidationReport};
use crate::scalar::Scalar;
use crate::structure::PiManifold;
use crate::tensor::{ConnectionCoefficients, Slot, Tensor, Vector};

/// Both tensors in (1,2) form (slots `[Lower, Lower, Upper]`) and lowered
/// with `g` to (0,3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NijenhuisPair {
    pub n: Tensor,
    pub n_hat: Tensor,
    pub n_low: Tensor,
    pub n_hat_low: Tensor,
}

impl NijenhuisPair {
    fn from_lowered(inst: &PiManifold, n_low: Tensor, n_hat_low: Tensor) -> Self {
        let g_inv = inst.metric_inverse();
        NijenhuisPair {
            n: n_low.raise(2, g_inv).expect("slot 2 is lower"),
            n_hat: n_hat_low.raise(2, g_inv).expect("slot 2 is lower"),
            n_low,
            n_hat_low,
        }
    }

    pub fn n_at(&self, x: &Vector, y: &Vector, z: &Vector) -> Scalar {
        self.n_low.at(&[x, y, z])
    }

    pub fn n_hat_at(&self, x: &Vector, y: &Vector, z: &Vector) -> Scalar {
        self.n_hat_low.at(&[x, y, z])
    }
}

/// `N` and `N̂` from `∇φ` and `∇η`.
pub fn nijenhuis_pair(inst: &PiManifold, conn: &ConnectionCoefficients) -> NijenhuisPair {
    let dim = inst.dim();
    let dphi = nabla_phi(inst, conn);
    let deta = nabla_eta(inst, conn);
    let xi = inst.xi();
    // half(x, y) = (∇_{φx}φ)y - φ(∇_x φ)y - (∇_x η)(y) ξ
    let half = |x: usize, y: usize| -> Vector {
        let (ex, ey) = (inst.e(x), inst.e(y));
        let mut v = dphi.vector_at(&[inst.phi_e(x), ey]);
        v = v.sub(&inst.phi(&dphi.vector_at(&[ex, ey])));
        v.add_scaled(&-deta.get(&[x, y]), xi);
        v
    };
    let halves: Vec<Vec<Vector>> = (0..dim)
        .map(|x| (0..dim).map(|y| half(x, y)).collect())
        .collect();
    let slots = [Slot::Lower, Slot::Lower, Slot::Upper];
    let n = Tensor::from_fn(dim, &slots, |i| {
        halves[i[0]][i[1]].get(i[2]) - halves[i[1]][i[0]].get(i[2])
    });
    let n_hat = Tensor::from_fn(dim, &slots, |i| {
        halves[i[0]][i[1]].get(i[2]) + halves[i[1]][i[0]].get(i[2])
    });
    let g = inst.metric();
    NijenhuisPair {
        n_low: n.lower(2, g).expect("slot 2 is upper"),
        n_hat_low: n_hat.lower(2, g).expect("slot 2 is upper"),
        n,
        n_hat,
    }
}

/// `N` and `N̂` through `F`.
pub fn nn_from_f(inst: &PiManifold, f: &Tensor) -> NijenhuisPair {
    let dim = inst.dim();
    let xi = inst.xi();
    let at = |a: &Vector, b: &Vector, c: &Vector| f.at(&[a, b, c]);
    let build = |sign: i64| {
        Tensor::covariant_from_fn(dim, 3, |i| {
            let (x, y, z) = (inst.e(i[0]), inst.e(i[1]), inst.e(i[2]));
            let (px, py, pz) = (inst.phi_e(i[0]), inst.phi_e(i[1]), inst.phi_e(i[2]));
            let sign = Scalar::from_int(sign);
            let mut r = at(px, y, z) - at(x, y, pz) + &sign * (at(py, x, z) - at(y, x, pz));
            let eta_z = inst.eta_e(i[2]);
            if !eta_z.is_zero() {
                r += eta_z * (at(x, py, xi) + sign * at(y, px, xi));
            }
            r
        })
    };
    NijenhuisPair::from_lowered(inst, build(-1), build(1))
}

/// `F` recovered from the pair.
pub fn f_from_nn(inst: &PiManifold, pair: &NijenhuisPair) -> Tensor {
    let xi = inst.xi();
    let (n, nh) = (&pair.n_low, &pair.n_hat_low);
    let quarter = Scalar::frac(1, 4);
    let half = Scalar::frac(1, 2);
    Tensor::covariant_from_fn(inst.dim(), 3, |i| {
        let (y, z) = (inst.e(i[1]), inst.e(i[2]));
        let (px, py, pz) = (inst.phi_e(i[0]), inst.phi_e(i[1]), inst.phi_e(i[2]));
        let mut r = &quarter
            * (n.at(&[px, y, z]) + n.at(&[px, z, y]) + nh.at(&[px, y, z]) + nh.at(&[px, z, y]));
        let eta_x = inst.eta_e(i[0]);
        if !eta_x.is_zero() {
            let inner =
                n.at(&[xi, y, pz]) + nh.at(&[xi, y, pz]) + inst.eta_e(i[2]) * nh.at(&[xi, xi, py]);
            r -= &half * eta_x * inner;
        }
        r
    })
}

/// The two unions in which `F` is expressed by a single Nijenhuis tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NijenhuisUnion {
    /// `N = 0`
    U0,
    /// `N̂ = 0`
    U0Hat,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RestrictionError {
    #[error("the instance is not in {union}: {tensor} has nonzero component {witness:?}")]
    NotInUnion {
        union: &'static str,
        tensor: &'static str,
        witness: Vec<usize>,
    },
}

/// `F` from `N̂` alone on `U₀` or from `N` alone on `Û₀`.
pub fn f_restricted(
    inst: &PiManifold,
    pair: &NijenhuisPair,
    union: NijenhuisUnion,
) -> Result<Tensor, RestrictionError> {
    let (vanishing, label, tname) = match union {
        NijenhuisUnion::U0 => (&pair.n_low, "U0", "N"),
        NijenhuisUnion::U0Hat => (&pair.n_hat_low, "U0hat", "Nhat"),
    };
    if let Some((witness, _)) = vanishing.nonzero().into_iter().next() {
        return Err(RestrictionError::NotInUnion {
            union: label,
            tensor: tname,
            witness,
        });
    }
    let xi = inst.xi();
    let quarter = Scalar::frac(1, 4);
    let half = Scalar::frac(1, 2);
    Ok(Tensor::covariant_from_fn(inst.dim(), 3, |i| {
        let (y, z) = (inst.e(i[1]), inst.e(i[2]));
        let (px, py, pz) = (inst.phi_e(i[0]), inst.phi_e(i[1]), inst.phi_e(i[2]));
        let eta_x = inst.eta_e(i[0]);
        match union {
            NijenhuisUnion::U0 => {
                let nh = &pair.n_hat_low;
                let mut r = &quarter * (nh.at(&[px, y, z]) + nh.at(&[px, z, y]));
                if !eta_x.is_zero() {
                    r -= &half
                        * eta_x
                        * (nh.at(&[xi, y, pz]) + inst.eta_e(i[2]) * nh.at(&[xi, xi, py]));
                }
                r
            }
            NijenhuisUnion::U0Hat => {
                let n = &pair.n_low;
                let mut r = &quarter * (n.at(&[px, y, z]) + n.at(&[px, z, y]));
                if !eta_x.is_zero() {
                    r -= &half * eta_x * n.at(&[xi, y, pz]);
                }
                r
            }
        }
    }))
}

fn property_conditions<'a>(
    name: [&'static str; 6],
    t: &'a Tensor,
    inst: &'a PiManifold,
) -> Vec<Condition<'a>> {
    let at = move |a: &Vector, b: &Vector, c: &Vector| t.at(&[a, b, c]);
    let e = |i: usize| inst.e(i);
    let p = |i: usize| inst.phi_e(i);
    let p2 = |i: usize| inst.phi2_e(i);
    let xi = inst.xi();
    vec![
        Condition::new(name[0], 3, move |i| {
            at(p2(i[0]), p(i[1]), p(i[2])) + at(p2(i[0]), p2(i[1]), p2(i[2]))
        }),
        Condition::new(name[1], 3, move |i| {
            at(p2(i[0]), p2(i[1]), p2(i[2])) - at(p(i[0]), p(i[1]), p2(i[2]))
        }),
        Condition::new(name[2], 3, move |i| {
            at(e(i[0]), p2(i[1]), p2(i[2])) + at(e(i[0]), p(i[1]), p(i[2]))
        }),
        Condition::new(name[3], 3, move |i| {
            at(p2(i[0]), p2(i[1]), e(i[2])) - at(p(i[0]), p(i[1]), e(i[2]))
        }),
        Condition::new(name[4], 2, move |i| {
            at(xi, p(i[0]), p(i[1])) + at(xi, p2(i[0]), p2(i[1]))
        }),
        Condition::new(name[5], 2, move |i| {
            at(p(i[0]), p(i[1]), xi) - at(p2(i[0]), p2(i[1]), xi)
        }),
    ]
}

/// Antisymmetry of `N`, symmetry of `N̂`, and the six identities of each.
pub fn check_nn_properties(pair: &NijenhuisPair, inst: &PiManifold) -> ValidationReport {
    let dim = inst.dim();
    let mut report = ValidationReport::new();
    report.push(check_identity("N_antisymmetric", dim, 3, |i| {
        pair.n.get(i) + pair.n.get(&[i[1], i[0], i[2]])
    }));
    report.push(check_identity("Nhat_symmetric", dim, 3, |i| {
        pair.n_hat.get(i) - pair.n_hat.get(&[i[1], i[0], i[2]])
    }));
    let n_names = [
        "N_prop_1", "N_prop_2", "N_prop_3", "N_prop_4", "N_prop_5", "N_prop_6",
    ];
    let nh_names = [
        "Nhat_prop_1",
        "Nhat_prop_2",
        "Nhat_prop_3",
        "Nhat_prop_4",
        "Nhat_prop_5",
        "Nhat_prop_6",
    ];
    report.extend(run_conditions(
        &property_conditions(n_names, &pair.n_low, inst),
        dim,
    ));
    report.extend(run_conditions(
        &property_conditions(nh_names, &pair.n_hat_low, inst),
        dim,
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::levi_civita::{fundamental_tensor, levi_civita};
    use crate::scalar::parse_scalar;

    fn setup(inst: &PiManifold) -> (Tensor, NijenhuisPair) {
        let conn = levi_civita(inst);
        let f = fundamental_tensor(inst, &conn).0;
        let pair = nijenhuis_pair(inst, &conn);
        (f, pair)
    }

    #[test]
    fn example_associated_tensor_vanishes() {
        let inst = fixtures::ex_l();
        let (_, pair) = setup(&inst);
        assert!(pair.n_hat.is_zero());
        assert!(!pair.n.is_zero());
        // N(x,y,z) = 4 F(x, φy, ξ) η(z) on this example
        let n_120 = pair.n_low.get(&[1, 2, 0]);
        assert_eq!(n_120, &parse_scalar("4*m1", inst.params()).unwrap());
    }

    #[test]
    fn two_routes_agree() {
        for inst in [fixtures::ex_l(), fixtures::ex_0(), fixtures::ex_r()] {
            let (f, pair) = setup(&inst);
            assert_eq!(nn_from_f(&inst, &f), pair);
            assert_eq!(f_from_nn(&inst, &pair), f);
        }
    }

    #[test]
    fn properties_hold() {
        for inst in [fixtures::ex_l(), fixtures::ex_r()] {
            let (_, pair) = setup(&inst);
            let report = check_nn_properties(&pair, &inst);
            assert_eq!(report.checks.len(), 14);
            assert!(
                report.all_passed(),
                "{:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn corrupted_n_fails_antisymmetry() {
        let inst = fixtures::ex_l();
        let (_, mut pair) = setup(&inst);
        pair.n.set(&[1, 2, 0], Scalar::one());
        let report = check_nn_properties(&pair, &inst);
        assert!(!report.get("N_antisymmetric").unwrap().passed());
    }

    #[test]
    fn restricted_forms() {
        let inst = fixtures::ex_l();
        let (f, pair) = setup(&inst);
        assert_eq!(
            f_restricted(&inst, &pair, NijenhuisUnion::U0Hat).unwrap(),
            f
        );
        assert!(matches!(
            f_restricted(&inst, &pair, NijenhuisUnion::U0),
            Err(RestrictionError::NotInUnion { union: "U0", .. })
        ));
        let flat = fixtures::ex_0();
        let (f0, pair0) = setup(&flat);
        assert_eq!(f_restricted(&flat, &pair0, NijenhuisUnion::U0).unwrap(), f0);
    }
}
