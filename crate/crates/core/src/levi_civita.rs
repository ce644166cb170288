//! Levi-Civita connection of a left-invariant metric, the fundamental tensor
//! `F(x,y,z) = g((∇_x φ)y, z)` and the Lee forms.

use crate::report::{check_identity, check_zero, CheckResult, ValidationReport};
use crate::scalar::{Rational, Scalar};
use crate::structure::PiManifold;
use crate::tensor::{ConnectionCoefficients, Slot, Tensor, TensorError, Vector};

/// Koszul formula for left-invariant fields with constant metric
/// components: `2 g(∇_x y, z) = g([x,y],z) - g([x,z],y) - g([y,z],x)`.
/// The instance guarantees an invertible metric.
pub fn levi_civita(inst: &PiManifold) -> ConnectionCoefficients {
    let dim = inst.dim();
    let alg = inst.algebra();
    let g = inst.metric();
    let half = Rational::new(1.into(), 2.into());
    // lowered[i][j][l] = g(∇_{e_i} e_j, e_l)
    let brackets: Vec<Vec<Vector>> = (0..dim)
        .map(|i| (0..dim).map(|j| alg.bracket(i, j)).collect())
        .collect();
    let lowered = Tensor::covariant_from_fn(dim, 3, |idx| {
        let (i, j, l) = (idx[0], idx[1], idx[2]);
        let (el, ej, ei) = (inst.e(l), inst.e(j), inst.e(i));
        (g.bilinear(&brackets[i][j], el)
            - g.bilinear(&brackets[i][l], ej)
            - g.bilinear(&brackets[j][l], ei))
        .scale(&half)
    });
    let raised = lowered
        .raise(2, inst.metric_inverse())
        .expect("slot 2 is lower");
    ConnectionCoefficients::from_tensor(raised).expect("slot pattern (0,2)+(1,0)")
}

/// Covariant derivative of a left-invariant tensor field. The result gets a
/// new lower slot in front for the direction. Constant components mean only
/// the connection terms survive:
/// `(D_i T)^{a}_{b} = Γ^a_{ic} T^c_b - Γ^c_{ib} T^a_c` and so on per slot.
pub fn nabla_tensor(conn: &ConnectionCoefficients, t: &Tensor) -> Result<Tensor, TensorError> {
    if t.rank() > 3 {
        return Err(TensorError::UnsupportedValence(t.rank()));
    }
    if t.dim() != conn.dim() {
        return Err(TensorError::DimensionMismatch(t.dim(), conn.dim()));
    }
    let dim = t.dim();
    let mut slots = vec![Slot::Lower];
    slots.extend_from_slice(t.slots());
    let mut src = vec![0; t.rank()];
    Ok(Tensor::from_fn(dim, &slots, |idx| {
        let i = idx[0];
        let rest = &idx[1..];
        let mut acc = Scalar::zero();
        for (s, kind) in t.slots().iter().enumerate() {
            src.copy_from_slice(rest);
            for c in 0..dim {
                src[s] = c;
                let v = t.get(&src);
                if v.is_zero() {
                    continue;
                }
                match kind {
                    Slot::Upper => {
                        let gamma = conn.gamma(i, c, rest[s]);
                        if !gamma.is_zero() {
                            acc += gamma * v;
                        }
                    }
                    Slot::Lower => {
                        let gamma = conn.gamma(i, rest[s], c);
                        if !gamma.is_zero() {
                            acc -= gamma * v;
                        }
                    }
                }
            }
        }
        acc
    }))
}

/// `∇φ` reshaped so that `vector_at(&[x, y])` is `(∇_x φ) y`.
pub fn nabla_phi(inst: &PiManifold, conn: &ConnectionCoefficients) -> Tensor {
    let phi = Tensor::from_endomorphism(inst.phi_matrix());
    nabla_tensor(conn, &phi)
        .expect("rank 2")
        .permute(&[0, 2, 1])
}

/// `(∇_{e_i} η)(e_j)` as a (0,2) tensor.
pub fn nabla_eta(inst: &PiManifold, conn: &ConnectionCoefficients) -> Tensor {
    let eta = Tensor::from_covector(inst.eta_covector());
    nabla_tensor(conn, &eta).expect("rank 1")
}

/// `∇_{e_i} ξ` as a tensor with slots `[Lower, Upper]`.
pub fn nabla_xi(inst: &PiManifold, conn: &ConnectionCoefficients) -> Tensor {
    nabla_tensor(conn, &Tensor::from_vector(inst.xi())).expect("rank 1")
}

/// The (0,3) tensor `F(x,y,z) = g((∇_x φ)y, z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalTensor(pub Tensor);

impl FundamentalTensor {
    pub fn tensor(&self) -> &Tensor {
        &self.0
    }

    pub fn at(&self, x: &Vector, y: &Vector, z: &Vector) -> Scalar {
        self.0.at(&[x, y, z])
    }
}

pub fn fundamental_tensor(inst: &PiManifold, conn: &ConnectionCoefficients) -> FundamentalTensor {
    // [x, y, a] = ((∇_x φ) y)^a, lower a
    let f = nabla_phi(inst, conn)
        .lower(2, inst.metric())
        .expect("slot 2 is upper");
    FundamentalTensor(f)
}

pub type Residual<'a> = Box<dyn Fn(&[usize]) -> Scalar + 'a>;

/// A named multilinear identity checked on every basis tuple.
pub struct Condition<'a> {
    pub name: &'static str,
    pub arity: usize,
    pub residual: Residual<'a>,
}

impl<'a> Condition<'a> {
    pub fn new(
        name: &'static str,
        arity: usize,
        residual: impl Fn(&[usize]) -> Scalar + 'a,
    ) -> Self {
        Condition {
            name,
            arity,
            residual: Box::new(residual),
        }
    }

    pub fn check(&self, dim: usize) -> CheckResult {
        check_identity(self.name, dim, self.arity, |i| (self.residual)(i))
    }
}

/// The general identities every fundamental tensor satisfies.
pub fn f_property_conditions<'a>(f: &'a Tensor, inst: &'a PiManifold) -> Vec<Condition<'a>> {
    let xi = inst.xi();
    let e = |i: usize| inst.e(i);
    let p = |i: usize| inst.phi_e(i);
    let p2 = |i: usize| inst.phi2_e(i);
    let eta = |i: usize| inst.eta_e(i);
    let at = move |a: &Vector, b: &Vector, c: &Vector| f.at(&[a, b, c]);
    vec![
        Condition::new("F_symmetric", 3, move |i| {
            at(e(i[0]), e(i[1]), e(i[2])) - at(e(i[0]), e(i[2]), e(i[1]))
        }),
        Condition::new("F_phi_phi", 3, move |i| {
            let (x, y, z) = (i[0], i[1], i[2]);
            at(e(x), e(y), e(z)) + at(e(x), p(y), p(z))
                - eta(y) * at(e(x), xi, e(z))
                - eta(z) * at(e(x), e(y), xi)
        }),
        Condition::new("F_y_phi_z", 3, move |i| {
            let (x, y, z) = (i[0], i[1], i[2]);
            at(e(x), e(y), p(z)) + at(e(x), p(y), e(z))
                - eta(z) * at(e(x), p(y), xi)
                - eta(y) * at(e(x), p(z), xi)
        }),
        Condition::new("F_phi_phi2", 3, move |i| {
            let (x, y, z) = (i[0], i[1], i[2]);
            at(e(x), p(y), p(z)) + at(e(x), p2(y), p2(z))
        }),
        Condition::new("F_phi_phi2_mixed", 3, move |i| {
            let (x, y, z) = (i[0], i[1], i[2]);
            at(e(x), p(y), p2(z)) + at(e(x), p2(y), p(z))
        }),
    ]
}

pub fn run_conditions(conditions: &[Condition<'_>], dim: usize) -> ValidationReport {
    let mut report = ValidationReport::new();
    for c in conditions {
        report.push(c.check(dim));
    }
    report
}

pub fn check_f_properties(f: &Tensor, inst: &PiManifold) -> ValidationReport {
    run_conditions(&f_property_conditions(f, inst), inst.dim())
}

/// Lee forms `θ = g^{ij} F(e_i, e_j, ·)`, `θ* = g^{ij} F(e_i, φe_j, ·)`,
/// `ω = F(ξ, ξ, ·)`, each stored as a (0,1) tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeeForms {
    pub theta: Tensor,
    pub theta_star: Tensor,
    pub omega: Tensor,
}

impl LeeForms {
    pub fn theta_at(&self, x: &Vector) -> Scalar {
        self.theta.at(&[x])
    }

    pub fn theta_star_at(&self, x: &Vector) -> Scalar {
        self.theta_star.at(&[x])
    }

    pub fn omega_at(&self, x: &Vector) -> Scalar {
        self.omega.at(&[x])
    }
}

/// Trace of a bilinear form over the paracontact distribution:
/// `g^{ij} b(e_i, e_j) - b(ξ, ξ)`, which is `Σ b(e_a, e_a)` over any adapted
/// orthonormal frame of `ker η`.
pub(crate) fn horizontal_trace(
    inst: &PiManifold,
    mut b: impl FnMut(&Vector, &Vector) -> Scalar,
) -> Scalar {
    let g_inv = inst.metric_inverse();
    let dim = inst.dim();
    let mut acc = Scalar::zero();
    for i in 0..dim {
        for j in 0..dim {
            let w = g_inv.get(i, j);
            if !w.is_zero() {
                acc += w * b(inst.e(i), inst.e(j));
            }
        }
    }
    acc - b(inst.xi(), inst.xi())
}

pub fn lee_forms(f: &Tensor, inst: &PiManifold) -> LeeForms {
    let dim = inst.dim();
    let theta = Tensor::covariant_from_fn(dim, 1, |k| {
        horizontal_trace(inst, |a, b| f.at(&[a, b, inst.e(k[0])]))
    });
    let theta_star = Tensor::covariant_from_fn(dim, 1, |k| {
        horizontal_trace(inst, |a, b| f.at(&[a, &inst.phi(b), inst.e(k[0])]))
    });
    let omega = Tensor::covariant_from_fn(dim, 1, |k| f.at(&[inst.xi(), inst.xi(), inst.e(k[0])]));
    LeeForms {
        theta,
        theta_star,
        omega,
    }
}

/// `ω(ξ) = 0`, `θ*∘φ = -θ∘φ²`, `θ*∘φ² = -θ∘φ`.
pub fn check_lee_relations(lee: &LeeForms, inst: &PiManifold) -> ValidationReport {
    let dim = inst.dim();
    let mut report = ValidationReport::new();
    report.push(check_identity("omega_xi", dim, 0, |_| {
        lee.omega_at(inst.xi())
    }));
    report.push(check_identity("theta_star_phi", dim, 1, |i| {
        lee.theta_star_at(inst.phi_e(i[0])) + lee.theta_at(inst.phi2_e(i[0]))
    }));
    report.push(check_identity("theta_star_phi2", dim, 1, |i| {
        lee.theta_star_at(inst.phi2_e(i[0])) + lee.theta_at(inst.phi_e(i[0]))
    }));
    report
}

/// `(∇_x η)(y) = g(∇_x ξ, y)`, `η(∇_x ξ) = 0`, `F(x, φy, ξ) = -(∇_x η)(y)`.
pub fn check_lemma_identities(
    inst: &PiManifold,
    conn: &ConnectionCoefficients,
    f: &Tensor,
) -> ValidationReport {
    let dim = inst.dim();
    let d_eta = nabla_eta(inst, conn);
    let d_xi = nabla_xi(inst, conn);
    let nabla_x_xi = |x: usize| d_xi.vector_at(&[inst.e(x)]);
    let mut report = ValidationReport::new();
    report.push(check_identity("nabla_eta_is_g_nabla_xi", dim, 2, |i| {
        d_eta.get(i) - inst.g(&nabla_x_xi(i[0]), inst.e(i[1]))
    }));
    report.push(check_identity("eta_nabla_xi", dim, 1, |i| {
        inst.eta(&nabla_x_xi(i[0]))
    }));
    report.push(check_identity("F_phi_xi", dim, 2, |i| {
        f.at(&[inst.e(i[0]), inst.phi_e(i[1]), inst.xi()]) + d_eta.get(i)
    }));
    report
}

/// `Γ^k_{ij} - Γ^k_{ji}` against the structure constants of `[e_i, e_j]`.
pub fn check_torsion_free(inst: &PiManifold, conn: &ConnectionCoefficients) -> CheckResult {
    let alg = inst.algebra();
    check_identity("levi_civita_torsion_free", inst.dim(), 3, |i| {
        conn.gamma(i[0], i[1], i[2])
            - conn.gamma(i[1], i[0], i[2])
            - alg.bracket(i[0], i[1]).get(i[2])
    })
}

pub fn check_metric_compatible(inst: &PiManifold, conn: &ConnectionCoefficients) -> CheckResult {
    let g = Tensor::from_bilinear(inst.metric());
    check_zero(
        "levi_civita_metric",
        &nabla_tensor(conn, &g).expect("rank 2"),
    )
}
