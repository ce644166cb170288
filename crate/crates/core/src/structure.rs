//! Lie algebras with a left-invariant Riemannian Π-structure `(φ, ξ, η, g)`.

use std::collections::BTreeMap;

use crate::report::{check_identity, CheckResult, ValidationReport};
use crate::scalar::{ParamSet, Scalar, ScalarError, Substitution};
use crate::tensor::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StructureError {
    #[error("dimension must be odd and at least 3, got {0}")]
    BadDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got} ({what})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("unknown basis label `{0}`")]
    UnknownBasisLabel(String),
    #[error("duplicate basis label `{0}`")]
    DuplicateBasisLabel(String),
    #[error("bracket [{0}, {0}] must vanish")]
    SelfBracket(String),
    #[error("bracket [{0}, {1}] given twice")]
    DuplicateBracket(String, String),
    #[error(
        "metric is not invertible over the scalar ring (determinant is not a nonzero constant)"
    )]
    MetricNotInvertible,
    #[error("structure axioms violated: {0}")]
    Invalid(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Structure constants of a Lie algebra in a fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraStructure {
    basis: Vec<String>,
    params: ParamSet,
    // (i, j) with i < j -> [e_i, e_j]
    brackets: BTreeMap<(usize, usize), Vector>,
}

impl LieAlgebraStructure {
    /// `brackets` lists `[e_i, e_j] = v`; pairs may be given in either order
    /// but only once.
    pub fn new(
        basis: Vec<String>,
        params: ParamSet,
        brackets: impl IntoIterator<Item = (usize, usize, Vector)>,
    ) -> Result<Self, StructureError> {
        let dim = basis.len();
        if dim < 3 || dim.is_multiple_of(2) {
            return Err(StructureError::BadDimension(dim));
        }
        for (i, label) in basis.iter().enumerate() {
            if basis[..i].contains(label) {
                return Err(StructureError::DuplicateBasisLabel(label.clone()));
            }
        }
        let mut map = BTreeMap::new();
        for (i, j, v) in brackets {
            if v.dim() != dim {
                return Err(StructureError::DimensionMismatch {
                    what: "bracket result",
                    expected: dim,
                    got: v.dim(),
                });
            }
            if i >= dim || j >= dim {
                return Err(StructureError::DimensionMismatch {
                    what: "bracket index",
                    expected: dim,
                    got: i.max(j),
                });
            }
            if i == j {
                if v.is_zero() {
                    continue;
                }
                return Err(StructureError::SelfBracket(basis[i].clone()));
            }
            let (key, v) = if i < j {
                ((i, j), v)
            } else {
                ((j, i), v.scale(&Scalar::from_int(-1)))
            };
            if map.insert(key, v).is_some() {
                return Err(StructureError::DuplicateBracket(
                    basis[key.0].clone(),
                    basis[key.1].clone(),
                ));
            }
        }
        Ok(LieAlgebraStructure {
            basis,
            params,
            brackets: map,
        })
    }

    /// Abelian algebra on the given basis.
    pub fn abelian(basis: Vec<String>, params: ParamSet) -> Result<Self, StructureError> {
        Self::new(basis, params, std::iter::empty())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn basis_index(&self, label: &str) -> Result<usize, StructureError> {
        self.basis
            .iter()
            .position(|b| b == label)
            .ok_or_else(|| StructureError::UnknownBasisLabel(label.to_string()))
    }

    /// `[e_i, e_j]`
    pub fn bracket(&self, i: usize, j: usize) -> Vector {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Vector::zeros(self.dim()),
            std::cmp::Ordering::Less => self
                .brackets
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| Vector::zeros(self.dim())),
            std::cmp::Ordering::Greater => self.bracket(j, i).scale(&Scalar::from_int(-1)),
        }
    }

    /// Bilinear extension of the bracket.
    pub fn bracket_of(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for (i, xi) in x.nonzero() {
            for (j, yj) in y.nonzero() {
                if i != j {
                    out.add_scaled(&(xi * yj), &self.bracket(i, j));
                }
            }
        }
        out
    }

    /// Non-vanishing brackets `(i, j, [e_i, e_j])` with `i < j`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &Vector)> {
        self.brackets
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&(i, j), v)| (i, j, v))
    }

    /// Jacobi identity on every basis triple; the witness is `(i, j, k, l)`
    /// with `l` the offending component.
    pub fn check_jacobi(&self) -> CheckResult {
        let dim = self.dim();
        let mut cache: BTreeMap<(usize, usize, usize), Vector> = BTreeMap::new();
        check_identity("jacobi", dim, 4, |idx| {
            let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
            let v = cache.entry((i, j, k)).or_insert_with(|| {
                let a = self.bracket_of(&self.bracket(i, j), &Vector::basis(dim, k));
                let b = self.bracket_of(&self.bracket(j, k), &Vector::basis(dim, i));
                let c = self.bracket_of(&self.bracket(k, i), &Vector::basis(dim, j));
                a.add(&b).add(&c)
            });
            v.get(l).clone()
        })
    }

    pub fn substitute(&self, subst: &Substitution) -> Self {
        LieAlgebraStructure {
            basis: self.basis.clone(),
            params: self.params.clone(),
            brackets: self
                .brackets
                .iter()
                .map(|(&k, v)| (k, v.substitute(subst)))
                .collect(),
        }
    }
}

/// The tensors `(φ, ξ, η, g)` in the basis of the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct PiStructure {
    /// Column `j` is `φ e_j`.
    pub phi: Matrix,
    pub xi: Vector,
    pub eta: Vector,
    pub metric: Matrix,
}

impl PiStructure {
    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    fn check_dims(&self) -> Result<(), StructureError> {
        let dim = self.dim();
        for (what, got) in [
            ("xi", self.xi.dim()),
            ("eta", self.eta.dim()),
            ("metric", self.metric.dim()),
        ] {
            if got != dim {
                return Err(StructureError::DimensionMismatch {
                    what,
                    expected: dim,
                    got,
                });
            }
        }
        Ok(())
    }

    pub fn substitute(&self, subst: &Substitution) -> Self {
        PiStructure {
            phi: self.phi.substitute(subst),
            xi: self.xi.substitute(subst),
            eta: self.eta.substitute(subst),
            metric: self.metric.substitute(subst),
        }
    }
}

/// Check the Jacobi identity and every structure axiom. Failing checks carry
/// the first violating index tuple and the residual there.
pub fn validate(
    algebra: &LieAlgebraStructure,
    structure: &PiStructure,
) -> Result<ValidationReport, StructureError> {
    structure.check_dims()?;
    let dim = algebra.dim();
    if structure.dim() != dim {
        return Err(StructureError::DimensionMismatch {
            what: "structure vs algebra",
            expected: dim,
            got: structure.dim(),
        });
    }
    let (phi, xi, eta, g) = (
        &structure.phi,
        &structure.xi,
        &structure.eta,
        &structure.metric,
    );
    let phi2 = phi.mul(phi);
    let phi_cols: Vec<Vector> = (0..dim).map(|j| phi.column(j)).collect();
    let kron = |a: usize, b: usize| {
        if a == b {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    };

    let mut report = ValidationReport::new();
    report.push(algebra.check_jacobi());
    report.push(check_identity("phi_xi", dim, 1, |i| {
        phi.apply(xi).get(i[0]).clone()
    }));
    report.push(check_identity("phi_squared", dim, 2, |i| {
        phi2.get(i[0], i[1]) - kron(i[0], i[1]) + xi.get(i[0]) * eta.get(i[1])
    }));
    report.push(check_identity("eta_phi", dim, 1, |i| {
        eta.dot(&phi_cols[i[0]])
    }));
    report.push(check_identity("eta_xi", dim, 0, |_| {
        eta.dot(xi) - Scalar::one()
    }));
    report.push(check_identity("trace_phi", dim, 0, |_| phi.trace()));
    report.push(check_identity("metric_symmetric", dim, 2, |i| {
        g.get(i[0], i[1]) - g.get(i[1], i[0])
    }));
    report.push(check_identity("metric_phi_compat", dim, 2, |i| {
        g.bilinear(&phi_cols[i[0]], &phi_cols[i[1]]) - g.get(i[0], i[1])
            + eta.get(i[0]) * eta.get(i[1])
    }));
    report.push(check_identity("metric_phi_symmetric", dim, 2, |i| {
        g.bilinear(&phi_cols[i[0]], &Vector::basis(dim, i[1]))
            - g.bilinear(&Vector::basis(dim, i[0]), &phi_cols[i[1]])
    }));
    report.push(check_identity("eta_dual", dim, 1, |i| {
        g.bilinear(&Vector::basis(dim, i[0]), xi) - eta.get(i[0])
    }));
    report.push(check_identity("xi_unit", dim, 0, |_| {
        g.bilinear(xi, xi) - Scalar::one()
    }));
    report.push(CheckResult::from_bool(
        "metric_invertible",
        g.inverse().is_some(),
        vec![],
    ));
    report.push(match g.is_positive_definite() {
        Some(ok) => CheckResult::from_bool("metric_positive_definite", ok, vec![]),
        None => CheckResult::skipped("metric_positive_definite", "metric depends on parameters"),
    });
    Ok(report)
}

/// A validated instance: algebra, structure, inverse metric and the basis
/// images `φ e_i`, `φ² e_i` used throughout the formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct PiManifold {
    algebra: LieAlgebraStructure,
    structure: PiStructure,
    g_inv: Matrix,
    phi2: Matrix,
    basis: Vec<Vector>,
    phi_cols: Vec<Vector>,
    phi2_cols: Vec<Vector>,
}

impl PiManifold {
    /// Build an instance, rejecting it unless every axiom holds.
    pub fn new(
        algebra: LieAlgebraStructure,
        structure: PiStructure,
    ) -> Result<Self, StructureError> {
        let report = validate(&algebra, &structure)?;
        if !report.all_passed() {
            let params = algebra.params().clone();
            let msg = report
                .failures()
                .map(|c| c.describe(&params))
                .collect::<Vec<_>>()
                .join("; ");
            return Err(StructureError::Invalid(msg));
        }
        Self::assemble(algebra, structure)
    }

    /// Build without checking the structure axioms (the metric must still be
    /// invertible). Used for deliberately broken test inputs.
    pub fn new_unchecked(
        algebra: LieAlgebraStructure,
        structure: PiStructure,
    ) -> Result<Self, StructureError> {
        structure.check_dims()?;
        if structure.dim() != algebra.dim() {
            return Err(StructureError::DimensionMismatch {
                what: "structure vs algebra",
                expected: algebra.dim(),
                got: structure.dim(),
            });
        }
        Self::assemble(algebra, structure)
    }

    fn assemble(
        algebra: LieAlgebraStructure,
        structure: PiStructure,
    ) -> Result<Self, StructureError> {
        let g_inv = structure
            .metric
            .inverse()
            .ok_or(StructureError::MetricNotInvertible)?;
        let dim = algebra.dim();
        let phi2 = structure.phi.mul(&structure.phi);
        let basis = (0..dim).map(|i| Vector::basis(dim, i)).collect();
        let phi_cols = (0..dim).map(|i| structure.phi.column(i)).collect();
        let phi2_cols = (0..dim).map(|i| phi2.column(i)).collect();
        Ok(PiManifold {
            algebra,
            structure,
            g_inv,
            phi2,
            basis,
            phi_cols,
            phi2_cols,
        })
    }

    pub fn algebra(&self) -> &LieAlgebraStructure {
        &self.algebra
    }

    pub fn structure(&self) -> &PiStructure {
        &self.structure
    }

    pub fn params(&self) -> &ParamSet {
        self.algebra.params()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `n` with `dim = 2n + 1`.
    pub fn half_dim(&self) -> usize {
        (self.dim() - 1) / 2
    }

    pub fn metric(&self) -> &Matrix {
        &self.structure.metric
    }

    pub fn metric_inverse(&self) -> &Matrix {
        &self.g_inv
    }

    pub fn phi_matrix(&self) -> &Matrix {
        &self.structure.phi
    }

    pub fn phi2_matrix(&self) -> &Matrix {
        &self.phi2
    }

    pub fn e(&self, i: usize) -> &Vector {
        &self.basis[i]
    }

    /// `φ e_i`
    pub fn phi_e(&self, i: usize) -> &Vector {
        &self.phi_cols[i]
    }

    /// `φ² e_i`
    pub fn phi2_e(&self, i: usize) -> &Vector {
        &self.phi2_cols[i]
    }

    pub fn xi(&self) -> &Vector {
        &self.structure.xi
    }

    /// `η(e_i)`
    pub fn eta_e(&self, i: usize) -> &Scalar {
        self.structure.eta.get(i)
    }

    pub fn eta_covector(&self) -> &Vector {
        &self.structure.eta
    }

    pub fn phi(&self, x: &Vector) -> Vector {
        self.structure.phi.apply(x)
    }

    pub fn eta(&self, x: &Vector) -> Scalar {
        self.structure.eta.dot(x)
    }

    pub fn g(&self, x: &Vector, y: &Vector) -> Scalar {
        self.structure.metric.bilinear(x, y)
    }

    /// Horizontal part `φ² x`.
    pub fn project_h(&self, x: &Vector) -> Vector {
        self.phi2.apply(x)
    }

    /// Vertical part `η(x) ξ`.
    pub fn project_v(&self, x: &Vector) -> Vector {
        self.xi().scale(&self.eta(x))
    }

    /// `g̃(x, y) = g(x, φy) + η(x)η(y)` as a matrix.
    pub fn associated_metric(&self) -> Matrix {
        let dim = self.dim();
        Matrix::from_fn(dim, |i, j| {
            self.g(self.e(i), self.phi_e(j)) + self.eta_e(i) * self.eta_e(j)
        })
    }

    /// Apply a substitution to every input tensor and rebuild.
    pub fn substitute(&self, subst: &Substitution) -> Result<Self, StructureError> {
        Self::assemble(
            self.algebra.substitute(subst),
            self.structure.substitute(subst),
        )
    }
}
