//! Generic fundamental tensors of a prescribed class, for testing.
//!
//! The components of `F` are treated as unknowns. Every identity from the
//! general `F` properties and from the class conditions is linear in them, so
//! the class is the nullspace of an exact rational matrix.

use num_traits::{One, Zero};
use rand::Rng;

use crate::classifier::{class_conditions, torsion_conditions, BasicClass};
use crate::levi_civita::{f_property_conditions, lee_forms, Condition};
use crate::natural::{torsion_via_f, TorsionData, Which};
use crate::scalar::{Rational, Scalar};
use crate::structure::PiManifold;
use crate::tensor::Tensor;

/// Reduced row echelon form built one row at a time.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    cols: usize,
    pivots: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Add a row; returns whether it raised the rank.
    pub fn push(&mut self, mut row: Vec<Rational>) -> bool {
        assert_eq!(row.len(), self.cols);
        for (c, p) in &self.pivots {
            if !row[*c].is_zero() {
                let k = row[*c].clone();
                for (r, v) in row.iter_mut().zip(p) {
                    if !v.is_zero() {
                        *r -= &k * v;
                    }
                }
            }
        }
        let Some(c) = row.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let inv = row[c].recip();
        for v in row.iter_mut() {
            *v *= &inv;
        }
        for (_, p) in self.pivots.iter_mut() {
            if !p[c].is_zero() {
                let k = p[c].clone();
                for (a, v) in p.iter_mut().zip(&row) {
                    if !v.is_zero() {
                        *a -= &k * v;
                    }
                }
            }
        }
        self.pivots.push((c, row));
        true
    }

    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let pivot_cols: Vec<usize> = self.pivots.iter().map(|(c, _)| *c).collect();
        (0..self.cols)
            .filter(|c| !pivot_cols.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (c, p) in &self.pivots {
                    v[*c] = -p[free].clone();
                }
                v
            })
            .collect()
    }
}

/// The (0,3) tensor whose component with flat index `k` is the unknown `k`.
pub fn unknown_tensor(dim: usize) -> Tensor {
    let mut k = 0;
    Tensor::covariant_from_fn(dim, 3, |_| {
        k += 1;
        Scalar::var(k - 1)
    })
}

/// Coefficients of a scalar that is linear and homogeneous in the unknowns.
pub fn linear_row(s: &Scalar, unknowns: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); unknowns];
    for (m, c) in s.terms() {
        match m.factors() {
            [(v, 1)] => row[*v] = c.clone(),
            _ => panic!("residual is not linear homogeneous"),
        }
    }
    row
}

fn push_conditions(ech: &mut Echelon, conditions: &[Condition<'_>], dim: usize) {
    let unknowns = ech.cols;
    for c in conditions {
        let mut idx = vec![0; c.arity];
        loop {
            let r = (c.residual)(&idx);
            if !r.is_zero() {
                ech.push(linear_row(&r, unknowns));
            }
            let mut slot = c.arity;
            loop {
                if slot == 0 {
                    break;
                }
                slot -= 1;
                idx[slot] += 1;
                if idx[slot] < dim {
                    break;
                }
                idx[slot] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
}

/// A basis of the fundamental tensors of `inst`, restricted to `class` when
/// given.
pub fn class_basis(inst: &PiManifold, class: Option<BasicClass>) -> Vec<Tensor> {
    let dim = inst.dim();
    let unknowns = dim * dim * dim;
    let f = unknown_tensor(dim);
    let mut ech = Echelon::new(unknowns);
    push_conditions(&mut ech, &f_property_conditions(&f, inst), dim);
    if let Some(class) = class {
        let lee = lee_forms(&f, inst);
        push_conditions(&mut ech, &class_conditions(inst, &f, &lee, class), dim);
    }
    basis_from(&ech, dim)
}

/// A basis of the fundamental tensors whose torsion of `D¹` or `D²`
/// satisfies the torsion characterisation of `class`.
pub fn torsion_class_basis(inst: &PiManifold, class: BasicClass, which: Which) -> Vec<Tensor> {
    let dim = inst.dim();
    let f = unknown_tensor(dim);
    let mut ech = Echelon::new(dim * dim * dim);
    push_conditions(&mut ech, &f_property_conditions(&f, inst), dim);
    let t = TorsionData::from_lowered(inst, torsion_via_f(inst, &f, which));
    push_conditions(&mut ech, &torsion_conditions(inst, &t, which, class), dim);
    basis_from(&ech, dim)
}

fn basis_from(ech: &Echelon, dim: usize) -> Vec<Tensor> {
    ech.nullspace()
        .into_iter()
        .map(|v| {
            let mut k = 0;
            Tensor::covariant_from_fn(dim, 3, |_| {
                k += 1;
                Scalar::constant(v[k - 1].clone())
            })
        })
        .collect()
}

/// A random integer combination of `basis` with every coefficient nonzero.
pub fn random_member(basis: &[Tensor], dim: usize, rng: &mut impl Rng) -> Tensor {
    basis.iter().fold(Tensor::covariant(dim, 3), |acc, b| {
        let mut c: i64 = 0;
        while c == 0 {
            c = rng.gen_range(-4..=4);
        }
        acc.add(&b.scale(&Scalar::from_int(c)))
    })
}

/// Dimension of the span of `tensors`.
pub fn span_rank(tensors: &[Tensor]) -> usize {
    let Some(first) = tensors.first() else {
        return 0;
    };
    let mut ech = Echelon::new(first.len());
    for t in tensors {
        let row = (0..t.len())
            .map(|k| t.components()[k].as_constant().expect("numeric tensor"))
            .collect();
        ech.push(row);
    }
    ech.rank()
}
