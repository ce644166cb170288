//! Dense tensors with exact entries over a fixed basis `e_0 .. e_{dim-1}`.
//!
//! Entries are stored row-major with the first slot most significant, so the
//! component `T_{ijk}` of a (0,3) tensor is `T(e_i, e_j, e_k)`.

use std::fmt;

use crate::scalar::{Rational, Scalar, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("slot {slot} out of range for a tensor with {rank} slots")]
    SlotOutOfRange { slot: usize, rank: usize },
    #[error("contraction needs one upper and one lower slot, got {0:?} and {1:?}")]
    SlotKindMismatch(Slot, Slot),
    #[error("cannot contract a slot with itself")]
    SameSlot,
    #[error("expected a {expected:?} slot at position {slot}")]
    WrongSlotKind { slot: usize, expected: Slot },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("unsupported valence with {0} slots")]
    UnsupportedValence(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Upper,
    Lower,
}

/// Coordinate vector (or covector) in the fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Scalar::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_entries(entries: Vec<Scalar>) -> Self {
        Vector(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.0[i]
    }

    pub fn set(&mut self, i: usize, value: Scalar) {
        self.0[i] = value;
    }

    /// `(index, coefficient)` for the nonzero coefficients.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().enumerate().filter(|(_, s)| !s.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, factor: &Scalar) -> Vector {
        Vector(self.0.iter().map(|s| s * factor).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self += factor * other`
    pub fn add_scaled(&mut self, factor: &Scalar, other: &Vector) {
        for (i, s) in other.nonzero() {
            self.0[i] += factor * s;
        }
    }

    /// Pairing of a covector with a vector.
    pub fn dot(&self, other: &Vector) -> Scalar {
        self.nonzero()
            .filter(|(i, _)| !other.0[*i].is_zero())
            .map(|(i, s)| s * &other.0[i])
            .sum()
    }

    pub fn substitute(&self, subst: &Substitution) -> Vector {
        Vector(self.0.iter().map(|s| s.substitute(subst)).collect())
    }
}

/// Square matrix; column `j` holds the image of `e_j` when the matrix
/// represents an endomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    dim: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![Scalar::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| {
            if r == c {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Matrix { dim, data }
    }

    pub fn from_columns(columns: &[Vector]) -> Self {
        let dim = columns.len();
        Self::from_fn(dim, |r, c| columns[c].get(r).clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        self.data[row * self.dim + col] = value;
    }

    pub fn column(&self, col: usize) -> Vector {
        Vector((0..self.dim).map(|r| self.get(r, col).clone()).collect())
    }

    pub fn row(&self, row: usize) -> Vector {
        Vector(self.data[row * self.dim..(row + 1) * self.dim].to_vec())
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim);
        for (c, s) in v.nonzero() {
            for r in 0..self.dim {
                let m = self.get(r, c);
                if !m.is_zero() {
                    out.0[r] += m * s;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.dim, |r, c| {
            (0..self.dim)
                .filter(|&k| !self.get(r, k).is_zero() && !other.get(k, c).is_zero())
                .map(|k| self.get(r, k) * other.get(k, c))
                .sum()
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.dim, |r, c| self.get(c, r).clone())
    }

    pub fn trace(&self) -> Scalar {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.dim, |r, c| self.get(r, c) - other.get(r, c))
    }

    /// Bilinear form `x^T M y`.
    pub fn bilinear(&self, x: &Vector, y: &Vector) -> Scalar {
        let mut acc = Scalar::zero();
        for (r, xs) in x.nonzero() {
            for (c, ys) in y.nonzero() {
                let m = self.get(r, c);
                if !m.is_zero() {
                    acc += &(xs * ys) * m;
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn substitute(&self, subst: &Substitution) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|s| s.substitute(subst)).collect(),
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Matrix {
        let mut data = Vec::with_capacity((self.dim - 1) * (self.dim - 1));
        for r in (0..self.dim).filter(|&r| r != skip_row) {
            for c in (0..self.dim).filter(|&c| c != skip_col) {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            dim: self.dim - 1,
            data,
        }
    }

    /// Determinant by cofactor expansion, skipping zero entries. Exact over
    /// the polynomial ring; intended for the small dimensions used here.
    pub fn determinant(&self) -> Scalar {
        match self.dim {
            0 => Scalar::one(),
            1 => self.data[0].clone(),
            _ => {
                let mut acc = Scalar::zero();
                for c in 0..self.dim {
                    let entry = self.get(0, c);
                    if entry.is_zero() {
                        continue;
                    }
                    let term = entry * self.minor(0, c).determinant();
                    if c % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            }
        }
    }

    /// Inverse when the determinant is a nonzero rational constant; the
    /// inverse of a general polynomial matrix is not polynomial.
    pub fn inverse(&self) -> Option<Matrix> {
        let det = self.determinant().as_constant()?;
        if num_traits::Zero::is_zero(&det) {
            return None;
        }
        let inv_det: Rational = num_traits::Inv::inv(det);
        Some(Matrix::from_fn(self.dim, |r, c| {
            let cofactor = self.minor(c, r).determinant().scale(&inv_det);
            if (r + c) % 2 == 0 {
                cofactor
            } else {
                -cofactor
            }
        }))
    }

    /// Numeric positive-definiteness by leading principal minors. `None` if
    /// some entry still depends on a parameter.
    pub fn is_positive_definite(&self) -> Option<bool> {
        for k in 1..=self.dim {
            let lead = Matrix::from_fn(k, |r, c| self.get(r, c).clone());
            let det = lead.determinant().as_constant()?;
            if !num_traits::Signed::is_positive(&det) {
                return Some(false);
            }
        }
        Some(true)
    }
}

/// Dense tensor with a fixed slot pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tensor {
    dim: usize,
    slots: Vec<Slot>,
    data: Vec<Scalar>,
}

impl Tensor {
    pub fn zeros(dim: usize, slots: &[Slot]) -> Self {
        let len = dim.pow(slots.len() as u32);
        Tensor {
            dim,
            slots: slots.to_vec(),
            data: vec![Scalar::zero(); len],
        }
    }

    /// Covariant tensor with `rank` lower slots.
    pub fn covariant(dim: usize, rank: usize) -> Self {
        Self::zeros(dim, &vec![Slot::Lower; rank])
    }

    /// Fill every component from `f(index)`.
    pub fn from_fn(dim: usize, slots: &[Slot], mut f: impl FnMut(&[usize]) -> Scalar) -> Self {
        let mut t = Self::zeros(dim, slots);
        let mut idx = vec![0; slots.len()];
        for flat in 0..t.data.len() {
            t.unflatten(flat, &mut idx);
            t.data[flat] = f(&idx);
        }
        t
    }

    pub fn covariant_from_fn(dim: usize, rank: usize, f: impl FnMut(&[usize]) -> Scalar) -> Self {
        Self::from_fn(dim, &vec![Slot::Lower; rank], f)
    }

    pub fn from_vector(v: &Vector) -> Self {
        Tensor {
            dim: v.dim(),
            slots: vec![Slot::Upper],
            data: v.0.clone(),
        }
    }

    pub fn from_covector(v: &Vector) -> Self {
        Tensor {
            dim: v.dim(),
            slots: vec![Slot::Lower],
            data: v.0.clone(),
        }
    }

    /// (1,1) tensor of an endomorphism, slots `[Upper, Lower]`, component
    /// `[a, b]` = `(M e_b)^a`.
    pub fn from_endomorphism(m: &Matrix) -> Self {
        Self::from_fn(m.dim(), &[Slot::Upper, Slot::Lower], |i| {
            m.get(i[0], i[1]).clone()
        })
    }

    /// (0,2) tensor of a bilinear form.
    pub fn from_bilinear(m: &Matrix) -> Self {
        Self::covariant_from_fn(m.dim(), 2, |i| m.get(i[0], i[1]).clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    fn flatten(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.slots.len());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for slot in (0..idx.len()).rev() {
            idx[slot] = flat % self.dim;
            flat /= self.dim;
        }
    }

    /// Components in flat order, last index fastest.
    pub fn components(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.flatten(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Scalar) {
        let flat = self.flatten(idx);
        self.data[flat] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Nonzero components in lexicographic index order.
    pub fn nonzero(&self) -> Vec<(Vec<usize>, &Scalar)> {
        let mut out = Vec::new();
        let mut idx = vec![0; self.slots.len()];
        for (flat, s) in self.data.iter().enumerate() {
            if !s.is_zero() {
                self.unflatten(flat, &mut idx);
                out.push((idx.clone(), s));
            }
        }
        out
    }

    /// First index (lexicographically) where the two tensors differ, with
    /// the residual `self - other` there.
    pub fn first_difference(&self, other: &Tensor) -> Option<(Vec<usize>, Scalar)> {
        assert_eq!(self.slots, other.slots, "slot patterns differ");
        let mut idx = vec![0; self.slots.len()];
        for (flat, (a, b)) in self.data.iter().zip(&other.data).enumerate() {
            if a != b {
                self.unflatten(flat, &mut idx);
                return Some((idx, a - b));
            }
        }
        None
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Tensor {
        Tensor {
            dim: self.dim,
            slots: self.slots.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn substitute(&self, subst: &Substitution) -> Tensor {
        self.map(|s| s.substitute(subst))
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.slots, other.slots, "slot patterns differ");
        Tensor {
            dim: self.dim,
            slots: self.slots.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.slots, other.slots, "slot patterns differ");
        Tensor {
            dim: self.dim,
            slots: self.slots.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Scalar) -> Tensor {
        self.map(|s| s * factor)
    }

    fn check_slot(&self, slot: usize) -> Result<(), TensorError> {
        if slot >= self.rank() {
            Err(TensorError::SlotOutOfRange {
                slot,
                rank: self.rank(),
            })
        } else {
            Ok(())
        }
    }

    /// Trace over an upper and a lower slot.
    pub fn contract(&self, slot_a: usize, slot_b: usize) -> Result<Tensor, TensorError> {
        self.check_slot(slot_a)?;
        self.check_slot(slot_b)?;
        if slot_a == slot_b {
            return Err(TensorError::SameSlot);
        }
        let (ka, kb) = (self.slots[slot_a], self.slots[slot_b]);
        if ka == kb {
            return Err(TensorError::SlotKindMismatch(ka, kb));
        }
        let slots: Vec<Slot> = self
            .slots
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != slot_a && s != slot_b)
            .map(|(_, &k)| k)
            .collect();
        let mut full = vec![0; self.rank()];
        Ok(Tensor::from_fn(self.dim, &slots, |rest| {
            let mut it = rest.iter();
            for (s, v) in full.iter_mut().enumerate() {
                if s != slot_a && s != slot_b {
                    *v = *it.next().expect("rest index");
                }
            }
            let mut acc = Scalar::zero();
            for i in 0..self.dim {
                full[slot_a] = i;
                full[slot_b] = i;
                acc += self.get(&full);
            }
            acc
        }))
    }

    /// Replace `slot` by `sum_b m[a][b] T(.., b, ..)` and give it kind `kind`.
    fn move_index(&self, slot: usize, m: &Matrix, kind: Slot) -> Tensor {
        let mut slots = self.slots.clone();
        slots[slot] = kind;
        let mut src = vec![0; self.rank()];
        Tensor::from_fn(self.dim, &slots, |idx| {
            src.copy_from_slice(idx);
            let a = idx[slot];
            let mut acc = Scalar::zero();
            for b in 0..self.dim {
                let w = m.get(a, b);
                if w.is_zero() {
                    continue;
                }
                src[slot] = b;
                let v = self.get(&src);
                if !v.is_zero() {
                    acc += w * v;
                }
            }
            acc
        })
    }

    /// Lower an upper slot with the metric.
    pub fn lower(&self, slot: usize, g: &Matrix) -> Result<Tensor, TensorError> {
        self.check_slot(slot)?;
        if self.slots[slot] != Slot::Upper {
            return Err(TensorError::WrongSlotKind {
                slot,
                expected: Slot::Upper,
            });
        }
        if g.dim() != self.dim {
            return Err(TensorError::DimensionMismatch(g.dim(), self.dim));
        }
        Ok(self.move_index(slot, g, Slot::Lower))
    }

    /// Raise a lower slot with the inverse metric.
    pub fn raise(&self, slot: usize, g_inv: &Matrix) -> Result<Tensor, TensorError> {
        self.check_slot(slot)?;
        if self.slots[slot] != Slot::Lower {
            return Err(TensorError::WrongSlotKind {
                slot,
                expected: Slot::Lower,
            });
        }
        if g_inv.dim() != self.dim {
            return Err(TensorError::DimensionMismatch(g_inv.dim(), self.dim));
        }
        Ok(self.move_index(slot, g_inv, Slot::Upper))
    }

    /// Reorder slots: slot `s` of the result is slot `perm[s]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.rank());
        let slots: Vec<Slot> = perm.iter().map(|&p| self.slots[p]).collect();
        let mut src = vec![0; self.rank()];
        Tensor::from_fn(self.dim, &slots, |idx| {
            for (s, &p) in perm.iter().enumerate() {
                src[p] = idx[s];
            }
            self.get(&src).clone()
        })
    }

    /// Multilinear evaluation; the argument for an upper slot is read as a
    /// covector.
    pub fn eval(&self, args: &[&Vector]) -> Result<Scalar, TensorError> {
        if args.len() != self.rank() {
            return Err(TensorError::ArityMismatch {
                expected: self.rank(),
                got: args.len(),
            });
        }
        if let Some(a) = args.iter().find(|a| a.dim() != self.dim) {
            return Err(TensorError::DimensionMismatch(a.dim(), self.dim));
        }
        Ok(self.at(args))
    }

    /// Unchecked multilinear evaluation over the nonzero coefficients of the
    /// arguments. Panics on arity mismatch.
    pub fn at(&self, args: &[&Vector]) -> Scalar {
        assert_eq!(args.len(), self.rank(), "arity mismatch");
        let mut idx = vec![0; args.len()];
        let mut acc = Scalar::zero();
        self.eval_rec(args, 0, &Scalar::one(), &mut idx, &mut acc);
        acc
    }

    fn eval_rec(
        &self,
        args: &[&Vector],
        slot: usize,
        weight: &Scalar,
        idx: &mut [usize],
        acc: &mut Scalar,
    ) {
        if slot == args.len() {
            let v = self.get(idx);
            if !v.is_zero() {
                *acc += weight * v;
            }
            return;
        }
        for (i, c) in args[slot].nonzero() {
            idx[slot] = i;
            let w = if c.is_one() {
                weight.clone()
            } else {
                weight * c
            };
            self.eval_rec(args, slot + 1, &w, idx, acc);
        }
    }

    /// Value of a 1-form on a vector.
    pub fn apply_form(&self, x: &Vector) -> Result<Scalar, TensorError> {
        if self.slots != [Slot::Lower] {
            return Err(TensorError::UnsupportedValence(self.rank()));
        }
        self.eval(&[x])
    }

    /// For a tensor whose last slot is upper: the vector obtained by
    /// evaluating the other slots on `args`.
    pub fn vector_at(&self, args: &[&Vector]) -> Vector {
        assert_eq!(self.slots.last(), Some(&Slot::Upper));
        assert_eq!(args.len() + 1, self.rank(), "arity mismatch");
        let mut out = Vector::zeros(self.dim);
        let mut probe = Vector::zeros(self.dim);
        for k in 0..self.dim {
            probe.0[k] = Scalar::one();
            let mut full: Vec<&Vector> = args.to_vec();
            full.push(&probe);
            out.0[k] = self.at(&full);
            probe.0[k] = Scalar::zero();
        }
        out
    }

    /// Vector stored by a (1,0) tensor, or covector by a (0,1) tensor.
    pub fn as_vector(&self) -> Vector {
        assert_eq!(self.rank(), 1);
        Vector(self.data.clone())
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::Upper => "upper",
            Slot::Lower => "lower",
        })
    }
}

/// Coefficients of an affine connection on left-invariant fields:
/// `gamma(i, j, k)` is the `e_k`-component of `D_{e_i} e_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConnectionCoefficients(Tensor);

impl ConnectionCoefficients {
    pub const SLOTS: [Slot; 3] = [Slot::Lower, Slot::Lower, Slot::Upper];

    pub fn zeros(dim: usize) -> Self {
        ConnectionCoefficients(Tensor::zeros(dim, &Self::SLOTS))
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        ConnectionCoefficients(Tensor::from_fn(dim, &Self::SLOTS, |i| f(i[0], i[1], i[2])))
    }

    pub fn from_tensor(t: Tensor) -> Result<Self, TensorError> {
        if t.slots() != Self::SLOTS {
            return Err(TensorError::UnsupportedValence(t.rank()));
        }
        Ok(ConnectionCoefficients(t))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.0.get(&[i, j, k])
    }

    pub fn tensor(&self) -> &Tensor {
        &self.0
    }

    /// `D_x y` for left-invariant `x`, `y` given by constant coefficients.
    pub fn apply(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for (i, xi) in x.nonzero() {
            for (j, yj) in y.nonzero() {
                let w = xi * yj;
                for k in 0..self.dim() {
                    let c = self.gamma(i, j, k);
                    if !c.is_zero() {
                        out.0[k] += &w * c;
                    }
                }
            }
        }
        out
    }

    /// `D_{e_i} e_j` as a vector.
    pub fn column(&self, i: usize, j: usize) -> Vector {
        Vector(
            (0..self.dim())
                .map(|k| self.gamma(i, j, k).clone())
                .collect(),
        )
    }

    pub fn substitute(&self, subst: &Substitution) -> Self {
        ConnectionCoefficients(self.0.substitute(subst))
    }
}
