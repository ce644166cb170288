//! Named pass/fail checks with witnesses.

use crate::scalar::{ParamSet, Scalar};
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// First violating index tuple and the nonzero residual there.
    Fail {
        witness: Vec<usize>,
        residual: Scalar,
    },
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub outcome: Outcome,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            outcome: Outcome::Pass,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Vec<usize>, residual: Scalar) -> Self {
        CheckResult {
            name: name.into(),
            outcome: Outcome::Fail { witness, residual },
        }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            outcome: Outcome::Skipped(why.into()),
        }
    }

    pub fn passed(&self) -> bool {
        !matches!(self.outcome, Outcome::Fail { .. })
    }

    /// Boolean condition with a witness; a failing condition gets residual 1.
    pub fn from_bool(name: impl Into<String>, ok: bool, witness: Vec<usize>) -> Self {
        if ok {
            Self::pass(name)
        } else {
            Self::fail(name, witness, Scalar::one())
        }
    }

    pub fn describe(&self, params: &ParamSet) -> String {
        match &self.outcome {
            Outcome::Pass => format!("PASS {}", self.name),
            Outcome::Skipped(why) => format!("SKIP {} ({why})", self.name),
            Outcome::Fail { witness, residual } => format!(
                "FAIL {} at {:?}: residual {}",
                self.name,
                witness,
                residual.display(params)
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: CheckResult) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Enumerate every index tuple of the given arity; the check fails at the
/// first tuple where `residual` is nonzero.
pub fn check_identity(
    name: impl Into<String>,
    dim: usize,
    arity: usize,
    mut residual: impl FnMut(&[usize]) -> Scalar,
) -> CheckResult {
    let mut idx = vec![0; arity];
    loop {
        let r = residual(&idx);
        if !r.is_zero() {
            return CheckResult::fail(name, idx, r);
        }
        // odometer increment, last index fastest
        let mut slot = arity;
        loop {
            if slot == 0 {
                return CheckResult::pass(name);
            }
            slot -= 1;
            idx[slot] += 1;
            if idx[slot] < dim {
                break;
            }
            idx[slot] = 0;
        }
    }
}

/// Equality of two tensors as a check.
pub fn check_equal(name: impl Into<String>, lhs: &Tensor, rhs: &Tensor) -> CheckResult {
    match lhs.first_difference(rhs) {
        None => CheckResult::pass(name),
        Some((idx, r)) => CheckResult::fail(name, idx, r),
    }
}

/// A tensor that must vanish.
pub fn check_zero(name: impl Into<String>, t: &Tensor) -> CheckResult {
    match t.nonzero().into_iter().next() {
        None => CheckResult::pass(name),
        Some((idx, r)) => CheckResult::fail(name, idx, r.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_enumeration_finds_first_witness() {
        let c = check_identity("x", 3, 2, |i| {
            if i == [1, 2] || i == [2, 0] {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        assert_eq!(
            c.outcome,
            Outcome::Fail {
                witness: vec![1, 2],
                residual: Scalar::one()
            }
        );
        let mut count = 0;
        assert!(check_identity("y", 3, 3, |_| {
            count += 1;
            Scalar::zero()
        })
        .passed());
        assert_eq!(count, 27);
    }

    #[test]
    fn nullary_identity_is_evaluated_once() {
        assert!(!check_identity("c", 5, 0, |_| Scalar::one()).passed());
    }
}
