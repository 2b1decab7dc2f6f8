//! Context-free value assignments on effects.

use serde::{Deserialize, Serialize};

use crate::linalg::{ComplexMatrix, HERMITICITY_TOL};
use crate::quantum::Povm;

/// Value of a coarse-grained effect: the sum of the listed outcomes of one
/// group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseValue {
    pub group: usize,
    pub outcomes: Vec<usize>,
    pub value: u8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueAssignment {
    /// `values[g][k]` is the value of effect `k` of group `g`.
    pub values: Vec<Vec<u8>>,
    pub coarse: Vec<CoarseValue>,
}

impl ValueAssignment {
    pub fn new(values: Vec<Vec<u8>>) -> Self {
        Self { values, coarse: Vec::new() }
    }

    pub fn with_coarse(mut self, group: usize, outcomes: Vec<usize>, value: u8) -> Self {
        self.coarse.push(CoarseValue { group, outcomes, value });
        self
    }
}

/// True iff every group has exactly one effect valued 1, each coarse-grained
/// value equals the sum of its parts, and equal operators (across groups or
/// via coarse-graining) carry equal values.
pub fn check_value_assignment(groups: &[Povm], assignment: &ValueAssignment) -> bool {
    if assignment.values.len() != groups.len() {
        return false;
    }
    let mut valued: Vec<(ComplexMatrix, u8)> = Vec::new();
    for (povm, vals) in groups.iter().zip(&assignment.values) {
        if vals.len() != povm.num_outcomes() || vals.iter().any(|&v| v > 1) {
            return false;
        }
        if vals.iter().filter(|&&v| v == 1).count() != 1 {
            return false;
        }
        for (e, &v) in povm.effects().iter().zip(vals) {
            valued.push((e.matrix().clone(), v));
        }
    }
    for cv in &assignment.coarse {
        let Some(povm) = groups.get(cv.group) else {
            return false;
        };
        let mut outcomes = cv.outcomes.clone();
        outcomes.sort_unstable();
        outcomes.dedup();
        if outcomes.is_empty() || outcomes.len() != cv.outcomes.len() {
            return false;
        }
        if outcomes.iter().any(|&k| k >= povm.num_outcomes()) || cv.value > 1 {
            return false;
        }
        let sum: u8 = outcomes.iter().map(|&k| assignment.values[cv.group][k]).sum();
        if sum != cv.value {
            return false;
        }
        let mut m = ComplexMatrix::zeros(povm.dim(), povm.dim());
        for &k in &outcomes {
            m = &m + povm.effects()[k].matrix();
        }
        valued.push((m, cv.value));
    }
    for (i, (a, va)) in valued.iter().enumerate() {
        for (b, vb) in &valued[i + 1..] {
            if a.rows() == b.rows() && a.max_abs_diff(b) <= HERMITICITY_TOL && va != vb {
                return false;
            }
        }
    }
    true
}
