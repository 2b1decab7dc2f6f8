//! LHS, PV and joint-measurability feasibility via the LP core.
//!
//! Alice's response functions `p(a|x, lambda)` are reduced to deterministic
//! strategies: any response function is a convex mixture of deterministic
//! ones, and the mixing weights can be absorbed into the hidden-state
//! weights. The LPs below therefore range over (strategy, hidden state)
//! pairs rather than the fully general form.

pub mod boxes;
pub mod jm;
pub mod mesh;
pub mod qubit;
pub mod scan;
pub mod value;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{solve_feasibility, FeasibilityProblem, FeasibilityVerdict, Status};
use crate::scalar::Scalar;

pub use boxes::{lhs_feasibility_boxworld, lhs_feasibility_boxworld_with, pv_feasibility_boxworld};
pub use jm::joint_measurability;
pub use mesh::{BlochPolytope, BlochVector, MeshInfo, MeshPair, PolytopeKind, STANDARD_MESH_SIZES};
pub use qubit::{deterministic_states, lhs_feasibility_qubit, pv_feasibility_qubit, QubitTarget};
pub use scan::{threshold_scan, ScanPoint, ThresholdBracket};
pub use value::{check_value_assignment, CoarseValue, ValueAssignment};

pub const ENUMERATION_CAP: usize = 4096;
/// Upper bound on LP columns (strategy times hidden variable).
pub const COLUMN_CAP: usize = 1 << 20;

/// `responses[x]` is the outcome produced for setting `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub responses: Vec<usize>,
}

impl DeterministicStrategy {
    /// `D(a|x, lambda)`.
    pub fn indicator(&self, x: usize, a: usize) -> bool {
        self.responses[x] == a
    }
}

pub fn enumerate_strategies(num_settings: usize, num_outcomes: usize) -> Result<Vec<DeterministicStrategy>> {
    enumerate_strategies_mixed(&vec![num_outcomes; num_settings])
}

/// All strategies for per-setting outcome counts, lexicographic with setting 0
/// most significant.
pub fn enumerate_strategies_mixed(outcomes: &[usize]) -> Result<Vec<DeterministicStrategy>> {
    if outcomes.is_empty() || outcomes.iter().any(|&k| k == 0) {
        return Err(Error::InvalidParameter(
            "strategy enumeration needs at least one setting and one outcome".into(),
        ));
    }
    let count = outcomes
        .iter()
        .try_fold(1u128, |acc, &k| acc.checked_mul(k as u128))
        .unwrap_or(u128::MAX);
    if count > ENUMERATION_CAP as u128 {
        return Err(Error::CapExceeded { count, cap: ENUMERATION_CAP });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0usize; outcomes.len()];
    loop {
        out.push(DeterministicStrategy { responses: cur.clone() });
        let mut i = outcomes.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < outcomes[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HiddenTerm<H, T> {
    pub strategy: DeterministicStrategy,
    pub hidden: H,
    pub weight: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LhsModel<H, T> {
    pub terms: Vec<HiddenTerm<H, T>>,
}

impl<H, T: Scalar> LhsModel<H, T> {
    pub fn total_weight(&self) -> T {
        self.terms.iter().fold(T::zero(), |acc, t| acc + t.weight.clone())
    }
}

/// Linear functional on the LP row space. It is bounded by `lhs_bound` on
/// every admissible column (hence on every model of the relaxed problem) and
/// evaluates to `value > lhs_bound` on the tested data.
#[derive(Clone, Debug, PartialEq)]
pub struct SteeringWitness<T> {
    pub rows: Vec<String>,
    pub functional: Vec<T>,
    pub value: T,
    pub lhs_bound: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    /// Phase-one residual of the inner problem (0 when it was decided feasible).
    pub inner_margin: f64,
    /// Phase-one residual of the outer problem.
    pub outer_margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SteeringVerdict<H, T> {
    Feasible(LhsModel<H, T>),
    Infeasible(SteeringWitness<T>),
    Undecided(Gap),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decision<H, T> {
    pub verdict: SteeringVerdict<H, T>,
    pub mesh: Option<MeshInfo>,
    pub num_rows: usize,
    pub num_columns: usize,
}

impl<H, T> Decision<H, T> {
    pub fn status(&self) -> Status {
        match self.verdict {
            SteeringVerdict::Feasible(_) => Status::Feasible,
            SteeringVerdict::Infeasible(_) => Status::Infeasible,
            SteeringVerdict::Undecided(_) => Status::Undecided,
        }
    }

    pub fn model(&self) -> Option<&LhsModel<H, T>> {
        match &self.verdict {
            SteeringVerdict::Feasible(m) => Some(m),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&SteeringWitness<T>> {
        match &self.verdict {
            SteeringVerdict::Infeasible(w) => Some(w),
            _ => None,
        }
    }
}

/// Short text form of a hidden variable, used in reports.
pub trait DescribeHidden {
    fn describe(&self) -> String;
}

impl DescribeHidden for BlochVector {
    fn describe(&self) -> String {
        format!("bloch({:.6}, {:.6}, {:.6})", self[0], self[1], self[2])
    }
}

impl DescribeHidden for Vec<usize> {
    fn describe(&self) -> String {
        let parts: Vec<String> = self.iter().map(|b| b.to_string()).collect();
        format!("table[{}]", parts.join(","))
    }
}

// floating weights below this are rounding debris from the simplex
const MODEL_EPS: f64 = 1e-14;

/// One LP whose columns are listed explicitly.
pub(crate) struct ColumnProblem<H, T> {
    pub labels: Vec<String>,
    pub rhs: Vec<T>,
    pub columns: Vec<(DeterministicStrategy, H, Vec<T>)>,
}

pub(crate) enum Solved<H, T> {
    Feasible(LhsModel<H, T>),
    Infeasible(SteeringWitness<T>),
    Undecided(f64),
}

impl<H: Clone, T: Scalar> ColumnProblem<H, T> {
    pub fn solve(&self, tol: f64) -> Result<Solved<H, T>> {
        let m = self.rhs.len();
        let n = self.columns.len();
        let mut problem = FeasibilityProblem::new(n);
        for r in 0..m {
            let coeffs = self.columns.iter().map(|c| c.2[r].clone()).collect();
            problem.add_row(coeffs, self.rhs[r].clone())?;
        }
        match solve_feasibility(&problem, tol)? {
            FeasibilityVerdict::Feasible { model } => {
                let terms = model
                    .into_iter()
                    .zip(&self.columns)
                    .filter(|(w, _)| w.sign_tol(MODEL_EPS) == std::cmp::Ordering::Greater)
                    .map(|(w, (s, h, _))| HiddenTerm {
                        strategy: s.clone(),
                        hidden: h.clone(),
                        weight: w,
                    })
                    .collect();
                Ok(Solved::Feasible(LhsModel { terms }))
            }
            FeasibilityVerdict::Infeasible { certificate } => {
                let (cols, cb) = problem.certificate_values(&certificate);
                let functional: Vec<T> = certificate.iter().map(|c| -c.clone()).collect();
                let value = -cb;
                let lhs_bound = cols
                    .iter()
                    .map(|v| -v.clone())
                    .reduce(|a, b| if b > a { b } else { a })
                    .unwrap_or_else(T::zero);
                if value <= lhs_bound {
                    return Err(Error::Internal(format!(
                        "witness does not separate: value {} <= bound {}",
                        value.render(),
                        lhs_bound.render()
                    )));
                }
                Ok(Solved::Infeasible(SteeringWitness {
                    rows: self.labels.clone(),
                    functional,
                    value,
                    lhs_bound,
                }))
            }
            FeasibilityVerdict::Undecided { residual, .. } => Ok(Solved::Undecided(residual)),
        }
    }
}

/// Inner problem feasible gives Feasible; outer problem infeasible gives
/// Infeasible; anything else is Undecided.
pub(crate) fn inner_outer<H: Clone>(
    inner: &ColumnProblem<H, f64>,
    outer: &ColumnProblem<H, f64>,
    tol: f64,
    mesh: MeshInfo,
) -> Result<Decision<H, f64>> {
    let num_rows = inner.rhs.len();
    let num_columns = inner.columns.len();
    let done = |verdict| Decision { verdict, mesh: Some(mesh), num_rows, num_columns };
    let inner_margin = match inner.solve(tol)? {
        Solved::Feasible(model) => return Ok(done(SteeringVerdict::Feasible(model))),
        Solved::Infeasible(w) => w.value - w.lhs_bound,
        Solved::Undecided(r) => r,
    };
    match outer.solve(tol)? {
        Solved::Infeasible(w) => Ok(done(SteeringVerdict::Infeasible(w))),
        Solved::Feasible(_) => Ok(done(SteeringVerdict::Undecided(Gap { inner_margin, outer_margin: 0.0 }))),
        Solved::Undecided(r) => Ok(done(SteeringVerdict::Undecided(Gap { inner_margin, outer_margin: r }))),
    }
}

/// Single problem whose columns are exact hidden variables.
pub(crate) fn exact_columns<H: Clone, T: Scalar>(
    problem: &ColumnProblem<H, T>,
    tol: f64,
    mesh: Option<MeshInfo>,
) -> Result<Decision<H, T>> {
    let verdict = match problem.solve(tol)? {
        Solved::Feasible(m) => SteeringVerdict::Feasible(m),
        Solved::Infeasible(w) => SteeringVerdict::Infeasible(w),
        Solved::Undecided(r) => SteeringVerdict::Undecided(Gap { inner_margin: r, outer_margin: r }),
    };
    Ok(Decision {
        verdict,
        mesh,
        num_rows: problem.rhs.len(),
        num_columns: problem.columns.len(),
    })
}
