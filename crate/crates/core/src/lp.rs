//! Feasibility of `A x = b, x >= 0` by phase-one simplex.
//!
//! Exact solves use Bland's rule throughout. Floating solves price by the
//! largest reduced cost, fall back to Bland's rule during runs of degenerate
//! pivots, and rebuild the tableau from the final basis before classifying.
//!
//! The solver is generic over [`Scalar`]: with [`Rational`] every pivot is
//! exact and the verdict is always decided; with `f64` the phase-one optimum
//! is classified against a tolerance band and may come back
//! [`FeasibilityVerdict::Undecided`].
//!
//! Every verdict is re-verified by substitution before it is returned. A
//! feasible verdict carries a model `x`; an infeasible one carries a Farkas
//! vector `c` with `c.A >= 0` componentwise and `c.b < 0`.
//!
//! [`Rational`]: crate::scalar::Rational

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default tolerance for floating solves.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Floating solves call a problem infeasible only above this multiple of `tol`.
pub const INFEASIBLE_FACTOR: f64 = 100.0;
/// Slack allowed when re-verifying floating models and certificates.
pub const VERIFY_FACTOR: f64 = 10.0;

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
const RATIO_EPS: f64 = 1e-12;
const DEGENERATE_RUN: usize = 50;
const MAX_REINVERSIONS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "tol")]
pub enum Mode {
    Exact,
    Floating(f64),
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Floating(DEFAULT_TOL)
    }
}

impl Mode {
    pub fn tol(&self) -> f64 {
        match self {
            Mode::Exact => 0.0,
            Mode::Floating(t) => *t,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityProblem<T> {
    num_vars: usize,
    rows: Vec<(Vec<T>, T)>,
}

impl<T: Scalar> FeasibilityProblem<T> {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coefficients: Vec<T>, rhs: T) -> Result<()> {
        if coefficients.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                context: "constraint row",
                expected: self.num_vars,
                found: coefficients.len(),
            });
        }
        self.rows.push((coefficients, rhs));
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[(Vec<T>, T)] {
        &self.rows
    }

    /// Largest |A x - b| over all rows.
    pub fn residual(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for (coeffs, rhs) in &self.rows {
            let mut acc = T::zero();
            for (a, xi) in coeffs.iter().zip(x) {
                if !a.is_zero() && !xi.is_zero() {
                    acc = acc + a.clone() * xi.clone();
                }
            }
            let r = (acc - rhs.clone()).abs();
            if r.to_f64() > worst.to_f64() || (T::is_exact() && !r.is_zero() && worst.is_zero()) {
                worst = r;
            }
        }
        worst
    }

    /// c . A_j for every column j, and c . b.
    pub fn certificate_values(&self, c: &[T]) -> (Vec<T>, T) {
        let mut cols = vec![T::zero(); self.num_vars];
        let mut cb = T::zero();
        for ((coeffs, rhs), ci) in self.rows.iter().zip(c) {
            if ci.is_zero() {
                continue;
            }
            for (acc, a) in cols.iter_mut().zip(coeffs) {
                if !a.is_zero() {
                    *acc = acc.clone() + ci.clone() * a.clone();
                }
            }
            cb = cb + ci.clone() * rhs.clone();
        }
        (cols, cb)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FeasibilityVerdict<T> {
    Feasible {
        model: Vec<T>,
    },
    Infeasible {
        certificate: Vec<T>,
    },
    /// Floating phase-one optimum fell in `(tol, 100 tol]`.
    Undecided {
        residual: f64,
        inner_margin: f64,
        outer_margin: f64,
    },
}

impl<T> FeasibilityVerdict<T> {
    pub fn status(&self) -> Status {
        match self {
            FeasibilityVerdict::Feasible { .. } => Status::Feasible,
            FeasibilityVerdict::Infeasible { .. } => Status::Infeasible,
            FeasibilityVerdict::Undecided { .. } => Status::Undecided,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Feasible,
    Infeasible,
    Undecided,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::Undecided => "undecided",
        };
        f.write_str(s)
    }
}

struct Tableau<T> {
    width: usize,
    cells: Vec<T>,
    basis: Vec<usize>,
    // z_j = c_B B^-1 A_j - c_j for the phase-one costs; last entry is the objective
    z: Vec<T>,
}

impl<T: Scalar> Tableau<T> {
    fn at(&self, i: usize, j: usize) -> &T {
        &self.cells[i * self.width + j]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.at(row, col).clone();
        let inv = T::one() / p;
        for j in 0..w {
            let v = &mut self.cells[row * w + j];
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row: Vec<T> = self.cells[row * w..(row + 1) * w].to_vec();
        let m = self.basis.len();
        for i in 0..m {
            if i == row {
                continue;
            }
            let f = self.cells[i * w + col].clone();
            if f.is_zero() {
                continue;
            }
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    let cell = &mut self.cells[i * w + j];
                    *cell = cell.clone() - f.clone() * pv.clone();
                }
            }
            if !T::is_exact() {
                self.cells[i * w + col] = T::zero();
            }
        }
        let f = self.z[col].clone();
        if !f.is_zero() {
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    self.z[j] = self.z[j].clone() - f.clone() * pv.clone();
                }
            }
            if !T::is_exact() {
                self.z[col] = T::zero();
            }
        }
        self.basis[row] = col;
    }
}

fn initial_tableau<T: Scalar>(problem: &FeasibilityProblem<T>) -> (Tableau<T>, Vec<bool>) {
    let n = problem.num_vars;
    let m = problem.rows.len();
    let width = n + m + 1;
    let mut signs = Vec::with_capacity(m);
    let mut cells = Vec::with_capacity(m * width);
    for (i, (coeffs, rhs)) in problem.rows.iter().enumerate() {
        let flip = rhs.sign_tol(0.0) == Ordering::Less;
        signs.push(flip);
        let s = |v: &T| if flip { -v.clone() } else { v.clone() };
        cells.extend(coeffs.iter().map(s));
        for k in 0..m {
            cells.push(if k == i { T::one() } else { T::zero() });
        }
        cells.push(s(rhs));
    }
    let mut z = vec![T::zero(); width];
    for i in 0..m {
        for j in (0..n).chain(std::iter::once(width - 1)) {
            let v = &cells[i * width + j];
            if !v.is_zero() {
                z[j] = z[j].clone() + v.clone();
            }
        }
    }
    let tab = Tableau {
        width,
        cells,
        basis: (n..n + m).collect(),
        z,
    };
    (tab, signs)
}

/// Rebuilds the tableau for the basis `target` from the original data,
/// choosing the largest available pivot for each column.
fn reinvert<T: Scalar>(problem: &FeasibilityProblem<T>, target: &[usize]) -> Tableau<T> {
    let n = problem.num_vars;
    let (mut tab, _) = initial_tableau(problem);
    // rows whose artificial stays basic keep it
    let mut free: Vec<bool> = (0..target.len()).map(|i| !target.contains(&(n + i))).collect();
    for &col in target.iter().filter(|&&c| c < n) {
        let best = (0..target.len())
            .filter(|&i| free[i])
            .max_by(|&i, &k| tab.at(i, col).to_f64().abs().total_cmp(&tab.at(k, col).to_f64().abs()));
        if let Some(row) = best {
            if tab.at(row, col).to_f64().abs() > PIVOT_EPS {
                tab.pivot(row, col);
                free[row] = false;
            }
        }
    }
    tab
}

enum PhaseOne {
    Optimal,
    Unbounded,
}

fn run_simplex<T: Scalar>(tab: &mut Tableau<T>, n: usize, pivots: &mut usize, cap: usize) -> Result<PhaseOne> {
    let m = tab.basis.len();
    let width = tab.width;
    let exact = T::is_exact();
    let cost_eps = if exact { 0.0 } else { COST_EPS };
    let pivot_eps = if exact { 0.0 } else { PIVOT_EPS };
    // floating solves price by largest reduced cost and drop to Bland's rule
    // while a run of degenerate pivots lasts
    let mut degenerate_run = 0usize;
    loop {
        let bland = exact || degenerate_run >= DEGENERATE_RUN;
        let col = if bland {
            (0..n).find(|&j| tab.z[j].sign_tol(cost_eps) == Ordering::Greater)
        } else {
            (0..n)
                .filter(|&j| tab.z[j].sign_tol(cost_eps) == Ordering::Greater)
                .max_by(|&a, &b| tab.z[a].to_f64().total_cmp(&tab.z[b].to_f64()))
        };
        let Some(col) = col else {
            return Ok(PhaseOne::Optimal);
        };
        let mut best: Option<(usize, T)> = None;
        for i in 0..m {
            let a = tab.at(i, col);
            if a.sign_tol(pivot_eps) != Ordering::Greater {
                continue;
            }
            let ratio = tab.at(i, width - 1).clone() / a.clone();
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let diff = ratio.clone() - br.clone();
                    let take = match diff.sign_tol(if exact { 0.0 } else { RATIO_EPS }) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal if bland => tab.basis[i] < tab.basis[bi],
                        Ordering::Equal => a.to_f64() > tab.at(bi, col).to_f64(),
                    };
                    if take {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        let Some((row, ratio)) = best else {
            return Ok(PhaseOne::Unbounded);
        };
        if ratio.sign_tol(if exact { 0.0 } else { RATIO_EPS }) == Ordering::Equal {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
        tab.pivot(row, col);
        *pivots += 1;
        if *pivots > cap {
            return Err(Error::Internal(format!(
                "simplex cycling guard exceeded after {pivots} pivots"
            )));
        }
    }
}

/// Decides feasibility of `{x >= 0 : A x = b}`.
///
/// `tol` is only consulted for floating scalars.
pub fn solve_feasibility<T: Scalar>(
    problem: &FeasibilityProblem<T>,
    tol: f64,
) -> Result<FeasibilityVerdict<T>> {
    let n = problem.num_vars;
    let m = problem.rows.len();
    let (mut tab, signs) = initial_tableau(problem);
    let width = tab.width;

    let cap = 100_000 + 200 * (n + m);
    let mut pivots = 0usize;
    let mut rounds = 0;
    loop {
        if let PhaseOne::Unbounded = run_simplex(&mut tab, n, &mut pivots, cap)? {
            return Err(Error::Internal(
                "phase-one objective unbounded, which cannot happen".into(),
            ));
        }
        if T::is_exact() {
            break;
        }
        // wipe accumulated rounding and confirm optimality on fresh numbers
        let fresh = reinvert(problem, &tab.basis);
        rounds += 1;
        let primal_ok = (0..m).all(|i| fresh.at(i, width - 1).to_f64() >= -PIVOT_EPS);
        if !primal_ok {
            log::debug!("reinversion lost primal feasibility; keeping the running tableau");
            break;
        }
        tab = fresh;
        let improving = (0..n).any(|j| tab.z[j].sign_tol(COST_EPS) == Ordering::Greater);
        if !improving || rounds >= MAX_REINVERSIONS {
            break;
        }
    }
    log::debug!("phase one finished after {pivots} pivots ({m} rows, {n} columns)");

    let objective = tab.z[width - 1].clone();
    let residual = objective.to_f64();
    let decided_feasible = if T::is_exact() {
        objective.is_zero()
    } else {
        residual <= tol
    };

    if decided_feasible {
        let mut model = vec![T::zero(); n];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < n {
                let v = tab.at(i, width - 1).clone();
                model[b] = if v.sign_tol(0.0) == Ordering::Less {
                    T::zero()
                } else {
                    v
                };
            }
        }
        let r = problem.residual(&model);
        let ok = if T::is_exact() {
            r.is_zero()
        } else {
            r.to_f64() <= VERIFY_FACTOR * tol.max(PIVOT_EPS)
        };
        if !ok {
            return Err(Error::Internal(format!(
                "feasible model failed re-verification (residual {:.3e})",
                r.to_f64()
            )));
        }
        return Ok(FeasibilityVerdict::Feasible { model });
    }

    let undecided = || FeasibilityVerdict::Undecided {
        residual,
        inner_margin: tol,
        outer_margin: INFEASIBLE_FACTOR * tol,
    };
    if !T::is_exact() && residual <= INFEASIBLE_FACTOR * tol {
        return Ok(undecided());
    }

    let certificate: Vec<T> = (0..m)
        .map(|i| {
            let y = tab.z[n + i].clone() + T::one();
            if signs[i] {
                y
            } else {
                -y
            }
        })
        .collect();
    match verify_certificate(problem, &certificate, tol) {
        Ok(()) => Ok(FeasibilityVerdict::Infeasible { certificate }),
        // a floating certificate that does not survive substitution is not
        // evidence of anything; report the gap instead
        Err(e) if !T::is_exact() => {
            log::warn!("discarding floating certificate: {e}");
            Ok(undecided())
        }
        Err(e) => Err(e),
    }
}

/// Checks the Farkas conditions `c.A >= 0`, `c.b < 0` (with slack
/// `10 tol` relative to `max |c|` in floating mode).
pub fn verify_certificate<T: Scalar>(
    problem: &FeasibilityProblem<T>,
    certificate: &[T],
    tol: f64,
) -> Result<()> {
    let (cols, cb) = problem.certificate_values(certificate);
    if T::is_exact() {
        if let Some(j) = cols.iter().position(|v| v.sign_tol(0.0) == Ordering::Less) {
            return Err(Error::Internal(format!(
                "Farkas certificate negative on column {j}"
            )));
        }
        if cb.sign_tol(0.0) != Ordering::Less {
            return Err(Error::Internal("Farkas certificate has c.b >= 0".into()));
        }
        return Ok(());
    }
    let scale = certificate
        .iter()
        .map(|v| v.to_f64().abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let slack = VERIFY_FACTOR * tol.max(PIVOT_EPS);
    if let Some((j, v)) = cols
        .iter()
        .enumerate()
        .find(|(_, v)| v.to_f64() / scale < -slack)
    {
        return Err(Error::Internal(format!(
            "Farkas certificate negative on column {j} ({:.3e})",
            v.to_f64() / scale
        )));
    }
    if cb.to_f64() / scale >= -slack {
        return Err(Error::Internal(format!(
            "Farkas certificate not separating (c.b = {:.3e})",
            cb.to_f64() / scale
        )));
    }
    Ok(())
}
