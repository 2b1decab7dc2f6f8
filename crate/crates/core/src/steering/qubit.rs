//! Qubit LHS and PV checks over Bloch polytopes.

use crate::error::{Error, Result};
use crate::linalg::{pauli, HermitianMatrix};
use crate::quantum::{Assemblage, Povm, ASSEMBLAGE_TOL, DEFAULT_CERTAINTY_EPS};

use super::mesh::{BlochVector, MeshPair};
use super::{enumerate_strategies_mixed, exact_columns, inner_outer, ColumnProblem, Decision, DeterministicStrategy};

/// Which statistics of Bob's conditional states the LP must reproduce.
#[derive(Clone, Copy, Debug)]
pub enum QubitTarget<'a> {
    /// Every Pauli component of every `sigma_{a|x}`.
    Full,
    /// Only the outcome statistics of the listed tests.
    Tests(&'a [Povm]),
}

const PAULI_NAMES: [&str; 4] = ["I", "X", "Y", "Z"];

struct RowMap {
    // per Bob row: (label, [c_I, c_X, c_Y, c_Z]) so that the row value on a
    // Bloch vector v is (c_I + c.v) / 2 for Tests, or the raw component for Full
    rows: Vec<(String, [f64; 4])>,
    full: bool,
}

impl RowMap {
    fn new(target: QubitTarget<'_>) -> Result<Self> {
        match target {
            QubitTarget::Full => Ok(Self {
                rows: (0..4)
                    .map(|k| {
                        let mut e = [0.0; 4];
                        e[k] = 1.0;
                        (PAULI_NAMES[k].to_string(), e)
                    })
                    .collect(),
                full: true,
            }),
            QubitTarget::Tests(tests) => {
                let mut rows = Vec::new();
                for (y, povm) in tests.iter().enumerate() {
                    if povm.dim() != 2 {
                        return Err(Error::NotQubit(povm.dim()));
                    }
                    for (b, e) in povm.effects().iter().enumerate() {
                        rows.push((format!("y={y} b={b}"), pauli::components(e.matrix())));
                    }
                }
                Ok(Self { rows, full: false })
            }
        }
    }

    /// Row values of the normalized state with Bloch vector `v`.
    fn on_state(&self, v: &BlochVector) -> Vec<f64> {
        self.rows
            .iter()
            .map(|(_, e)| {
                if self.full {
                    // components of (I + v.sigma)/2: (1, v_x, v_y, v_z)
                    e[0] + e[1] * v[0] + e[2] * v[1] + e[3] * v[2]
                } else {
                    (e[0] + e[1] * v[0] + e[2] * v[1] + e[3] * v[2]) / 2.0
                }
            })
            .collect()
    }

    /// Row values of an arbitrary Hermitian operator.
    fn on_operator(&self, m: &HermitianMatrix) -> Vec<f64> {
        let comps = pauli::components(m.matrix());
        self.rows
            .iter()
            .map(|(_, e)| {
                if self.full {
                    e.iter().zip(comps).map(|(a, b)| a * b).sum()
                } else {
                    // tr[E m] = (E_I m_I + sum E_k m_k) / 2
                    e.iter().zip(comps).map(|(a, b)| a * b).sum::<f64>() / 2.0
                }
            })
            .collect()
    }
}

fn check_qubit_assemblage(asm: &Assemblage) -> Result<()> {
    if asm.dim_b() != 2 {
        return Err(Error::NotQubit(asm.dim_b()));
    }
    asm.validate(ASSEMBLAGE_TOL)
}

fn build_problem(
    asm: &Assemblage,
    rows: &RowMap,
    strategies: &[DeterministicStrategy],
    states: impl Iterator<Item = BlochVector> + Clone,
) -> ColumnProblem<BlochVector, f64> {
    let mut labels = Vec::new();
    let mut rhs = Vec::new();
    for x in 0..asm.num_settings() {
        for a in 0..asm.num_outcomes(x) {
            for ((name, _), val) in rows.rows.iter().zip(rows.on_operator(asm.sigma(x, a))) {
                labels.push(format!("x={x} a={a} {name}"));
                rhs.push(val);
            }
        }
    }
    let mut columns = Vec::new();
    for s in strategies {
        for v in states.clone() {
            let local = rows.on_state(&v);
            let mut col = Vec::with_capacity(rhs.len());
            for x in 0..asm.num_settings() {
                for a in 0..asm.num_outcomes(x) {
                    if s.indicator(x, a) {
                        col.extend_from_slice(&local);
                    } else {
                        col.extend(std::iter::repeat(0.0).take(local.len()));
                    }
                }
            }
            columns.push((s.clone(), v, col));
        }
    }
    ColumnProblem { labels, rhs, columns }
}

fn strategies_for(asm: &Assemblage) -> Result<Vec<DeterministicStrategy>> {
    let outcomes: Vec<usize> = (0..asm.num_settings()).map(|x| asm.num_outcomes(x)).collect();
    enumerate_strategies_mixed(&outcomes)
}

/// LHS membership of a qubit assemblage, reproducing every Pauli component.
pub fn lhs_feasibility_qubit(asm: &Assemblage, mesh: &MeshPair, tol: f64) -> Result<Decision<BlochVector, f64>> {
    lhs_feasibility_qubit_with(asm, QubitTarget::Full, mesh, tol)
}

pub fn lhs_feasibility_qubit_with(
    asm: &Assemblage,
    target: QubitTarget<'_>,
    mesh: &MeshPair,
    tol: f64,
) -> Result<Decision<BlochVector, f64>> {
    check_qubit_assemblage(asm)?;
    let rows = RowMap::new(target)?;
    let strategies = strategies_for(asm)?;
    let inner = build_problem(asm, &rows, &strategies, mesh.inner.vertices());
    let outer = build_problem(asm, &rows, &strategies, mesh.outer.vertices());
    inner_outer(&inner, &outer, tol, mesh.info())
}

/// Pure qubit states on which every listed test has a certain outcome.
///
/// A nontrivial qubit effect reaches probability 1 (or 0) only on a single
/// pure state, so the set is finite and is computed in closed form.
pub fn deterministic_states(tests: &[Povm]) -> Result<Vec<BlochVector>> {
    let eps = DEFAULT_CERTAINTY_EPS;
    let mut candidates: Option<Vec<BlochVector>> = None;
    for povm in tests {
        if povm.dim() != 2 {
            return Err(Error::NotQubit(povm.dim()));
        }
        let mut found = Vec::new();
        let mut trivial = true;
        for e in povm.effects() {
            let [e0, ex, ey, ez] = pauli::components(e.matrix());
            let len = (ex * ex + ey * ey + ez * ez).sqrt();
            if len <= eps {
                continue;
            }
            trivial = false;
            let dir = [ex / len, ey / len, ez / len];
            if (e0 + len) / 2.0 >= 1.0 - eps {
                found.push(dir);
            }
            if (e0 - len) / 2.0 <= eps {
                found.push([-dir[0], -dir[1], -dir[2]]);
            }
        }
        if !trivial {
            candidates = Some(found);
            break;
        }
    }
    let candidates = candidates.unwrap_or_else(|| vec![[0.0, 0.0, 0.0]]);
    let mut out: Vec<BlochVector> = Vec::new();
    for v in candidates {
        let rho = HermitianMatrix::new(pauli::bloch_state(v))?;
        let certain = tests.iter().all(|povm| {
            povm.effects().iter().all(|e| {
                let p = e.expectation(&rho);
                p <= eps || p >= 1.0 - eps
            })
        });
        let fresh = out
            .iter()
            .all(|w| (0..3).map(|i| (w[i] - v[i]).abs()).fold(0.0, f64::max) > 1e-9);
        if certain && fresh {
            out.push(v);
        }
    }
    Ok(out)
}

/// PV membership: LHS restricted to hidden states deterministic on `tests`,
/// matching the statistics of those tests.
pub fn pv_feasibility_qubit(asm: &Assemblage, tests: &[Povm], tol: f64) -> Result<Decision<BlochVector, f64>> {
    check_qubit_assemblage(asm)?;
    let rows = RowMap::new(QubitTarget::Tests(tests))?;
    let states = deterministic_states(tests)?;
    let strategies = strategies_for(asm)?;
    let problem = build_problem(asm, &rows, &strategies, states.iter().copied());
    exact_columns(&problem, tol, None)
}

/// Rebuilds `sigma_{a|x}` from a qubit model.
pub fn reconstruct(model: &super::LhsModel<BlochVector, f64>, asm: &Assemblage) -> Result<Vec<Vec<HermitianMatrix>>> {
    let mut out = Vec::new();
    for x in 0..asm.num_settings() {
        let mut row = Vec::new();
        for a in 0..asm.num_outcomes(x) {
            let mut m = crate::linalg::ComplexMatrix::zeros(2, 2);
            for t in &model.terms {
                if t.strategy.indicator(x, a) {
                    m = &m + &pauli::bloch_state(t.hidden).scale_real(t.weight);
                }
            }
            row.push(HermitianMatrix::new(m)?);
        }
        out.push(row);
    }
    Ok(out)
}
