//! Box-world LHS and PV checks.
//!
//! Bob's state space is the polytope of conditional tables, whose vertices
//! are the deterministic tables, so one LP over (Alice strategy, Bob table)
//! pairs decides membership exactly.

use crate::boxworld::GptAssemblage;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

use super::{enumerate_strategies_mixed, exact_columns, ColumnProblem, Decision};

/// Exact-rational LHS check.
pub fn lhs_feasibility_boxworld(asm: &GptAssemblage) -> Result<Decision<Vec<usize>, Rational>> {
    lhs_feasibility_boxworld_with::<Rational>(asm, 0.0)
}

/// LHS check in a chosen scalar type (`tol` only matters for floats).
pub fn lhs_feasibility_boxworld_with<T: Scalar>(asm: &GptAssemblage, tol: f64) -> Result<Decision<Vec<usize>, T>> {
    let all: Vec<usize> = (0..asm.bob_inputs()).collect();
    pv_feasibility_boxworld_with(asm, &all, tol)
}

/// Exact PV check on the Bob inputs listed in `tests`.
pub fn pv_feasibility_boxworld(asm: &GptAssemblage, tests: &[usize]) -> Result<Decision<Vec<usize>, Rational>> {
    pv_feasibility_boxworld_with::<Rational>(asm, tests, 0.0)
}

pub fn pv_feasibility_boxworld_with<T: Scalar>(
    asm: &GptAssemblage,
    tests: &[usize],
    tol: f64,
) -> Result<Decision<Vec<usize>, T>> {
    if let Some(&y) = tests.iter().find(|&&y| y >= asm.bob_inputs()) {
        return Err(Error::InvalidParameter(format!(
            "test input {y} out of range (Bob has {} inputs)",
            asm.bob_inputs()
        )));
    }
    let nb = asm.bob_outputs();
    let alice_outcomes: Vec<usize> = (0..asm.num_settings()).map(|x| asm.num_outcomes(x)).collect();
    let alice = enumerate_strategies_mixed(&alice_outcomes)?;
    // tables restricted to the tested inputs
    let bob = if tests.is_empty() {
        vec![super::DeterministicStrategy { responses: Vec::new() }]
    } else {
        enumerate_strategies_mixed(&vec![nb; tests.len()])?
    };
    let pairs = alice.len() as u128 * bob.len() as u128;
    if pairs > super::COLUMN_CAP as u128 {
        return Err(Error::CapExceeded { count: pairs, cap: super::COLUMN_CAP });
    }

    let mut labels = Vec::new();
    let mut rhs = Vec::new();
    for x in 0..asm.num_settings() {
        for a in 0..asm.num_outcomes(x) {
            for &y in tests {
                for b in 0..nb {
                    labels.push(format!("x={x} a={a} y={y} b={b}"));
                    rhs.push(T::from_rational(&asm.sigma(x, a, y, b)));
                }
            }
        }
    }
    let mut columns = Vec::with_capacity(alice.len() * bob.len());
    for s in &alice {
        for t in &bob {
            let mut col = Vec::with_capacity(rhs.len());
            for x in 0..asm.num_settings() {
                for a in 0..asm.num_outcomes(x) {
                    for (k, _) in tests.iter().enumerate() {
                        for b in 0..nb {
                            let hit = s.indicator(x, a) && t.responses[k] == b;
                            col.push(if hit { T::one() } else { T::zero() });
                        }
                    }
                }
            }
            columns.push((s.clone(), t.responses.clone(), col));
        }
    }
    // with no tests there are no rows to fix the weights, so add normalization
    if tests.is_empty() {
        labels.push("norm".into());
        rhs.push(T::one());
        for c in &mut columns {
            c.2.push(T::one());
        }
    }
    exact_columns(&ColumnProblem { labels, rhs, columns }, tol, None)
}
