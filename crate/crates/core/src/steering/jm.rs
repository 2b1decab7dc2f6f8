//! Joint measurability of qubit POVMs.
//!
//! A parent effect `G_lambda` is a positive qubit operator, i.e. a nonnegative
//! multiple of a state. Writing `G_lambda = sum_v w_{lambda v} 2 rho(v)` keeps
//! every LP variable a nonnegative weight; the factor 2 makes the weights of
//! the identity decomposition sum to one.

use crate::error::{Error, Result};
use crate::linalg::pauli;
use crate::quantum::Povm;

use super::mesh::{BlochVector, MeshPair};
use super::{enumerate_strategies_mixed, inner_outer, ColumnProblem, Decision, DeterministicStrategy};

const NAMES: [&str; 4] = ["I", "X", "Y", "Z"];

fn build(
    povms: &[Povm],
    strategies: &[DeterministicStrategy],
    states: impl Iterator<Item = BlochVector> + Clone,
) -> ColumnProblem<BlochVector, f64> {
    let mut labels = Vec::new();
    let mut rhs = Vec::new();
    for (x, povm) in povms.iter().enumerate() {
        for (a, e) in povm.effects().iter().enumerate() {
            for (k, val) in pauli::components(e.matrix()).into_iter().enumerate() {
                labels.push(format!("x={x} a={a} {}", NAMES[k]));
                rhs.push(val);
            }
        }
    }
    for (k, val) in [2.0, 0.0, 0.0, 0.0].into_iter().enumerate() {
        labels.push(format!("completeness {}", NAMES[k]));
        rhs.push(val);
    }
    let mut columns = Vec::new();
    for s in strategies {
        for v in states.clone() {
            // components of 2 rho(v) = I + v.sigma
            let local = [2.0, 2.0 * v[0], 2.0 * v[1], 2.0 * v[2]];
            let mut col = Vec::with_capacity(rhs.len());
            for (x, povm) in povms.iter().enumerate() {
                for a in 0..povm.num_outcomes() {
                    if s.indicator(x, a) {
                        col.extend_from_slice(&local);
                    } else {
                        col.extend_from_slice(&[0.0; 4]);
                    }
                }
            }
            col.extend_from_slice(&local);
            columns.push((s.clone(), v, col));
        }
    }
    ColumnProblem { labels, rhs, columns }
}

/// Decides whether `povms` admit a common parent POVM with deterministic
/// post-processing. A Feasible model lists `(strategy, v, w)` with
/// `G_strategy = sum w 2 rho(v)`.
pub fn joint_measurability(povms: &[Povm], mesh: &MeshPair, tol: f64) -> Result<Decision<BlochVector, f64>> {
    if povms.is_empty() {
        return Err(Error::InvalidParameter("no measurements given".into()));
    }
    if let Some(p) = povms.iter().find(|p| p.dim() != 2) {
        return Err(Error::NotQubit(p.dim()));
    }
    let outcomes: Vec<usize> = povms.iter().map(|p| p.num_outcomes()).collect();
    let strategies = enumerate_strategies_mixed(&outcomes)?;
    let inner = build(povms, &strategies, mesh.inner.vertices());
    let outer = build(povms, &strategies, mesh.outer.vertices());
    inner_outer(&inner, &outer, tol, mesh.info())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::lp::Status;

    fn noisy_pair(eta: f64) -> Vec<Povm> {
        vec![
            Povm::noisy_pauli_axis("X", [1.0, 0.0, 0.0], eta).unwrap(),
            Povm::noisy_pauli_axis("Z", [0.0, 0.0, 1.0], eta).unwrap(),
        ]
    }

    #[test]
    fn commuting_pair_is_jointly_measurable() {
        // parent is Z itself; its effects are the poles, which are
        // generally not mesh vertices, so use a mesh that contains them
        let mut dirs = super::super::mesh::fibonacci_sphere(40);
        dirs.push([0.0, 0.0, 1.0]);
        dirs.push([0.0, 0.0, -1.0]);
        let mesh = MeshPair::from_directions(dirs).unwrap();
        let d = joint_measurability(&[Povm::sigma_z(), Povm::sigma_z()], &mesh, 1e-9).unwrap();
        assert_eq!(d.status(), Status::Feasible);
    }

    #[test]
    fn noisy_pairs_on_either_side() {
        let mesh = MeshPair::fibonacci(162).unwrap();
        let low = joint_measurability(&noisy_pair(0.5), &mesh, 1e-9).unwrap();
        assert_eq!(low.status(), Status::Feasible);
        // parent effects reconstruct the noisy effects and sum to identity
        let model = low.model().unwrap();
        let pair = noisy_pair(0.5);
        for (x, povm) in pair.iter().enumerate() {
            for (a, e) in povm.effects().iter().enumerate() {
                let mut m = ComplexMatrix::zeros(2, 2);
                for t in &model.terms {
                    if t.strategy.indicator(x, a) {
                        m = &m + &pauli::bloch_state(t.hidden).scale_real(2.0 * t.weight);
                    }
                }
                assert!(m.max_abs_diff(e.matrix()) < 1e-8);
            }
        }
        assert!((model.total_weight() - 1.0).abs() < 1e-8);
        let high = joint_measurability(&noisy_pair(0.9), &mesh, 1e-9).unwrap();
        assert_eq!(high.status(), Status::Infeasible);
    }

    #[test]
    fn rejects_non_qubit() {
        let p = Povm::new("id3", vec![ComplexMatrix::identity(3)]).unwrap();
        let mesh = MeshPair::fibonacci(12).unwrap();
        assert!(matches!(joint_measurability(&[p], &mesh, 1e-9), Err(Error::NotQubit(3))));
    }
}
