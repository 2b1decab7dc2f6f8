//! Linear steering functionals built from matched correlators.

use serde::{Deserialize, Serialize};

use crate::boxworld::JointDistribution;
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::quantum::Assemblage;
use crate::scalar::Scalar;

const CORRELATOR_SLACK: f64 = 1e-12;
const SPECTRUM_TOL: f64 = 1e-9;

/// Matched correlators `<A_x B_x>`, one per setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorSet {
    values: Vec<f64>,
}

impl CorrelatorSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("need at least one correlator".into()));
        }
        if let Some(v) = values.iter().find(|v| !(v.abs() <= 1.0 + CORRELATOR_SLACK)) {
            return Err(Error::InvalidParameter(format!("correlator {v} outside [-1, 1]")));
        }
        Ok(Self { values })
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `<A_x B_x> = sum_a (-1)^a tr[B_x sigma_{a|x}]`.
pub fn correlators_from_assemblage(asm: &Assemblage, bob_obs: &[HermitianMatrix]) -> Result<CorrelatorSet> {
    if bob_obs.len() != asm.num_settings() {
        return Err(Error::DimensionMismatch {
            context: "one Bob observable per setting",
            expected: asm.num_settings(),
            found: bob_obs.len(),
        });
    }
    let mut values = Vec::with_capacity(bob_obs.len());
    for (x, b) in bob_obs.iter().enumerate() {
        if b.dim() != asm.dim_b() {
            return Err(Error::DimensionMismatch {
                context: "Bob observable",
                expected: asm.dim_b(),
                found: b.dim(),
            });
        }
        if b.eigenvalues().iter().any(|e| (e.abs() - 1.0).abs() > SPECTRUM_TOL) {
            return Err(Error::InvalidParameter(format!(
                "Bob observable {x} does not have a +-1 spectrum"
            )));
        }
        let mut v = 0.0;
        for a in 0..asm.num_outcomes(x) {
            let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
            v += sign * b.expectation(asm.sigma(x, a));
        }
        values.push(v);
    }
    CorrelatorSet::new(values)
}

/// Matched correlators `E_{xx}` of a joint distribution with `A = (-1)^a`,
/// `B = (-1)^b`.
pub fn correlators_from_joint<T: Scalar>(joint: &JointDistribution<T>) -> Result<CorrelatorSet> {
    let [nx, ny, _, _] = joint.shape();
    let m = nx.min(ny);
    CorrelatorSet::new((0..m).map(|x| joint.correlator(x, x).to_f64()).collect())
}

/// `S_m = (1/m) sum_x <A_x B_x>`.
pub fn s_m(c: &CorrelatorSet) -> f64 {
    c.values.iter().sum::<f64>() / c.m() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CjwrValue {
    #[serde(rename = "F")]
    pub f: f64,
    pub violated: bool,
}

/// LHS bound of the CJWR functional.
pub const CJWR_BOUND: f64 = 1.0;

/// `F = |sum_x <A_x B_x>| / sqrt(m)`; violated iff `F > 1`.
pub fn cjwr(c: &CorrelatorSet) -> CjwrValue {
    let f = c.values.iter().sum::<f64>().abs() / (c.m() as f64).sqrt();
    CjwrValue { f, violated: f > CJWR_BOUND }
}

/// Parameter at which `F(p) = |F(1)| p` reaches the LHS bound, for families
/// whose correlators scale linearly in `p` (Werner states).
pub fn linear_crossing(at_one: &CorrelatorSet) -> Option<f64> {
    let f1 = cjwr(at_one).f;
    (f1 > 0.0).then(|| CJWR_BOUND / f1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::quantum::{assemblage_from_povms, DensityMatrix, Povm, SharedState};
    use proptest::prelude::*;

    fn paulis(m: usize) -> Vec<HermitianMatrix> {
        [pauli::x(), pauli::z(), pauli::y()]
            .into_iter()
            .take(m)
            .map(|p| HermitianMatrix::new(p).unwrap())
            .collect()
    }

    fn werner_correlators(p: f64, m: usize) -> CorrelatorSet {
        let asm = assemblage_from_povms(&SharedState::werner(p).unwrap(), &Povm::pauli_settings(m).unwrap()).unwrap();
        correlators_from_assemblage(&asm, &paulis(m)).unwrap()
    }

    #[test]
    fn singlet_and_product_correlators() {
        for v in werner_correlators(1.0, 3).values() {
            assert!((v + 1.0).abs() < 1e-12);
        }
        let mixed = DensityMatrix::maximally_mixed(2);
        let state = SharedState::product(&mixed, &mixed);
        let asm = assemblage_from_povms(&state, &Povm::pauli_settings(2).unwrap()).unwrap();
        let c = correlators_from_assemblage(&asm, &paulis(2)).unwrap();
        assert!(c.values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn werner_values() {
        let c = werner_correlators(0.8, 2);
        assert!((s_m(&c) + 0.8).abs() < 1e-12);
        let f = cjwr(&werner_correlators(0.75, 2));
        assert!((f.f - 0.75 * 2f64.sqrt()).abs() < 1e-12 && f.violated);
        let f = cjwr(&werner_correlators(0.6, 3));
        assert!((f.f - 0.6 * 3f64.sqrt()).abs() < 1e-12 && f.violated);
        let f = cjwr(&werner_correlators(0.5, 2));
        assert!((f.f - 0.5 * 2f64.sqrt()).abs() < 1e-12 && !f.violated);
    }

    #[test]
    fn trivial_sets() {
        let z = CorrelatorSet::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(s_m(&z), 0.0);
        assert_eq!(s_m(&CorrelatorSet::new(vec![1.0, -1.0]).unwrap()), 0.0);
        assert!(CorrelatorSet::new(vec![]).is_err());
        assert!(CorrelatorSet::new(vec![1.1]).is_err());
        assert!(CorrelatorSet::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn crossings() {
        let x2 = linear_crossing(&werner_correlators(1.0, 2)).unwrap();
        assert!((x2 - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        let x3 = linear_crossing(&werner_correlators(1.0, 3)).unwrap();
        assert!((x3 - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_observables() {
        let asm = assemblage_from_povms(&SharedState::singlet(), &Povm::pauli_settings(2).unwrap()).unwrap();
        let half = HermitianMatrix::new(pauli::z().scale_real(0.5)).unwrap();
        assert!(correlators_from_assemblage(&asm, &[half.clone(), half]).is_err());
        assert!(correlators_from_assemblage(&asm, &paulis(1)).is_err());
    }

    proptest! {
        #[test]
        fn f_scales_as_sqrt_m_times_s(values in prop::collection::vec(-1.0f64..=1.0, 1..12)) {
            let c = CorrelatorSet::new(values).unwrap();
            let m = c.m() as f64;
            prop_assert!((cjwr(&c).f - m.sqrt() * s_m(&c).abs()).abs() <= 1e-15);
        }
    }
}
