//! Box-world (GPT) assemblages with exact rational tables.
//!
//! Bob's normalized state is a conditional probability table `p(b|y)`, and an
//! effect `e_{b|y}` reads off one entry. Everything here is exact; the only
//! floating entry point is [`quantum_joint`], which evaluates a quantum
//! assemblage against Bob's POVMs so both kinds of correlations can be fed to
//! [`chsh_value`].

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Assemblage, Povm};
use crate::scalar::{rat, Rational, Scalar};

/// Bob's normalized GPT state, `table[y][b] = p(b|y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GptState {
    table: Vec<Vec<Rational>>,
}

impl GptState {
    pub fn new(table: Vec<Vec<Rational>>) -> Result<Self> {
        let outputs = table.first().map_or(0, Vec::len);
        if table.is_empty() || outputs == 0 {
            return Err(Error::InvalidParameter("empty GPT state table".into()));
        }
        for (y, row) in table.iter().enumerate() {
            if row.len() != outputs {
                return Err(Error::DimensionMismatch {
                    context: "GPT state row",
                    expected: outputs,
                    found: row.len(),
                });
            }
            if row.iter().any(|p| *p < Rational::zero() || *p > Rational::one()) {
                return Err(Error::InvalidParameter(format!(
                    "GPT state row {y} has entries outside [0, 1]"
                )));
            }
            if row.iter().cloned().sum::<Rational>() != Rational::one() {
                return Err(Error::NotNormalized {
                    what: format!("GPT state row {y}"),
                    trace: row.iter().map(Scalar::to_f64).sum(),
                });
            }
        }
        Ok(Self { table })
    }

    /// The table with `p(b|y) = 1` iff `b == outcomes[y]`.
    pub fn deterministic(outcomes: &[usize], num_outputs: usize) -> Self {
        let table = outcomes
            .iter()
            .map(|&b| {
                (0..num_outputs)
                    .map(|k| if k == b { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self { table }
    }

    pub fn uniform(num_inputs: usize, num_outputs: usize) -> Self {
        let p = rat(1, num_outputs as i64);
        Self {
            table: vec![vec![p; num_outputs]; num_inputs],
        }
    }

    pub fn num_inputs(&self) -> usize {
        self.table.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.table[0].len()
    }

    /// e_{b|y}(omega).
    pub fn prob(&self, y: usize, b: usize) -> &Rational {
        &self.table[y][b]
    }

    pub fn table(&self) -> &[Vec<Rational>] {
        &self.table
    }
}

/// `entries[x][a] = (p(a|x), omega_{B|a,x})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GptAssemblage {
    entries: Vec<Vec<(Rational, GptState)>>,
}

impl GptAssemblage {
    /// Checks shapes, that weights are a distribution for each x, and exact
    /// one-sided no-signalling.
    pub fn new(entries: Vec<Vec<(Rational, GptState)>>) -> Result<Self> {
        let asm = Self::new_unchecked(entries)?;
        for x in 0..asm.num_settings() {
            let total: Rational = asm.entries[x].iter().map(|(w, _)| w.clone()).sum();
            if total != Rational::one() || asm.entries[x].iter().any(|(w, _)| *w < Rational::zero())
            {
                return Err(Error::NotNormalized {
                    what: format!("p(a|x={x})"),
                    trace: total.to_f64(),
                });
            }
        }
        if !asm.check_no_signalling() {
            return Err(Error::InvalidParameter(
                "box assemblage signals from Alice to Bob".into(),
            ));
        }
        Ok(asm)
    }

    /// Shape checks only.
    pub fn new_unchecked(entries: Vec<Vec<(Rational, GptState)>>) -> Result<Self> {
        let first = entries
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::InvalidParameter("empty box assemblage".into()))?;
        let (ny, nb) = (first.1.num_inputs(), first.1.num_outputs());
        for (w, s) in entries.iter().flatten() {
            let _ = w;
            if s.num_inputs() != ny || s.num_outputs() != nb {
                return Err(Error::DimensionMismatch {
                    context: "box assemblage table",
                    expected: ny * nb,
                    found: s.num_inputs() * s.num_outputs(),
                });
            }
        }
        if entries.iter().any(Vec::is_empty) {
            return Err(Error::InvalidParameter(
                "box assemblage setting without outcomes".into(),
            ));
        }
        Ok(Self { entries })
    }

    pub fn num_settings(&self) -> usize {
        self.entries.len()
    }

    pub fn num_outcomes(&self, x: usize) -> usize {
        self.entries[x].len()
    }

    pub fn max_outcomes(&self) -> usize {
        self.entries.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn bob_inputs(&self) -> usize {
        self.entries[0][0].1.num_inputs()
    }

    pub fn bob_outputs(&self) -> usize {
        self.entries[0][0].1.num_outputs()
    }

    pub fn weight(&self, x: usize, a: usize) -> &Rational {
        &self.entries[x][a].0
    }

    pub fn state(&self, x: usize, a: usize) -> &GptState {
        &self.entries[x][a].1
    }

    pub fn entries(&self) -> &[Vec<(Rational, GptState)>] {
        &self.entries
    }

    /// sigma_{a|x}(y, b) = p(a|x) p(b|y; a, x).
    pub fn sigma(&self, x: usize, a: usize, y: usize, b: usize) -> Rational {
        let (w, s) = &self.entries[x][a];
        w.clone() * s.prob(y, b).clone()
    }

    /// Bob's marginal table sum_a sigma_{a|x}.
    pub fn marginal(&self, x: usize) -> Vec<Vec<Rational>> {
        (0..self.bob_inputs())
            .map(|y| {
                (0..self.bob_outputs())
                    .map(|b| (0..self.num_outcomes(x)).map(|a| self.sigma(x, a, y, b)).sum())
                    .collect()
            })
            .collect()
    }

    /// Exact x-independence of Bob's marginal.
    pub fn check_no_signalling(&self) -> bool {
        let first = self.marginal(0);
        (1..self.num_settings()).all(|x| self.marginal(x) == first)
    }

    /// lambda * self + (1 - lambda) * other, as subnormalized tables.
    pub fn mix(&self, other: &Self, lambda: &Rational) -> Result<Self> {
        let same_shape = self.num_settings() == other.num_settings()
            && self.bob_inputs() == other.bob_inputs()
            && self.bob_outputs() == other.bob_outputs()
            && (0..self.num_settings()).all(|x| self.num_outcomes(x) == other.num_outcomes(x));
        if !same_shape {
            return Err(Error::InvalidParameter(
                "mixing box assemblages of different shape".into(),
            ));
        }
        let mu = Rational::one() - lambda.clone();
        let sigmas: Vec<Vec<Vec<Vec<Rational>>>> = (0..self.num_settings())
            .map(|x| {
                (0..self.num_outcomes(x))
                    .map(|a| {
                        (0..self.bob_inputs())
                            .map(|y| {
                                (0..self.bob_outputs())
                                    .map(|b| {
                                        lambda.clone() * self.sigma(x, a, y, b)
                                            + mu.clone() * other.sigma(x, a, y, b)
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::from_subnormalized(sigmas)
    }

    /// Builds an assemblage from subnormalized tables `sigma[x][a][y][b]`.
    /// Zero-weight contexts get a uniform placeholder state.
    pub fn from_subnormalized(sigma: Vec<Vec<Vec<Vec<Rational>>>>) -> Result<Self> {
        let mut entries = Vec::with_capacity(sigma.len());
        for (x, row) in sigma.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (a, table) in row.into_iter().enumerate() {
                let ny = table.len();
                let nb = table.first().map_or(0, Vec::len);
                let w: Rational = table.first().map(|r| r.iter().cloned().sum()).unwrap_or_default();
                for (y, r) in table.iter().enumerate() {
                    if r.iter().cloned().sum::<Rational>() != w {
                        return Err(Error::InvalidParameter(format!(
                            "sigma(a={a}|x={x}) has inconsistent weight at y={y}"
                        )));
                    }
                }
                let state = if w.is_zero() {
                    GptState::uniform(ny, nb)
                } else {
                    GptState::new(
                        table
                            .into_iter()
                            .map(|r| r.into_iter().map(|p| p / w.clone()).collect())
                            .collect(),
                    )?
                };
                out.push((w, state));
            }
            entries.push(out);
        }
        Self::new(entries)
    }

    /// Deterministic relabelling of Alice's outcomes, as in
    /// [`Assemblage::coarse_grain`].
    pub fn coarse_grain(&self, maps: &[Vec<usize>], new_outcomes: usize) -> Result<Self> {
        if maps.len() != self.num_settings() {
            return Err(Error::DimensionMismatch {
                context: "coarse-graining maps",
                expected: self.num_settings(),
                found: maps.len(),
            });
        }
        let (ny, nb) = (self.bob_inputs(), self.bob_outputs());
        let mut sigma = Vec::with_capacity(maps.len());
        for (x, map) in maps.iter().enumerate() {
            if map.len() != self.num_outcomes(x) || map.iter().any(|&t| t >= new_outcomes) {
                return Err(Error::InvalidParameter(format!(
                    "coarse-graining map for setting {x} is malformed"
                )));
            }
            let mut row = vec![vec![vec![Rational::zero(); nb]; ny]; new_outcomes];
            for (a, &t) in map.iter().enumerate() {
                for (y, r) in row[t].iter_mut().enumerate() {
                    for (b, v) in r.iter_mut().enumerate() {
                        *v = v.clone() + self.sigma(x, a, y, b);
                    }
                }
            }
            sigma.push(row);
        }
        Self::from_subnormalized(sigma)
    }
}

/// p(a|x) = 1/2 and p(b|y; a, x) = [b == a xor x y].
pub fn prbox_assemblage() -> GptAssemblage {
    let entries = (0..2)
        .map(|x| {
            (0..2)
                .map(|a| {
                    let outcomes: Vec<usize> = (0..2).map(|y| a ^ (x & y)).collect();
                    (rat(1, 2), GptState::deterministic(&outcomes, 2))
                })
                .collect()
        })
        .collect();
    GptAssemblage::new(entries).expect("PR box is one-sided no-signalling")
}

/// Every table uniform, p(a|x) uniform.
pub fn uniform_assemblage(
    alice_inputs: usize,
    alice_outputs: usize,
    bob_inputs: usize,
    bob_outputs: usize,
) -> GptAssemblage {
    let w = rat(1, alice_outputs as i64);
    let entries = (0..alice_inputs)
        .map(|_| {
            (0..alice_outputs)
                .map(|_| (w.clone(), GptState::uniform(bob_inputs, bob_outputs)))
                .collect()
        })
        .collect();
    GptAssemblage::new(entries).expect("uniform assemblage is valid")
}

/// Alice always answers `alice[x]`, Bob's table is deterministic on `bob`.
pub fn deterministic_assemblage(alice: &[usize], alice_outputs: usize, bob: &[usize], bob_outputs: usize) -> GptAssemblage {
    let entries = alice
        .iter()
        .map(|&ax| {
            (0..alice_outputs)
                .map(|a| {
                    let w = if a == ax { Rational::one() } else { Rational::zero() };
                    (w, GptState::deterministic(bob, bob_outputs))
                })
                .collect()
        })
        .collect();
    GptAssemblage::new(entries).expect("deterministic assemblage is valid")
}

/// p(a, b | x, y), stored `[x][y][a][b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution<T> {
    shape: [usize; 4],
    p: Vec<T>,
}

impl<T: Scalar> JointDistribution<T> {
    /// `shape = [inputs_a, inputs_b, outputs_a, outputs_b]`.
    pub fn from_fn(shape: [usize; 4], mut f: impl FnMut(usize, usize, usize, usize) -> T) -> Self {
        let [nx, ny, na, nb] = shape;
        let mut p = Vec::with_capacity(nx * ny * na * nb);
        for x in 0..nx {
            for y in 0..ny {
                for a in 0..na {
                    for b in 0..nb {
                        p.push(f(a, b, x, y));
                    }
                }
            }
        }
        Self { shape, p }
    }

    pub fn shape(&self) -> [usize; 4] {
        self.shape
    }

    pub fn get(&self, a: usize, b: usize, x: usize, y: usize) -> &T {
        let [_, ny, na, nb] = self.shape;
        &self.p[((x * ny + y) * na + a) * nb + b]
    }

    pub fn slice_sum(&self, x: usize, y: usize) -> T {
        let [_, _, na, nb] = self.shape;
        let mut acc = T::zero();
        for a in 0..na {
            for b in 0..nb {
                acc = acc + self.get(a, b, x, y).clone();
            }
        }
        acc
    }

    /// lambda * self + (1 - lambda) * other.
    pub fn mix(&self, other: &Self, lambda: &T) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::InvalidParameter("mixing joints of different shape".into()));
        }
        let mu = T::one() - lambda.clone();
        Ok(Self {
            shape: self.shape,
            p: self
                .p
                .iter()
                .zip(&other.p)
                .map(|(u, v)| lambda.clone() * u.clone() + mu.clone() * v.clone())
                .collect(),
        })
    }

    /// E_xy = <A_x B_y> with A = (-1)^a, B = (-1)^b.
    pub fn correlator(&self, x: usize, y: usize) -> T {
        let [_, _, na, nb] = self.shape;
        let mut acc = T::zero();
        for a in 0..na {
            for b in 0..nb {
                let v = self.get(a, b, x, y).clone();
                acc = if (a + b) % 2 == 0 { acc + v } else { acc - v };
            }
        }
        acc
    }
}

/// p(a, b | x, y) = p(a|x) e_{b|y}(omega_{B|a,x}).
pub fn joint_from_assemblage(asm: &GptAssemblage) -> JointDistribution<Rational> {
    let shape = [
        asm.num_settings(),
        asm.bob_inputs(),
        asm.max_outcomes(),
        asm.bob_outputs(),
    ];
    JointDistribution::from_fn(shape, |a, b, x, y| {
        if a < asm.num_outcomes(x) {
            asm.sigma(x, a, y, b)
        } else {
            Rational::zero()
        }
    })
}

/// p(a, b | x, y) = tr[E_{b|y} sigma_{a|x}] for a quantum assemblage.
pub fn quantum_joint(asm: &Assemblage, bob: &[Povm]) -> Result<JointDistribution<f64>> {
    let nb = bob.iter().map(Povm::num_outcomes).max().unwrap_or(0);
    for povm in bob {
        if povm.dim() != asm.dim_b() {
            return Err(Error::DimensionMismatch {
                context: "Bob measurement",
                expected: asm.dim_b(),
                found: povm.dim(),
            });
        }
    }
    let shape = [asm.num_settings(), bob.len(), asm.max_outcomes(), nb];
    Ok(JointDistribution::from_fn(shape, |a, b, x, y| {
        if a < asm.num_outcomes(x) && b < bob[y].num_outcomes() {
            bob[y].effects()[b].expectation(asm.sigma(x, a))
        } else {
            0.0
        }
    }))
}

/// E00 + E01 + E10 - E11 for a binary-input, binary-output joint.
///
/// Slices must sum to one exactly (rational) or within `tol` (floating).
pub fn chsh_value<T: Scalar>(joint: &JointDistribution<T>, tol: f64) -> Result<T> {
    if joint.shape() != [2, 2, 2, 2] {
        return Err(Error::InvalidParameter(format!(
            "CHSH needs binary inputs and outputs, got shape {:?}",
            joint.shape()
        )));
    }
    for x in 0..2 {
        for y in 0..2 {
            let dev = joint.slice_sum(x, y) - T::one();
            if dev.sign_tol(tol) != std::cmp::Ordering::Equal {
                return Err(Error::NotNormalized {
                    what: format!("joint slice (x={x}, y={y})"),
                    trace: dev.to_f64() + 1.0,
                });
            }
        }
    }
    Ok(joint.correlator(0, 0) + joint.correlator(0, 1) + joint.correlator(1, 0)
        - joint.correlator(1, 1))
}

/// Serialized form of a box scenario table entry: weights and probabilities
/// as "num/den" strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxEntry {
    pub x: usize,
    pub a: usize,
    pub weight: String,
    /// `table[y][b]`
    pub table: Vec<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{assemblage_from_povms, SharedState};
    use proptest::prelude::*;

    #[test]
    fn prbox_entries() {
        let pr = prbox_assemblage();
        // x = 0, a = 0: b = 0 for both y
        for y in 0..2 {
            assert_eq!(*pr.state(0, 0).prob(y, 0), Rational::one());
        }
        // x = 1, a = 0: b = 0 at y = 0, b = 1 at y = 1
        assert_eq!(*pr.state(1, 0).prob(0, 0), Rational::one());
        assert_eq!(*pr.state(1, 0).prob(1, 1), Rational::one());
        for x in 0..2 {
            for row in pr.marginal(x) {
                assert_eq!(row, vec![rat(1, 2), rat(1, 2)]);
            }
        }
        assert!(pr.check_no_signalling());
    }

    #[test]
    fn prbox_joint_and_chsh() {
        let joint = joint_from_assemblage(&prbox_assemblage());
        assert_eq!(*joint.get(0, 0, 0, 0), rat(1, 2));
        assert_eq!(*joint.get(0, 1, 0, 0), Rational::zero());
        assert_eq!(chsh_value(&joint, 0.0).unwrap(), rat(4, 1));
    }

    #[test]
    fn uniform_and_deterministic_boxes() {
        let joint = joint_from_assemblage(&uniform_assemblage(2, 2, 2, 2));
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        assert_eq!(*joint.get(a, b, x, y), rat(1, 4));
                    }
                }
            }
        }
        assert_eq!(chsh_value(&joint, 0.0).unwrap(), Rational::zero());
        let det = joint_from_assemblage(&deterministic_assemblage(&[0, 0], 2, &[0, 0], 2));
        assert_eq!(chsh_value(&det, 0.0).unwrap(), rat(2, 1));
    }

    #[test]
    fn signalling_box_is_rejected() {
        let s0 = GptState::deterministic(&[0, 0], 2);
        let s1 = GptState::deterministic(&[1, 1], 2);
        let entries = vec![
            vec![(rat(1, 2), s0.clone()), (rat(1, 2), s1.clone())],
            vec![(Rational::one(), s0), (Rational::zero(), s1)],
        ];
        assert!(GptAssemblage::new(entries.clone()).is_err());
        assert!(!GptAssemblage::new_unchecked(entries).unwrap().check_no_signalling());
    }

    #[test]
    fn unnormalized_joint_slice_is_an_error() {
        let joint = JointDistribution::from_fn([2, 2, 2, 2], |_, _, _, _| rat(1, 3));
        assert!(chsh_value(&joint, 0.0).is_err());
        let wrong_shape = JointDistribution::from_fn([3, 2, 2, 2], |_, _, _, _| rat(1, 4));
        assert!(chsh_value(&wrong_shape, 0.0).is_err());
    }

    #[test]
    fn singlet_reaches_tsirelson() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let alice = [Povm::sigma_z(), Povm::sigma_x()];
        let bob = [
            Povm::pauli_axis("(Z+X)/sqrt2", [s, 0.0, s]).unwrap(),
            Povm::pauli_axis("(Z-X)/sqrt2", [-s, 0.0, s]).unwrap(),
        ];
        let asm = assemblage_from_povms(&SharedState::singlet(), &alice).unwrap();
        let joint = quantum_joint(&asm, &bob).unwrap();
        let value = chsh_value(&joint, 1e-12).unwrap();
        assert!((value.abs() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9, "{value}");
    }

    #[test]
    fn mixtures_coarse_grainings_stay_valid() {
        let m = prbox_assemblage()
            .mix(&uniform_assemblage(2, 2, 2, 2), &rat(1, 3))
            .unwrap();
        assert!(m.check_no_signalling());
        let cg = m.coarse_grain(&[vec![0, 0], vec![0, 0]], 2).unwrap();
        assert_eq!(*cg.weight(0, 0), Rational::one());
        assert_eq!(*cg.weight(1, 1), Rational::zero());
        assert!(cg.check_no_signalling());
    }

    proptest! {
        #[test]
        fn chsh_is_affine_under_mixing(n in 0i64..=20) {
            let lambda = rat(n, 20);
            let pr = joint_from_assemblage(&prbox_assemblage());
            let det = joint_from_assemblage(&deterministic_assemblage(&[1, 0], 2, &[0, 1], 2));
            let mixed = pr.mix(&det, &lambda).unwrap();
            let lhs = chsh_value(&mixed, 0.0).unwrap();
            let rhs = lambda.clone() * chsh_value(&pr, 0.0).unwrap()
                + (Rational::one() - lambda) * chsh_value(&det, 0.0).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mixture_joint_interpolates(n in 0i64..=10) {
            let lambda = rat(n, 10);
            let pr = prbox_assemblage();
            let un = uniform_assemblage(2, 2, 2, 2);
            let mixed = joint_from_assemblage(&pr.mix(&un, &lambda).unwrap());
            let want = joint_from_assemblage(&pr).mix(&joint_from_assemblage(&un), &lambda).unwrap();
            prop_assert_eq!(mixed, want);
        }
    }
}
