//! Quantum assemblages: shared states, Alice's measurements and the
//! conditional states they steer Bob into.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, pauli, ComplexMatrix, HermitianMatrix, C64, PSD_TOL};

/// Tolerance on sum-to-identity of POVM effects and Kraus completeness.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Tolerance on assemblage normalization and one-sided no-signalling.
pub const ASSEMBLAGE_TOL: f64 = 1e-9;
/// Below this probability the normalized conditional state is not formed.
pub const ZERO_PROBABILITY: f64 = 1e-12;
/// Default certainty slack for predictability scans.
pub const DEFAULT_CERTAINTY_EPS: f64 = 1e-9;

/// Unit-trace PSD operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let h = HermitianMatrix::new(m)?;
        let min = h.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd {
                what: "density matrix".into(),
                min_eigenvalue: min,
            });
        }
        let trace = h.trace();
        if (trace - 1.0).abs() > ASSEMBLAGE_TOL {
            return Err(Error::NotNormalized {
                what: "density matrix".into(),
                trace,
            });
        }
        Ok(Self(h))
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi, psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(
            HermitianMatrix::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
                .expect("identity is Hermitian"),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigenvalues()
    }
}

/// Bell basis in the fixed order {Phi+, Phi-, Psi+, Psi-}.
pub fn bell_basis() -> [[C64; 4]; 4] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    [
        [c(s, 0.0), z, z, c(s, 0.0)],
        [c(s, 0.0), z, z, c(-s, 0.0)],
        [z, c(s, 0.0), c(s, 0.0), z],
        [z, c(s, 0.0), c(-s, 0.0), z],
    ]
}

/// Diagonal of a two-qubit operator in the Bell basis (same order as [`bell_basis`]).
pub fn bell_diagonal(rho: &ComplexMatrix) -> Result<[f64; 4]> {
    if rho.rows() != 4 || !rho.is_square() {
        return Err(Error::DimensionMismatch {
            context: "two-qubit operator",
            expected: 4,
            found: rho.rows(),
        });
    }
    let mut out = [0.0; 4];
    for (k, b) in bell_basis().iter().enumerate() {
        let mut acc = c(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += b[i].conj() * rho[(i, j)] * b[j];
            }
        }
        out[k] = acc.re;
    }
    Ok(out)
}

pub fn singlet_vector() -> [C64; 4] {
    bell_basis()[3]
}

/// p |Psi-><Psi-| + (1 - p) I/4.
pub fn werner_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "Werner mixing parameter {p} outside [0, 1]"
        )));
    }
    let psi = singlet_vector();
    let m = &ComplexMatrix::outer(&psi, &psi).scale_real(p)
        + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    DensityMatrix::new(m)
}

/// A state on C^dim_a (x) C^dim_b.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SharedState {
    rho: DensityMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl SharedState {
    pub fn new(rho: DensityMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if rho.dim() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                context: "shared state",
                expected: dim_a * dim_b,
                found: rho.dim(),
            });
        }
        Ok(Self { rho, dim_a, dim_b })
    }

    pub fn werner(p: f64) -> Result<Self> {
        Self::new(werner_state(p)?, 2, 2)
    }

    pub fn singlet() -> Self {
        Self::werner(1.0).expect("p = 1 is valid")
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        let rho = DensityMatrix::new(a.matrix().kron(b.matrix())).expect("product of states");
        Self {
            rho,
            dim_a: a.dim(),
            dim_b: b.dim(),
        }
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }
}

/// A measurement given by its effects, one per outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Povm {
    label: String,
    effects: Vec<HermitianMatrix>,
}

impl Povm {
    pub fn new(label: impl Into<String>, effects: Vec<ComplexMatrix>) -> Result<Self> {
        let label = label.into();
        let Some(first) = effects.first() else {
            return Err(Error::InvalidParameter(format!("{label}: POVM without effects")));
        };
        let dim = first.rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        let mut checked = Vec::with_capacity(effects.len());
        for (b, e) in effects.into_iter().enumerate() {
            if e.rows() != dim || !e.is_square() {
                return Err(Error::DimensionMismatch {
                    context: "POVM effect",
                    expected: dim,
                    found: e.rows(),
                });
            }
            let h = HermitianMatrix::new(e)?;
            let min = h.eigenvalues().first().copied().unwrap_or(0.0);
            if min < -PSD_TOL {
                return Err(Error::NotPsd {
                    what: format!("{label} effect {b}"),
                    min_eigenvalue: min,
                });
            }
            sum = &sum + h.matrix();
            checked.push(h);
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::NotAPovm { label, deviation });
        }
        Ok(Self {
            label,
            effects: checked,
        })
    }

    /// Projective measurement of n . sigma; outcome a carries eigenvalue (-1)^a.
    pub fn pauli_axis(label: impl Into<String>, n: [f64; 3]) -> Result<Self> {
        Self::noisy_pauli_axis(label, n, 1.0)
    }

    /// Effects (I +- eta n . sigma)/2.
    pub fn noisy_pauli_axis(label: impl Into<String>, n: [f64; 3], eta: f64) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "measurement axis must be a unit vector (norm {norm})"
            )));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!(
                "sharpness {eta} outside [0, 1]"
            )));
        }
        let r = [eta * n[0], eta * n[1], eta * n[2]];
        let minus = [-r[0], -r[1], -r[2]];
        Self::new(label, vec![pauli::bloch_state(r), pauli::bloch_state(minus)])
    }

    pub fn sigma_x() -> Self {
        Self::pauli_axis("X", [1.0, 0.0, 0.0]).unwrap()
    }

    pub fn sigma_y() -> Self {
        Self::pauli_axis("Y", [0.0, 1.0, 0.0]).unwrap()
    }

    pub fn sigma_z() -> Self {
        Self::pauli_axis("Z", [0.0, 0.0, 1.0]).unwrap()
    }

    /// The first `m` of X, Z, Y (so m = 2 gives {X, Z}).
    pub fn pauli_settings(m: usize) -> Result<Vec<Self>> {
        let all = [Self::sigma_x(), Self::sigma_z(), Self::sigma_y()];
        if m == 0 || m > 3 {
            return Err(Error::InvalidParameter(format!(
                "Pauli setting count {m} outside 1..=3"
            )));
        }
        Ok(all[..m].to_vec())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn effects(&self) -> &[HermitianMatrix] {
        &self.effects
    }

    pub fn num_outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    /// E_0 - E_1 for a two-outcome measurement.
    pub fn observable(&self) -> Result<HermitianMatrix> {
        if self.num_outcomes() != 2 {
            return Err(Error::InvalidParameter(format!(
                "{} has {} outcomes, a +-1 observable needs 2",
                self.label,
                self.num_outcomes()
            )));
        }
        HermitianMatrix::new(self.effects[0].matrix() - self.effects[1].matrix())
    }
}

/// Local instrument on Alice: per outcome a, a list of Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct Instrument {
    label: String,
    kraus_sets: Vec<Vec<ComplexMatrix>>,
    dim: usize,
}

impl Instrument {
    pub fn new(label: impl Into<String>, kraus_sets: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let label = label.into();
        let dim = kraus_sets
            .iter()
            .flatten()
            .next()
            .map(ComplexMatrix::cols)
            .ok_or_else(|| Error::InvalidParameter(format!("{label}: no Kraus operators")))?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in kraus_sets.iter().flatten() {
            if k.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator",
                    expected: dim,
                    found: k.cols(),
                });
            }
            sum = &sum + &(&k.adjoint() * k);
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::IncompleteKraus { label, deviation });
        }
        Ok(Self {
            label,
            kraus_sets,
            dim,
        })
    }

    /// Lüders instrument K_a = sqrt(M_a).
    pub fn lueders(povm: &Povm) -> Result<Self> {
        let sets = povm
            .effects()
            .iter()
            .map(|e| e.matrix().sqrt_psd().map(|k| vec![k]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(format!("{} (Lüders)", povm.label()), sets)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_sets(&self) -> &[Vec<ComplexMatrix>] {
        &self.kraus_sets
    }

    /// The induced POVM, M_a = sum_mu K^dagger K.
    pub fn povm(&self) -> Result<Povm> {
        let effects = self
            .kraus_sets
            .iter()
            .map(|set| {
                set.iter().fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, k| {
                    &acc + &(&k.adjoint() * k)
                })
            })
            .collect();
        Povm::new(self.label.clone(), effects)
    }
}

/// Bob's subnormalized conditional states sigma_{a|x}, indexed `[x][a]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assemblage {
    dim_b: usize,
    sigma: Vec<Vec<HermitianMatrix>>,
}

impl Assemblage {
    /// Shape-checked construction; physical invariants are checked by
    /// [`Assemblage::validate`] and [`check_no_signalling`].
    pub fn new(sigma: Vec<Vec<HermitianMatrix>>) -> Result<Self> {
        let dim_b = sigma
            .first()
            .and_then(|s| s.first())
            .map(HermitianMatrix::dim)
            .ok_or_else(|| Error::InvalidParameter("empty assemblage".into()))?;
        for s in sigma.iter().flatten() {
            if s.dim() != dim_b {
                return Err(Error::DimensionMismatch {
                    context: "assemblage element",
                    expected: dim_b,
                    found: s.dim(),
                });
            }
        }
        if sigma.iter().any(Vec::is_empty) {
            return Err(Error::InvalidParameter(
                "assemblage setting without outcomes".into(),
            ));
        }
        Ok(Self { dim_b, sigma })
    }

    pub fn num_settings(&self) -> usize {
        self.sigma.len()
    }

    pub fn num_outcomes(&self, x: usize) -> usize {
        self.sigma[x].len()
    }

    /// Largest outcome count over settings.
    pub fn max_outcomes(&self) -> usize {
        self.sigma.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn sigma(&self, x: usize, a: usize) -> &HermitianMatrix {
        &self.sigma[x][a]
    }

    pub fn elements(&self) -> &[Vec<HermitianMatrix>] {
        &self.sigma
    }

    pub fn probability(&self, x: usize, a: usize) -> f64 {
        self.sigma[x][a].trace()
    }

    /// omega_{B|a,x}; `None` when p(a|x) <= 1e-12.
    pub fn conditional_state(&self, x: usize, a: usize) -> Option<HermitianMatrix> {
        let p = self.probability(x, a);
        if p <= ZERO_PROBABILITY {
            return None;
        }
        HermitianMatrix::new(self.sigma[x][a].matrix().scale_real(1.0 / p)).ok()
    }

    /// sum_a sigma_{a|x}.
    pub fn marginal(&self, x: usize) -> ComplexMatrix {
        self.sigma[x]
            .iter()
            .fold(ComplexMatrix::zeros(self.dim_b, self.dim_b), |acc, s| {
                &acc + s.matrix()
            })
    }

    /// Checks PSD elements, per-setting normalization and no-signalling.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for (x, row) in self.sigma.iter().enumerate() {
            for (a, s) in row.iter().enumerate() {
                let min = s.eigenvalues().first().copied().unwrap_or(0.0);
                if min < -tol {
                    return Err(Error::NotPsd {
                        what: format!("sigma(a={a}|x={x})"),
                        min_eigenvalue: min,
                    });
                }
            }
            let total: f64 = (0..row.len()).map(|a| self.probability(x, a)).sum();
            if (total - 1.0).abs() > tol {
                return Err(Error::NotNormalized {
                    what: format!("assemblage setting {x}"),
                    trace: total,
                });
            }
        }
        let report = check_no_signalling(self, tol);
        if !report.pass {
            return Err(Error::InvalidParameter(format!(
                "assemblage signals from Alice to Bob (deviation {:.3e})",
                report.max_deviation
            )));
        }
        Ok(())
    }

    /// lambda * self + (1 - lambda) * other.
    pub fn mix(&self, other: &Assemblage, lambda: f64) -> Result<Assemblage> {
        if self.dim_b != other.dim_b
            || self.num_settings() != other.num_settings()
            || (0..self.num_settings()).any(|x| self.num_outcomes(x) != other.num_outcomes(x))
        {
            return Err(Error::InvalidParameter(
                "mixing assemblages of different shape".into(),
            ));
        }
        let sigma = self
            .sigma
            .iter()
            .zip(&other.sigma)
            .map(|(r1, r2)| {
                r1.iter()
                    .zip(r2)
                    .map(|(s1, s2)| {
                        HermitianMatrix::new(
                            &s1.matrix().scale_real(lambda)
                                + &s2.matrix().scale_real(1.0 - lambda),
                        )
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Assemblage::new(sigma)
    }

    /// Deterministic relabelling of Alice's outcomes: `maps[x][a]` is the new
    /// outcome of old outcome `a` at setting `x`, in `0..new_outcomes`.
    pub fn coarse_grain(&self, maps: &[Vec<usize>], new_outcomes: usize) -> Result<Assemblage> {
        if maps.len() != self.num_settings() {
            return Err(Error::DimensionMismatch {
                context: "coarse-graining maps",
                expected: self.num_settings(),
                found: maps.len(),
            });
        }
        let mut sigma = Vec::with_capacity(maps.len());
        for (x, map) in maps.iter().enumerate() {
            if map.len() != self.num_outcomes(x) || map.iter().any(|&a| a >= new_outcomes) {
                return Err(Error::InvalidParameter(format!(
                    "coarse-graining map for setting {x} is malformed"
                )));
            }
            let mut row = vec![ComplexMatrix::zeros(self.dim_b, self.dim_b); new_outcomes];
            for (a, &target) in map.iter().enumerate() {
                row[target] = &row[target] + self.sigma[x][a].matrix();
            }
            sigma.push(
                row.into_iter()
                    .map(HermitianMatrix::new)
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Assemblage::new(sigma)
    }

    /// Largest |sigma - other| entry over all (x, a).
    pub fn max_deviation(&self, other: &Assemblage) -> f64 {
        if self.num_settings() != other.num_settings() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (r1, r2) in self.sigma.iter().zip(&other.sigma) {
            if r1.len() != r2.len() {
                return f64::INFINITY;
            }
            for (s1, s2) in r1.iter().zip(r2) {
                worst = worst.max(s1.matrix().max_abs_diff(s2.matrix()));
            }
        }
        worst
    }
}

fn check_alice_dim(state: &SharedState, dim: usize) -> Result<()> {
    if dim != state.dim_a() {
        return Err(Error::DimensionMismatch {
            context: "Alice measurement",
            expected: state.dim_a(),
            found: dim,
        });
    }
    Ok(())
}

/// sigma_{a|x} = tr_A[(M_{a|x} (x) I) rho].
pub fn assemblage_from_povms(state: &SharedState, alice: &[Povm]) -> Result<Assemblage> {
    let id_b = ComplexMatrix::identity(state.dim_b());
    let rho = state.rho().matrix();
    let mut sigma = Vec::with_capacity(alice.len());
    for povm in alice {
        check_alice_dim(state, povm.dim())?;
        let row = povm
            .effects()
            .iter()
            .map(|m| {
                let op = m.matrix().kron(&id_b);
                let s = (&op * rho).partial_trace_a(state.dim_a(), state.dim_b())?;
                HermitianMatrix::new(hermitize(&s))
            })
            .collect::<Result<Vec<_>>>()?;
        sigma.push(row);
    }
    Assemblage::new(sigma)
}

/// sigma_{a|x} = sum_mu tr_A[(K (x) I) rho (K^dagger (x) I)].
pub fn assemblage_from_instrument(state: &SharedState, alice: &[Instrument]) -> Result<Assemblage> {
    let id_b = ComplexMatrix::identity(state.dim_b());
    let rho = state.rho().matrix();
    let n = state.dim_a() * state.dim_b();
    let mut sigma = Vec::with_capacity(alice.len());
    for inst in alice {
        check_alice_dim(state, inst.dim())?;
        let mut row = Vec::with_capacity(inst.kraus_sets().len());
        for set in inst.kraus_sets() {
            let mut acc = ComplexMatrix::zeros(n, n);
            for k in set {
                if k.rows() != state.dim_a() {
                    return Err(Error::DimensionMismatch {
                        context: "Kraus operator output",
                        expected: state.dim_a(),
                        found: k.rows(),
                    });
                }
                let big = k.kron(&id_b);
                acc = &acc + &(&(&big * rho) * &big.adjoint());
            }
            let s = acc.partial_trace_a(state.dim_a(), state.dim_b())?;
            row.push(HermitianMatrix::new(hermitize(&s))?);
        }
        sigma.push(row);
    }
    Assemblage::new(sigma)
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoSignallingReport {
    pub pass: bool,
    pub max_deviation: f64,
}

/// Max-norm deviation between Bob's marginals over all pairs of settings.
pub fn check_no_signalling(asm: &Assemblage, tol: f64) -> NoSignallingReport {
    let marginals: Vec<ComplexMatrix> = (0..asm.num_settings()).map(|x| asm.marginal(x)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..marginals.len() {
        for j in (i + 1)..marginals.len() {
            worst = worst.max(marginals[i].max_abs_diff(&marginals[j]));
        }
    }
    NoSignallingReport {
        pass: worst <= tol,
        max_deviation: worst,
    }
}

/// A context (x, a) in which Bob's test (y, b) succeeds with certainty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictabilityRecord {
    pub x: usize,
    pub a: usize,
    pub y: usize,
    pub b: usize,
    pub probability: f64,
}

/// All (x, a, y, b) with p(a|x) > 0 and tr[E_{b|y} omega_{B|a,x}] >= 1 - eps.
pub fn scan_predictability(
    asm: &Assemblage,
    bob: &[Povm],
    eps: f64,
) -> Result<Vec<PredictabilityRecord>> {
    for povm in bob {
        if povm.dim() != asm.dim_b() {
            return Err(Error::DimensionMismatch {
                context: "Bob measurement",
                expected: asm.dim_b(),
                found: povm.dim(),
            });
        }
    }
    let mut out = Vec::new();
    for x in 0..asm.num_settings() {
        for a in 0..asm.num_outcomes(x) {
            let Some(omega) = asm.conditional_state(x, a) else {
                continue;
            };
            for (y, povm) in bob.iter().enumerate() {
                for (b, e) in povm.effects().iter().enumerate() {
                    let probability = e.expectation(&omega);
                    if probability >= 1.0 - eps {
                        out.push(PredictabilityRecord {
                            x,
                            a,
                            y,
                            b,
                            probability,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}
