//! Oracles shared by the integration tests. They recompute everything from
//! raw matrices and do not call the engine's own verification code.
#![allow(dead_code)]

use num_complex::Complex64;
use steercert::boxworld::GptAssemblage;
use steercert::linalg::ComplexMatrix;
use steercert::quantum::{Assemblage, Povm, SharedState};
use steercert::scalar::Rational;
use steercert::steering::{LhsModel, SteeringWitness};

/// sigma_{a|x}[i][j] = sum_{k,l} M[l][k] rho[(k,i),(l,j)], by explicit index sums.
pub fn partial_trace_assemblage(state: &SharedState, povms: &[Povm]) -> Vec<Vec<ComplexMatrix>> {
    let (da, db) = (state.dim_a(), state.dim_b());
    let rho = state.rho().matrix();
    povms
        .iter()
        .map(|p| {
            p.effects()
                .iter()
                .map(|e| {
                    let m = e.matrix();
                    let mut out = ComplexMatrix::zeros(db, db);
                    for i in 0..db {
                        for j in 0..db {
                            let mut s = Complex64::new(0.0, 0.0);
                            for k in 0..da {
                                for l in 0..da {
                                    s += m[(l, k)] * rho[(k * db + i, l * db + j)];
                                }
                            }
                            out[(i, j)] = s;
                        }
                    }
                    out
                })
                .collect()
        })
        .collect()
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let mut m = 0.0f64;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

/// (tr M, tr XM, tr YM, tr ZM) written out by hand.
pub fn pauli_components(m: &ComplexMatrix) -> [f64; 4] {
    [
        (m[(0, 0)] + m[(1, 1)]).re,
        (m[(0, 1)] + m[(1, 0)]).re,
        (m[(1, 0)] - m[(0, 1)]).im,
        (m[(0, 0)] - m[(1, 1)]).re,
    ]
}

fn parse_row(label: &str) -> (usize, usize, String) {
    let mut it = label.split_whitespace();
    let x = it.next().unwrap().trim_start_matches("x=").parse().unwrap();
    let a = it.next().unwrap().trim_start_matches("a=").parse().unwrap();
    (x, a, it.collect::<Vec<_>>().join(" "))
}

/// For a full-target qubit witness: the functional evaluated on the
/// assemblage, and its exact maximum over all LHS assemblages (analytic over
/// the Bloch sphere, by enumeration over Alice strategies).
pub fn qubit_witness_oracle(w: &SteeringWitness<f64>, asm: &Assemblage) -> (f64, f64) {
    let nx = asm.num_settings();
    let mut f = vec![vec![[0.0f64; 4]; asm.max_outcomes()]; nx];
    let mut value = 0.0;
    for (label, c) in w.rows.iter().zip(&w.functional) {
        let (x, a, k) = parse_row(label);
        let k = ["I", "X", "Y", "Z"].iter().position(|n| *n == k).expect("full target rows");
        f[x][a][k] = *c;
        value += c * pauli_components(asm.sigma(x, a).matrix())[k];
    }
    let mut best = f64::NEG_INFINITY;
    let outcomes: Vec<usize> = (0..nx).map(|x| asm.num_outcomes(x)).collect();
    let total: usize = outcomes.iter().product();
    for mut code in 0..total {
        let mut acc = [0.0; 4];
        for x in 0..nx {
            let a = code % outcomes[x];
            code /= outcomes[x];
            for k in 0..4 {
                acc[k] += f[x][a][k];
            }
        }
        // state (I + v.sigma)/2 has components (1, v)
        let lhs = acc[0] + (acc[1] * acc[1] + acc[2] * acc[2] + acc[3] * acc[3]).sqrt();
        best = best.max(lhs);
    }
    (value, best)
}

/// Exact box-world witness check: value on the assemblage and the maximum
/// over every deterministic (Alice, Bob) assignment.
pub fn box_witness_oracle(w: &SteeringWitness<Rational>, asm: &GptAssemblage) -> (Rational, Rational) {
    let mut rows = Vec::new();
    for label in &w.rows {
        let mut it = label.split_whitespace().map(|t| t.split('=').nth(1).unwrap().parse::<usize>().unwrap());
        rows.push([it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]);
    }
    let value: Rational = rows
        .iter()
        .zip(&w.functional)
        .map(|(r, c)| c * asm.sigma(r[0], r[1], r[2], r[3]))
        .sum();
    let nx = asm.num_settings();
    let ny = asm.bob_inputs();
    let na = asm.max_outcomes();
    let nb = asm.bob_outputs();
    let mut best: Option<Rational> = None;
    for ac in 0..na.pow(nx as u32) {
        for bc in 0..nb.pow(ny as u32) {
            let alice = |x: usize| (ac / na.pow(x as u32)) % na;
            let bob = |y: usize| (bc / nb.pow(y as u32)) % nb;
            let v: Rational = rows
                .iter()
                .zip(&w.functional)
                .filter(|(r, _)| alice(r[0]) == r[1] && bob(r[2]) == r[3])
                .map(|(_, c)| c.clone())
                .sum();
            if best.as_ref().map_or(true, |b| v > *b) {
                best = Some(v);
            }
        }
    }
    (value, best.unwrap())
}

/// Rebuilds sigma_{a|x} from a qubit LHS model and returns the worst entry error.
pub fn model_residual(model: &LhsModel<[f64; 3], f64>, asm: &Assemblage) -> f64 {
    let mut worst = 0.0f64;
    for x in 0..asm.num_settings() {
        for a in 0..asm.num_outcomes(x) {
            let mut c = [0.0; 4];
            for t in model.terms.iter().filter(|t| t.strategy.responses[x] == a) {
                c[0] += t.weight;
                for k in 0..3 {
                    c[k + 1] += t.weight * t.hidden[k];
                }
            }
            let target = pauli_components(asm.sigma(x, a).matrix());
            for k in 0..4 {
                worst = worst.max((c[k] - target[k]).abs());
            }
        }
    }
    worst
}

/// Worst error of a qubit model on Bob's test statistics tr[E_{b|y} sigma_{a|x}].
pub fn model_test_residual(model: &LhsModel<[f64; 3], f64>, asm: &Assemblage, tests: &[Povm]) -> f64 {
    let mut worst = 0.0f64;
    for x in 0..asm.num_settings() {
        for a in 0..asm.num_outcomes(x) {
            let target = pauli_components(asm.sigma(x, a).matrix());
            for povm in tests {
                for e in povm.effects() {
                    let ec = pauli_components(e.matrix());
                    let want: f64 = (0..4).map(|k| ec[k] * target[k]).sum::<f64>() / 2.0;
                    let got: f64 = model
                        .terms
                        .iter()
                        .filter(|t| t.strategy.responses[x] == a)
                        .map(|t| t.weight * (ec[0] + ec[1] * t.hidden[0] + ec[2] * t.hidden[1] + ec[3] * t.hidden[2]) / 2.0)
                        .sum();
                    worst = worst.max((want - got).abs());
                }
            }
        }
    }
    worst
}
