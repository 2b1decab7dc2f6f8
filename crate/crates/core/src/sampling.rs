//! Seeded random states, measurements and Kraus decompositions for property
//! checks and randomized suites.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{c, ComplexMatrix, C64};
use crate::quantum::{DensityMatrix, Instrument, Povm, SharedState};

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("sized buffer")
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

/// Uniform point on the unit sphere.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-9 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Uniform rotation of R^3 (row-major), from a uniform unit quaternion.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> [[f64; 3]; 3] {
    let q: [f64; 4] = loop {
        let q: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-9 {
            break q.map(|v| v / n);
        }
    };
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

/// Full-rank mixed state from a normalized Gram matrix.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, dim, dim);
    let gram = hermitize(&(&g * &g.adjoint()));
    let t = gram.trace().re;
    DensityMatrix::new(gram.scale_real(1.0 / t)).expect("Gram matrices are states")
}

pub fn random_shared_state<R: Rng + ?Sized>(rng: &mut R, dim_a: usize, dim_b: usize) -> SharedState {
    SharedState::new(random_density(rng, dim_a * dim_b), dim_a, dim_b).expect("dims match")
}

/// POVM with `outcomes` effects S^{-1/2} A_k S^{-1/2} from random PSD A_k.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, dim: usize, outcomes: usize) -> Povm {
    let parts: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let g = gaussian_matrix(rng, dim, dim);
            hermitize(&(&g * &g.adjoint()))
        })
        .collect();
    let total = parts
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, p| &acc + p);
    let inv_sqrt = total
        .hermitian_fn(|v| 1.0 / v.sqrt())
        .expect("sum of Gram matrices is Hermitian");
    let effects = parts
        .iter()
        .map(|p| hermitize(&(&(&inv_sqrt * p) * &inv_sqrt)))
        .collect();
    Povm::new("random", effects).expect("normalized effects")
}

/// Haar-ish unitary by Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(ui, vi)| ui.conj() * vi).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

/// Kraus operators K_{a,mu} = sqrt(t_mu) U_mu sqrt(M_a) with random weights
/// t (summing to 1) and random unitaries, so that sum_mu K^dagger K = M_a.
pub fn random_kraus_decomposition<R: Rng + ?Sized>(
    rng: &mut R,
    povm: &Povm,
    terms: usize,
) -> Result<Instrument> {
    let dim = povm.dim();
    let mut sets = Vec::with_capacity(povm.num_outcomes());
    for e in povm.effects() {
        let root = e.matrix().sqrt_psd()?;
        let raw: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let set = raw
            .iter()
            .map(|t| (&random_unitary(rng, dim) * &root).scale_real((t / total).sqrt()))
            .collect();
        sets.push(set);
    }
    Instrument::new(format!("{} (random Kraus)", povm.label()), sets)
}
