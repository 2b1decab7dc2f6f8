//! Dense complex matrices for the small dimensions used throughout the crate
//! (Bob is a qubit, bipartite operators are at most 8x8).
//!
//! Eigenvalues of Hermitian matrices come from a cyclic Jacobi sweep on the
//! real symmetric embedding `[[Re, -Im], [Im, Re]]`, which carries every
//! eigenvalue of the complex matrix twice.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Max-norm tolerance for treating a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Default slack on the smallest eigenvalue in PSD checks.
pub const PSD_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: r,
            cols,
            data,
        })
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, entries.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = c(x, 0.0);
        }
        m
    }

    /// Outer product |u><v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.cols.max(1)).map(<[C64]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(m)
    }

    /// tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::DimensionMismatch {
                context: "trace of product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }

    /// Kronecker product; entry ((i,k),(j,l)) is a[i,j] * b[k,l].
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut m = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    fn check_bipartite(&self, dim_a: usize, dim_b: usize) -> Result<()> {
        let n = dim_a * dim_b;
        if !self.is_square() || self.rows != n {
            return Err(Error::DimensionMismatch {
                context: "bipartite operator",
                expected: n,
                found: self.rows.max(self.cols),
            });
        }
        Ok(())
    }

    /// Traces out the first tensor factor of an operator on C^dim_a (x) C^dim_b.
    pub fn partial_trace_a(&self, dim_a: usize, dim_b: usize) -> Result<Self> {
        self.check_bipartite(dim_a, dim_b)?;
        let mut m = Self::zeros(dim_b, dim_b);
        for i in 0..dim_a {
            for k in 0..dim_b {
                for l in 0..dim_b {
                    m[(k, l)] += self[(i * dim_b + k, i * dim_b + l)];
                }
            }
        }
        Ok(m)
    }

    /// Traces out the second tensor factor.
    pub fn partial_trace_b(&self, dim_a: usize, dim_b: usize) -> Result<Self> {
        self.check_bipartite(dim_a, dim_b)?;
        let mut m = Self::zeros(dim_a, dim_a);
        for i in 0..dim_a {
            for j in 0..dim_a {
                for k in 0..dim_b {
                    m[(i, j)] += self[(i * dim_b + k, j * dim_b + k)];
                }
            }
        }
        Ok(m)
    }

    /// Real symmetric embedding [[Re, -Im], [Im, Re]] of a square matrix.
    fn real_embedding(&self) -> Vec<Vec<f64>> {
        let n = self.rows;
        let mut out = vec![vec![0.0; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                out[i][j] = z.re;
                out[i + n][j + n] = z.re;
                out[i][j + n] = -z.im;
                out[i + n][j] = z.im;
            }
        }
        // symmetrize away rounding noise
        for i in 0..2 * n {
            for j in (i + 1)..2 * n {
                let avg = 0.5 * (out[i][j] + out[j][i]);
                out[i][j] = avg;
                out[j][i] = avg;
            }
        }
        out
    }

    /// Ascending eigenvalues of a Hermitian matrix.
    pub fn eigvalsh(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let (vals, _) = jacobi_symmetric(self.real_embedding());
        let mut vals: Vec<f64> = vals;
        vals.sort_by(f64::total_cmp);
        // every eigenvalue appears twice in the embedding
        Ok(vals.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
    }

    /// Applies a real function to the spectrum of a Hermitian matrix.
    pub fn hermitian_fn(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        self.require_hermitian()?;
        let n = self.rows;
        let (vals, vecs) = jacobi_symmetric(self.real_embedding());
        let fvals: Vec<f64> = vals.iter().map(|&v| f(v)).collect();
        let mut out = Self::zeros(n, n);
        // f(embedding) is the embedding of f(M): read Re from the top-left
        // block and Im from the bottom-left block.
        for i in 0..n {
            for j in 0..n {
                let mut re = 0.0;
                let mut im = 0.0;
                for (k, fv) in fvals.iter().enumerate() {
                    re += vecs[i][k] * fv * vecs[j][k];
                    im += vecs[i + n][k] * fv * vecs[j][k];
                }
                out[(i, j)] = c(re, im);
            }
        }
        Ok(out)
    }

    /// Principal square root of a PSD matrix (negative rounding noise clamped).
    pub fn sqrt_psd(&self) -> Result<Self> {
        self.hermitian_fn(|v| v.max(0.0).sqrt())
    }

    fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// `true` iff the smallest eigenvalue is at least `-tol`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigvalsh()?.first().copied().unwrap_or(0.0))
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// A matrix validated as Hermitian within [`HERMITICITY_TOL`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.require_hermitian()?;
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.0.eigvalsh().expect("validated Hermitian")
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Real part of tr(self * other); exact for Hermitian pairs.
    pub fn expectation(&self, other: &HermitianMatrix) -> f64 {
        self.0.trace_product(&other.0).map(|z| z.re).unwrap_or(f64::NAN)
    }
}

impl TryFrom<ComplexMatrix> for HermitianMatrix {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<HermitianMatrix> for ComplexMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.0
    }
}

pub fn psd_check(m: &HermitianMatrix, tol: f64) -> bool {
    m.eigenvalues().first().map_or(true, |&v| v >= -tol)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn partial_trace_a(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    m.partial_trace_a(dim_a, dim_b)
}

/// Cyclic Jacobi on a real symmetric matrix. Returns eigenvalues and the
/// eigenvector matrix with eigenvectors in columns.
pub fn jacobi_symmetric(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = cs * vkp - sn * vkq;
                    row[q] = sn * vkp + cs * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Pauli matrices and helpers for qubit work.
pub mod pauli {
    use super::{c, ComplexMatrix};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
            .unwrap()
    }

    /// n . sigma for a real 3-vector n.
    pub fn along(n: [f64; 3]) -> ComplexMatrix {
        ComplexMatrix::from_vec(
            2,
            2,
            vec![c(n[2], 0.0), c(n[0], -n[1]), c(n[0], n[1]), c(-n[2], 0.0)],
        )
        .unwrap()
    }

    /// (I + r . sigma) / 2, a valid state when |r| <= 1.
    pub fn bloch_state(r: [f64; 3]) -> ComplexMatrix {
        &identity().scale_real(0.5) + &along(r).scale_real(0.5)
    }

    /// Components (tr M, tr XM, tr YM, tr ZM) of a 2x2 Hermitian matrix.
    pub fn components(m: &ComplexMatrix) -> [f64; 4] {
        let a = m[(0, 0)];
        let b = m[(0, 1)];
        let cc = m[(1, 0)];
        let d = m[(1, 1)];
        [
            (a + d).re,
            (b + cc).re,
            // tr(Y M) = i (M01 - M10)
            (-(b - cc).im),
            (a - d).re,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kron_oracle(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for k in 0..b.rows() {
                    for l in 0..b.cols() {
                        let row = i * b.rows() + k;
                        let col = j * b.cols() + l;
                        m[(row, col)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        m
    }

    fn ptrace_oracle(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
        // sum_i (<i| (x) I) m (|i> (x) I) with explicit basis vectors
        let mut out = ComplexMatrix::zeros(db, db);
        for i in 0..da {
            let mut proj = ComplexMatrix::zeros(db, da * db);
            for k in 0..db {
                proj[(k, i * db + k)] = c(1.0, 0.0);
            }
            let term = &(&proj * m) * &proj.adjoint();
            out = &out + &term;
        }
        out
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
            ComplexMatrix::from_vec(n, n, v.into_iter().map(|(r, i)| c(r, i)).collect()).unwrap()
        })
    }

    fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
        (m + &m.adjoint()).scale_real(0.5)
    }

    #[test]
    fn kron_identity_and_projector() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
        let p = ComplexMatrix::diag(&[1.0, 0.0]);
        assert_eq!(p.kron(&i2), ComplexMatrix::diag(&[1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_pauli_matches_index_expansion() {
        let got = pauli::x().kron(&pauli::z());
        assert_eq!(got, kron_oracle(&pauli::x(), &pauli::z()));
        // X (x) Z has +1 at (0,2), -1 at (1,3)
        assert_eq!(got[(0, 2)], c(1.0, 0.0));
        assert_eq!(got[(1, 3)], c(-1.0, 0.0));
    }

    #[test]
    fn partial_trace_of_singlet_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)];
        let rho = ComplexMatrix::outer(&psi, &psi);
        let red = rho.partial_trace_a(2, 2).unwrap();
        assert!(red.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            m.partial_trace_a(3, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psd_examples() {
        let half = HermitianMatrix::new(ComplexMatrix::identity(2).scale_real(0.5)).unwrap();
        assert!(psd_check(&half, PSD_TOL));
        let neg = HermitianMatrix::new(ComplexMatrix::diag(&[1.0, -0.01])).unwrap();
        assert!(!psd_check(&neg, 1e-9));
        assert!(matches!(
            HermitianMatrix::new(pauli::x().scale(c(0.0, 1.0))),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn pauli_components_round_trip() {
        let r = [0.3, -0.2, 0.5];
        let comps = pauli::components(&pauli::bloch_state(r));
        assert!((comps[0] - 1.0).abs() < 1e-15);
        for k in 0..3 {
            assert!((comps[k + 1] - r[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let m = ComplexMatrix::from_vec(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(0.5, 0.3),
                c(0.0, -0.2),
                c(0.5, -0.3),
                c(1.0, 0.0),
                c(0.1, 0.0),
                c(0.0, 0.2),
                c(0.1, 0.0),
                c(0.7, 0.0),
            ],
        )
        .unwrap();
        let r = m.sqrt_psd().unwrap();
        assert!((&r * &r).max_abs_diff(&m) < 1e-12);
        assert!(r.is_hermitian(1e-12));
    }

    proptest! {
        #[test]
        fn adjoint_is_an_involution(m in arb_matrix(3)) {
            prop_assert_eq!(m.adjoint().adjoint(), m);
        }

        #[test]
        fn trace_of_kron_factorizes(a in arb_matrix(2), b in arb_matrix(3)) {
            let lhs = a.kron(&b).trace();
            let rhs = a.trace() * b.trace();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn partial_trace_of_kron(a in arb_matrix(2), b in arb_matrix(2)) {
            let got = a.kron(&b).partial_trace_a(2, 2).unwrap();
            let want = b.scale(a.trace());
            prop_assert!(got.max_abs_diff(&want) <= 1e-12);
        }

        #[test]
        fn partial_trace_matches_index_sum(m in arb_matrix(4)) {
            let h = hermitian_part(&m);
            let got = h.partial_trace_a(2, 2).unwrap();
            prop_assert!(got.max_abs_diff(&ptrace_oracle(&h, 2, 2)) <= 1e-14);
            prop_assert!((got.trace() - h.trace()).norm() <= 1e-14);
        }

        #[test]
        fn jacobi_matches_closed_form_2x2(m in arb_matrix(2)) {
            let h = hermitian_part(&m);
            let tr = h.trace().re;
            let det = (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).re;
            let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
            let vals = h.eigvalsh().unwrap();
            prop_assert!((vals[0] - (tr - disc) / 2.0).abs() <= 1e-12);
            prop_assert!((vals[1] - (tr + disc) / 2.0).abs() <= 1e-12);
        }

        #[test]
        fn gram_matrices_are_psd(m in arb_matrix(4)) {
            let g = HermitianMatrix::new(&m * &m.adjoint()).unwrap();
            prop_assert!(psd_check(&g, PSD_TOL));
        }
    }
}
