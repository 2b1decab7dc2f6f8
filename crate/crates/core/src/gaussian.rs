//! Two-mode Gaussian states and the Reid inferred-variance criterion.
//!
//! Quadrature order is `(x_A, p_A, x_B, p_B)` and the vacuum variance is 1/2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix};

pub const BONA_FIDE_TOL: f64 = 1e-9;
const SYMMETRY_TOL: f64 = 1e-12;

/// Standard symplectic form for two modes.
pub fn omega() -> [[f64; 4]; 4] {
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix {
    entries: [[f64; 4]; 4],
}

impl CovarianceMatrix {
    /// Checks symmetry and `V + (i/2) Omega >= 0`.
    pub fn new(entries: [[f64; 4]; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                if (entries[i][j] - entries[j][i]).abs() > SYMMETRY_TOL || !entries[i][j].is_finite() {
                    return Err(Error::InvalidParameter("covariance matrix is not symmetric".into()));
                }
            }
        }
        let cm = Self { entries };
        let min = cm.uncertainty_matrix().min_eigenvalue()?;
        if min < -BONA_FIDE_TOL {
            return Err(Error::NotPsd {
                what: "V + (i/2) Omega".into(),
                min_eigenvalue: min,
            });
        }
        Ok(cm)
    }

    pub fn vacuum() -> Self {
        Self::thermal(0.5)
    }

    /// Uncorrelated modes with variance `v` on every quadrature (`v >= 1/2`).
    pub fn thermal(v: f64) -> Self {
        let mut e = [[0.0; 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = v;
        }
        Self { entries: e }
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    fn uncertainty_matrix(&self) -> ComplexMatrix {
        let w = omega();
        let mut m = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = c(self.entries[i][j], 0.5 * w[i][j]);
            }
        }
        m
    }

    /// Both modes sent through a beam splitter of transmissivity `eta`
    /// with vacuum in the other port.
    pub fn with_symmetric_loss(&self, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter(format!("transmissivity {eta} outside [0, 1]")));
        }
        let mut e = self.entries;
        for (i, row) in e.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v *= eta;
                if i == j {
                    *v += 0.5 * (1.0 - eta);
                }
            }
        }
        Self::new(e)
    }

    /// Symplectic eigenvalues `nu_- <= nu_+`: the positive eigenvalues of
    /// the Hermitian matrix `V^{1/2} (i Omega) V^{1/2}`.
    pub fn symplectic_eigenvalues(&self) -> Result<[f64; 2]> {
        let om = omega();
        let mut v = ComplexMatrix::zeros(4, 4);
        let mut w = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                v[(i, j)] = c(self.entries[i][j], 0.0);
                w[(i, j)] = c(0.0, om[i][j]);
            }
        }
        let s = v.sqrt_psd()?;
        let h = s.matmul(&w)?.matmul(&s)?;
        let ev = h.eigvalsh()?;
        // ascending: -nu_+, -nu_-, nu_-, nu_+
        Ok([ev[2], ev[3]])
    }
}

#[cfg(test)]
fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for k in col..4 {
                a[r][k] -= f * a[col][k];
            }
        }
    }
    det
}

/// Two-mode squeezed vacuum with squeezing parameter `r`.
pub fn tmsv_covariance(r: f64) -> Result<CovarianceMatrix> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing parameter {r} must be >= 0")));
    }
    let a = (2.0 * r).cosh() / 2.0;
    let s = (2.0 * r).sinh() / 2.0;
    CovarianceMatrix::new([
        [a, 0.0, s, 0.0],
        [0.0, a, 0.0, -s],
        [s, 0.0, a, 0.0],
        [0.0, -s, 0.0, a],
    ])
}

/// Conditional variances of Bob's quadratures given the optimal linear
/// estimate from Alice's matching quadrature.
pub fn inferred_variances(cm: &CovarianceMatrix) -> (f64, f64) {
    let e = cm.entries();
    let infer = |a: usize, b: usize, name: &str| {
        if e[a][a] <= f64::MIN_POSITIVE {
            log::warn!("Alice's {name} variance vanishes; reporting Bob's unconditioned variance");
            e[b][b]
        } else {
            e[b][b] - e[a][b] * e[a][b] / e[a][a]
        }
    };
    (infer(0, 2, "x"), infer(1, 3, "p"))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReidOutcome {
    pub steering: bool,
    /// `Delta_inf x * Delta_inf p`.
    pub product: f64,
}

/// Steering iff `sqrt(var_x) sqrt(var_p) < 1/2`.
pub fn reid_check(var_x: f64, var_p: f64) -> Result<ReidOutcome> {
    if !(var_x >= 0.0 && var_p >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "variances must be nonnegative (got {var_x}, {var_p})"
        )));
    }
    let product = var_x.sqrt() * var_p.sqrt();
    Ok(ReidOutcome { steering: product < 0.5, product })
}

/// One row of a squeezing sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReidRow {
    pub r: f64,
    pub var_x_inf: f64,
    pub var_p_inf: f64,
    pub product: f64,
    pub steering_flag: bool,
}

pub fn reid_row(r: f64) -> Result<ReidRow> {
    let (vx, vp) = inferred_variances(&tmsv_covariance(r)?);
    let out = reid_check(vx, vp)?;
    Ok(ReidRow {
        r,
        var_x_inf: vx,
        var_p_inf: vp,
        product: out.product,
        steering_flag: out.steering,
    })
}

/// Rows for `r = start, start + step, ...` up to `stop` inclusive.
pub fn reid_sweep(start: f64, stop: f64, step: f64) -> Result<Vec<ReidRow>> {
    if !(step > 0.0) || !(stop >= start) {
        return Err(Error::InvalidParameter(format!(
            "sweep needs step > 0 and stop >= start (got {start}..{stop} step {step})"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| reid_row(start + k as f64 * step)).collect()
}
