//! Threshold location by bisection on feasibility verdicts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::Status;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub p: f64,
    pub status: Status,
}

/// `feasible_max` is the largest parameter certified Feasible and
/// `infeasible_min` the smallest certified Infeasible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdBracket {
    pub feasible_max: Option<f64>,
    pub infeasible_min: Option<f64>,
    pub evaluations: Vec<ScanPoint>,
    pub mesh_vertices: Option<usize>,
}

impl ThresholdBracket {
    pub fn width(&self) -> Option<f64> {
        Some(self.infeasible_min? - self.feasible_max?)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.feasible_max.map_or(true, |f| f <= p) && self.infeasible_min.map_or(true, |i| p <= i)
    }

    pub fn with_mesh(mut self, vertices: usize) -> Self {
        self.mesh_vertices = Some(vertices);
        self
    }
}

/// Bisects a family assumed Feasible below and Infeasible above some
/// threshold.
///
/// An Undecided probe splits the search: one bisection tracks the upper edge
/// of the Feasible region, another the lower edge of the Infeasible region.
/// Any Feasible probe above an Infeasible one aborts with `NonMonotone`.
pub fn threshold_scan<F>(mut check: F, lo: f64, hi: f64, tol: f64) -> Result<ThresholdBracket>
where
    F: FnMut(f64) -> Result<Status>,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scan needs lo < hi and tol > 0 (got {lo}, {hi}, {tol})"
        )));
    }
    let mut evaluations = Vec::new();
    let mut eval = |p: f64, evaluations: &mut Vec<ScanPoint>| -> Result<Status> {
        let status = check(p)?;
        evaluations.push(ScanPoint { p, status });
        log::debug!("scan p = {p:.6}: {status}");
        Ok(status)
    };

    let s_lo = eval(lo, &mut evaluations)?;
    let s_hi = eval(hi, &mut evaluations)?;
    let (mut fmax, mut imin) = (None, None);
    if s_lo == Status::Feasible {
        fmax = Some(lo);
    }
    if s_hi == Status::Infeasible {
        imin = Some(hi);
    }
    if s_hi == Status::Feasible {
        fmax = Some(hi);
    }
    if s_lo == Status::Infeasible {
        imin = Some(lo);
    }
    check_monotone(&evaluations)?;

    if s_hi != Status::Feasible && s_lo != Status::Infeasible {
        // invariant: a is Feasible-or-lo, b is not Feasible
        let (mut a, mut b) = (lo, hi);
        let mut split = None;
        while b - a > tol {
            let mid = 0.5 * (a + b);
            match eval(mid, &mut evaluations)? {
                Status::Feasible => {
                    a = mid;
                    fmax = Some(mid);
                }
                Status::Infeasible => {
                    b = mid;
                    imin = Some(mid);
                }
                Status::Undecided => {
                    split = Some(mid);
                    break;
                }
            }
        }
        if let Some(u) = split {
            // lower edge: [a, u], u is not Feasible
            let (mut l, mut r) = (a, u);
            while r - l > tol {
                let mid = 0.5 * (l + r);
                if eval(mid, &mut evaluations)? == Status::Feasible {
                    l = mid;
                    fmax = Some(mid);
                } else {
                    r = mid;
                }
            }
            // upper edge: [u, b], u is not Infeasible
            let (mut l, mut r) = (u, b);
            while r - l > tol {
                let mid = 0.5 * (l + r);
                if eval(mid, &mut evaluations)? == Status::Infeasible {
                    r = mid;
                    imin = Some(mid);
                } else {
                    l = mid;
                }
            }
        }
        check_monotone(&evaluations)?;
    }

    Ok(ThresholdBracket {
        feasible_max: fmax,
        infeasible_min: imin,
        evaluations,
        mesh_vertices: None,
    })
}

fn check_monotone(points: &[ScanPoint]) -> Result<()> {
    let lowest_infeasible = points
        .iter()
        .filter(|s| s.status == Status::Infeasible)
        .map(|s| s.p)
        .fold(f64::INFINITY, f64::min);
    if let Some(f) = points
        .iter()
        .filter(|s| s.status == Status::Feasible && s.p > lowest_infeasible)
        .map(|s| s.p)
        .reduce(f64::max)
    {
        return Err(Error::NonMonotone {
            feasible_at: f,
            infeasible_at: lowest_infeasible,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(t: f64, band: f64) -> impl FnMut(f64) -> Result<Status> {
        move |p| {
            Ok(if p <= t {
                Status::Feasible
            } else if p <= t + band {
                Status::Undecided
            } else {
                Status::Infeasible
            })
        }
    }

    #[test]
    fn sharp_step() {
        let b = threshold_scan(step(0.3, 0.0), 0.0, 1.0, 1e-6).unwrap();
        assert!(b.contains(0.3));
        assert!(b.width().unwrap() <= 1e-6);
    }

    #[test]
    fn undecided_band_brackets_both_edges() {
        let b = threshold_scan(step(0.6, 0.05), 0.0, 1.0, 1e-4).unwrap();
        let (f, i) = (b.feasible_max.unwrap(), b.infeasible_min.unwrap());
        assert!(f <= 0.6 && 0.6 - f <= 1e-4, "{f}");
        assert!(i > 0.65 && i - 0.65 <= 1e-4, "{i}");
    }

    #[test]
    fn constant_families() {
        let b = threshold_scan(|_| Ok(Status::Feasible), 0.0, 1.0, 1e-3).unwrap();
        assert_eq!((b.feasible_max, b.infeasible_min), (Some(1.0), None));
        let b = threshold_scan(|_| Ok(Status::Infeasible), 0.0, 1.0, 1e-3).unwrap();
        assert_eq!((b.feasible_max, b.infeasible_min), (None, Some(0.0)));
        let b = threshold_scan(|_| Ok(Status::Undecided), 0.0, 1.0, 1e-3).unwrap();
        assert_eq!((b.feasible_max, b.infeasible_min), (None, None));
    }

    #[test]
    fn reversed_family_is_reported() {
        let r = threshold_scan(|p| Ok(if p < 0.5 { Status::Infeasible } else { Status::Feasible }), 0.0, 1.0, 1e-3);
        assert!(matches!(r, Err(Error::NonMonotone { .. })));
        // Infeasible pocket below the Undecided probe, Feasible pocket above it
        let r = threshold_scan(
            |p| {
                Ok(match p {
                    p if p < 0.3 => Status::Feasible,
                    p if p < 0.4 => Status::Infeasible,
                    p if p < 0.6 => Status::Undecided,
                    p if p < 0.7 => Status::Feasible,
                    _ => Status::Infeasible,
                })
            },
            0.0,
            1.0,
            1e-3,
        );
        assert!(matches!(r, Err(Error::NonMonotone { .. })), "{r:?}");
    }

    #[test]
    fn bad_arguments() {
        assert!(threshold_scan(|_| Ok(Status::Feasible), 1.0, 0.0, 1e-3).is_err());
        assert!(threshold_scan(|_| Ok(Status::Feasible), 0.0, 1.0, 0.0).is_err());
    }
}
