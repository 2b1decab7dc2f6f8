//! Inner and outer polytope approximations of the Bloch ball.
//!
//! The inner polytope is the convex hull of unit vectors, so every point of it
//! is a valid qubit state. The outer polytope uses the same directions scaled
//! by `1 / h_min`, where `h_min` is the smallest facet distance of the inner
//! hull. Every supporting plane of the inner hull sits at distance at least
//! `h_min`, so the inner hull contains the ball of radius `h_min` and the
//! scaled hull contains the unit ball. `h_min = cos(theta)` with `theta` the
//! covering angle of the direction set.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type BlochVector = [f64; 3];

/// Mesh sizes shipped with the toolkit.
pub const STANDARD_MESH_SIZES: [usize; 4] = [12, 42, 162, 642];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeKind {
    Inner,
    Outer,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochPolytope {
    pub kind: PolytopeKind,
    /// Unit directions; the polytope vertices are `scale * direction`.
    pub directions: Vec<BlochVector>,
    pub scale: f64,
}

impl BlochPolytope {
    pub fn vertices(&self) -> impl Iterator<Item = BlochVector> + Clone + '_ {
        self.directions
            .iter()
            .map(move |d| [d[0] * self.scale, d[1] * self.scale, d[2] * self.scale])
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshInfo {
    pub vertices: usize,
    pub inflate: f64,
    pub covering_angle: f64,
}

/// Matched inner/outer polytopes over one direction set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshPair {
    pub inner: BlochPolytope,
    pub outer: BlochPolytope,
    pub covering_angle: f64,
}

impl MeshPair {
    pub fn fibonacci(n: usize) -> Result<Self> {
        Self::from_directions(fibonacci_sphere(n))
    }

    pub fn from_directions(directions: Vec<BlochVector>) -> Result<Self> {
        if directions.len() < 4 {
            return Err(Error::InvalidParameter(format!(
                "a Bloch mesh needs at least 4 directions, got {}",
                directions.len()
            )));
        }
        let directions: Vec<BlochVector> = directions.into_iter().map(normalize).collect();
        let h_min = min_facet_distance(&directions)?;
        if h_min <= 1e-9 {
            return Err(Error::InvalidParameter(
                "direction set does not surround the origin".into(),
            ));
        }
        // shave a little off so rounding in the facet distance cannot leave
        // a sliver of the ball outside
        let inflate = 1.0 / (h_min * (1.0 - 1e-12));
        Ok(Self {
            inner: BlochPolytope {
                kind: PolytopeKind::Inner,
                directions: directions.clone(),
                scale: 1.0,
            },
            outer: BlochPolytope {
                kind: PolytopeKind::Outer,
                directions,
                scale: inflate,
            },
            covering_angle: h_min.min(1.0).acos(),
        })
    }

    /// Applies a rotation (row-major 3x3) to every direction.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> Result<Self> {
        let dirs = self
            .inner
            .directions
            .iter()
            .map(|d| {
                [
                    r[0][0] * d[0] + r[0][1] * d[1] + r[0][2] * d[2],
                    r[1][0] * d[0] + r[1][1] * d[1] + r[1][2] * d[2],
                    r[2][0] * d[0] + r[2][1] * d[1] + r[2][2] * d[2],
                ]
            })
            .collect();
        Self::from_directions(dirs)
    }

    /// Union of two direction sets (duplicates removed).
    pub fn refined_with(&self, extra: &[BlochVector]) -> Result<Self> {
        let mut dirs = self.inner.directions.clone();
        for e in extra {
            let e = normalize(*e);
            if dirs.iter().all(|d| dist2(d, &e) > 1e-20) {
                dirs.push(e);
            }
        }
        Self::from_directions(dirs)
    }

    pub fn info(&self) -> MeshInfo {
        MeshInfo {
            vertices: self.inner.len(),
            inflate: self.outer.scale,
            covering_angle: self.covering_angle,
        }
    }
}

fn normalize(v: BlochVector) -> BlochVector {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn sub(a: &BlochVector, b: &BlochVector) -> BlochVector {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &BlochVector, b: &BlochVector) -> BlochVector {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: &BlochVector, b: &BlochVector) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dist2(a: &BlochVector, b: &BlochVector) -> f64 {
    let d = sub(a, b);
    dot(&d, &d)
}

/// `n` points spread over the sphere by the golden-angle spiral.
pub fn fibonacci_sphere(n: usize) -> Vec<BlochVector> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Unit outward normal of the triangle (a, b, c), oriented away from the origin.
fn facet_plane(p: &[BlochVector], a: usize, b: usize, c: usize) -> Option<(BlochVector, f64)> {
    let n = cross(&sub(&p[b], &p[a]), &sub(&p[c], &p[a]));
    let len = dot(&n, &n).sqrt();
    if len < 1e-14 {
        return None;
    }
    let n = [n[0] / len, n[1] / len, n[2] / len];
    Some((n, dot(&n, &p[a])))
}

fn is_supporting(p: &[BlochVector], a: usize, b: usize, c: usize) -> bool {
    match facet_plane(p, a, b, c) {
        Some((n, h)) => h > 0.0 && p.iter().all(|q| dot(&n, q) <= h + 1e-12),
        None => false,
    }
}

/// Smallest distance from the origin to a facet of the convex hull of
/// `points` (all assumed on the unit sphere), by gift wrapping.
pub fn min_facet_distance(points: &[BlochVector]) -> Result<f64> {
    let facets = hull_facets(points)?;
    let mut h_min = f64::INFINITY;
    for &(a, b, c) in &facets {
        let (n, h) = facet_plane(points, a, b, c)
            .ok_or_else(|| Error::Internal("degenerate hull facet".into()))?;
        let worst = points.iter().map(|q| dot(&n, q)).fold(f64::MIN, f64::max);
        if worst > h + 1e-9 {
            return Err(Error::Internal("hull facet is not supporting".into()));
        }
        h_min = h_min.min(h);
    }
    Ok(h_min)
}

/// Triangular facets of the hull, each oriented counter-clockwise seen from
/// outside.
pub fn hull_facets(points: &[BlochVector]) -> Result<Vec<(usize, usize, usize)>> {
    let n = points.len();
    let first = initial_facet(points)
        .ok_or_else(|| Error::InvalidParameter("could not find a hull facet".into()))?;
    let mut seen_faces: HashSet<[usize; 3]> = HashSet::new();
    let mut done_edges: HashSet<(usize, usize)> = HashSet::new();
    let mut facets = Vec::new();
    let mut queue = VecDeque::from([first]);
    let key = |f: (usize, usize, usize)| {
        let mut k = [f.0, f.1, f.2];
        k.sort_unstable();
        k
    };
    while let Some(f) = queue.pop_front() {
        if !seen_faces.insert(key(f)) {
            continue;
        }
        facets.push(f);
        let (a, b, c) = f;
        for (u, v) in [(a, b), (b, c), (c, a)] {
            if !done_edges.insert((u, v)) {
                continue;
            }
            // neighbour across edge (u, v) is (v, u, w)
            let mut w = (0..n).find(|&k| k != u && k != v).expect("n >= 4");
            for k in 0..n {
                if k == u || k == v || k == w {
                    continue;
                }
                if let Some((nrm, h)) = facet_plane(points, v, u, w) {
                    if dot(&nrm, &points[k]) > h + 1e-13 {
                        w = k;
                    }
                } else {
                    w = k;
                }
            }
            let g = (v, u, w);
            done_edges.insert((v, u));
            if !seen_faces.contains(&key(g)) {
                queue.push_back(g);
            }
        }
        if facets.len() > 4 * n {
            return Err(Error::Internal("gift wrapping did not terminate".into()));
        }
    }
    Ok(facets)
}

fn initial_facet(p: &[BlochVector]) -> Option<(usize, usize, usize)> {
    let n = p.len();
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by(|&i, &j| dist2(&p[0], &p[i]).total_cmp(&dist2(&p[0], &p[j])));
    for limit in [order.len().min(24), order.len()] {
        let near = &order[..limit];
        for (ii, &j) in near.iter().enumerate() {
            for &k in &near[ii + 1..] {
                if is_supporting(p, 0, j, k) {
                    return Some((0, j, k));
                }
                if is_supporting(p, 0, k, j) {
                    return Some((0, k, j));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn octahedron_facet_distance() {
        let dirs = vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        let facets = hull_facets(&dirs).unwrap();
        assert_eq!(facets.len(), 8);
        let h = min_facet_distance(&dirs).unwrap();
        assert!((h - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fibonacci_meshes_are_triangulated_and_cover_the_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in STANDARD_MESH_SIZES {
            let dirs = fibonacci_sphere(n);
            assert!(dirs.iter().all(|d| (dot(d, d) - 1.0).abs() < 1e-12));
            let facets = hull_facets(&dirs).unwrap();
            assert_eq!(facets.len(), 2 * n - 4, "Euler count for n = {n}");
            let mesh = MeshPair::fibonacci(n).unwrap();
            let h = 1.0 / mesh.outer.scale;
            // brute-force covering: every sampled direction is within the
            // covering angle of some vertex, and the inner hull contains the
            // ball of radius h along that direction
            for _ in 0..2000 {
                let u = crate::sampling::random_direction(&mut rng);
                let best = dirs.iter().map(|d| dot(d, &u)).fold(f64::MIN, f64::max);
                assert!(best >= h - 1e-9, "n = {n}");
            }
        }
        let angles: Vec<f64> = STANDARD_MESH_SIZES
            .iter()
            .map(|&n| MeshPair::fibonacci(n).unwrap().covering_angle)
            .collect();
        assert!(angles.windows(2).all(|w| w[1] < w[0]), "{angles:?}");
    }

    #[test]
    fn rotation_preserves_covering() {
        let mesh = MeshPair::fibonacci(42).unwrap();
        let (s, c) = (0.3f64.sin(), 0.3f64.cos());
        let rot = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        let r = mesh.rotated(&rot).unwrap();
        assert!((r.covering_angle - mesh.covering_angle).abs() < 1e-9);
    }

    #[test]
    fn tiny_direction_sets_are_rejected() {
        assert!(MeshPair::from_directions(vec![[1.0, 0.0, 0.0]; 3]).is_err());
        // all in one hemisphere: the hull misses the origin
        let cap: Vec<BlochVector> = fibonacci_sphere(40).into_iter().filter(|d| d[2] > 0.1).collect();
        assert!(MeshPair::from_directions(cap).is_err());
    }
}
