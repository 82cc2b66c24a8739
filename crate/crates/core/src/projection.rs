//! From sampled curves on S³ to planar link diagrams: stereographic projection and a
//! seeded search for a generic projection direction.

use crate::diagram::{Diagram, DiagramGeometry, Passage};
use crate::error::{Error, Result};
use crate::geom::{segment_intersection, SegmentGrid, Vec2};
use crate::lift::{LinkSamples, Point4};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default seed: the ASCII bytes of `D1V1DE` read as a big-endian integer.
pub const DEFAULT_SEED: u64 = 0x4431_5631_4445;

pub type Point3 = [f64; 3];

const POLE_CANDIDATES: usize = 64;
const POLE_CLEARANCE: [f64; 2] = [0.05, 0.02];
const DIRECTIONS: usize = 256;
const DIRECTION_JITTER: f64 = 1e-3;
const MIN_SEPARATION: f64 = 1e-6;
const MIN_CROSSING_SIN: f64 = 1e-3;

fn dot4(a: &Point4, b: &Point4) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn det4(m: [Point4; 4]) -> f64 {
    let minor = |r: usize, c: usize| -> f64 {
        let rows: Vec<usize> = (0..4).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..4).filter(|&j| j != c).collect();
        let a = |i: usize, j: usize| m[rows[i]][cols[j]];
        a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
            + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
    };
    (0..4).map(|c| if c % 2 == 0 { 1.0 } else { -1.0 } * m[0][c] * minor(0, c)).sum()
}

/// Stereographic projection of S³ from a pole onto the orthogonal hyperplane.
#[derive(Clone, Debug, PartialEq)]
pub struct Stereo {
    pub pole: Point4,
    /// Orthonormal basis of the hyperplane orthogonal to the pole.
    pub basis: [Point4; 3],
    pub clearance: f64,
}

impl Stereo {
    /// Builds the projection with an oriented basis: `det(p, b₁, b₂, b₃) > 0` in
    /// `(x₁, x₂, u₁, u₂)` coordinates.
    pub fn new(pole: Point4, clearance: f64) -> Self {
        let mut axes: Vec<usize> = (0..4).collect();
        axes.sort_by(|&a, &b| pole[a].abs().partial_cmp(&pole[b].abs()).unwrap());
        let mut basis: Vec<Point4> = Vec::new();
        for &ax in &axes[..3] {
            let mut v = [0.0; 4];
            v[ax] = 1.0;
            for w in std::iter::once(&pole).chain(basis.iter()) {
                let c = dot4(&v, w);
                for i in 0..4 {
                    v[i] -= c * w[i];
                }
            }
            let n = dot4(&v, &v).sqrt();
            basis.push(v.map(|x| x / n));
        }
        let mut basis = [basis[0], basis[1], basis[2]];
        if det4([pole, basis[0], basis[1], basis[2]]) < 0.0 {
            basis[2] = basis[2].map(|x| -x);
        }
        Stereo { pole, basis, clearance }
    }

    pub fn project(&self, q: &Point4) -> Point3 {
        let s = 1.0 - dot4(q, &self.pole);
        [dot4(q, &self.basis[0]) / s, dot4(q, &self.basis[1]) / s, dot4(q, &self.basis[2]) / s]
    }

    pub fn unproject(&self, y: &Point3) -> Point4 {
        let n2 = y.iter().map(|v| v * v).sum::<f64>();
        let mut q = self.pole.map(|p| p * (n2 - 1.0));
        for (k, b) in self.basis.iter().enumerate() {
            for i in 0..4 {
                q[i] += 2.0 * y[k] * b[i];
            }
        }
        q.map(|x| x / (n2 + 1.0))
    }
}

/// Picks the candidate pole farthest from the samples.
pub fn choose_pole(l: &LinkSamples, seed: u64) -> Result<Stereo> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = Vec::with_capacity(POLE_CANDIDATES);
    while candidates.len() < POLE_CANDIDATES {
        let v: Point4 = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = dot4(&v, &v).sqrt();
        if n > 1e-3 && n <= 1.0 {
            candidates.push(v.map(|x| x / n));
        }
    }
    let mut best = (f64::NEG_INFINITY, candidates[0]);
    for p in candidates {
        let clearance = l
            .components
            .iter()
            .flatten()
            .map(|q| {
                let d: f64 = q.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum();
                d.sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        if clearance > best.0 {
            best = (clearance, p);
        }
    }
    for tol in POLE_CLEARANCE {
        if best.0 > tol {
            return Ok(Stereo::new(best.1, best.0));
        }
    }
    Err(Error::NoPole(best.0))
}

/// Projects every component of `l` to R³.
pub fn stereographic_project(l: &LinkSamples, seed: u64) -> Result<(Stereo, Vec<Vec<Point3>>)> {
    let st = choose_pole(l, seed)?;
    let curves = l.components.iter().map(|c| c.iter().map(|q| st.project(q)).collect()).collect();
    Ok((st, curves))
}

fn fibonacci_directions(n: usize) -> Vec<Point3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn cross3(a: Point3, b: Point3) -> Point3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn normalize3(a: Point3) -> Point3 {
    let n = dot3(a, a).sqrt();
    a.map(|x| x / n)
}

/// Right-handed frame `(e₁, e₂, d)`.
fn frame(d: Point3) -> (Point3, Point3, Point3) {
    let d = normalize3(d);
    let helper = if d[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normalize3(cross3(helper, d));
    let e2 = cross3(d, e1);
    (e1, e2, d)
}

struct RawCrossing {
    /// (component, segment, segment parameter) of both strands.
    strands: [(usize, usize, f64); 2],
    point: Vec2,
    sign: i8,
    over_first: bool,
}

/// Diagram seen along direction `dir`, or `None` if the projection is not generic.
pub fn diagram_along(curves: &[Vec<Point3>], dir: Point3) -> Option<Diagram> {
    let (e1, e2, d) = frame(dir);
    let planar: Vec<Vec<Vec2>> = curves
        .iter()
        .map(|c| c.iter().map(|&p| Vec2::new(dot3(p, e1), dot3(p, e2))).collect())
        .collect();
    let depth: Vec<Vec<f64>> = curves.iter().map(|c| c.iter().map(|&p| dot3(p, d)).collect()).collect();
    let mut segs = Vec::new();
    let mut owner = Vec::new();
    for (k, c) in planar.iter().enumerate() {
        for i in 0..c.len() - 1 {
            segs.push((c[i], c[i + 1]));
            owner.push((k, i));
        }
    }
    let grid = SegmentGrid::new(&segs);
    let mut raw: Vec<RawCrossing> = Vec::new();
    for (a, b) in grid.candidate_pairs(&segs) {
        let ((ka, ia), (kb, ib)) = (owner[a], owner[b]);
        if ka == kb {
            let n = planar[ka].len() - 1;
            if ia.abs_diff(ib) <= 1 || ia.abs_diff(ib) == n - 1 {
                continue;
            }
        }
        let (p, q) = segs[a];
        let (r, s) = segs[b];
        let Some((sa, sb)) = segment_intersection(p, q, r, s, (false, false)) else { continue };
        let (va, vb) = ((q - p).normalized(), (s - r).normalized());
        if va.cross(vb).abs() < MIN_CROSSING_SIN {
            return None;
        }
        let za = depth[ka][ia] + (depth[ka][ia + 1] - depth[ka][ia]) * sa;
        let zb = depth[kb][ib] + (depth[kb][ib + 1] - depth[kb][ib]) * sb;
        if (za - zb).abs() < MIN_SEPARATION {
            return None;
        }
        let over_first = za > zb;
        let (vo, vu) = if over_first { (va, vb) } else { (vb, va) };
        raw.push(RawCrossing {
            strands: [(ka, ia, sa), (kb, ib, sb)],
            point: p.lerp(q, sa),
            sign: if vo.cross(vu) > 0.0 { 1 } else { -1 },
            over_first,
        });
    }
    for (i, x) in raw.iter().enumerate() {
        for y in &raw[i + 1..] {
            if x.point.dist(y.point) < MIN_SEPARATION {
                return None;
            }
        }
    }
    // passages along each component in curve order
    let mut along: Vec<Vec<(usize, f64, usize, bool)>> = vec![Vec::new(); curves.len()];
    for (ci, x) in raw.iter().enumerate() {
        for (k, &(comp, seg, t)) in x.strands.iter().enumerate() {
            let over = (k == 0) == x.over_first;
            along[comp].push((seg, t, ci, over));
        }
    }
    for a in along.iter_mut() {
        a.sort_by(|x, y| (x.0, x.1).partial_cmp(&(y.0, y.1)).unwrap());
    }
    // crossing ids by first appearance
    let mut id = vec![usize::MAX; raw.len()];
    let mut next = 0;
    for a in &along {
        for &(_, _, ci, _) in a {
            if id[ci] == usize::MAX {
                id[ci] = next;
                next += 1;
            }
        }
    }
    let mut signs = vec![0i8; raw.len()];
    let mut points = vec![[0.0; 2]; raw.len()];
    for (ci, x) in raw.iter().enumerate() {
        signs[id[ci]] = x.sign;
        points[id[ci]] = [x.point.x, x.point.y];
    }
    let components = along
        .iter()
        .map(|a| a.iter().map(|&(_, _, ci, over)| Passage { crossing: id[ci], over }).collect())
        .collect();
    let geometry = DiagramGeometry {
        strands: planar.iter().map(|c| c.iter().map(|p| [p.x, p.y]).collect()).collect(),
        passage_params: along.iter().map(|a| a.iter().map(|&(s, t, _, _)| (s, t)).collect()).collect(),
        crossing_points: points,
    };
    Some(Diagram { components, signs, geometry: Some(geometry) })
}

/// Seeded shuffled and jittered Fibonacci-sphere directions.
pub fn candidate_directions(seed: u64) -> Vec<Point3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e_ed0f_d1a6);
    let mut dirs = fibonacci_directions(DIRECTIONS);
    dirs.shuffle(&mut rng);
    dirs.into_iter()
        .map(|d| {
            let j: Point3 = [
                rng.gen_range(-DIRECTION_JITTER..DIRECTION_JITTER),
                rng.gen_range(-DIRECTION_JITTER..DIRECTION_JITTER),
                rng.gen_range(-DIRECTION_JITTER..DIRECTION_JITTER),
            ];
            normalize3([d[0] + j[0], d[1] + j[1], d[2] + j[2]])
        })
        .collect()
}

/// Generic diagram with the fewest crossings over the seeded direction set.
pub fn planar_diagram(curves: &[Vec<Point3>], seed: u64) -> Result<Diagram> {
    let mut best: Option<Diagram> = None;
    for dir in candidate_directions(seed) {
        if let Some(dg) = diagram_along(curves, dir) {
            if best.as_ref().is_none_or(|b| dg.crossing_count() < b.crossing_count()) {
                best = Some(dg);
            }
        }
    }
    best.ok_or(Error::NoGenericDirection)
}

/// Stereographic projection followed by the direction search.
pub fn link_diagram(l: &LinkSamples, seed: u64) -> Result<Diagram> {
    let (_, curves) = stereographic_project(l, seed)?;
    planar_diagram(&curves, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::parse_divide;
    use crate::lift::lift_link;

    fn lifted(text: &str) -> LinkSamples {
        lift_link(&parse_divide(text).unwrap())
    }

    #[test]
    fn projection_inverts() {
        let l = lifted(include_str!("../fixtures/loop.divide"));
        let (st, curves) = stereographic_project(&l, DEFAULT_SEED).unwrap();
        assert!(st.clearance > 0.05);
        for (c, y) in l.components.iter().zip(&curves) {
            for (q, p) in c.iter().zip(y) {
                let back = st.unproject(p);
                for i in 0..4 {
                    assert!((back[i] - q[i]).abs() < 1e-9);
                }
            }
        }
        let b = st.basis;
        assert!(det4([st.pole, b[0], b[1], b[2]]) > 0.0);
    }

    #[test]
    fn chord_diagram_is_trivial() {
        let l = lifted(include_str!("../fixtures/chord.divide"));
        let dg = link_diagram(&l, DEFAULT_SEED).unwrap().simplify();
        assert_eq!(dg.crossing_count(), 0);
    }

    #[test]
    fn hopf_link_number_is_direction_independent() {
        let l = lifted(include_str!("../fixtures/two-diameters.divide"));
        let (_, curves) = stereographic_project(&l, DEFAULT_SEED).unwrap();
        let mut values = Vec::new();
        for dir in candidate_directions(7).into_iter().take(40) {
            if let Some(dg) = diagram_along(&curves, dir) {
                values.push(dg.linking_matrix()[0][1]);
            }
            if values.len() == 5 {
                break;
            }
        }
        assert_eq!(values.len(), 5);
        assert!(values.iter().all(|&v| v == 1), "{values:?}");
    }
}
