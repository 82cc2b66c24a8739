//! Double points of a divide.

use crate::divide::{Divide, Polyline};
use crate::error::{Error, Result};
use crate::geom::{segment_intersection, PointDisk, SegmentGrid, Vec2};
use std::f64::consts::PI;

pub const TOL_ANGLE: f64 = 1e-3;
pub const TOL_SEPARATION: f64 = 1e-6;
pub const TOL_BOUNDARY: f64 = 1e-3;

/// A point on a branch: branch index (into `Divide::branches`) and spline parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Incidence {
    pub branch: usize,
    pub param: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Crossing {
    pub id: usize,
    pub position: PointDisk,
    /// Ordered by (branch, param).
    pub incidences: [Incidence; 2],
    /// Unsigned angle in `(0, π)` between the two parameter tangents.
    pub angle: f64,
}

impl Crossing {
    pub fn involves(&self, branch: usize) -> bool {
        self.incidences.iter().any(|i| i.branch == branch)
    }
}

fn refine(d: &Divide, a: Incidence, b: Incidence) -> (Incidence, Incidence) {
    let ca = d.branches[a.branch].curve();
    let cb = d.branches[b.branch].curve();
    let (mut s, mut t) = (a.param, b.param);
    for _ in 0..60 {
        let (pa, da, _) = ca.eval_all(s);
        let (pb, db, _) = cb.eval_all(t);
        let f = pa - pb;
        if f.norm() < 1e-15 {
            break;
        }
        let det = da.cross(-db);
        if det.abs() < 1e-300 {
            break;
        }
        // solve [da, -db] (ds, dt) = -f
        let ds = (-f).cross(-db) / det;
        let dt = da.cross(-f) / det;
        s += ds;
        t += dt;
        if ds.abs() + dt.abs() < 1e-16 {
            break;
        }
    }
    let clamp = |c: &crate::spline::CatmullRom, v: f64| {
        if c.is_closed() {
            v.rem_euclid(c.domain())
        } else {
            v.clamp(0.0, c.domain())
        }
    };
    (
        Incidence { branch: a.branch, param: clamp(ca, s) },
        Incidence { branch: b.branch, param: clamp(cb, t) },
    )
}

fn param_gap(d: &Divide, branch: usize, s: f64, t: f64) -> f64 {
    let c = d.branches[branch].curve();
    let g = (s - t).abs();
    if c.is_closed() {
        g.min(c.domain() - g)
    } else {
        g
    }
}

/// All double points, refined on the splines and sorted by first incidence.
pub fn detect_crossings(d: &Divide, polylines: &[Polyline]) -> Result<Vec<Crossing>> {
    let mut segs = Vec::new();
    let mut owner = Vec::new();
    for pl in polylines {
        for k in 0..pl.points.len() - 1 {
            segs.push((pl.points[k], pl.points[k + 1]));
            owner.push((pl.branch, k));
        }
    }
    let grid = SegmentGrid::new(&segs);
    let mut raw: Vec<(Incidence, Incidence)> = Vec::new();
    for (i, j) in grid.candidate_pairs(&segs) {
        let (bi, ki) = owner[i];
        let (bj, kj) = owner[j];
        if bi == bj {
            let n = polylines[bi].points.len() - 1;
            let adjacent = ki.abs_diff(kj) <= 1 || (polylines[bi].closed && ki.abs_diff(kj) == n - 1);
            if adjacent {
                continue;
            }
        }
        let last_i = !polylines[bi].closed && ki + 2 == polylines[bi].points.len();
        let last_j = !polylines[bj].closed && kj + 2 == polylines[bj].points.len();
        let Some((a, b)) = segment_intersection(segs[i].0, segs[i].1, segs[j].0, segs[j].1, (last_i, last_j)) else {
            continue;
        };
        let pi = &polylines[bi].params;
        let pj = &polylines[bj].params;
        let ia = Incidence { branch: bi, param: pi[ki] + a * (pi[ki + 1] - pi[ki]) };
        let ib = Incidence { branch: bj, param: pj[kj] + b * (pj[kj + 1] - pj[kj]) };
        let (ia, ib) = refine(d, ia, ib);
        if bi == bj && param_gap(d, bi, ia.param, ib.param) < 1e-6 {
            continue;
        }
        raw.push(order(ia, ib));
    }
    raw.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
    // merge duplicates reported by several segment pairs
    let mut uniq: Vec<(Incidence, Incidence)> = Vec::new();
    for r in raw {
        let dup = uniq.iter().any(|u| {
            u.0.branch == r.0.branch
                && u.1.branch == r.1.branch
                && param_gap(d, r.0.branch, u.0.param, r.0.param) < 1e-7
                && param_gap(d, r.1.branch, u.1.param, r.1.param) < 1e-7
        });
        if !dup {
            uniq.push(r);
        }
    }
    let mut out = Vec::with_capacity(uniq.len());
    for (id, (a, b)) in uniq.into_iter().enumerate() {
        let ca = d.branches[a.branch].curve();
        let cb = d.branches[b.branch].curve();
        let pos = ca.eval(a.param);
        let ta = ca.d1(a.param).normalized();
        let tb = cb.d1(b.param).normalized();
        let angle = ta.dot(tb).clamp(-1.0, 1.0).acos();
        if angle.min(PI - angle) < TOL_ANGLE {
            return Err(Error::Tangency { x: pos.x, y: pos.y, angle: angle.min(PI - angle) });
        }
        if pos.norm() >= 1.0 - TOL_BOUNDARY {
            return Err(Error::BoundaryCrossing { x: pos.x, y: pos.y });
        }
        out.push(Crossing { id, position: pos, incidences: [a, b], angle });
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if out[i].position.dist(out[j].position) < TOL_SEPARATION {
                let p = out[i].position;
                return Err(Error::TriplePoint { x: p.x, y: p.y });
            }
        }
    }
    Ok(out)
}

fn order(a: Incidence, b: Incidence) -> (Incidence, Incidence) {
    if (a.branch, a.param) <= (b.branch, b.param) {
        (a, b)
    } else {
        (b, a)
    }
}

fn key(x: &(Incidence, Incidence)) -> (usize, f64, usize, f64) {
    (x.0.branch, x.0.param, x.1.branch, x.1.param)
}

/// Tangent direction of `inc` along increasing parameter.
pub fn tangent(d: &Divide, inc: Incidence) -> Vec2 {
    d.branches[inc.branch].curve().d1(inc.param)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::parse_divide;

    fn crossings(text: &str) -> Result<Vec<Crossing>> {
        let d = parse_divide(text)?;
        let pls = d.polylines()?;
        detect_crossings(&d, &pls)
    }

    #[test]
    fn two_diameters() {
        let c = crossings("divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)\narc 2: (0,-1) (0,-0.3) (0,0.3) (0,1)").unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].position.norm() < 1e-12);
        assert!((c[0].angle - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn chord_has_none() {
        assert!(crossings("divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)").unwrap().is_empty());
    }

    #[test]
    fn tangency_rejected() {
        // a parabola touching the diameter at the origin
        let mut pts = vec![];
        for k in 0..=8 {
            let x = -0.6 + 1.2 * k as f64 / 8.0;
            pts.push(format!("({x},{})", x * x));
        }
        let y0 = (1.0f64 - 0.36).sqrt();
        let text = format!(
            "divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)\narc 2: (-0.6,{y0}) {} (0.6,{y0})",
            pts[1..8].join(" ")
        );
        let e = crossings(&text).unwrap_err();
        assert!(matches!(e, Error::Tangency { .. } | Error::TriplePoint { .. }), "{e:?}");
    }

    #[test]
    fn triple_point_rejected() {
        let s = (0.5f64).sqrt();
        let text = format!(
            "divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)\narc 2: (0,-1) (0,-0.3) (0,0.3) (0,1)\narc 3: (-{s},-{s}) (-0.2,-0.2) (0.2,0.2) ({s},{s})"
        );
        assert!(matches!(crossings(&text).unwrap_err(), Error::TriplePoint { .. }));
    }
}
