//! Boundary connected sum of two divides.

use crate::analysis::Analysis;
use crate::divide::{Branch, BranchKind, Divide, Polyline};
use crate::error::{Error, Result};
use crate::geom::{PointDisk, Vec2};

/// Control-point spacings tried in turn until the sum has the expected counts.
const SPACINGS: [f64; 4] = [0.08, 0.04, 0.02, 0.01];

fn rotate(p: Vec2, a: f64) -> Vec2 {
    let (s, c) = a.sin_cos();
    Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

/// Squeezes the rotated unit disk into the half disk on side `side` (−1 left, +1 right):
/// `z ↦ (z + side)/2`, then the radial stretch that sends the small disk onto the half disk.
fn squeeze(z: Vec2, side: f64) -> Vec2 {
    let w = (z + Vec2::new(side, 0.0)) * 0.5;
    let r = w.norm();
    if r < 1e-15 {
        return Vec2::ZERO;
    }
    let c = side * w.x / r;
    w * (1.0 / c.max(1e-300))
}

fn first_arc(d: &Divide) -> Result<usize> {
    d.branches.iter().position(|b| b.is_arc()).ok_or(Error::NoArc)
}

fn image(poly: &Polyline, rot: f64, side: f64) -> Vec<PointDisk> {
    poly.points.iter().map(|&p| squeeze(rotate(p, rot), side)).collect()
}

/// Picks points along `pts` at arc-length spacing `h`, keeping both ends of open curves.
fn subsample(pts: &[PointDisk], h: f64, closed: bool) -> Vec<PointDisk> {
    let n = pts.len();
    let mut out = vec![pts[0]];
    let mut acc = 0.0;
    for i in 1..n {
        acc += pts[i].dist(pts[i - 1]);
        let last = i == n - 1;
        if last && !closed {
            break;
        }
        if acc >= h && pts[i].norm() < 1.0 - 1e-5 {
            out.push(pts[i]);
            acc = 0.0;
        }
    }
    if closed {
        if out.len() > 1 && out[out.len() - 1].dist(out[0]) < 0.5 * h {
            out.pop();
        }
    } else {
        if out.len() > 1 && out[out.len() - 1].dist(pts[n - 1]) < 0.3 * h {
            out.pop();
        }
        out.push(pts[n - 1]);
    }
    out
}

fn build(
    d1: &Divide,
    p1: &[Polyline],
    d2: &Divide,
    p2: &[Polyline],
    h: f64,
) -> Result<Divide> {
    let a1 = first_arc(d1)?;
    let a2 = first_arc(d2)?;
    let rot1 = -d1.branches[a1].end().angle();
    let rot2 = std::f64::consts::PI - d2.branches[a2].start().angle();

    let mut joined = image(&p1[a1], rot1, -1.0);
    let tail = image(&p2[a2], rot2, 1.0);
    let junction = joined.len() - 1;
    joined.extend_from_slice(&tail[1..]);
    joined[junction] = Vec2::ZERO;
    let mut pts = subsample(&joined[..=junction], h, false);
    pts.pop();
    pts.extend(subsample(&joined[junction..], h, false));

    let mut branches = vec![Branch::new(d1.branches[a1].id, BranchKind::Arc, pts)?];
    let push = |branches: &mut Vec<Branch>, b: &Branch, poly: &Polyline, rot: f64, side: f64, id: i64| {
        let closed = !b.is_arc();
        let img = image(poly, rot, side);
        let pts = subsample(&img, h, closed);
        branches.push(Branch::new(id, b.kind, pts)?);
        Ok::<(), Error>(())
    };
    for (i, b) in d1.branches.iter().enumerate() {
        if i != a1 {
            push(&mut branches, b, &p1[i], rot1, -1.0, b.id)?;
        }
    }
    let mut next = d1.branches.iter().map(|b| b.id).max().unwrap_or(0);
    for (i, b) in d2.branches.iter().enumerate() {
        if i != a2 {
            next += 1;
            push(&mut branches, b, &p2[i], rot2, 1.0, next)?;
        }
    }
    Ok(Divide::new(branches)?.with_resolution(d1.resolution.max(d2.resolution)))
}

/// Boundary connected sum: `d1` goes to the left half disk, `d2` to the right, and the end
/// of `d1`'s first arc is joined at the origin to the start of `d2`'s first arc.
/// The result is checked to have `δ₁ + δ₂` crossings and `r₁ + r₂ − 1` branches.
pub fn connected_sum(d1: &Divide, d2: &Divide) -> Result<Divide> {
    first_arc(d1)?;
    first_arc(d2)?;
    let s1 = Analysis::new(d1.clone())?;
    let s2 = Analysis::new(d2.clone())?;
    let delta = s1.map.delta + s2.map.delta;
    let r = s1.map.r + s2.map.r - 1;
    let mut last = None;
    for &h in &SPACINGS {
        let d = match build(d1, &s1.polylines, d2, &s2.polylines, h) {
            Ok(d) => d,
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        match Analysis::new(d.clone()) {
            Ok(a) if a.map.delta == delta && a.map.r == r => return Ok(d),
            Ok(a) => {
                last = Some(Error::Invalid(format!(
                    "connected sum has delta {} and r {}, expected {delta} and {r}",
                    a.map.delta, a.map.r
                )))
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or(Error::NoArc))
}
