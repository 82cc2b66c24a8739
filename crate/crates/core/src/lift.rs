//! The link of a divide as sampled curves on the unit sphere of the tangent bundle, the
//! deformation family `L(P, σ)`, its singular parameters and the unknotting schedule.

use crate::crossings::{tangent, Crossing};
use crate::divide::{BranchKind, Divide};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

/// A point `(x₁, x₂, u₁, u₂)` of R⁴.
pub type Point4 = [f64; 4];

/// Which lift of a branch: velocity direction `+γ'` or `−γ'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn value(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkSamples {
    /// Closed polylines (first sample repeated at the end).
    pub components: Vec<Vec<Point4>>,
    /// Branch index of each component.
    pub component_to_branch: Vec<usize>,
    pub sigma: f64,
}

impl LinkSamples {
    /// Largest deviation of `|p|²` from 1 over all samples.
    pub fn sphere_residual(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .map(|p| (p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `link v1` text export.
    pub fn to_text(&self) -> String {
        let mut s = String::from("link v1\n");
        for (k, c) in self.components.iter().enumerate() {
            let _ = writeln!(s, "component {} {}", k, c.len());
            for p in c {
                let _ = writeln!(s, "{:.12} {:.12} {:.12} {:.12}", p[0], p[1], p[2], p[3]);
            }
        }
        s
    }
}

/// Per-branch co-orientation signs selecting the normal `ε·J(T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoOrientation {
    pub signs: Vec<i8>,
}

impl CoOrientation {
    /// `ε = +1` (left normal) on every branch.
    pub fn standard(d: &Divide) -> Self {
        CoOrientation { signs: vec![1; d.branches.len()] }
    }

    pub fn sign(&self, branch: usize) -> f64 {
        self.signs[branch] as f64
    }
}

/// Sample parameters clustered towards both ends of `[0, t_max]`.
pub fn clustered_params(t_max: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let s = k as f64 / n as f64;
            t_max * 0.5 * (1.0 - (PI * s).cos())
        })
        .collect()
}

/// Samples per sheet for a branch.
pub fn sheet_samples(d: &Divide, branch: usize) -> usize {
    let segs = d.branches[branch].curve().segments();
    (d.resolution * segs).max(32)
}

fn lift_point(x: Vec2, tangent_unit: Vec2, sheet: f64, eps: f64, sigma: f64) -> Point4 {
    let rho = (1.0 - x.norm2()).max(0.0).sqrt();
    let u = tangent_unit * (sheet * rho);
    let n = tangent_unit.perp() * (eps * rho);
    let w = u * sigma.cos() + n * sigma.sin();
    [x.x, x.y, w.x, w.y]
}

/// One lifted sample of branch `b` at parameter `t`.
pub fn lift_at(d: &Divide, co: &CoOrientation, b: usize, t: f64, sheet: Sheet, sigma: f64) -> Point4 {
    let (x, d1, _) = d.branches[b].curve().eval_all(t);
    lift_point(x, d1.normalized(), sheet.value(), co.sign(b), sigma)
}

/// Largest chord in S³ between consecutive lifted samples.
pub const LIFT_MAX_STEP: f64 = 0.01;
const LIFT_MAX_DEPTH: u32 = 40;

fn chord(p: &Point4, q: &Point4) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Bisects parameter intervals until both sheets advance less than [`LIFT_MAX_STEP`].
fn refine_params(ts: &[f64], lift: impl Fn(f64, Sheet) -> Point4) -> Vec<f64> {
    let pair = |t: f64| (lift(t, Sheet::Plus), lift(t, Sheet::Minus));
    let mut out = vec![ts[0]];
    for w in ts.windows(2) {
        let mut stack = vec![(w[0], pair(w[0]), w[1], pair(w[1]), 0u32)];
        while let Some((a, pa, b, pb, depth)) = stack.pop() {
            let step = chord(&pa.0, &pb.0).max(chord(&pa.1, &pb.1));
            if step <= LIFT_MAX_STEP || depth >= LIFT_MAX_DEPTH {
                out.push(b);
                continue;
            }
            let m = 0.5 * (a + b);
            let pm = pair(m);
            // right half first so the left half is emitted first
            stack.push((m, pm, b, pb, depth + 1));
            stack.push((a, pa, m, pm, depth + 1));
        }
    }
    out
}

/// `L(P, σ)`; `σ = 0` gives `L(P)`.
pub fn lift_family(d: &Divide, co: &CoOrientation, sigma: f64) -> Result<LinkSamples> {
    if !(0.0..FRAC_PI_2).contains(&sigma) {
        return Err(Error::SigmaRange(sigma));
    }
    let mut components = Vec::new();
    let mut component_to_branch = Vec::new();
    for (b, br) in d.branches.iter().enumerate() {
        let n = sheet_samples(d, b);
        let t_max = br.domain();
        match br.kind {
            BranchKind::Arc => {
                let ts = refine_params(&clustered_params(t_max, n), |t, sh| lift_at(d, co, b, t, sh, sigma));
                let mut c: Vec<Point4> = ts.iter().map(|&t| lift_at(d, co, b, t, Sheet::Plus, sigma)).collect();
                c.extend(ts.iter().rev().skip(1).map(|&t| lift_at(d, co, b, t, Sheet::Minus, sigma)));
                // the endpoints lie on the boundary circle where both sheets meet
                let last = c.len() - 1;
                c[last] = c[0];
                components.push(c);
                component_to_branch.push(b);
            }
            BranchKind::Circle => {
                let uniform: Vec<f64> = (0..=n).map(|k| t_max * k as f64 / n as f64).collect();
                let ts = refine_params(&uniform, |t, sh| lift_at(d, co, b, t, sh, sigma));
                for sheet in [Sheet::Plus, Sheet::Minus] {
                    let mut c: Vec<Point4> = if sheet == Sheet::Plus {
                        ts.iter().map(|&t| lift_at(d, co, b, t, sheet, sigma)).collect()
                    } else {
                        ts.iter().rev().map(|&t| lift_at(d, co, b, t, sheet, sigma)).collect()
                    };
                    let last = c.len() - 1;
                    c[last] = c[0];
                    components.push(c);
                    component_to_branch.push(b);
                }
            }
        }
    }
    Ok(LinkSamples { components, component_to_branch, sigma })
}

/// `L(P)`: unit tangent vectors over the divide.
pub fn lift_link(d: &Divide) -> LinkSamples {
    lift_family(d, &CoOrientation::standard(d), 0.0).expect("sigma 0 is in range")
}

/// A parameter value at which two strands of `L(P, σ)` over a crossing collide.
#[derive(Clone, Debug, PartialEq)]
pub struct Cutover {
    pub crossing: usize,
    pub sigma: f64,
    /// Angle between the two chosen normals at the crossing.
    pub alpha: f64,
    /// The two strands that pass through each other: (branch, sheet) for each incidence.
    pub strands: [(usize, Sheet); 2],
}

fn cutover_at(d: &Divide, co: &CoOrientation, c: &Crossing) -> Cutover {
    let [ia, ib] = c.incidences;
    let (ta, tb) = (tangent(d, ia), tangent(d, ib));
    let na = ta.perp() * co.sign(ia.branch);
    let nb = tb.perp() * co.sign(ib.branch);
    let alpha = na.dot(nb).clamp(-1.0, 1.0).acos();
    let sa = if ta.dot(nb) > 0.0 { Sheet::Plus } else { Sheet::Minus };
    let sb = if tb.dot(na) > 0.0 { Sheet::Plus } else { Sheet::Minus };
    Cutover {
        crossing: c.id,
        sigma: (PI - alpha) / 2.0,
        alpha,
        strands: [(ia.branch, sa), (ib.branch, sb)],
    }
}

/// Cutover parameters `σ_c = (π − α_c)/2`, sorted ascending.
pub fn singular_sigmas(d: &Divide, co: &CoOrientation, crossings: &[Crossing]) -> Result<Vec<Cutover>> {
    let mut events: Vec<Cutover> = crossings.iter().map(|c| cutover_at(d, co, c)).collect();
    events.sort_by(|a, b| a.sigma.partial_cmp(&b.sigma).unwrap().then(a.crossing.cmp(&b.crossing)));
    for w in events.windows(2) {
        if (w[1].sigma - w[0].sigma).abs() < 1e-9 {
            return Err(Error::DegenerateSchedule { a: w[0].crossing, b: w[1].crossing, sigma: w[0].sigma });
        }
    }
    Ok(events)
}

/// Numerical evidence that the family after the last cutover sweeps embedded disks.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub sigma0: f64,
    /// Smallest distance in S³ between the swept surfaces over any crossing.
    pub min_separation: f64,
    pub grid: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnknottingSchedule {
    pub events: Vec<Cutover>,
    pub certificate: Certificate,
}

/// Distance between the directions swept over `c` by two strands for σ in `[σ₀, π/2]`.
fn swept_separation(d: &Divide, co: &CoOrientation, c: &Crossing, sigma0: f64, grid: usize) -> f64 {
    let [ia, ib] = c.incidences;
    let rho = (1.0 - c.position.norm2()).sqrt();
    let dirs = |inc: crate::crossings::Incidence| -> Vec<Vec2> {
        let t = tangent(d, inc);
        let n = t.perp() * co.sign(inc.branch);
        let mut v = Vec::with_capacity(2 * grid + 2);
        for k in 0..=grid {
            let s = sigma0 + (FRAC_PI_2 - sigma0) * k as f64 / grid as f64;
            for sheet in [1.0, -1.0] {
                v.push(t * (sheet * s.cos()) + n * s.sin());
            }
        }
        v
    };
    let (a, b) = (dirs(ia), dirs(ib));
    let mut best = f64::INFINITY;
    for p in &a {
        for q in &b {
            best = best.min(p.dist(*q));
        }
    }
    best * rho
}

/// The cutover events of the family and a certificate that `L(P, σ₀)` bounds disks.
pub fn unknotting_schedule(d: &Divide, co: &CoOrientation, crossings: &[Crossing], connected: bool) -> Result<UnknottingSchedule> {
    if !connected {
        return Err(Error::Disconnected);
    }
    let events = singular_sigmas(d, co, crossings)?;
    let sigma0 = events.last().map_or(0.0, |e| 0.5 * (e.sigma + FRAC_PI_2));
    let mut grid = 64;
    for _ in 0..2 {
        let min_separation = crossings
            .iter()
            .map(|c| swept_separation(d, co, c, sigma0, grid))
            .fold(f64::INFINITY, f64::min);
        if min_separation > 1e-6 {
            return Ok(UnknottingSchedule {
                events,
                certificate: Certificate { sigma0, min_separation, grid, pass: true },
            });
        }
        grid *= 2;
    }
    Err(Error::NotEmbedded { gap: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossings::detect_crossings;
    use crate::divide::parse_divide;

    fn prep(text: &str) -> (Divide, Vec<Crossing>) {
        let d = parse_divide(text).unwrap();
        let cs = detect_crossings(&d, &d.polylines().unwrap()).unwrap();
        (d, cs)
    }

    const CHORD: &str = "divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)";
    const DIAMETERS: &str = "divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)\narc 2: (0,-1) (0,-0.3) (0,0.3) (0,1)";

    #[test]
    fn chord_lift_is_great_circle() {
        let (d, _) = prep(CHORD);
        let l = lift_link(&d);
        assert_eq!(l.components.len(), 1);
        let c = &l.components[0];
        assert!(c.len() >= 32);
        assert_eq!(c[0], c[c.len() - 1]);
        for p in c {
            assert!(p[1].abs() < 1e-15 && p[3].abs() < 1e-15);
            assert!((p[0] * p[0] + p[2] * p[2] - 1.0).abs() < 1e-9);
        }
        assert!(l.sphere_residual() < 1e-9);
    }

    #[test]
    fn family_at_zero_is_lift() {
        let (d, _) = prep(DIAMETERS);
        let a = lift_link(&d);
        let b = lift_family(&d, &CoOrientation::standard(&d), 0.0).unwrap();
        assert_eq!(a, b);
        assert!(lift_family(&d, &CoOrientation::standard(&d), FRAC_PI_2).is_err());
        let c = lift_family(&d, &CoOrientation::standard(&d), 0.7).unwrap();
        assert!(c.sphere_residual() < 1e-9);
    }

    #[test]
    fn diameters_cutover_at_quarter_pi() {
        let (d, cs) = prep(DIAMETERS);
        let ev = singular_sigmas(&d, &CoOrientation::standard(&d), &cs).unwrap();
        assert_eq!(ev.len(), 1);
        assert!((ev[0].sigma - PI / 4.0).abs() < 1e-9);
        // the named strands meet exactly at the event
        let co = CoOrientation::standard(&d);
        let c = &cs[0];
        let [(ba, sa), (bb, sb)] = ev[0].strands;
        let pa = lift_at(&d, &co, ba, c.incidences[0].param, sa, ev[0].sigma);
        let pb = lift_at(&d, &co, bb, c.incidences[1].param, sb, ev[0].sigma);
        let dist: f64 = pa.iter().zip(pb).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        assert!(dist < 1e-9);
    }

    #[test]
    fn schedule_certificates() {
        let (d, cs) = prep(CHORD);
        let s = unknotting_schedule(&d, &CoOrientation::standard(&d), &cs, true).unwrap();
        assert!(s.events.is_empty() && s.certificate.pass);
        let (d, cs) = prep(DIAMETERS);
        let s = unknotting_schedule(&d, &CoOrientation::standard(&d), &cs, true).unwrap();
        assert_eq!(s.events.len(), 1);
        assert!(s.certificate.sigma0 > s.events[0].sigma);
        assert!(s.certificate.min_separation > 1e-6);
        // before the event the swept family is not embedded
        let early = swept_separation(&d, &CoOrientation::standard(&d), &cs[0], 0.5, 64);
        assert!(early < 1e-2);
    }
}
