//! A Morse function adapted to a divide, the map `θ` on the three-sphere and numerical
//! evidence that `θ/|θ|` is a fibration off the link.

use crate::analysis::Analysis;
use crate::divide::Divide;
use crate::error::{Error, Result};
use crate::geom::{point_segment, segment_intersection, wrap_angle, Vec2};
use crate::harmonic::{Grid, GridField};
use crate::lift::{lift_link, Point4};
use crate::planar::{EdgeKind, PlanarMap, Sign};
use std::f64::consts::{PI, TAU};

/// Exponent of the soft minimum of piece distances.
const SOFTMIN_Q: i32 = 8;
/// Radius of the tube around the link excluded from the evidence samples.
pub const TUBE_RADIUS: f64 = 0.05;
pub const ETA_SWEEP: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
pub const MIN_THETA: f64 = 1e-4;
pub const MIN_ARG_GRADIENT: f64 = 1e-3;
pub const LINK_THETA_TOL: f64 = 1e-6;
/// Harmonic grid spacings, tried in turn by [`build_morse_function`].
const GRID_STEPS: [f64; 2] = [0.01, 0.005];
/// Below `NEAR_STEPS` grid steps of soft distance `f` is a multiple of the distance; above
/// `FAR_STEPS` it is harmonic. The bicubic stencil reaches `2√2` steps.
const NEAR_STEPS: f64 = 3.0;
const FAR_STEPS: f64 = 10.0;
/// The grid covers a slightly larger disk so that interpolation reaches the unit circle.
const GRID_RADIUS: f64 = 1.05;
const RAY_END: f64 = 1.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalKind {
    Max,
    Min,
    Saddle,
}

#[derive(Clone, Debug)]
enum Chart {
    /// `f = k·X·Y` with `X`, `Y` signed distances to the two local strands.
    Saddle {
        strands: [Strand; 2],
        /// Signed so that `k·X·Y` has the sign of the adjacent regions.
        k: f64,
    },
    /// `f = f(c) + ½ (x−c)ᵀ H (x−c)`.
    Extremum { hessian: [[f64; 2]; 2] },
}

#[derive(Clone, Debug)]
struct Strand {
    branch: usize,
    lo: f64,
    hi: f64,
    param: f64,
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub kind: CriticalKind,
    pub position: Vec2,
    pub value: f64,
    /// Radius of the local model; the bump is 1 on `ρ/2` and 0 outside `ρ`.
    pub rho: f64,
    pub region: Option<usize>,
    pub crossing: Option<usize>,
    chart: Chart,
}

#[derive(Clone, Debug)]
struct Piece {
    a: Vec2,
    b: Vec2,
    branch: usize,
    t0: f64,
    t1: f64,
    left: f64,
    right: f64,
}

/// Value, gradient and the bump-weighted model Hessian of `f` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub f: f64,
    pub grad: Vec2,
    pub chi: f64,
    /// Hessian of the active local model in its chart, zero outside every bump.
    pub hessian: [[f64; 2]; 2],
}

impl Jet {
    fn quad(&self, u: Vec2) -> f64 {
        let h = &self.hessian;
        h[0][0] * u.x * u.x + 2.0 * h[0][1] * u.x * u.y + h[1][1] * u.y * u.y
    }
}

/// Smooth function on the disk vanishing exactly on the divide, with one non-degenerate
/// extremum per interior region and a saddle at every crossing.
#[derive(Clone, Debug)]
pub struct MorseField {
    pub divide: Divide,
    pub critical: Vec<CriticalPoint>,
    pieces: Vec<Piece>,
    max_piece: f64,
    near: f64,
    far: f64,
    outer: GridField,
    components: Vec<Option<Component>>,
}

/// How the grid solution on one component of the cut disk becomes `f`.
#[derive(Clone, Copy, Debug)]
struct Component {
    sign: f64,
    /// Positive factor making the harmonic field dominate the distance in the transition zone.
    scale: f64,
    /// Interior regions: `u = 1 − |x − c|² e^{−2h}` with `h` the grid solution.
    /// Boundary regions: `u` is the grid solution itself.
    centre: Option<Vec2>,
}

/// Uniform bucket grid over `[-1, 1]²` holding piece indices.
#[derive(Clone, Debug)]
struct Bucket {
    n: usize,
    cell: f64,
    items: Vec<Vec<usize>>,
}

impl Bucket {
    fn new(n: usize) -> Bucket {
        Bucket { n, cell: 2.0 / n as f64, items: vec![Vec::new(); n * n] }
    }

    fn coord(&self, v: f64) -> usize {
        (((v + 1.0) / self.cell).floor().max(0.0) as usize).min(self.n - 1)
    }

    fn insert(&mut self, lo: Vec2, hi: Vec2, pad: f64, id: usize) {
        let (x0, x1) = (self.coord(lo.x - pad), self.coord(hi.x + pad));
        let (y0, y1) = (self.coord(lo.y - pad), self.coord(hi.y + pad));
        for y in y0..=y1 {
            for x in x0..=x1 {
                self.items[y * self.n + x].push(id);
            }
        }
    }

    fn at(&self, p: Vec2) -> &[usize] {
        &self.items[self.coord(p.y) * self.n + self.coord(p.x)]
    }
}

fn smootherstep(s: f64) -> (f64, f64) {
    let s = s.clamp(0.0, 1.0);
    (s * s * s * (s * (6.0 * s - 15.0) + 10.0), 30.0 * s * s * (s - 1.0) * (s - 1.0))
}

/// C² radial bump: 1 on `|x − c| ≤ ρ/2`, 0 outside `ρ`; value and gradient.
fn bump(x: Vec2, c: Vec2, rho: f64) -> (f64, Vec2) {
    let d = x - c;
    let r = d.norm();
    if r >= rho {
        return (0.0, Vec2::ZERO);
    }
    if r <= 0.5 * rho {
        return (1.0, Vec2::ZERO);
    }
    let s = (rho - r) / (0.5 * rho);
    let (v, dv) = smootherstep(s);
    (v, d * (-dv / (0.5 * rho) / r))
}

/// Nearest point of a branch over `[lo, hi]`, starting from `t`.
fn project(d: &Divide, branch: usize, x: Vec2, mut t: f64, lo: f64, hi: f64) -> (f64, Vec2, Vec2) {
    let c = d.branches[branch].curve();
    for _ in 0..12 {
        let (p, d1, d2) = c.eval_all(t);
        let g = d1.dot(p - x);
        let gp = d2.dot(p - x) + d1.norm2();
        let step = if gp > 1e-12 { g / gp } else { g / d1.norm2().max(1e-12) };
        let next = (t - step).clamp(lo, hi);
        if (next - t).abs() < 1e-15 {
            t = next;
            break;
        }
        t = next;
    }
    let (p, d1, _) = c.eval_all(t);
    (t, p, d1)
}

impl MorseField {
    /// Signed soft distance to the divide, with gradient.
    fn soft(&self, x: Vec2) -> (f64, Vec2) {
        let q = SOFTMIN_Q;
        let mut chord = Vec::with_capacity(self.pieces.len());
        let mut dmin = f64::INFINITY;
        for p in &self.pieces {
            let (dist, s) = point_segment(x, p.a, p.b);
            dmin = dmin.min(dist);
            chord.push((dist, s));
        }
        let near = dmin + 2.0 * self.max_piece;
        let mut sum = 0.0;
        let mut terms: Vec<(f64, Vec2)> = Vec::with_capacity(self.pieces.len());
        let mut best = (f64::INFINITY, 0.0, Vec2::ZERO, 0.0);
        for (p, &(dist, s)) in self.pieces.iter().zip(&chord) {
            let (dist, foot, tangent) = if dist <= near {
                let t = p.t0 + s * (p.t1 - p.t0);
                let (_, foot, d1) = project(&self.divide, p.branch, x, t, p.t0, p.t1);
                (x.dist(foot), foot, d1)
            } else {
                (dist, p.a.lerp(p.b, s), p.b - p.a)
            };
            if dist < best.0 {
                let side = if tangent.cross(x - foot) >= 0.0 { p.left } else { p.right };
                best = (dist, side, tangent, p.left);
            }
            if dist < 1e-300 {
                continue;
            }
            sum += dist.powi(-q);
            terms.push((dist, (x - foot) * (1.0 / dist)));
        }
        let (dist0, sign, tangent, left) = best;
        if dist0 < 1e-14 {
            return (0.0, tangent.perp().normalized() * left);
        }
        let dd = sum.powf(-1.0 / q as f64);
        let mut g = Vec2::ZERO;
        for (dist, dir) in terms {
            g += dir * (dd / dist).powi(q + 1);
        }
        (sign * dd, g * sign)
    }

    fn saddle_coords(&self, x: Vec2, strands: &[Strand; 2]) -> [(f64, Vec2); 2] {
        let mut out = [(0.0, Vec2::ZERO); 2];
        for (k, s) in strands.iter().enumerate() {
            let (_, foot, d1) = project(&self.divide, s.branch, x, s.param, s.lo, s.hi);
            let n = d1.perp().normalized();
            out[k] = ((x - foot).dot(n), n);
        }
        out
    }

    /// Model value, gradient and chart Hessian of critical point `c` at `x`.
    fn model(&self, c: &CriticalPoint, x: Vec2) -> (f64, Vec2, [[f64; 2]; 2]) {
        match &c.chart {
            Chart::Saddle { strands, k } => {
                let [(xv, gx), (yv, gy)] = self.saddle_coords(x, strands);
                let k = *k;
                let f = k * xv * yv;
                let g = (gx * yv + gy * xv) * k;
                let h = [
                    [2.0 * k * gx.x * gy.x, k * (gx.x * gy.y + gx.y * gy.x)],
                    [k * (gx.x * gy.y + gx.y * gy.x), 2.0 * k * gx.y * gy.y],
                ];
                (f, g, h)
            }
            Chart::Extremum { hessian: h } => {
                let d = x - c.position;
                let hd = Vec2::new(h[0][0] * d.x + h[0][1] * d.y, h[1][0] * d.x + h[1][1] * d.y);
                (c.value + 0.5 * d.dot(hd), hd, *h)
            }
        }
    }

    /// Harmonic field `s·u` of the region containing `x`, if the grid stencil is clean.
    fn outer(&self, x: Vec2) -> Option<(f64, Vec2)> {
        let (lab, v, g) = self.outer.interpolate(x)?;
        let comp = self.components[lab]?;
        match comp.centre {
            None => Some((comp.scale * v, g * comp.scale)),
            Some(c) => {
                let d = x - c;
                let e = (-2.0 * v).exp();
                let r2 = d.norm2();
                let u = 1.0 - r2 * e;
                let gu = (d * 2.0 - g * (2.0 * r2)) * (-e);
                Some((comp.scale * u, gu * comp.scale))
            }
        }
    }

    /// `f` away from the local models: the soft distance near the divide, blended into the
    /// harmonic field.
    fn base(&self, x: Vec2) -> (f64, Vec2) {
        let (fs, gs) = self.soft(x);
        let (fn_, gn) = (fs, gs);
        let d = fs.abs();
        if d <= self.near {
            return (fn_, gn);
        }
        let Some((fo, go)) = self.outer(x) else {
            return (fn_, gn);
        };
        let span = self.far - self.near;
        let (w, dw) = smootherstep((d - self.near) / span);
        let grad_d = gs * fs.signum();
        (
            (1.0 - w) * fn_ + w * fo,
            gn * (1.0 - w) + go * w + grad_d * (dw / span * (fo - fn_)),
        )
    }

    /// `f`, `∇f`, the bump and the model Hessian at `x`.
    pub fn jet(&self, x: Vec2) -> Jet {
        for c in &self.critical {
            if x.dist(c.position) < c.rho {
                let (chi, dchi) = bump(x, c.position, c.rho);
                let (fm, gm, h) = self.model(c, x);
                if chi >= 1.0 {
                    return Jet { f: fm, grad: gm, chi, hessian: h };
                }
                let (fb, gb) = self.base(x);
                return Jet {
                    f: chi * fm + (1.0 - chi) * fb,
                    grad: gm * chi + gb * (1.0 - chi) + dchi * (fm - fb),
                    chi,
                    hessian: h,
                };
            }
        }
        let (f, grad) = self.base(x);
        Jet { f, grad, chi: 0.0, hessian: [[0.0; 2]; 2] }
    }

    pub fn value(&self, x: Vec2) -> f64 {
        self.jet(x).f
    }

    /// Unsigned distance to the divide along the dense chords.
    pub fn distance_to_divide(&self, x: Vec2) -> f64 {
        self.pieces
            .iter()
            .map(|p| point_segment(x, p.a, p.b).0)
            .fold(f64::INFINITY, f64::min)
    }

    /// `θ(x, u) = f(x) + iη df(x)(u) − ½η²χ(x)H(x)(u, u)`.
    pub fn theta(&self, x: Vec2, u: Vec2, eta: f64) -> Result<(f64, f64)> {
        let r2 = x.norm2() + u.norm2();
        if (r2 - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!("point is off the unit sphere (|x|² + |u|² = {r2})")));
        }
        if x.norm() > 1.0 {
            return Err(Error::Invalid("point outside the disk".into()));
        }
        let j = self.jet(x);
        Ok(theta_parts(&j, u).combine(eta))
    }

    fn crit_index(&self, kind: CriticalKind) -> usize {
        self.critical.iter().filter(|c| c.kind == kind).count()
    }
}

#[derive(Clone, Copy, Debug)]
struct ThetaParts {
    f: f64,
    df: f64,
    quad: f64,
}

impl ThetaParts {
    fn combine(self, eta: f64) -> (f64, f64) {
        (self.f - 0.5 * eta * eta * self.quad, eta * self.df)
    }
}

fn theta_parts(j: &Jet, u: Vec2) -> ThetaParts {
    ThetaParts { f: j.f, df: j.grad.dot(u), quad: j.chi * j.quad(u) }
}

fn sign_value(s: Sign) -> f64 {
    s.value()
}

/// Pieces of the divide between consecutive dense samples, split at crossings, with the
/// signs of the regions on their left and right.
fn build_pieces(a: &Analysis) -> Result<Vec<Piece>> {
    let m = &a.map;
    let mut pieces = Vec::new();
    for e in m.branch_edges() {
        let EdgeKind::Branch { branch, t0, t1 } = m.edges[e].kind else { continue };
        if t1 <= t0 {
            return Err(Error::CircleBranch);
        }
        let (l, r) = m.edge_regions(e);
        let (left, right) = (sign_value(m.regions[l].sign), sign_value(m.regions[r].sign));
        let poly = &a.polylines[branch];
        let mut ts = vec![t0];
        ts.extend(poly.params.iter().copied().filter(|&t| t > t0 + 1e-12 && t < t1 - 1e-12));
        ts.push(t1);
        let c = a.divide.branches[branch].curve();
        for w in ts.windows(2) {
            pieces.push(Piece { a: c.eval(w[0]), b: c.eval(w[1]), branch, t0: w[0], t1: w[1], left, right });
        }
    }
    Ok(pieces)
}

/// The parameter run of `branch` through `t` along which the distance to `c` keeps growing.
fn local_run(a: &Analysis, branch: usize, t: f64, c: Vec2) -> (f64, f64) {
    let params = &a.polylines[branch].params;
    let curve = a.divide.branches[branch].curve();
    let k = params.partition_point(|&p| p < t);
    let mut hi = k.min(params.len() - 1);
    let mut last = 0.0;
    while hi + 1 < params.len() {
        let dist = curve.eval(params[hi]).dist(c);
        if dist < last {
            break;
        }
        last = dist;
        hi += 1;
    }
    let mut lo = k.saturating_sub(1);
    last = 0.0;
    while lo > 0 {
        let dist = curve.eval(params[lo]).dist(c);
        if dist < last {
            break;
        }
        last = dist;
        lo -= 1;
    }
    (params[lo], params[hi])
}

/// Angle sectors of the unit circle between consecutive branch endpoints.
fn sectors(a: &Analysis) -> Vec<(f64, f64)> {
    let mut ends: Vec<f64> = a
        .divide
        .branches
        .iter()
        .flat_map(|b| [wrap_angle(b.start().angle()), wrap_angle(b.end().angle())])
        .collect();
    ends.sort_by(|x, y| x.partial_cmp(y).unwrap());
    (0..ends.len())
        .map(|k| (ends[k], if k + 1 < ends.len() { ends[k + 1] } else { ends[0] + TAU }))
        .collect()
}

/// Boundary data on the outer circle: one positive bump per sector.
fn sector_bump(sectors: &[(f64, f64)], y: Vec2) -> f64 {
    let t = wrap_angle(y.angle());
    for &(a, b) in sectors {
        for t in [t, t + TAU] {
            if t >= a && t <= b {
                return (PI * (t - a) / (b - a)).sin();
            }
        }
    }
    0.0
}

/// Builds `f_P` on the coarsest harmonic grid without verifying it; see
/// [`build_morse_function`].
pub fn construct_field(a: &Analysis) -> Result<MorseField> {
    construct_field_with(a, GRID_STEPS[0])
}

fn construct_field_with(a: &Analysis, grid_step: f64) -> Result<MorseField> {
    if a.divide.has_circles() {
        return Err(Error::CircleBranch);
    }
    if !a.map.connected {
        return Err(Error::Disconnected);
    }
    let m: &PlanarMap = &a.map;
    let pieces = build_pieces(a)?;
    let max_piece = pieces.iter().map(|p| p.a.dist(p.b)).fold(0.0, f64::max);
    let mut field = MorseField {
        divide: a.divide.clone(),
        critical: Vec::new(),
        pieces,
        max_piece,
        near: NEAR_STEPS * grid_step,
        far: FAR_STEPS * grid_step,
        outer: GridField { n: 0, origin: Vec2::ZERO, step: 1.0, label: Vec::new(), values: Vec::new() },
        components: Vec::new(),
    };

    // saddles at crossings
    let mut saddles = Vec::new();
    for c in &a.crossings {
        let mut strands = Vec::new();
        let mut run = Vec::new();
        for inc in c.incidences {
            let (lo, hi) = local_run(a, inc.branch, inc.param, c.position);
            run.push((inc.branch, lo, hi));
            strands.push(Strand { branch: inc.branch, lo, hi, param: inc.param });
        }
        let mut foreign = 1.0 - c.position.norm();
        for (b, poly) in a.polylines.iter().enumerate() {
            for (&t, &p) in poly.params.iter().zip(&poly.points) {
                let local = run.iter().any(|&(rb, lo, hi)| rb == b && t > lo && t < hi);
                if !local {
                    foreign = foreign.min(p.dist(c.position));
                }
            }
        }
        saddles.push((c.id, c.position, [strands[0].clone(), strands[1].clone()], foreign));
    }

    // extrema at the maximizers of the soft distance in interior regions
    let mut extrema = Vec::new();
    for reg in m.regions.iter().filter(|r| r.interior) {
        let mut best: Option<(f64, Vec2)> = None;
        let step = 0.01;
        let n = (2.0 / step) as i64;
        for iy in 0..=n {
            for ix in 0..=n {
                let p = Vec2::new(-1.0 + ix as f64 * step, -1.0 + iy as f64 * step);
                if p.norm() >= 1.0 || m.region_at(p) != Some(reg.id) {
                    continue;
                }
                let v = field.soft(p).0.abs();
                if best.is_none_or(|b| v > b.0) {
                    best = Some((v, p));
                }
            }
        }
        let Some((_, mut x)) = best else {
            return Err(Error::Surface(format!("region {} has no sample point", reg.id)));
        };
        let s = reg.sign.value();
        let mut alpha = 0.05;
        for _ in 0..400 {
            let (v, g) = field.soft(x);
            if g.norm() < 1e-11 {
                break;
            }
            let cand = x + g * (alpha * s);
            let (vc, _) = field.soft(cand);
            if vc * s > v * s {
                x = cand;
                alpha *= 1.5;
            } else {
                alpha *= 0.3;
                if alpha < 1e-14 {
                    break;
                }
            }
        }
        extrema.push((reg.id, s, x));
    }

    // harmonic field on the disk cut along the divide and radial rays from the endpoints
    let mut barriers: Vec<(Vec2, Vec2)> = field.pieces.iter().map(|p| (p.a, p.b)).collect();
    for b in &a.divide.branches {
        for e in [b.start(), b.end()] {
            barriers.push((e, e * RAY_END));
        }
    }
    let mut bucket = Bucket::new(64);
    for (i, &(p, q)) in barriers.iter().enumerate() {
        let lo = Vec2::new(p.x.min(q.x), p.y.min(q.y));
        let hi = Vec2::new(p.x.max(q.x), p.y.max(q.y));
        bucket.insert(lo, hi, 2.0 * grid_step, i);
    }
    let cut = |p: Vec2, q: Vec2| {
        let mut best: Option<(f64, Vec2)> = None;
        for &i in bucket.at(p) {
            let (r, s) = barriers[i];
            if let Some((t, _)) = segment_intersection(p, q, r, s, (true, true)) {
                if best.is_none_or(|b| t < b.0) {
                    best = Some((t, p.lerp(q, t)));
                }
            }
        }
        best
    };
    let shift = Vec2::new(1.3e-4 * std::f64::consts::SQRT_2, 0.7e-4 * std::f64::consts::SQRT_2);
    let mut grid = Grid::new(GRID_RADIUS, grid_step, shift, cut);
    let g = &grid.field;
    let mut comp_region: Vec<Option<usize>> = vec![None; g.components()];
    for k in (0..g.label.len()).step_by(7) {
        let lab = g.label[k];
        let p = g.position(k);
        if lab == crate::harmonic::INACTIVE || p.norm() > 0.999 {
            continue;
        }
        if field.distance_to_divide(p) < 0.01 {
            continue;
        }
        let r = m.region_at(p);
        match comp_region[lab] {
            None => comp_region[lab] = r,
            Some(prev) if Some(prev) != r => {
                return Err(Error::Surface(format!("grid component {lab} spans regions {prev} and {r:?}")));
            }
            _ => {}
        }
    }
    let mut components: Vec<Option<Component>> = comp_region
        .iter()
        .map(|r| r.map(|r| Component { sign: m.regions[r].sign.value(), scale: 1.0, centre: None }))
        .collect();
    for &(region, _, c) in &extrema {
        for (lab, r) in comp_region.iter().enumerate() {
            if *r == Some(region) {
                if let Some(comp) = components[lab].as_mut() {
                    comp.centre = Some(c);
                }
            }
        }
    }
    let secs = sectors(a);
    let data = |centre: Option<Vec2>, y: Vec2| match centre {
        Some(c) => y.dist(c).max(1e-300).ln(),
        None if y.norm() > GRID_RADIUS - 1e-9 => sector_bump(&secs, y),
        None => 0.0,
    };
    let labels = grid.field.label.clone();
    grid.solve(|k, y| data(components[labels[k]].and_then(|c| c.centre), y), 1e-10, 50_000);
    field.outer = grid.finish();
    field.components = components;

    let mut centres: Vec<Vec2> = saddles.iter().map(|s| s.1).collect();
    centres.extend(extrema.iter().map(|e| e.2));
    let others = |p: Vec2| {
        centres
            .iter()
            .filter(|&&q| q.dist(p) > 1e-12)
            .map(|q| q.dist(p))
            .fold(f64::INFINITY, f64::min)
    };
    let saddle_rho: Vec<f64> = saddles.iter().map(|s| (0.45 * s.3.min(others(s.1))).min(0.3)).collect();

    // each harmonic field exceeds twice the distance across its transition zone
    let mut worst = vec![0.0f64; field.components.len()];
    let g = &field.outer;
    for k in 0..g.label.len() {
        let p = g.position(k);
        if g.label[k] == crate::harmonic::INACTIVE || p.norm() >= 1.0 {
            continue;
        }
        if saddles.iter().zip(&saddle_rho).any(|(s, &r)| p.dist(s.1) < 0.5 * r) {
            continue;
        }
        let d = field.soft(p).0.abs();
        if !(field.near..=field.far).contains(&d) {
            continue;
        }
        if let Some((lab, _, _)) = field.outer.interpolate(p) {
            // scales are still 1, so this is the unsigned harmonic field
            let Some((u, _)) = field.outer(p) else { continue };
            if u <= 0.0 {
                return Err(Error::Surface(format!("harmonic field has the wrong sign at {p:?}")));
            }
            worst[lab] = worst[lab].max(d / u);
        }
    }
    for (comp, w) in field.components.iter_mut().zip(worst) {
        if let Some(c) = comp.as_mut() {
            c.scale = c.sign * if w > 0.0 { 2.0 * w } else { 1.0 };
        }
    }

    let mut critical = Vec::new();
    for ((id, pos, strands, _), rho) in saddles.into_iter().zip(saddle_rho) {
        let probe = {
            let n0 = field.divide.branches[strands[0].branch].curve().d1(strands[0].param).perp().normalized();
            let n1 = field.divide.branches[strands[1].branch].curve().d1(strands[1].param).perp().normalized();
            pos + (n0 + n1).normalized() * (0.25 * rho)
        };
        let [(xp, _), (yp, _)] = field.saddle_coords(probe, &strands);
        let sp = m.region_at(probe).map_or(1.0, |r| m.regions[r].sign.value());
        let sy = sp * (xp * yp).signum();
        // keep |k·X·Y| below the base field across the blend annulus so |f| grows radially
        let mut k = f64::INFINITY;
        for j in 0..128 {
            for step in 0..=5 {
                let r = (0.5 + 0.1 * step as f64) * rho;
                let x = pos + Vec2::from_angle(TAU * j as f64 / 128.0) * r;
                let [(xv, _), (yv, _)] = field.saddle_coords(x, &strands);
                let xy = (xv * yv).abs();
                if xy > 1e-12 {
                    k = k.min(field.base(x).0.abs() / xy);
                }
            }
        }
        let k = if k.is_finite() && k > 0.0 { 0.9 * k } else { 1.0 / rho };
        critical.push(CriticalPoint {
            kind: CriticalKind::Saddle,
            position: pos,
            value: 0.0,
            rho,
            region: None,
            crossing: Some(id),
            chart: Chart::Saddle { strands, k: sy * k },
        });
    }
    for (region, s, pos) in extrema {
        let dist = field.distance_to_divide(pos);
        let rho = (0.3 * dist.min(others(pos)).min(1.0 - pos.norm())).min(0.15);
        let missing = || Error::Surface(format!("no harmonic data at the centre of region {region}"));
        let (lab, h, _) = field.outer.interpolate(pos).ok_or_else(missing)?;
        let scale = field.components[lab].ok_or_else(missing)?.scale;
        let lam = -2.0 * scale * (-2.0 * h).exp();
        critical.push(CriticalPoint {
            kind: if s > 0.0 { CriticalKind::Max } else { CriticalKind::Min },
            position: pos,
            value: scale,
            rho,
            region: Some(region),
            crossing: None,
            chart: Chart::Extremum { hessian: [[lam, 0.0], [0.0, lam]] },
        });
    }
    field.critical = critical;
    Ok(field)
}

/// A critical point found on the census grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FoundCritical {
    pub position: Vec2,
    /// Winding number of `∇f` around the cell: +1 extremum, −1 saddle.
    pub index: i32,
    pub region: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub step: f64,
    pub found: Vec<FoundCritical>,
    /// Local extrema of `f` on each boundary arc, per boundary region.
    pub boundary_extrema: Vec<(usize, usize)>,
    pub sign_mismatches: usize,
    /// Largest distance from a zero crossing of the grid to the divide, and from the divide
    /// to the nearest zero crossing.
    pub hausdorff: f64,
    pub model_residual: f64,
    pub checks: Vec<(String, bool)>,
}

impl Census {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

fn wrap_pi(a: f64) -> f64 {
    let mut a = a % TAU;
    if a > PI {
        a -= TAU;
    } else if a <= -PI {
        a += TAU;
    }
    a
}

/// Critical-point census and the invariants of `f` on a grid of spacing `step`.
pub fn census(field: &MorseField, a: &Analysis, step: f64) -> Census {
    let m = &a.map;
    let shift = 1e-4 * std::f64::consts::SQRT_2;
    let n = (2.0 / step).ceil() as usize;
    let node = |i: usize, j: usize| Vec2::new(-1.0 + shift + i as f64 * step, -1.0 + shift * 0.7 + j as f64 * step);
    let inside = |p: Vec2| p.norm() < 1.0 - 1e-9;
    let mut jets = vec![None; (n + 1) * (n + 1)];
    for j in 0..=n {
        for i in 0..=n {
            let p = node(i, j);
            if inside(p) {
                jets[j * (n + 1) + i] = Some(field.jet(p));
            }
        }
    }
    let mut found: Vec<FoundCritical> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            if corners.iter().any(|&(a, b)| jets[b * (n + 1) + a].is_none()) {
                continue;
            }
            // eight points around the cell to avoid aliasing the gradient rotation
            let mut ring = Vec::with_capacity(8);
            for k in 0..4 {
                let (a0, b0) = corners[k];
                let (a1, b1) = corners[(k + 1) % 4];
                let p0 = node(a0, b0);
                let p1 = node(a1, b1);
                ring.push(jets[b0 * (n + 1) + a0].unwrap().grad);
                ring.push(field.jet(p0.lerp(p1, 0.5)).grad);
            }
            let mut w = 0.0;
            for k in 0..ring.len() {
                let g0 = ring[k];
                let g1 = ring[(k + 1) % ring.len()];
                w += wrap_pi(g1.angle() - g0.angle());
            }
            let index = (w / TAU).round() as i32;
            if index != 0 {
                let c = node(i, j) + Vec2::new(0.5 * step, 0.5 * step);
                if found.iter().any(|f| f.position.dist(c) < 1.5 * step * std::f64::consts::SQRT_2 && f.index == index) {
                    continue;
                }
                found.push(FoundCritical { position: c, index, region: m.region_at(c) });
            }
        }
    }

    // sign agreement away from the divide and the zero set versus the divide
    let mut sign_mismatches = 0;
    let mut zero_points = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let Some(jt) = jets[j * (n + 1) + i] else { continue };
            let p = node(i, j);
            if field.distance_to_divide(p) > 0.02 {
                if let Some(r) = m.region_at(p) {
                    if jt.f * m.regions[r].sign.value() <= 0.0 {
                        sign_mismatches += 1;
                    }
                }
            }
            for (di, dj) in [(1, 0), (0, 1)] {
                if i + di > n || j + dj > n {
                    continue;
                }
                if let Some(jq) = jets[(j + dj) * (n + 1) + i + di] {
                    if (jt.f > 0.0) != (jq.f > 0.0) {
                        let q = node(i + di, j + dj);
                        let s = jt.f / (jt.f - jq.f);
                        zero_points.push(p.lerp(q, s));
                    }
                }
            }
        }
    }
    let mut hausdorff: f64 = 0.0;
    for &z in &zero_points {
        hausdorff = hausdorff.max(field.distance_to_divide(z));
    }
    let mut bucket = Bucket::new(50);
    for (k, z) in zero_points.iter().enumerate() {
        bucket.insert(*z, *z, 0.05, k);
    }
    for p in &field.pieces {
        if p.a.norm() > 1.0 - 2.0 * step {
            continue;
        }
        let near = bucket.at(p.a).iter().map(|&k| zero_points[k].dist(p.a)).fold(f64::INFINITY, f64::min);
        hausdorff = hausdorff.max(near.min(1.0));
    }

    // boundary arcs
    let samples = 8192;
    let mut vals = Vec::with_capacity(samples);
    for k in 0..samples {
        let ang = TAU * k as f64 / samples as f64;
        vals.push((ang, field.value(Vec2::from_angle(ang) * (1.0 - 1e-9))));
    }
    let mut ends: Vec<f64> = a
        .divide
        .branches
        .iter()
        .flat_map(|b| [crate::geom::wrap_angle(b.start().angle()), crate::geom::wrap_angle(b.end().angle())])
        .collect();
    ends.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut boundary_extrema = Vec::new();
    for k in 0..ends.len() {
        let lo = ends[k];
        let hi = if k + 1 < ends.len() { ends[k + 1] } else { ends[0] + TAU };
        let arc: Vec<f64> = vals
            .iter()
            .chain(vals.iter())
            .enumerate()
            .filter_map(|(i, &(ang, v))| {
                let ang = if i >= samples { ang + TAU } else { ang };
                (ang > lo + 0.01 && ang < hi - 0.01).then_some(v)
            })
            .collect();
        let mut count = 0;
        for w in arc.windows(3) {
            if (w[1] - w[0]) * (w[2] - w[1]) < 0.0 {
                count += 1;
            }
        }
        let mid = Vec2::from_angle(0.5 * (lo + hi)) * 0.999;
        boundary_extrema.push((m.region_at(mid).unwrap_or(usize::MAX), count));
    }

    // local models are reproduced inside the inner bump radius
    let mut model_residual: f64 = 0.0;
    for c in &field.critical {
        for k in 0..16 {
            let ang = TAU * k as f64 / 16.0;
            for rr in [0.1, 0.25, 0.45] {
                let x = c.position + Vec2::from_angle(ang) * (rr * c.rho);
                let (fm, _, _) = field.model(c, x);
                model_residual = model_residual.max((field.value(x) - fm).abs());
            }
        }
    }

    let saddles: Vec<&FoundCritical> = found.iter().filter(|f| f.index < 0).collect();
    let extrema: Vec<&FoundCritical> = found.iter().filter(|f| f.index > 0).collect();
    let saddles_ok = saddles.len() == a.crossings.len()
        && a.crossings.iter().all(|c| saddles.iter().any(|s| s.position.dist(c.position) < 2.0 * step));
    let interior: Vec<usize> = m.regions.iter().filter(|r| r.interior).map(|r| r.id).collect();
    let extrema_ok = extrema.len() == interior.len()
        && interior.iter().all(|&r| extrema.iter().filter(|e| e.region == Some(r)).count() == 1);
    let boundary_ok = boundary_extrema.iter().all(|&(_, c)| c == 1);
    let checks = vec![
        ("saddles exactly at crossings".to_string(), saddles_ok),
        ("one extremum per interior region".to_string(), extrema_ok),
        ("one boundary extremum per boundary arc".to_string(), boundary_ok),
        ("sign matches regions".to_string(), sign_mismatches == 0),
        ("zero set near divide".to_string(), hausdorff < 0.02),
        ("local models".to_string(), model_residual < 1e-3),
    ];
    Census { step, found, boundary_extrema, sign_mismatches, hausdorff, model_residual, checks }
}

/// Builds `f_P` and verifies its invariants on the census grid, refining the harmonic grid
/// on failure.
pub fn build_morse_function(a: &Analysis) -> Result<(MorseField, Census)> {
    let mut last = None;
    for &step in &GRID_STEPS {
        let field = match construct_field_with(a, step) {
            Ok(f) => f,
            Err(e @ (Error::CircleBranch | Error::Disconnected)) => return Err(e),
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let c = census(&field, a, 0.01);
        if c.pass() {
            return Ok((field, c));
        }
        let failed: Vec<String> = c.checks.iter().filter(|x| !x.1).map(|x| x.0.clone()).collect();
        last = Some(Error::Invalid(format!(
            "Morse function invariants failed: {} (critical points found: {})",
            failed.join(", "),
            c.found.len()
        )));
    }
    Err(last.expect("at least one grid step"))
}

/// Radical-inverse Halton coordinate.
fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// The `i`-th point of a low-discrepancy, area-uniform sequence on the three-sphere.
pub fn sphere_point(i: u64) -> Point4 {
    let (a, b, c) = (halton(i + 1, 2), halton(i + 1, 3), halton(i + 1, 5));
    let (rx, ru) = ((1.0 - a).sqrt(), a.sqrt());
    [rx * (TAU * b).cos(), rx * (TAU * b).sin(), ru * (TAU * c).cos(), ru * (TAU * c).sin()]
}

/// Dense lift of the divide as 4D segments, bucketed by the planar coordinate.
struct LinkTube {
    segs: Vec<(Point4, Point4)>,
    bucket: Bucket,
}

impl LinkTube {
    fn new(field: &MorseField) -> LinkTube {
        let mut segs = Vec::new();
        let d = &field.divide;
        let lift = |b: usize, t: f64, sheet: f64| -> Point4 {
            let (p, d1, _) = d.branches[b].curve().eval_all(t);
            let rho = (1.0 - p.norm2()).max(0.0).sqrt();
            let u = d1.normalized() * (rho * sheet);
            [p.x, p.y, u.x, u.y]
        };
        for p in &field.pieces {
            for sub in 0..4 {
                let s0 = p.t0 + (p.t1 - p.t0) * sub as f64 / 4.0;
                let s1 = p.t0 + (p.t1 - p.t0) * (sub + 1) as f64 / 4.0;
                for sheet in [1.0, -1.0] {
                    segs.push((lift(p.branch, s0, sheet), lift(p.branch, s1, sheet)));
                }
            }
        }
        let mut bucket = Bucket::new(40);
        for (k, (a, b)) in segs.iter().enumerate() {
            let lo = Vec2::new(a[0].min(b[0]), a[1].min(b[1]));
            let hi = Vec2::new(a[0].max(b[0]), a[1].max(b[1]));
            bucket.insert(lo, hi, TUBE_RADIUS, k);
        }
        LinkTube { segs, bucket }
    }

    fn within(&self, q: &Point4, r: f64) -> bool {
        let x = Vec2::new(q[0], q[1]);
        self.bucket.at(x).iter().any(|&k| seg_dist4(q, &self.segs[k]) < r)
    }
}

fn seg_dist4(q: &Point4, (a, b): &(Point4, Point4)) -> f64 {
    let mut ab = [0.0; 4];
    let mut aq = [0.0; 4];
    for i in 0..4 {
        ab[i] = b[i] - a[i];
        aq[i] = q[i] - a[i];
    }
    let l2: f64 = ab.iter().map(|v| v * v).sum();
    let t = if l2 > 0.0 { (aq.iter().zip(&ab).map(|(x, y)| x * y).sum::<f64>() / l2).clamp(0.0, 1.0) } else { 0.0 };
    (0..4).map(|i| (aq[i] - t * ab[i]).powi(2)).sum::<f64>().sqrt()
}

/// Orthonormal tangent frame of the three-sphere at `q` (left multiplication by i, j, k).
fn tangent_frame(q: &Point4) -> [Point4; 3] {
    let [a, b, c, d] = *q;
    [[-b, a, -d, c], [-c, d, a, -b], [-d, -c, b, a]]
}

fn split(q: &Point4) -> (Vec2, Vec2) {
    (Vec2::new(q[0], q[1]), Vec2::new(q[2], q[3]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EtaEvidence {
    pub eta: f64,
    pub min_theta: f64,
    pub min_arg_gradient: f64,
    /// Minima over the first half of the samples.
    pub min_theta_half: f64,
    pub min_arg_gradient_half: f64,
    pub pass: bool,
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberCheck {
    pub base_points: usize,
    pub two_to_one: usize,
    pub max_antipodal_error: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub eta: f64,
    pub samples: usize,
    pub accepted: usize,
    pub main: EtaEvidence,
    pub sweep: Vec<EtaEvidence>,
    /// Largest η of the sweep from which every smaller η passes.
    pub stable_from: Option<f64>,
    pub max_theta_on_link: f64,
    pub fiber: FiberCheck,
    pub pass: bool,
}

struct Minima {
    theta: Vec<f64>,
    grad: Vec<f64>,
}

fn sample_minima(field: &MorseField, tube: &LinkTube, etas: &[f64], range: std::ops::Range<u64>) -> (Minima, usize) {
    let mut mins = Minima { theta: vec![f64::INFINITY; etas.len()], grad: vec![f64::INFINITY; etas.len()] };
    let mut accepted = 0;
    let h: f64 = 1e-5;
    for i in range {
        let q = sphere_point(i);
        if tube.within(&q, TUBE_RADIUS) {
            continue;
        }
        accepted += 1;
        let (x, u) = split(&q);
        let centre = theta_parts(&field.jet(x), u);
        let mut diffs = Vec::with_capacity(3);
        for v in tangent_frame(&q) {
            let mut pair = [centre; 2];
            for (k, s) in [h, -h].into_iter().enumerate() {
                let mut p = [0.0; 4];
                for c in 0..4 {
                    p[c] = s.cos() * q[c] + s.sin() * v[c];
                }
                let (x, u) = split(&p);
                pair[k] = theta_parts(&field.jet(x), u);
            }
            diffs.push(pair);
        }
        for (k, &eta) in etas.iter().enumerate() {
            let (re, im) = centre.combine(eta);
            mins.theta[k] = mins.theta[k].min(re.hypot(im));
            let mut g2 = 0.0;
            for pair in &diffs {
                let (a_re, a_im) = pair[0].combine(eta);
                let (b_re, b_im) = pair[1].combine(eta);
                // arg(a / b)
                let darg = (a_im * b_re - a_re * b_im).atan2(a_re * b_re + a_im * b_im);
                g2 += (darg / (2.0 * h)).powi(2);
            }
            mins.grad[k] = mins.grad[k].min(g2.sqrt());
        }
    }
    (mins, accepted)
}

fn parallel_minima(field: &MorseField, tube: &LinkTube, etas: &[f64], lo: u64, hi: u64) -> (Minima, usize) {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16) as u64;
    let chunk = (hi - lo).div_ceil(threads).max(1);
    let parts: Vec<(Minima, usize)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                let a = (lo + k * chunk).min(hi);
                let b = (lo + (k + 1) * chunk).min(hi);
                s.spawn(move || sample_minima(field, tube, etas, a..b))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampling thread")).collect()
    });
    let mut out = Minima { theta: vec![f64::INFINITY; etas.len()], grad: vec![f64::INFINITY; etas.len()] };
    let mut accepted = 0;
    for (m, n) in parts {
        accepted += n;
        for k in 0..etas.len() {
            out.theta[k] = out.theta[k].min(m.theta[k]);
            out.grad[k] = out.grad[k].min(m.grad[k]);
        }
    }
    (out, accepted)
}

/// Solutions of `arg θ = 0` over base points with `f > 0`, as `(x, u)` pairs, and the
/// check that each base point carries exactly two antipodal ones.
pub fn fiber_over_one(field: &MorseField, eta: f64, base_points: usize) -> (FiberCheck, Vec<Point4>) {
    let steps = 720;
    let mut cloud = Vec::new();
    let (mut used, mut good, mut err) = (0, 0, 0.0f64);
    let mut i = 0u64;
    while used < base_points && i < 50 * base_points as u64 {
        i += 1;
        let x = Vec2::new(2.0 * halton(i, 2) - 1.0, 2.0 * halton(i, 3) - 1.0);
        if x.norm() > 0.98 {
            continue;
        }
        let j = field.jet(x);
        if j.f <= 1e-3 || j.grad.norm() < 1e-3 {
            continue;
        }
        used += 1;
        let rho = (1.0 - x.norm2()).sqrt();
        let th = |phi: f64| theta_parts(&j, Vec2::from_angle(phi) * rho).combine(eta);
        let mut roots = Vec::new();
        for k in 0..steps {
            let (p0, p1) = (TAU * k as f64 / steps as f64, TAU * (k + 1) as f64 / steps as f64);
            let (r0, i0) = th(p0);
            let (_, i1) = th(p1);
            if i0 == 0.0 && r0 > 0.0 {
                roots.push(p0);
                continue;
            }
            if i0 * i1 < 0.0 {
                let (mut a, mut b) = (p0, p1);
                for _ in 0..60 {
                    let mid = 0.5 * (a + b);
                    if th(a).1 * th(mid).1 <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                let phi = 0.5 * (a + b);
                if th(phi).0 > 0.0 {
                    roots.push(phi);
                }
            }
        }
        if roots.len() == 2 {
            good += 1;
            err = err.max(wrap_pi(roots[1] - roots[0] - PI).abs());
        }
        for phi in roots {
            let u = Vec2::from_angle(phi) * rho;
            cloud.push([x.x, x.y, u.x, u.y]);
        }
    }
    let pass = used > 0 && good == used && err < 1e-6;
    (FiberCheck { base_points: used, two_to_one: good, max_antipodal_error: err, pass }, cloud)
}

/// Stereographic image of a fiber sample from the pole `(0, 0, 0, 1)`.
pub fn stereographic_xyz(q: &Point4) -> [f64; 3] {
    let s = 1.0 / (1.0 - q[3]).max(1e-12);
    [q[0] * s, q[1] * s, q[2] * s]
}

/// Numerical evidence that `θ/|θ|` is a submersion on the sphere off a tube around the link.
pub fn regularity_evidence(field: &MorseField, eta: f64, n_samples: usize) -> Result<RegularityReport> {
    if eta.is_nan() || eta <= 0.0 {
        return Err(Error::Invalid(format!("eta must be positive, got {eta}")));
    }
    let tube = LinkTube::new(field);
    let mut etas = vec![eta];
    etas.extend(ETA_SWEEP);
    let n = n_samples as u64;
    let (first, acc_first) = parallel_minima(field, &tube, &etas, 0, n);
    let (second, acc_second) = parallel_minima(field, &tube, &etas, n, 2 * n);
    let evidence: Vec<EtaEvidence> = etas
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let th = first.theta[k].min(second.theta[k]);
            let gr = first.grad[k].min(second.grad[k]);
            let stable = (first.theta[k] - th) <= 0.2 * first.theta[k] && (first.grad[k] - gr) <= 0.2 * first.grad[k];
            EtaEvidence {
                eta: e,
                min_theta: th,
                min_arg_gradient: gr,
                min_theta_half: first.theta[k],
                min_arg_gradient_half: first.grad[k],
                pass: th > MIN_THETA && gr > MIN_ARG_GRADIENT,
                stable,
            }
        })
        .collect();
    let main = evidence[0].clone();
    let sweep = evidence[1..].to_vec();
    let mut stable_from = None;
    for k in (0..sweep.len()).rev() {
        if sweep[k].pass {
            stable_from = Some(sweep[k].eta);
        } else {
            break;
        }
    }
    let link = lift_link(&field.divide);
    let mut max_theta_on_link: f64 = 0.0;
    for comp in &link.components {
        for q in comp {
            let (x, u) = split(q);
            let norm = x.norm2() + u.norm2();
            let (x, u) = (x * (1.0 / norm.sqrt()), u * (1.0 / norm.sqrt()));
            for &e in &etas {
                let (re, im) = theta_parts(&field.jet(x), u).combine(e);
                max_theta_on_link = max_theta_on_link.max(re.hypot(im));
            }
        }
    }
    let (fiber, _) = fiber_over_one(field, eta, 400);
    let pass = main.pass && main.stable && max_theta_on_link < LINK_THETA_TOL && fiber.pass;
    Ok(RegularityReport {
        eta,
        samples: n_samples,
        accepted: acc_first + acc_second,
        main,
        sweep,
        stable_from,
        max_theta_on_link,
        fiber,
        pass,
    })
}

impl MorseField {
    pub fn count(&self, kind: CriticalKind) -> usize {
        self.crit_index(kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::parse_divide;

    fn analysis(name: &str) -> Analysis {
        let path = format!("{}/fixtures/{name}.divide", env!("CARGO_MANIFEST_DIR"));
        Analysis::new(parse_divide(&std::fs::read_to_string(path).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn bump_is_c1() {
        let c = Vec2::new(0.1, 0.2);
        for k in 1..100 {
            let r = 0.3 * k as f64 / 100.0;
            let x = c + Vec2::new(r, 0.0);
            let h = 1e-6;
            let num = (bump(x + Vec2::new(h, 0.0), c, 0.3).0 - bump(x - Vec2::new(h, 0.0), c, 0.3).0) / (2.0 * h);
            assert!((num - bump(x, c, 0.3).1.x).abs() < 1e-5, "r {r}");
        }
    }

    #[test]
    fn gradient_matches_differences() {
        let a = analysis("loop");
        let f = construct_field(&a).unwrap();
        for k in 0..200 {
            let x = Vec2::new(2.0 * halton(k + 1, 2) - 1.0, 2.0 * halton(k + 1, 3) - 1.0);
            if x.norm() > 0.95 || f.distance_to_divide(x) < 1e-3 {
                continue;
            }
            let h = 1e-6;
            let gx = (f.value(x + Vec2::new(h, 0.0)) - f.value(x - Vec2::new(h, 0.0))) / (2.0 * h);
            let gy = (f.value(x + Vec2::new(0.0, h)) - f.value(x - Vec2::new(0.0, h))) / (2.0 * h);
            let g = f.jet(x).grad;
            assert!((g - Vec2::new(gx, gy)).norm() < 1e-4 * (1.0 + g.norm()), "{x:?} {g:?} {gx} {gy}");
        }
    }

    #[test]
    fn theta_vanishes_at_crossing_tangents() {
        let a = analysis("loop");
        let f = construct_field(&a).unwrap();
        let c = &a.crossings[0];
        let rho = (1.0 - c.position.norm2()).sqrt();
        for inc in c.incidences {
            let t = crate::crossings::tangent(&a.divide, inc).normalized() * rho;
            let (re, im) = f.theta(c.position, t, 0.05).unwrap();
            assert!(re.hypot(im) < 1e-9);
        }
    }

    #[test]
    fn theta_at_extremum() {
        let a = analysis("loop");
        let f = construct_field(&a).unwrap();
        let m = f.critical.iter().find(|c| c.kind != CriticalKind::Saddle).unwrap();
        let rho = (1.0 - m.position.norm2()).sqrt();
        for k in 0..8 {
            let u = Vec2::from_angle(k as f64) * rho;
            let (re, im) = f.theta(m.position, u, 0.05).unwrap();
            // the Hessian term pushes θ further from zero at an extremum
            assert!(re.abs() > m.value.abs() && re * m.value > 0.0 && im.abs() < 1e-9);
        }
    }

    #[test]
    fn off_sphere_rejected() {
        let f = construct_field(&analysis("chord")).unwrap();
        assert!(f.theta(Vec2::new(0.1, 0.1), Vec2::new(0.1, 0.1), 0.05).is_err());
    }

    #[test]
    fn fixture_census() {
        for (name, saddles, extrema) in [("chord", 0, 0), ("loop", 1, 1), ("two-diameters", 1, 0), ("hart", 2, 2)] {
            let a = analysis(name);
            let (f, c) = build_morse_function(&a).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(c.pass(), "{name}: {:?}", c.checks);
            assert_eq!(f.count(CriticalKind::Saddle), saddles, "{name}");
            assert_eq!(c.found.iter().filter(|x| x.index > 0).count(), extrema, "{name}");
        }
    }

    #[test]
    fn sphere_points_on_sphere() {
        for i in 0..100 {
            let q = sphere_point(i);
            assert!((q.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
