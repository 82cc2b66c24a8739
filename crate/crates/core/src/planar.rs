//! The planar map of a divide: vertices, edges, regions with chess-board signs, counts.

use crate::crossings::{tangent, Crossing, Incidence};
use crate::divide::{BranchKind, Divide, Polyline};
use crate::error::{Error, Result};
use crate::geom::{point_in_polygon, point_segment, signed_area, wrap_angle, Vec2};
use std::collections::VecDeque;
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Start,
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Crossing(usize),
    Endpoint { branch: usize, end: End },
    /// Extra vertex on a circle branch without crossings.
    Marker { branch: usize },
    /// Extra vertex on the boundary circle when no arc ends there.
    BoundaryMarker,
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub kind: VertexKind,
    pub position: Vec2,
    /// Outgoing half-edges sorted counterclockwise by direction.
    pub rotation: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeKind {
    /// Piece of a branch between parameters `t0 < t1` (circle pieces may exceed the period).
    Branch { branch: usize, t0: f64, t1: f64 },
    /// Counterclockwise arc of the boundary circle from angle `a0` to `a1`.
    Boundary { a0: f64, a1: f64 },
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: usize,
    pub to: usize,
    pub points: Vec<Vec2>,
}

impl Edge {
    pub fn is_branch(&self) -> bool {
        matches!(self.kind, EdgeKind::Branch { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct Region {
    pub id: usize,
    pub sign: Sign,
    pub interior: bool,
    /// Closed half-edge walks; the first is the outer boundary, further ones are holes.
    pub walks: Vec<Vec<usize>>,
    /// Corner ids in walk order.
    pub corners: Vec<usize>,
}

impl Region {
    /// Cyclic list of (edge, side of the edge on which the region lies).
    pub fn boundary_walk(&self) -> Vec<(usize, Side)> {
        self.walks[0]
            .iter()
            .map(|&h| (h / 2, if h % 2 == 0 { Side::Left } else { Side::Right }))
            .collect()
    }
}

/// The angular sector of a region at a crossing, between two consecutive rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Corner {
    pub crossing: usize,
    pub region: usize,
    /// Outgoing half-edge bounding the sector, first in counterclockwise order.
    pub first_ray: usize,
    /// The next outgoing half-edge counterclockwise.
    pub second_ray: usize,
}

#[derive(Clone, Debug)]
pub struct PlanarMap {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub regions: Vec<Region>,
    pub corners: Vec<Corner>,
    /// Region of each half-edge (the face on its left); `None` outside the disk.
    pub face_of: Vec<Option<usize>>,
    pub crossings: Vec<Crossing>,
    pub delta: usize,
    pub r: usize,
    /// Whether the union of the branches is connected.
    pub connected: bool,
    /// Connected components of the union of branches and boundary circle.
    pub graph_components: usize,
    pub crossing_vertex: Vec<usize>,
    pub crossing_corners: Vec<[usize; 4]>,
}

pub fn twin(h: usize) -> usize {
    h ^ 1
}

impl PlanarMap {
    pub fn tail(&self, h: usize) -> usize {
        let e = &self.edges[h / 2];
        if h.is_multiple_of(2) {
            e.from
        } else {
            e.to
        }
    }

    pub fn head(&self, h: usize) -> usize {
        self.tail(twin(h))
    }

    /// Next half-edge along the face on the left of `h`.
    pub fn next(&self, h: usize) -> usize {
        let v = &self.vertices[self.head(h)];
        let t = twin(h);
        let k = v.rotation.iter().position(|&x| x == t).expect("rotation");
        v.rotation[(k + v.rotation.len() - 1) % v.rotation.len()]
    }

    /// Half-edge polyline from tail to head.
    pub fn half_edge_points(&self, h: usize) -> Vec<Vec2> {
        let mut p = self.edges[h / 2].points.clone();
        if h % 2 == 1 {
            p.reverse();
        }
        p
    }

    /// Opposite ray at a crossing vertex.
    pub fn opposite_ray(&self, h: usize) -> usize {
        let v = &self.vertices[self.tail(h)];
        debug_assert_eq!(v.rotation.len(), 4);
        let k = v.rotation.iter().position(|&x| x == h).unwrap();
        v.rotation[(k + 2) % 4]
    }

    pub fn branch_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&e| self.edges[e].is_branch())
    }

    pub fn interior_regions(&self) -> usize {
        self.regions.iter().filter(|r| r.interior).count()
    }

    /// Regions on the two sides of a branch edge: (left, right).
    pub fn edge_regions(&self, e: usize) -> (usize, usize) {
        (
            self.face_of[2 * e].expect("branch edge inside disk"),
            self.face_of[2 * e + 1].expect("branch edge inside disk"),
        )
    }

    /// Number of corners of `region` at `crossing`.
    pub fn corner_count(&self, region: usize, crossing: usize) -> usize {
        self.crossing_corners[crossing]
            .iter()
            .filter(|&&c| self.corners[c].region == region)
            .count()
    }

    /// Number of branch edges separating regions `a` and `b`.
    pub fn shared_edges(&self, a: usize, b: usize) -> usize {
        self.branch_edges()
            .filter(|&e| {
                let (l, r) = self.edge_regions(e);
                (l == a && r == b) || (l == b && r == a)
            })
            .count()
    }

    /// A crossing is à quatre vents when all four sectors reach the boundary circle.
    pub fn is_four_winds(&self, crossing: usize) -> bool {
        self.crossing_corners[crossing]
            .iter()
            .all(|&c| !self.regions[self.corners[c].region].interior)
    }

    /// A point inside the region, close to its first boundary edge.
    pub fn sample_point(&self, region: usize) -> Vec2 {
        let reg = &self.regions[region];
        let mut best: Option<(f64, Vec2)> = None;
        for &h in &reg.walks[0] {
            let pts = self.half_edge_points(h);
            let k = pts.len() / 2;
            let (a, b) = if pts.len() >= 2 { (pts[k.saturating_sub(1)], pts[k.max(1)]) } else { continue };
            let dir = b - a;
            if dir.norm() == 0.0 {
                continue;
            }
            let mid = a.lerp(b, 0.5);
            for eps in [1e-3, 1e-4, 1e-5] {
                let q = mid + dir.normalized().perp() * eps;
                if q.norm() < 1.0 && self.region_at(q) == Some(region) {
                    let score = eps;
                    if best.is_none_or(|(s, _)| score > s) {
                        best = Some((score, q));
                    }
                    break;
                }
            }
        }
        best.map(|b| b.1).unwrap_or_else(|| self.vertices[self.tail(reg.walks[0][0])].position)
    }

    /// Region containing `p` (inside the open disk), located by the nearest branch edge.
    pub fn region_at(&self, p: Vec2) -> Option<usize> {
        if p.norm() > 1.0 {
            return None;
        }
        let mut best = (f64::INFINITY, 0usize, 0usize);
        for e in self.branch_edges() {
            let pts = &self.edges[e].points;
            for k in 0..pts.len() - 1 {
                let (dist, _) = point_segment(p, pts[k], pts[k + 1]);
                if dist < best.0 {
                    best = (dist, e, k);
                }
            }
        }
        if !best.0.is_finite() {
            return self.regions.first().map(|r| r.id);
        }
        let (_, e, k) = best;
        let pts = &self.edges[e].points;
        let (a, b) = (pts[k], pts[k + 1]);
        let (_, t) = point_segment(p, a, b);
        // near a segment end use the neighbouring segment direction as well
        let dir = if t <= 0.0 && k > 0 {
            (b - pts[k - 1]).normalized()
        } else if t >= 1.0 && k + 2 < pts.len() {
            (pts[k + 2] - a).normalized()
        } else {
            (b - a).normalized()
        };
        let foot = a.lerp(b, t);
        let side = dir.cross(p - foot);
        let h = if side >= 0.0 { 2 * e } else { 2 * e + 1 };
        self.face_of[h]
    }
}

/// Sign convention anchor: boundary angle just past the start of the first branch.
pub fn base_angle(d: &Divide) -> f64 {
    let b = &d.branches[0];
    let a = if b.kind == BranchKind::Arc { b.start().angle() } else { 0.0 };
    wrap_angle(a + 1e-2)
}

struct Builder<'a> {
    d: &'a Divide,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    dirs: Vec<Vec2>,
}

impl<'a> Builder<'a> {
    fn vertex(&mut self, kind: VertexKind, position: Vec2) -> usize {
        self.vertices.push(Vertex { kind, position, rotation: Vec::new() });
        self.vertices.len() - 1
    }

    fn edge(&mut self, kind: EdgeKind, from: usize, to: usize, points: Vec<Vec2>, d_from: Vec2, d_to: Vec2) {
        self.edges.push(Edge { kind, from, to, points });
        self.dirs.push(d_from);
        self.dirs.push(d_to);
    }

    fn branch_piece(&self, pl: &Polyline, t0: f64, t1: f64, p0: Vec2, p1: Vec2) -> Vec<Vec2> {
        let period = self.d.branches[pl.branch].domain();
        let mut pts = vec![p0];
        let n = pl.params.len() - if pl.closed { 1 } else { 0 };
        let mut inner: Vec<(f64, Vec2)> = Vec::new();
        for k in 0..n {
            let mut t = pl.params[k];
            if pl.closed && t <= t0 {
                t += period;
            }
            if t > t0 + 1e-12 && t < t1 - 1e-12 {
                inner.push((t, pl.points[k]));
            }
        }
        inner.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pts.extend(inner.into_iter().map(|x| x.1));
        pts.push(p1);
        pts
    }
}

/// Builds the planar map from the dense polylines and the crossings.
pub fn build_planar_map(d: &Divide, polylines: &[Polyline], crossings: &[Crossing]) -> Result<PlanarMap> {
    let mut b = Builder { d, vertices: Vec::new(), edges: Vec::new(), dirs: Vec::new() };
    let crossing_vertex: Vec<usize> = crossings
        .iter()
        .map(|c| b.vertex(VertexKind::Crossing(c.id), c.position))
        .collect();
    // endpoints of arcs, in branch order
    let mut endpoint_vertex = vec![(usize::MAX, usize::MAX); d.branches.len()];
    for (i, br) in d.branches.iter().enumerate() {
        if br.kind == BranchKind::Arc {
            let s = b.vertex(VertexKind::Endpoint { branch: i, end: End::Start }, br.start());
            let e = b.vertex(VertexKind::Endpoint { branch: i, end: End::End }, br.end());
            endpoint_vertex[i] = (s, e);
        }
    }
    // branch edges
    for (i, br) in d.branches.iter().enumerate() {
        let curve = br.curve();
        let mut stops: Vec<(f64, usize)> = Vec::new();
        for c in crossings {
            for inc in c.incidences {
                if inc.branch == i {
                    stops.push((inc.param, crossing_vertex[c.id]));
                }
            }
        }
        stops.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let pl = &polylines[i];
        match br.kind {
            BranchKind::Arc => {
                let (s, e) = endpoint_vertex[i];
                let mut seq = vec![(0.0, s)];
                seq.extend(stops);
                seq.push((br.domain(), e));
                for w in seq.windows(2) {
                    let (t0, v0) = w[0];
                    let (t1, v1) = w[1];
                    let p0 = b.vertices[v0].position;
                    let p1 = b.vertices[v1].position;
                    let pts = b.branch_piece(pl, t0, t1, p0, p1);
                    b.edge(
                        EdgeKind::Branch { branch: i, t0, t1 },
                        v0,
                        v1,
                        pts,
                        curve.d1(t0),
                        -curve.d1(t1),
                    );
                }
            }
            BranchKind::Circle => {
                let period = br.domain();
                if stops.is_empty() {
                    let m = b.vertex(VertexKind::Marker { branch: i }, curve.eval(0.0));
                    stops.push((0.0, m));
                }
                let n = stops.len();
                for k in 0..n {
                    let (t0, v0) = stops[k];
                    let (mut t1, v1) = stops[(k + 1) % n];
                    if k + 1 == n {
                        t1 += period;
                    }
                    let p0 = b.vertices[v0].position;
                    let p1 = b.vertices[v1].position;
                    let pts = b.branch_piece(pl, t0, t1, p0, p1);
                    b.edge(
                        EdgeKind::Branch { branch: i, t0, t1 },
                        v0,
                        v1,
                        pts,
                        curve.d1(t0),
                        -curve.d1(t1),
                    );
                }
            }
        }
    }
    // boundary arcs between consecutive endpoints
    let mut ends: Vec<(f64, usize)> = Vec::new();
    for &(s, e) in &endpoint_vertex {
        if s != usize::MAX {
            ends.push((wrap_angle(b.vertices[s].position.angle()), s));
            ends.push((wrap_angle(b.vertices[e].position.angle()), e));
        }
    }
    ends.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for k in 0..ends.len() {
        let (a0, a1) = (ends[k].0, ends[(k + 1) % ends.len()].0);
        if ends.len() > 1 && (wrap_angle(a1 - a0) < 1e-9) {
            let bi = |v: usize| match b.vertices[v].kind {
                VertexKind::Endpoint { branch, .. } => d.branches[branch].id,
                _ => -1,
            };
            return Err(Error::SharedEndpoint { a: bi(ends[k].1), b: bi(ends[(k + 1) % ends.len()].1) });
        }
    }
    if ends.is_empty() {
        let m = b.vertex(VertexKind::BoundaryMarker, Vec2::new(1.0, 0.0));
        ends.push((0.0, m));
    }
    let n_ends = ends.len();
    for k in 0..n_ends {
        let (a0, v0) = ends[k];
        let (mut a1, v1) = ends[(k + 1) % n_ends];
        if a1 <= a0 {
            a1 += TAU;
        }
        let steps = (((a1 - a0) / 0.02).ceil() as usize).max(2);
        let mut pts: Vec<Vec2> = (0..=steps)
            .map(|j| Vec2::from_angle(a0 + (a1 - a0) * j as f64 / steps as f64))
            .collect();
        pts[0] = b.vertices[v0].position;
        pts[steps] = b.vertices[v1].position;
        b.edge(
            EdgeKind::Boundary { a0, a1 },
            v0,
            v1,
            pts,
            Vec2::from_angle(a0).perp(),
            -Vec2::from_angle(a1).perp(),
        );
    }
    let Builder { mut vertices, edges, dirs, .. } = b;
    for h in 0..dirs.len() {
        let e = &edges[h / 2];
        let v = if h % 2 == 0 { e.from } else { e.to };
        vertices[v].rotation.push(h);
    }
    for v in vertices.iter_mut() {
        v.rotation.sort_by(|&x, &y| {
            let ax = wrap_angle(dirs[x].angle());
            let ay = wrap_angle(dirs[y].angle());
            ax.partial_cmp(&ay).unwrap()
        });
    }
    for (cid, &v) in crossing_vertex.iter().enumerate() {
        if vertices[v].rotation.len() != 4 {
            return Err(Error::PlanarMap(format!("crossing {cid} has degree {}", vertices[v].rotation.len())));
        }
    }
    let mut map = PlanarMap {
        vertices,
        edges,
        regions: Vec::new(),
        corners: Vec::new(),
        face_of: Vec::new(),
        crossings: crossings.to_vec(),
        delta: crossings.len(),
        r: d.branches.len(),
        connected: false,
        graph_components: 0,
        crossing_vertex,
        crossing_corners: Vec::new(),
    };
    extract_regions(&mut map)?;
    assign_signs(&mut map, base_angle(d))?;
    map.connected = branches_connected(d.branches.len(), crossings);
    map.graph_components = graph_components(&map);
    build_corners(&mut map);
    let v = map.vertices.len() as i64;
    let e = map.edges.len() as i64;
    let f = map.regions.len() as i64;
    if v - e + f != map.graph_components as i64 {
        return Err(Error::PlanarMap(format!("Euler check failed: V={v} E={e} F={f}")));
    }
    Ok(map)
}

fn walk_polygon(map: &PlanarMap, walk: &[usize]) -> Vec<Vec2> {
    let mut poly = Vec::new();
    for &h in walk {
        let pts = map.half_edge_points(h);
        poly.extend_from_slice(&pts[..pts.len() - 1]);
    }
    poly
}

fn extract_regions(map: &mut PlanarMap) -> Result<()> {
    let nh = map.edges.len() * 2;
    let mut seen = vec![false; nh];
    let mut walks: Vec<Vec<usize>> = Vec::new();
    for h0 in 0..nh {
        if seen[h0] {
            continue;
        }
        let mut walk = Vec::new();
        let mut h = h0;
        while !seen[h] {
            seen[h] = true;
            walk.push(h);
            h = map.next(h);
        }
        if h != h0 {
            return Err(Error::PlanarMap("face traversal did not close".into()));
        }
        walks.push(walk);
    }
    let outer_boundary = |w: &Vec<usize>| {
        w.iter()
            .any(|&h| h % 2 == 1 && matches!(map.edges[h / 2].kind, EdgeKind::Boundary { .. }))
    };
    let mut face_of = vec![None; nh];
    let mut regions: Vec<Region> = Vec::new();
    let mut holes = Vec::new();
    for w in walks {
        if outer_boundary(&w) {
            continue;
        }
        let area = signed_area(&walk_polygon(map, &w));
        if area > 0.0 {
            let id = regions.len();
            for &h in &w {
                face_of[h] = Some(id);
            }
            let interior = !w.iter().any(|&h| matches!(map.edges[h / 2].kind, EdgeKind::Boundary { .. }));
            regions.push(Region { id, sign: Sign::Minus, interior, walks: vec![w], corners: Vec::new() });
        } else {
            holes.push(w);
        }
    }
    let polys: Vec<(f64, Vec<Vec2>)> = regions
        .iter()
        .map(|r| {
            let p = walk_polygon(map, &r.walks[0]);
            (signed_area(&p), p)
        })
        .collect();
    for w in holes {
        // probe just outside the hole component, on the left of one of its half-edges
        let pts = map.half_edge_points(w[0]);
        let (a, b) = (pts[0], pts[1]);
        let q = a.lerp(b, 0.5) + (b - a).normalized().perp() * 1e-7;
        let owner = polys
            .iter()
            .enumerate()
            .filter(|(_, (_, p))| point_in_polygon(q, p))
            .min_by(|x, y| x.1 .0.partial_cmp(&y.1 .0).unwrap())
            .map(|(i, _)| i)
            .ok_or_else(|| Error::PlanarMap("hole without enclosing region".into()))?;
        for &h in &w {
            face_of[h] = Some(owner);
        }
        regions[owner].walks.push(w);
    }
    map.regions = regions;
    map.face_of = face_of;
    Ok(())
}

fn assign_signs(map: &mut PlanarMap, angle: f64) -> Result<()> {
    let n = map.regions.len();
    let mut base = None;
    for (e, edge) in map.edges.iter().enumerate() {
        if let EdgeKind::Boundary { a0, a1 } = edge.kind {
            let mut a = angle;
            if a < a0 {
                a += TAU;
            }
            if a >= a0 && a <= a1 {
                base = map.face_of[2 * e];
                break;
            }
        }
    }
    let base = base.ok_or_else(|| Error::PlanarMap("no base region".into()))?;
    let mut sign: Vec<Option<Sign>> = vec![None; n];
    let mut adj = vec![Vec::new(); n];
    for e in map.branch_edges() {
        let (l, r) = map.edge_regions(e);
        adj[l].push(r);
        adj[r].push(l);
    }
    // regions not reachable through branch edges (a divide split by the boundary) get
    // their own seeds from the boundary-adjacent parity
    let mut order: Vec<usize> = vec![base];
    order.extend((0..n).filter(|&i| i != base));
    for &seed in &order {
        if sign[seed].is_some() {
            continue;
        }
        sign[seed] = Some(Sign::Minus);
        let mut q = VecDeque::from([seed]);
        while let Some(x) = q.pop_front() {
            let s = sign[x].unwrap();
            for &y in &adj[x] {
                match sign[y] {
                    None => {
                        sign[y] = Some(s.flip());
                        q.push_back(y);
                    }
                    Some(t) if t == s => {
                        return Err(Error::PlanarMap(format!("chess-board coloring fails between regions {x} and {y}")));
                    }
                    _ => {}
                }
            }
        }
    }
    for (i, r) in map.regions.iter_mut().enumerate() {
        r.sign = sign[i].unwrap();
    }
    Ok(())
}

fn branches_connected(nb: usize, crossings: &[Crossing]) -> bool {
    let mut parent: Vec<usize> = (0..nb).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in crossings {
        let [Incidence { branch: a, .. }, Incidence { branch: b, .. }] = c.incidences;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let r0 = find(&mut parent, 0);
    (0..nb).all(|i| find(&mut parent, i) == r0)
}

fn graph_components(map: &PlanarMap) -> usize {
    let n = map.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in &map.edges {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        parent[a] = b;
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

fn build_corners(map: &mut PlanarMap) {
    let mut corners = Vec::new();
    let mut per_crossing: Vec<Vec<usize>> = vec![Vec::new(); map.crossings.len()];
    for rid in 0..map.regions.len() {
        let mut ids = Vec::new();
        for w in map.regions[rid].walks.clone() {
            for k in 0..w.len() {
                let h = w[k];
                let g = w[(k + 1) % w.len()];
                if let VertexKind::Crossing(c) = map.vertices[map.head(h)].kind {
                    let id = corners.len();
                    corners.push(Corner { crossing: c, region: rid, first_ray: g, second_ray: twin(h) });
                    per_crossing[c].push(id);
                    ids.push(id);
                }
            }
        }
        map.regions[rid].corners = ids;
    }
    // order each crossing's corners counterclockwise, starting from the first rotation slot
    map.crossing_corners = per_crossing
        .into_iter()
        .enumerate()
        .map(|(c, mut ids)| {
            let rot = &map.vertices[map.crossing_vertex[c]].rotation;
            ids.sort_by_key(|&i| rot.iter().position(|&h| h == corners[i].first_ray).unwrap());
            [ids[0], ids[1], ids[2], ids[3]]
        })
        .collect();
    map.corners = corners;
}

/// Combinatorial counts of a divide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub delta: usize,
    pub r: usize,
    /// First Betti number of the fiber, for connected divides.
    pub mu: Option<i64>,
    pub genus: Option<i64>,
    pub interior_regions: usize,
}

pub fn counts(m: &PlanarMap) -> Counts {
    let (delta, r) = (m.delta as i64, m.r as i64);
    let (mu, genus) = if m.connected {
        (Some(2 * delta - r + 1), Some(delta - r + 1))
    } else {
        (None, None)
    };
    Counts {
        delta: m.delta,
        r: m.r,
        mu,
        genus,
        interior_regions: m.interior_regions(),
    }
}

/// Direction of the outgoing half-edge `h` at its tail.
pub fn ray_direction(d: &Divide, map: &PlanarMap, h: usize) -> Vec2 {
    match map.edges[h / 2].kind {
        EdgeKind::Branch { branch, t0, t1 } => {
            let inc = Incidence { branch, param: if h.is_multiple_of(2) { t0 } else { t1 } };
            let t = tangent(d, inc);
            if h.is_multiple_of(2) {
                t
            } else {
                -t
            }
        }
        EdgeKind::Boundary { a0, a1 } => {
            if h.is_multiple_of(2) {
                Vec2::from_angle(a0).perp()
            } else {
                -Vec2::from_angle(a1).perp()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossings::detect_crossings;
    use crate::divide::parse_divide;

    pub(crate) fn map_of(text: &str) -> PlanarMap {
        let d = parse_divide(text).unwrap();
        let pls = d.polylines().unwrap();
        let cs = detect_crossings(&d, &pls).unwrap();
        build_planar_map(&d, &pls, &cs).unwrap()
    }

    #[test]
    fn chord_map() {
        let m = map_of("divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)");
        assert_eq!(m.regions.len(), 2);
        assert!(m.regions.iter().all(|r| !r.interior));
        let c = counts(&m);
        assert_eq!((c.delta, c.r, c.mu, c.genus), (0, 1, Some(0), Some(0)));
        // base point at angle π + 0.01 lies below the chord
        let below = m.region_at(Vec2::new(0.0, -0.5)).unwrap();
        assert_eq!(m.regions[below].sign, Sign::Minus);
    }

    #[test]
    fn two_diameters_map() {
        let m = map_of("divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)\narc 2: (0,-1) (0,-0.3) (0,0.3) (0,1)");
        assert_eq!(m.regions.len(), 4);
        assert!(m.regions.iter().all(|r| !r.interior));
        assert_eq!((m.delta, m.r), (1, 2));
        let q = |x: f64, y: f64| m.regions[m.region_at(Vec2::new(x, y)).unwrap()].sign;
        assert_eq!(q(0.5, 0.5), q(-0.5, -0.5));
        assert_ne!(q(0.5, 0.5), q(-0.5, 0.5));
        assert!(m.is_four_winds(0));
    }

    #[test]
    fn circle_inside_disk() {
        let m = map_of("divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)\ncircle 2: (0.2,0.5) (0,0.7) (-0.2,0.5) (0,0.3)");
        assert!(!m.connected);
        assert_eq!(m.graph_components, 2);
        assert_eq!(m.regions.len(), 3);
        let inside = m.region_at(Vec2::new(0.0, 0.5)).unwrap();
        let around = m.region_at(Vec2::new(0.0, 0.15)).unwrap();
        assert_ne!(inside, around);
        assert_ne!(m.regions[inside].sign, m.regions[around].sign);
        assert_eq!(m.regions[around].walks.len(), 2);
    }

    #[test]
    fn fixture_regions() {
        for (name, text, delta, r, interior) in [
            ("loop", include_str!("../fixtures/loop.divide"), 1, 1, 1),
            ("hart", include_str!("../fixtures/hart.divide"), 2, 1, 2),
            ("triangle", include_str!("../fixtures/triangle.divide"), 3, 3, 1),
            ("disjoint", include_str!("../fixtures/disjoint-chords.divide"), 0, 2, 0),
        ] {
            let m = map_of(text);
            assert_eq!((m.delta, m.r, m.interior_regions()), (delta, r, interior), "{name}");
            for e in m.branch_edges() {
                let (a, b) = m.edge_regions(e);
                assert_ne!(m.regions[a].sign, m.regions[b].sign, "{name}");
            }
            for c in 0..m.delta {
                let regs: Vec<usize> = m.crossing_corners[c].iter().map(|&k| m.corners[k].region).collect();
                assert_eq!(m.regions[regs[0]].sign, m.regions[regs[2]].sign);
                assert_ne!(m.regions[regs[0]].sign, m.regions[regs[1]].sign);
            }
        }
    }
}
