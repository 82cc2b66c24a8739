//! Combinatorial model of the fiber surface over the positive regions of a divide.
//!
//! Each positive region carries two sheets. A sheet is cut into polygonal tiles by arms
//! running from the region's extremum (a circle of directions for interior regions, a
//! point on the boundary circle otherwise) to the gluing intervals over its corners.

use crate::error::{Error, Result};
use crate::planar::{twin, EdgeKind, PlanarMap, Sign, VertexKind};
use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::{FRAC_PI_2, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FiberSheet {
    Plus,
    Minus,
}

impl FiberSheet {
    pub fn other(self) -> Self {
        match self {
            FiberSheet::Plus => FiberSheet::Minus,
            FiberSheet::Minus => FiberSheet::Plus,
        }
    }

    fn sign(self) -> f64 {
        match self {
            FiberSheet::Plus => 1.0,
            FiberSheet::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FVertex {
    /// Point of the link over a crossing, with the direction of a ray.
    Link { crossing: usize, ray: usize },
    /// Point of the link over an endpoint of an arc (planar-map vertex).
    Tip { vertex: usize },
    /// Midpoint of a gluing interval over a crossing, keyed by its two end rays.
    Mid { crossing: usize, rays: (usize, usize) },
    /// Point on the circle over an interior extremum.
    Hub { region: usize, sheet: FiberSheet, corner: usize },
    /// Point on the boundary circle inside a boundary region.
    Rim { region: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FEdge {
    /// Lift of a planar-map half-edge on a sheet of its positive side.
    LinkArc { half_edge: usize, sheet: FiberSheet },
    /// Half of a gluing interval, from the link point at `ray` to the midpoint.
    HalfInterval { crossing: usize, rays: (usize, usize), ray: usize },
    Arm { region: usize, sheet: FiberSheet, corner: usize },
    /// Piece `index` of the circle over an interior extremum.
    Circle { region: usize, index: usize },
    /// Piece of the boundary arc of a boundary region, `0` after the hub, `1` before it.
    RimArc { region: usize, side: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub region: usize,
    pub sheet: FiberSheet,
    pub tile: usize,
    /// Closed boundary walk of (edge, traversed forward).
    pub boundary: Vec<(usize, bool)>,
}

#[derive(Clone, Debug)]
pub struct FiberSurface {
    pub vertices: Vec<FVertex>,
    pub edges: Vec<(usize, usize, FEdge)>,
    pub faces: Vec<Face>,
    pub euler_char: i64,
    pub boundary_components: usize,
    /// Face orientation reversals making the surface coherently oriented.
    pub face_flip: Vec<bool>,
    /// Edges completing a basis of H₁ (one cycle each, closed through the spanning tree).
    pub basis_edges: Vec<usize>,
    vertex_index: BTreeMap<FVertex, usize>,
    edge_index: BTreeMap<FEdge, usize>,
    edge_faces: Vec<Vec<usize>>,
    /// Cotree (face, edge to parent) pairs, parents before children.
    cotree_order: Vec<(usize, usize)>,
    /// Hub angles on each interior extremum circle, sorted.
    pub circles: BTreeMap<usize, Vec<(f64, usize)>>,
}

/// Positions in the walk where the region has a corner: (walk position, corner id).
fn walk_corners(m: &PlanarMap, region: usize, walk: &[usize]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for p in 0..walk.len() {
        let h = walk[p];
        let g = walk[(p + 1) % walk.len()];
        if let VertexKind::Crossing(c) = m.vertices[m.head(h)].kind {
            let id = m.crossing_corners[c]
                .iter()
                .copied()
                .find(|&k| m.corners[k].region == region && m.corners[k].first_ray == g)
                .ok_or_else(|| Error::Surface(format!("corner lookup failed at crossing {c}")))?;
            out.push((p, id));
        }
    }
    Ok(out)
}

/// Unordered ray pair of the gluing interval used by `sheet` of a corner's region.
pub fn interval_rays(m: &PlanarMap, corner: usize, sheet: FiberSheet) -> (usize, usize) {
    let c = m.corners[corner];
    let (a, b) = match sheet {
        FiberSheet::Plus => (c.first_ray, m.opposite_ray(c.second_ray)),
        FiberSheet::Minus => (m.opposite_ray(c.first_ray), c.second_ray),
    };
    (a.min(b), a.max(b))
}

fn hub_angle(i: usize, k: usize, sheet: FiberSheet) -> f64 {
    let phi = TAU * i as f64 / k as f64 + 1e-3 * i as f64 / k as f64;
    (phi + sheet.sign() * FRAC_PI_2).rem_euclid(TAU)
}

struct Builder<'a> {
    m: &'a PlanarMap,
    vertices: Vec<FVertex>,
    vertex_index: BTreeMap<FVertex, usize>,
    edges: Vec<(usize, usize, FEdge)>,
    edge_index: BTreeMap<FEdge, usize>,
    faces: Vec<Face>,
    circles: BTreeMap<usize, Vec<(f64, usize)>>,
}

impl<'a> Builder<'a> {
    fn vertex(&mut self, v: FVertex) -> usize {
        if let Some(&i) = self.vertex_index.get(&v) {
            return i;
        }
        self.vertices.push(v);
        self.vertex_index.insert(v, self.vertices.len() - 1);
        self.vertices.len() - 1
    }

    /// Link point at the tail of planar half-edge `h` with direction `h` (or its opposite).
    fn link_vertex(&mut self, h: usize, opposite: bool) -> usize {
        let v = self.m.tail(h);
        match self.m.vertices[v].kind {
            VertexKind::Crossing(c) => {
                let ray = if opposite { self.m.opposite_ray(h) } else { h };
                self.vertex(FVertex::Link { crossing: c, ray })
            }
            _ => self.vertex(FVertex::Tip { vertex: v }),
        }
    }

    fn edge(&mut self, from: usize, to: usize, key: FEdge) -> Result<(usize, bool)> {
        if let Some(&e) = self.edge_index.get(&key) {
            let (a, b, _) = self.edges[e];
            return if (a, b) == (from, to) {
                Ok((e, true))
            } else if (a, b) == (to, from) {
                Ok((e, false))
            } else {
                Err(Error::Surface(format!("edge {key:?} reused with different ends")))
            };
        }
        self.edges.push((from, to, key));
        self.edge_index.insert(key, self.edges.len() - 1);
        Ok((self.edges.len() - 1, true))
    }

    /// Lifted link arcs along `walk[range]` on `sheet`; returns the edges and the end vertex.
    fn link_arcs(&mut self, walk: &[usize], positions: impl Iterator<Item = usize>, sheet: FiberSheet, out: &mut Vec<(usize, bool)>) -> Result<()> {
        for p in positions {
            let h = walk[p % walk.len()];
            let (from, to) = match sheet {
                FiberSheet::Plus => (self.link_vertex(h, false), self.link_vertex(twin(h), true)),
                FiberSheet::Minus => (self.link_vertex(h, true), self.link_vertex(twin(h), false)),
            };
            out.push(self.edge(from, to, FEdge::LinkArc { half_edge: h, sheet })?);
        }
        Ok(())
    }

    fn mid(&mut self, corner: usize, sheet: FiberSheet) -> usize {
        let c = self.m.corners[corner].crossing;
        let rays = interval_rays(self.m, corner, sheet);
        self.vertex(FVertex::Mid { crossing: c, rays })
    }

    /// Half-interval between the midpoint and the link point at `ray`.
    fn half(&mut self, corner: usize, sheet: FiberSheet, ray: usize, to_mid: bool) -> Result<(usize, bool)> {
        let c = self.m.corners[corner].crossing;
        let rays = interval_rays(self.m, corner, sheet);
        let mid = self.mid(corner, sheet);
        let link = self.vertex(FVertex::Link { crossing: c, ray });
        let key = FEdge::HalfInterval { crossing: c, rays, ray };
        if to_mid {
            self.edge(link, mid, key)
        } else {
            self.edge(mid, link, key)
        }
    }

    /// Rays where the sheet's boundary leaves and enters the corner.
    fn corner_rays(&self, corner: usize, sheet: FiberSheet) -> (usize, usize) {
        let c = self.m.corners[corner];
        match sheet {
            // (arriving link point ray, leaving link point ray)
            FiberSheet::Plus => (self.m.opposite_ray(c.second_ray), c.first_ray),
            FiberSheet::Minus => (c.second_ray, self.m.opposite_ray(c.first_ray)),
        }
    }

    fn interior_region(&mut self, region: usize) -> Result<()> {
        let walk = self.m.regions[region].walks[0].clone();
        let corners = walk_corners(self.m, region, &walk)?;
        let k = corners.len();
        if k == 0 {
            return Err(Error::Surface(format!("interior region {region} has no corners")));
        }
        // circle over the extremum, subdivided by the hubs of both sheets
        let mut hubs: Vec<(f64, usize)> = Vec::new();
        for sheet in [FiberSheet::Plus, FiberSheet::Minus] {
            for (i, &(_, c)) in corners.iter().enumerate() {
                let v = self.vertex(FVertex::Hub { region, sheet, corner: c });
                hubs.push((hub_angle(i, k, sheet), v));
            }
        }
        hubs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in hubs.windows(2) {
            if (w[1].0 - w[0].0).abs() < 1e-9 {
                return Err(Error::Surface("coincident hubs".into()));
            }
        }
        let n = hubs.len();
        for j in 0..n {
            self.edge(hubs[j].1, hubs[(j + 1) % n].1, FEdge::Circle { region, index: j })?;
        }
        self.circles.insert(region, hubs.clone());
        for sheet in [FiberSheet::Plus, FiberSheet::Minus] {
            for i in 0..k {
                let (p0, c0) = corners[i];
                let (p1, c1) = corners[(i + 1) % k];
                let mut b = Vec::new();
                let hub0 = self.vertex(FVertex::Hub { region, sheet, corner: c0 });
                let hub1 = self.vertex(FVertex::Hub { region, sheet, corner: c1 });
                let mid0 = self.mid(c0, sheet);
                b.push(self.edge(hub0, mid0, FEdge::Arm { region, sheet, corner: c0 })?);
                let (_, leave) = self.corner_rays(c0, sheet);
                b.push(self.half(c0, sheet, leave, false)?);
                let end = if p1 > p0 { p1 } else { p1 + walk.len() };
                self.link_arcs(&walk, p0 + 1..=end, sheet, &mut b)?;
                let (arrive, _) = self.corner_rays(c1, sheet);
                b.push(self.half(c1, sheet, arrive, true)?);
                let mid1 = self.mid(c1, sheet);
                b.push(self.edge(mid1, hub1, FEdge::Arm { region, sheet, corner: c1 })?);
                // back along the circle with decreasing angle
                let pos = |v: usize| hubs.iter().position(|h| h.1 == v).unwrap();
                let mut j = pos(hub1);
                let target = pos(hub0);
                loop {
                    let prev = (j + n - 1) % n;
                    b.push(self.edge(hubs[j].1, hubs[prev].1, FEdge::Circle { region, index: prev })?);
                    j = prev;
                    if j == target {
                        break;
                    }
                }
                self.faces.push(Face { region, sheet, tile: i, boundary: b });
            }
        }
        Ok(())
    }

    fn boundary_region(&mut self, region: usize) -> Result<()> {
        let walk0 = &self.m.regions[region].walks[0];
        let bpos: Vec<usize> = (0..walk0.len())
            .filter(|&p| matches!(self.m.edges[walk0[p] / 2].kind, EdgeKind::Boundary { .. }))
            .collect();
        if bpos.len() != 1 || self.m.regions[region].walks.len() != 1 {
            return Err(Error::Surface(format!("region {region} must meet the boundary circle in one arc")));
        }
        // rotate so the walk ends with the boundary half-edge
        let n = walk0.len();
        let walk: Vec<usize> = (0..n).map(|j| walk0[(bpos[0] + 1 + j) % n]).collect();
        let bh = walk[n - 1];
        let tip_x = self.vertex(FVertex::Tip { vertex: self.m.tail(bh) });
        let tip_y = self.vertex(FVertex::Tip { vertex: self.m.head(bh) });
        let hub = self.vertex(FVertex::Rim { region });
        let corners = walk_corners(self.m, region, &walk[..n - 1])?;
        // the last walk position never ends at a crossing, so wrap-around lookups are harmless
        let k = corners.len();
        for sheet in [FiberSheet::Plus, FiberSheet::Minus] {
            for tile in 0..=k {
                let mut b = Vec::new();
                let start = if tile == 0 {
                    b.push(self.edge(hub, tip_y, FEdge::RimArc { region, side: 0 })?);
                    0
                } else {
                    let (p, c) = corners[tile - 1];
                    let mid = self.mid(c, sheet);
                    b.push(self.edge(hub, mid, FEdge::Arm { region, sheet, corner: c })?);
                    let (_, leave) = self.corner_rays(c, sheet);
                    b.push(self.half(c, sheet, leave, false)?);
                    p + 1
                };
                if tile < k {
                    let (p, c) = corners[tile];
                    self.link_arcs(&walk, start..=p, sheet, &mut b)?;
                    let (arrive, _) = self.corner_rays(c, sheet);
                    b.push(self.half(c, sheet, arrive, true)?);
                    let mid = self.mid(c, sheet);
                    b.push(self.edge(mid, hub, FEdge::Arm { region, sheet, corner: c })?);
                } else {
                    self.link_arcs(&walk, start..n - 1, sheet, &mut b)?;
                    b.push(self.edge(tip_x, hub, FEdge::RimArc { region, side: 1 })?);
                }
                self.faces.push(Face { region, sheet, tile, boundary: b });
            }
        }
        Ok(())
    }
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut x = x;
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Builds the fiber surface and verifies its topology.
pub fn build_fiber_surface(m: &PlanarMap) -> Result<FiberSurface> {
    if !m.connected {
        return Err(Error::Disconnected);
    }
    if m.vertices.iter().any(|v| matches!(v.kind, VertexKind::Marker { .. } | VertexKind::BoundaryMarker)) {
        return Err(Error::CircleBranch);
    }
    let mut b = Builder {
        m,
        vertices: Vec::new(),
        vertex_index: BTreeMap::new(),
        edges: Vec::new(),
        edge_index: BTreeMap::new(),
        faces: Vec::new(),
        circles: BTreeMap::new(),
    };
    for r in &m.regions {
        if r.sign != Sign::Plus {
            continue;
        }
        if r.interior {
            b.interior_region(r.id)?;
        } else {
            b.boundary_region(r.id)?;
        }
    }
    let Builder { vertices, vertex_index, edges, edge_index, faces, circles, .. } = b;
    // each face boundary must be a closed chain
    for f in &faces {
        let ends: Vec<(usize, usize)> = f
            .boundary
            .iter()
            .map(|&(e, fwd)| if fwd { (edges[e].0, edges[e].1) } else { (edges[e].1, edges[e].0) })
            .collect();
        for j in 0..ends.len() {
            if ends[j].1 != ends[(j + 1) % ends.len()].0 {
                return Err(Error::Surface(format!("tile {} of region {} is not closed", f.tile, f.region)));
            }
        }
    }
    let mut edge_faces = vec![Vec::new(); edges.len()];
    for (fi, f) in faces.iter().enumerate() {
        for &(e, _) in &f.boundary {
            edge_faces[e].push(fi);
        }
    }
    if let Some(e) = edge_faces.iter().position(|f| f.is_empty() || f.len() > 2) {
        return Err(Error::Surface(format!("edge {:?} has {} incident tiles", edges[e].2, edge_faces[e].len())));
    }
    for (e, fs) in edge_faces.iter().enumerate() {
        let is_link = matches!(edges[e].2, FEdge::LinkArc { .. });
        if is_link != (fs.len() == 1) {
            return Err(Error::Surface(format!("boundary edges differ from the link arcs at {:?}", edges[e].2)));
        }
    }
    let euler_char = vertices.len() as i64 - edges.len() as i64 + faces.len() as i64;
    let expected = m.r as i64 - 2 * m.delta as i64;
    if euler_char != expected {
        return Err(Error::Surface(format!("Euler characteristic {euler_char}, expected {expected}")));
    }
    // gluing intervals: exactly two per crossing
    let mut per_crossing = vec![0usize; m.delta];
    for v in &vertices {
        if let FVertex::Mid { crossing, .. } = v {
            per_crossing[*crossing] += 1;
        }
    }
    if let Some(c) = per_crossing.iter().position(|&n| n != 2) {
        return Err(Error::Surface(format!("crossing {c} has {} gluing intervals", per_crossing[c])));
    }
    // connectivity
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    for &(a, bb, _) in &edges {
        let (x, y) = (find(&mut parent, a), find(&mut parent, bb));
        parent[x] = y;
    }
    let roots = (0..vertices.len()).filter(|&i| find(&mut parent, i) == i).count();
    if roots != 1 {
        return Err(Error::Surface(format!("surface has {roots} components")));
    }
    // boundary components
    let mut bparent: Vec<usize> = (0..vertices.len()).collect();
    let mut bverts = std::collections::BTreeSet::new();
    for (e, fs) in edge_faces.iter().enumerate() {
        if fs.len() == 1 {
            let (a, bb, _) = edges[e];
            bverts.insert(a);
            bverts.insert(bb);
            let (x, y) = (find(&mut bparent, a), find(&mut bparent, bb));
            bparent[x] = y;
        }
    }
    let boundary_components = bverts.iter().filter(|&&v| find(&mut bparent, v) == v).count();
    if boundary_components != m.r {
        return Err(Error::Surface(format!("{boundary_components} boundary circles, expected {}", m.r)));
    }
    // coherent orientation
    let mut face_flip: Vec<Option<bool>> = vec![None; faces.len()];
    face_flip[0] = Some(false);
    let mut q = VecDeque::from([0usize]);
    let dir_in = |f: usize, e: usize| -> Vec<bool> { faces[f].boundary.iter().filter(|x| x.0 == e).map(|x| x.1).collect() };
    while let Some(f) = q.pop_front() {
        let flip = face_flip[f].unwrap();
        for &(e, fwd) in &faces[f].boundary {
            for &g in &edge_faces[e] {
                let dirs = dir_in(g, e);
                if g == f {
                    if dirs.len() == 2 && dirs[0] == dirs[1] {
                        return Err(Error::Surface("non-orientable self-gluing".into()));
                    }
                    continue;
                }
                // neighbours must traverse the shared edge in the opposite direction
                let need = (fwd != flip) == (!dirs[0]);
                let g_flip = !need;
                match face_flip[g] {
                    None => {
                        face_flip[g] = Some(g_flip);
                        q.push_back(g);
                    }
                    Some(x) if x != g_flip => return Err(Error::Surface("surface is not orientable".into())),
                    _ => {}
                }
            }
        }
    }
    let face_flip: Vec<bool> = face_flip.into_iter().map(|x| x.unwrap_or(false)).collect();
    // tree-cotree decomposition
    let mut in_tree = vec![false; edges.len()];
    let mut seen = vec![false; vertices.len()];
    let mut adj = vec![Vec::new(); vertices.len()];
    for (e, &(a, bb, _)) in edges.iter().enumerate() {
        adj[a].push((e, bb));
        adj[bb].push((e, a));
    }
    seen[0] = true;
    let mut q = VecDeque::from([0usize]);
    while let Some(v) = q.pop_front() {
        for &(e, w) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                in_tree[e] = true;
                q.push_back(w);
            }
        }
    }
    // dual tree rooted at the outside node (index = faces.len())
    let outside = faces.len();
    let mut dual_adj = vec![Vec::new(); faces.len() + 1];
    for (e, fs) in edge_faces.iter().enumerate() {
        if in_tree[e] {
            continue;
        }
        let (x, y) = if fs.len() == 1 { (fs[0], outside) } else { (fs[0], fs[1]) };
        if x != y {
            dual_adj[x].push((e, y));
            dual_adj[y].push((e, x));
        }
    }
    let mut in_cotree = vec![false; edges.len()];
    let mut dseen = vec![false; faces.len() + 1];
    dseen[outside] = true;
    let mut order = Vec::new();
    let mut q = VecDeque::from([outside]);
    while let Some(f) = q.pop_front() {
        for &(e, g) in &dual_adj[f] {
            if !dseen[g] {
                dseen[g] = true;
                in_cotree[e] = true;
                order.push((g, e));
                q.push_back(g);
            }
        }
    }
    if dseen.iter().any(|&s| !s) {
        return Err(Error::Surface("dual graph is disconnected".into()));
    }
    let basis_edges: Vec<usize> = (0..edges.len()).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
    let mu = 2 * m.delta as i64 - m.r as i64 + 1;
    if basis_edges.len() as i64 != mu {
        return Err(Error::Surface(format!("rank of H1 is {}, expected {mu}", basis_edges.len())));
    }
    Ok(FiberSurface {
        vertices,
        edges,
        faces,
        euler_char,
        boundary_components,
        face_flip,
        basis_edges,
        vertex_index,
        edge_index,
        edge_faces,
        cotree_order: order,
        circles,
    })
}

impl FiberSurface {
    pub fn vertex_id(&self, v: &FVertex) -> Option<usize> {
        self.vertex_index.get(v).copied()
    }

    pub fn edge_id(&self, e: &FEdge) -> Option<usize> {
        self.edge_index.get(e).copied()
    }

    /// Betti number `1 − χ`.
    pub fn mu(&self) -> i64 {
        1 - self.euler_char
    }

    /// Oriented traversal of edge `e` from vertex `from`.
    pub fn step(&self, e: usize, from: usize) -> Option<(usize, bool)> {
        let (a, b, _) = self.edges[e];
        if a == from {
            Some((e, true))
        } else if b == from {
            Some((e, false))
        } else {
            None
        }
    }

    pub fn head(&self, s: (usize, bool)) -> usize {
        let (a, b, _) = self.edges[s.0];
        if s.1 {
            b
        } else {
            a
        }
    }

    /// Coordinates of a closed edge chain in the tree-cotree basis.
    pub fn class_of(&self, chain: &[(usize, bool)]) -> Vec<i64> {
        let mut z = vec![0i64; self.edges.len()];
        for &(e, fwd) in chain {
            z[e] += if fwd { 1 } else { -1 };
        }
        for &(f, e) in &self.cotree_order {
            if z[e] == 0 {
                continue;
            }
            let coef: i64 = self.faces[f].boundary.iter().filter(|x| x.0 == e).map(|x| if x.1 { 1 } else { -1 }).sum();
            debug_assert!(coef == 1 || coef == -1);
            let factor = z[e] * coef;
            for &(g, fwd) in &self.faces[f].boundary {
                z[g] -= factor * if fwd { 1 } else { -1 };
            }
        }
        self.basis_edges.iter().map(|&e| z[e]).collect()
    }

    /// Whether a closed chain is a cycle (boundary-free).
    pub fn is_closed(&self, chain: &[(usize, bool)]) -> bool {
        let mut deg = vec![0i64; self.vertices.len()];
        for &(e, fwd) in chain {
            let (a, b, _) = self.edges[e];
            let (s, t) = if fwd { (a, b) } else { (b, a) };
            deg[s] -= 1;
            deg[t] += 1;
        }
        deg.iter().all(|&d| d == 0)
    }

    /// Whether cutting along the edges of a curve disconnects the surface.
    pub fn separates(&self, chain: &[(usize, bool)]) -> bool {
        let cut: std::collections::BTreeSet<usize> = chain.iter().map(|x| x.0).collect();
        let mut parent: Vec<usize> = (0..self.faces.len()).collect();
        for (e, fs) in self.edge_faces.iter().enumerate() {
            if fs.len() == 2 && !cut.contains(&e) {
                let (x, y) = (find(&mut parent, fs[0]), find(&mut parent, fs[1]));
                parent[x] = y;
            }
        }
        (0..self.faces.len()).filter(|&i| find(&mut parent, i) == i).count() > 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossings::detect_crossings;
    use crate::divide::parse_divide;
    use crate::planar::build_planar_map;

    fn surface(text: &str) -> FiberSurface {
        let d = parse_divide(text).unwrap();
        let pls = d.polylines().unwrap();
        let cs = detect_crossings(&d, &pls).unwrap();
        let m = build_planar_map(&d, &pls, &cs).unwrap();
        build_fiber_surface(&m).unwrap()
    }

    #[test]
    fn fixture_surfaces() {
        for (text, chi, bdry) in [
            (include_str!("../fixtures/chord.divide"), 1, 1),
            (include_str!("../fixtures/loop.divide"), -1, 1),
            (include_str!("../fixtures/two-diameters.divide"), 0, 2),
            (include_str!("../fixtures/hart.divide"), -3, 1),
            (include_str!("../fixtures/triangle.divide"), -3, 3),
        ] {
            let f = surface(text);
            assert_eq!(f.euler_char, chi);
            assert_eq!(f.boundary_components, bdry);
            assert_eq!(f.basis_edges.len() as i64, f.mu());
        }
    }

    #[test]
    fn basis_cycles_have_unit_classes() {
        let f = surface(include_str!("../fixtures/hart.divide"));
        // the boundary of every tile is null-homologous
        for face in &f.faces {
            assert!(f.class_of(&face.boundary).iter().all(|&x| x == 0));
        }
    }
}
