//! Twist cycles on the fiber surface, their intersection form, and the monodromy as an
//! ordered product of transvections on first homology.

use crate::error::{Error, Result};
use crate::fiber::{build_fiber_surface, interval_rays, FEdge, FVertex, FiberSheet, FiberSurface};
use crate::matrix::IntMatrix;
use crate::planar::{PlanarMap, Sign};
use crate::poly::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CycleKind {
    /// Circle over the maximum of an interior positive region.
    Max,
    /// Cycle through a crossing.
    Saddle,
    /// Cycle over the minimum of an interior negative region.
    Min,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cycle {
    pub kind: CycleKind,
    /// Region id for extrema, crossing id for saddles.
    pub anchor: usize,
    /// Coordinates in the basis of twist cycles.
    pub h1_vector: Vec<i64>,
    /// Closed edge path on the fiber surface, when realized.
    pub curve: Option<Vec<(usize, bool)>>,
    /// Class of the curve in the tree-cotree basis of the surface.
    pub surface_class: Option<Vec<i64>>,
}

fn arm(f: &FiberSurface, region: usize, sheet: FiberSheet, corner: usize) -> Result<usize> {
    f.edge_id(&FEdge::Arm { region, sheet, corner })
        .ok_or_else(|| Error::Surface(format!("missing arm in region {region}")))
}

/// Path through the centre of a positive region from the hub of `(corner, +)` to `(corner, −)`.
fn through_centre(f: &FiberSurface, m: &PlanarMap, region: usize, corner: usize, out: &mut Vec<(usize, bool)>) -> Result<()> {
    if !m.regions[region].interior {
        return Ok(());
    }
    let hubs = &f.circles[&region];
    let n = hubs.len();
    let start = f.vertex_id(&FVertex::Hub { region, sheet: FiberSheet::Plus, corner }).unwrap();
    let end = f.vertex_id(&FVertex::Hub { region, sheet: FiberSheet::Minus, corner }).unwrap();
    let mut j = hubs.iter().position(|h| h.1 == start).unwrap();
    // clockwise: through the direction of the arm itself
    while hubs[j].1 != end {
        let prev = (j + n - 1) % n;
        let e = f.edge_id(&FEdge::Circle { region, index: prev }).unwrap();
        out.push((e, false));
        j = prev;
    }
    Ok(())
}

fn saddle_curve(f: &FiberSurface, m: &PlanarMap, crossing: usize) -> Result<Vec<(usize, bool)>> {
    let corners = m.crossing_corners[crossing];
    let k = (0..4)
        .find(|&i| m.regions[m.corners[corners[i]].region].sign == Sign::Plus)
        .ok_or_else(|| Error::Surface("crossing without positive corner".into()))?;
    let (c1, c2) = (corners[k], corners[(k + 2) % 4]);
    let (r, s) = (m.corners[c1].region, m.corners[c2].region);
    let start = f
        .vertex_id(&FVertex::Mid { crossing, rays: interval_rays(m, c1, FiberSheet::Plus) })
        .ok_or_else(|| Error::Surface("missing gluing interval".into()))?;
    let mut path = Vec::new();
    let mut at = start;
    let walk_arm = |e: usize, path: &mut Vec<(usize, bool)>, at: &mut usize| -> Result<()> {
        let s = f.step(e, *at).ok_or_else(|| Error::Surface(format!("saddle cycle at crossing {crossing} is not closed")))?;
        path.push(s);
        *at = f.head(s);
        Ok(())
    };
    walk_arm(arm(f, r, FiberSheet::Plus, c1)?, &mut path, &mut at)?;
    through_centre(f, m, r, c1, &mut path)?;
    if let Some(&last) = path.last() {
        at = f.head(last);
    }
    walk_arm(arm(f, r, FiberSheet::Minus, c1)?, &mut path, &mut at)?;
    walk_arm(arm(f, s, FiberSheet::Plus, c2)?, &mut path, &mut at)?;
    through_centre(f, m, s, c2, &mut path)?;
    if let Some(&last) = path.last() {
        at = f.head(last);
    }
    walk_arm(arm(f, s, FiberSheet::Minus, c2)?, &mut path, &mut at)?;
    debug_assert_eq!(interval_rays(m, c1, FiberSheet::Minus), interval_rays(m, c2, FiberSheet::Plus));
    if !f.is_closed(&path) {
        return Err(Error::Surface(format!("saddle cycle at crossing {crossing} is not closed")));
    }
    Ok(path)
}

/// No vertex repeats, except rim hubs (a boundary region's arms all end at one rim point
/// standing for distinct nearby points of the boundary arc) and hubs of `doubled`, a region
/// the curve crosses twice on parallel sheets of its centre circle.
fn is_simple(f: &FiberSurface, path: &[(usize, bool)], doubled: Option<usize>) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    path.iter().all(|&s| {
        let v = f.head(s);
        match f.vertices[v] {
            FVertex::Rim { .. } => true,
            FVertex::Hub { region, .. } if Some(region) == doubled => true,
            _ => seen.insert(v),
        }
    })
}

/// The positive region met twice by the saddle cycle at `crossing`, if any.
fn doubled_region(m: &PlanarMap, crossing: usize) -> Option<usize> {
    let regions: Vec<usize> = m.crossing_corners[crossing].iter().map(|&c| m.corners[c].region).collect();
    let plus: Vec<usize> = regions.into_iter().filter(|&r| m.regions[r].sign == Sign::Plus).collect();
    (plus.len() == 2 && plus[0] == plus[1]).then(|| plus[0])
}

/// The ordered twist system: maxima, then saddles, then minima, each by anchor id.
pub fn twist_cycles(f: &FiberSurface, m: &PlanarMap) -> Result<Vec<Cycle>> {
    let mut specs: Vec<(CycleKind, usize)> = Vec::new();
    for r in &m.regions {
        if r.interior && r.sign == Sign::Plus {
            specs.push((CycleKind::Max, r.id));
        }
    }
    for c in 0..m.delta {
        specs.push((CycleKind::Saddle, c));
    }
    for r in &m.regions {
        if r.interior && r.sign == Sign::Minus {
            specs.push((CycleKind::Min, r.id));
        }
    }
    let n = specs.len();
    let mut out = Vec::with_capacity(n);
    for (i, &(kind, anchor)) in specs.iter().enumerate() {
        let mut h1 = vec![0; n];
        h1[i] = 1;
        let curve = match kind {
            CycleKind::Max => {
                let len = f.circles[&anchor].len();
                Some((0..len).map(|j| (f.edge_id(&FEdge::Circle { region: anchor, index: j }).unwrap(), true)).collect::<Vec<_>>())
            }
            CycleKind::Saddle => Some(saddle_curve(f, m, anchor)?),
            CycleKind::Min => None,
        };
        if let Some(c) = &curve {
            let doubled = if kind == CycleKind::Saddle { doubled_region(m, anchor) } else { None };
            if !is_simple(f, c, doubled) {
                return Err(Error::Surface(format!("{kind:?} cycle at {anchor} is not simple")));
            }
        }
        let surface_class = curve.as_ref().map(|c| f.class_of(c));
        out.push(Cycle { kind, anchor, h1_vector: h1, curve, surface_class });
    }
    Ok(out)
}

/// Algebraic intersection numbers of the twist cycles and the total geometric count.
pub fn intersection_matrix(cycles: &[Cycle], m: &PlanarMap) -> (IntMatrix, i64) {
    let n = cycles.len();
    let mut q = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&cycles[i], &cycles[j]);
            let v = match (a.kind, b.kind) {
                (CycleKind::Max, CycleKind::Saddle) => m.corner_count(a.anchor, b.anchor) as i64,
                (CycleKind::Saddle, CycleKind::Min) => m.corner_count(b.anchor, a.anchor) as i64,
                (CycleKind::Max, CycleKind::Min) => -(m.shared_edges(a.anchor, b.anchor) as i64),
                _ => 0,
            };
            if v != 0 {
                q.set(i, j, v);
                q.set(j, i, -v);
            }
        }
    }
    let mut total = 0;
    for i in 0..n {
        for j in i + 1..n {
            total += q.get(i, j).abs();
        }
    }
    (q, total)
}

/// Transvection `x ↦ x + ⟨x, c_k⟩ c_k` (or its inverse) in the twist-cycle basis.
pub fn transvection(q: &IntMatrix, k: usize, inverse: bool) -> IntMatrix {
    let n = q.rows();
    let mut t = IntMatrix::identity(n);
    let s = if inverse { -1 } else { 1 };
    for j in 0..n {
        t.set(k, j, t.get(k, j) + s * q.get(j, k));
    }
    t
}

/// `h = T_min ∘ T_saddle ∘ T_max` and its inverse.
pub fn monodromy_matrix(cycles: &[Cycle], q: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let n = cycles.len();
    let mut h = IntMatrix::identity(n);
    let mut h_inv = IntMatrix::identity(n);
    for group in [CycleKind::Max, CycleKind::Saddle, CycleKind::Min] {
        for (k, c) in cycles.iter().enumerate() {
            if c.kind == group {
                h = transvection(q, k, false).mul(&h)?;
                h_inv = h_inv.mul(&transvection(q, k, true))?;
            }
        }
    }
    Ok((h, h_inv))
}

#[derive(Clone, Debug)]
pub struct Monodromy {
    pub surface: FiberSurface,
    pub cycles: Vec<Cycle>,
    pub intersection: IntMatrix,
    pub geometric_intersections: i64,
    pub matrix: IntMatrix,
    pub inverse: IntMatrix,
    pub char_poly: IntPoly,
    /// Named consistency checks.
    pub checks: Vec<(String, bool)>,
}

impl Monodromy {
    pub fn group_sizes(&self) -> (usize, usize, usize) {
        let count = |k| self.cycles.iter().filter(|c| c.kind == k).count();
        (count(CycleKind::Max), count(CycleKind::Saddle), count(CycleKind::Min))
    }
}

/// Fiber surface, twist system and monodromy of a connected divide.
pub fn monodromy(m: &PlanarMap) -> Result<Monodromy> {
    let surface = build_fiber_surface(m)?;
    let cycles = twist_cycles(&surface, m)?;
    let (q, geo) = intersection_matrix(&cycles, m);
    let (h, h_inv) = monodromy_matrix(&cycles, &q)?;
    let char_poly = h.char_poly();
    let mu = surface.mu();
    let mut checks = Vec::new();
    checks.push(("twist count equals mu".to_string(), cycles.len() as i64 == mu));
    let bound = if m.delta == 0 { geo == 0 } else { geo < 5 * m.delta as i64 };
    checks.push(("intersections below 5 delta".to_string(), bound));
    checks.push(("intersection form skew".to_string(), q.is_skew()));
    checks.push(("det h = 1".to_string(), h.det() == IntPoly::one()));
    checks.push(("h times inverse".to_string(), h.mul(&h_inv)? == IntMatrix::identity(cycles.len())));
    let realized: Vec<Vec<i64>> = cycles.iter().filter_map(|c| c.surface_class.clone()).collect();
    let rank = if realized.is_empty() { 0 } else { IntMatrix::from_rows(&realized).rank() };
    checks.push(("realized cycles independent".to_string(), rank == realized.len()));
    let four_winds = (0..m.delta).any(|c| m.is_four_winds(c));
    if !four_winds {
        let mut ok = true;
        for (i, c) in cycles.iter().enumerate() {
            ok &= match &c.curve {
                Some(curve) => !surface.separates(curve),
                None => (0..cycles.len()).any(|j| q.get(i, j) % 2 != 0),
            };
        }
        checks.push(("no core curve separates".to_string(), ok));
    }
    Ok(Monodromy {
        surface,
        cycles,
        intersection: q,
        geometric_intersections: geo,
        matrix: h,
        inverse: h_inv,
        char_poly,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossings::detect_crossings;
    use crate::divide::parse_divide;
    use crate::planar::build_planar_map;

    fn mono(text: &str) -> Monodromy {
        let d = parse_divide(text).unwrap();
        let pls = d.polylines().unwrap();
        let cs = detect_crossings(&d, &pls).unwrap();
        let m = build_planar_map(&d, &pls, &cs).unwrap();
        monodromy(&m).unwrap()
    }

    #[test]
    fn chord_is_trivial() {
        let r = mono(include_str!("../fixtures/chord.divide"));
        assert!(r.cycles.is_empty());
        assert_eq!(r.char_poly, IntPoly::one());
    }

    #[test]
    fn loop_gives_trefoil_monodromy() {
        let r = mono(include_str!("../fixtures/loop.divide"));
        assert_eq!(r.cycles.len(), 2);
        assert_eq!(r.geometric_intersections, 1);
        assert_eq!(r.matrix.trace(), 1);
        assert_eq!(r.char_poly, IntPoly::from_i64s(&[1, -1, 1]));
        assert!(r.checks.iter().all(|c| c.1), "{:?}", r.checks);
    }

    #[test]
    fn diameters_single_saddle() {
        let r = mono(include_str!("../fixtures/two-diameters.divide"));
        assert_eq!(r.group_sizes(), (0, 1, 0));
        assert_eq!(r.char_poly.normalized(), IntPoly::from_i64s(&[1, -1]));
        // the core of the annulus separates its two boundary circles
        assert!(r.surface.separates(r.cycles[0].curve.as_ref().unwrap()));
    }

    #[test]
    fn hart_checks() {
        let r = mono(include_str!("../fixtures/hart.divide"));
        assert_eq!(r.cycles.len(), 4);
        assert!(r.checks.iter().all(|c| c.1), "{:?}", r.checks);
        assert_eq!(r.char_poly.normalized(), IntPoly::from_i64s(&[1, 1, -3, 1, 1]));
    }
}
