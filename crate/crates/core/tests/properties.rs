use divlink::analysis::Analysis;
use divlink::divide::{parse_divide, Divide};
use divlink::geom::Vec2;
use divlink::lift::{lift_family, lift_link, singular_sigmas, CoOrientation};
use divlink::monodromy::monodromy;
use divlink::planar::VertexKind;
use divlink::random::{random_divide, RandomConfig};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::f64::consts::TAU;

const FIXTURES: [&str; 6] = ["chord", "disjoint-chords", "hart", "loop", "triangle", "two-diameters"];

fn fixture(name: &str) -> Divide {
    let path = format!("{}/fixtures/{name}.divide", env!("CARGO_MANIFEST_DIR"));
    parse_divide(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn random(seed: u64) -> Analysis {
    random_divide(&mut ChaCha8Rng::seed_from_u64(seed), &RandomConfig::default())
}

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(divlink::projection::DEFAULT_SEED), failure_persistence: None, ..Config::default() }
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Faces of the arrangement of sampled branches and a polygonal boundary circle, found by
/// walking half-edges: `(faces inside the disk, faces touching no boundary edge)`.
fn brute_force_faces(a: &Analysis) -> (usize, usize) {
    let mut points: Vec<Vec2> = Vec::new();
    // branch segments as (start vertex, end vertex)
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut boundary_angles: Vec<(f64, Option<usize>)> = (0..720).map(|k| (TAU * k as f64 / 720.0, None)).collect();
    for poly in &a.polylines {
        let start = points.len();
        points.extend(poly.points.iter().copied());
        let ids: Vec<usize> = (start..points.len()).collect();
        if !poly.closed {
            for &id in [ids[0], *ids.last().unwrap()].iter() {
                boundary_angles.push((points[id].y.atan2(points[id].x).rem_euclid(TAU), Some(id)));
            }
        }
        chains.push(ids);
    }
    // split every branch segment at its crossings with other branch segments
    let segs: Vec<(usize, usize, usize)> =
        chains.iter().enumerate().flat_map(|(c, ids)| ids.windows(2).map(move |w| (c, w[0], w[1]))).collect();
    let mut cuts: Vec<Vec<(f64, usize)>> = vec![Vec::new(); segs.len()];
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (s, t) = (segs[i], segs[j]);
            if s.1 == t.1 || s.1 == t.2 || s.2 == t.1 || s.2 == t.2 {
                continue;
            }
            let (p, r) = (points[s.1], points[s.2] - points[s.1]);
            let (q, u) = (points[t.1], points[t.2] - points[t.1]);
            let den = cross(r, u);
            if den == 0.0 {
                continue;
            }
            let x = cross(q - p, u) / den;
            let y = cross(q - p, r) / den;
            if (0.0..1.0).contains(&x) && (0.0..1.0).contains(&y) {
                let id = points.len();
                points.push(p + r * x);
                cuts[i].push((x, id));
                cuts[j].push((y, id));
            }
        }
    }
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    for (k, &(_, from, to)) in segs.iter().enumerate() {
        let mut c = cuts[k].clone();
        c.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let mut prev = from;
        for (_, id) in c {
            edges.push((prev, id, false));
            prev = id;
        }
        edges.push((prev, to, false));
    }
    boundary_angles.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let ring: Vec<usize> = boundary_angles
        .iter()
        .map(|&(ang, id)| {
            id.unwrap_or_else(|| {
                points.push(Vec2::from_angle(ang));
                points.len() - 1
            })
        })
        .collect();
    for k in 0..ring.len() {
        edges.push((ring[k], ring[(k + 1) % ring.len()], true));
    }
    // half-edge 2e runs from -> to, 2e+1 back
    let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
    for (e, &(f, t, _)) in edges.iter().enumerate() {
        out.entry(f).or_default().push(2 * e);
        out.entry(t).or_default().push(2 * e + 1);
    }
    let ends = |h: usize| {
        let (f, t, _) = edges[h / 2];
        if h.is_multiple_of(2) {
            (f, t)
        } else {
            (t, f)
        }
    };
    for (&v, hs) in out.iter_mut() {
        hs.sort_by(|&x, &y| {
            let ax = (points[ends(x).1] - points[v]).angle();
            let ay = (points[ends(y).1] - points[v]).angle();
            ax.partial_cmp(&ay).unwrap()
        });
    }
    let next = |h: usize| {
        let (_, head) = ends(h);
        let twin = h ^ 1;
        let rot = &out[&head];
        let i = rot.iter().position(|&x| x == twin).unwrap();
        rot[(i + rot.len() - 1) % rot.len()]
    };
    let mut seen = vec![false; 2 * edges.len()];
    let (mut faces, mut interior) = (0, 0);
    for h0 in 0..2 * edges.len() {
        if seen[h0] {
            continue;
        }
        let (mut h, mut area, mut on_ring) = (h0, 0.0, false);
        loop {
            seen[h] = true;
            let (f, t) = ends(h);
            area += cross(points[f], points[t]);
            on_ring |= edges[h / 2].2;
            h = next(h);
            if h == h0 {
                break;
            }
        }
        // the face outside the circle is the only clockwise one for a connected arrangement
        if area > 0.0 {
            faces += 1;
            interior += usize::from(!on_ring);
        }
    }
    (faces, interior)
}

fn check_map(a: &Analysis) -> Result<(), TestCaseError> {
    let m = &a.map;
    let c = a.counts();
    let arcs = a.divide.arc_count();
    // Euler characteristic of the disk
    let v = m.vertices.len() as i64;
    let e = m.edges.len() as i64;
    let f = m.regions.len() as i64;
    prop_assert_eq!(v - e + f, 1);
    if !a.divide.has_circles() && arcs > 0 {
        prop_assert_eq!(v as usize, c.delta + 2 * arcs);
    }
    prop_assert_eq!(m.vertices.iter().filter(|x| matches!(x.kind, VertexKind::Crossing(_))).count(), c.delta);
    // chess-board colouring
    for (k, edge) in m.edges.iter().enumerate() {
        if edge.is_branch() {
            let (l, r) = m.edge_regions(k);
            prop_assert_ne!(m.regions[l].sign, m.regions[r].sign);
        }
    }
    if m.connected && !a.divide.has_circles() {
        prop_assert_eq!(c.interior_regions as i64, c.delta as i64 - c.r as i64 + 1);
        prop_assert_eq!(brute_force_faces(a), (m.regions.len(), c.interior_regions));
    }
    Ok(())
}

#[test]
fn fixture_maps() {
    for name in FIXTURES {
        check_map(&Analysis::new(fixture(name)).unwrap()).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn crossings_stable_under_resolution_doubling() {
    for name in FIXTURES {
        let n64 = Analysis::new(fixture(name).with_resolution(64)).unwrap().crossings.len();
        let n128 = Analysis::new(fixture(name).with_resolution(128)).unwrap().crossings.len();
        assert_eq!(n64, n128, "{name}");
    }
}

#[test]
fn fixture_lifts() {
    for name in FIXTURES {
        let d = fixture(name);
        let l = lift_link(&d);
        assert!(l.sphere_residual() < 1e-9, "{name}");
        let f = lift_family(&d, &CoOrientation::standard(&d), 0.0).unwrap();
        for (a, b) in l.components.iter().flatten().zip(f.components.iter().flatten()) {
            for k in 0..4 {
                assert!((a[k] - b[k]).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn fixture_monodromy_properties() {
    for name in ["chord", "hart", "loop", "two-diameters"] {
        let a = Analysis::new(fixture(name)).unwrap();
        let m = monodromy(&a.map).unwrap();
        let mu = a.counts().mu.unwrap();
        assert_eq!(m.cycles.len() as i64, mu, "{name}");
        assert!(m.checks.iter().all(|c| c.1), "{name}: {:?}", m.checks);
        assert!(m.char_poly.torres_symmetric(mu as usize), "{name}");
    }
}

#[test]
fn saddle_with_both_plus_corners_in_one_region() {
    let a = Analysis::new(fixture("shared-saddle-region")).unwrap();
    let m = monodromy(&a.map).unwrap();
    assert_eq!(m.cycles.len(), 5);
    assert!(m.checks.iter().all(|c| c.1), "{:?}", m.checks);
    assert_eq!(m.char_poly.to_string(), "t^5 + t^4 - 6t^3 + 6t^2 - t - 1");
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn random_maps(seed in any::<u64>()) {
        let a = random(seed);
        check_map(&a)?;
        let n128 = Analysis::new(a.divide.clone().with_resolution(128)).unwrap().crossings.len();
        prop_assert_eq!(a.crossings.len(), n128);
    }

    #[test]
    fn random_lifts(seed in any::<u64>()) {
        let a = random(seed);
        let l = lift_link(&a.divide);
        prop_assert!(l.sphere_residual() < 1e-9);
        let co = CoOrientation::standard(&a.divide);
        if let Ok(events) = singular_sigmas(&a.divide, &co, &a.crossings) {
            prop_assert_eq!(events.len(), a.crossings.len());
        }
    }

    #[test]
    fn random_monodromy(seed in any::<u64>()) {
        let a = random(seed);
        let m = monodromy(&a.map).unwrap();
        let c = a.counts();
        let mu = c.mu.unwrap();
        prop_assert_eq!(m.surface.mu(), mu);
        prop_assert_eq!(m.cycles.len() as i64, mu);
        let interior_plus = a.map.regions.iter().filter(|r| r.interior && r.sign == divlink::planar::Sign::Plus).count();
        let interior_minus = c.interior_regions - interior_plus;
        prop_assert_eq!(m.group_sizes(), (interior_plus, c.delta, interior_minus));
        prop_assert!(m.geometric_intersections < 5 * c.delta.max(1) as i64);
        prop_assert!(m.checks.iter().all(|x| x.1), "{:?}", m.checks);
        prop_assert!(m.char_poly.torres_symmetric(mu as usize));
        if mu == 2 {
            prop_assert_ne!(m.matrix.trace().abs(), 3);
        }
    }
}
