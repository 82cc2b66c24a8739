//! Dirichlet problems for the Laplacian on a square grid cut by curves, with
//! Shortley–Weller stencils at the cuts and bicubic interpolation of the solution.

use crate::geom::Vec2;

pub const INACTIVE: usize = usize::MAX;

/// First barrier hit on the edge `p → q` as `(t, point)` with `t ∈ [0, 1]` measured from `p`.
pub type EdgeCut = Option<(f64, Vec2)>;

#[derive(Clone, Debug)]
struct Link {
    /// Neighbour node, or `None` for a boundary point.
    node: Option<usize>,
    dist: f64,
    point: Vec2,
}

/// Node values on the grid, enough to interpolate.
#[derive(Clone, Debug)]
pub struct GridField {
    pub n: usize,
    pub origin: Vec2,
    pub step: f64,
    /// Component label per node, [`INACTIVE`] outside the domain.
    pub label: Vec<usize>,
    pub values: Vec<f64>,
}

/// A grid with its stencils, ready to solve.
#[derive(Clone, Debug)]
pub struct Grid {
    pub field: GridField,
    pub radius: f64,
    links: Vec<[Link; 4]>,
}

const DIRS: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

impl Grid {
    /// Nodes strictly inside the disk of `radius`; `cut` reports barriers on grid edges.
    pub fn new(radius: f64, step: f64, shift: Vec2, cut: impl Fn(Vec2, Vec2) -> EdgeCut) -> Grid {
        let n = (2.0 * radius / step).ceil() as usize + 3;
        let origin = Vec2::new(-radius - step, -radius - step) + shift;
        let pos = |i: usize, j: usize| origin + Vec2::new(i as f64 * step, j as f64 * step);
        let active: Vec<bool> = (0..n * n).map(|k| pos(k % n, k / n).norm() < radius).collect();
        let empty = Link { node: None, dist: step, point: Vec2::ZERO };
        let mut links = vec![[empty.clone(), empty.clone(), empty.clone(), empty]; n * n];
        for j in 0..n {
            for i in 0..n {
                let k = j * n + i;
                if !active[k] {
                    continue;
                }
                let p = pos(i, j);
                for (d, &(di, dj)) in DIRS.iter().enumerate() {
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    let q = pos(ni as usize, nj as usize);
                    let nk = nj as usize * n + ni as usize;
                    let mut best = cut(p, q);
                    if !active[nk] {
                        // leave the disk of `radius`
                        let dq = q - p;
                        let (a, b, c) = (dq.norm2(), 2.0 * p.dot(dq), p.norm2() - radius * radius);
                        let t = (-b + (b * b - 4.0 * a * c).max(0.0).sqrt()) / (2.0 * a);
                        if best.is_none_or(|(bt, _)| t < bt) {
                            best = Some((t, p.lerp(q, t)));
                        }
                    }
                    links[k][d] = match best {
                        Some((t, pt)) => Link { node: None, dist: (t * step).max(1e-3 * step), point: pt },
                        None => Link { node: Some(nk), dist: step, point: q },
                    };
                }
            }
        }
        // an edge cut from one side only is treated as cut at the far node
        for k in 0..n * n {
            for d in 0..4 {
                if let Some(nk) = links[k][d].node {
                    if links[nk][d ^ 1].node.is_none() {
                        links[k][d] = Link { node: None, dist: step, point: pos(nk % n, nk / n) };
                    }
                }
            }
        }
        let mut label = vec![INACTIVE; n * n];
        let mut next = 0;
        for s in 0..n * n {
            if !active[s] || label[s] != INACTIVE {
                continue;
            }
            let mut stack = vec![s];
            label[s] = next;
            while let Some(k) = stack.pop() {
                for l in &links[k] {
                    if let Some(nk) = l.node {
                        if label[nk] == INACTIVE {
                            label[nk] = next;
                            stack.push(nk);
                        }
                    }
                }
            }
            next += 1;
        }
        Grid { field: GridField { n, origin, step, label, values: vec![0.0; n * n] }, radius, links }
    }

    /// Solves `Δu = 0` with boundary values `bv(node, boundary point)` by SOR; returns the
    /// number of sweeps.
    pub fn solve(&mut self, bv: impl Fn(usize, Vec2) -> f64, tol: f64, max_iter: usize) -> usize {
        let f = &mut self.field;
        let n = f.n;
        let mut nodes = Vec::new();
        let mut inv_diag = Vec::new();
        let mut rhs = Vec::new();
        let mut nb: Vec<[(u32, f64); 4]> = Vec::new();
        for k in 0..n * n {
            if f.label[k] == INACTIVE {
                continue;
            }
            let l = &self.links[k];
            let mut diag = 0.0;
            let mut r = 0.0;
            let mut row = [(k as u32, 0.0); 4];
            for axis in 0..2 {
                let s = l[2 * axis].dist + l[2 * axis + 1].dist;
                for d in [2 * axis, 2 * axis + 1] {
                    let me = &l[d];
                    let c = 2.0 / (me.dist * s);
                    diag += c;
                    match me.node {
                        Some(nk) => row[d] = (nk as u32, c),
                        None => r += c * bv(k, me.point),
                    }
                }
            }
            nodes.push(k);
            inv_diag.push(1.0 / diag);
            rhs.push(r);
            nb.push(row);
        }
        let m = (2.0 * self.radius / f.step).max(2.0);
        let omega = 2.0 / (1.0 + (std::f64::consts::PI / m).sin());
        let v = &mut f.values;
        let mut iters = 0;
        while iters < max_iter {
            iters += 1;
            let mut delta: f64 = 0.0;
            for (idx, &k) in nodes.iter().enumerate() {
                let row = &nb[idx];
                let s = rhs[idx]
                    + row[0].1 * v[row[0].0 as usize]
                    + row[1].1 * v[row[1].0 as usize]
                    + row[2].1 * v[row[2].0 as usize]
                    + row[3].1 * v[row[3].0 as usize];
                let old = v[k];
                let upd = omega * (s * inv_diag[idx] - old);
                delta = delta.max(upd.abs());
                v[k] = old + upd;
            }
            if delta < tol {
                break;
            }
        }
        iters
    }

    pub fn finish(self) -> GridField {
        self.field
    }
}

impl GridField {
    pub fn position(&self, k: usize) -> Vec2 {
        self.origin + Vec2::new((k % self.n) as f64 * self.step, (k / self.n) as f64 * self.step)
    }

    pub fn components(&self) -> usize {
        self.label.iter().filter(|&&l| l != INACTIVE).max().map_or(0, |m| m + 1)
    }

    /// Bicubic interpolation: `(label, value, gradient)`, or `None` unless all 16 stencil
    /// nodes carry the same label.
    pub fn interpolate(&self, x: Vec2) -> Option<(usize, f64, Vec2)> {
        let g = (x - self.origin) * (1.0 / self.step);
        let (i0, j0) = (g.x.floor(), g.y.floor());
        let (tx, ty) = (g.x - i0, g.y - j0);
        let (i0, j0) = (i0 as i64, j0 as i64);
        if i0 < 1 || j0 < 1 || i0 + 2 >= self.n as i64 || j0 + 2 >= self.n as i64 {
            return None;
        }
        let (wx, dwx) = keys(tx);
        let (wy, dwy) = keys(ty);
        let lab = self.label[(j0 as usize) * self.n + i0 as usize];
        if lab == INACTIVE {
            return None;
        }
        let (mut v, mut gx, mut gy) = (0.0, 0.0, 0.0);
        for (b, (&wyb, &dwyb)) in wy.iter().zip(&dwy).enumerate() {
            for (a, (&wxa, &dwxa)) in wx.iter().zip(&dwx).enumerate() {
                let k = (j0 - 1 + b as i64) as usize * self.n + (i0 - 1 + a as i64) as usize;
                if self.label[k] != lab {
                    return None;
                }
                let u = self.values[k];
                v += wxa * wyb * u;
                gx += dwxa * wyb * u;
                gy += wxa * dwyb * u;
            }
        }
        Some((lab, v, Vec2::new(gx, gy) * (1.0 / self.step)))
    }
}

/// Catmull–Rom (Keys) cubic weights and their derivatives at offset `t ∈ [0, 1)`.
fn keys(t: f64) -> ([f64; 4], [f64; 4]) {
    let (t2, t3) = (t * t, t * t * t);
    (
        [
            0.5 * (-t3 + 2.0 * t2 - t),
            0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
            0.5 * (-3.0 * t3 + 4.0 * t2 + t),
            0.5 * (t3 - t2),
        ],
        [
            0.5 * (-3.0 * t2 + 4.0 * t - 1.0),
            0.5 * (9.0 * t2 - 10.0 * t),
            0.5 * (-9.0 * t2 + 8.0 * t + 1.0),
            0.5 * (3.0 * t2 - 2.0 * t),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_harmonic_polynomial() {
        // u = x² − y² on the unit disk, no interior cuts
        let mut g = Grid::new(1.0, 0.02, Vec2::new(1e-4, 2e-4), |_, _| None);
        assert_eq!(g.field.components(), 1);
        g.solve(|_, p| p.x * p.x - p.y * p.y, 1e-13, 20_000);
        let g = g.finish();
        let (_, v, grad) = g.interpolate(Vec2::new(0.3, -0.2)).unwrap();
        assert!((v - 0.05).abs() < 1e-3, "{v}");
        assert!((grad - Vec2::new(0.6, 0.4)).norm() < 1e-2, "{grad:?}");
    }

    #[test]
    fn cut_splits_components() {
        let cut = |p: Vec2, q: Vec2| {
            if (p.y < 0.0) != (q.y < 0.0) {
                let t = p.y / (p.y - q.y);
                Some((t, p.lerp(q, t)))
            } else {
                None
            }
        };
        let mut g = Grid::new(1.0, 0.02, Vec2::new(1e-4, 1e-3), cut);
        assert_eq!(g.field.components(), 2);
        // u = y in the upper half, harmonic with these boundary values
        g.solve(|_, p| p.y.max(0.0), 1e-13, 20_000);
        let g = g.finish();
        let (_, v, _) = g.interpolate(Vec2::new(0.1, 0.5)).unwrap();
        assert!((v - 0.5).abs() < 1e-3);
        assert!(g.interpolate(Vec2::new(0.1, 0.001)).is_none());
    }

    #[test]
    fn keys_partition_of_unity() {
        for k in 0..10 {
            let (w, dw) = keys(k as f64 / 10.0);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(dw.iter().sum::<f64>().abs() < 1e-14);
        }
    }
}
