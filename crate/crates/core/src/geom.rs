use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A point or vector in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

/// Points of the closed unit disk share the planar vector type.
pub type PointDisk = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn from_angle(a: f64) -> Self {
        Vec2::new(a.cos(), a.sin())
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Vec2 {
        self + (o - self) * t
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Angle normalized to `[0, 2π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let r = a.rem_euclid(t);
    if r >= t {
        0.0
    } else {
        r
    }
}

/// Intersection of segments `[p, q]` and `[r, s]` as parameters `(a, b)` with
/// `p + a (q - p) = r + b (s - r)`, or `None` when parallel or disjoint.
/// Parameters are accepted in `[0, 1)` unless the matching `closed_end` flag is set.
pub fn segment_intersection(
    p: Vec2,
    q: Vec2,
    r: Vec2,
    s: Vec2,
    closed_end: (bool, bool),
) -> Option<(f64, f64)> {
    let d1 = q - p;
    let d2 = s - r;
    let den = d1.cross(d2);
    if den.abs() < 1e-300 {
        return None;
    }
    let w = r - p;
    let a = w.cross(d2) / den;
    let b = w.cross(d1) / den;
    let in_a = a >= 0.0 && (a < 1.0 || (closed_end.0 && a <= 1.0));
    let in_b = b >= 0.0 && (b < 1.0 || (closed_end.1 && b <= 1.0));
    (in_a && in_b).then_some((a, b))
}

/// Signed area of a closed polygon (positive when counterclockwise).
pub fn signed_area(poly: &[Vec2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        s += poly[i].cross(poly[(i + 1) % n]);
    }
    0.5 * s
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(pt: Vec2, poly: &[Vec2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > pt.y) != (b.y > pt.y) {
            let x = a.x + (pt.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if pt.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Distance from `pt` to segment `[a, b]` and the segment parameter of the foot point.
pub fn point_segment(pt: Vec2, a: Vec2, b: Vec2) -> (f64, f64) {
    let d = b - a;
    let l2 = d.norm2();
    let t = if l2 == 0.0 {
        0.0
    } else {
        ((pt - a).dot(d) / l2).clamp(0.0, 1.0)
    };
    (pt.dist(a + d * t), t)
}

/// Uniform-grid bucketing of planar segments for pair searches.
pub struct SegmentGrid {
    lo: Vec2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl SegmentGrid {
    pub fn new(segs: &[(Vec2, Vec2)]) -> Self {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut total = 0.0;
        for &(a, b) in segs {
            lo.x = lo.x.min(a.x).min(b.x);
            lo.y = lo.y.min(a.y).min(b.y);
            hi.x = hi.x.max(a.x).max(b.x);
            hi.y = hi.y.max(a.y).max(b.y);
            total += a.dist(b);
        }
        let n = segs.len().max(1);
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        let mut cell = (2.0 * total / n as f64).max(span / 512.0).max(1e-12);
        if !cell.is_finite() {
            cell = 1.0;
        }
        let nx = (((hi.x - lo.x) / cell).floor() as usize + 1).min(4096);
        let ny = (((hi.y - lo.y) / cell).floor() as usize + 1).min(4096);
        let cell = cell.max((hi.x - lo.x) / nx as f64).max((hi.y - lo.y) / ny as f64);
        let mut g = SegmentGrid {
            lo,
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        };
        for (i, &(a, b)) in segs.iter().enumerate() {
            let (x0, y0, x1, y1) = g.cell_range(a, b);
            for cy in y0..=y1 {
                for cx in x0..=x1 {
                    g.buckets[cy * g.nx + cx].push(i);
                }
            }
        }
        g
    }

    fn coord(&self, v: f64, lo: f64, n: usize) -> usize {
        (((v - lo) / self.cell).floor().max(0.0) as usize).min(n - 1)
    }

    fn cell_range(&self, a: Vec2, b: Vec2) -> (usize, usize, usize, usize) {
        (
            self.coord(a.x.min(b.x), self.lo.x, self.nx),
            self.coord(a.y.min(b.y), self.lo.y, self.ny),
            self.coord(a.x.max(b.x), self.lo.x, self.nx),
            self.coord(a.y.max(b.y), self.lo.y, self.ny),
        )
    }

    /// Every unordered pair `(i, j)` with `i < j` whose bounding boxes share a cell,
    /// each reported once, in ascending order.
    pub fn candidate_pairs(&self, segs: &[(Vec2, Vec2)]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ci, bucket) in self.buckets.iter().enumerate() {
            let (cx, cy) = (ci % self.nx, ci / self.nx);
            for (k, &i) in bucket.iter().enumerate() {
                for &j in &bucket[k + 1..] {
                    let (a, b) = if i < j { (i, j) } else { (j, i) };
                    // report the pair only in the lowest shared cell
                    let (ax0, ay0, _, _) = self.cell_range(segs[a].0, segs[a].1);
                    let (bx0, by0, _, _) = self.cell_range(segs[b].0, segs[b].1);
                    if ax0.max(bx0) == cx && ay0.max(by0) == cy {
                        out.push((a, b));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
