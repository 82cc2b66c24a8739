//! Uniform Catmull–Rom interpolation through control points.

use crate::geom::Vec2;

#[derive(Clone, Debug)]
pub struct CatmullRom {
    pts: Vec<Vec2>,
    closed: bool,
}

impl CatmullRom {
    /// Open curves get reflected phantom points at both ends; closed curves wrap.
    pub fn new(pts: Vec<Vec2>, closed: bool) -> Self {
        assert!(pts.len() >= 2);
        CatmullRom { pts, closed }
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn control_points(&self) -> &[Vec2] {
        &self.pts
    }

    pub fn segments(&self) -> usize {
        if self.closed {
            self.pts.len()
        } else {
            self.pts.len() - 1
        }
    }

    /// Parameter range is `[0, domain]`.
    pub fn domain(&self) -> f64 {
        self.segments() as f64
    }

    fn ctrl(&self, i: isize) -> Vec2 {
        let n = self.pts.len() as isize;
        if self.closed {
            return self.pts[i.rem_euclid(n) as usize];
        }
        if i < 0 {
            self.pts[0] * 2.0 - self.pts[1]
        } else if i >= n {
            self.pts[(n - 1) as usize] * 2.0 - self.pts[(n - 2) as usize]
        } else {
            self.pts[i as usize]
        }
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let m = self.segments();
        let t = if self.closed {
            t.rem_euclid(m as f64)
        } else {
            t.clamp(0.0, m as f64)
        };
        let i = (t.floor() as usize).min(m - 1);
        (i, t - i as f64)
    }

    fn coeffs(&self, i: usize) -> [Vec2; 4] {
        let i = i as isize;
        let (p0, p1, p2, p3) = (self.ctrl(i - 1), self.ctrl(i), self.ctrl(i + 1), self.ctrl(i + 2));
        [
            p1 * 2.0,
            p2 - p0,
            p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3,
            -p0 + p1 * 3.0 - p2 * 3.0 + p3,
        ]
    }

    /// Position, first and second derivative at parameter `t`.
    pub fn eval_all(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        let (i, u) = self.locate(t);
        let [a, b, c, d] = self.coeffs(i);
        let p = (a + b * u + c * (u * u) + d * (u * u * u)) * 0.5;
        let d1 = (b + c * (2.0 * u) + d * (3.0 * u * u)) * 0.5;
        let d2 = (c * 2.0 + d * (6.0 * u)) * 0.5;
        (p, d1, d2)
    }

    pub fn eval(&self, t: f64) -> Vec2 {
        self.eval_all(t).0
    }

    pub fn d1(&self, t: f64) -> Vec2 {
        self.eval_all(t).1
    }

    pub fn d2(&self, t: f64) -> Vec2 {
        self.eval_all(t).2
    }

    /// Parameters of a dense sampling: at least `resolution` steps per segment and
    /// chord length below `max_step`. Open curves end exactly at the domain end;
    /// closed curves repeat the start parameter shifted by the period.
    pub fn sample_params(&self, resolution: usize, max_step: f64) -> Vec<f64> {
        let mut ts = Vec::new();
        for i in 0..self.segments() {
            let mut len = 0.0;
            let mut prev = self.eval(i as f64);
            for k in 1..=16 {
                let q = self.eval(i as f64 + k as f64 / 16.0);
                len += prev.dist(q);
                prev = q;
            }
            let n = resolution.max((len / max_step).ceil() as usize + 1).max(1);
            for k in 0..n {
                ts.push(i as f64 + k as f64 / n as f64);
            }
        }
        ts.push(self.domain());
        // split any step whose chord is still too long
        let mut out = Vec::with_capacity(ts.len());
        out.push(ts[0]);
        for w in ts.windows(2) {
            let mut stack = vec![(w[0], w[1])];
            while let Some((a, b)) = stack.pop() {
                if self.eval(a).dist(self.eval(b)) >= max_step && b - a > 1e-9 {
                    let m = 0.5 * (a + b);
                    stack.push((m, b));
                    stack.push((a, m));
                } else {
                    out.push(b);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wave() -> CatmullRom {
        CatmullRom::new(
            vec![
                Vec2::new(-1.0, 0.0),
                Vec2::new(-0.3, 0.4),
                Vec2::new(0.2, -0.3),
                Vec2::new(0.6, 0.1),
                Vec2::new(1.0, 0.0),
            ],
            false,
        )
    }

    #[test]
    fn interpolates_control_points() {
        let c = wave();
        for (i, p) in c.control_points().iter().enumerate() {
            assert!(c.eval(i as f64).dist(*p) < 1e-15);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let c = wave();
        let h = 1e-6;
        for k in 1..40 {
            let t = k as f64 * 0.1 - 0.001;
            let (_, d1, d2) = c.eval_all(t);
            let fd1 = (c.eval(t + h) - c.eval(t - h)) * (0.5 / h);
            let fd2 = (c.d1(t + h) - c.d1(t - h)) * (0.5 / h);
            assert!(d1.dist(fd1) < 1e-7);
            assert!(d2.dist(fd2) < 1e-6);
        }
    }

    #[test]
    fn c1_across_knots() {
        let c = wave();
        for i in 1..4 {
            let t = i as f64;
            assert!(c.d1(t - 1e-12).dist(c.d1(t + 1e-12)) < 1e-9);
        }
    }

    #[test]
    fn closed_curve_wraps() {
        let sq = CatmullRom::new(
            vec![
                Vec2::new(0.5, 0.0),
                Vec2::new(0.0, 0.5),
                Vec2::new(-0.5, 0.0),
                Vec2::new(0.0, -0.5),
            ],
            true,
        );
        assert!(sq.eval(0.0).dist(sq.eval(4.0)) < 1e-15);
        assert!(sq.d1(0.0).dist(sq.d1(4.0)) < 1e-15);
    }

    #[test]
    fn sample_spacing_bound() {
        let c = wave();
        let ts = c.sample_params(8, 0.05);
        assert_eq!(ts[0], 0.0);
        assert_eq!(*ts.last().unwrap(), c.domain());
        for w in ts.windows(2) {
            assert!(c.eval(w[0]).dist(c.eval(w[1])) < 0.05);
        }
    }
}
