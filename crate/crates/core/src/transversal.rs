//! Unit-speed reparametrization of branches and the quaternionic transversality test.

use crate::divide::{BranchKind, Divide};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::lift::{clustered_params, sheet_samples};
use std::f64::consts::{FRAC_PI_2, PI};

/// A sample `(a, b, ȧ, ḃ, ä, b̈)` of a branch run at the speed that puts its lift on S³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSample {
    /// Spline parameter.
    pub t: f64,
    /// Reparametrized time.
    pub tau: f64,
    pub pos: Vec2,
    pub vel: Vec2,
    pub acc: Vec2,
}

impl UnitSample {
    /// `a² + b² + ȧ² + ḃ² − 1`.
    pub fn residual(&self) -> f64 {
        self.pos.norm2() + self.vel.norm2() - 1.0
    }

    /// `−aä + ȧ² − bb̈ + ḃ²`.
    pub fn v_i(&self) -> f64 {
        -self.pos.dot(self.acc) + self.vel.norm2()
    }

    /// `aȧ + ȧä + bḃ + ḃb̈`.
    pub fn v_0(&self) -> f64 {
        self.pos.dot(self.vel) + self.vel.dot(self.acc)
    }
}

/// Position, velocity and acceleration at spline parameter `t` for the unit-constraint speed.
/// `direction` is +1 for the lift along the branch and −1 for the time-reversed lift.
pub fn unit_jet(d: &Divide, branch: usize, t: f64, direction: f64) -> (Vec2, Vec2, Vec2) {
    let (g, g1, g2) = d.branches[branch].curve().eval_all(t);
    let speed = g1.norm();
    let tan = g1 * (direction / speed);
    let rho2 = (1.0 - g.norm2()).max(0.0);
    let rho = rho2.sqrt();
    let vel = tan * rho;
    let g2_perp = g2 - g1 * (g2.dot(g1) / (speed * speed));
    let acc = tan * (-g.dot(tan)) + g2_perp * (rho2 / (speed * speed));
    (g, vel, acc)
}

#[allow(clippy::too_many_arguments)]
fn simpson_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson_adaptive(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        + simpson_adaptive(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

/// Integral of `f` over `[a, b]` to relative accuracy `rel`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let eps = (rel * whole.abs()).max(1e-14);
    simpson_adaptive(f, a, b, fa, fm, fb, whole, eps, 16)
}

/// Samples of the branch reparametrized so that `a² + b² + ȧ² + ḃ² = 1`.
/// Arcs start at time `−π/2`, circles at 0.
pub fn reparametrize_unit(d: &Divide, branch: usize, direction: f64) -> Result<Vec<UnitSample>> {
    let br = &d.branches[branch];
    let curve = br.curve();
    let t_max = br.domain();
    let n = sheet_samples(d, branch);
    let (ts, tau0): (Vec<f64>, f64) = match br.kind {
        BranchKind::Arc => (clustered_params(t_max, n), -FRAC_PI_2),
        BranchKind::Circle => ((0..=n).map(|k| t_max * k as f64 / n as f64).collect(), 0.0),
    };
    // dτ/ds for the clustered substitution t = T(1 − cos πs)/2 stays bounded at the ends
    let rate = |t: f64, dt_ds: f64| -> f64 {
        let (g, g1, _) = curve.eval_all(t);
        let rho = (1.0 - g.norm2()).max(1e-300).sqrt();
        g1.norm() / rho * dt_ds
    };
    let integrand = |s: f64| -> f64 {
        match br.kind {
            BranchKind::Arc => {
                // the integrand has a finite limit at the ends; stay just inside
                let s = s.clamp(1e-7, 1.0 - 1e-7);
                let t = t_max * 0.5 * (1.0 - (PI * s).cos());
                let dt_ds = t_max * 0.5 * PI * (PI * s).sin();
                rate(t, dt_ds)
            }
            BranchKind::Circle => rate(s * t_max, t_max),
        }
    };
    let mut out = Vec::with_capacity(ts.len());
    let mut tau = tau0;
    for (k, &t) in ts.iter().enumerate() {
        if k > 0 {
            let (s0, s1) = ((k - 1) as f64 / n as f64, k as f64 / n as f64);
            tau += integrate(&integrand, s0, s1, 1e-8);
        }
        let interior = br.kind == BranchKind::Circle || (k > 0 && k < n);
        let (pos, vel, acc) = unit_jet(d, branch, t, direction);
        if interior && pos.norm2() >= 1.0 {
            return Err(Error::LeavesDisk { branch: br.id, param: t });
        }
        out.push(UnitSample { t, tau, pos, vel, acc });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchTransversality {
    pub branch: usize,
    /// Minimum of `v_i` over both lifts, refined between samples.
    pub min_vi: f64,
    /// `(t, v_i)` along the lift in the direction of the branch.
    pub plus: Vec<(f64, f64)>,
    /// `(t, v_i)` along the time-reversed lift.
    pub minus: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransversalityReport {
    pub branches: Vec<BranchTransversality>,
    pub min_vi: f64,
    pub max_v0: f64,
    pub max_residual: f64,
    /// Branches that are not nearly radial in the outer collar.
    pub collar_warnings: Vec<i64>,
    pub pass: bool,
}

fn vi_at(d: &Divide, branch: usize, t: f64, direction: f64) -> f64 {
    let (pos, vel, acc) = unit_jet(d, branch, t, direction);
    UnitSample { t, tau: 0.0, pos, vel, acc }.v_i()
}

/// Minimum of `v_i` over the samples, each local sample minimum refined by golden-section
/// search between its neighbours.
fn refined_min(d: &Divide, branch: usize, direction: f64, samples: &[(f64, f64)]) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    for k in 1..samples.len().saturating_sub(1) {
        if samples[k].1 > samples[k - 1].1 || samples[k].1 > samples[k + 1].1 {
            continue;
        }
        let (mut lo, mut hi) = (samples[k - 1].0, samples[k + 1].0);
        let f = |t: f64| vi_at(d, branch, t, direction);
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..60 {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = f(x2);
            }
        }
        best = best.min(f1).min(f2);
    }
    best
}

const COLLAR_RADIUS: f64 = std::f64::consts::FRAC_1_SQRT_2;
const COLLAR_ANGLE: f64 = 5.0 * PI / 180.0;

/// Evaluates `v_i` on both lifts of every branch.
pub fn transversality_check(d: &Divide) -> Result<TransversalityReport> {
    let mut branches = Vec::new();
    let (mut min_vi, mut max_v0, mut max_residual) = (f64::INFINITY, 0.0f64, 0.0f64);
    let mut collar_warnings = Vec::new();
    for b in 0..d.branches.len() {
        let mut rec = BranchTransversality { branch: b, min_vi: f64::INFINITY, plus: Vec::new(), minus: Vec::new() };
        let mut off_radial = false;
        for (dir, list) in [(1.0, &mut rec.plus), (-1.0, &mut rec.minus)] {
            for s in reparametrize_unit(d, b, dir)? {
                let v = s.v_i();
                min_vi = min_vi.min(v);
                max_v0 = max_v0.max(s.v_0().abs());
                max_residual = max_residual.max(s.residual().abs());
                list.push((s.t, v));
                if s.pos.norm() > COLLAR_RADIUS {
                    let tan = d.branches[b].curve().d1(s.t).normalized();
                    let radial = s.pos.normalized();
                    if tan.cross(radial).abs() > COLLAR_ANGLE.sin() {
                        off_radial = true;
                    }
                }
            }
            let m = refined_min(d, b, dir, list);
            rec.min_vi = rec.min_vi.min(m);
            min_vi = min_vi.min(m);
        }
        if off_radial {
            collar_warnings.push(d.branches[b].id);
        }
        branches.push(rec);
    }
    Ok(TransversalityReport { branches, min_vi, max_v0, max_residual, collar_warnings, pass: min_vi > 0.0 })
}
