//! Seeded generator of small generic connected divides.

use crate::analysis::Analysis;
use crate::divide::{Branch, BranchKind, Divide};
use crate::geom::Vec2;
use rand::Rng;
use std::f64::consts::TAU;

#[derive(Clone, Copy, Debug)]
pub struct RandomConfig {
    pub max_arcs: usize,
    pub max_delta: usize,
    /// Smallest admissible crossing angle.
    pub min_angle: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig { max_arcs: 3, max_delta: 3, min_angle: 0.2 }
    }
}

fn random_arc<R: Rng>(rng: &mut R, id: i64) -> Option<Branch> {
    let a0 = rng.gen_range(0.0..TAU);
    let a1 = a0 + rng.gen_range(0.6..TAU - 0.6);
    let inner = rng.gen_range(2..=4);
    let mut pts = vec![Vec2::from_angle(a0)];
    for _ in 0..inner {
        let r = 0.8 * rng.gen_range(0.0f64..1.0).sqrt();
        pts.push(Vec2::from_angle(rng.gen_range(0.0..TAU)) * r);
    }
    pts.push(Vec2::from_angle(a1));
    Branch::new(id, BranchKind::Arc, pts).ok()
}

/// One candidate; `None` when it is rejected.
pub fn try_random_divide<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Option<Analysis> {
    let arcs = rng.gen_range(1..=cfg.max_arcs);
    let branches: Option<Vec<Branch>> = (0..arcs).map(|i| random_arc(rng, i as i64 + 1)).collect();
    let d = Divide::new(branches?).ok()?;
    let a = Analysis::new(d).ok()?;
    let ok = a.map.connected
        && a.crossings.len() <= cfg.max_delta
        && a.crossings.iter().all(|c| c.angle.min(std::f64::consts::PI - c.angle) >= cfg.min_angle);
    ok.then_some(a)
}

/// Draws candidates until one is accepted.
pub fn random_divide<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Analysis {
    loop {
        if let Some(a) = try_random_divide(rng, cfg) {
            return a;
        }
    }
}
