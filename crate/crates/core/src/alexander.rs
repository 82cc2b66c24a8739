//! Alexander polynomial of a diagram by Fox calculus on the Wirtinger presentation.

use crate::diagram::Diagram;
use crate::poly::{det, IntPoly};

/// Result of the diagram route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramAlexander {
    pub polynomial: IntPoly,
    /// The diagram shows a split link, so the polynomial vanishes.
    pub split: bool,
}

/// Normalized one-variable Alexander polynomial of the link shown by `d`.
pub fn alexander_from_diagram(d: &Diagram) -> DiagramAlexander {
    let d = d.simplify();
    let n = d.crossing_count();
    let split = DiagramAlexander { polynomial: IntPoly::zero(), split: true };
    if n == 0 {
        return if d.components.len() <= 1 {
            DiagramAlexander { polynomial: IntPoly::one(), split: false }
        } else {
            split
        };
    }
    // arcs run between consecutive under-passages
    let mut arc_of = vec![vec![0usize; 0]; d.components.len()];
    let mut under_in = vec![0usize; n];
    let mut under_out = vec![0usize; n];
    let mut over_arc = vec![0usize; n];
    let mut next_arc = 0;
    for (k, comp) in d.components.iter().enumerate() {
        let unders: Vec<usize> = (0..comp.len()).filter(|&j| !comp[j].over).collect();
        if unders.is_empty() {
            return split;
        }
        let m = comp.len();
        let first = unders[0];
        let base = next_arc;
        let mut arcs = vec![0usize; m];
        let mut cur = base + unders.len() - 1;
        for step in 0..m {
            let j = (first + step) % m;
            if !comp[j].over {
                let incoming = cur;
                cur = if step == 0 { base } else { cur + 1 };
                under_in[comp[j].crossing] = incoming;
                under_out[comp[j].crossing] = cur;
            }
            arcs[j] = cur;
        }
        next_arc += unders.len();
        for (j, p) in comp.iter().enumerate() {
            if p.over {
                over_arc[p.crossing] = arcs[j];
            }
        }
        arc_of[k] = arcs;
    }
    debug_assert_eq!(next_arc, n);
    let mut m = vec![vec![IntPoly::zero(); n]; n];
    for c in 0..n {
        let (o, a, b) = (over_arc[c], under_in[c], under_out[c]);
        let (fo, fa, fb) = if d.signs[c] > 0 {
            (IntPoly::from_i64s(&[1, -1]), IntPoly::from_i64s(&[0, 1]), IntPoly::constant(-1))
        } else {
            (IntPoly::from_i64s(&[-1, 1]), IntPoly::constant(1), IntPoly::from_i64s(&[0, -1]))
        };
        m[c][o] = m[c][o].clone() + fo;
        m[c][a] = m[c][a].clone() + fa;
        m[c][b] = m[c][b].clone() + fb;
    }
    let minor: Vec<Vec<IntPoly>> = m[..n - 1].iter().map(|row| row[..n - 1].to_vec()).collect();
    let p = det(minor).normalized();
    DiagramAlexander { split: p.is_zero(), polynomial: p }
}
