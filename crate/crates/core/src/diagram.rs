//! Combinatorial link diagrams: Gauss and PD codes, signs, Reidemeister simplification.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// One pass of a component through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passage {
    pub crossing: usize,
    pub over: bool,
}

/// Planar data kept for rendering: the projected strands and crossing locations.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramGeometry {
    /// Closed projected polylines, one per component.
    pub strands: Vec<Vec<[f64; 2]>>,
    /// For each component, the (segment index, segment parameter) of each passage in order.
    pub passage_params: Vec<Vec<(usize, f64)>>,
    pub crossing_points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    /// Cyclic passage sequences, one per link component.
    pub components: Vec<Vec<Passage>>,
    /// Crossing signs, +1 or −1.
    pub signs: Vec<i8>,
    pub geometry: Option<DiagramGeometry>,
}

impl Diagram {
    pub fn crossing_count(&self) -> usize {
        self.signs.len()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    /// Component of each crossing's over and under passage.
    pub fn crossing_components(&self) -> Vec<(usize, usize)> {
        let mut over = vec![usize::MAX; self.signs.len()];
        let mut under = vec![usize::MAX; self.signs.len()];
        for (k, comp) in self.components.iter().enumerate() {
            for p in comp {
                if p.over {
                    over[p.crossing] = k;
                } else {
                    under[p.crossing] = k;
                }
            }
        }
        over.into_iter().zip(under).collect()
    }

    /// Checks that every crossing has exactly one over and one under passage.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![(0, 0); self.signs.len()];
        for comp in &self.components {
            for p in comp {
                let s = seen.get_mut(p.crossing).ok_or_else(|| Error::Invalid(format!("crossing {} out of range", p.crossing)))?;
                if p.over {
                    s.0 += 1;
                } else {
                    s.1 += 1;
                }
            }
        }
        if let Some(c) = seen.iter().position(|&s| s != (1, 1)) {
            return Err(Error::Invalid(format!("crossing {c} does not have one over and one under passage")));
        }
        if self.signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Invalid("crossing sign must be ±1".into()));
        }
        Ok(())
    }

    /// Signed sequences, `+k` for over and `-k` for under at crossing `k` (1-based).
    pub fn gauss_code(&self) -> Vec<Vec<i64>> {
        self.components
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| {
                        let k = p.crossing as i64 + 1;
                        if p.over {
                            k
                        } else {
                            -k
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// PD code: `[a, b, c, d]` per crossing with `a` the incoming under edge, listed counterclockwise.
    pub fn pd_code(&self) -> Vec<[usize; 4]> {
        // the edge leaving passage j of a component gets the next label
        let mut label_out: Vec<Vec<usize>> = Vec::new();
        let mut next = 1;
        for comp in &self.components {
            label_out.push((0..comp.len()).map(|j| next + j).collect());
            next += comp.len();
        }
        let mut under = vec![(0, 0); self.signs.len()];
        let mut over = vec![(0, 0); self.signs.len()];
        for (k, comp) in self.components.iter().enumerate() {
            let n = comp.len();
            for (j, p) in comp.iter().enumerate() {
                let inc = label_out[k][(j + n - 1) % n];
                let out = label_out[k][j];
                if p.over {
                    over[p.crossing] = (inc, out);
                } else {
                    under[p.crossing] = (inc, out);
                }
            }
        }
        (0..self.signs.len())
            .map(|c| {
                let (a, cc) = under[c];
                let (oi, oo) = over[c];
                if self.signs[c] > 0 {
                    [a, oo, cc, oi]
                } else {
                    [a, oi, cc, oo]
                }
            })
            .collect()
    }

    /// Builds a diagram from a PD code whose labels run consecutively along each component.
    pub fn from_pd(pd: &[[usize; 4]]) -> Result<Diagram> {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for x in pd {
            for &l in x {
                *count.entry(l).or_default() += 1;
            }
        }
        if count.values().any(|&c| c != 2) {
            return Err(Error::Invalid("every PD label must appear exactly twice".into()));
        }
        // (incoming label) -> (crossing, over, outgoing label)
        let mut step: BTreeMap<usize, (usize, bool, usize)> = BTreeMap::new();
        let mut signs = Vec::new();
        for (c, &[a, b, cc, d]) in pd.iter().enumerate() {
            step.insert(a, (c, false, cc));
            let d_to_b = b == d + 1 || d > b + 1;
            if d_to_b {
                step.insert(d, (c, true, b));
                signs.push(1);
            } else {
                step.insert(b, (c, true, d));
                signs.push(-1);
            }
        }
        let mut used = BTreeMap::new();
        let mut components = Vec::new();
        for &start in step.keys() {
            if used.contains_key(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut l = start;
            while !used.contains_key(&l) {
                used.insert(l, ());
                let &(c, over, out) = step.get(&l).ok_or_else(|| Error::Invalid(format!("label {l} has no successor")))?;
                comp.push(Passage { crossing: c, over });
                l = out;
            }
            // rotate so the component starts with the passage that the smallest label leaves
            comp.rotate_right(1);
            components.push(comp);
        }
        let d = Diagram { components, signs, geometry: None };
        d.validate()?;
        Ok(d)
    }

    /// Linking numbers between components from signed crossings.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.components.len();
        let mut twice = vec![vec![0i64; n]; n];
        for (c, (o, u)) in self.crossing_components().into_iter().enumerate() {
            if o != u {
                twice[o][u] += self.signs[c] as i64;
                twice[u][o] += self.signs[c] as i64;
            }
        }
        twice.into_iter().map(|row| row.into_iter().map(|x| x / 2).collect()).collect()
    }

    /// Applies crossing-reducing Reidemeister I and II moves until none applies.
    pub fn simplify(&self) -> Diagram {
        let mut comps = self.components.clone();
        let mut alive = vec![true; self.signs.len()];
        loop {
            if let Some(c) = find_r1(&comps) {
                remove_crossings(&mut comps, &[c]);
                alive[c] = false;
                continue;
            }
            if let Some((a, b)) = find_r2(&comps, &self.signs) {
                remove_crossings(&mut comps, &[a, b]);
                alive[a] = false;
                alive[b] = false;
                continue;
            }
            break;
        }
        // renumber surviving crossings in order of first appearance
        let mut map = vec![usize::MAX; self.signs.len()];
        let mut signs = Vec::new();
        for comp in &comps {
            for p in comp {
                if map[p.crossing] == usize::MAX {
                    map[p.crossing] = signs.len();
                    signs.push(self.signs[p.crossing]);
                }
            }
        }
        let components = comps
            .into_iter()
            .map(|c| c.into_iter().map(|p| Passage { crossing: map[p.crossing], over: p.over }).collect())
            .collect();
        let geometry = if alive.iter().all(|&a| a) { self.geometry.clone() } else { None };
        Diagram { components, signs, geometry }
    }
}

fn remove_crossings(comps: &mut [Vec<Passage>], cs: &[usize]) {
    for comp in comps.iter_mut() {
        comp.retain(|p| !cs.contains(&p.crossing));
    }
}

fn find_r1(comps: &[Vec<Passage>]) -> Option<usize> {
    for comp in comps {
        let n = comp.len();
        for j in 0..n {
            let k = (j + 1) % n;
            if j != k && comp[j].crossing == comp[k].crossing {
                return Some(comp[j].crossing);
            }
        }
    }
    None
}

/// Consecutive passage pairs as (first, second, both over).
fn adjacent_pairs(comps: &[Vec<Passage>]) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for comp in comps {
        let n = comp.len();
        if n < 2 {
            continue;
        }
        for j in 0..n {
            let (p, q) = (comp[j], comp[(j + 1) % n]);
            if n == 2 && j == 1 {
                break;
            }
            if p.over == q.over && p.crossing != q.crossing {
                out.push((p.crossing, q.crossing, p.over));
            }
        }
    }
    out
}

fn find_r2(comps: &[Vec<Passage>], signs: &[i8]) -> Option<(usize, usize)> {
    let pairs = adjacent_pairs(comps);
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    for &(a, b, over) in &pairs {
        if !over || a == b || signs[a] == signs[b] {
            continue;
        }
        let k = key(a, b);
        if pairs.iter().any(|&(c, d, o)| !o && c != d && key(c, d) == k) {
            return Some(k);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn trefoil() -> Diagram {
        Diagram::from_pd(&[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]).unwrap()
    }

    #[test]
    fn pd_round_trip() {
        let t = trefoil();
        assert_eq!(t.components.len(), 1);
        assert_eq!(t.writhe(), -3);
        let again = Diagram::from_pd(&t.pd_code()).unwrap();
        assert_eq!(again.signs, t.signs);
        assert_eq!(again.gauss_code(), t.gauss_code());
        let fig8 = Diagram::from_pd(&[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]).unwrap();
        assert_eq!(fig8.writhe(), 0);
        assert_eq!(Diagram::from_pd(&fig8.pd_code()).unwrap().gauss_code(), fig8.gauss_code());
    }

    #[test]
    fn pd_labels_twice() {
        let t = trefoil();
        let mut count = BTreeMap::new();
        for x in t.pd_code() {
            let distinct: std::collections::BTreeSet<_> = x.iter().collect();
            assert_eq!(distinct.len(), 4);
            for l in x {
                *count.entry(l).or_insert(0) += 1;
            }
        }
        assert!(count.values().all(|&c| c == 2));
    }

    #[test]
    fn hopf_linking() {
        let h = Diagram::from_pd(&[[4, 1, 3, 2], [2, 3, 1, 4]]).unwrap();
        assert_eq!(h.components.len(), 2);
        let lk = h.linking_matrix();
        assert_eq!(lk[0][1].abs(), 1);
        assert_eq!(lk[0][1], lk[1][0]);
    }

    #[test]
    fn kink_removed() {
        // trefoil with an extra curl on one edge
        let mut t = trefoil();
        let k = t.signs.len();
        t.signs.push(1);
        t.components[0].insert(1, Passage { crossing: k, over: true });
        t.components[0].insert(2, Passage { crossing: k, over: false });
        let s = t.simplify();
        assert_eq!(s.crossing_count(), 3);
        let zero = Diagram { components: vec![vec![]], signs: vec![], geometry: None };
        assert_eq!(zero.simplify(), zero);
    }

    #[test]
    fn bigon_removed() {
        // two strands of an unlink pushed over each other
        let d = Diagram {
            components: vec![
                vec![Passage { crossing: 0, over: true }, Passage { crossing: 1, over: true }],
                vec![Passage { crossing: 1, over: false }, Passage { crossing: 0, over: false }],
            ],
            signs: vec![1, -1],
            geometry: None,
        };
        d.validate().unwrap();
        let s = d.simplify();
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.components.len(), 2);
    }
}
