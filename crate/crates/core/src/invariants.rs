//! Invariants of the link of a divide by two independent routes, and their consistency checks.

use crate::alexander::alexander_from_diagram;
use crate::analysis::Analysis;
use crate::diagram::Diagram;
use crate::divide::Divide;
use crate::error::{Error, Result};
use crate::lift::{lift_link, unknotting_schedule, CoOrientation, UnknottingSchedule};
use crate::monodromy::{monodromy, Monodromy};
use crate::poly::IntPoly;
use crate::projection::link_diagram;
use num_bigint::BigInt;
use num_traits::Signed;
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Tag attached to the gordian number: the lower bound is a cited theorem, not recomputed.
pub const LOWER_BOUND_ASSUMPTION: &str = "assumed (slice-genus bound from gauge theory, not recomputed)";

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub seed: u64,
    pub resolution: usize,
    pub delta: Option<usize>,
    pub r: Option<usize>,
    pub mu: Option<i64>,
    pub genus_4ball: Option<i64>,
    pub gordian: Option<i64>,
    pub schedule: Option<UnknottingSchedule>,
    pub alexander_monodromy: Option<IntPoly>,
    pub alexander_diagram: Option<IntPoly>,
    pub trace: Option<i64>,
    pub geometric_intersections: Option<i64>,
    /// Linking numbers between branches, from signed diagram crossings.
    pub linking: Option<Vec<Vec<i64>>>,
    /// Number of crossings between distinct branches of the divide.
    pub branch_intersections: Option<Vec<Vec<i64>>>,
    pub diagram_crossings: Option<(usize, usize)>,
    pub checks: Vec<Check>,
}

impl InvariantReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), pass, detail: detail.into() });
    }

    /// Deterministic `key: value` text, one check per line.
    pub fn to_text(&self) -> String {
        fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map_or("n/a".to_string(), |x| x.to_string())
        }
        fn matrix(m: &Option<Vec<Vec<i64>>>) -> String {
            match m {
                None => "n/a".into(),
                Some(rows) => rows
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join("; "),
            }
        }
        let mut s = String::new();
        let _ = writeln!(s, "seed: {:#x}", self.seed);
        let _ = writeln!(s, "resolution: {}", self.resolution);
        let _ = writeln!(s, "delta: {}", opt(&self.delta));
        let _ = writeln!(s, "r: {}", opt(&self.r));
        let _ = writeln!(s, "mu: {}", opt(&self.mu));
        let _ = writeln!(s, "genus_4ball: {}", opt(&self.genus_4ball));
        let _ = writeln!(s, "gordian: {}", opt(&self.gordian));
        let _ = writeln!(s, "gordian_upper_bound: {}", match &self.schedule {
            Some(sc) => format!("{} cutovers", sc.events.len()),
            None => "n/a".into(),
        });
        let _ = writeln!(s, "gordian_lower_bound: {LOWER_BOUND_ASSUMPTION}");
        if let Some(sc) = &self.schedule {
            let sig: Vec<String> = sc.events.iter().map(|e| format!("{:.9}", e.sigma)).collect();
            let _ = writeln!(s, "cutover_sigmas: {}", if sig.is_empty() { "none".into() } else { sig.join(" ") });
            let _ = writeln!(s, "embedding_certificate: sigma0 {:.9} separation {:.6e} grid {} {}",
                sc.certificate.sigma0, sc.certificate.min_separation, sc.certificate.grid,
                if sc.certificate.pass { "PASS" } else { "FAIL" });
        }
        let _ = writeln!(s, "alexander_monodromy: {}", opt(&self.alexander_monodromy));
        let _ = writeln!(s, "alexander_diagram: {}", opt(&self.alexander_diagram));
        let _ = writeln!(s, "trace: {}", opt(&self.trace));
        let _ = writeln!(s, "geometric_intersections: {}", opt(&self.geometric_intersections));
        let _ = writeln!(s, "diagram_crossings: {}", match self.diagram_crossings {
            Some((a, b)) => format!("{a} (simplified {b})"),
            None => "n/a".into(),
        });
        let _ = writeln!(s, "linking: {}", matrix(&self.linking));
        let _ = writeln!(s, "branch_intersections: {}", matrix(&self.branch_intersections));
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(s, "check {}: {status}", c.name);
            } else {
                let _ = writeln!(s, "check {}: {status} ({})", c.name, c.detail);
            }
        }
        let _ = writeln!(s, "status: {}", if self.all_pass() { "PASS" } else { "FAIL" });
        s
    }
}

/// Monodromy of an analysed divide; rejects circle branches and disconnected divides.
pub fn divide_monodromy(a: &Analysis) -> Result<Monodromy> {
    if a.divide.has_circles() {
        return Err(Error::CircleBranch);
    }
    if !a.map.connected {
        return Err(Error::Disconnected);
    }
    monodromy(&a.map)
}

/// Characteristic polynomial of the homological monodromy, normalized.
pub fn alexander_from_monodromy(d: &Divide) -> Result<IntPoly> {
    let a = Analysis::new(d.clone())?;
    Ok(divide_monodromy(&a)?.char_poly.normalized())
}

/// Normalized one-variable Alexander polynomial of the diagram of `L(P)` projected with `seed`.
pub fn alexander_oracle(d: &Divide, seed: u64) -> Result<IntPoly> {
    let dg = link_diagram(&lift_link(d), seed)?;
    Ok(alexander_from_diagram(&dg).polynomial.normalized())
}

/// Linking numbers indexed by branch, from a diagram of `L(P)`.
pub fn branch_linking(d: &Divide, dg: &Diagram, component_to_branch: &[usize]) -> Vec<Vec<i64>> {
    let n = d.branches.len();
    let lk = dg.linking_matrix();
    let mut out = vec![vec![0; n]; n];
    for (i, &bi) in component_to_branch.iter().enumerate() {
        for (j, &bj) in component_to_branch.iter().enumerate() {
            if bi != bj {
                out[bi][bj] = lk[i][j];
            }
        }
    }
    out
}

/// Crossing counts between distinct branches.
pub fn branch_intersections(a: &Analysis) -> Vec<Vec<i64>> {
    let n = a.divide.branches.len();
    let mut out = vec![vec![0; n]; n];
    for c in &a.crossings {
        let (x, y) = (c.incidences[0].branch, c.incidences[1].branch);
        if x != y {
            out[x][y] += 1;
            out[y][x] += 1;
        }
    }
    out
}

/// Gordian number of a connected divide: `δ`, with the explicit cutover family as the
/// upper-bound certificate.
pub fn gordian_number(a: &Analysis) -> Result<(i64, UnknottingSchedule)> {
    let co = CoOrientation::standard(&a.divide);
    let schedule = unknotting_schedule(&a.divide, &co, &a.crossings, a.map.connected)?;
    Ok((a.map.delta as i64, schedule))
}

fn guarded<T>(f: impl FnOnce() -> Result<T>) -> Result<T> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal error".into());
            Err(Error::Invalid(format!("internal error: {msg}")))
        }
    }
}

/// Every invariant and consistency check; failures are recorded in the report.
pub fn full_report(d: &Divide, seed: u64) -> InvariantReport {
    let mut rep = InvariantReport {
        seed,
        resolution: d.resolution,
        delta: None,
        r: None,
        mu: None,
        genus_4ball: None,
        gordian: None,
        schedule: None,
        alexander_monodromy: None,
        alexander_diagram: None,
        trace: None,
        geometric_intersections: None,
        linking: None,
        branch_intersections: None,
        diagram_crossings: None,
        checks: Vec::new(),
    };
    let a = match guarded(|| Analysis::new(d.clone())) {
        Ok(a) => a,
        Err(e) => {
            rep.push("divide analysis", false, e.to_string());
            return rep;
        }
    };
    let counts = a.counts();
    rep.delta = Some(counts.delta);
    rep.r = Some(counts.r);
    rep.mu = counts.mu;
    rep.genus_4ball = counts.genus;
    rep.branch_intersections = Some(branch_intersections(&a));

    match guarded(|| divide_monodromy(&a)) {
        Ok(m) => {
            let p = m.char_poly.normalized();
            let mu = m.cycles.len();
            rep.trace = Some(m.matrix.trace());
            rep.geometric_intersections = Some(m.geometric_intersections);
            for (name, ok) in &m.checks {
                rep.push(name, *ok, "");
            }
            rep.push("torres symmetry", p.torres_symmetric(mu), format!("mu {mu}"));
            if counts.r == 1 {
                let v = p.eval(&BigInt::from(1)).abs();
                rep.push("alexander at 1 is a unit", v == BigInt::from(1), format!("|value| {v}"));
            }
            if mu == 2 {
                let t = m.matrix.trace();
                rep.push("trace in {1, 2}", t == 1 || t == 2, format!("trace {t}"));
                rep.push("trace is not 3 in absolute value", t.abs() != 3, format!("trace {t}"));
            }
            rep.alexander_monodromy = Some(p);
        }
        Err(e) => rep.push("monodromy", false, e.to_string()),
    }

    if a.map.connected {
        match guarded(|| gordian_number(&a)) {
            Ok((g, sc)) => {
                rep.gordian = Some(g);
                rep.push(
                    "unknotting schedule",
                    sc.events.len() == counts.delta && sc.certificate.pass,
                    format!("{} cutovers", sc.events.len()),
                );
                if counts.r == 1 {
                    rep.push("gordian equals genus_4ball equals delta", counts.genus == Some(g), "");
                }
                rep.schedule = Some(sc);
            }
            Err(e) => rep.push("unknotting schedule", false, e.to_string()),
        }
    }

    let oracle = guarded(|| {
        let l = lift_link(d);
        let dg = link_diagram(&l, seed)?;
        Ok((dg, l.component_to_branch))
    });
    match oracle {
        Ok((dg, comp)) => {
            let al = alexander_from_diagram(&dg);
            let p = al.polynomial.normalized();
            rep.diagram_crossings = Some((dg.crossing_count(), dg.simplify().crossing_count()));
            let lk = branch_linking(d, &dg, &comp);
            let inter = rep.branch_intersections.clone().unwrap_or_default();
            if d.branches.len() > 1 {
                rep.push("linking equals branch intersections", lk == inter, "");
            }
            rep.linking = Some(lk);
            if let Some(pm) = &rep.alexander_monodromy {
                rep.push("oracle agreement", *pm == p, format!("diagram {p}"));
            }
            rep.alexander_diagram = Some(p);
        }
        Err(e) => rep.push("diagram oracle", false, e.to_string()),
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::parse_divide;
    use crate::projection::DEFAULT_SEED;

    fn fixture(name: &str) -> Divide {
        let path = format!("{}/fixtures/{name}.divide", env!("CARGO_MANIFEST_DIR"));
        parse_divide(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn chord_report() {
        let r = full_report(&fixture("chord"), DEFAULT_SEED);
        assert!(r.all_pass(), "{}", r.to_text());
        assert_eq!(r.mu, Some(0));
        assert_eq!(r.alexander_monodromy, Some(IntPoly::one()));
        assert_eq!(r.gordian, Some(0));
    }

    #[test]
    fn loop_report() {
        let r = full_report(&fixture("loop"), DEFAULT_SEED);
        assert!(r.all_pass(), "{}", r.to_text());
        assert_eq!(r.trace, Some(1));
        assert_eq!(r.alexander_diagram, Some(IntPoly::from_i64s(&[1, -1, 1])));
        assert_eq!((r.gordian, r.genus_4ball), (Some(1), Some(1)));
    }

    #[test]
    fn diameters_report() {
        let r = full_report(&fixture("two-diameters"), DEFAULT_SEED);
        assert!(r.all_pass(), "{}", r.to_text());
        assert_eq!(r.linking, Some(vec![vec![0, 1], vec![1, 0]]));
    }

    #[test]
    fn disjoint_chords_annotated() {
        let r = full_report(&fixture("disjoint-chords"), DEFAULT_SEED);
        assert!(!r.all_pass());
        assert_eq!(r.check("monodromy").map(|c| c.pass), Some(false));
        assert_eq!(r.linking, Some(vec![vec![0, 0], vec![0, 0]]));
    }

    #[test]
    fn circle_annotated() {
        let d = parse_divide(
            "divide v1\narc 1: (-1,0) (-0.3,0.1) (0.3,-0.1) (1,0)\ncircle 2: (0,0.4) (-0.4,0) (0,-0.4) (0.4,0)\n",
        )
        .unwrap();
        let r = full_report(&d, DEFAULT_SEED);
        assert!(r.check("monodromy").is_some_and(|c| !c.pass));
        assert!(r.to_text().contains("status: FAIL"));
    }
}
