//! Divides: branches in the unit disk, the `divide v1` text format and resampling.

use crate::error::{Error, Result};
use crate::geom::{PointDisk, Vec2};
use crate::spline::CatmullRom;
use std::collections::BTreeSet;
use std::fmt::Write as _;

pub const TOL_DISK: f64 = 1e-9;
pub const TOL_ENDPOINT: f64 = 1e-6;
pub const DEFAULT_RESOLUTION: usize = 64;
/// Upper bound on the distance between consecutive dense samples.
pub const MAX_SAMPLE_STEP: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchKind {
    Arc,
    Circle,
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub id: i64,
    pub kind: BranchKind,
    /// For circles the closing point is not repeated.
    pub control_points: Vec<PointDisk>,
    curve: CatmullRom,
}

impl Branch {
    /// Validates the control polygon. Arc endpoints within tolerance of the circle are
    /// projected onto it.
    pub fn new(id: i64, kind: BranchKind, mut pts: Vec<PointDisk>) -> Result<Branch> {
        let given = pts.len();
        if kind == BranchKind::Circle && pts.len() >= 2 && pts[0].dist(pts[pts.len() - 1]) < 1e-12 {
            pts.pop();
        }
        if given < 4 || pts.len() < 3 {
            return Err(Error::TooFewControlPoints { branch: id, count: given });
        }
        for p in &pts {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(Error::Invalid(format!("branch {id}: non-finite coordinate")));
            }
        }
        let n = pts.len();
        match kind {
            BranchKind::Arc => {
                for i in [0, n - 1] {
                    let p = pts[i];
                    if (p.norm() - 1.0).abs() > TOL_ENDPOINT {
                        return Err(Error::EndpointOffCircle { branch: id, x: p.x, y: p.y });
                    }
                    pts[i] = p.normalized();
                }
                for p in &pts[1..n - 1] {
                    if p.norm() >= 1.0 - TOL_ENDPOINT {
                        return Err(Error::NotInterior { branch: id, x: p.x, y: p.y });
                    }
                }
            }
            BranchKind::Circle => {
                for p in &pts {
                    if p.norm() >= 1.0 - TOL_ENDPOINT {
                        return Err(Error::NotInterior { branch: id, x: p.x, y: p.y });
                    }
                }
            }
        }
        let m = if kind == BranchKind::Circle { n } else { n - 1 };
        for i in 0..m {
            let j = (i + 1) % n;
            if pts[i].dist(pts[j]) < 1e-12 {
                return Err(Error::DegenerateSegment { branch: id, index: i, next: j });
            }
        }
        let curve = CatmullRom::new(pts.clone(), kind == BranchKind::Circle);
        Ok(Branch {
            id,
            kind,
            control_points: pts,
            curve,
        })
    }

    pub fn curve(&self) -> &CatmullRom {
        &self.curve
    }

    pub fn is_arc(&self) -> bool {
        self.kind == BranchKind::Arc
    }

    pub fn domain(&self) -> f64 {
        self.curve.domain()
    }

    pub fn start(&self) -> PointDisk {
        self.control_points[0]
    }

    pub fn end(&self) -> PointDisk {
        *self.control_points.last().unwrap()
    }
}

#[derive(Clone, Debug)]
pub struct Divide {
    pub branches: Vec<Branch>,
    pub resolution: usize,
}

/// Dense samples of one branch.
#[derive(Clone, Debug)]
pub struct Polyline {
    pub branch: usize,
    pub params: Vec<f64>,
    pub points: Vec<PointDisk>,
    pub closed: bool,
}

impl Divide {
    pub fn new(branches: Vec<Branch>) -> Result<Divide> {
        if branches.is_empty() {
            return Err(Error::Empty);
        }
        let mut seen = BTreeSet::new();
        for b in &branches {
            if !seen.insert(b.id) {
                return Err(Error::DuplicateId(b.id));
            }
        }
        Ok(Divide {
            branches,
            resolution: DEFAULT_RESOLUTION,
        })
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution.max(1);
        self
    }

    pub fn has_circles(&self) -> bool {
        self.branches.iter().any(|b| !b.is_arc())
    }

    pub fn arc_count(&self) -> usize {
        self.branches.iter().filter(|b| b.is_arc()).count()
    }

    pub fn branch_index(&self, id: i64) -> Option<usize> {
        self.branches.iter().position(|b| b.id == id)
    }

    /// Dense samples of every branch, validated for regularity and disk containment.
    pub fn polylines(&self) -> Result<Vec<Polyline>> {
        (0..self.branches.len())
            .map(|i| resample_branch(self, i, self.resolution))
            .collect()
    }

    /// Serializes to the `divide v1` format.
    pub fn to_text(&self) -> String {
        let mut s = String::from("divide v1\n");
        for b in &self.branches {
            let kind = match b.kind {
                BranchKind::Arc => "arc",
                BranchKind::Circle => "circle",
            };
            let _ = write!(s, "{kind} {}:", b.id);
            let mut pts = b.control_points.clone();
            if b.kind == BranchKind::Circle {
                pts.push(pts[0]);
            }
            for p in pts {
                let _ = write!(s, " ({},{})", fmt_coord(p.x), fmt_coord(p.y));
            }
            s.push('\n');
        }
        s
    }
}

fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Dense polyline of branch `index`: uniform Catmull–Rom samples, at least `resolution`
/// per segment and closer than [`MAX_SAMPLE_STEP`]; endpoints are the control endpoints.
pub fn resample_branch(d: &Divide, index: usize, resolution: usize) -> Result<Polyline> {
    let b = &d.branches[index];
    let c = b.curve();
    let params = c.sample_params(resolution, 0.8 * MAX_SAMPLE_STEP);
    let mut points: Vec<PointDisk> = params.iter().map(|&t| c.eval(t)).collect();
    let n = points.len();
    match b.kind {
        BranchKind::Arc => {
            points[0] = b.start();
            points[n - 1] = b.end();
        }
        BranchKind::Circle => points[n - 1] = points[0],
    }
    let scale = c
        .control_points()
        .windows(2)
        .map(|w| w[0].dist(w[1]))
        .fold(0.0, f64::max);
    for (k, (&t, p)) in params.iter().zip(&points).enumerate() {
        let interior = b.kind == BranchKind::Circle || (k > 0 && k + 1 < n);
        if p.norm() > 1.0 + TOL_DISK || (interior && p.norm() >= 1.0) {
            return Err(Error::LeavesDisk { branch: b.id, param: t });
        }
        if c.d1(t).norm() < 1e-9 * scale.max(1e-300) {
            return Err(Error::NotRegular { branch: b.id, param: t });
        }
    }
    let mut params = params;
    // refine any step that still exceeds the bound
    let mut k = 0;
    while k + 1 < points.len() {
        if points[k].dist(points[k + 1]) >= MAX_SAMPLE_STEP {
            let t = 0.5 * (params[k] + params[k + 1]);
            params.insert(k + 1, t);
            points.insert(k + 1, c.eval(t));
        } else {
            k += 1;
        }
    }
    Ok(Polyline {
        branch: index,
        params,
        points,
        closed: b.kind == BranchKind::Circle,
    })
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Lexer {
    fn new(line_text: &str, line: usize) -> Self {
        Lexer {
            chars: line_text.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.pos < self.chars.len() && self.chars[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn number_token(&mut self) -> (usize, String) {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '+' {
                self.pos += 1;
            } else {
                break;
            }
        }
        (start, self.chars[start..self.pos].iter().collect())
    }

    fn integer(&mut self) -> Result<i64> {
        let (start, tok) = self.number_token();
        tok.parse::<i64>().map_err(|_| Error::Syntax {
            line: self.line,
            col: start + 1,
            msg: format!("invalid branch id '{tok}'"),
        })
    }

    fn real(&mut self) -> Result<f64> {
        let (start, tok) = self.number_token();
        let bad = || Error::Syntax {
            line: self.line,
            col: start + 1,
            msg: format!("invalid number '{tok}'"),
        };
        let lower = tok.to_ascii_lowercase();
        if lower.contains("inf") || lower.contains("nan") {
            return Err(bad());
        }
        tok.parse::<f64>().map_err(|_| bad())
    }
}

/// Parses `divide v1` text.
pub fn parse_divide(text: &str) -> Result<Divide> {
    let mut header = false;
    let mut branches = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut lx = Lexer::new(content, line_no);
        if !header {
            let w = lx.word();
            if w != "divide" {
                return Err(lx.err("expected header 'divide v1'"));
            }
            let v = lx.word();
            let (_, num) = lx.number_token();
            if v != "v" || num != "1" || !lx.at_end() {
                return Err(lx.err("unsupported format version, expected 'divide v1'"));
            }
            header = true;
            continue;
        }
        let kind = match lx.word().as_str() {
            "arc" => BranchKind::Arc,
            "circle" => BranchKind::Circle,
            _ => return Err(lx.err("expected 'arc' or 'circle'")),
        };
        let id = lx.integer()?;
        lx.expect(':')?;
        let mut pts = Vec::new();
        while !lx.at_end() {
            lx.expect('(')?;
            let x = lx.real()?;
            lx.expect(',')?;
            let y = lx.real()?;
            lx.expect(')')?;
            pts.push(Vec2::new(x, y));
        }
        if branches.iter().any(|b: &Branch| b.id == id) {
            return Err(Error::DuplicateId(id));
        }
        branches.push(Branch::new(id, kind, pts)?);
    }
    if !header {
        return Err(Error::Syntax {
            line: 1,
            col: 1,
            msg: "missing header 'divide v1'".into(),
        });
    }
    Divide::new(branches)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHORD: &str = "divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (1,0)";

    #[test]
    fn parses_chord() {
        let d = parse_divide(CHORD).unwrap();
        assert_eq!(d.branches.len(), 1);
        assert_eq!(d.branches[0].kind, BranchKind::Arc);
        assert_eq!(d.resolution, DEFAULT_RESOLUTION);
    }

    #[test]
    fn rejects_endpoint_off_circle() {
        let e = parse_divide("divide v1\narc 1: (-1,0) (-0.3,0) (0.3,0) (0.9,0)").unwrap_err();
        assert!(matches!(e, Error::EndpointOffCircle { branch: 1, .. }));
    }

    #[test]
    fn rejects_too_few_points() {
        let e = parse_divide("divide v1\narc 1: (-1,0) (0,0) (1,0)").unwrap_err();
        assert!(matches!(e, Error::TooFewControlPoints { count: 3, .. }));
    }

    #[test]
    fn rejects_duplicate_ids() {
        let t = format!("{CHORD}\narc 1: (0,-1) (0,-0.3) (0,0.3) (0,1)");
        assert_eq!(parse_divide(&t).unwrap_err(), Error::DuplicateId(1));
    }

    #[test]
    fn reports_syntax_position() {
        let e = parse_divide("divide v1\narc 1: (-1,0) (-0.3;0)").unwrap_err();
        assert_eq!(
            e,
            Error::Syntax {
                line: 2,
                col: 20,
                msg: "expected ','".into()
            }
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let t = "# header comment\ndivide v1 # trailing\n\n  arc   7 :( -1 , 0 )(-0.5,0)  (0.5, 0)(1,0) # chord\n";
        let d = parse_divide(t).unwrap();
        assert_eq!(d.branches[0].id, 7);
        assert_eq!(d.branches[0].control_points.len(), 4);
    }

    #[test]
    fn exponent_reals() {
        let d = parse_divide("divide v1\narc 1: (-1e0,0) (-3e-1,0) (3E-1,0) (1.0e+0,0)").unwrap();
        assert!((d.branches[0].control_points[1].x + 0.3).abs() < 1e-15);
    }

    #[test]
    fn chord_samples_are_collinear() {
        let d = parse_divide(CHORD).unwrap();
        let pl = resample_branch(&d, 0, 64).unwrap();
        assert!(pl.points.iter().all(|p| p.y == 0.0));
        assert_eq!(pl.points[0], Vec2::new(-1.0, 0.0));
        assert_eq!(*pl.points.last().unwrap(), Vec2::new(1.0, 0.0));
    }

    #[test]
    fn circle_polyline_closes() {
        let d = parse_divide("divide v1\ncircle 1: (0.5,0) (0,0.5) (-0.5,0) (0,-0.5) (0.5,0)").unwrap();
        assert_eq!(d.branches[0].control_points.len(), 4);
        let pl = resample_branch(&d, 0, 64).unwrap();
        assert_eq!(pl.points[0], *pl.points.last().unwrap());
        assert!(pl.closed);
    }

    #[test]
    fn text_round_trip() {
        let d = parse_divide("divide v1\narc 3: (0,-1) (0.1,-0.2) (-0.1,0.3) (0,1)\ncircle 4: (0.2,0) (0,0.2) (-0.2,0) (0,-0.2)").unwrap();
        let e = parse_divide(&d.to_text()).unwrap();
        assert_eq!(d.branches.len(), e.branches.len());
        for (a, b) in d.branches.iter().zip(&e.branches) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.kind, b.kind);
            for (p, q) in a.control_points.iter().zip(&b.control_points) {
                assert!(p.dist(*q) < 1e-12);
            }
        }
    }
}
