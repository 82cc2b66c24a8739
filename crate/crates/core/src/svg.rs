//! Deterministic SVG 1.1 rendering of divides and link diagrams.

use crate::analysis::Analysis;
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use std::fmt::Write;

const SIZE: f64 = 480.0;
const CROSSING_MARK: f64 = 0.025;
/// Half-width of the gap at an under-crossing, relative to the drawing's diameter.
const GAP: f64 = 0.012;

fn num(v: f64) -> String {
    let s = format!("{v:.5}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0.00000".to_string()
    } else {
        s
    }
}

fn header(out: &mut String, min: [f64; 2], span: f64, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="{} {} {} {}">"#,
        num(min[0]),
        num(min[1]),
        num(span),
        num(span)
    );
    let _ = writeln!(out, "<title>{title}</title>");
}

fn path_data(pts: &[[f64; 2]], closed: bool) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(p[0]), num(-p[1]));
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

/// The divide in the unit disk: outline, one path per branch, a mark at each crossing.
pub fn divide_svg(a: &Analysis) -> String {
    let mut out = String::new();
    header(&mut out, [-1.1, -1.1], 2.2, "divide");
    let _ = writeln!(out, r##"<circle class="disk" cx="0" cy="0" r="1" fill="none" stroke="#888888" stroke-width="0.006"/>"##);
    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="0.012" stroke-linejoin="round">"#);
    for (b, poly) in a.divide.branches.iter().zip(&a.polylines) {
        let pts: Vec<[f64; 2]> = poly.points.iter().map(|p| [p.x, p.y]).collect();
        let _ = writeln!(
            out,
            r#"<path class="branch" id="branch-{}" d="{}"/>"#,
            b.id,
            path_data(&pts, !b.is_arc())
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g fill="red" stroke="none">"#);
    for c in &a.crossings {
        let _ = writeln!(
            out,
            r#"<circle class="crossing" id="crossing-{}" cx="{}" cy="{}" r="{CROSSING_MARK}"/>"#,
            c.id,
            num(c.position.x),
            num(-c.position.y)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

/// Splits a polyline into pieces that skip `±gap` of arc length around each cut position.
fn split_at(pts: &[[f64; 2]], cuts: &[f64], gap: f64) -> Vec<Vec<[f64; 2]>> {
    let mut arc = vec![0.0];
    for w in pts.windows(2) {
        let l = (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
        arc.push(arc.last().unwrap() + l);
    }
    let total = *arc.last().unwrap();
    let hidden = |s: f64| {
        cuts.iter().any(|&c| {
            let d = (s - c).abs();
            d < gap || total - d < gap
        })
    };
    let at = |s: f64| {
        let k = arc.partition_point(|&a| a <= s).clamp(1, pts.len() - 1);
        let (a0, a1) = (arc[k - 1], arc[k]);
        let t = if a1 > a0 { (s - a0) / (a1 - a0) } else { 0.0 };
        let (p, q) = (pts[k - 1], pts[k]);
        [p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t]
    };
    // events: polyline vertices plus the gap boundaries, in arc-length order
    let mut marks: Vec<f64> = arc.clone();
    for &c in cuts {
        for s in [c - gap, c + gap] {
            marks.push(s.rem_euclid(total.max(1e-300)));
        }
    }
    marks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    marks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut pieces = Vec::new();
    let mut cur: Vec<[f64; 2]> = Vec::new();
    for w in marks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if hidden(mid) {
            if cur.len() > 1 {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.clear();
        } else {
            if cur.is_empty() {
                cur.push(at(w[0]));
            }
            cur.push(at(w[1]));
        }
    }
    if cur.len() > 1 {
        pieces.push(cur);
    }
    // a closed strand passes through its first vertex without a break
    let closed = pts.len() > 2 && pts[0] == pts[pts.len() - 1];
    if closed && pieces.len() > 1 && !hidden(0.0) {
        let first = pieces.remove(0);
        pieces.last_mut().unwrap().extend_from_slice(&first[1..]);
    }
    pieces
}

/// The projected diagram with a break in the under strand at every crossing.
pub fn diagram_svg(d: &Diagram) -> Result<String> {
    let g = d
        .geometry
        .as_ref()
        .ok_or_else(|| Error::Invalid("diagram has no planar geometry to render".into()))?;
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in g.strands.iter().flatten() {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let pad = 0.05 * span;
    let mut out = String::new();
    header(&mut out, [lo[0] - pad, -hi[1] - pad], span + 2.0 * pad, "link diagram");
    let width = 0.006 * span;
    let _ = writeln!(
        out,
        r#"<g fill="none" stroke="black" stroke-width="{}" stroke-linecap="round" stroke-linejoin="round">"#,
        num(width)
    );
    for (k, (strand, passages)) in g.strands.iter().zip(&d.components).enumerate() {
        let mut arc = vec![0.0];
        for w in strand.windows(2) {
            arc.push(arc.last().unwrap() + (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]));
        }
        let cuts: Vec<f64> = passages
            .iter()
            .zip(&g.passage_params[k])
            .filter(|(p, _)| !p.over)
            .map(|(_, &(seg, t))| arc[seg] + t * (arc[seg + 1] - arc[seg]))
            .collect();
        let pieces = if cuts.is_empty() { vec![strand.clone()] } else { split_at(strand, &cuts, GAP * span) };
        for piece in pieces {
            let _ = writeln!(out, r#"<path class="strand" data-component="{k}" d="{}"/>"#, path_data(&piece, false));
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn write_svg(path: &std::path::Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}
