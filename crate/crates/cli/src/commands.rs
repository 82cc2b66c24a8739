//! One function per subcommand; each renders deterministic text.

use crate::{Cli, Command};
use divlink::analysis::Analysis;
use divlink::divide::{parse_divide, Divide};
use divlink::error::{Error, Result};
use divlink::fibration::{build_morse_function, fiber_over_one, regularity_evidence, stereographic_xyz, CriticalKind, EtaEvidence};
use divlink::invariants::{divide_monodromy, full_report, gordian_number};
use divlink::lift::{lift_family, CoOrientation};
use divlink::projection::link_diagram;
use divlink::sum::connected_sum;
use divlink::svg::{diagram_svg, divide_svg};
use divlink::transversal::transversality_check;
use std::fmt::Write;
use std::path::Path;

fn read_divide(path: &Path, resolution: usize) -> Result<Divide> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_divide(&text)?.with_resolution(resolution))
}

fn analyse(path: &Path, resolution: usize) -> Result<Analysis> {
    Analysis::new(read_divide(path, resolution)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

/// Comment lines echoing the run configuration.
fn header(cli: &Cli, name: &str, inputs: &[&Path], prefix: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{prefix} divlink {name}");
    for p in inputs {
        let _ = writeln!(s, "{prefix} input: {}", p.display());
    }
    let _ = writeln!(s, "{prefix} seed: {:#x}", cli.seed);
    let _ = writeln!(s, "{prefix} resolution: {}", cli.resolution);
    s
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let text = match &cli.command {
        Command::Validate { input } => validate(cli, input)?,
        Command::Counts { input } => counts(cli, input)?,
        Command::Lift { input, sigma } => lift(cli, input, *sigma)?,
        Command::Diagram { input, simplify } => diagram(cli, input, *simplify)?,
        Command::Svg { input, diagram } => svg(cli, input, *diagram)?,
        Command::Monodromy { input } => monodromy(cli, input)?,
        Command::Invariants { input } => invariants(cli, input)?,
        Command::Untangle { input } => untangle(cli, input)?,
        Command::Transversal { input } => transversal(cli, input)?,
        Command::Fibration { input, xyz } => fibration(cli, input, xyz.as_deref())?,
        Command::Sum { first, second } => sum(cli, first, second)?,
    };
    emit(cli, &text)
}

fn validate(cli: &Cli, input: &Path) -> Result<String> {
    let a = analyse(input, cli.resolution)?;
    let mut s = header(cli, "validate", &[input], "#");
    let _ = writeln!(s, "branches: {}", a.divide.branches.len());
    let _ = writeln!(s, "arcs: {}", a.divide.arc_count());
    let _ = writeln!(s, "circles: {}", a.divide.branches.len() - a.divide.arc_count());
    let _ = writeln!(s, "crossings: {}", a.crossings.len());
    for c in &a.crossings {
        let [i, j] = c.incidences;
        let _ = writeln!(
            s,
            "crossing {}: ({:.9}, {:.9}) angle {:.9} branches {} {}",
            c.id,
            c.position.x,
            c.position.y,
            c.angle,
            a.divide.branches[i.branch].id,
            a.divide.branches[j.branch].id
        );
    }
    let _ = writeln!(s, "connected: {}", a.map.connected);
    let _ = writeln!(s, "valid: yes");
    Ok(s)
}

fn counts(cli: &Cli, input: &Path) -> Result<String> {
    let a = analyse(input, cli.resolution)?;
    let c = a.counts();
    let opt = |v: Option<i64>| v.map_or("n/a".to_string(), |x| x.to_string());
    let mut s = header(cli, "counts", &[input], "#");
    let _ = writeln!(s, "δ={} r={} μ={}", c.delta, c.r, opt(c.mu));
    let _ = writeln!(s, "delta: {}", c.delta);
    let _ = writeln!(s, "r: {}", c.r);
    let _ = writeln!(s, "mu: {}", opt(c.mu));
    let _ = writeln!(s, "genus: {}", opt(c.genus));
    let _ = writeln!(s, "regions: {}", a.map.regions.len());
    let _ = writeln!(s, "interior_regions: {}", c.interior_regions);
    let _ = writeln!(s, "connected: {}", a.map.connected);
    Ok(s)
}

fn lift(cli: &Cli, input: &Path, sigma: f64) -> Result<String> {
    let d = read_divide(input, cli.resolution)?;
    Analysis::new(d.clone())?;
    let l = lift_family(&d, &CoOrientation::standard(&d), sigma)?;
    let mut s = header(cli, "lift", &[input], "#");
    let _ = writeln!(s, "# sigma: {sigma:.12}");
    let _ = writeln!(s, "# sphere_residual: {:.3e}", l.sphere_residual());
    s.push_str(&l.to_text());
    Ok(s)
}

fn diagram(cli: &Cli, input: &Path, simplify: bool) -> Result<String> {
    let d = read_divide(input, cli.resolution)?;
    Analysis::new(d.clone())?;
    let raw = link_diagram(&divlink::lift::lift_link(&d), cli.seed)?;
    let dg = if simplify { raw.simplify() } else { raw.clone() };
    let mut s = header(cli, "diagram", &[input], "#");
    let _ = writeln!(s, "# simplified: {simplify}");
    let _ = writeln!(s, "components: {}", dg.components.len());
    let _ = writeln!(s, "crossings: {}", dg.crossing_count());
    let _ = writeln!(s, "writhe: {}", dg.writhe());
    let lk: Vec<String> =
        dg.linking_matrix().iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")).collect();
    let _ = writeln!(s, "linking: {}", lk.join("; "));
    let _ = writeln!(s, "pd:");
    for x in dg.pd_code() {
        let _ = writeln!(s, "X[{},{},{},{}]", x[0], x[1], x[2], x[3]);
    }
    let _ = writeln!(s, "gauss:");
    for comp in dg.gauss_code() {
        let line: Vec<String> = comp.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    Ok(s)
}

fn svg(cli: &Cli, input: &Path, as_diagram: bool) -> Result<String> {
    let a = analyse(input, cli.resolution)?;
    let body = if as_diagram {
        diagram_svg(&link_diagram(&divlink::lift::lift_link(&a.divide), cli.seed)?)?
    } else {
        divide_svg(&a)
    };
    let head = header(cli, if as_diagram { "svg --diagram" } else { "svg" }, &[input], "");
    let comment: Vec<&str> = head.lines().map(str::trim).collect();
    let (decl, rest) = body.split_once('\n').unwrap_or((&body, ""));
    Ok(format!("{decl}\n<!-- {} -->\n{rest}", comment.join("; ")))
}

fn monodromy(cli: &Cli, input: &Path) -> Result<String> {
    let a = analyse(input, cli.resolution)?;
    let m = divide_monodromy(&a)?;
    let mut s = header(cli, "monodromy", &[input], "#");
    let _ = writeln!(s, "mu: {}", m.cycles.len());
    let (max, saddle, min) = m.group_sizes();
    let _ = writeln!(s, "groups: max {max} saddle {saddle} min {min}");
    let _ = writeln!(s, "cycles:");
    for (k, c) in m.cycles.iter().enumerate() {
        let anchor = match c.kind {
            divlink::monodromy::CycleKind::Saddle => format!("saddle crossing {}", c.anchor),
            divlink::monodromy::CycleKind::Max => format!("max region {}", c.anchor),
            divlink::monodromy::CycleKind::Min => format!("min region {}", c.anchor),
        };
        let _ = writeln!(s, "  {k}: {anchor}");
    }
    let _ = write!(s, "intersection_form:\n{}", m.intersection);
    let _ = writeln!(s, "geometric_intersections: {}", m.geometric_intersections);
    let _ = write!(s, "monodromy_matrix:\n{}", m.matrix);
    let _ = writeln!(s, "trace: {}", m.matrix.trace());
    let _ = writeln!(s, "char_poly: {}", m.char_poly);
    let _ = writeln!(s, "alexander: {}", m.char_poly.normalized());
    for (name, ok) in &m.checks {
        let _ = writeln!(s, "check {name}: {}", pass(*ok));
    }
    Ok(s)
}

fn invariants(cli: &Cli, input: &Path) -> Result<String> {
    let d = read_divide(input, cli.resolution)?;
    let r = full_report(&d, cli.seed);
    let opt = |v: Option<i64>| v.map_or("n/a".to_string(), |x| x.to_string());
    let mut s = header(cli, "invariants", &[input], "#");
    let _ = writeln!(
        s,
        "δ={} r={} μ={} genus={} gordian={} Δ={}",
        r.delta.map_or("n/a".into(), |x| x.to_string()),
        r.r.map_or("n/a".into(), |x| x.to_string()),
        opt(r.mu),
        opt(r.genus_4ball),
        opt(r.gordian),
        r.alexander_monodromy.as_ref().map_or("n/a".into(), |p| p.to_string())
    );
    s.push_str(&r.to_text());
    Ok(s)
}

fn untangle(cli: &Cli, input: &Path) -> Result<String> {
    let a = analyse(input, cli.resolution)?;
    let (g, sched) = gordian_number(&a)?;
    let mut s = header(cli, "untangle", &[input], "#");
    let _ = writeln!(s, "gordian_upper_bound: {g}");
    let _ = writeln!(s, "events: {}", sched.events.len());
    for e in &sched.events {
        let _ = writeln!(
            s,
            "cutover crossing {}: sigma {:.12} alpha {:.12} strands {}{} {}{}",
            e.crossing,
            e.sigma,
            e.alpha,
            a.divide.branches[e.strands[0].0].id,
            sheet(e.strands[0].1),
            a.divide.branches[e.strands[1].0].id,
            sheet(e.strands[1].1)
        );
    }
    let c = &sched.certificate;
    let _ = writeln!(
        s,
        "certificate: sigma0 {:.12} min_separation {:.6e} grid {} {}",
        c.sigma0,
        c.min_separation,
        c.grid,
        pass(c.pass)
    );
    Ok(s)
}

fn sheet(s: divlink::lift::Sheet) -> &'static str {
    match s {
        divlink::lift::Sheet::Plus => "+",
        divlink::lift::Sheet::Minus => "-",
    }
}

fn transversal(cli: &Cli, input: &Path) -> Result<String> {
    let d = read_divide(input, cli.resolution)?;
    Analysis::new(d.clone())?;
    let r = transversality_check(&d)?;
    let mut s = header(cli, "transversal", &[input], "#");
    for b in &r.branches {
        let _ = writeln!(s, "branch {}: samples {} min_vi {:.9}", d.branches[b.branch].id, b.plus.len(), b.min_vi);
    }
    let _ = writeln!(s, "min_vi: {:.9}", r.min_vi);
    let _ = writeln!(s, "max_v0: {:.3e}", r.max_v0);
    let _ = writeln!(s, "max_residual: {:.3e}", r.max_residual);
    let warn: Vec<String> = r.collar_warnings.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(s, "collar_warnings: {}", if warn.is_empty() { "none".into() } else { warn.join(" ") });
    let _ = writeln!(s, "status: {}", pass(r.pass));
    Ok(s)
}

fn evidence_line(e: &EtaEvidence) -> String {
    format!(
        "eta {:.4}: min_theta {:.6e} min_arg_gradient {:.6e} (half-run {:.6e} {:.6e}) threshold {} stable {}",
        e.eta,
        e.min_theta,
        e.min_arg_gradient,
        e.min_theta_half,
        e.min_arg_gradient_half,
        pass(e.pass),
        pass(e.stable)
    )
}

fn fibration(cli: &Cli, input: &Path, xyz: Option<&Path>) -> Result<String> {
    let a = analyse(input, cli.resolution)?;
    let (field, census) = build_morse_function(&a)?;
    let r = regularity_evidence(&field, cli.eta, cli.samples)?;
    let mut s = header(cli, "fibration", &[input], "#");
    let _ = writeln!(s, "# eta: {}", cli.eta);
    let _ = writeln!(s, "# samples: {}", cli.samples);
    let _ = writeln!(
        s,
        "critical_points: max {} min {} saddle {}",
        field.count(CriticalKind::Max),
        field.count(CriticalKind::Min),
        field.count(CriticalKind::Saddle)
    );
    let _ = writeln!(s, "census_step: {}", census.step);
    let _ = writeln!(s, "census_found: {}", census.found.len());
    let _ = writeln!(s, "census_hausdorff: {:.3e}", census.hausdorff);
    for (name, ok) in &census.checks {
        let _ = writeln!(s, "check {name}: {}", pass(*ok));
    }
    let _ = writeln!(s, "sphere_samples: {} accepted {}", 2 * r.samples, r.accepted);
    let _ = writeln!(s, "evidence: {}", evidence_line(&r.main));
    for e in &r.sweep {
        let _ = writeln!(s, "sweep: {}", evidence_line(e));
    }
    let _ = writeln!(s, "stable_from_eta: {}", r.stable_from.map_or("none".into(), |e| e.to_string()));
    let _ = writeln!(s, "max_theta_on_link: {:.3e}", r.max_theta_on_link);
    let _ = writeln!(
        s,
        "fiber_over_one: base_points {} two_to_one {} antipodal_error {:.3e} {}",
        r.fiber.base_points,
        r.fiber.two_to_one,
        r.fiber.max_antipodal_error,
        pass(r.fiber.pass)
    );
    let _ = writeln!(s, "status: {}", if r.pass { "PASS" } else { "FAIL (evidence inconclusive at this eta)" });
    if let Some(path) = xyz {
        let (_, cloud) = fiber_over_one(&field, cli.eta, 400);
        let mut out = header(cli, "fibration --xyz", &[input], "#");
        for q in &cloud {
            let p = stereographic_xyz(q);
            let _ = writeln!(out, "{:.9} {:.9} {:.9}", p[0], p[1], p[2]);
        }
        write_file(path, &out)?;
    }
    Ok(s)
}

fn sum(cli: &Cli, first: &Path, second: &Path) -> Result<String> {
    let d1 = read_divide(first, cli.resolution)?;
    let d2 = read_divide(second, cli.resolution)?;
    let d = connected_sum(&d1, &d2)?;
    let text = d.to_text();
    let (decl, rest) = text.split_once('\n').unwrap_or((&text, ""));
    Ok(format!("{decl}\n{}{rest}", header(cli, "sum", &[first, second], "#")))
}
