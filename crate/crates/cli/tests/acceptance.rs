//! Acceptance run: one PASS/FAIL line per criterion; exits non-zero if any fails.

use divlink::analysis::Analysis;
use divlink::divide::{parse_divide, Divide};
use divlink::fibration::{build_morse_function, regularity_evidence, LINK_THETA_TOL, MIN_ARG_GRADIENT, MIN_THETA};
use divlink::invariants::{alexander_from_monodromy, alexander_oracle, divide_monodromy, full_report, gordian_number};
use divlink::lift::{singular_sigmas, CoOrientation};
use divlink::poly::IntPoly;
use divlink::projection::DEFAULT_SEED;
use divlink::random::{random_divide, try_random_divide, RandomConfig};
use divlink::sum::connected_sum;
use divlink::transversal::transversality_check;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

const COUNTS_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const FIBRATION_BUDGET: Duration = Duration::from_secs(300);
const RANDOM_DIVIDES: usize = 25;
const MU2_DIVIDES: usize = 25;
const MU2_MAX_DRAWS: usize = 20_000;
const SIGMA_TOL: f64 = 1e-9;
const VI_STABILITY: f64 = 1e-3;
const V0_TOL: f64 = 1e-6;
const FIBRATION_ETA: f64 = 0.05;
const FIBRATION_SAMPLES: usize = 100_000;
const FIXTURES: [&str; 6] = ["chord", "disjoint-chords", "hart", "loop", "triangle", "two-diameters"];
const CONNECTED: [&str; 5] = ["chord", "hart", "loop", "triangle", "two-diameters"];

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.divide"))
}

fn fixture(name: &str) -> Divide {
    parse_divide(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

fn random_suite() -> Vec<Analysis> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    (0..RANDOM_DIVIDES).map(|_| random_divide(&mut rng, &RandomConfig::default())).collect()
}

/// Fixtures and randomized divides that admit a monodromy.
fn connected_suite() -> Vec<(String, Analysis)> {
    let mut v: Vec<(String, Analysis)> =
        CONNECTED.iter().map(|n| (n.to_string(), Analysis::new(fixture(n)).unwrap())).collect();
    v.extend(random_suite().into_iter().enumerate().map(|(k, a)| (format!("random#{k}"), a)));
    v
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_count_formulas() -> Outcome {
    let t = Instant::now();
    let want = [("chord", (0, 0)), ("loop", (2, 1)), ("two-diameters", (1, 0)), ("hart", (4, 2))];
    let mut got = Vec::new();
    for (name, expect) in want {
        let c = Analysis::new(fixture(name)).map_err(|e| e.to_string())?.counts();
        let pair = (c.mu.unwrap_or(-1), c.genus.unwrap_or(-1));
        ensure(pair == expect, format!("{name}: (mu, genus) = {pair:?}, expected {expect:?}"))?;
        got.push(format!("{name} {pair:?}"));
    }
    let el = t.elapsed();
    ensure(el < COUNTS_BUDGET, format!("took {el:?}"))?;
    Ok(format!("{} in {:.3} s", got.join(", "), el.as_secs_f64()))
}

fn c2_oracle_agreement() -> Outcome {
    let t = Instant::now();
    let mut cases: Vec<(String, Divide)> =
        ["chord", "loop", "two-diameters", "hart"].iter().map(|n| (n.to_string(), fixture(n))).collect();
    cases.push(("loop#loop".into(), connected_sum(&fixture("loop"), &fixture("loop")).map_err(|e| e.to_string())?));
    cases.extend(random_suite().into_iter().enumerate().map(|(k, a)| (format!("random#{k}"), a.divide)));
    let mut max_delta = 0;
    for (name, d) in &cases {
        let m = alexander_from_monodromy(d).map_err(|e| format!("{name}: {e}"))?;
        let o = alexander_oracle(d, DEFAULT_SEED).map_err(|e| format!("{name}: {e}"))?;
        ensure(m == o, format!("{name}: monodromy {m} vs diagram {o}"))?;
        if name.starts_with("random") {
            max_delta = max_delta.max(Analysis::new(d.clone()).unwrap().counts().delta);
        }
    }
    let el = t.elapsed();
    ensure(max_delta <= 3, format!("random divide with delta {max_delta}"))?;
    ensure(el < ORACLE_BUDGET, format!("took {el:?}"))?;
    Ok(format!("{} divides agree (random max delta {max_delta}) in {:.1} s", cases.len(), el.as_secs_f64()))
}

fn c3_trefoil() -> Outcome {
    let a = Analysis::new(fixture("loop")).map_err(|e| e.to_string())?;
    let m = divide_monodromy(&a).map_err(|e| e.to_string())?;
    let tr = m.matrix.trace();
    ensure(m.char_poly == IntPoly::from_i64s(&[1, -1, 1]), format!("char poly {}", m.char_poly))?;
    ensure(tr == 1, format!("trace {tr}"))?;
    Ok(format!("char poly {}, trace {tr}", m.char_poly))
}

fn c4_hart() -> Outcome {
    let d = fixture("hart");
    let m = alexander_from_monodromy(&d).map_err(|e| e.to_string())?;
    let o = alexander_oracle(&d, DEFAULT_SEED).map_err(|e| e.to_string())?;
    ensure(m == o, format!("monodromy {m} vs diagram {o}"))?;
    ensure(m.degree() == Some(4), format!("degree {:?}", m.degree()))?;
    let a = Analysis::new(d).map_err(|e| e.to_string())?;
    let (g, sched) = gordian_number(&a).map_err(|e| e.to_string())?;
    ensure(g == 2 && sched.events.len() == 2, format!("gordian {g}, {} events", sched.events.len()))?;
    ensure(sched.certificate.pass, "embedding certificate failed")?;
    Ok(format!("Δ = {m}, gordian {g} with {} cutovers", sched.events.len()))
}

fn c5_torres() -> Outcome {
    let suite = connected_suite();
    for (name, a) in &suite {
        let m = divide_monodromy(a).map_err(|e| format!("{name}: {e}"))?;
        let mu = m.cycles.len();
        ensure(m.char_poly.torres_symmetric(mu), format!("{name}: {} with mu {mu}", m.char_poly))?;
    }
    Ok(format!("{} divides", suite.len()))
}

fn c6_twist_bounds() -> Outcome {
    let suite = connected_suite();
    let mut worst = (0i64, 1usize);
    for (name, a) in &suite {
        let m = divide_monodromy(a).map_err(|e| format!("{name}: {e}"))?;
        let c = a.counts();
        ensure(Some(m.cycles.len() as i64) == c.mu, format!("{name}: {} twists, mu {:?}", m.cycles.len(), c.mu))?;
        let geo = m.geometric_intersections;
        let ok = if c.delta == 0 { geo == 0 } else { geo < 5 * c.delta as i64 };
        ensure(ok, format!("{name}: {geo} intersections, delta {}", c.delta))?;
        if c.delta > 0 && geo as f64 / c.delta as f64 > worst.0 as f64 / worst.1 as f64 {
            worst = (geo, c.delta);
        }
    }
    Ok(format!("{} divides, worst {} intersections for delta {}", suite.len(), worst.0, worst.1))
}

fn c7_unknotting_family() -> Outcome {
    let mut all: Vec<(String, Analysis)> =
        FIXTURES.iter().map(|n| (n.to_string(), Analysis::new(fixture(n)).unwrap())).collect();
    all.extend(random_suite().into_iter().enumerate().map(|(k, a)| (format!("random#{k}"), a)));
    for (name, a) in &all {
        let ev = singular_sigmas(&a.divide, &CoOrientation::standard(&a.divide), &a.crossings)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(ev.len() == a.counts().delta, format!("{name}: {} events, delta {}", ev.len(), a.counts().delta))?;
    }
    let a = Analysis::new(fixture("two-diameters")).unwrap();
    let ev = singular_sigmas(&a.divide, &CoOrientation::standard(&a.divide), &a.crossings).map_err(|e| e.to_string())?;
    let err = (ev[0].sigma - FRAC_PI_4).abs();
    ensure(err <= SIGMA_TOL, format!("two-diameters sigma {} off by {err:e}", ev[0].sigma))?;
    Ok(format!("{} divides; two-diameters sigma - pi/4 = {err:.1e}", all.len()))
}

fn c8_linking() -> Outcome {
    let r = full_report(&fixture("two-diameters"), DEFAULT_SEED);
    let lk = r.linking.clone().ok_or("two-diameters: no linking matrix")?;
    let bi = r.branch_intersections.clone().ok_or("two-diameters: no intersections")?;
    ensure(lk[0][1] == 1 && bi[0][1] == 1, format!("two-diameters linking {lk:?}, intersections {bi:?}"))?;
    let r = full_report(&fixture("triangle"), DEFAULT_SEED);
    let lk = r.linking.clone().ok_or("triangle: no linking matrix")?;
    let bi = r.branch_intersections.clone().ok_or("triangle: no intersections")?;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                ensure(lk[i][j] == 1 && bi[i][j] == 1, format!("triangle linking {lk:?}, intersections {bi:?}"))?;
            }
        }
    }
    Ok("two-diameters lk 1 = 1 crossing; triangle all pairs 1".into())
}

fn c9_transversality() -> Outcome {
    let mut worst = (f64::INFINITY, 0.0f64, 0.0f64);
    for name in FIXTURES {
        let r64 = transversality_check(&fixture(name).with_resolution(64)).map_err(|e| format!("{name}: {e}"))?;
        let r128 = transversality_check(&fixture(name).with_resolution(128)).map_err(|e| format!("{name}: {e}"))?;
        let drift = (r64.min_vi - r128.min_vi).abs();
        ensure(r64.min_vi > 0.0, format!("{name}: min v_i {}", r64.min_vi))?;
        ensure(drift < VI_STABILITY, format!("{name}: min v_i moved by {drift:e} under doubling"))?;
        ensure(r64.max_v0 < V0_TOL && r128.max_v0 < V0_TOL, format!("{name}: v_0 residual {:e}", r64.max_v0.max(r128.max_v0)))?;
        worst = (worst.0.min(r64.min_vi), worst.1.max(drift), worst.2.max(r64.max_v0).max(r128.max_v0));
    }
    Ok(format!("min v_i {:.6}, max drift {:.1e}, max v_0 {:.1e}", worst.0, worst.1, worst.2))
}

fn c10_fibration() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    for name in ["chord", "loop"] {
        let a = Analysis::new(fixture(name)).map_err(|e| e.to_string())?;
        let (field, _) = build_morse_function(&a).map_err(|e| format!("{name}: {e}"))?;
        let r = regularity_evidence(&field, FIBRATION_ETA, FIBRATION_SAMPLES).map_err(|e| format!("{name}: {e}"))?;
        let e = &r.main;
        ensure(e.min_theta > MIN_THETA, format!("{name}: min |theta| {:e}", e.min_theta))?;
        ensure(e.min_arg_gradient > MIN_ARG_GRADIENT, format!("{name}: min |grad arg theta| {:e}", e.min_arg_gradient))?;
        ensure(e.stable, format!("{name}: minima not stable under sample doubling"))?;
        ensure(r.max_theta_on_link < LINK_THETA_TOL, format!("{name}: |theta| on link {:e}", r.max_theta_on_link))?;
        parts.push(format!("{name} |θ| ≥ {:.1e} |∇arg θ| ≥ {:.1e}", e.min_theta, e.min_arg_gradient));
    }
    let el = t.elapsed();
    ensure(el < FIBRATION_BUDGET, format!("took {el:?}"))?;
    Ok(format!("{} ({} samples each) in {:.1} s", parts.join(", "), 2 * FIBRATION_SAMPLES, el.as_secs_f64()))
}

fn c11_connected_sum() -> Outcome {
    let g = connected_sum(&fixture("loop"), &fixture("loop")).map_err(|e| e.to_string())?;
    let p = alexander_from_monodromy(&g).map_err(|e| e.to_string())?;
    let want = IntPoly::from_i64s(&[1, -1, 1]).pow(2);
    ensure(p == want, format!("{p}"))?;
    Ok(format!("Δ = {p}"))
}

fn c12_figure_eight() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0x8);
    let (mut found, mut draws) = (Vec::new(), 0);
    while found.len() < MU2_DIVIDES && draws < MU2_MAX_DRAWS {
        draws += 1;
        if let Some(a) = try_random_divide(&mut rng, &RandomConfig::default()) {
            if a.counts().mu == Some(2) {
                found.push(a);
            }
        }
    }
    ensure(found.len() == MU2_DIVIDES, format!("only {} mu = 2 divides in {draws} draws", found.len()))?;
    let mut traces = std::collections::BTreeSet::new();
    for a in &found {
        let m = divide_monodromy(a).map_err(|e| e.to_string())?;
        let tr = m.matrix.trace();
        ensure(tr.abs() != 3, format!("trace {tr}"))?;
        traces.insert(tr);
    }
    Ok(format!("{} mu = 2 divides, traces {traces:?}", found.len()))
}

fn c13_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("divlink-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let (hart, lp) = (fixture_path("hart"), fixture_path("loop"));
    let (hart, lp) = (hart.to_str().unwrap(), lp.to_str().unwrap());
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("validate", vec!["validate", hart]),
        ("counts", vec!["counts", hart]),
        ("lift", vec!["lift", hart]),
        ("diagram", vec!["diagram", hart]),
        ("svg", vec!["svg", hart]),
        ("svg-diagram", vec!["svg", "--diagram", hart]),
        ("monodromy", vec!["monodromy", hart]),
        ("invariants", vec!["invariants", hart]),
        ("untangle", vec!["untangle", hart]),
        ("transversal", vec!["transversal", hart]),
        ("sum", vec!["sum", lp, hart]),
        ("fibration", vec!["--samples", "5000", "fibration", lp]),
    ];
    let mut compared = 0;
    for (name, args) in &runs {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let out = dir.join(format!("{name}-{k}.out"));
            let xyz = dir.join(format!("{name}-{k}.xyz"));
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_divlink"));
            cmd.args(["--seed", "0xD1V1DE", "--resolution", "64"]).args(args).arg("-o").arg(&out);
            if *name == "fibration" {
                cmd.arg("--xyz").arg(&xyz);
            }
            let st = cmd.output().map_err(|e| e.to_string())?;
            ensure(st.status.success(), format!("{name}: {}", String::from_utf8_lossy(&st.stderr)))?;
            let mut bytes = std::fs::read(&out).map_err(|e| e.to_string())?;
            if *name == "fibration" {
                bytes.extend(std::fs::read(&xyz).map_err(|e| e.to_string())?);
            }
            outputs.push(bytes);
        }
        ensure(outputs[0] == outputs[1], format!("{name}: outputs differ"))?;
        compared += 1;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{compared} commands byte-identical across two runs"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("count formulas", c1_count_formulas),
        ("monodromy-oracle agreement", c2_oracle_agreement),
        ("trefoil", c3_trefoil),
        ("hart", c4_hart),
        ("Torres symmetry", c5_torres),
        ("twist-system bounds", c6_twist_bounds),
        ("unknotting family", c7_unknotting_family),
        ("linking", c8_linking),
        ("transversality", c9_transversality),
        ("fibration evidence", c10_fibration),
        ("connected sum", c11_connected_sum),
        ("figure-eight exclusion", c12_figure_eight),
        ("determinism", c13_determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
