use divlink::alexander::alexander_from_diagram;
use divlink::divide::parse_divide;
use divlink::lift::lift_link;
use divlink::poly::IntPoly;
use divlink::projection::{link_diagram, DEFAULT_SEED};

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}.divide", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn oracle(name: &str) -> (IntPoly, usize, Vec<Vec<i64>>) {
    let d = parse_divide(&fixture(name)).unwrap();
    let dg = link_diagram(&lift_link(&d), DEFAULT_SEED).unwrap();
    let s = dg.simplify();
    (alexander_from_diagram(&dg).polynomial, s.crossing_count(), dg.linking_matrix())
}

#[test]
fn loop_is_trefoil() {
    let (p, n, _) = oracle("loop");
    assert_eq!(p, IntPoly::from_i64s(&[1, -1, 1]));
    assert!(n <= 3, "{n} crossings after simplification");
}

#[test]
fn hart_oracle_degree_four() {
    let (p, _, _) = oracle("hart");
    assert_eq!(p, IntPoly::from_i64s(&[1, 1, -3, 1, 1]));
}

#[test]
fn link_fixtures() {
    let (p, _, lk) = oracle("two-diameters");
    assert_eq!(p, IntPoly::from_i64s(&[1, -1]));
    assert_eq!(lk, vec![vec![0, 1], vec![1, 0]]);
    let (_, _, lk) = oracle("triangle");
    assert_eq!(lk, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    let (p, _, lk) = oracle("disjoint-chords");
    assert!(p.is_zero());
    assert_eq!(lk, vec![vec![0, 0], vec![0, 0]]);
}
