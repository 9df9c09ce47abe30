use std::path::PathBuf;

use mackey::crystal::{CrystalGroup, CrystalJson, TorusPoint};
use mackey::spectrum::{orbit_classes, stratify, DomainJson, Polygon, StratumKind};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn domain(name: &str) -> Polygon {
    let d: DomainJson = serde_json::from_str(&fixture(name)).unwrap();
    Polygon::from_json(&d).unwrap()
}

#[test]
fn p4g_fixture_is_the_builtin_group() {
    let g = CrystalGroup::from_json_str(&fixture("p4g.json")).unwrap();
    assert!(g.is_p4g());
    assert_eq!(g.point_group().order(), 8);
}

#[test]
fn group_json_round_trips() {
    let g = CrystalGroup::p4g();
    let text = serde_json::to_string(&g.to_json()).unwrap();
    let back: CrystalJson = serde_json::from_str(&text).unwrap();
    let h = CrystalGroup::from_json(&back).unwrap();
    assert!(h.is_p4g());
}

#[test]
fn triangle_strata_of_p4g() {
    let g = CrystalGroup::p4g();
    let strata = stratify(&g, &domain("p4g_triangle.json")).unwrap();
    let count = |k: StratumKind| strata.iter().filter(|s| s.kind == k).count();
    assert_eq!((count(StratumKind::Region), count(StratumKind::Segment), count(StratumKind::Vertex)), (1, 3, 3));
    let orders: Vec<usize> = strata.iter().map(|s| s.stabilizer.order()).collect();
    assert_eq!(orders, [1, 2, 2, 2, 8, 4, 8]);
}

#[test]
fn unit_square_covers_the_triangle_classes() {
    let g = CrystalGroup::p4g();
    let square = stratify(&g, &domain("unit_square.json")).unwrap();
    let classes = orbit_classes(&g, &square);
    assert_eq!(classes.len(), 7);
    let total: usize = classes.iter().map(Vec::len).sum();
    assert_eq!(total, square.len());
}

#[test]
fn p1_has_trivial_stabilizers() {
    let g = CrystalGroup::from_json_str(&fixture("p1.json")).unwrap();
    let z = TorusPoint::from_fractions(&[(1, 2), (1, 3)]);
    assert_eq!(g.stabilizer(&z).order(), 1);
    assert!(g.mackey_cocycle(&z).is_trivial());
}
