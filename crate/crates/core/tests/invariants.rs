//! Cross-module invariants over random rational torus points.

use mackey::crystal::{CrystalGroup, TorusPoint};
use mackey::exactnum::Rat;
use mackey::spectrum::fiber;
use proptest::prelude::*;

fn groups() -> Vec<CrystalGroup> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let load = |n: &str| CrystalGroup::from_json_str(&std::fs::read_to_string(dir.join(n)).unwrap()).unwrap();
    vec![CrystalGroup::p4g(), load("p4.json"), load("p1.json")]
}

fn point() -> impl Strategy<Value = TorusPoint> {
    (0i64..12, 0i64..12, prop::sample::select(vec![1i64, 2, 3, 4, 6, 8, 12])).prop_map(|(a, b, d)| {
        TorusPoint::new(vec![Rat::new(a % d, d), Rat::new(b % d, d)])
    })
}

/// `X^{-T} z mod 1` straight from the 2x2 integer matrix.
fn act(g: &CrystalGroup, x: usize, z: &TorusPoint) -> [Rat; 2] {
    let m = g.matrix(x);
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let det = a * d - b * c;
    // (X^{-1})^T = [[d, -c], [-b, a]] / det.
    let inv_t = [[d * det, -c * det], [-b * det, a * det]];
    let z = z.coords();
    let row = |r: [i64; 2]| {
        let v = z[0] * Rat::from_integer(r[0]) + z[1] * Rat::from_integer(r[1]);
        v - Rat::from_integer(v.floor().to_integer())
    };
    [row(inv_t[0]), row(inv_t[1])]
}

fn reduced(z: &TorusPoint) -> [Rat; 2] {
    let f = |v: Rat| v - Rat::from_integer(v.floor().to_integer());
    [f(z.coords()[0]), f(z.coords()[1])]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stabilizer_matches_direct_action(z in point()) {
        for g in groups() {
            let brute: Vec<usize> = (0..g.point_group().order()).filter(|&x| act(&g, x, &z) == reduced(&z)).collect();
            let mut stab = g.stabilizer(&z).elements().to_vec();
            stab.sort_unstable();
            prop_assert_eq!(stab, brute);
        }
    }

    #[test]
    fn fiber_degrees_square_to_stabilizer_order(z in point()) {
        for g in groups() {
            let f = fiber(&g, &z).unwrap();
            let sum: u32 = f.iter().map(|p| p.rep.degree().pow(2)).sum();
            prop_assert_eq!(sum as usize, g.stabilizer(&z).order());
        }
    }

    #[test]
    fn mackey_cocycle_is_a_cocycle(z in point()) {
        for g in groups() {
            prop_assert!(g.mackey_cocycle(&z).check().is_ok());
        }
    }

    #[test]
    fn fiber_shape_is_constant_on_orbits(z in point()) {
        let g = CrystalGroup::p4g();
        let degrees = |p: &TorusPoint| {
            let mut d: Vec<u32> = fiber(&g, p).unwrap().iter().map(|s| s.rep.degree()).collect();
            d.sort_unstable();
            d
        };
        let base = degrees(&z);
        for w in g.orbit(&z) {
            prop_assert_eq!(degrees(&w), base.clone());
            prop_assert_eq!(g.orbit_rep(&w), g.orbit_rep(&z));
        }
    }
}
