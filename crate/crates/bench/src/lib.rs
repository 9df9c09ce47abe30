//! Shared inputs for the benchmarks.

use mackey::crystal::{CrystalGroup, TorusPoint};
use mackey::spectrum::Polygon;

pub fn z1() -> TorusPoint {
    TorusPoint::from_fractions(&[(0, 1), (1, 2)])
}

pub fn z2() -> TorusPoint {
    TorusPoint::from_fractions(&[(1, 2), (1, 2)])
}

/// The triangle with corners (0,0), (0,1/2), (1/2,1/2).
pub fn p4g_triangle() -> Polygon {
    Polygon::from_fractions(&[[(0, 1), (0, 1)], [(0, 1), (1, 2)], [(1, 2), (1, 2)]]).expect("triangle")
}

pub fn p4g() -> CrystalGroup {
    CrystalGroup::p4g()
}
