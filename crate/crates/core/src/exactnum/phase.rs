use std::fmt;
use std::ops::{Mul, MulAssign};

use nalgebra::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{format_rat, frac, parse_rat, Rat};
use crate::error::Result;

/// A rational point `e^{2πiq}` of the unit circle, stored as `q ∈ [0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Rat);

impl Phase {
    pub const ONE: Phase = Phase(Rat::new_raw(0, 1));

    pub fn new(q: Rat) -> Self {
        Phase(frac(&q))
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        Phase::new(Rat::new(num, den))
    }

    /// `-1`.
    pub fn minus_one() -> Self {
        Phase::from_fraction(1, 2)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Phase::new(parse_rat(s)?))
    }

    /// The exponent `q` with `0 ≤ q < 1`.
    pub fn q(&self) -> Rat {
        self.0
    }

    /// Order of the phase as a root of unity.
    pub fn order(&self) -> u64 {
        *self.0.denom() as u64
    }

    pub fn is_one(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn inv(&self) -> Self {
        Phase::new(-self.0)
    }

    pub fn pow(&self, k: i64) -> Self {
        Phase::new(self.0 * Rat::from_integer(k))
    }

    pub fn to_complex(&self) -> Complex<f64> {
        let theta = std::f64::consts::TAU * (*self.0.numer() as f64) / (*self.0.denom() as f64);
        Complex::new(theta.cos(), theta.sin())
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ONE
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase::new(self.0 + rhs.0)
    }
}

impl MulAssign for Phase {
    fn mul_assign(&mut self, rhs: Phase) {
        *self = *self * rhs;
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rat(&self.0))
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({})", format_rat(&self.0))
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Phase::parse(&s).map_err(serde::de::Error::custom)
    }
}
