//! Exact arithmetic for circle phases and cyclotomic numbers.
//!
//! Every cocycle value, character value and multiplicity computed at a
//! rational torus point lives in one of these types, so equalities in the
//! pipeline are decided exactly rather than up to a tolerance.

mod cyclo;
mod phase;
mod rat;

pub use cyclo::{conductor_cap, set_conductor_cap, Cyclo, CycloRepr, DEFAULT_CONDUCTOR_CAP};
pub use phase::Phase;
pub use rat::{format_rat, frac, parse_rat, Rat};
