//! Projective representation theory of finite groups.
//!
//! A normalized 2-cocycle `ω` with rational phase values is turned into a
//! finite central extension `G ×_ω C_M`; irreducible ω-representations are
//! stored as irreducible characters of that extension whose central
//! character is `(e, j) ↦ ζ_M^j`. Everything here is exact.

mod branching;
mod coboundary;
mod extension;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Phase;
use crate::groups::{GroupRef, Subgroup};

pub use branching::{conjugate_into_ambient, conjugate_omega_rep, subrep_multiplicity, twist_rep, Multiplicity};
pub use coboundary::{coboundary_solve, coboundary_solve_exhaustive};
pub use extension::{central_extension, omega_irreps, CentralExtension, OmegaRep, OmegaRepJson};

/// A phase-valued function on `G × G`, normally a normalized 2-cocycle.
///
/// Construction through [`TwoCocycle::new`] checks normalization and the
/// cocycle identity `ω(s,t)·ω(st,r) = ω(s,tr)·ω(t,r)`; the unchecked
/// constructor exists so corrupted input can be loaded and reported on.
#[derive(Clone)]
pub struct TwoCocycle {
    group: GroupRef,
    values: Vec<Phase>,
}

impl TwoCocycle {
    pub fn new(group: GroupRef, values: Vec<Phase>) -> Result<TwoCocycle> {
        let w = TwoCocycle::new_unchecked(group, values)?;
        w.check()?;
        Ok(w)
    }

    pub fn new_unchecked(group: GroupRef, values: Vec<Phase>) -> Result<TwoCocycle> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::input(format!("cocycle table needs {} entries", n * n)));
        }
        Ok(TwoCocycle { group, values })
    }

    pub fn from_fn(group: GroupRef, f: impl Fn(usize, usize) -> Phase) -> TwoCocycle {
        let n = group.order();
        let values = (0..n * n).map(|i| f(i / n, i % n)).collect();
        TwoCocycle { group, values }
    }

    pub fn trivial(group: GroupRef) -> TwoCocycle {
        TwoCocycle::from_fn(group, |_, _| Phase::ONE)
    }

    /// `δf(s,t) = f(s)·f(t)·f(st)⁻¹`.
    pub fn coboundary(group: GroupRef, f: &[Phase]) -> TwoCocycle {
        assert_eq!(f.len(), group.order());
        let g = group.clone();
        TwoCocycle::from_fn(group, |s, t| f[s] * f[t] * f[g.mul(s, t)].inv())
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn value(&self, s: usize, t: usize) -> Phase {
        self.values[s * self.group.order() + t]
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.group.order()).all(|s| self.value(0, s).is_one() && self.value(s, 0).is_one())
    }

    /// Checks normalization and the cocycle identity on every triple.
    pub fn check(&self) -> Result<()> {
        let g = &self.group;
        if !self.is_normalized() {
            return Err(Error::NotACocycle("not normalized".into()));
        }
        for s in 0..g.order() {
            for t in 0..g.order() {
                let st = g.mul(s, t);
                for r in 0..g.order() {
                    let lhs = self.value(s, t) * self.value(st, r);
                    let rhs = self.value(s, g.mul(t, r)) * self.value(t, r);
                    if lhs != rhs {
                        return Err(Error::NotACocycle(format!(
                            "identity fails at ({}, {}, {})",
                            g.name(s),
                            g.name(t),
                            g.name(r)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Phase::is_one)
    }

    /// Pointwise inverse `ω̄`.
    pub fn conj(&self) -> TwoCocycle {
        TwoCocycle {
            group: self.group.clone(),
            values: self.values.iter().map(Phase::inv).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &TwoCocycle) -> TwoCocycle {
        assert!(*self.group == *other.group, "cocycles on different groups");
        TwoCocycle {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| *a * *b).collect(),
        }
    }

    /// Pointwise quotient `ω / other`.
    pub fn div(&self, other: &TwoCocycle) -> TwoCocycle {
        self.mul(&other.conj())
    }

    /// Restriction to `sub` (which must be a subgroup of this cocycle's group).
    pub fn restrict(&self, sub: &Subgroup) -> TwoCocycle {
        assert!(**sub.parent() == *self.group, "restriction to a foreign subgroup");
        let g = sub.group().clone();
        TwoCocycle::from_fn(g, |a, b| self.value(sub.embed(a), sub.embed(b)))
    }

    /// Least common multiple of the value denominators.
    pub fn modulus(&self) -> u64 {
        self.values.iter().fold(1u64, |m, p| m.lcm(&p.order()))
    }

    /// Sparse table of the non-trivial values as `(word, word, phase)`.
    pub fn to_sparse(&self) -> Vec<[String; 3]> {
        let g = &self.group;
        let n = g.order();
        let mut out = Vec::new();
        for s in 0..n {
            for t in 0..n {
                let v = self.value(s, t);
                if !v.is_one() {
                    out.push([g.name(s).to_string(), g.name(t).to_string(), v.to_string()]);
                }
            }
        }
        out
    }

    /// Inverse of [`TwoCocycle::to_sparse`]; omitted pairs are `1`. Not checked.
    pub fn from_sparse(group: GroupRef, entries: &[[String; 3]]) -> Result<TwoCocycle> {
        let n = group.order();
        let mut values = vec![Phase::ONE; n * n];
        for [a, b, v] in entries {
            let s = group.element_from_word(a)?;
            let t = group.element_from_word(b)?;
            values[s * n + t] = Phase::parse(v)?;
        }
        TwoCocycle::new_unchecked(group, values)
    }
}

impl PartialEq for TwoCocycle {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.values == other.values
    }
}

impl fmt::Debug for TwoCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self
            .to_sparse()
            .into_iter()
            .map(|[a, b, v]| format!("({a},{b})={v}"))
            .collect();
        write!(f, "TwoCocycle{{{}}}", entries.join(", "))
    }
}

/// Sparse cocycle file format: `{"subgroup": [...], "values": [[s, t, phase], ...]}`.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct CocycleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<String>>,
    pub values: Vec<[String; 3]>,
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::groups::fixtures::{cyclic, d4};

    #[test]
    fn p4g_sign_cocycles_satisfy_the_identity() {
        omega_z1().check().unwrap();
        omega_z2().check().unwrap();
        z2_cocycle(Phase::from_fraction(1, 3)).check().unwrap();
        TwoCocycle::trivial(d4()).check().unwrap();
    }

    #[test]
    fn corrupted_cocycle_is_rejected() {
        let mut w = omega_z2();
        let g = w.group().clone();
        let n = g.order();
        let (r, s) = (word(&g, "R"), word(&g, "S"));
        w.values[r * n + s] = Phase::ONE;
        let err = w.check().unwrap_err();
        assert!(err.to_string().starts_with("not a 2-cocycle"));
        let mut unnormalized = TwoCocycle::trivial(cyclic(2));
        unnormalized.values[1] = Phase::minus_one();
        assert!(unnormalized.check().is_err());
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let g = d4();
        let f: Vec<Phase> = (0..8)
            .map(|i| if i == 0 { Phase::ONE } else { Phase::from_fraction(i as i64, 7) })
            .collect();
        let d = TwoCocycle::coboundary(g, &f);
        d.check().unwrap();
        assert!(d.mul(&omega_z2()).check().is_ok());
    }

    #[test]
    fn sparse_round_trip() {
        let w = omega_z2();
        let sparse = w.to_sparse();
        assert_eq!(sparse.len(), 16);
        let back = TwoCocycle::from_sparse(w.group().clone(), &sparse).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn restriction_of_z2_obstruction() {
        let g = d4();
        let k3 = Subgroup::generated(g.clone(), &[word(&g, "S")]);
        let w = omega_z2().restrict(&k3);
        assert_eq!(w.value(1, 1), Phase::minus_one());
        assert_eq!(w.modulus(), 2);
    }
}
