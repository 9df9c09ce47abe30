//! Points `(z, σ)` of the dual, the point-group action on them, and the
//! convergence rule for sequences approaching a boundary point.
//!
//! A sequence `(z_n, σ_n)` with eventually constant stabilizer `L` and
//! limit representation `τ` converges to `(x, σ)` iff `L ⊆ K_x`, the classes
//! `[ω_x|L]` and `[ω_τ]` agree, and `τ ≤ σ|L` in the twisted sense.

mod strata;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::crystal::{CrystalGroup, TorusPoint};
use crate::error::{Error, Result};
use crate::exactnum::{frac, Cyclo, Phase, Rat};
use crate::groups::{conjugate_subgroup, Subgroup};
use crate::twisted::{coboundary_solve, omega_irreps, subrep_multiplicity, OmegaRep, OmegaRepJson};

pub use strata::{
    orbit_classes, stratify, DomainJson, Polygon, Pt, Segment, SegmentFamily, Stratum, StratumJson, StratumKind,
};

/// `e^{2πi(c + Σ a_j·x_j)}` for display.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicPhase {
    pub constant: Rat,
    pub coeffs: Vec<(Rat, String)>,
}

impl SymbolicPhase {
    pub fn constant(q: Rat) -> SymbolicPhase {
        SymbolicPhase { constant: q, coeffs: Vec::new() }
    }

    /// `⟨start + t·dir, d⟩` in the variable `t`.
    pub fn along(start: &Pt, dir: &Pt, d: &[i64]) -> SymbolicPhase {
        let dot = |p: &Pt| p[0] * Rat::from_integer(d[0]) + p[1] * Rat::from_integer(d[1]);
        SymbolicPhase {
            constant: dot(start),
            coeffs: vec![(dot(dir), "t".to_string())],
        }
    }

    /// `⟨z, d⟩` in the coordinates `z1, z2, …`.
    pub fn linear(d: &[i64]) -> SymbolicPhase {
        SymbolicPhase {
            constant: Rat::zero(),
            coeffs: d
                .iter()
                .enumerate()
                .map(|(j, &k)| (Rat::from_integer(k), format!("z{}", j + 1)))
                .collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant.is_integer() && self.coeffs.iter().all(|(c, _)| c.is_zero())
    }
}

impl fmt::Display for SymbolicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut terms: Vec<String> = Vec::new();
        let c = frac(&self.constant);
        if !c.is_zero() {
            terms.push(c.to_string());
        }
        for (a, x) in &self.coeffs {
            if a.is_zero() {
                continue;
            }
            let t = if *a == Rat::from_integer(1) {
                x.clone()
            } else if *a == Rat::from_integer(-1) {
                format!("-{x}")
            } else {
                format!("{a}·{x}")
            };
            terms.push(t);
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {t}")),
            }
        }
        write!(f, "e^{{2πi({out})}}")
    }
}

/// `(z, σ)` with `σ` an irreducible `ω_z`-rep of the stabilizer of `z`.
#[derive(Clone, Debug)]
pub struct SpectrumPoint {
    pub z: TorusPoint,
    pub stabilizer: Subgroup,
    pub rep: OmegaRep,
    pub label: String,
}

impl SpectrumPoint {
    /// Values at the parent elements named by the stabilizer's generators.
    pub fn generator_values(&self) -> Vec<(String, Cyclo)> {
        self.rep.generator_values()
    }

    pub fn to_json(&self) -> SpectrumPointJson {
        SpectrumPointJson {
            label: self.label.clone(),
            z: self.z.to_strings(),
            rep: self.rep.to_json(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SpectrumPointJson {
    pub label: String,
    pub z: Vec<String>,
    pub rep: OmegaRepJson,
}

/// All `(z, σ)` over `z`, sorted as [`omega_irreps`] sorts them.
pub fn fiber(group: &CrystalGroup, z: &TorusPoint) -> Result<Vec<SpectrumPoint>> {
    let stab = group.stabilizer(z);
    let reps = omega_irreps(&group.mackey_cocycle(z))?;
    let aliases = if group.is_p4g() { p4g_aliases(z, &stab, &reps) } else { None };
    Ok(reps
        .into_iter()
        .enumerate()
        .map(|(i, rep)| SpectrumPoint {
            z: z.clone(),
            stabilizer: stab.clone(),
            label: aliases.as_ref().map_or_else(|| format!("rho{i}"), |a| a[i].clone()),
            rep,
        })
        .collect())
}

/// Classical names over the three vertices of the p4g triangle.
fn p4g_aliases(z: &TorusPoint, stab: &Subgroup, reps: &[OmegaRep]) -> Option<Vec<String>> {
    let k = stab.parent();
    let at = |rep: &OmegaRep, word: &str| -> Option<Cyclo> {
        let x = stab.position(k.element_from_word(word).ok()?)?;
        Some(rep.twisted_value(x).clone())
    };
    let one = Cyclo::one();
    let i = Cyclo::root_of_unity(1, 4).ok()?;
    let sign = |v: &Cyclo, unit: &Cyclo| -> Option<usize> {
        if v == unit {
            Some(0)
        } else if *v == -unit {
            Some(1)
        } else {
            None
        }
    };
    let (prefix, unit, big) = if *z == TorusPoint::from_fractions(&[(0, 1), (0, 1)]) {
        ("mu", one, "lambda")
    } else if *z == TorusPoint::from_fractions(&[(1, 2), (1, 2)]) {
        ("zeta", i, "tau")
    } else if *z == TorusPoint::from_fractions(&[(0, 1), (1, 2)]) {
        return (reps.len() == 1).then(|| vec!["sigma".to_string()]);
    } else {
        return None;
    };
    reps.iter()
        .map(|rep| {
            if rep.degree() == 2 {
                return Some(big.to_string());
            }
            let r = sign(&at(rep, "R")?, &unit)?;
            let s = sign(&at(rep, "S")?, &unit)?;
            Some(format!("{prefix}{}", 2 * r + s))
        })
        .collect()
}

/// `g·(z, τ)` for an `ω_z|L`-rep `τ`, landing on `ω_{gz}|gLg⁻¹`.
///
/// The plain conjugate `τ(g⁻¹X′g)` carries the cocycle `ω_z(g⁻¹·g, g⁻¹·g)`;
/// it is moved onto `ω_{gz}` by the phase `χ_z(−p(X′))`, where
/// `p(X′) = c(g)⁻¹c(X′)c(g)c(g⁻¹X′g)⁻¹` is the lattice part of conjugating
/// the section.
pub fn transport(
    group: &CrystalGroup,
    g: usize,
    z: &TorusPoint,
    sub: &Subgroup,
    rep: &OmegaRep,
) -> Result<(TorusPoint, Subgroup, OmegaRep)> {
    if *rep.cocycle() != group.cocycle_on(z, sub) {
        return Err(Error::input("representation is not on the obstruction cocycle of its point"));
    }
    let gz = group.act_on(g, z);
    let (conj, bijection) = conjugate_subgroup(g, sub);
    let mut values = vec![Cyclo::zero(); conj.order()];
    for (b, &b_conj) in bijection.iter().enumerate() {
        let p = group.conjugation_defect(g, conj.embed(b_conj));
        let neg: Vec<i64> = p.iter().map(|x| -x).collect();
        values[b_conj] = Cyclo::from_phase(&z.character(&neg))?.try_mul(rep.twisted_value(b))?;
    }
    let moved = OmegaRep::from_twisted_values(&group.cocycle_on(&gz, &conj), values)?;
    Ok((gz, conj, moved))
}

/// `g·(z, σ)`, labelled as in [`fiber`] over `gz`.
pub fn act(group: &CrystalGroup, g: usize, p: &SpectrumPoint) -> Result<SpectrumPoint> {
    let (gz, stab, rep) = transport(group, g, &p.z, &p.stabilizer, &p.rep)?;
    let label = fiber(group, &gz)?
        .into_iter()
        .find(|q| q.rep == rep)
        .map(|q| q.label)
        .ok_or_else(|| Error::input("transported representation missing from the fiber"))?;
    Ok(SpectrumPoint { z: gz, stabilizer: stab, rep, label })
}

/// Target `x`, eventual stabilizer `L` and limit representation `τ` on `L`.
#[derive(Clone, Debug)]
pub struct ConvergenceQuery {
    pub target: TorusPoint,
    pub approach: Subgroup,
    pub limit_rep: OmegaRep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitFlag {
    /// `L ⊄ K_x`.
    NotSubgroup,
    /// `[ω_τ] ≠ [ω_x|L]`.
    ClassMismatch,
}

impl fmt::Display for LimitFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitFlag::NotSubgroup => "not_subgroup",
            LimitFlag::ClassMismatch => "class_mismatch",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LimitSet {
    pub target: TorusPoint,
    pub points: Vec<SpectrumPoint>,
    pub flags: Vec<LimitFlag>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LimitSetJson {
    pub target: Vec<String>,
    pub points: Vec<String>,
    pub flags: Vec<LimitFlag>,
}

impl LimitSet {
    fn empty(target: &TorusPoint, flag: LimitFlag) -> LimitSet {
        LimitSet {
            target: target.clone(),
            points: Vec::new(),
            flags: vec![flag],
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.points.iter().map(|p| p.label.clone()).collect()
    }

    pub fn to_json(&self) -> LimitSetJson {
        LimitSetJson {
            target: self.target.to_strings(),
            points: self.labels(),
            flags: self.flags.clone(),
        }
    }
}

/// The limit points of any sequence with the data of `q`.
pub fn limit_points(group: &CrystalGroup, q: &ConvergenceQuery) -> Result<LimitSet> {
    if **q.limit_rep.group() != **q.approach.group() || **q.approach.parent() != **group.point_group() {
        return Err(Error::input("limit representation does not live on the approach subgroup"));
    }
    let stab = group.stabilizer(&q.target);
    if !q.approach.is_subset_of(&stab) {
        return Ok(LimitSet::empty(&q.target, LimitFlag::NotSubgroup));
    }
    let l = q.approach.within(&stab)?;
    let restricted = group.mackey_cocycle(&q.target).restrict(&l);
    if coboundary_solve(&restricted, q.limit_rep.cocycle()).is_none() {
        return Ok(LimitSet::empty(&q.target, LimitFlag::ClassMismatch));
    }
    let mut points = Vec::new();
    for p in fiber(group, &q.target)? {
        if subrep_multiplicity(&q.limit_rep, &p.rep, &l)?.is_positive() {
            points.push(p);
        }
    }
    Ok(LimitSet {
        target: q.target.clone(),
        points,
        flags: Vec::new(),
    })
}

/// `{"target": [...], "approach_subgroup": [words], "limit_rep": {"degree": d, word: value, ...}}`.
///
/// `limit_rep` values are cyclotomic numbers (`"1"`, `"-i"`, `"E(8)^3"`) or
/// phases written `"phase:q"` for `e^{2πiq}`. The representation is the
/// unique irreducible `ω_y|L`-rep with these values, where `y` is
/// `cocycle_at` when given and the target otherwise.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QueryJson {
    pub target: Vec<String>,
    pub approach_subgroup: Vec<String>,
    pub limit_rep: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle_at: Option<Vec<String>>,
}

/// Plain rationals are values here, not phases: `"-1"` is `-1`.
fn parse_value(s: &str) -> Result<Cyclo> {
    match s.strip_prefix("phase:") {
        Some(q) => Cyclo::from_phase(&Phase::parse(q)?),
        None => match crate::exactnum::parse_rat(s.trim()) {
            Ok(r) => Ok(Cyclo::from_rat(r)),
            Err(_) => Cyclo::parse(s),
        },
    }
}

/// Resolves and answers a query file. A non-subgroup approach is answered
/// before the limit representation is looked up.
pub fn limit_points_from_json(group: &CrystalGroup, json: &QueryJson) -> Result<LimitSet> {
    let k = group.point_group();
    let target = TorusPoint::parse(&json.target)?;
    if target.dim() != group.dimension() {
        return Err(Error::input("target has the wrong dimension"));
    }
    let gens = json
        .approach_subgroup
        .iter()
        .map(|w| k.element_from_word(w))
        .collect::<Result<Vec<_>>>()?;
    let approach = Subgroup::generated(k.clone(), &gens);
    if !approach.is_subset_of(&group.stabilizer(&target)) {
        return Ok(LimitSet::empty(&target, LimitFlag::NotSubgroup));
    }
    let anchor = match &json.cocycle_at {
        Some(y) => TorusPoint::parse(y)?,
        None => target.clone(),
    };
    if anchor.dim() != group.dimension() || !approach.is_subset_of(&group.stabilizer(&anchor)) {
        return Err(Error::input("cocycle_at is not fixed by the approach subgroup"));
    }

    let mut degree: Option<u32> = None;
    let mut wanted: Vec<(usize, Cyclo)> = Vec::new();
    for (key, value) in &json.limit_rep {
        if key == "degree" {
            degree = Some(
                value
                    .as_u64()
                    .and_then(|d| u32::try_from(d).ok())
                    .ok_or_else(|| Error::input("limit_rep.degree must be a positive integer"))?,
            );
            continue;
        }
        let x = k.element_from_word(key)?;
        let pos = approach
            .position(x)
            .ok_or_else(|| Error::input(format!("limit_rep.{key} is not in the approach subgroup")))?;
        let text = value
            .as_str()
            .ok_or_else(|| Error::input(format!("limit_rep.{key} must be a string")))?;
        wanted.push((pos, parse_value(text)?));
    }
    let w = group.cocycle_on(&anchor, &approach);
    let mut candidates: Vec<OmegaRep> = omega_irreps(&w)?
        .into_iter()
        .filter(|r| degree.is_none_or(|d| r.degree() == d))
        .filter(|r| wanted.iter().all(|(x, v)| r.twisted_value(*x) == v))
        .collect();
    let limit_rep = match candidates.len() {
        1 => candidates.remove(0),
        0 => return Err(Error::input("no irreducible representation matches limit_rep")),
        n => return Err(Error::input(format!("limit_rep matches {n} representations; give more values"))),
    };
    limit_points(group, &ConvergenceQuery { target, approach, limit_rep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::all_subgroups;
    use num_traits::One;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn pt(a: (i64, i64), b: (i64, i64)) -> TorusPoint {
        TorusPoint::from_fractions(&[a, b])
    }

    fn z0() -> TorusPoint {
        pt((0, 1), (0, 1))
    }
    fn z1() -> TorusPoint {
        pt((0, 1), (1, 2))
    }
    fn z2() -> TorusPoint {
        pt((1, 2), (1, 2))
    }

    fn labels(points: &[SpectrumPoint]) -> Vec<String> {
        points.iter().map(|p| p.label.clone()).collect()
    }

    fn degrees(points: &[SpectrumPoint]) -> Vec<u32> {
        points.iter().map(|p| p.rep.degree()).collect()
    }

    fn subgroup(g: &CrystalGroup, words: &[&str]) -> Subgroup {
        let k = g.point_group();
        let gens: Vec<usize> = words.iter().map(|w| k.element_from_word(w).unwrap()).collect();
        Subgroup::generated(k.clone(), &gens)
    }

    /// The `ω_x|L`-rep of `L = <S>` with value `v` at `S`.
    fn rep_on_s(g: &CrystalGroup, x: &TorusPoint, v: Cyclo) -> (Subgroup, OmegaRep) {
        let l = subgroup(g, &["S"]);
        let rep = omega_irreps(&g.cocycle_on(x, &l))
            .unwrap()
            .into_iter()
            .find(|r| *r.twisted_value(1) == v)
            .unwrap();
        (l, rep)
    }

    #[test]
    fn fibers_at_the_vertices() {
        let g = CrystalGroup::p4g();
        let f0 = fiber(&g, &z0()).unwrap();
        assert_eq!(degrees(&f0), [1, 1, 1, 1, 2]);
        assert_eq!(labels(&f0), ["mu0", "mu1", "mu2", "mu3", "lambda"]);
        let f1 = fiber(&g, &z1()).unwrap();
        assert_eq!(degrees(&f1), [2]);
        assert_eq!(labels(&f1), ["sigma"]);
        let f2 = fiber(&g, &z2()).unwrap();
        assert_eq!(degrees(&f2), [1, 1, 1, 1, 2]);
        let i = Cyclo::root_of_unity(1, 4).unwrap();
        for p in &f2[..4] {
            for (_, v) in p.generator_values() {
                assert!(v == i || v == -&i, "{v}");
            }
        }
        let mut l2 = labels(&f2);
        l2.sort();
        assert_eq!(l2, ["tau", "zeta0", "zeta1", "zeta2", "zeta3"]);
        let interior = fiber(&g, &pt((1, 8), (3, 8))).unwrap();
        assert_eq!(labels(&interior), ["rho0"]);
    }

    #[test]
    fn sigma_has_the_diagonal_shape() {
        let g = CrystalGroup::p4g();
        let sigma = &fiber(&g, &z1()).unwrap()[0];
        let x = sigma.stabilizer.position(g.point_group().element_from_word("R^2").unwrap()).unwrap();
        // trace σ(R²) = 0, as for diag(1, -1).
        assert!(sigma.rep.twisted_value(x).is_zero());
    }

    #[test]
    fn limits_at_z2_along_s3() {
        let g = CrystalGroup::p4g();
        let i = Cyclo::root_of_unity(1, 4).unwrap();
        let mut sets = Vec::new();
        for v in [i.clone(), -&i] {
            let (l, rep) = rep_on_s(&g, &z2(), v);
            let set = limit_points(&g, &ConvergenceQuery { target: z2(), approach: l, limit_rep: rep }).unwrap();
            assert!(set.flags.is_empty());
            sets.push(set.labels());
        }
        assert_eq!(sets[0], ["zeta0", "zeta2", "tau"]);
        assert_eq!(sets[1], ["zeta1", "zeta3", "tau"]);
    }

    #[test]
    fn limits_at_z1_along_s3() {
        let g = CrystalGroup::p4g();
        for v in [Cyclo::one(), -&Cyclo::one()] {
            let (l, rep) = rep_on_s(&g, &z1(), v);
            let set = limit_points(&g, &ConvergenceQuery { target: z1(), approach: l, limit_rep: rep }).unwrap();
            assert_eq!(set.labels(), ["sigma"]);
        }
    }

    #[test]
    fn interior_approach_gives_the_whole_fiber() {
        let g = CrystalGroup::p4g();
        for x in [z0(), z1(), z2(), pt((1, 4), (1, 4)), pt((0, 1), (1, 3))] {
            let trivial = Subgroup::trivial(g.point_group().clone());
            let rep = omega_irreps(&g.cocycle_on(&x, &trivial)).unwrap().remove(0);
            let set = limit_points(&g, &ConvergenceQuery { target: x.clone(), approach: trivial, limit_rep: rep }).unwrap();
            assert_eq!(set.labels(), labels(&fiber(&g, &x).unwrap()));
        }
    }

    #[test]
    fn diagnostics() {
        let g = CrystalGroup::p4g();
        // <S> does not fix (1/4, 1/4).
        let (l, rep) = rep_on_s(&g, &z1(), Cyclo::one());
        let q = ConvergenceQuery { target: pt((1, 4), (1, 4)), approach: l, limit_rep: rep };
        assert_eq!(limit_points(&g, &q).unwrap().flags, [LimitFlag::NotSubgroup]);
        // On H = <R², S> the obstruction at z_1 is a non-trivial class, so a
        // genuine representation of H cannot be a limit there.
        let h = subgroup(&g, &["R^2", "S"]);
        let rep = omega_irreps(&g.cocycle_on(&z0(), &h)).unwrap().remove(0);
        let q = ConvergenceQuery { target: z1(), approach: h, limit_rep: rep };
        let set = limit_points(&g, &q).unwrap();
        assert!(set.points.is_empty());
        assert_eq!(set.flags, [LimitFlag::ClassMismatch]);
    }

    #[test]
    fn query_json() {
        let g = CrystalGroup::p4g();
        let q: QueryJson = serde_json::from_str(
            r#"{"target": ["1/2", "1/2"], "approach_subgroup": ["S"], "limit_rep": {"degree": 1, "S": "i"}}"#,
        )
        .unwrap();
        assert_eq!(limit_points_from_json(&g, &q).unwrap().labels(), ["zeta0", "zeta2", "tau"]);
        let q: QueryJson = serde_json::from_str(
            r#"{"target": ["1/2", "1/2"], "approach_subgroup": ["S"], "limit_rep": {"S": "phase:3/4"}}"#,
        )
        .unwrap();
        assert_eq!(limit_points_from_json(&g, &q).unwrap().labels(), ["zeta1", "zeta3", "tau"]);
        let q: QueryJson = serde_json::from_str(
            r#"{"target": ["0", "1/2"], "approach_subgroup": ["S", "R^2"],
                "limit_rep": {"degree": 1, "S": "1", "R^2": "1"}, "cocycle_at": ["0", "0"]}"#,
        )
        .unwrap();
        assert_eq!(limit_points_from_json(&g, &q).unwrap().flags, [LimitFlag::ClassMismatch]);
        let bad: QueryJson = serde_json::from_str(
            r#"{"target": ["1/2", "1/2"], "approach_subgroup": ["S"], "limit_rep": {"S": "1"}}"#,
        )
        .unwrap();
        assert!(limit_points_from_json(&g, &bad).is_err());
        for v in ["1", "-1"] {
            let q: QueryJson = serde_json::from_str(&format!(
                r#"{{"target": ["0", "1/2"], "approach_subgroup": ["S"], "limit_rep": {{"S": "{v}"}}}}"#
            ))
            .unwrap();
            assert_eq!(limit_points_from_json(&g, &q).unwrap().labels(), ["sigma"]);
        }
        assert_eq!(parse_value("-1").unwrap(), Cyclo::from_int(-1));
    }

    #[test]
    fn act_by_identity_and_rotation() {
        let g = CrystalGroup::p4g();
        let k = g.point_group().clone();
        let z = pt((1, 4), (1, 4));
        for p in fiber(&g, &z).unwrap() {
            let same = act(&g, 0, &p).unwrap();
            assert_eq!(same.z, p.z);
            assert_eq!(same.rep, p.rep);
            let r = k.element_from_word("R").unwrap();
            let moved = act(&g, r, &p).unwrap();
            assert_eq!(moved.z, pt((3, 4), (1, 4)));
            let conj = k.conjugate(r, k.element_from_word("SR^3").unwrap());
            assert_eq!(moved.stabilizer.elements(), &[0, conj]);
            assert_eq!(moved.stabilizer, g.stabilizer(&moved.z));
        }
    }

    #[test]
    fn reflexivity() {
        let g = CrystalGroup::p4g();
        for x in [z0(), z1(), z2(), pt((1, 4), (1, 4)), pt((1, 3), (1, 2))] {
            for p in fiber(&g, &x).unwrap() {
                let q = ConvergenceQuery {
                    target: x.clone(),
                    approach: p.stabilizer.clone(),
                    limit_rep: p.rep.clone(),
                };
                let set = limit_points(&g, &q).unwrap();
                assert!(set.labels().contains(&p.label));
                assert_eq!(set.points.len(), 1);
            }
        }
    }

    #[test]
    fn fiber_degrees_fill_the_stabilizer() {
        let g = CrystalGroup::p4g();
        for a in 0..8 {
            for b in 0..8 {
                let z = pt((a, 8), (b, 8));
                let total: u32 = fiber(&g, &z).unwrap().iter().map(|p| p.rep.degree().pow(2)).sum();
                assert_eq!(total as usize, g.stabilizer(&z).order());
            }
        }
    }

    /// Every (x, L, τ) with x on the 1/4-grid, L ⊆ K_x and τ an ω_x|L-irrep.
    fn queries(g: &CrystalGroup) -> Vec<ConvergenceQuery> {
        let mut out = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                let x = pt((a, 4), (b, 4));
                let stab = g.stabilizer(&x);
                for l in all_subgroups(g.point_group()) {
                    if !l.is_subset_of(&stab) {
                        continue;
                    }
                    for rep in omega_irreps(&g.cocycle_on(&x, &l)).unwrap() {
                        out.push(ConvergenceQuery { target: x.clone(), approach: l.clone(), limit_rep: rep });
                    }
                }
            }
        }
        out
    }

    #[test]
    fn monotonicity_under_shrinking() {
        let g = CrystalGroup::p4g();
        for q in queries(&g).into_iter().step_by(3) {
            let big = limit_points(&g, &q).unwrap();
            let stab_l = &q.approach;
            for smaller in all_subgroups(g.point_group()) {
                if !smaller.is_subset_of(stab_l) {
                    continue;
                }
                let inner = smaller.within(stab_l).unwrap();
                let w = g.cocycle_on(&q.target, &smaller);
                for tau in omega_irreps(&w).unwrap() {
                    if !subrep_multiplicity(&tau, &q.limit_rep, &inner).unwrap().is_positive() {
                        continue;
                    }
                    let q2 = ConvergenceQuery { target: q.target.clone(), approach: smaller.clone(), limit_rep: tau };
                    let small: BTreeSet<String> = limit_points(&g, &q2).unwrap().labels().into_iter().collect();
                    for l in big.labels() {
                        assert!(small.contains(&l));
                    }
                }
            }
        }
    }

    #[test]
    fn segment_limits_match_query_limits() {
        let g = CrystalGroup::p4g();
        let triangle = Polygon::from_fractions(&[[(0, 1), (0, 1)], [(0, 1), (1, 2)], [(1, 2), (1, 2)]]).unwrap();
        for s in stratify(&g, &triangle).unwrap() {
            for fam in s.families(&g).unwrap() {
                for t in [Rat::zero(), Rat::one()] {
                    let x = fam.point(t);
                    let rep = fam.evaluate(&g, t).unwrap();
                    let q = ConvergenceQuery { target: x.clone(), approach: s.stabilizer.clone(), limit_rep: rep };
                    let set = limit_points(&g, &q).unwrap();
                    assert!(set.flags.is_empty());
                    assert!(!set.points.is_empty());
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn act_is_exact_on_the_obstruction(a in 0i64..12, b in 0i64..12, g in 0usize..8) {
            let cg = CrystalGroup::p4g();
            let z = pt((a, 12), (b, 12));
            for p in fiber(&cg, &z).unwrap() {
                let moved = act(&cg, g, &p).unwrap();
                prop_assert_eq!(moved.rep.cocycle(), &cg.mackey_cocycle(&moved.z));
                prop_assert_eq!(moved.rep.degree(), p.rep.degree());
            }
        }

        #[test]
        fn limit_points_are_act_equivariant(idx in 0usize..10_000, g in 0usize..8) {
            let cg = CrystalGroup::p4g();
            let all = queries(&cg);
            let q = &all[idx % all.len()];
            let before = limit_points(&cg, q).unwrap();
            let (gx, gl, gtau) = transport(&cg, g, &q.target, &q.approach, &q.limit_rep).unwrap();
            let after = limit_points(&cg, &ConvergenceQuery { target: gx, approach: gl, limit_rep: gtau }).unwrap();
            let moved: BTreeSet<String> = before.points.iter().map(|p| act(&cg, g, p).unwrap().label).collect();
            let got: BTreeSet<String> = after.labels().into_iter().collect();
            prop_assert_eq!(moved, got);
            prop_assert_eq!(before.points.len(), after.points.len());
        }
    }
}
