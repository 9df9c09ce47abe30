//! Extensions `1 → Zⁿ → G → K → 1` given by a point group of integer
//! matrices and a rational section `c: K → Qⁿ`.
//!
//! Elements of `G` are affine maps `(v, X)`, multiplied as
//! `(v, X)(w, Y) = (v + Xw, XY)`. The point group acts on the dual torus by
//! the contragredient `z ↦ X^{-T} z`, which is `Xz` for orthogonal `X`.

mod affine;
mod json;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{format_rat, frac, parse_rat, Phase, Rat};
use crate::groups::{FiniteGroup, GroupRef, IntMatrix, Subgroup, DEFAULT_GROUP_BOUND};
use crate::twisted::TwoCocycle;

pub use affine::AffineElement;
pub use json::{CrystalJson, GeneratorJson, SectionEntryJson};

/// A point of `Rⁿ/Zⁿ` with rational coordinates in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint(Vec<Rat>);

impl TorusPoint {
    pub fn new(coords: Vec<Rat>) -> TorusPoint {
        TorusPoint(coords.iter().map(frac).collect())
    }

    pub fn from_fractions(coords: &[(i64, i64)]) -> TorusPoint {
        TorusPoint::new(coords.iter().map(|&(n, d)| Rat::new(n, d)).collect())
    }

    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<TorusPoint> {
        let v = coords
            .iter()
            .map(|c| parse_rat(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(TorusPoint::new(v))
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rat).collect()
    }

    /// `χ_z(m) = e^{2πi⟨z, m⟩}`.
    pub fn character(&self, m: &[i64]) -> Phase {
        let q: Rat = self.0.iter().zip(m).map(|(z, k)| *z * Rat::from_integer(*k)).sum();
        Phase::new(q)
    }

    /// `z + m`, reduced.
    pub fn shift(&self, m: &[i64]) -> TorusPoint {
        TorusPoint::new(self.0.iter().zip(m).map(|(z, k)| *z + Rat::from_integer(*k)).collect())
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Point group with an integer realization and a section into `G`.
#[derive(Clone)]
pub struct CrystalGroup {
    name: String,
    dimension: usize,
    point_group: GroupRef,
    matrices: Vec<IntMatrix>,
    dual: Vec<IntMatrix>,
    section: Vec<Vec<Rat>>,
    generator_translations: Vec<Vec<Rat>>,
}

impl CrystalGroup {
    /// Builds the group from generators `(name, matrix, translation)`.
    ///
    /// The section is extended along breadth-first words, each product's
    /// translation reduced into `[0, 1)ⁿ`; `overrides` then replace single
    /// entries by word. Fails unless `c(E) = 0` and `∂c` is integral.
    pub fn new(
        name: &str,
        dimension: usize,
        generators: &[(String, IntMatrix, Vec<Rat>)],
        overrides: &[(String, Vec<Rat>)],
    ) -> Result<CrystalGroup> {
        if dimension == 0 {
            return Err(Error::input("dimension must be positive"));
        }
        for (gname, m, t) in generators {
            if m.dim() != dimension || t.len() != dimension {
                return Err(Error::input(format!("generator {gname} has the wrong dimension")));
            }
        }
        let (gens, translations): (Vec<(String, IntMatrix)>, Vec<Vec<Rat>>) = if generators.is_empty() {
            (
                vec![("E".to_string(), IntMatrix::identity(dimension))],
                vec![vec![Rat::zero(); dimension]],
            )
        } else {
            generators
                .iter()
                .map(|(n, m, t)| ((n.clone(), m.clone()), t.clone()))
                .unzip()
        };
        let (group, matrices) = FiniteGroup::from_matrices(&gens, DEFAULT_GROUP_BOUND)?;
        let group = Arc::new(group);
        let dual = matrices
            .iter()
            .map(|m| m.inverse().map(|i| i.transpose()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::input("point group matrix is not invertible over Z"))?;

        let n = group.order();
        let mut section: Vec<Option<Vec<Rat>>> = vec![None; n];
        section[0] = Some(vec![Rat::zero(); dimension]);
        for x in 1..n {
            let (&last, prefix) = group.word(x).split_last().expect("non-identity has a word");
            let parent = prefix
                .iter()
                .fold(0, |acc, &gi| group.mul(acc, group.generators()[gi]));
            let base = section[parent].clone().expect("prefixes come first in BFS order");
            let moved = matrices[parent].apply(&translations[last]);
            section[x] = Some(base.iter().zip(&moved).map(|(a, b)| frac(&(*a + *b))).collect());
        }
        let mut section: Vec<Vec<Rat>> = section.into_iter().map(Option::unwrap).collect();
        for (word, t) in overrides {
            if t.len() != dimension {
                return Err(Error::InvalidSection(format!("section entry {word} has the wrong dimension")));
            }
            section[group.element_from_word(word)?] = t.clone();
        }

        let g = CrystalGroup {
            name: name.to_string(),
            dimension,
            point_group: group,
            matrices,
            dual,
            section,
            generator_translations: translations,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn from_json(json: &CrystalJson) -> Result<CrystalGroup> {
        let parse_vec = |v: &[String]| v.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>();
        let gens = json
            .generators
            .iter()
            .map(|g| Ok((g.name.clone(), IntMatrix::new(g.matrix.clone())?, parse_vec(&g.translation)?)))
            .collect::<Result<Vec<_>>>()?;
        let overrides = json
            .section
            .iter()
            .flatten()
            .map(|e| Ok((e.word.clone(), parse_vec(&e.translation)?)))
            .collect::<Result<Vec<_>>>()?;
        CrystalGroup::new(&json.name, json.dimension, &gens, &overrides)
    }

    pub fn from_json_str(s: &str) -> Result<CrystalGroup> {
        CrystalGroup::from_json(&serde_json::from_str(s)?)
    }

    /// Generators plus the full section table, so a reload reproduces `self`.
    pub fn to_json(&self) -> CrystalJson {
        let g = &self.point_group;
        let generators = g
            .generators()
            .iter()
            .zip(g.generator_names())
            .zip(&self.generator_translations)
            .map(|((&x, name), t)| GeneratorJson {
                name: name.clone(),
                matrix: self.matrices[x].rows(),
                translation: t.iter().map(format_rat).collect(),
            })
            .collect();
        let section = (1..g.order())
            .map(|x| SectionEntryJson {
                word: g.name(x).to_string(),
                translation: self.section[x].iter().map(format_rat).collect(),
            })
            .collect();
        CrystalJson {
            name: self.name.clone(),
            dimension: self.dimension,
            generators,
            section: Some(section),
        }
    }

    /// The wallpaper group p4g: `R` a quarter turn, `S` a reflection, and
    /// the glide `(v, S)` with `v = (1/2, 1/2)`.
    pub fn p4g() -> CrystalGroup {
        let half = Rat::new(1, 2);
        let gens = [
            (
                "R".to_string(),
                IntMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap(),
                vec![Rat::zero(), Rat::zero()],
            ),
            ("S".to_string(), IntMatrix::new(vec![vec![1, 0], vec![0, -1]]).unwrap(), vec![half, half]),
        ];
        CrystalGroup::new("p4g", 2, &gens, &[]).expect("p4g data is valid")
    }

    /// True for the built-in p4g data (same generators, translations and section).
    pub fn is_p4g(&self) -> bool {
        let p = CrystalGroup::p4g();
        self.dimension == 2
            && self.point_group.generator_names() == p.point_group.generator_names()
            && self.point_group.names() == p.point_group.names()
            && self.matrices == p.matrices
            && self.generator_translations == p.generator_translations
            && self.section == p.section
    }

    fn validate(&self) -> Result<()> {
        if self.section[0].iter().any(|a| !a.is_zero()) {
            return Err(Error::InvalidSection("c(E) must be 0".into()));
        }
        let n = self.point_group.order();
        for x in 0..n {
            for y in 0..n {
                self.del_c(x, y)?;
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn point_group(&self) -> &GroupRef {
        &self.point_group
    }

    pub fn matrix(&self, x: usize) -> &IntMatrix {
        &self.matrices[x]
    }

    /// `X^{-T}`, the matrix of `X` on the dual torus.
    pub fn dual_matrix(&self, x: usize) -> &IntMatrix {
        &self.dual[x]
    }

    pub fn section(&self, x: usize) -> &[Rat] {
        &self.section[x]
    }

    /// `c(X) = (a_X, X)` as an element of `G`.
    pub fn section_element(&self, x: usize) -> AffineElement {
        AffineElement::new(self.matrices[x].clone(), self.section[x].clone())
    }

    /// `∂c(X, Y) = c(X)⁻¹ c(XY) c(Y)⁻¹ = X⁻¹(a_XY − a_X) − a_Y`.
    pub fn del_c(&self, x: usize, y: usize) -> Result<Vec<i64>> {
        let xy = self.point_group.mul(x, y);
        let p = self
            .section_element(x)
            .inv()
            .mul(&self.section_element(xy))
            .mul(&self.section_element(y).inv());
        debug_assert!(p.is_translation());
        p.integer_translation().ok_or_else(|| {
            Error::InvalidSection(format!(
                "∂c({}, {}) is not integral",
                self.point_group.name(x),
                self.point_group.name(y)
            ))
        })
    }

    /// `X·z = X^{-T} z` modulo `Zⁿ`.
    pub fn act_on(&self, x: usize, z: &TorusPoint) -> TorusPoint {
        self.check_dim(z);
        TorusPoint::new(self.dual[x].apply(z.coords()))
    }

    /// `{X ∈ K : X·z ≡ z}`.
    pub fn stabilizer(&self, z: &TorusPoint) -> Subgroup {
        let elems: Vec<usize> = (0..self.point_group.order())
            .filter(|&x| self.act_on(x, z) == *z)
            .collect();
        Subgroup::new(self.point_group.clone(), &elems).expect("stabilizers are subgroups")
    }

    /// `ω_z(X, Y) = e^{2πi⟨z, ∂c(X, Y)⟩}` on the stabilizer of `z`.
    pub fn mackey_cocycle(&self, z: &TorusPoint) -> TwoCocycle {
        let stab = self.stabilizer(z);
        self.cocycle_on(z, &stab)
    }

    /// The same formula on an arbitrary subgroup; a cocycle whenever the
    /// subgroup fixes `z`.
    pub fn cocycle_on(&self, z: &TorusPoint, sub: &Subgroup) -> TwoCocycle {
        self.check_dim(z);
        TwoCocycle::from_fn(sub.group().clone(), |a, b| {
            let d = self.del_c(sub.embed(a), sub.embed(b)).expect("validated section");
            z.character(&d)
        })
    }

    pub fn orbit(&self, z: &TorusPoint) -> BTreeSet<TorusPoint> {
        (0..self.point_group.order()).map(|x| self.act_on(x, z)).collect()
    }

    /// Lexicographically least orbit point.
    pub fn orbit_rep(&self, z: &TorusPoint) -> TorusPoint {
        self.orbit(z).into_iter().next().expect("orbits are nonempty")
    }

    /// For `X' ∈ K_{gz}` with `X = g⁻¹X'g`: the lattice vector
    /// `c(g)⁻¹ c(X') c(g) c(X)⁻¹`, which measures how far conjugation by the
    /// section moves `c(X)` off the section.
    pub fn conjugation_defect(&self, g: usize, x_prime: usize) -> Vec<i64> {
        let k = &self.point_group;
        let x = k.mul(k.mul(k.inv(g), x_prime), g);
        let cg = self.section_element(g);
        let p = cg
            .inv()
            .mul(&self.section_element(x_prime))
            .mul(&cg)
            .mul(&self.section_element(x).inv());
        debug_assert!(p.is_translation());
        p.integer_translation().expect("validated section")
    }

    fn check_dim(&self, z: &TorusPoint) {
        assert_eq!(z.dim(), self.dimension, "torus point has the wrong dimension");
    }
}

impl fmt::Debug for CrystalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CrystalGroup({}, n={}, |K|={})", self.name, self.dimension, self.point_group.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted::coboundary_solve;
    use proptest::prelude::*;

    fn el(g: &CrystalGroup, w: &str) -> usize {
        g.point_group().element_from_word(w).unwrap()
    }

    fn pt(a: (i64, i64), b: (i64, i64)) -> TorusPoint {
        TorusPoint::from_fractions(&[a, b])
    }

    fn names(sub: &Subgroup) -> Vec<String> {
        sub.elements().iter().map(|&e| sub.parent().name(e).to_string()).collect()
    }

    #[test]
    fn default_section_matches_glide_layout() {
        let g = CrystalGroup::p4g();
        let k = g.point_group().clone();
        let half = vec![Rat::new(1, 2), Rat::new(1, 2)];
        for x in 0..k.order() {
            let expected = if k.name(x).starts_with('S') { half.clone() } else { vec![Rat::zero(); 2] };
            assert_eq!(g.section(x), &expected[..], "c({})", k.name(x));
        }
    }

    #[test]
    fn del_c_values() {
        let g = CrystalGroup::p4g();
        let k = g.point_group().clone();
        for x in 0..k.order() {
            for y in ["E", "R", "R^2", "R^3"] {
                assert_eq!(g.del_c(x, el(&g, y)).unwrap(), vec![0, 0]);
            }
        }
        assert_eq!(g.del_c(el(&g, "R"), el(&g, "S")).unwrap(), vec![0, -1]);
        assert_eq!(g.del_c(el(&g, "S"), el(&g, "S")).unwrap(), vec![-1, 0]);
    }

    #[test]
    fn stabilizers() {
        let g = CrystalGroup::p4g();
        assert_eq!(names(&g.stabilizer(&pt((1, 4), (1, 4)))), ["E", "SR^3"]);
        assert_eq!(g.stabilizer(&pt((0, 1), (0, 1))).order(), 8);
        assert_eq!(g.stabilizer(&pt((1, 8), (3, 8))).order(), 1);
        assert_eq!(names(&g.stabilizer(&pt((0, 1), (1, 2)))), ["E", "S", "R^2", "SR^2"]);
        assert_eq!(names(&g.stabilizer(&pt((0, 1), (1, 3)))), ["E", "SR^2"]);
        assert_eq!(names(&g.stabilizer(&pt((1, 3), (1, 2)))), ["E", "S"]);
    }

    #[test]
    fn obstruction_at_z1() {
        let g = CrystalGroup::p4g();
        let z1 = pt((0, 1), (1, 2));
        let stab = g.stabilizer(&z1);
        let w = g.mackey_cocycle(&z1);
        w.check().unwrap();
        let h = stab.group();
        let at = |a: &str, b: &str| w.value(h.element_from_word(a).unwrap(), h.element_from_word(b).unwrap());
        assert_eq!(at("R^2", "S"), Phase::minus_one());
        assert_eq!(at("R^2", "SR^2"), Phase::minus_one());
        assert_eq!(at("SR^2", "S"), Phase::minus_one());
        assert_eq!(at("SR^2", "SR^2"), Phase::minus_one());
        for x in ["E", "R^2", "S", "SR^2"] {
            assert!(at(x, "R^2").is_one());
            assert!(at(x, "E").is_one());
        }
    }

    #[test]
    fn obstruction_on_vertical_segment() {
        let g = CrystalGroup::p4g();
        for (p, q) in [(1, 3), (1, 5), (2, 7)] {
            let z = pt((0, 1), (p, q));
            let stab = g.stabilizer(&z);
            let w = g.mackey_cocycle(&z);
            let r = stab.position(el(&g, "SR^2")).unwrap();
            assert_eq!(w.value(r, r), Phase::from_fraction(-p, q));
        }
    }

    #[test]
    fn obstruction_trivial_at_origin() {
        let g = CrystalGroup::p4g();
        assert!(g.mackey_cocycle(&pt((0, 1), (0, 1))).is_trivial());
    }

    #[test]
    fn orbits() {
        let g = CrystalGroup::p4g();
        assert_eq!(g.orbit(&pt((1, 4), (1, 4))).len(), 4);
        assert_eq!(g.orbit(&pt((0, 1), (0, 1))).len(), 1);
        assert_eq!(g.orbit_rep(&pt((3, 4), (1, 4))), pt((1, 4), (1, 4)));
    }

    #[test]
    fn json_round_trip() {
        let g = CrystalGroup::p4g();
        let json = serde_json::to_string(&g.to_json()).unwrap();
        let back = CrystalGroup::from_json_str(&json).unwrap();
        assert_eq!(back.point_group().names(), g.point_group().names());
        for x in 0..8 {
            assert_eq!(back.section(x), g.section(x));
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let s = r#"{"name": "x", "dimension": 1, "generators": [], "extra": 1}"#;
        assert!(CrystalGroup::from_json_str(s).is_err());
    }

    #[test]
    fn empty_generator_list_gives_the_lattice() {
        let g = CrystalGroup::from_json_str(r#"{"name": "p1", "dimension": 2, "generators": []}"#).unwrap();
        assert_eq!(g.point_group().order(), 1);
        assert!(g.mackey_cocycle(&pt((1, 3), (2, 5))).is_trivial());
    }

    #[test]
    fn non_integral_section_is_rejected() {
        let s = r#"{"name": "bad", "dimension": 2,
            "generators": [{"name": "S", "matrix": [[1,0],[0,-1]], "translation": ["1/2","1/2"]}],
            "section": [{"word": "S", "translation": ["1/3","0"]}]}"#;
        let err = CrystalGroup::from_json_str(s).unwrap_err();
        assert!(matches!(err, Error::InvalidSection(_)), "{err}");
    }

    #[test]
    fn nonzero_identity_section_is_rejected() {
        let s = r#"{"name": "bad", "dimension": 1, "generators": [],
            "section": [{"word": "E", "translation": ["1/2"]}]}"#;
        assert!(CrystalGroup::from_json_str(s).is_err());
    }

    #[test]
    fn conjugation_defect_vanishes_for_identity() {
        let g = CrystalGroup::p4g();
        for x in 0..8 {
            assert_eq!(g.conjugation_defect(0, x), vec![0, 0]);
        }
    }

    fn rational() -> impl Strategy<Value = Rat> {
        (-20i64..20, 1i64..13).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn point() -> impl Strategy<Value = TorusPoint> {
        (rational(), rational()).prop_map(|(a, b)| TorusPoint::new(vec![a, b]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn obstruction_is_a_cocycle(z in point()) {
            let g = CrystalGroup::p4g();
            prop_assert!(g.mackey_cocycle(&z).check().is_ok());
        }

        #[test]
        fn obstruction_ignores_lattice_shifts(z in point(), m in prop::array::uniform2(-3i64..4)) {
            let g = CrystalGroup::p4g();
            prop_assert_eq!(g.mackey_cocycle(&z), g.mackey_cocycle(&z.shift(&m)));
        }

        #[test]
        fn stabilizer_covariance(z in point(), x in 0usize..8) {
            let g = CrystalGroup::p4g();
            let k = g.point_group();
            let conj: BTreeSet<usize> = g.stabilizer(&z).elements().iter().map(|&y| k.conjugate(x, y)).collect();
            let moved: BTreeSet<usize> = g.stabilizer(&g.act_on(x, &z)).elements().iter().copied().collect();
            prop_assert_eq!(conj, moved);
        }

        #[test]
        fn obstruction_covariance(z in point(), x in 0usize..8) {
            let g = CrystalGroup::p4g();
            let k = g.point_group().clone();
            let gz = g.act_on(x, &z);
            let stab = g.stabilizer(&z);
            let moved = g.stabilizer(&gz);
            let w = g.mackey_cocycle(&z);
            let back = |b: usize| stab.position(k.conjugate(k.inv(x), moved.embed(b))).unwrap();
            let pulled = TwoCocycle::from_fn(moved.group().clone(), |a, b| w.value(back(a), back(b)));
            prop_assert!(coboundary_solve(&pulled, &g.mackey_cocycle(&gz)).is_some());
        }
    }
}
