use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::TwoCocycle;
use crate::chartab::{character_table, inner_product_cyclo, matrix_irrep, Character};
use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Rat};
use crate::groups::{FiniteGroup, GroupRef, DEFAULT_GROUP_BOUND};
use crate::linalg::CMat;

/// The finite group `G ×_ω C_M` on pairs `(g, j)` with
/// `(g, j)(h, k) = (gh, j + k + m(g, h))`, where `ω(g, h) = ζ_M^{m(g, h)}`.
pub struct CentralExtension {
    base: GroupRef,
    cocycle: TwoCocycle,
    modulus: u32,
    group: GroupRef,
    pairs: Vec<(usize, u32)>,
    labels: Vec<usize>,
}

pub fn central_extension(cocycle: &TwoCocycle) -> Result<CentralExtension> {
    cocycle.check()?;
    let base = cocycle.group().clone();
    let modulus = cocycle.modulus();
    let cap = crate::exactnum::conductor_cap();
    if modulus > cap as u64 {
        return Err(Error::ConductorTooLarge {
            conductor: modulus,
            cap,
        });
    }
    let m = modulus as u32;
    let exponent = |g: usize, h: usize| -> u32 {
        let q = cocycle.value(g, h).q() * Rat::from_integer(m as i64);
        q.to_integer() as u32
    };
    let mut gens: Vec<(String, (usize, u32))> = base
        .generators()
        .iter()
        .zip(base.generator_names())
        .map(|(&g, name)| (name.clone(), (g, 0)))
        .collect();
    if m > 1 {
        gens.push(("c".to_string(), (0, 1)));
    }
    let (group, pairs) = FiniteGroup::generate(
        &gens,
        (0usize, 0u32),
        |&(g, j), &(h, k)| (base.mul(g, h), (j + k + exponent(g, h)) % m),
        DEFAULT_GROUP_BOUND,
    )?;
    if pairs.len() != base.order() * m as usize {
        return Err(Error::InvalidSection("extension does not have order M·|G|".into()));
    }
    let mut labels = vec![0; pairs.len()];
    for (label, &(g, j)) in pairs.iter().enumerate() {
        labels[g * m as usize + j as usize] = label;
    }
    Ok(CentralExtension {
        base,
        cocycle: cocycle.clone(),
        modulus: m,
        group: Arc::new(group),
        pairs,
        labels,
    })
}

impl CentralExtension {
    pub fn base(&self) -> &GroupRef {
        &self.base
    }

    pub fn cocycle(&self) -> &TwoCocycle {
        &self.cocycle
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    /// Extension label of `(g, j)`.
    pub fn label(&self, g: usize, j: u32) -> usize {
        self.labels[g * self.modulus as usize + (j % self.modulus) as usize]
    }

    pub fn pair(&self, label: usize) -> (usize, u32) {
        self.pairs[label]
    }

    /// Label of the central generator `(e, 1)`.
    pub fn central(&self) -> usize {
        self.label(0, 1)
    }
}

/// An irreducible ω-representation, stored as its extension character.
#[derive(Clone)]
pub struct OmegaRep {
    cocycle: TwoCocycle,
    extension: Arc<CentralExtension>,
    character: Character,
    twisted: Vec<Cyclo>,
}

impl OmegaRep {
    fn from_extension_character(extension: Arc<CentralExtension>, character: Character) -> OmegaRep {
        let twisted = (0..extension.base.order())
            .map(|g| character.value(extension.label(g, 0)).clone())
            .collect();
        OmegaRep {
            cocycle: extension.cocycle.clone(),
            extension,
            character,
            twisted,
        }
    }

    /// Builds the ω-rep whose twisted character is `values` (one per element
    /// of the cocycle's group); fails unless this is an irreducible ω-character.
    pub fn from_twisted_values(cocycle: &TwoCocycle, values: Vec<Cyclo>) -> Result<OmegaRep> {
        let ext = Arc::new(central_extension(cocycle)?);
        OmegaRep::with_extension(ext, values)
    }

    pub(crate) fn with_extension(ext: Arc<CentralExtension>, values: Vec<Cyclo>) -> Result<OmegaRep> {
        if values.len() != ext.base.order() {
            return Err(Error::input("one twisted value per group element expected"));
        }
        let m = ext.modulus;
        let ext_value = |label: usize| -> Result<Cyclo> {
            let (g, j) = ext.pair(label);
            Cyclo::root_of_unity(j as i64, m)?.try_mul(&values[g])
        };
        let group = ext.group.clone();
        let mut by_class = Vec::with_capacity(group.classes().len());
        for class in group.classes() {
            let v = ext_value(class[0])?;
            for &x in &class[1..] {
                if ext_value(x)? != v {
                    return Err(Error::input("twisted values do not define a class function"));
                }
            }
            by_class.push(v);
        }
        let character = Character::new(group, by_class)?;
        if inner_product_cyclo(&character, &character)? != Cyclo::one() {
            return Err(Error::input("twisted values are not an irreducible ω-character"));
        }
        Ok(OmegaRep {
            cocycle: ext.cocycle.clone(),
            extension: ext,
            character,
            twisted: values,
        })
    }

    pub fn group(&self) -> &GroupRef {
        self.cocycle.group()
    }

    pub fn cocycle(&self) -> &TwoCocycle {
        &self.cocycle
    }

    pub fn extension(&self) -> &Arc<CentralExtension> {
        &self.extension
    }

    /// Irreducible character of the central extension.
    pub fn extension_character(&self) -> &Character {
        &self.character
    }

    pub fn degree(&self) -> u32 {
        self.twisted[0]
            .to_rat()
            .and_then(|r| r.to_integer().to_u32())
            .expect("degree is a positive integer")
    }

    /// `g ↦ χ((g, 0))`, one value per element of the base group.
    pub fn twisted_values(&self) -> &[Cyclo] {
        &self.twisted
    }

    pub fn twisted_value(&self, g: usize) -> &Cyclo {
        &self.twisted[g]
    }

    /// Generator names with their twisted character values.
    pub fn generator_values(&self) -> Vec<(String, Cyclo)> {
        let g = self.group();
        g.generators()
            .iter()
            .zip(g.generator_names())
            .map(|(&x, name)| (name.clone(), self.twisted[x].clone()))
            .collect()
    }

    /// Unitary matrices `σ(g)` with `σ(s)σ(t) = ω(s,t)σ(st)`.
    pub fn matrices(&self) -> Result<Vec<CMat>> {
        let rep = matrix_irrep(&self.character)?;
        Ok((0..self.group().order())
            .map(|g| rep.matrix(self.extension.label(g, 0)).clone())
            .collect())
    }

    pub fn to_json(&self) -> OmegaRepJson {
        OmegaRepJson {
            degree: self.degree(),
            values: self
                .generator_values()
                .into_iter()
                .map(|(w, v)| (w, v.to_string()))
                .collect(),
        }
    }

    pub(crate) fn sort_key(&self) -> (u32, Vec<(i64, i64)>) {
        let key = self
            .twisted
            .iter()
            .map(|v| {
                let z = v.to_complex();
                ((-z.re * 1e9).round() as i64, (-z.im * 1e9).round() as i64)
            })
            .collect();
        (self.degree(), key)
    }
}

impl PartialEq for OmegaRep {
    fn eq(&self, other: &Self) -> bool {
        self.cocycle == other.cocycle && self.twisted == other.twisted
    }
}

impl std::fmt::Debug for OmegaRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vals: Vec<String> = self
            .generator_values()
            .into_iter()
            .map(|(w, v)| format!("{w}: {v}"))
            .collect();
        write!(f, "OmegaRep(deg {}; {})", self.degree(), vals.join(", "))
    }
}

/// Serialized ω-rep: generator word to character value, plus degree.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OmegaRepJson {
    pub degree: u32,
    pub values: Vec<(String, String)>,
}

/// All irreducible ω-representations, sorted by degree and twisted values.
pub fn omega_irreps(cocycle: &TwoCocycle) -> Result<Vec<OmegaRep>> {
    let ext = Arc::new(central_extension(cocycle)?);
    let table = character_table(&ext.group)?;
    let zeta = Cyclo::root_of_unity(1, ext.modulus)?;
    let central = ext.central();
    let mut reps: Vec<OmegaRep> = Vec::new();
    for chi in table {
        let expected = zeta.scale(Rat::from_integer(chi.degree() as i64));
        if *chi.value(central) == expected {
            reps.push(OmegaRep::from_extension_character(ext.clone(), chi));
        }
    }
    reps.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(reps)
}
