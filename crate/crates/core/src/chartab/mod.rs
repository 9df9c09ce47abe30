//! Ordinary character theory of finite groups.
//!
//! Character tables are found numerically from the class algebra and then
//! snapped to exact cyclotomic values: the value at `g` is rebuilt from the
//! eigenvalue multiplicities `m_k = (1/o) Σ_j χ(g^j) ζ_o^{-jk}`, which must be
//! non-negative integers. The snapped table is then re-verified by exact row
//! orthogonality before it is returned.

mod matrix;
mod report;

use std::fmt;

use nalgebra::Complex;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Rat};
use crate::groups::{GroupRef, Subgroup};
use crate::linalg::{self, CMat};

pub use matrix::{matrix_irrep, matrix_irrep_with, MatrixRep};
pub use report::{CharacterTableReport, ClassColumn, CharacterRow};

/// Default seed for every randomized numeric step.
pub const DEFAULT_SEED: u64 = 0x6d61_636b_6579;

/// Snapped eigenvalue multiplicities must be this close to an integer.
pub const SNAP_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
pub struct ChartabConfig {
    pub seed: u64,
    pub attempts: usize,
}

impl Default for ChartabConfig {
    fn default() -> Self {
        ChartabConfig {
            seed: DEFAULT_SEED,
            attempts: 8,
        }
    }
}

/// A class function, one exact value per conjugacy class.
#[derive(Clone)]
pub struct Character {
    group: GroupRef,
    values: Vec<Cyclo>,
}

impl Character {
    pub fn new(group: GroupRef, values: Vec<Cyclo>) -> Result<Character> {
        if values.len() != group.classes().len() {
            return Err(Error::input("one value per conjugacy class expected"));
        }
        Ok(Character { group, values })
    }

    /// Builds a class function from a per-element evaluator (sampled at class
    /// representatives).
    pub fn from_fn(group: GroupRef, f: impl Fn(usize) -> Cyclo) -> Character {
        let values = group.classes().iter().map(|c| f(c[0])).collect();
        Character { group, values }
    }

    pub fn trivial(group: GroupRef) -> Character {
        Character::from_fn(group, |_| Cyclo::one())
    }

    pub fn regular(group: GroupRef) -> Character {
        let n = group.order() as i64;
        Character::from_fn(group, |g| if g == 0 { Cyclo::from_int(n) } else { Cyclo::zero() })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    /// Values indexed by conjugacy class.
    pub fn values(&self) -> &[Cyclo] {
        &self.values
    }

    pub fn value(&self, element: usize) -> &Cyclo {
        &self.values[self.group.class_of(element)]
    }

    /// Value at the identity.
    pub fn degree(&self) -> u32 {
        self.values[0]
            .to_rat()
            .and_then(|r| r.to_integer().to_u32())
            .expect("degree is a non-negative integer")
    }

    pub fn try_add(&self, other: &Character) -> Result<Character> {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(Character {
            group: self.group.clone(),
            values,
        })
    }

    pub fn conj(&self) -> Character {
        Character {
            group: self.group.clone(),
            values: self.values.iter().map(Cyclo::conj).collect(),
        }
    }

    /// Deterministic ordering key: per class, the negated float value on a
    /// 1e-9 grid, so the trivial character sorts first among its degree.
    pub(crate) fn sort_key(&self) -> (u32, Vec<(i64, i64)>) {
        let key = self
            .values
            .iter()
            .map(|v| {
                let z = v.to_complex();
                ((-z.re * 1e9).round() as i64, (-z.im * 1e9).round() as i64)
            })
            .collect();
        (self.degree(), key)
    }
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.values == other.values
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "Character[{}]", vals.join(", "))
    }
}

/// `(1/|G|) Σ_g a(g)·conj(b(g))` as an exact cyclotomic number.
pub fn inner_product_cyclo(a: &Character, b: &Character) -> Result<Cyclo> {
    assert!(*a.group == *b.group, "inner product of characters on different groups");
    let g = &a.group;
    let mut acc = Cyclo::zero();
    for (i, class) in g.classes().iter().enumerate() {
        let term = a.values[i].try_mul(&b.values[i].conj())?;
        acc = acc.try_add(&term.scale(Rat::from_integer(class.len() as i64)))?;
    }
    Ok(acc.scale(Rat::new(1, g.order() as i64)))
}

/// Exact inner product; rational (indeed integral) for characters of
/// genuine representations.
pub fn inner_product(a: &Character, b: &Character) -> Result<Rat> {
    let v = inner_product_cyclo(a, b)?;
    v.to_rat().ok_or_else(|| Error::NotRational(v.to_string()))
}

/// Restriction of `chi` (on `sub.parent()`) to `sub`.
pub fn restrict_character(chi: &Character, sub: &Subgroup) -> Character {
    assert!(**sub.parent() == *chi.group, "restriction to a subgroup of another group");
    Character::from_fn(sub.group().clone(), |l| chi.value(sub.embed(l)).clone())
}

/// Complete list of irreducible characters, sorted by degree then value.
pub fn character_table(group: &GroupRef) -> Result<Vec<Character>> {
    character_table_with(group, &ChartabConfig::default())
}

pub fn character_table_with(group: &GroupRef, config: &ChartabConfig) -> Result<Vec<Character>> {
    let mut last_err = None;
    for attempt in 0..config.attempts {
        let seed = config.seed.wrapping_add(attempt as u64);
        match attempt_table(group, seed) {
            Ok(mut table) => {
                table.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
                return Ok(table);
            }
            Err(e @ Error::ConductorTooLarge { .. }) => return Err(e),
            Err(e) => {
                log::debug!("character table attempt {attempt} failed: {e}");
                last_err = Some(e);
            }
        }
    }
    Err(last_err.unwrap_or_else(|| Error::CharacterCertification("no attempts made".into())))
}

fn attempt_table(group: &GroupRef, seed: u64) -> Result<Vec<Character>> {
    let g = group.as_ref();
    let n = g.order();
    let classes = g.classes();
    let r = classes.len();
    let sizes: Vec<f64> = classes.iter().map(|c| c.len() as f64).collect();

    // Class multiplication coefficients c[j][i][k]: C_j C_i = Σ_k c C_k.
    let mut coeff = vec![vec![vec![0u32; r]; r]; r];
    for (j, cj) in classes.iter().enumerate() {
        for (i, ci) in classes.iter().enumerate() {
            for &x in cj {
                for &y in ci {
                    let z = g.mul(x, y);
                    let k = g.class_of(z);
                    if classes[k][0] == z {
                        coeff[j][i][k] += 1;
                    }
                }
            }
        }
    }
    // Multiplication by C_j in the orthonormal basis C_i/√|C_i| of the centre.
    let mult = |j: usize| -> CMat {
        CMat::from_fn(r, r, |k, i| {
            linalg::c(coeff[j][i][k] as f64 * sizes[k].sqrt() / sizes[i].sqrt(), 0.0)
        })
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = CMat::zeros(r, r);
    for j in 0..r {
        let jinv = g.class_of(g.inv(classes[j][0]));
        let (mj, mjinv) = (mult(j), mult(jinv));
        let alpha: f64 = rng.random_range(-1.0..1.0);
        let beta: f64 = rng.random_range(-1.0..1.0);
        h += (&mj + &mjinv).scale(alpha);
        h += (&mj - &mjinv) * Complex::new(0.0, beta);
    }
    let (eigenvalues, vectors) = linalg::hermitian_eigen(&h);
    let scale = eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if linalg::min_gap(&eigenvalues) < 1e-6 * scale {
        return Err(Error::CharacterCertification("degenerate class-algebra spectrum".into()));
    }

    let mut table = Vec::with_capacity(r);
    for col in 0..r {
        let v = vectors.column(col);
        let u0 = v[0];
        if u0.norm() < 1e-9 {
            return Err(Error::CharacterCertification("idempotent vanishes at identity".into()));
        }
        let ratios: Vec<Complex<f64>> = (0..r).map(|i| (v[i] / sizes[i].sqrt()) / u0).collect();
        let norm: f64 = (0..r).map(|i| sizes[i] * ratios[i].norm_sqr()).sum();
        let degree_f = (n as f64 / norm).sqrt();
        let degree = degree_f.round();
        if (degree - degree_f).abs() > SNAP_TOLERANCE || degree < 1.0 {
            return Err(Error::CharacterCertification(format!("degree {degree_f} is not an integer")));
        }
        let numeric: Vec<Complex<f64>> = ratios.iter().map(|q| q.conj() * degree).collect();
        let mut exact = Vec::with_capacity(r);
        for class in classes {
            exact.push(snap_value(group, class[0], &numeric, degree as i64)?);
        }
        table.push(Character {
            group: group.clone(),
            values: exact,
        });
    }
    certify(&table, n)?;
    Ok(table)
}

/// Rebuilds `χ(g)` from the multiplicities of the eigenvalues of `ρ(g)`.
fn snap_value(group: &GroupRef, g: usize, numeric: &[Complex<f64>], degree: i64) -> Result<Cyclo> {
    let o = group.element_order(g);
    let powers: Vec<Complex<f64>> = (0..o)
        .map(|j| numeric[group.class_of(group.pow(g, j as i64))])
        .collect();
    let mut value = Cyclo::zero();
    let mut total = 0i64;
    for k in 0..o {
        let m: Complex<f64> = powers
            .iter()
            .enumerate()
            .map(|(j, chi)| {
                let theta = -std::f64::consts::TAU * (j * k) as f64 / o as f64;
                chi * Complex::new(theta.cos(), theta.sin())
            })
            .sum::<Complex<f64>>()
            / o as f64;
        let rounded = m.re.round();
        if (m - Complex::new(rounded, 0.0)).norm() > SNAP_TOLERANCE || rounded < 0.0 {
            return Err(Error::CharacterCertification(format!(
                "eigenvalue multiplicity {m} at element {} is not a non-negative integer",
                group.name(g)
            )));
        }
        let rounded = rounded as i64;
        if rounded > 0 {
            let root = Cyclo::root_of_unity(k as i64, o as u32)?;
            value = value.try_add(&root.scale(Rat::from_integer(rounded)))?;
        }
        total += rounded;
    }
    if total != degree {
        return Err(Error::CharacterCertification(format!(
            "multiplicities at {} sum to {total}, expected {degree}",
            group.name(g)
        )));
    }
    Ok(value)
}

fn certify(table: &[Character], order: usize) -> Result<()> {
    let sum_sq: u64 = table.iter().map(|c| (c.degree() as u64).pow(2)).sum();
    if sum_sq != order as u64 {
        return Err(Error::CharacterCertification(format!(
            "sum of squared degrees {sum_sq} != |G| = {order}"
        )));
    }
    for (i, a) in table.iter().enumerate() {
        for (j, b) in table.iter().enumerate().skip(i) {
            let ip = inner_product_cyclo(a, b)?;
            let expected = if i == j { Cyclo::one() } else { Cyclo::zero() };
            if ip != expected {
                return Err(Error::CharacterCertification(format!(
                    "orthogonality fails for characters {i}, {j}: {ip}"
                )));
            }
        }
    }
    Ok(())
}

/// Zero-check helper used by property tests and reports.
pub fn is_irreducible(chi: &Character) -> Result<bool> {
    Ok(inner_product(chi, chi)? == Rat::from_integer(1))
}
