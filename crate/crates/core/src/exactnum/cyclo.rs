use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::Complex;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::phase::Phase;
use super::rat::{format_rat, is_zero, parse_rat, Rat};
use crate::error::{Error, Result};

pub const DEFAULT_CONDUCTOR_CAP: u32 = 256;

static CONDUCTOR_CAP: AtomicU32 = AtomicU32::new(DEFAULT_CONDUCTOR_CAP);

/// Element of `Q(ζ_M)`, stored as `Σ c_k ζ_M^k` in `Q[x]/(x^M - 1)`.
///
/// The representation is not unique; equality reduces the difference modulo
/// the `M`-th cyclotomic polynomial.
#[derive(Clone)]
pub struct Cyclo {
    conductor: u32,
    coeffs: Vec<Rat>,
}

/// Current process-wide conductor cap.
pub fn conductor_cap() -> u32 {
    CONDUCTOR_CAP.load(Ordering::Relaxed)
}

/// Overrides the conductor cap for subsequent arithmetic.
pub fn set_conductor_cap(cap: u32) {
    CONDUCTOR_CAP.store(cap.max(1), Ordering::Relaxed);
}

fn check_conductor(m: u64) -> Result<u32> {
    let cap = conductor_cap();
    if m > cap as u64 {
        return Err(Error::ConductorTooLarge { conductor: m, cap });
    }
    Ok(m as u32)
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo {
            conductor: 1,
            coeffs: vec![Rat::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclo::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        Cyclo {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Cyclo::from_rat(Rat::from_integer(n))
    }

    /// `ζ_m^k`.
    pub fn root_of_unity(k: i64, m: u32) -> Result<Self> {
        let m = check_conductor(m as u64)?;
        let mut coeffs = vec![Rat::zero(); m as usize];
        coeffs[k.mod_floor(&(m as i64)) as usize] = Rat::one();
        Ok(Cyclo { conductor: m, coeffs })
    }

    /// Embeds `e^{2πiq}` as `ζ_den^num`.
    pub fn from_phase(p: &Phase) -> Result<Self> {
        let q = p.q();
        Cyclo::root_of_unity(*q.numer(), *q.denom() as u32)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Re-expresses over `ζ_target`, where `target` is a multiple of the conductor.
    pub fn promote(&self, target: u32) -> Result<Self> {
        assert!(
            target % self.conductor == 0,
            "promote: {target} is not a multiple of {}",
            self.conductor
        );
        let target = check_conductor(target as u64)?;
        if target == self.conductor {
            return Ok(self.clone());
        }
        let step = (target / self.conductor) as usize;
        let mut coeffs = vec![Rat::zero(); target as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * step] = *c;
        }
        Ok(Cyclo {
            conductor: target,
            coeffs,
        })
    }

    fn common(&self, other: &Cyclo) -> Result<(Cyclo, Cyclo)> {
        let l = (self.conductor as u64).lcm(&(other.conductor as u64));
        let l = check_conductor(l)?;
        Ok((self.promote(l)?, other.promote(l)?))
    }

    pub fn try_add(&self, other: &Cyclo) -> Result<Cyclo> {
        let (mut a, b) = self.common(other)?;
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += *y;
        }
        Ok(a)
    }

    pub fn try_sub(&self, other: &Cyclo) -> Result<Cyclo> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Cyclo) -> Result<Cyclo> {
        let (a, b) = self.common(other)?;
        let m = a.conductor as usize;
        let mut coeffs = vec![Rat::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !is_zero(y) {
                    coeffs[(i + j) % m] += *x * *y;
                }
            }
        }
        Ok(Cyclo {
            conductor: a.conductor,
            coeffs,
        })
    }

    pub fn scale(&self, r: Rat) -> Cyclo {
        Cyclo {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| *c * r).collect(),
        }
    }

    /// Complex conjugation, `ζ_M ↦ ζ_M^{M-1}`.
    pub fn conj(&self) -> Cyclo {
        let m = self.conductor as usize;
        let mut coeffs = vec![Rat::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(m - k) % m] = *c;
        }
        Cyclo {
            conductor: self.conductor,
            coeffs,
        }
    }

    /// Coefficients of the canonical remainder modulo `Φ_M` (length `φ(M)`).
    pub fn reduced_coeffs(&self) -> Vec<Rat> {
        reduce_mod_cyclotomic(&self.coeffs, self.conductor)
    }

    pub fn is_zero(&self) -> bool {
        self.reduced_coeffs().iter().all(is_zero)
    }

    /// The value as a rational number, when it is one.
    pub fn to_rat(&self) -> Option<Rat> {
        let red = self.reduced_coeffs();
        if red.iter().skip(1).all(is_zero) {
            Some(red.first().copied().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }

    /// The value as a root of unity, when it is one.
    pub fn to_phase(&self) -> Option<Phase> {
        let m = self.conductor as i64;
        (0..m).map(|k| Phase::from_fraction(k, m)).find(|p| {
            Cyclo::from_phase(p)
                .map(|c| c == *self)
                .unwrap_or(false)
        })
    }

    pub fn to_complex(&self) -> Complex<f64> {
        let m = self.conductor as f64;
        let mut z = Complex::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if is_zero(c) {
                continue;
            }
            let theta = std::f64::consts::TAU * k as f64 / m;
            let c = *c.numer() as f64 / *c.denom() as f64;
            z += Complex::new(c * theta.cos(), c * theta.sin());
        }
        z
    }

    /// Same value over the smallest conductor dividing the current one, with
    /// coefficients in the power basis `1, ζ_d, …, ζ_d^{φ(d)-1}`.
    pub fn minimal(&self) -> Cyclo {
        let m = self.conductor;
        let target = self.reduced_coeffs();
        for d in divisors(m) {
            let phi_d = euler_phi(d) as usize;
            let step = m / d;
            let columns: Vec<Vec<Rat>> = (0..phi_d)
                .map(|j| {
                    let mut v = vec![Rat::zero(); m as usize];
                    v[j * step as usize] = Rat::one();
                    reduce_mod_cyclotomic(&v, m)
                })
                .collect();
            if let Some(sol) = solve_rational(&columns, &target) {
                let mut coeffs = vec![Rat::zero(); d as usize];
                coeffs[..phi_d].copy_from_slice(&sol);
                return Cyclo {
                    conductor: d,
                    coeffs,
                };
            }
        }
        unreachable!("every element lies in Q(ζ_M)")
    }

    /// Serializable sparse form of the minimal representation.
    pub fn to_repr(&self) -> CycloRepr {
        let m = self.minimal();
        CycloRepr {
            conductor: m.conductor,
            terms: m
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !is_zero(c))
                .map(|(k, c)| (k as u32, format_rat(c)))
                .collect(),
        }
    }

    pub fn from_repr(r: &CycloRepr) -> Result<Cyclo> {
        let m = check_conductor(r.conductor as u64)?;
        if m == 0 {
            return Err(Error::input("conductor must be positive"));
        }
        let mut coeffs = vec![Rat::zero(); m as usize];
        for (k, c) in &r.terms {
            coeffs[(*k % m) as usize] += parse_rat(c)?;
        }
        Ok(Cyclo {
            conductor: m,
            coeffs,
        })
    }

    /// Parses a phase (`"1/4"`), a rational (`"r:-1/2"`) or a JSON-free term
    /// list such as `"E(8)^3 - 2*E(8)"` in the display notation.
    pub fn parse(s: &str) -> Result<Cyclo> {
        let s = s.trim();
        if let Some(r) = s.strip_prefix("r:") {
            return Ok(Cyclo::from_rat(parse_rat(r)?));
        }
        if !s.contains('E') && s != "i" && s != "-i" {
            return Cyclo::from_phase(&Phase::parse(s)?);
        }
        parse_terms(s)
    }
}

fn parse_terms(s: &str) -> Result<Cyclo> {
    let bad = || Error::input(format!("malformed cyclotomic {s:?}"));
    let normalized = s.replace(' ', "").replace('-', "+-");
    let mut acc = Cyclo::zero();
    for term in normalized.split('+').filter(|t| !t.is_empty()) {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term),
        };
        let (coef, root) = match body.split_once('*') {
            Some((c, r)) => (parse_rat(c)?, r),
            None if body.starts_with('E') || body == "i" => (Rat::one(), body),
            None => (parse_rat(body)?, ""),
        };
        let value = if root.is_empty() {
            Cyclo::from_rat(coef)
        } else if root == "i" {
            Cyclo::root_of_unity(1, 4)?.scale(coef)
        } else {
            let rest = root.strip_prefix("E(").ok_or_else(bad)?;
            let (m, exp) = rest.split_once(')').ok_or_else(bad)?;
            let m: u32 = m.parse().map_err(|_| bad())?;
            let k: i64 = match exp.strip_prefix('^') {
                Some(e) => e.parse().map_err(|_| bad())?,
                None if exp.is_empty() => 1,
                None => return Err(bad()),
            };
            Cyclo::root_of_unity(k, m)?.scale(coef)
        };
        acc = acc.try_add(&if neg { -value } else { value })?;
    }
    Ok(acc)
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Cyclo) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.is_zero(),
            // Fall back to numerics only when exact promotion is impossible.
            Err(_) => (self.to_complex() - other.to_complex()).norm() < 1e-12,
        }
    }
}

impl Default for Cyclo {
    fn default() -> Self {
        Cyclo::zero()
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        self.scale(-Rat::one())
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        self.scale(-Rat::one())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.minimal();
        let mut terms: Vec<String> = Vec::new();
        for (k, c) in m.coeffs.iter().enumerate() {
            if is_zero(c) {
                continue;
            }
            let root = match (m.conductor, k) {
                (_, 0) => String::new(),
                (4, 1) => "i".to_string(),
                (d, 1) => format!("E({d})"),
                (d, k) => format!("E({d})^{k}"),
            };
            let term = if root.is_empty() {
                c.to_string()
            } else if c.is_one() {
                root
            } else if *c == -Rat::one() {
                format!("-{root}")
            } else {
                format!("{c}*{root}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo({self})")
    }
}

/// Wire form: conductor plus sparse `(exponent, "num/den")` terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloRepr {
    pub conductor: u32,
    pub terms: Vec<(u32, String)>,
}

impl Serialize for Cyclo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CycloRepr::deserialize(d)?;
        Cyclo::from_repr(&r).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub(crate) fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// Integer coefficients of `Φ_n`, lowest degree first, cached per `n`.
fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        poly = exact_div_monic(&poly, &cyclotomic_poly(d));
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quot = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "cyclotomic division not exact");
    quot
}

fn reduce_mod_cyclotomic(coeffs: &[Rat], m: u32) -> Vec<Rat> {
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    let mut rem: Vec<Rat> = coeffs.to_vec();
    if rem.len() < deg {
        rem.resize(deg, Rat::zero());
    }
    for i in (deg..rem.len()).rev() {
        let c = rem[i];
        if is_zero(&c) {
            continue;
        }
        for (j, p) in phi.iter().enumerate() {
            rem[i - deg + j] -= c * Rat::from_integer(*p);
        }
    }
    rem.truncate(deg);
    rem
}

/// Solves `Σ_j x_j · columns[j] = target` exactly; `None` if inconsistent.
fn solve_rational(columns: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let rows = target.len();
    let cols = columns.len();
    let mut a: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rat> = columns.iter().map(|c| c[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..rows {
            if i != r && !is_zero(&a[i][c]) {
                let f = a[i][c];
                for j in 0..=cols {
                    let t = a[r][j];
                    a[i][j] -= f * t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !is_zero(&row[cols])) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols];
    }
    Some(x)
}
