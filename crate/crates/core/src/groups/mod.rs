//! Finite groups as explicit Cayley tables.
//!
//! Groups are built by closure from concrete generators. Elements are
//! labelled `0..n` in breadth-first order from the identity (always `0`),
//! applying generators on the right in declaration order, so every label is
//! reproducible and each element carries a shortlex word as a witness.

mod subgroup;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub use subgroup::{all_subgroups, conjugate_subgroup, Subgroup};

pub const DEFAULT_GROUP_BOUND: usize = 10_000;

/// Orders above this skip the exhaustive associativity check unless asked.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 128;

#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    words: Vec<Vec<usize>>,
    names: Vec<String>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    orders: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.table == other.table && self.names == other.names)
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Closure of `gens` under `mul`, with the identity first.
    ///
    /// Returns the group together with the concrete element behind each label.
    pub fn generate<E, F>(
        gens: &[(String, E)],
        identity: E,
        mul: F,
        bound: usize,
    ) -> Result<(FiniteGroup, Vec<E>)>
    where
        E: Clone + Eq + Hash,
        F: Fn(&E, &E) -> E,
    {
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<E, usize> = HashMap::from([(identity, 0)]);
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut cursor = 0;
        while cursor < elements.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (gi, (_, g)) in gens.iter().enumerate() {
                let prod = mul(&elements[cursor], g);
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= bound {
                            return Err(Error::GroupTooLarge { bound });
                        }
                        let i = elements.len();
                        let mut w = words[cursor].clone();
                        w.push(gi);
                        words.push(w);
                        index.insert(prod.clone(), i);
                        elements.push(prod);
                        i
                    }
                };
                row.push(idx);
            }
            right.push(row);
            cursor += 1;
        }

        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let mut x = a;
                for &g in &words[b] {
                    x = right[x][g];
                }
                table[a * n + b] = x as u32;
            }
        }
        let generator_names: Vec<String> = gens.iter().map(|(name, _)| name.clone()).collect();
        let generators = (0..gens.len()).map(|g| right[0][g]).collect();
        let names = words
            .iter()
            .map(|w| render_word(w, &generator_names))
            .collect();
        let mut group = FiniteGroup::assemble(table, generators, generator_names, words, names);
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            group.verify_associative()?;
        }
        if let Some(names) = group.syllable_names() {
            group.names = names;
        }
        Ok((group, elements))
    }

    /// Group given by a Cayley table over labels `0..n` (identity `0`), with
    /// the listed generators. Element names are supplied by the caller.
    pub(crate) fn from_table(
        table: Vec<u32>,
        generators: Vec<usize>,
        generator_names: Vec<String>,
        names: Vec<String>,
    ) -> Result<FiniteGroup> {
        let n = names.len();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in generators.iter().enumerate() {
                let y = table[x * n + g] as usize;
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(gi);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        let words = words
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::input("generators do not generate the group"))?;
        let group = FiniteGroup::assemble(table, generators, generator_names, words, names);
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            group.verify_associative()?;
        }
        Ok(group)
    }

    fn assemble(
        table: Vec<u32>,
        generators: Vec<usize>,
        generator_names: Vec<String>,
        words: Vec<Vec<usize>>,
        names: Vec<String>,
    ) -> FiniteGroup {
        let n = names.len();
        let mul = |a: usize, b: usize| table[a * n + b] as usize;
        let inverse: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| mul(a, b) == 0).expect("missing inverse"))
            .collect();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|g| mul(mul(g, a), inverse[g])).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }
        let orders = (0..n)
            .map(|a| {
                let (mut x, mut k) = (a, 1);
                while x != 0 {
                    x = mul(x, a);
                    k += 1;
                }
                k
            })
            .collect();
        FiniteGroup {
            order: n,
            table,
            inverse,
            generators,
            generator_names,
            words,
            names,
            classes,
            class_of,
            orders,
        }
    }

    /// Names of the form `x_1^{a_1}···x_k^{a_k}` with `0 ≤ a_i < ord(x_i)`,
    /// generators taken by ascending order (declaration order on ties), when
    /// every element has exactly one such expression. For D4 on `R, S` this
    /// yields `S^a R^b`.
    fn syllable_names(&self) -> Option<Vec<String>> {
        let mut gens: Vec<usize> = (0..self.generators.len()).collect();
        gens.sort_by_key(|&i| (self.orders[self.generators[i]], i));
        let total: usize = gens.iter().map(|&i| self.orders[self.generators[i]]).product();
        if total != self.order {
            return None;
        }
        let mut names: Vec<Option<String>> = vec![None; self.order];
        let mut exps = vec![0usize; gens.len()];
        loop {
            let mut x = 0;
            let mut word = Vec::new();
            for (pos, &gi) in gens.iter().enumerate() {
                x = self.mul(x, self.pow(self.generators[gi], exps[pos] as i64));
                word.extend(std::iter::repeat_n(gi, exps[pos]));
            }
            if names[x].is_some() {
                return None;
            }
            names[x] = Some(render_word(&word, &self.generator_names));
            let mut pos = gens.len();
            loop {
                if pos == 0 {
                    return names.into_iter().collect();
                }
                pos -= 1;
                exps[pos] += 1;
                if exps[pos] < self.orders[self.generators[gens[pos]]] {
                    break;
                }
                exps[pos] = 0;
            }
        }
    }

    /// Group generated by integer matrices under matrix multiplication.
    pub fn from_matrices(gens: &[(String, IntMatrix)], bound: usize) -> Result<(FiniteGroup, Vec<IntMatrix>)> {
        let dim = gens
            .first()
            .map(|(_, m)| m.dim())
            .ok_or_else(|| Error::input("at least one generator is required"))?;
        if gens.iter().any(|(_, m)| m.dim() != dim) {
            return Err(Error::input("generator matrices have mixed dimensions"));
        }
        for (name, m) in gens {
            if m.det().abs() != 1 {
                return Err(Error::input(format!("generator {name} is not invertible over Z")));
            }
        }
        FiniteGroup::generate(gens, IntMatrix::identity(dim), |a, b| a.mul(b), bound)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `k a k⁻¹`.
    pub fn conjugate(&self, k: usize, a: usize) -> usize {
        self.mul(self.mul(k, a), self.inverse[k])
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse[a] } else { a };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn word(&self, a: usize) -> &[usize] {
        &self.words[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.orders
            .iter()
            .fold(1, |acc, &o| num_integer::lcm(acc, o))
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exhaustive `(ab)c == a(bc)`; `O(n³)`.
    pub fn verify_associative(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::input(format!(
                            "Cayley table is not associative at ({}, {}, {})",
                            self.names[a], self.names[b], self.names[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses an element name or a word such as `SR^3`, `R^-1`, `S·R` or `E`.
    pub fn element_from_word(&self, word: &str) -> Result<usize> {
        let word = word.trim();
        if let Some(i) = self.names.iter().position(|n| n == word) {
            return Ok(i);
        }
        if matches!(word, "E" | "e" | "1" | "") {
            return Ok(0);
        }
        let mut by_len: Vec<(usize, &String)> = self.generator_names.iter().enumerate().collect();
        by_len.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));
        let mut rest = word;
        let mut acc = 0;
        let bad = || Error::input(format!("cannot parse group word {word:?}"));
        while !rest.is_empty() {
            rest = rest.trim_start_matches(['·', '*', ' ']);
            if rest.is_empty() {
                break;
            }
            let (gi, name) = by_len
                .iter()
                .find(|(_, n)| rest.starts_with(n.as_str()))
                .ok_or_else(bad)?;
            rest = &rest[name.len()..];
            let mut exp = 1i64;
            if let Some(after) = rest.strip_prefix('^') {
                let end = after
                    .char_indices()
                    .find(|(i, c)| !(c.is_ascii_digit() || (*i == 0 && *c == '-')))
                    .map(|(i, _)| i)
                    .unwrap_or(after.len());
                exp = after[..end].parse().map_err(|_| bad())?;
                rest = &after[end..];
            }
            acc = self.mul(acc, self.pow(self.generators[*gi], exp));
        }
        Ok(acc)
    }

    /// JSON-friendly Cayley table.
    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order,
            generators: self.generator_names.clone(),
            elements: self.names.clone(),
            table: (0..self.order)
                .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
                .collect(),
        }
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroup(order {}, generators [{}])",
            self.order,
            self.generator_names.join(", ")
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupJson {
    pub order: usize,
    pub generators: Vec<String>,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

/// Collapses repeated generators into powers: `[S, R, R, R]` → `SR^3`.
pub(crate) fn render_word(word: &[usize], names: &[String]) -> String {
    if word.is_empty() {
        return "E".to_string();
    }
    let sep = if names.iter().all(|n| n.chars().count() == 1) {
        ""
    } else {
        "·"
    };
    let mut parts = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        let name = &names[word[i]];
        parts.push(if j - i == 1 {
            name.clone()
        } else {
            format!("{name}^{}", j - i)
        });
        i = j;
    }
    parts.join(sep)
}

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::input("matrix must be square and non-empty"));
        }
        Ok(IntMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        IntMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        IntMatrix { dim: n, entries }
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.dim;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j);
            }
        }
        IntMatrix { dim: n, entries }
    }

    /// `M·v` for a rational vector.
    pub fn apply(&self, v: &[crate::exactnum::Rat]) -> Vec<crate::exactnum::Rat> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| v[j] * crate::exactnum::Rat::from_integer(self.get(i, j)))
                    .sum()
            })
            .collect()
    }

    /// Inverse over Z, if the determinant is ±1.
    pub fn inverse(&self) -> Option<IntMatrix> {
        use crate::exactnum::Rat;
        use num_traits::{One, Zero};
        let n = self.dim;
        let mut m: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            Rat::from_integer(self.get(i, j))
                        } else if j - n == i {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, pivot);
            let p = m[col][col];
            for x in m[col].iter_mut() {
                *x /= p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col];
                    for j in 0..2 * n {
                        let sub = f * m[col][j];
                        m[r][j] -= sub;
                    }
                }
            }
        }
        let rows = m
            .iter()
            .map(|r| {
                r[n..]
                    .iter()
                    .map(|x| x.is_integer().then(|| x.to_integer()))
                    .collect::<Option<Vec<i64>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        IntMatrix::new(rows).ok()
    }

    /// Determinant by cofactor expansion (small dimensions only).
    pub fn det(&self) -> i64 {
        fn det_rec(m: &[Vec<i64>]) -> i64 {
            match m.len() {
                1 => m[0][0],
                2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
                n => (0..n)
                    .map(|j| {
                        let minor: Vec<Vec<i64>> = m[1..]
                            .iter()
                            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                            .collect();
                        let sign = if j % 2 == 0 { 1 } else { -1 };
                        sign * m[0][j] * det_rec(&minor)
                    })
                    .sum(),
            }
        }
        det_rec(&self.rows())
    }
}

/// A bijection `a → b` preserving multiplication, if one exists.
///
/// Backtracks over images of `a`'s generators, restricted to elements of the
/// same order, and checks the induced map exhaustively.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() {
        return None;
    }
    let mut a_profile: Vec<usize> = (0..a.order()).map(|x| a.element_order(x)).collect();
    let mut b_profile: Vec<usize> = (0..b.order()).map(|x| b.element_order(x)).collect();
    a_profile.sort_unstable();
    b_profile.sort_unstable();
    if a_profile != b_profile {
        return None;
    }
    let gens = a.generators().to_vec();
    let mut images = vec![0usize; gens.len()];
    search_images(a, b, &gens, &mut images, 0)
}

fn search_images(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    images: &mut Vec<usize>,
    depth: usize,
) -> Option<Vec<usize>> {
    if depth == gens.len() {
        return induced_isomorphism(a, b, images);
    }
    for cand in 0..b.order() {
        if b.element_order(cand) != a.element_order(gens[depth]) {
            continue;
        }
        images[depth] = cand;
        if let Some(map) = search_images(a, b, gens, images, depth + 1) {
            return Some(map);
        }
    }
    None
}

/// Extends generator images along words and checks the result is an isomorphism.
pub fn induced_isomorphism(a: &FiniteGroup, b: &FiniteGroup, images: &[usize]) -> Option<Vec<usize>> {
    let map: Vec<usize> = (0..a.order())
        .map(|x| a.word(x).iter().fold(0, |acc, &g| b.mul(acc, images[g])))
        .collect();
    let mut seen = vec![false; b.order()];
    for &y in &map {
        if std::mem::replace(&mut seen[y], true) {
            return None;
        }
    }
    for x in 0..a.order() {
        for y in 0..a.order() {
            if map[a.mul(x, y)] != b.mul(map[x], map[y]) {
                return None;
            }
        }
    }
    Some(map)
}

/// Shared handle used throughout the crate.
pub type GroupRef = Arc<FiniteGroup>;
