use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{FiniteGroup, GroupRef};
use crate::error::{Error, Result};

/// A subgroup of a parent group, together with its own Cayley table.
///
/// The subgroup's elements are labelled by ascending parent label, so nested
/// subgroups built from the same element set always produce identical groups.
/// Element names are inherited from the parent.
#[derive(Clone)]
pub struct Subgroup {
    parent: GroupRef,
    elements: Vec<usize>,
    group: GroupRef,
}

impl Subgroup {
    /// Subgroup with exactly the given parent elements; they must be closed.
    pub fn new(parent: GroupRef, elements: &[usize]) -> Result<Subgroup> {
        let mut elements = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::input("subgroup must contain the identity"));
        }
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        for &a in &elements {
            if !set.contains(&parent.inv(a)) || elements.iter().any(|&b| !set.contains(&parent.mul(a, b))) {
                return Err(Error::input("element set is not closed under the group law"));
            }
        }
        let group = Arc::new(sub_table(&parent, &elements));
        Ok(Subgroup {
            parent,
            elements,
            group,
        })
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated(parent: GroupRef, gens: &[usize]) -> Subgroup {
        let elements = closure(&parent, gens);
        Subgroup::new(parent, &elements).expect("closure is a subgroup")
    }

    pub fn whole(parent: GroupRef) -> Subgroup {
        let all: Vec<usize> = (0..parent.order()).collect();
        Subgroup::new(parent, &all).expect("whole group")
    }

    pub fn trivial(parent: GroupRef) -> Subgroup {
        Subgroup::new(parent, &[0]).expect("trivial group")
    }

    pub fn parent(&self) -> &GroupRef {
        &self.parent
    }

    /// The subgroup as a group in its own right.
    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    /// Parent labels, ascending; position `i` is the subgroup's element `i`.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, parent_elem: usize) -> bool {
        self.elements.binary_search(&parent_elem).is_ok()
    }

    /// Subgroup label of a parent element.
    pub fn position(&self, parent_elem: usize) -> Option<usize> {
        self.elements.binary_search(&parent_elem).ok()
    }

    /// Parent label of a subgroup element.
    pub fn embed(&self, sub_elem: usize) -> usize {
        self.elements[sub_elem]
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.elements.iter().all(|&e| other.contains(e))
    }

    /// `self` viewed as a subgroup of `outer.group()`.
    pub fn within(&self, outer: &Subgroup) -> Result<Subgroup> {
        if !self.is_subset_of(outer) {
            return Err(Error::input("not contained in the outer subgroup"));
        }
        let inner: Vec<usize> = self
            .elements
            .iter()
            .map(|&e| outer.position(e).unwrap())
            .collect();
        Subgroup::new(outer.group.clone(), &inner)
    }

    /// Parent names of the subgroup's generators.
    pub fn generator_words(&self) -> Vec<String> {
        self.group
            .generators()
            .iter()
            .map(|&g| self.parent.name(self.embed(g)).to_string())
            .collect()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words = self.generator_words();
        if words.is_empty() {
            f.write_str("<E>")
        } else {
            write!(f, "<{}>", words.join(","))
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn closure(parent: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([0]);
    let mut frontier = vec![0usize];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = parent.mul(x, g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

fn sub_table(parent: &FiniteGroup, elements: &[usize]) -> FiniteGroup {
    let n = elements.len();
    let pos = |p: usize| elements.binary_search(&p).expect("closed subset");
    let mut table = vec![0u32; n * n];
    for (i, &a) in elements.iter().enumerate() {
        for (j, &b) in elements.iter().enumerate() {
            table[i * n + j] = pos(parent.mul(a, b)) as u32;
        }
    }
    // Greedy generating set in ascending parent order.
    let mut gens: Vec<usize> = Vec::new();
    let mut span: BTreeSet<usize> = BTreeSet::from([0]);
    for &e in elements.iter().skip(1) {
        if !span.contains(&e) {
            gens.push(e);
            span = closure(parent, &gens).into_iter().collect();
        }
    }
    let generator_names = gens.iter().map(|&g| parent.name(g).to_string()).collect();
    let generators = gens.iter().map(|&g| pos(g)).collect();
    let names = elements.iter().map(|&e| parent.name(e).to_string()).collect();
    FiniteGroup::from_table(table, generators, generator_names, names).expect("subgroup table")
}

/// `{ k l k⁻¹ : l ∈ L }`, with the bijection from `L`'s labels to the result's.
pub fn conjugate_subgroup(k: usize, sub: &Subgroup) -> (Subgroup, Vec<usize>) {
    let parent = sub.parent.clone();
    let images: Vec<usize> = sub.elements.iter().map(|&l| parent.conjugate(k, l)).collect();
    let conj = Subgroup::new(parent, &images).expect("conjugate of a subgroup");
    let bijection = images.iter().map(|&i| conj.position(i).unwrap()).collect();
    (conj, bijection)
}

/// Every subgroup of `g`, ordered by (order, element list).
pub fn all_subgroups(g: &GroupRef) -> Vec<Subgroup> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    let cyclic: Vec<Vec<usize>> = (0..g.order()).map(|a| closure(g, &[a])).collect();
    for c in &cyclic {
        found.insert(c.clone());
    }
    loop {
        let current: Vec<Vec<usize>> = found.iter().cloned().collect();
        let mut grew = false;
        for a in &current {
            for c in &cyclic {
                let mut gens = a.clone();
                gens.extend(c.iter().copied());
                let joined = closure(g, &gens);
                grew |= found.insert(joined);
            }
        }
        if !grew {
            break;
        }
    }
    let mut subs: Vec<Vec<usize>> = found.into_iter().collect();
    subs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subs.into_iter()
        .map(|e| Subgroup::new(g.clone(), &e).unwrap())
        .collect()
}
