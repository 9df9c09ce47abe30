//! Decomposition of a planar fundamental domain into pieces of constant
//! stabilizer.
//!
//! Every non-identity point-group element `X` fixes `{z : (X^{-T} − 1)z ∈ Z²}`,
//! a lattice of points (rank 2) or a family of parallel lines (rank 1).
//! Cutting the domain along all such lines gives convex faces; their open
//! edges and vertices, plus isolated fixed points, are cells of constant
//! stabilizer. Incident cells with equal stabilizers are then merged.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::SymbolicPhase;
use crate::crystal::{CrystalGroup, TorusPoint};
use crate::error::{Error, Result};
use crate::exactnum::{format_rat, parse_rat, Phase, Rat};
use crate::groups::Subgroup;
use crate::twisted::{omega_irreps, OmegaRep, TwoCocycle};

/// A point of the plane (not reduced mod Z²).
pub type Pt = [Rat; 2];

fn sub(a: &Pt, b: &Pt) -> Pt {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: &Pt, b: &Pt) -> Rat {
    a[0] * b[1] - a[1] * b[0]
}

fn lerp(a: &Pt, b: &Pt, t: Rat) -> Pt {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

fn torus(p: &Pt) -> TorusPoint {
    TorusPoint::new(p.to_vec())
}

fn format_pt(p: &Pt) -> Vec<String> {
    p.iter().map(format_rat).collect()
}

/// A convex polygon with positive area, vertices counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Pt>,
}

/// `{"vertices": [["num/den", "num/den"], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DomainJson {
    pub vertices: Vec<[String; 2]>,
}

impl Polygon {
    pub fn new(vertices: Vec<Pt>) -> Result<Polygon> {
        let mut v = vertices;
        v.dedup();
        if v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        if v.len() < 3 {
            return Err(Error::input("domain needs at least three distinct vertices"));
        }
        let area: Rat = (0..v.len()).map(|i| cross(&v[i], &v[(i + 1) % v.len()])).sum();
        if area.is_zero() {
            return Err(Error::input("domain is not full-dimensional"));
        }
        if area.is_negative() {
            v.reverse();
        }
        let n = v.len();
        for i in 0..n {
            let turn = cross(&sub(&v[(i + 1) % n], &v[i]), &sub(&v[(i + 2) % n], &v[(i + 1) % n]));
            if turn.is_negative() {
                return Err(Error::input("domain must be convex"));
            }
        }
        // Drop vertices in the middle of straight runs.
        let keep: Vec<Pt> = (0..n)
            .filter(|&i| {
                let prev = &v[(i + n - 1) % n];
                !cross(&sub(&v[i], prev), &sub(&v[(i + 1) % n], &v[i])).is_zero()
            })
            .map(|i| v[i])
            .collect();
        Ok(Polygon { vertices: keep })
    }

    pub fn from_fractions(vertices: &[[(i64, i64); 2]]) -> Result<Polygon> {
        Polygon::new(
            vertices
                .iter()
                .map(|[a, b]| [Rat::new(a.0, a.1), Rat::new(b.0, b.1)])
                .collect(),
        )
    }

    pub fn from_json(json: &DomainJson) -> Result<Polygon> {
        let vertices = json
            .vertices
            .iter()
            .map(|[a, b]| Ok([parse_rat(a)?, parse_rat(b)?]))
            .collect::<Result<Vec<_>>>()?;
        Polygon::new(vertices)
    }

    /// The closed unit square.
    pub fn unit_square() -> Polygon {
        Polygon::from_fractions(&[[(0, 1), (0, 1)], [(1, 1), (0, 1)], [(1, 1), (1, 1)], [(0, 1), (1, 1)]])
            .expect("square")
    }

    pub fn vertices(&self) -> &[Pt] {
        &self.vertices
    }

    /// Closed containment.
    pub fn contains(&self, p: &Pt) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| !cross(&sub(&self.vertices[(i + 1) % n], &self.vertices[i]), &sub(p, &self.vertices[i])).is_negative())
    }

    /// Strict interior containment.
    pub fn contains_strictly(&self, p: &Pt) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(&sub(&self.vertices[(i + 1) % n], &self.vertices[i]), &sub(p, &self.vertices[i])).is_positive())
    }

    fn on_boundary(&self, p: &Pt) -> bool {
        self.contains(p) && !self.contains_strictly(p)
    }

    /// Splits along `a·z = c` when the line crosses the interior.
    fn split(&self, line: &Line) -> Option<(Polygon, Polygon)> {
        let side: Vec<Rat> = self.vertices.iter().map(|p| line.eval(p)).collect();
        if !side.iter().any(Signed::is_positive) || !side.iter().any(Signed::is_negative) {
            return None;
        }
        let n = self.vertices.len();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for i in 0..n {
            let (p, q) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
            let (sp, sq) = (side[i], side[(i + 1) % n]);
            if !sp.is_negative() {
                pos.push(*p);
            }
            if !sp.is_positive() {
                neg.push(*p);
            }
            if (sp.is_positive() && sq.is_negative()) || (sp.is_negative() && sq.is_positive()) {
                let x = lerp(p, q, sp / (sp - sq));
                pos.push(x);
                neg.push(x);
            }
        }
        Some((Polygon::new(pos).ok()?, Polygon::new(neg).ok()?))
    }

    /// A rational interior point avoiding `avoid`.
    fn interior_sample(&self, avoid: &BTreeSet<Pt>) -> Pt {
        let n = self.vertices.len() as i64;
        for bump in 0..n + 2 {
            let weights: Vec<i64> = (0..n).map(|i| if i == bump % n { 2 + bump / n } else { 1 }).collect();
            let total: i64 = weights.iter().sum();
            let mut p = [Rat::zero(), Rat::zero()];
            for (v, w) in self.vertices.iter().zip(&weights) {
                p[0] += v[0] * Rat::new(*w, total);
                p[1] += v[1] * Rat::new(*w, total);
            }
            if !avoid.contains(&p) {
                return p;
            }
        }
        unreachable!("finitely many points to avoid")
    }
}

/// `a·z = c` with `a` a nonzero integer vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Line {
    a: [i64; 2],
    c: Rat,
}

impl Line {
    fn eval(&self, p: &Pt) -> Rat {
        Rat::from_integer(self.a[0]) * p[0] + Rat::from_integer(self.a[1]) * p[1] - self.c
    }
}

fn dot(a: [i64; 2], p: &Pt) -> Rat {
    Rat::from_integer(a[0]) * p[0] + Rat::from_integer(a[1]) * p[1]
}

/// Integer range `[ceil(lo), floor(hi)]`.
fn integers_between(lo: Rat, hi: Rat) -> std::ops::RangeInclusive<i64> {
    lo.ceil().to_integer()..=hi.floor().to_integer()
}

/// Fixed lines and isolated fixed points of the non-identity elements.
fn fixed_loci(group: &CrystalGroup, domain: &Polygon) -> (BTreeSet<Line>, BTreeSet<Pt>) {
    let mut lines = BTreeSet::new();
    let mut points = BTreeSet::new();
    for x in 1..group.point_group().order() {
        let d = group.dual_matrix(x);
        let a = [[d.get(0, 0) - 1, d.get(0, 1)], [d.get(1, 0), d.get(1, 1) - 1]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let rows = [[a[0][0], a[0][1]], [a[1][0], a[1][1]]];
        if det != 0 {
            // Az = m for every integer m in A·domain.
            let images: Vec<Pt> = domain.vertices.iter().map(|p| [dot(rows[0], p), dot(rows[1], p)]).collect();
            let bound = |k: usize| {
                let lo = images.iter().map(|q| q[k]).min().unwrap();
                let hi = images.iter().map(|q| q[k]).max().unwrap();
                integers_between(lo, hi)
            };
            let det = Rat::from_integer(det);
            for m0 in bound(0) {
                for m1 in bound(1) {
                    let z = [
                        Rat::from_integer(a[1][1] * m0 - a[0][1] * m1) / det,
                        Rat::from_integer(a[0][0] * m1 - a[1][0] * m0) / det,
                    ];
                    if domain.contains(&z) {
                        points.insert(z);
                    }
                }
            }
        } else if rows.iter().any(|r| *r != [0, 0]) {
            let r = *rows.iter().find(|r| **r != [0, 0]).unwrap();
            let g = r[0].gcd(&r[1]);
            let mut w = [r[0] / g, r[1] / g];
            if w[0] < 0 || (w[0] == 0 && w[1] < 0) {
                w = [-w[0], -w[1]];
            }
            // Each row is α·w; the condition is w·z ∈ (1/gcd α)Z.
            let alphas: Vec<i64> = rows
                .iter()
                .map(|r| if w[0] != 0 { r[0] / w[0] } else { r[1] / w[1] })
                .collect();
            let step = alphas.iter().fold(0i64, |acc, &al| acc.gcd(&al));
            let values: Vec<Rat> = domain.vertices.iter().map(|p| dot(w, p)).collect();
            let lo = *values.iter().min().unwrap() * Rat::from_integer(step);
            let hi = *values.iter().max().unwrap() * Rat::from_integer(step);
            for k in integers_between(lo, hi) {
                lines.insert(Line { a: w, c: Rat::new(k, step) });
            }
        }
    }
    (lines, points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumKind {
    Region,
    Segment,
    Vertex,
}

/// An open segment `z(t) = start + t·(end − start)`, `0 < t < 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    pub start: Pt,
    pub end: Pt,
}

impl Segment {
    fn new(p: Pt, q: Pt) -> Segment {
        if p <= q {
            Segment { start: p, end: q }
        } else {
            Segment { start: q, end: p }
        }
    }

    pub fn at(&self, t: Rat) -> Pt {
        lerp(&self.start, &self.end, t)
    }

    pub fn direction(&self) -> Pt {
        sub(&self.end, &self.start)
    }

    fn contains_strictly(&self, p: &Pt) -> bool {
        let d = self.direction();
        let rel = sub(p, &self.start);
        if !cross(&d, &rel).is_zero() {
            return false;
        }
        let t = if d[0].is_zero() { rel[1] / d[1] } else { rel[0] / d[0] };
        t.is_positive() && t < Rat::one()
    }
}

/// A maximal connected piece of the domain with constant stabilizer.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub kind: StratumKind,
    pub label: String,
    pub stabilizer: Subgroup,
    /// A rational point of the stratum used for sampling.
    pub sample: TorusPoint,
    pub vertices: Vec<Pt>,
    pub segments: Vec<Segment>,
    pub faces: Vec<Polygon>,
}

impl Stratum {
    /// Stabilizer generators as parent words.
    pub fn generator_words(&self) -> Vec<String> {
        self.stabilizer.generator_words()
    }

    /// Non-trivial cocycle entries on this stratum, with values symbolic in
    /// the segment parameter `t` or in the coordinates `(z1, z2)` of a region.
    pub fn cocycle_table(&self, group: &CrystalGroup) -> Vec<[String; 3]> {
        let stab = &self.stabilizer;
        let k = group.point_group();
        let mut out = Vec::new();
        for a in stab.elements() {
            for b in stab.elements() {
                let d = group.del_c(*a, *b).expect("validated section");
                let sym = match self.kind {
                    StratumKind::Vertex => SymbolicPhase::constant(torus(&self.vertices[0]).character(&d).q()),
                    StratumKind::Segment => {
                        let s = &self.segments[0];
                        SymbolicPhase::along(&s.start, &s.direction(), &d)
                    }
                    StratumKind::Region => SymbolicPhase::linear(&d),
                };
                if !sym.is_one() {
                    out.push([k.name(*a).to_string(), k.name(*b).to_string(), sym.to_string()]);
                }
            }
        }
        out
    }

    /// Representation families along the first segment, one per branch.
    pub fn families(&self, group: &CrystalGroup) -> Result<Vec<SegmentFamily>> {
        match (self.kind, self.segments.first()) {
            (StratumKind::Segment, Some(seg)) => SegmentFamily::all(group, seg, &self.stabilizer),
            _ => Ok(Vec::new()),
        }
    }

    /// Whether some lattice translate of `z` lies in the stratum itself
    /// (vertices, open segments, open faces).
    pub fn contains_mod_lattice(&self, z: &TorusPoint) -> bool {
        let c = z.coords();
        (-2i64..=2).any(|a| {
            (-2i64..=2).any(|b| {
                let p = [c[0] + Rat::from_integer(a), c[1] + Rat::from_integer(b)];
                self.vertices.contains(&p)
                    || self.segments.iter().any(|s| s.contains_strictly(&p))
                    || self.faces.iter().any(|f| f.contains_strictly(&p))
            })
        })
    }

    pub fn to_json(&self) -> StratumJson {
        StratumJson {
            label: self.label.clone(),
            kind: self.kind,
            stabilizer: self.stabilizer.elements().iter().map(|&e| self.stabilizer.parent().name(e).to_string()).collect(),
            generators: self.generator_words(),
            sample: self.sample.to_strings(),
            vertices: self.vertices.iter().map(format_pt).collect(),
            segments: self.segments.iter().map(|s| [format_pt(&s.start), format_pt(&s.end)]).collect(),
            faces: self.faces.iter().map(|f| f.vertices.iter().map(format_pt).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StratumJson {
    pub label: String,
    pub kind: StratumKind,
    pub stabilizer: Vec<String>,
    pub generators: Vec<String>,
    pub sample: Vec<String>,
    pub vertices: Vec<Vec<String>>,
    pub segments: Vec<[Vec<String>; 2]>,
    pub faces: Vec<Vec<Vec<String>>>,
}

/// ω-reps along a segment with cyclic stabilizer `⟨Y⟩` of order `m`:
/// `σ_t(Y) = e^{2πi(q₀ + k + q₁t)/m}`, from `σ(Y)^m = ∏_{j<m} ω(Y, Y^j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentFamily {
    pub segment: Segment,
    pub stabilizer: Subgroup,
    /// Parent label of the stabilizer generator `Y`.
    pub generator: usize,
    pub order: u32,
    pub branch: u32,
    /// Exponent of `σ_t(Y)` as `offset + slope·t`.
    pub offset: Rat,
    pub slope: Rat,
}

impl SegmentFamily {
    /// Every branch, lex-first (`k = 0`) first. Empty unless the stabilizer is cyclic.
    pub fn all(group: &CrystalGroup, segment: &Segment, stabilizer: &Subgroup) -> Result<Vec<SegmentFamily>> {
        let k = group.point_group();
        let Some(&y) = stabilizer
            .elements()
            .iter()
            .find(|&&e| k.element_order(e) == stabilizer.order())
        else {
            return Ok(Vec::new());
        };
        let m = stabilizer.order() as i64;
        let (mut q0, mut q1) = (Rat::zero(), Rat::zero());
        let dir = segment.direction();
        let mut power = y;
        for _ in 1..m {
            let d = group.del_c(y, power)?;
            q0 += dot_rat(&segment.start, &d);
            q1 += dot_rat(&dir, &d);
            power = k.mul(power, y);
        }
        Ok((0..m)
            .map(|branch| SegmentFamily {
                segment: segment.clone(),
                stabilizer: stabilizer.clone(),
                generator: y,
                order: m as u32,
                branch: branch as u32,
                offset: (q0 + Rat::from_integer(branch)) / Rat::from_integer(m),
                slope: q1 / Rat::from_integer(m),
            })
            .collect())
    }

    /// `σ_t(Y)`.
    pub fn generator_value(&self, t: Rat) -> Phase {
        Phase::new(self.offset + self.slope * t)
    }

    pub fn point(&self, t: Rat) -> TorusPoint {
        torus(&self.segment.at(t))
    }

    /// `σ_t` as an `ω_{z(t)}|L`-rep; `t = 0, 1` give the limit reps at the endpoints.
    pub fn evaluate(&self, group: &CrystalGroup, t: Rat) -> Result<OmegaRep> {
        let w: TwoCocycle = group.cocycle_on(&self.point(t), &self.stabilizer);
        let y = self.stabilizer.position(self.generator).expect("generator in stabilizer");
        let want = crate::exactnum::Cyclo::from_phase(&self.generator_value(t))?;
        omega_irreps(&w)?
            .into_iter()
            .find(|r| *r.twisted_value(y) == want)
            .ok_or_else(|| Error::input("segment family value is not an ω-rep value"))
    }

    /// Display form of `σ_t(Y)`.
    pub fn describe(&self, group: &CrystalGroup) -> String {
        let sym = SymbolicPhase {
            constant: self.offset,
            coeffs: vec![(self.slope, "t".to_string())],
        };
        format!("{} ↦ {}", group.point_group().name(self.generator), sym)
    }
}

fn dot_rat(p: &Pt, d: &[i64]) -> Rat {
    p[0] * Rat::from_integer(d[0]) + p[1] * Rat::from_integer(d[1])
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

enum Cell {
    Vertex(Pt),
    Segment(Segment),
    Face(Polygon, Pt),
}

/// Strata of a convex planar domain. Requires dimension 2.
pub fn stratify(group: &CrystalGroup, domain: &Polygon) -> Result<Vec<Stratum>> {
    if group.dimension() != 2 {
        return Err(Error::input("stratify needs a two-dimensional lattice"));
    }
    let (lines, isolated) = fixed_loci(group, domain);
    let mut faces = vec![domain.clone()];
    for line in &lines {
        faces = faces
            .into_iter()
            .flat_map(|f| match f.split(line) {
                Some((a, b)) => vec![a, b],
                None => vec![f],
            })
            .collect();
    }

    let mut vertices: BTreeSet<Pt> = isolated;
    for f in &faces {
        vertices.extend(f.vertices.iter().copied());
    }
    let mut segments: BTreeSet<Segment> = BTreeSet::new();
    for f in &faces {
        let n = f.vertices.len();
        for i in 0..n {
            let seg = Segment::new(f.vertices[i], f.vertices[(i + 1) % n]);
            let mut cuts: Vec<Pt> = vertices.iter().filter(|v| seg.contains_strictly(v)).copied().collect();
            cuts.push(seg.start);
            cuts.push(seg.end);
            cuts.sort();
            for w in cuts.windows(2) {
                segments.insert(Segment::new(w[0], w[1]));
            }
        }
    }

    let mut cells: Vec<Cell> = Vec::new();
    cells.extend(vertices.iter().map(|v| Cell::Vertex(*v)));
    cells.extend(segments.iter().map(|s| Cell::Segment(s.clone())));
    for f in faces {
        let sample = f.interior_sample(&vertices);
        cells.push(Cell::Face(f, sample));
    }
    let samples: Vec<Pt> = cells
        .iter()
        .map(|c| match c {
            Cell::Vertex(v) => *v,
            Cell::Segment(s) => s.at(Rat::new(1, 2)),
            Cell::Face(_, p) => *p,
        })
        .collect();
    let stabs: Vec<Subgroup> = samples.iter().map(|p| group.stabilizer(&torus(p))).collect();

    let mut uf = UnionFind((0..cells.len()).collect());
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if stabs[i] == stabs[j] && incident(&cells[i], &cells[j]) {
                uf.union(i, j);
            }
        }
    }

    let mut strata: Vec<Stratum> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..cells.len() {
        let r = uf.find(i);
        let idx = match roots.iter().position(|&x| x == r) {
            Some(idx) => idx,
            None => {
                roots.push(r);
                strata.push(Stratum {
                    kind: StratumKind::Vertex,
                    label: String::new(),
                    stabilizer: stabs[i].clone(),
                    sample: torus(&samples[i]),
                    vertices: Vec::new(),
                    segments: Vec::new(),
                    faces: Vec::new(),
                });
                strata.len() - 1
            }
        };
        let s = &mut strata[idx];
        match &cells[i] {
            Cell::Vertex(v) => s.vertices.push(*v),
            Cell::Segment(seg) => s.segments.push(seg.clone()),
            Cell::Face(f, _) => s.faces.push(f.clone()),
        }
    }
    for s in &mut strata {
        s.kind = if !s.faces.is_empty() {
            StratumKind::Region
        } else if !s.segments.is_empty() {
            StratumKind::Segment
        } else {
            StratumKind::Vertex
        };
        s.sample = match s.kind {
            StratumKind::Region => torus(&s.faces[0].interior_sample(&vertices)),
            StratumKind::Segment => torus(&s.segments[0].at(Rat::new(1, 2))),
            StratumKind::Vertex => torus(&s.vertices[0]),
        };
    }
    strata.sort_by(|a, b| {
        let key = |s: &Stratum| {
            let first = match s.kind {
                StratumKind::Vertex => s.vertices[0],
                StratumKind::Segment => s.segments[0].start,
                StratumKind::Region => s.faces[0].vertices[0],
            };
            (s.kind, first, s.segments.first().map(|x| x.end))
        };
        key(a).cmp(&key(b))
    });
    label_strata(group, &mut strata);
    Ok(strata)
}

/// Groups strata into orbits of the point group acting on the torus.
///
/// Two strata are in one class when some `X·sample` lies in the other
/// stratum up to a lattice shift. Classes are listed by first member.
pub fn orbit_classes(group: &CrystalGroup, strata: &[Stratum]) -> Vec<Vec<usize>> {
    let k = group.point_group();
    let mut class_of: Vec<Option<usize>> = vec![None; strata.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..strata.len() {
        if class_of[i].is_some() {
            continue;
        }
        let c = classes.len();
        classes.push(vec![i]);
        class_of[i] = Some(c);
        let images: Vec<TorusPoint> = (0..k.order()).map(|x| group.act_on(x, &strata[i].sample)).collect();
        for j in i + 1..strata.len() {
            if class_of[j].is_none() && strata[j].kind == strata[i].kind && images.iter().any(|z| strata[j].contains_mod_lattice(z)) {
                classes[c].push(j);
                class_of[j] = Some(c);
            }
        }
    }
    classes
}

fn incident(a: &Cell, b: &Cell) -> bool {
    match (a, b) {
        (Cell::Vertex(v), Cell::Segment(s)) | (Cell::Segment(s), Cell::Vertex(v)) => s.start == *v || s.end == *v,
        (Cell::Vertex(v), Cell::Face(f, _)) | (Cell::Face(f, _), Cell::Vertex(v)) => f.contains(v),
        (Cell::Segment(s), Cell::Face(f, _)) | (Cell::Face(f, _), Cell::Segment(s)) => {
            f.on_boundary(&s.at(Rat::new(1, 2)))
        }
        _ => false,
    }
}

/// Region strata are `Z_int` (single) or `Z{i}`, segments `S_{i}`, vertices `z_{i}`,
/// numbered in sort order. The p4g triangle gets the classical numbering.
fn label_strata(group: &CrystalGroup, strata: &mut [Stratum]) {
    let regions = strata.iter().filter(|s| s.kind == StratumKind::Region).count();
    let (mut r, mut e, mut v) = (0, 0, 0);
    for s in strata.iter_mut() {
        s.label = match s.kind {
            StratumKind::Region if regions == 1 => "Z_int".to_string(),
            StratumKind::Region => {
                r += 1;
                format!("Z_{}", r - 1)
            }
            StratumKind::Segment => {
                e += 1;
                format!("S_{e}")
            }
            StratumKind::Vertex => {
                v += 1;
                format!("z_{}", v - 1)
            }
        };
    }
    if !group.is_p4g() {
        return;
    }
    for s in strata.iter_mut() {
        let gens = s.generator_words();
        let z = &s.sample;
        let named = match (s.kind, gens.as_slice()) {
            (StratumKind::Segment, [g]) if g == "SR^3" => Some("S_1"),
            (StratumKind::Segment, [g]) if g == "SR^2" => Some("S_2"),
            (StratumKind::Segment, [g]) if g == "S" => Some("S_3"),
            (StratumKind::Vertex, _) if *z == TorusPoint::from_fractions(&[(0, 1), (0, 1)]) => Some("z_0"),
            (StratumKind::Vertex, _) if *z == TorusPoint::from_fractions(&[(0, 1), (1, 2)]) => Some("z_1"),
            (StratumKind::Vertex, _) if *z == TorusPoint::from_fractions(&[(1, 2), (1, 2)]) => Some("z_2"),
            _ => None,
        };
        if let Some(name) = named {
            s.label = name.to_string();
        }
    }
    strata.sort_by(|a, b| (a.kind, &a.label).cmp(&(b.kind, &b.label)));
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> Polygon {
        Polygon::from_fractions(&[[(0, 1), (0, 1)], [(0, 1), (1, 2)], [(1, 2), (1, 2)]]).unwrap()
    }

    #[test]
    fn polygon_validation() {
        assert!(Polygon::from_fractions(&[[(0, 1), (0, 1)], [(1, 1), (1, 1)], [(2, 1), (2, 1)]]).is_err());
        let bowtie = [[(0, 1), (0, 1)], [(1, 1), (1, 1)], [(1, 1), (0, 1)], [(0, 1), (1, 1)]];
        assert!(Polygon::from_fractions(&bowtie).is_err());
        let cw = Polygon::from_fractions(&[[(0, 1), (0, 1)], [(0, 1), (1, 1)], [(1, 1), (0, 1)]]).unwrap();
        assert!(cw.contains_strictly(&[Rat::new(1, 4), Rat::new(1, 4)]));
    }

    #[test]
    fn square_reduces_to_the_triangle_classes() {
        let g = CrystalGroup::p4g();
        let content = |domain: &Polygon| {
            let strata = stratify(&g, domain).unwrap();
            let mut keys: Vec<(StratumKind, usize)> = orbit_classes(&g, &strata)
                .iter()
                .map(|c| (strata[c[0]].kind, strata[c[0]].stabilizer.order()))
                .collect();
            keys.sort();
            keys
        };
        let tri = content(&triangle());
        assert_eq!(tri.len(), 7);
        assert_eq!(content(&Polygon::unit_square()), tri);
    }

    #[test]
    fn p4g_triangle_has_seven_strata() {
        let g = CrystalGroup::p4g();
        let strata = stratify(&g, &triangle()).unwrap();
        let summary: Vec<(String, StratumKind, Vec<String>)> =
            strata.iter().map(|s| (s.label.clone(), s.kind, s.generator_words())).collect();
        let expect = |l: &str, k, gens: &[&str]| (l.to_string(), k, gens.iter().map(|s| s.to_string()).collect());
        assert_eq!(
            summary,
            vec![
                expect("Z_int", StratumKind::Region, &[]),
                expect("S_1", StratumKind::Segment, &["SR^3"]),
                expect("S_2", StratumKind::Segment, &["SR^2"]),
                expect("S_3", StratumKind::Segment, &["S"]),
                expect("z_0", StratumKind::Vertex, &["R", "S"]),
                expect("z_1", StratumKind::Vertex, &["S", "R^2"]),
                expect("z_2", StratumKind::Vertex, &["R", "S"]),
            ]
        );
    }

    #[test]
    fn trivial_point_group_gives_one_stratum() {
        let g = CrystalGroup::from_json_str(r#"{"name": "p1", "dimension": 2, "generators": []}"#).unwrap();
        let strata = stratify(&g, &Polygon::unit_square()).unwrap();
        assert_eq!(strata.len(), 1);
        assert_eq!(strata[0].kind, StratumKind::Region);
        assert_eq!(strata[0].vertices.len(), 4);
        assert_eq!(strata[0].segments.len(), 4);
    }

    #[test]
    fn strata_have_constant_stabilizers() {
        let g = CrystalGroup::p4g();
        for domain in [triangle(), Polygon::unit_square()] {
            for s in stratify(&g, &domain).unwrap() {
                for seg in &s.segments {
                    for t in [Rat::new(1, 3), Rat::new(1, 7), Rat::new(5, 6)] {
                        assert_eq!(g.stabilizer(&torus(&seg.at(t))), s.stabilizer);
                    }
                }
                for f in &s.faces {
                    let v = &f.vertices;
                    for w in [(1, 1, 1), (1, 2, 3), (5, 1, 1)] {
                        let tot = Rat::from_integer(w.0 + w.1 + w.2);
                        let p = [
                            (v[0][0] * w.0 + v[1][0] * w.1 + v[2][0] * w.2) / tot,
                            (v[0][1] * w.0 + v[1][1] * w.1 + v[2][1] * w.2) / tot,
                        ];
                        assert_eq!(g.stabilizer(&torus(&p)), s.stabilizer);
                    }
                }
            }
        }
    }

    #[test]
    fn isolated_fixed_points_become_vertices() {
        // p4: rotations only, so fixed points of R and R² are isolated.
        let g = CrystalGroup::from_json_str(
            r#"{"name": "p4", "dimension": 2,
                "generators": [{"name": "R", "matrix": [[0,-1],[1,0]], "translation": ["0","0"]}]}"#,
        )
        .unwrap();
        let strata = stratify(&g, &Polygon::unit_square()).unwrap();
        let orders: Vec<(StratumKind, usize)> = strata.iter().map(|s| (s.kind, s.stabilizer.order())).collect();
        assert!(orders.contains(&(StratumKind::Vertex, 4)));
        assert!(orders.contains(&(StratumKind::Vertex, 2)));
        let interior = [Rat::new(1, 2), Rat::new(1, 2)];
        assert!(strata.iter().any(|s| s.kind == StratumKind::Vertex && s.vertices == vec![interior]));
        assert_eq!(strata.iter().filter(|s| s.kind == StratumKind::Region).count(), 1);
    }

    #[test]
    fn segment_families_on_s3() {
        let g = CrystalGroup::p4g();
        let strata = stratify(&g, &triangle()).unwrap();
        let s3 = strata.iter().find(|s| s.label == "S_3").unwrap();
        let fams = s3.families(&g).unwrap();
        assert_eq!(fams.len(), 2);
        let i = Phase::from_fraction(1, 4);
        let limits: BTreeSet<Phase> = fams.iter().map(|f| f.generator_value(Rat::one())).collect();
        assert_eq!(limits, BTreeSet::from([i, i.inv()]));
        for f in &fams {
            // σ_t(S)² = ω_{z(t)}(S, S) = e^{-2πi s} with s = t/2.
            let t = Rat::new(1, 3);
            assert_eq!(f.generator_value(t).pow(2), Phase::new(-t / Rat::from_integer(2)));
            let rep = f.evaluate(&g, Rat::one()).unwrap();
            assert_eq!(*rep.cocycle(), g.cocycle_on(&f.point(Rat::one()), &s3.stabilizer));
        }
    }

    #[test]
    fn segment_cocycle_is_symbolic() {
        let g = CrystalGroup::p4g();
        let strata = stratify(&g, &triangle()).unwrap();
        let s2 = strata.iter().find(|s| s.label == "S_2").unwrap();
        assert_eq!(s2.cocycle_table(&g), vec![["SR^2".to_string(), "SR^2".to_string(), "e^{2πi(-1/2·t)}".to_string()]]);
    }
}
