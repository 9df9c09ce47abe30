use std::fmt::Write as _;

use mackey::chartab::{character_table, CharacterTableReport};
use mackey::crystal::{CrystalGroup, TorusPoint};
use mackey::spectrum::{fiber, orbit_classes, stratify, LimitSet, Polygon, SpectrumPoint, Stratum, StratumJson, StratumKind};
use serde::Serialize;

use crate::Format;

#[derive(Serialize)]
struct FiberEntry {
    label: String,
    degree: u32,
    values: Vec<(String, String)>,
}

impl FiberEntry {
    fn from_point(p: &SpectrumPoint) -> FiberEntry {
        FiberEntry {
            label: p.label.clone(),
            degree: p.rep.degree(),
            values: p.generator_values().into_iter().map(|(w, v)| (w, v.to_string())).collect(),
        }
    }
}

#[derive(Serialize)]
struct StratumOut {
    #[serde(flatten)]
    stratum: StratumJson,
    cocycle: Vec<[String; 3]>,
    fiber: Vec<FiberEntry>,
}

#[derive(Serialize)]
struct ClassOut {
    representative: String,
    kind: StratumKind,
    stabilizer_order: usize,
    fiber_degrees: Vec<u32>,
    members: Vec<String>,
}

#[derive(Serialize)]
struct DualOut {
    group: String,
    strata: Vec<StratumOut>,
    orbit_classes: Vec<ClassOut>,
}

fn kind_name(k: StratumKind) -> &'static str {
    match k {
        StratumKind::Region => "region",
        StratumKind::Segment => "segment",
        StratumKind::Vertex => "vertex",
    }
}

fn show_subgroup(words: &[String]) -> String {
    format!("<{}>", words.join(","))
}

/// Segment families when the stabilizer is cyclic, else the fiber at the sample.
fn stratum_fiber(g: &CrystalGroup, s: &Stratum) -> anyhow::Result<Vec<FiberEntry>> {
    let families = s.families(g)?;
    if !families.is_empty() {
        return Ok(families
            .iter()
            .map(|f| FiberEntry {
                label: format!("{}.{}", s.label, f.branch),
                degree: 1,
                values: vec![match f.describe(g).split_once(" ↦ ") {
                    Some((w, v)) => (w.to_string(), v.to_string()),
                    None => (String::new(), f.describe(g)),
                }],
            })
            .collect());
    }
    Ok(fiber(g, &s.sample)?.iter().map(FiberEntry::from_point).collect())
}

fn values_cell(values: &[(String, String)]) -> String {
    if values.is_empty() {
        return "-".into();
    }
    values.iter().map(|(w, v)| format!("{w}: {v}")).collect::<Vec<_>>().join("; ")
}

fn fiber_table(out: &mut String, entries: &[FiberEntry]) {
    out.push_str("| rep | degree | character at generators |\n|---|---|---|\n");
    for e in entries {
        let _ = writeln!(out, "| {} | {} | {} |", e.label, e.degree, values_cell(&e.values));
    }
}

fn cocycle_lines(out: &mut String, table: &[[String; 3]]) {
    if table.is_empty() {
        out.push_str("cocycle: trivial\n\n");
        return;
    }
    out.push_str("| a | b | w(a, b) |\n|---|---|---|\n");
    for [a, b, v] in table {
        let _ = writeln!(out, "| {a} | {b} | {v} |");
    }
    out.push('\n');
}

fn to_json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn dual(g: &CrystalGroup, domain: &Polygon, fmt: Format) -> anyhow::Result<String> {
    let strata = stratify(g, domain)?;
    let mut rows = Vec::new();
    for s in &strata {
        rows.push(StratumOut {
            stratum: s.to_json(),
            cocycle: s.cocycle_table(g),
            fiber: stratum_fiber(g, s)?,
        });
    }
    let mut classes = Vec::new();
    for members in orbit_classes(g, &strata) {
        let rep = &strata[members[0]];
        classes.push(ClassOut {
            representative: rep.label.clone(),
            kind: rep.kind,
            stabilizer_order: rep.stabilizer.order(),
            fiber_degrees: fiber(g, &rep.sample)?.iter().map(|p| p.rep.degree()).collect(),
            members: members.iter().map(|&i| strata[i].label.clone()).collect(),
        });
    }
    let report = DualOut {
        group: g.name().to_string(),
        strata: rows,
        orbit_classes: classes,
    };
    if fmt == Format::Json {
        return to_json(&report);
    }

    let mut out = format!("# dual: {}\n\n", report.group);
    out.push_str("| stratum | kind | stabilizer | fiber size |\n|---|---|---|---|\n");
    for r in &report.strata {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            r.stratum.label,
            kind_name(r.stratum.kind),
            show_subgroup(&r.stratum.generators),
            r.fiber.len()
        );
    }
    for r in &report.strata {
        let s = &r.stratum;
        let _ = writeln!(out, "\n## {} ({})\n", s.label, kind_name(s.kind));
        let _ = writeln!(out, "stabilizer: {} = {{{}}}", show_subgroup(&s.generators), s.stabilizer.join(", "));
        let pt = |p: &Vec<String>| {
            let coords: Vec<&str> = p.iter().map(|c| c.strip_suffix("/1").unwrap_or(c)).collect();
            format!("({})", coords.join(", "))
        };
        match s.kind {
            StratumKind::Vertex => {
                let _ = writeln!(out, "point: {}", pt(&s.vertices[0]));
            }
            StratumKind::Segment => {
                let segs: Vec<String> = s.segments.iter().map(|[a, b]| format!("{} -- {}", pt(a), pt(b))).collect();
                let _ = writeln!(out, "segments: {} (parameter t from start to end)", segs.join(", "));
            }
            StratumKind::Region => {
                let _ = writeln!(out, "sample: {}", pt(&s.sample));
            }
        }
        out.push('\n');
        cocycle_lines(&mut out, &r.cocycle);
        fiber_table(&mut out, &r.fiber);
    }
    out.push_str("\n## orbit classes\n\n| class | kind | stabilizer order | fiber degrees | members |\n|---|---|---|---|---|\n");
    for c in &report.orbit_classes {
        let degrees: Vec<String> = c.fiber_degrees.iter().map(u32::to_string).collect();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            c.representative,
            kind_name(c.kind),
            c.stabilizer_order,
            degrees.join(", "),
            c.members.join(", ")
        );
    }
    Ok(out)
}

#[derive(Serialize)]
struct CocycleOut {
    point: Vec<String>,
    orbit_representative: Vec<String>,
    stabilizer: Vec<String>,
    cocycle: Vec<[String; 3]>,
    fiber: Vec<FiberEntry>,
}

pub fn cocycle(g: &CrystalGroup, z: &TorusPoint, fmt: Format) -> anyhow::Result<String> {
    let stab = g.stabilizer(z);
    let report = CocycleOut {
        point: z.to_strings(),
        orbit_representative: g.orbit_rep(z).to_strings(),
        stabilizer: stab.generator_words(),
        cocycle: g.mackey_cocycle(z).to_sparse(),
        fiber: fiber(g, z)?.iter().map(FiberEntry::from_point).collect(),
    };
    if fmt == Format::Json {
        return to_json(&report);
    }
    let mut out = format!("# cocycle at {z}\n\n");
    let _ = writeln!(out, "orbit representative: {}", g.orbit_rep(z));
    let _ = writeln!(out, "stabilizer: {} (order {})\n", show_subgroup(&report.stabilizer), stab.order());
    cocycle_lines(&mut out, &report.cocycle);
    fiber_table(&mut out, &report.fiber);
    Ok(out)
}

#[derive(Serialize)]
struct LimitsOut {
    target: Vec<String>,
    flags: Vec<String>,
    points: Vec<FiberEntry>,
}

pub fn limits(set: &LimitSet, fmt: Format) -> anyhow::Result<String> {
    let report = LimitsOut {
        target: set.target.to_strings(),
        flags: set.flags.iter().map(ToString::to_string).collect(),
        points: set.points.iter().map(FiberEntry::from_point).collect(),
    };
    if fmt == Format::Json {
        return to_json(&report);
    }
    let mut out = format!("# limits at {}\n\n", set.target);
    let flags = if report.flags.is_empty() { "none".to_string() } else { report.flags.join(", ") };
    let _ = writeln!(out, "flags: {flags}");
    let _ = writeln!(out, "limit set size: {}\n", report.points.len());
    fiber_table(&mut out, &report.points);
    Ok(out)
}

pub fn chartab(g: &CrystalGroup, fmt: Format) -> anyhow::Result<String> {
    let k = g.point_group();
    let table = character_table(k)?;
    let report = CharacterTableReport::new(k, &table, None);
    if fmt == Format::Json {
        return to_json(&report);
    }
    Ok(format!("# character table of the point group of {}\n\n{}", g.name(), report.to_markdown()))
}
