//! Corpus-wide cross-checks: the floating-point oracle against the exact
//! character pipeline, plus the exact identities of the twisted theory.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chartab::DEFAULT_SEED;
use crate::crystal::{CrystalGroup, TorusPoint};
use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Phase, Rat};
use crate::fixoracle::{
    absorption_check, branching_check, fixed_point_blocks, peter_weyl_check, FiniteUnitaryRep,
    DEFAULT_DIMENSION_BOUND, RESIDUAL_TOLERANCE,
};
use crate::groups::{all_subgroups, GroupRef, Subgroup};
use crate::twisted::{
    central_extension, conjugate_into_ambient, omega_irreps, subrep_multiplicity, twist_rep, CocycleJson, OmegaRep,
    TwoCocycle,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    PeterWeyl,
    Absorption,
    FixedPoint,
    Branching,
    CharThm,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::PeterWeyl,
        Suite::Absorption,
        Suite::FixedPoint,
        Suite::Branching,
        Suite::CharThm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::PeterWeyl => "peterweyl",
            Suite::Absorption => "absorption",
            Suite::FixedPoint => "fixedpoint",
            Suite::Branching => "branching",
            Suite::CharThm => "charthm",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::input(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    pub tolerance: f64,
    pub seed: u64,
    pub dimension_bound: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suites: Suite::ALL.to_vec(),
            tolerance: RESIDUAL_TOLERANCE,
            seed: DEFAULT_SEED,
            dimension_bound: DEFAULT_DIMENSION_BOUND,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub observed: String,
    pub expected: String,
    pub passed: bool,
}

impl Check {
    fn new(suite: impl fmt::Display, name: String, observed: impl fmt::Display, expected: impl fmt::Display, passed: bool) -> Check {
        Check {
            suite: suite.to_string(),
            name,
            observed: observed.to_string(),
            expected: expected.to_string(),
            passed,
        }
    }

    fn failed(suite: impl fmt::Display, name: String, err: &Error) -> Check {
        Check::new(suite, name, format!("error: {err}"), "no error", false)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct VerifyReport {
    pub group: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# verify: {}\n\n", self.group);
        out.push_str("| suite | check | observed | expected | result |\n|---|---|---|---|---|\n");
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "| {} | {} | {} | {} | {} |", c.suite, c.name, c.observed, c.expected, mark);
        }
        let _ = writeln!(out, "\n{} checks, {} failed", self.checks.len(), self.failures());
        out
    }
}

/// A subgroup `L` of the point group sitting inside `stab(z)`, with `ω_z|L`.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub point: TorusPoint,
    pub subgroup: Subgroup,
    pub cocycle: TwoCocycle,
}

impl CorpusEntry {
    fn label(&self) -> String {
        format!("{} at {}", self.subgroup, self.point)
    }
}

/// Orbit representatives of the quarter-lattice points plus one generic point.
pub fn corpus_points(group: &CrystalGroup) -> Vec<TorusPoint> {
    let dim = group.dimension();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |z: TorusPoint| {
        let rep = group.orbit_rep(&z);
        if seen.insert(rep.clone()) {
            out.push(rep);
        }
    };
    for code in 0..4usize.pow(dim as u32) {
        let coords = (0..dim).map(|i| Rat::new(((code / 4usize.pow(i as u32)) % 4) as i64, 4)).collect();
        push(TorusPoint::new(coords));
    }
    const GENERIC: [i64; 4] = [5, 7, 11, 13];
    push(TorusPoint::new((0..dim).map(|i| Rat::new(1, GENERIC[i % 4])).collect()));
    out
}

/// Every `(L, ω_z|L)` with `L ⊆ stab(z)` over the corpus points, without repeats.
pub fn corpus(group: &CrystalGroup) -> Vec<CorpusEntry> {
    let subgroups = all_subgroups(group.point_group());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for z in corpus_points(group) {
        let stab = group.stabilizer(&z);
        for l in subgroups.iter().filter(|l| l.is_subset_of(&stab)) {
            let cocycle = group.cocycle_on(&z, l);
            let key = (l.elements().to_vec(), cocycle.values().to_vec());
            if seen.insert(key) {
                out.push(CorpusEntry {
                    point: z.clone(),
                    subgroup: l.clone(),
                    cocycle,
                });
            }
        }
    }
    out
}

/// The entries with `L = stab(z)`, which serve as ambient groups for branching.
fn ambient_entries(group: &CrystalGroup, entries: &[CorpusEntry]) -> Vec<CorpusEntry> {
    entries
        .iter()
        .filter(|e| e.subgroup == group.stabilizer(&e.point))
        .cloned()
        .collect()
}

pub fn run(group: &CrystalGroup, config: &VerifyConfig) -> VerifyReport {
    let entries = corpus(group);
    let ambients = ambient_entries(group, &entries);
    let mut checks = Vec::new();
    let suites: BTreeSet<Suite> = config.suites.iter().copied().collect();
    for suite in suites {
        log::info!("verify suite {suite}");
        match suite {
            Suite::PeterWeyl => peter_weyl_suite(&entries, config, &mut checks),
            Suite::Absorption => absorption_suite(&entries, config, &mut checks),
            Suite::FixedPoint => fixed_point_suite(&entries, config, &mut checks),
            Suite::Branching => branching_suite(&ambients, config, &mut checks),
            Suite::CharThm => character_suite(&entries, &ambients, config, &mut checks),
        }
    }
    VerifyReport {
        group: group.name().to_string(),
        checks,
    }
}

fn sci(x: f64) -> String {
    format!("{x:.1e}")
}

fn peter_weyl_suite(entries: &[CorpusEntry], config: &VerifyConfig, checks: &mut Vec<Check>) {
    let suite = Suite::PeterWeyl;
    for e in entries {
        let name = e.label();
        match peter_weyl_check(&e.cocycle) {
            Ok(r) => {
                let worst = r.gram_deviation.max(r.left_residual).max(r.right_residual);
                let squares: u32 = r.degrees.iter().map(|d| d * d).sum();
                checks.push(Check::new(
                    suite,
                    name,
                    format!("gram {}, intertwining {}, sum d^2 = {squares}", sci(r.gram_deviation), sci(r.left_residual.max(r.right_residual))),
                    format!("< {}, sum d^2 = {}", sci(config.tolerance), r.group_order),
                    r.passed(config.tolerance) && worst < config.tolerance,
                ));
            }
            Err(err) => checks.push(Check::failed(suite, name, &err)),
        }
    }
}

fn absorption_suite(entries: &[CorpusEntry], config: &VerifyConfig, checks: &mut Vec<Check>) {
    let suite = Suite::Absorption;
    for e in entries {
        let g = e.subgroup.group().clone();
        let result = (|| -> Result<f64> {
            let mut worst: f64 = 0.0;
            let mut reps = vec![FiniteUnitaryRep::trivial(g.clone())];
            for sigma in omega_irreps(&e.cocycle)? {
                reps.push(FiniteUnitaryRep::from_omega_rep(&sigma)?);
            }
            for v in &reps {
                for mu in [TwoCocycle::trivial(g.clone()), e.cocycle.clone(), e.cocycle.conj()] {
                    worst = worst.max(absorption_check(v, &mu)?);
                }
            }
            Ok(worst)
        })();
        let name = e.label();
        match result {
            Ok(r) => checks.push(Check::new(suite, name, sci(r), format!("< {}", sci(config.tolerance)), r < config.tolerance)),
            Err(err) => checks.push(Check::failed(suite, name, &err)),
        }
    }
}

fn fixed_point_suite(entries: &[CorpusEntry], config: &VerifyConfig, checks: &mut Vec<Check>) {
    let suite = Suite::FixedPoint;
    for e in entries {
        let g = e.subgroup.group().clone();
        let mut reps = vec![("trivial".to_string(), Ok(FiniteUnitaryRep::trivial(g)))];
        match omega_irreps(&e.cocycle) {
            Ok(sigmas) => {
                for (i, sigma) in sigmas.iter().enumerate().filter(|(_, s)| s.degree() <= 2) {
                    reps.push((format!("irrep {i}"), FiniteUnitaryRep::from_omega_rep(sigma)));
                }
            }
            Err(err) => {
                checks.push(Check::failed(suite, e.label(), &err));
                continue;
            }
        }
        for (which, v) in reps {
            let name = format!("{}, V = {which}", e.label());
            let outcome = v.and_then(|v| {
                let blocks = omega_irreps(v.cocycle())?.len();
                Ok((fixed_point_blocks(&e.subgroup, &v, config.dimension_bound, config.seed)?, blocks))
            });
            match outcome {
                Ok((r, blocks)) => checks.push(Check::new(
                    suite,
                    name,
                    format!("dim {}, {} blocks", r.dimension, r.block_ranks.len()),
                    format!("dim {}, {blocks} blocks", r.expected_dimension),
                    r.passed() && r.block_ranks.len() == blocks,
                )),
                Err(err) => checks.push(Check::failed(suite, name, &err)),
            }
        }
    }
}

fn branching_suite(ambients: &[CorpusEntry], config: &VerifyConfig, checks: &mut Vec<Check>) {
    let suite = Suite::Branching;
    for a in ambients {
        let k = a.subgroup.group();
        for l in all_subgroups(k) {
            let name = format!("{} in {}", l, a.label());
            match branching_check(&l, &a.cocycle, config.seed) {
                Ok(r) => {
                    let agree = r.pairs.iter().filter(|p| p.exact == p.oracle).count();
                    let meets = r.pairs.iter().filter(|p| (p.exact > 0) == p.blocks_meet).count();
                    checks.push(Check::new(
                        suite,
                        name,
                        format!("{agree} equal, {meets} containments"),
                        format!("{n} equal, {n} containments", n = r.pairs.len()),
                        r.passed(),
                    ));
                }
                Err(err) => checks.push(Check::failed(suite, name, &err)),
            }
        }
    }
}

/// Exact `Σ tw_σ conj(tw_σ') / |G|` for every pair, compared with `δ`.
fn orthogonality_defects(reps: &[OmegaRep]) -> Result<usize> {
    let mut bad = 0;
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            let mut acc = Cyclo::zero();
            for (x, y) in a.twisted_values().iter().zip(b.twisted_values()) {
                acc = acc.try_add(&x.try_mul(&y.conj())?)?;
            }
            let ip = acc.scale(Rat::new(1, a.group().order() as i64));
            if ip != Cyclo::from_int(i64::from(i == j)) {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

fn character_suite(entries: &[CorpusEntry], ambients: &[CorpusEntry], config: &VerifyConfig, checks: &mut Vec<Check>) {
    let suite = Suite::CharThm;
    let mut cases: Vec<(String, TwoCocycle)> = entries.iter().map(|e| (e.label(), e.cocycle.clone())).collect();
    for a in ambients {
        match central_extension(&a.cocycle) {
            Ok(ext) => cases.push((format!("extension of {}", a.label()), TwoCocycle::trivial(ext.group().clone()))),
            Err(err) => checks.push(Check::failed(suite, format!("extension of {}", a.label()), &err)),
        }
    }
    for (label, w) in &cases {
        let result = omega_irreps(w).and_then(|reps| {
            let squares: u64 = reps.iter().map(|r| u64::from(r.degree()).pow(2)).sum();
            Ok((squares, orthogonality_defects(&reps)?))
        });
        match result {
            Ok((squares, bad)) => {
                let n = w.group().order();
                checks.push(Check::new(suite, format!("sum d^2, {label}"), squares, n, squares == n as u64));
                checks.push(Check::new(suite, format!("orthogonality, {label}"), format!("{bad} defects"), "0 defects", bad == 0));
            }
            Err(err) => checks.push(Check::failed(suite, label.clone(), &err)),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for a in ambients {
        for l in all_subgroups(a.subgroup.group()) {
            let name = format!("{} in {}", l, a.label());
            let f: Vec<Phase> = (0..a.subgroup.order())
                .map(|x| if x == 0 { Phase::ONE } else { Phase::from_fraction(rng.random_range(0..8), 8) })
                .collect();
            match subgroup_identities(&a.cocycle, &l, &f) {
                Ok((frobenius, invariance)) => {
                    checks.push(Check::new(suite, format!("frobenius, {name}"), format!("{frobenius} defects"), "0 defects", frobenius == 0));
                    checks.push(Check::new(suite, format!("invariance, {name}"), format!("{invariance} defects"), "0 defects", invariance == 0));
                }
                Err(err) => checks.push(Check::failed(suite, name, &err)),
            }
        }
    }
}

/// Counts failures of `Σ_σ m_τ^σ d_σ = [K:L] d_τ` and of invariance of
/// `m_τ^σ` under the twist by `f` and under conjugation.
fn subgroup_identities(w: &TwoCocycle, l: &Subgroup, f: &[Phase]) -> Result<(usize, usize)> {
    let k: &GroupRef = l.parent();
    let sigmas = omega_irreps(w)?;
    let taus = omega_irreps(&w.restrict(l))?;
    let count = |tau: &OmegaRep, sigma: &OmegaRep, sub: &Subgroup| -> Result<u32> {
        subrep_multiplicity(tau, sigma, sub)?
            .count()
            .ok_or_else(|| Error::input("restriction changed the cocycle class"))
    };
    let f_l: Vec<Phase> = l.elements().iter().map(|&x| f[x]).collect();
    let (mut frobenius, mut invariance) = (0, 0);
    for tau in &taus {
        let mut total = 0usize;
        let tau_t = twist_rep(&f_l, tau)?;
        for sigma in &sigmas {
            let m = count(tau, sigma, l)?;
            total += (m * sigma.degree()) as usize;
            if count(&tau_t, &twist_rep(f, sigma)?, l)? != m {
                invariance += 1;
            }
            for x in 0..k.order() {
                let (tau_x, l_x) = conjugate_into_ambient(x, tau, l, w)?;
                if count(&tau_x, sigma, &l_x)? != m {
                    invariance += 1;
                }
            }
        }
        if total != l.index() * tau.degree() as usize {
            frobenius += 1;
        }
    }
    Ok((frobenius, invariance))
}

/// Loads a sparse cocycle on a subgroup of the point group and checks the
/// cocycle identity. Unknown element words are input errors.
pub fn check_cocycle_file(group: &CrystalGroup, json: &CocycleJson) -> Result<Check> {
    let g = group.point_group();
    let sub = match &json.subgroup {
        Some(words) => {
            let gens = words.iter().map(|w| g.element_from_word(w)).collect::<Result<Vec<_>>>()?;
            Subgroup::generated(g.clone(), &gens)
        }
        None => Subgroup::whole(g.clone()),
    };
    let cocycle = TwoCocycle::from_sparse(sub.group().clone(), &json.values)?;
    let name = format!("cocycle identity on {sub}");
    Ok(match cocycle.check() {
        Ok(()) => Check::new("cocycle", name, "holds", "holds", true),
        Err(err) => Check::new("cocycle", name, err, "holds", false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p4g_corpus_covers_the_special_points() {
        let g = CrystalGroup::p4g();
        let points = corpus_points(&g);
        for z in [["0", "0"], ["0", "1/2"], ["1/2", "1/2"]] {
            assert!(points.contains(&g.orbit_rep(&TorusPoint::parse(&z).unwrap())));
        }
        let orders: BTreeSet<usize> = points.iter().map(|z| g.stabilizer(z).order()).collect();
        assert_eq!(orders, BTreeSet::from([1, 2, 4, 8]));
        let entries = corpus(&g);
        assert!(entries.iter().any(|e| e.subgroup.order() == 8 && !e.cocycle.is_trivial()));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_on_p4g() {
        let report = run(&CrystalGroup::p4g(), &VerifyConfig::default());
        let failing: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
        assert!(failing.is_empty(), "{failing:#?}");
        for s in Suite::ALL {
            assert!(report.checks.iter().any(|c| c.suite == s.as_str()), "{s}");
        }
    }

    #[test]
    fn corrupted_cocycle_fails_the_identity() {
        let g = CrystalGroup::p4g();
        let bad = CocycleJson {
            subgroup: Some(vec!["R^2".into(), "S".into()]),
            values: vec![["R^2".into(), "S".into(), "1/2".into()]],
        };
        assert!(!check_cocycle_file(&g, &bad).unwrap().passed);
        let good = CocycleJson {
            subgroup: Some(vec!["R^2".into(), "S".into()]),
            values: ["R^2", "SR^2"]
                .iter()
                .flat_map(|a| ["S", "SR^2"].map(|b| [a.to_string(), b.to_string(), "1/2".to_string()]))
                .collect(),
        };
        assert!(check_cocycle_file(&g, &good).unwrap().passed);
        let unknown = CocycleJson {
            subgroup: None,
            values: vec![["Q".into(), "S".into(), "1/2".into()]],
        };
        assert!(check_cocycle_file(&g, &unknown).is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let config = VerifyConfig {
            suites: vec![Suite::FixedPoint, Suite::Branching],
            ..VerifyConfig::default()
        };
        let g = CrystalGroup::p4g();
        assert_eq!(run(&g, &config).to_markdown(), run(&g, &config).to_markdown());
    }
}
