//! `mackey`: unitary duals of crystallographic groups from the command line.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use mackey::crystal::{CrystalGroup, TorusPoint};
use mackey::spectrum::{DomainJson, Polygon, QueryJson};
use mackey::twisted::CocycleJson;
use mackey::verify::{Suite, VerifyConfig};
use serde::de::DeserializeOwned;

/// Log filter variable, e.g. `MACKEY_LOG=debug`.
const LOG_ENV: &str = "MACKEY_LOG";

#[derive(Parser, Debug)]
#[command(name = "mackey", version, about = "Unitary duals of lattice-by-finite-group extensions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Markdown, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Markdown,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Strata of a fundamental domain with stabilizers, cocycles and fibers.
    Dual { group: PathBuf, domain: PathBuf },
    /// Stabilizer, obstruction cocycle and fiber at one point.
    Cocycle {
        group: PathBuf,
        /// Torus coordinates, e.g. `--point 1/2,1/2`.
        #[arg(long, value_delimiter = ',', required = true)]
        point: Vec<String>,
    },
    /// Limit set of a convergence query.
    Limits { group: PathBuf, query: PathBuf },
    /// Numeric oracle and exact identity suites over the group's corpus.
    Verify {
        group: PathBuf,
        /// Suites to run; all when omitted (none when only --cocycle is given).
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<SuiteArg>,
        /// Residual tolerance.
        #[arg(long, default_value_t = mackey::fixoracle::RESIDUAL_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = mackey::chartab::DEFAULT_SEED)]
        seed: u64,
        /// Also check the cocycle identity for a sparse cocycle file.
        #[arg(long)]
        cocycle: Option<PathBuf>,
    },
    /// Reproduces the built-in p4g example and diffs it against expected values.
    Selftest,
    /// Character table of the point group.
    Chartab { group: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Peterweyl,
    Absorption,
    Fixedpoint,
    Branching,
    Charthm,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Peterweyl => vec![Suite::PeterWeyl],
            SuiteArg::Absorption => vec![Suite::Absorption],
            SuiteArg::Fixedpoint => vec![Suite::FixedPoint],
            SuiteArg::Branching => vec![Suite::Branching],
            SuiteArg::Charthm => vec![Suite::CharThm],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

/// Bad input: unreadable files, schema violations, invalid group data.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T>(r: anyhow::Result<T>) -> anyhow::Result<T> {
    r.map_err(|e| InputError(e).into())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    input((|| {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("{}: schema violation", path.display()))
    })())
}

fn load_group(path: &Path) -> anyhow::Result<CrystalGroup> {
    let json = read_json(path)?;
    input(CrystalGroup::from_json(&json).with_context(|| format!("{}: invalid group", path.display())))
}

/// Output plus whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let fmt = cli.format;
    let done = |text: String| Ok(Outcome { text, passed: true });
    match &cli.command {
        Command::Dual { group, domain } => {
            let g = load_group(group)?;
            let d: DomainJson = read_json(domain)?;
            let poly = input(Polygon::from_json(&d).with_context(|| format!("{}: invalid domain", domain.display())))?;
            done(report::dual(&g, &poly, fmt)?)
        }
        Command::Cocycle { group, point } => {
            let g = load_group(group)?;
            let z = input(TorusPoint::parse(point).context("invalid --point"))?;
            if z.dim() != g.dimension() {
                return Err(InputError(anyhow::anyhow!("--point needs {} coordinates", g.dimension())).into());
            }
            done(report::cocycle(&g, &z, fmt)?)
        }
        Command::Limits { group, query } => {
            let g = load_group(group)?;
            let q: QueryJson = read_json(query)?;
            let set = input(
                mackey::spectrum::limit_points_from_json(&g, &q).with_context(|| format!("{}: invalid query", query.display())),
            )?;
            done(report::limits(&set, fmt)?)
        }
        Command::Verify { group, suite, tol, seed, cocycle } => {
            let g = load_group(group)?;
            let mut suites: Vec<Suite> = suite.iter().flat_map(|s| s.suites()).collect();
            if suites.is_empty() && cocycle.is_none() {
                suites = Suite::ALL.to_vec();
            }
            let config = VerifyConfig {
                suites,
                tolerance: *tol,
                seed: *seed,
                ..VerifyConfig::default()
            };
            let mut rep = mackey::verify::run(&g, &config);
            if let Some(path) = cocycle {
                let json: CocycleJson = read_json(path)?;
                let check = input(
                    mackey::verify::check_cocycle_file(&g, &json).with_context(|| format!("{}: invalid cocycle", path.display())),
                )?;
                rep.checks.insert(0, check);
            }
            let passed = rep.passed();
            let text = match fmt {
                Format::Markdown => rep.to_markdown(),
                Format::Json => serde_json::to_string_pretty(&rep)? + "\n",
            };
            Ok(Outcome { text, passed })
        }
        Command::Selftest => {
            let rep = mackey::selftest::run();
            let passed = rep.passed();
            let text = match fmt {
                Format::Markdown => rep.to_markdown(),
                Format::Json => serde_json::to_string_pretty(&rep)? + "\n",
            };
            Ok(Outcome { text, passed })
        }
        Command::Chartab { group } => {
            let g = load_group(group)?;
            done(report::chartab(&g, fmt)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.is::<InputError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
