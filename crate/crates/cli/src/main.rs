use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyshape_core::chain::{build_distinguished_chain, find_chain_start, validate_chain};
use polyshape_core::coverage::coverage_report;
use polyshape_core::diagram::parse_multiplicity_table;
use polyshape_core::export::{diagram_body, export_dot, Document, EdgeStyle, Provenance};
use polyshape_core::measure::{
    dim_lower_bound_check, level_mass, minimal_mass_bound, parse_weights_json, solve_symmetric_weight,
};
use polyshape_core::probe::{probe_depth_pairs, survival_profile, ProbeConfig, DEFAULT_BUDGET};
use polyshape_core::verify::{verify_all, Mutation, VerifyConfig};
use polyshape_core::vershik::{parse_ordering, OrderedDiagram};
use polyshape_core::{parse_polynomial, Diagram, Multiplicity, PolynomialSpec};
use num_bigint::BigUint;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "polyshape", version, about = "Polynomial-shape Bratteli diagrams and their combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Polynomial,
    Shape,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct Common {
    /// Polynomial text or JSON, inline or as a file path.
    #[arg(long)]
    poly: String,
    #[arg(long, value_enum, default_value = "polynomial")]
    mode: Mode,
    /// Multiplicity table file, or the preset `all-ones`.
    #[arg(long)]
    multiplicity: Option<String>,
    /// Ordering preset, inline JSON, or a JSON file.
    #[arg(long, default_value = "source-lex")]
    ordering: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest tower materialized, in paths.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Directory for the report; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex counts and path counts per level.
    Describe {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
        levels: u32,
    },
    /// Covered vertices of one level, closed form against brute force.
    Covered {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        level: u32,
    },
    /// Chain starts at a level and a distinguished chain grown from the first.
    Chain {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        level: u32,
        /// Links in the grown chain; defaults to 2d + 3.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Exhaustive depth-i pair search at a horizon.
    Probe {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        horizon: u32,
        #[arg(long, default_value_t = 0)]
        floor: u32,
        /// Extra horizons for a survival profile, comma separated.
        #[arg(long, value_delimiter = ',')]
        profile: Vec<u32>,
    },
    /// Symmetric weights, level masses and the minimal-mass bound.
    Measure {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        levels: u32,
        /// Weights JSON, inline or as a file path.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Minimal, maximal and ranked paths into one vertex.
    Vershik {
        #[command(flatten)]
        common: Common,
        /// Coordinates, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        vertex: Vec<u32>,
        #[arg(long)]
        rank: Option<String>,
    },
    /// The diagram as DOT or JSON.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        levels: u32,
        /// Draw one arrow per edge copy with its ordering label.
        #[arg(long)]
        labels: bool,
    },
    /// Every invariant suite; exits 1 on any discrepancy.
    VerifyAll {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        levels: u32,
        #[arg(long, hide = true)]
        mutate: Option<String>,
    },
}

/// Bad input: exit 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = Result<T, UsageError>;

fn read_inline_or_file(arg: &str) -> CliResult<String> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
    } else {
        Ok(arg.to_string())
    }
}

struct Setup {
    spec: PolynomialSpec,
    multiplicity: Multiplicity,
}

impl Common {
    fn setup(&self) -> CliResult<Setup> {
        let spec = parse_polynomial(&read_inline_or_file(&self.poly)?)?;
        let multiplicity = match (self.mode, self.multiplicity.as_deref()) {
            (Mode::Polynomial, None) => Multiplicity::Coefficients,
            (Mode::Polynomial, Some(_)) => {
                return Err(UsageError("--multiplicity needs --mode shape".into()));
            }
            (Mode::Shape, None) => Multiplicity::AllOnes,
            (Mode::Shape, Some(m)) => match Multiplicity::preset(m) {
                Some(p) => p,
                None => Multiplicity::Table(parse_multiplicity_table(&spec, &read_inline_or_file(m)?)?),
            },
        };
        Ok(Setup { spec, multiplicity })
    }

    fn ordered(&self, diagram: Diagram) -> CliResult<OrderedDiagram> {
        let spec = parse_ordering(&read_inline_or_file(&self.ordering)?, self.seed)?;
        Ok(OrderedDiagram::new(diagram, spec)?)
    }

    fn emit(&self, name: &str, text: &str) -> CliResult<()> {
        match &self.out {
            None => print!("{text}"),
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let ext = if self.format == Format::Dot { "dot" } else { "json" };
                let path = dir.join(format!("{name}.{ext}"));
                fs::write(&path, text)?;
                eprintln!("wrote {}", path.display());
            }
        }
        Ok(())
    }
}

fn emit_doc<T: serde::Serialize>(common: &Common, scope: &'static str, prov: Provenance, body: T) -> CliResult<()> {
    if common.format == Format::Dot {
        return Err(UsageError(format!("{scope} reports are JSON only")));
    }
    common.emit(scope, &Document::new(scope, prov, body).to_json())
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Describe { common, levels } => {
            let s = common.setup()?;
            let d = Diagram::new(s.spec.clone(), s.multiplicity.clone(), levels)?;
            let rows: Vec<Value> = (1..=levels)
                .map(|n| {
                    let total: BigUint = (0..d.level(n).len()).map(|i| d.dimension_at(n, i)).sum();
                    json!({
                        "level": n,
                        "vertex_count": big_json(&s.spec.vertex_count(n)),
                        "paths": total.to_string(),
                    })
                })
                .collect();
            let counts: Vec<Value> = (1..=levels).map(|n| big_json(&s.spec.vertex_count(n))).collect();
            let body = json!({
                "q": s.spec.arity(),
                "d": s.spec.degree(),
                "coefficient_sum": s.spec.coefficient_sum().to_string(),
                "vertex_counts": counts,
                "levels": rows,
            });
            emit_doc(&common, "diagram", Provenance::new(&s.spec, &s.multiplicity), body)?;
            Ok(true)
        }
        Command::Covered { common, level } => {
            let s = common.setup()?;
            let r = coverage_report(&s.spec, level);
            let clean = r.discrepancies.is_empty();
            let body = json!({
                "covered": r.covered_count(),
                "uncovered": r.uncovered_count(),
                "report": r,
            });
            emit_doc(&common, "coverage", Provenance::new(&s.spec, &s.multiplicity), body)?;
            Ok(clean)
        }
        Command::Chain { common, level, length } => {
            let s = common.setup()?;
            let starts = find_chain_start(&s.spec, level)?;
            let target = length.unwrap_or(2 * s.spec.degree() as usize + 3);
            let grown = starts.first().map(|st| {
                build_distinguished_chain(&s.spec, &st.v, &st.v_prime, &st.shared, st.direction, target)
            });
            let (chain, validation, failure) = match grown {
                None => (None, None, None),
                Some(Ok(c)) => {
                    let v = validate_chain(&s.spec, &c)?;
                    (Some(c), Some(v), None)
                }
                Some(Err(e)) => (None, None, Some(e.to_string())),
            };
            let body = json!({
                "level": level,
                "starts": starts,
                "chain": chain,
                "validation": validation,
                "failure": failure,
            });
            emit_doc(&common, "chains", Provenance::new(&s.spec, &s.multiplicity), body)?;
            Ok(true)
        }
        Command::Probe { common, i, horizon, floor, profile } => {
            let s = common.setup()?;
            let top = profile.iter().copied().chain([horizon]).max().unwrap_or(horizon);
            let od = common.ordered(Diagram::new(s.spec.clone(), s.multiplicity.clone(), top)?)?;
            let cfg = ProbeConfig {
                floor,
                budget: common.budget,
                ..ProbeConfig::new(i, horizon)
            };
            let report = probe_depth_pairs(&od, &cfg)?;
            let clean = report.uncensored_genuine_conflicts == 0;
            let prov = Provenance::new(&s.spec, &s.multiplicity).with_ordering(&od);
            if profile.is_empty() {
                emit_doc(&common, "probe", prov, report)?;
            } else {
                let rows = survival_profile(&od, i, &profile, floor, common.budget)?;
                emit_doc(&common, "probe", prov, json!({ "report": report, "profile": rows }))?;
            }
            Ok(clean)
        }
        Command::Measure { common, levels, weights } => {
            let s = common.setup()?;
            let d = Diagram::new(s.spec.clone(), s.multiplicity.clone(), levels)?;
            let w = match weights {
                Some(text) => parse_weights_json(&s.spec, &read_inline_or_file(&text)?)?,
                None => solve_symmetric_weight(&s.spec, &s.multiplicity)?,
            };
            let mut ok = true;
            let mut rows = Vec::new();
            for n in 0..=levels {
                let mass = level_mass(&d, n, &w)?;
                let bound = if n >= 2 { Some(minimal_mass_bound(&s.spec, &s.multiplicity, n, &w)?) } else { None };
                let low_dim = if n >= 2 { dim_lower_bound_check(&d, n)? } else { Vec::new() };
                ok &= (mass - 1.0).abs() <= 1e-9 && bound.as_ref().is_none_or(|b| b.pass) && low_dim.is_empty();
                rows.push(json!({
                    "level": n,
                    "total_mass": mass,
                    "minimal_mass": bound,
                    "dimension_counterexamples": low_dim.iter().map(|v| &v.coords).collect::<Vec<_>>(),
                }));
            }
            let body = json!({ "mode": "float", "weights": w, "levels": rows });
            emit_doc(&common, "measure", Provenance::new(&s.spec, &s.multiplicity), body)?;
            Ok(ok)
        }
        Command::Vershik { common, vertex, rank } => {
            let s = common.setup()?;
            let v = s.spec.vertex(vertex)?;
            let od = common.ordered(Diagram::new(s.spec.clone(), s.multiplicity.clone(), v.level)?)?;
            let min = od.minimal_path(&v)?;
            let max = od.maximal_path(&v)?;
            let ranked = match rank {
                None => None,
                Some(r) => {
                    let r: BigUint = r.parse().map_err(|_| UsageError(format!("bad rank {r:?}")))?;
                    Some(od.edges(&od.unrank(&v, &r)?)?)
                }
            };
            let tower = match od.tower(&v, common.budget) {
                Ok(t) => Some(t.paths.iter().map(|x| od.edges(x)).collect::<Result<Vec<_>, _>>()?),
                Err(polyshape_core::Error::TowerTooLarge { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let coding = if v.level >= 1 { Some(od.vertex_coding(&v, v.level - 1, common.budget)?) } else { None };
            let body = json!({
                "vertex": v,
                "dimension": od.diagram().dimension(&v)?.to_string(),
                "incoming": if v.level >= 1 { Some(od.labeled_edges(&v)?) } else { None },
                "minimal_path": od.edges(&min)?,
                "maximal_path": od.edges(&max)?,
                "ranked_path": ranked,
                "previous_level_coding": coding.map(|c| c.into_iter().map(|u| u.coords).collect::<Vec<_>>()),
                "tower": tower,
            });
            let prov = Provenance::new(&s.spec, &s.multiplicity).with_ordering(&od);
            emit_doc(&common, "vershik", prov, body)?;
            Ok(true)
        }
        Command::Export { common, levels, labels } => {
            let s = common.setup()?;
            let d = Diagram::new(s.spec.clone(), s.multiplicity.clone(), levels)?;
            match common.format {
                Format::Dot => {
                    let od = if labels { Some(common.ordered(d.clone())?) } else { None };
                    let style = if labels { EdgeStyle::Parallel } else { EdgeStyle::Multiplicity };
                    common.emit("diagram", &export_dot(&d, levels, style, od.as_ref())?)?;
                }
                Format::Json => {
                    emit_doc(&common, "diagram", Provenance::new(&s.spec, &s.multiplicity), diagram_body(&d, levels)?)?;
                }
            }
            Ok(true)
        }
        Command::VerifyAll { common, levels, mutate } => {
            let s = common.setup()?;
            let mutation = match mutate.as_deref() {
                None => None,
                Some(m) => Some(Mutation::parse(m).ok_or_else(|| UsageError(format!("unknown mutation {m:?}")))?),
            };
            let ordering = parse_ordering(&read_inline_or_file(&common.ordering)?, common.seed)?;
            let cfg = VerifyConfig {
                ordering,
                mutation,
                ..VerifyConfig::new(levels)
            };
            let mut modes = vec![s.multiplicity.clone()];
            if s.multiplicity == Multiplicity::Coefficients {
                modes.push(Multiplicity::AllOnes);
            }
            let mut reports = Vec::new();
            for mode in modes {
                reports.push(verify_all(&s.spec, mode, &cfg)?);
            }
            let passed = reports.iter().all(|r| r.passed);
            for r in &reports {
                for suite in &r.suites {
                    eprintln!(
                        "{:<8} {:<13} {:<18} checked {:>8}  discrepancies {}",
                        if suite.passed() { "ok" } else { "FAIL" },
                        r.multiplicity,
                        suite.name,
                        suite.checked,
                        suite.discrepancy_count
                    );
                }
            }
            let body = json!({ "passed": passed, "runs": reports });
            emit_doc(&common, "verify", Provenance::new(&s.spec, &s.multiplicity), body)?;
            Ok(passed)
        }
    }
}

/// A JSON number when it fits in u64, a decimal string otherwise.
fn big_json(x: &BigUint) -> Value {
    u64::try_from(x).map_or_else(|_| Value::from(x.to_string()), Value::from)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
