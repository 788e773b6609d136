//! Exhaustive invariant suites over every vertex up to a horizon.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::chain::{build_distinguished_chain, check_link_consequences_with, find_chain_start, validate_chain};
use crate::coverage::{
    check_cov2, covering_vertices, is_covered_formula_with_slack, source_all_uncovered_with, source_ladder,
    target_uncovered_check_with, Cov2Convention, CoverageTable,
};
use crate::diagram::{Diagram, Multiplicity};
use crate::error::{Error, Result};
use crate::expansion::{powers, SparsePoly};
use crate::measure::{cylinder_measure, level_mass, minimal_mass_bound, solve_symmetric_weight};
use crate::polynomial::PolynomialSpec;
use crate::vershik::{OrderedDiagram, OrderingSpec};
use crate::vertex::Vertex;

/// Largest tower walked by the Vershik suite.
pub const TOWER_LIMIT: u64 = 10_000;
const SAMPLE_LIMIT: usize = 20;

/// Deliberate faults, for showing that the suites catch them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Coverage threshold `(n - 2) d` instead of `(n - 1) d`.
    CoverThreshold,
    /// Path counts compared against the expansion plus one.
    DimensionOffByOne,
    /// Ladder rungs checked one step too far.
    LadderShift,
}

impl Mutation {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "cover-threshold" => Some(Mutation::CoverThreshold),
            "dimension-off-by-one" => Some(Mutation::DimensionOffByOne),
            "ladder-shift" => Some(Mutation::LadderShift),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub max_level: u32,
    pub ordering: OrderingSpec,
    pub tower_limit: u64,
    pub mutation: Option<Mutation>,
}

impl VerifyConfig {
    pub fn new(max_level: u32) -> Self {
        Self {
            max_level,
            ordering: OrderingSpec::SourceLex,
            tower_limit: TOWER_LIMIT,
            mutation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: u64,
    pub discrepancy_count: u64,
    pub discrepancies: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            discrepancy_count: 0,
            discrepancies: Vec::new(),
            note: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.discrepancy_count += 1;
            if self.discrepancies.len() < SAMPLE_LIMIT {
                self.discrepancies.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.discrepancy_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub max_level: u32,
    pub multiplicity: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<Mutation>,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// Runs every suite on `spec` with the given multiplicity mode.
pub fn verify_all(spec: &PolynomialSpec, multiplicity: Multiplicity, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let levels = cfg.max_level;
    let diagram = Diagram::new(spec.clone(), multiplicity, levels)?;
    let table = CoverageTable::new(spec, levels);
    let suites = vec![
        lattice_suite(spec, &diagram),
        coverage_suite(spec, &table, levels, cfg.mutation),
        cov2_suite(spec, levels)?,
        dsv_suite(spec, levels),
        source_uncovered_suite(spec, &table, levels)?,
        ladder_suite(spec, levels, cfg.mutation)?,
        dimension_suite(&diagram, cfg.mutation),
        vershik_suite(&diagram, cfg)?,
        link_suite(spec, &table, levels)?,
        chain_suite(spec, &table, levels)?,
        measure_suite(&diagram)?,
    ];
    let passed = suites.iter().all(SuiteResult::passed);
    Ok(VerifyReport {
        max_level: levels,
        multiplicity: diagram.multiplicity_mode().name(),
        mutation: cfg.mutation,
        suites,
        passed,
    })
}

fn lattice_suite(spec: &PolynomialSpec, diagram: &Diagram) -> SuiteResult {
    let mut s = SuiteResult::new("vertex-lattice");
    let d = spec.degree();
    let q = spec.arity() as u64;
    for n in 0..=diagram.max_level() {
        let vs = diagram.level(n);
        s.check(BigUint::from(vs.len()) == spec.vertex_count(n), || {
            format!("level {n}: {} vertices enumerated, formula gives {}", vs.len(), spec.vertex_count(n))
        });
        for w in vs {
            s.check(u64::from(w.max_coord()) * q >= u64::from(n) * u64::from(d), || {
                format!("{w}: no coordinate reaches nd/q")
            });
        }
        if n == 0 {
            continue;
        }
        let prev = diagram.level(n - 1);
        for w in vs {
            let sources: HashSet<Vec<u32>> = spec.source_set(w).into_iter().map(|u| u.coords).collect();
            for u in prev {
                let in_s = sources.contains(&u.coords);
                let has_edge = diagram.edge_multiplicity(u, w) >= 1;
                let is_target = spec.targets(u).contains(w);
                s.check(in_s == has_edge && has_edge == is_target, || {
                    format!("{u} -> {w}: source {in_s}, edge {has_edge}, target {is_target}")
                });
                if in_s {
                    let ok = (0..w.arity()).all(|j| u.coords[j] <= w.coords[j] && w.coords[j] <= u.coords[j] + d);
                    s.check(ok, || format!("{u} in S({w}) moves a coordinate by more than d"));
                }
            }
            let srcs = spec.source_set(w);
            for a in &srcs {
                for b in &srcs {
                    let ok = (0..w.arity()).all(|j| a.coords[j].abs_diff(b.coords[j]) <= d);
                    s.check(ok, || format!("{a}, {b} in S({w}) differ by more than d"));
                }
            }
        }
        // Vertices sharing a source stay within d of each other.
        for u in prev {
            let ts = spec.targets(u);
            for a in &ts {
                for b in &ts {
                    let ok = (0..a.arity()).all(|j| a.coords[j].abs_diff(b.coords[j]) <= d);
                    s.check(ok, || format!("{a}, {b} share {u} but differ by more than d"));
                }
            }
        }
    }
    s
}

fn coverage_suite(spec: &PolynomialSpec, table: &CoverageTable, levels: u32, mutation: Option<Mutation>) -> SuiteResult {
    let mut s = SuiteResult::new("coverage-formula");
    let slack = if mutation == Some(Mutation::CoverThreshold) { 2 } else { 1 };
    let q = spec.arity() as u32;
    let d = spec.degree();
    for n in 1..=levels {
        for w in spec.enumerate_vertices(n) {
            let oracle = table.is_covered(spec, &w);
            let covering = covering_vertices(spec, &w);
            s.check(covering.is_empty() != oracle, || format!("{w}: covering set disagrees with status"));
            if n > q {
                let formula = is_covered_formula_with_slack(spec, &w, slack);
                s.check(formula == Some(oracle), || {
                    format!("level {n} {w}: formula {formula:?}, oracle {oracle}")
                });
                if !oracle {
                    s.check(w.max_coord() <= (n - 1) * d, || format!("uncovered {w} has a coordinate above (n-1)d"));
                }
            }
        }
    }
    s
}

fn cov2_suite(spec: &PolynomialSpec, levels: u32) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("covering-sets");
    let q = spec.arity() as u32;
    let mut loose = 0;
    for n in q + 1..=levels {
        let r = check_cov2(spec, n)?;
        loose += r.mismatches_for(Cov2Convention::CoverMinusSource) + r.mismatches_for(Cov2Convention::SourceMinusCover);
        for m in r.mismatches.iter().filter(|m| m.convention == Cov2Convention::CoverMinusSourceTight) {
            s.check(false, || format!("level {n} {}: predicted-only {:?}, actual-only {:?}", m.vertex, m.predicted_only, m.actual_only));
        }
        s.checked += r.covered_checked as u64;
    }
    s.note = Some(format!("{loose} mismatches under the looser sign conventions"));
    Ok(s)
}

fn dsv_suite(spec: &PolynomialSpec, levels: u32) -> SuiteResult {
    let mut s = SuiteResult::new("dsv");
    let d = spec.degree();
    for n in 1..=levels {
        for w0 in spec.enumerate_vertices(n) {
            for j in 0..spec.arity() {
                let Some(u) = spec.dsv(&w0, j) else {
                    s.check(w0.coords[j] < d, || format!("dsv({w0}, {j}) missing"));
                    continue;
                };
                s.check(spec.source_set(&w0).contains(&u), || format!("dsv({w0}, {j}) not a source"));
                for w1 in spec.targets(&u) {
                    if w1 == w0 {
                        continue;
                    }
                    let drop = i64::from(w0.coords[j]) - i64::from(w1.coords[j]);
                    s.check((1..=i64::from(d)).contains(&drop), || {
                        format!("dsv({w0}, {j}) in S({w1}) but drop is {drop}")
                    });
                    for j2 in (0..spec.arity()).filter(|&j2| j2 != j) {
                        let both = spec.dsv(&w0, j2).is_some_and(|u2| spec.source_vector_between(&u2, &w1).is_some());
                        s.check(!both, || format!("dsv({w0}, {j}) and dsv({w0}, {j2}) both in S({w1})"));
                    }
                }
            }
        }
    }
    s
}

fn source_uncovered_suite(spec: &PolynomialSpec, table: &CoverageTable, levels: u32) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("source-uncovered");
    let q = spec.arity() as u32;
    for n in q + 1..=levels {
        for w in spec.enumerate_vertices(n) {
            let r = source_all_uncovered_with(spec, &w, |u| table.is_covered(spec, u))?;
            if r.all_coords_bounded {
                s.check(r.all_uncovered, || format!("{w}: coordinates bounded but source {:?} covered", r.witness));
            }
            if r.some_coord_in_band {
                s.check(r.all_uncovered, || format!("{w}: coordinate in band but source {:?} covered", r.witness));
            }
        }
        if n > q + 1 {
            let r = target_uncovered_check_with(spec, n, table)?;
            s.checked += r.checked as u64;
            for (u, w) in &r.counterexamples {
                s.check(false, || format!("uncovered {u} has covered target {w}"));
            }
        }
    }
    Ok(s)
}

fn ladder_suite(spec: &PolynomialSpec, levels: u32, mutation: Option<Mutation>) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("ladder");
    let d = spec.degree();
    let shift = u32::from(mutation == Some(Mutation::LadderShift));
    for n in 1..=levels {
        for z in spec.enumerate_vertices(n) {
            let sources = spec.source_set(&z);
            for j in 0..spec.arity() {
                if z.coords[j] < d || z.coords[j] > (n - 1) * d {
                    s.check(source_ladder(spec, &z, j).is_err(), || format!("ladder accepted {z}, {j}"));
                    continue;
                }
                let ladder = source_ladder(spec, &z, j)?;
                s.check(ladder.len() == d as usize + 1, || format!("ladder of {z} has {} rungs", ladder.len()));
                for (l, w) in ladder.iter().enumerate() {
                    let expect = i64::from(z.coords[j]) - l as i64 - i64::from(shift);
                    s.check(i64::from(w.coords[j]) == expect && sources.contains(w), || {
                        format!("rung {l} of ladder({z}, {j}) is {w}")
                    });
                }
            }
        }
    }
    Ok(s)
}

fn dimension_suite(diagram: &Diagram, mutation: Option<Mutation>) -> SuiteResult {
    let mut s = SuiteResult::new("dimension");
    let bump = u32::from(mutation == Some(Mutation::DimensionOffByOne));
    match SparsePoly::from_spec(diagram.spec(), diagram.multiplicity_mode()) {
        Some(base) => {
            let ps = powers(&base, diagram.max_level());
            for n in 0..=diagram.max_level() {
                for (i, v) in diagram.level(n).iter().enumerate() {
                    let expected = ps[n as usize].coefficient(&v.coords) + bump;
                    let got = diagram.dimension_at(n, i);
                    s.check(*got == expected, || format!("dim {v} = {got}, expansion gives {expected}"));
                }
            }
        }
        None => s.note = Some("per-pair multiplicities have no generating polynomial".into()),
    }
    for n in 2..=diagram.max_level() {
        for (i, v) in diagram.level(n).iter().enumerate() {
            if !v.is_corner() {
                let got = diagram.dimension_at(n, i);
                s.check(*got >= BigUint::from(n), || format!("non-corner {v} has only {got} paths"));
            }
        }
    }
    s
}

fn vershik_suite(diagram: &Diagram, cfg: &VerifyConfig) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("vershik");
    let od = OrderedDiagram::new(diagram.clone(), cfg.ordering.clone())?;
    let mut skipped = 0u64;
    for n in 0..=diagram.max_level() {
        for (i, v) in diagram.level(n).iter().enumerate() {
            if n >= 1 {
                let coding = od.vertex_coding(v, n - 1, u64::MAX)?;
                for u in diagram.spec().source_set(v) {
                    let times = coding.iter().filter(|c| **c == u).count() as u64;
                    let m = diagram.edge_multiplicity(&u, v);
                    s.check(times == m, || format!("{u} appears {times} times in C(n-1) of {v}, multiplicity {m}"));
                }
            }
            let dim = diagram.dimension_at(n, i);
            if *dim > BigUint::from(cfg.tower_limit) {
                skipped += 1;
                continue;
            }
            let tower = match od.tower(v, cfg.tower_limit) {
                Ok(t) => t,
                Err(Error::TowerTooLarge { .. }) => unreachable!("dimension checked above"),
                Err(e) => return Err(e),
            };
            s.check(BigUint::from(tower.paths.len()) == *dim, || {
                format!("tower of {v} has {} paths, dimension {dim}", tower.paths.len())
            });
            let distinct: HashSet<&Vec<u32>> = tower.paths.iter().map(|x| &x.labels).collect();
            s.check(distinct.len() == tower.paths.len(), || format!("tower of {v} repeats a path"));
            s.check(tower.paths.last() == Some(&od.maximal_path(v)?), || format!("tower of {v} does not end at the maximal path"));
            for (r, x) in tower.paths.iter().enumerate() {
                let rank = od.rank(x)?;
                s.check(rank == BigUint::from(r), || format!("path {r} into {v} has rank {rank}"));
                s.check(&od.unrank(v, &BigUint::from(r))? == x, || format!("unrank({v}, {r}) mismatch"));
                if r > 0 {
                    s.check(od.predecessor(x)? == tower.paths[r - 1], || format!("predecessor of path {r} into {v}"));
                }
            }
        }
    }
    if skipped > 0 {
        s.note = Some(format!("{skipped} towers above {} paths not walked", cfg.tower_limit));
    }
    Ok(s)
}

fn link_suite(spec: &PolynomialSpec, table: &CoverageTable, levels: u32) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("link-consequences");
    let d = spec.degree();
    for n in 2..=levels {
        for w1 in spec.enumerate_vertices(n) {
            let partners: HashSet<Vertex> = spec
                .source_set(&w1)
                .iter()
                .flat_map(|u| spec.targets(u))
                .filter(|w0| *w0 != w1)
                .collect();
            let mut partners: Vec<Vertex> = partners.into_iter().collect();
            partners.sort();
            for j in 0..spec.arity() {
                if w1.coords[j] < 2 * d {
                    continue;
                }
                for w0 in partners.iter().filter(|w0| w1.coords[j] <= w0.coords[j]) {
                    let r = check_link_consequences_with(spec, w0, &w1, j, |v| table.is_covered(spec, v))?;
                    s.check(r.passed(), || format!("link {w0}, {w1} in direction {j}: {r:?}"));
                }
            }
        }
    }
    Ok(s)
}

fn chain_suite(spec: &PolynomialSpec, table: &CoverageTable, levels: u32) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("chains");
    let d = spec.degree();
    let q = spec.arity() as u32;
    for n in q + 1..=levels {
        for start in find_chain_start(spec, n)? {
            let j = start.direction;
            let ok = !table.is_covered(spec, &start.v)
                && !table.is_covered(spec, &start.v_prime)
                && spec.source_vector_between(&start.shared, &start.v).is_some()
                && spec.source_vector_between(&start.shared, &start.v_prime).is_some()
                && 2 * d * d + 4 * d <= start.v_prime.coords[j]
                && start.v_prime.coords[j] < start.v.coords[j]
                && start.v.coords[j] <= (n - 2) * d;
            s.check(ok, || format!("chain start {start:?} fails its conditions"));
        }
    }
    for n in 2..=levels {
        for w0 in spec.enumerate_vertices(n) {
            for u0 in spec.source_set(&w0) {
                for w1 in spec.targets(&u0).into_iter().filter(|w1| *w1 != w0) {
                    for j in 0..spec.arity() {
                        let Ok(chain) = build_distinguished_chain(spec, &w0, &w1, &u0, j, 3) else {
                            continue;
                        };
                        let v = validate_chain(spec, &chain)?;
                        s.check(v.is_chain && v.is_straight && v.distinguished_direction == Some(j), || {
                            format!("built chain {chain:?} validates as {v:?}")
                        });
                        for pair in chain.splitting[1..].windows(2) {
                            let drop = i64::from(pair[0].coords[j]) - i64::from(pair[1].coords[j]);
                            s.check((1..=i64::from(d)).contains(&drop), || {
                                format!("chain from {w0}, {w1}: drop {drop} between {} and {}", pair[0], pair[1])
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(s)
}

fn measure_suite(diagram: &Diagram) -> Result<SuiteResult> {
    let mut s = SuiteResult::new("measure");
    let mode = diagram.multiplicity_mode();
    if !mode.is_polynomial() {
        s.note = Some(format!("skipped: measures need coefficient multiplicities, mode is {}", mode.name()));
        return Ok(s);
    }
    let spec = diagram.spec();
    let w = solve_symmetric_weight(spec, mode)?;
    s.check(w.residual <= 1e-12, || format!("symmetric weight residual {:e}", w.residual));
    for n in 0..=diagram.max_level() {
        let total = level_mass(diagram, n, &w)?;
        s.check((total - 1.0).abs() <= 1e-9, || format!("level {n} mass {total}"));
        if n >= 2 {
            let b = minimal_mass_bound(spec, mode, n, &w)?;
            s.check(b.pass, || format!("level {n}: minimal mass {} above {}", b.mass, b.bound));
        }
    }
    let od = OrderedDiagram::new(diagram.clone(), OrderingSpec::SourceLex)?;
    for n in 1..=diagram.max_level().min(6) {
        for v in diagram.level(n) {
            let Ok(tower) = od.tower(v, 200) else { continue };
            let expected: f64 = v.coords.iter().zip(&w.theta).map(|(&c, t)| t.powi(c as i32)).product();
            for x in &tower.paths {
                let c = cylinder_measure(diagram, &od.edges(x)?, &w)?;
                s.check((c - expected).abs() <= 1e-12 * expected.max(1e-300), || {
                    format!("cylinder into {v}: {c} vs {expected}")
                });
            }
        }
    }
    Ok(s)
}
