//! Covered and uncovered vertices.
//!
//! `w` is covered when some other vertex `w'` of its level has
//! `S(w) ⊆ S(w')`. For levels `n > q` this happens exactly when a
//! coordinate of `w` exceeds `(n - 1) d`; the brute-force oracle here
//! checks that claim by direct inclusion testing.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polynomial::PolynomialSpec;
use crate::vertex::Vertex;

/// Closed-form coverage test. `None` for levels `n <= q`, where the
/// closed form is not established.
pub fn is_covered_formula(spec: &PolynomialSpec, w: &Vertex) -> Option<bool> {
    is_covered_formula_with_slack(spec, w, 1)
}

/// The closed form with the threshold `(n - slack) d`. Only `slack = 1` is
/// correct; other values feed mutation runs.
pub fn is_covered_formula_with_slack(spec: &PolynomialSpec, w: &Vertex, slack: u32) -> Option<bool> {
    let q = spec.arity() as u32;
    if w.level <= q {
        return None;
    }
    let threshold = u64::from(w.level.saturating_sub(slack)) * u64::from(spec.degree());
    Some(w.coords.iter().any(|&c| u64::from(c) > threshold))
}

fn source_keys(spec: &PolynomialSpec, w: &Vertex) -> HashSet<Vec<u32>> {
    spec.source_set(w).into_iter().map(|u| u.coords).collect()
}

/// Every `w' != w` at the level of `w` with `S(w) ⊆ S(w')`, found by
/// testing inclusion against each vertex of the level.
pub fn covering_vertices(spec: &PolynomialSpec, w: &Vertex) -> Vec<Vertex> {
    let mine = source_keys(spec, w);
    spec.enumerate_vertices(w.level)
        .into_iter()
        .filter(|other| other != w)
        .filter(|other| {
            let theirs = source_keys(spec, other);
            mine.iter().all(|u| theirs.contains(u))
        })
        .collect()
}

pub fn is_covered_oracle(spec: &PolynomialSpec, w: &Vertex) -> bool {
    !covering_vertices(spec, w).is_empty()
}

/// Oracle coverage status of every vertex up to a horizon, computed once.
#[derive(Debug, Clone)]
pub struct CoverageTable {
    covered: Vec<HashSet<Vec<u32>>>,
}

impl CoverageTable {
    pub fn new(spec: &PolynomialSpec, max_level: u32) -> Self {
        let covered = (0..=max_level)
            .map(|n| {
                let vs = spec.enumerate_vertices(n);
                let keys: Vec<HashSet<Vec<u32>>> = vs.iter().map(|w| source_keys(spec, w)).collect();
                vs.iter()
                    .enumerate()
                    .filter(|&(i, _)| {
                        keys.iter()
                            .enumerate()
                            .any(|(k, theirs)| k != i && keys[i].iter().all(|u| theirs.contains(u)))
                    })
                    .map(|(_, w)| w.coords.clone())
                    .collect()
            })
            .collect();
        Self { covered }
    }

    pub fn max_level(&self) -> u32 {
        self.covered.len() as u32 - 1
    }

    /// Oracle status; vertices beyond the table fall back to a direct check.
    pub fn is_covered(&self, spec: &PolynomialSpec, w: &Vertex) -> bool {
        match self.covered.get(w.level as usize) {
            Some(set) => set.contains(&w.coords),
            None => is_covered_oracle(spec, w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexCoverage {
    #[serde(rename = "v", serialize_with = "crate::report::coords")]
    pub vertex: Vertex,
    pub formula: Option<bool>,
    pub oracle: bool,
    #[serde(rename = "covered_by", serialize_with = "crate::report::coords_list")]
    pub covering_set: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub level: u32,
    pub vertices: Vec<VertexCoverage>,
    #[serde(serialize_with = "crate::report::coords_list")]
    pub discrepancies: Vec<Vertex>,
}

impl CoverageReport {
    pub fn covered_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.oracle).count()
    }

    pub fn uncovered_count(&self) -> usize {
        self.vertices.len() - self.covered_count()
    }
}

/// Formula against oracle for every vertex of a level.
pub fn coverage_report(spec: &PolynomialSpec, level: u32) -> CoverageReport {
    coverage_report_with_slack(spec, level, 1)
}

pub fn coverage_report_with_slack(spec: &PolynomialSpec, level: u32, slack: u32) -> CoverageReport {
    let mut vertices = Vec::new();
    let mut discrepancies = Vec::new();
    for w in spec.enumerate_vertices(level) {
        let covering_set = covering_vertices(spec, &w);
        let oracle = !covering_set.is_empty();
        let formula = is_covered_formula_with_slack(spec, &w, slack);
        if formula.is_some_and(|f| f != oracle) {
            discrepancies.push(w.clone());
        }
        vertices.push(VertexCoverage {
            vertex: w,
            formula,
            oracle,
            covering_set,
        });
    }
    CoverageReport {
        level,
        vertices,
        discrepancies,
    }
}

/// Readings of the covering-set description for a covered vertex `w` with
/// `w(j) > (n - 1) d` and `c(w) = d - sum_{i != j} w(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cov2Convention {
    /// `σ = w - w'`, `-d <= σ(j) < 0`, `σ(i) >= 0` otherwise.
    SourceMinusCover,
    /// `σ = w' - w`, `-d <= σ(j) < 0`, `σ(i) >= 0` otherwise.
    CoverMinusSource,
    /// `σ = w' - w`, `-c(w) <= σ(j) < 0`, `σ(i) >= 0` otherwise.
    CoverMinusSourceTight,
}

impl Cov2Convention {
    pub const ALL: [Cov2Convention; 3] = [
        Cov2Convention::SourceMinusCover,
        Cov2Convention::CoverMinusSource,
        Cov2Convention::CoverMinusSourceTight,
    ];

    fn predicts(self, d: i64, c: i64, j: usize, w: &Vertex, other: &Vertex) -> bool {
        let sigma: Vec<i64> = match self {
            Cov2Convention::SourceMinusCover => w
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| i64::from(a) - i64::from(b))
                .collect(),
            _ => other
                .coords
                .iter()
                .zip(&w.coords)
                .map(|(&a, &b)| i64::from(a) - i64::from(b))
                .collect(),
        };
        let low = match self {
            Cov2Convention::CoverMinusSourceTight => -c,
            _ => -d,
        };
        (low..0).contains(&sigma[j])
            && sigma
                .iter()
                .enumerate()
                .all(|(i, &s)| i == j || s >= 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cov2Mismatch {
    #[serde(serialize_with = "crate::report::coords")]
    pub vertex: Vertex,
    pub convention: Cov2Convention,
    #[serde(serialize_with = "crate::report::coords_list")]
    pub predicted_only: Vec<Vertex>,
    #[serde(serialize_with = "crate::report::coords_list")]
    pub actual_only: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cov2Report {
    pub level: u32,
    pub covered_checked: usize,
    pub mismatches: Vec<Cov2Mismatch>,
    /// Conventions with no mismatch at this level.
    pub matching: Vec<Cov2Convention>,
}

impl Cov2Report {
    pub fn mismatches_for(&self, convention: Cov2Convention) -> usize {
        self.mismatches
            .iter()
            .filter(|m| m.convention == convention)
            .count()
    }
}

/// Compares predicted covering sets under each convention with the brute
/// force covering sets, for every covered vertex of a level `> q`.
pub fn check_cov2(spec: &PolynomialSpec, level: u32) -> Result<Cov2Report> {
    let q = spec.arity() as u32;
    if level <= q {
        return Err(Error::PreconditionNotMet(format!(
            "covering-set check needs level > q = {q}, got {level}"
        )));
    }
    let d = spec.degree();
    let threshold = (level - 1) * d;
    let vertices = spec.enumerate_vertices(level);
    let mut mismatches = Vec::new();
    let mut covered_checked = 0;
    for w in &vertices {
        let actual: BTreeSet<Vertex> = covering_vertices(spec, w).into_iter().collect();
        if actual.is_empty() {
            continue;
        }
        covered_checked += 1;
        let Some(j) = w.coords.iter().position(|&c| c > threshold) else {
            // Covered without a large coordinate: every convention misses it.
            for convention in Cov2Convention::ALL {
                mismatches.push(Cov2Mismatch {
                    vertex: w.clone(),
                    convention,
                    predicted_only: Vec::new(),
                    actual_only: actual.iter().cloned().collect(),
                });
            }
            continue;
        };
        let others: u32 = w.coords.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &c)| c).sum();
        let c = i64::from(d) - i64::from(others);
        for convention in Cov2Convention::ALL {
            let predicted: BTreeSet<Vertex> = vertices
                .iter()
                .filter(|o| *o != w && convention.predicts(i64::from(d), c, j, w, o))
                .cloned()
                .collect();
            if predicted != actual {
                mismatches.push(Cov2Mismatch {
                    vertex: w.clone(),
                    convention,
                    predicted_only: predicted.difference(&actual).cloned().collect(),
                    actual_only: actual.difference(&predicted).cloned().collect(),
                });
            }
        }
    }
    let matching = Cov2Convention::ALL
        .into_iter()
        .filter(|&c| mismatches.iter().all(|m| m.convention != c))
        .collect();
    Ok(Cov2Report {
        level,
        covered_checked,
        mismatches,
        matching,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceUncovered {
    pub all_uncovered: bool,
    /// First covered source vertex, if any.
    #[serde(serialize_with = "crate::report::opt_coords")]
    pub witness: Option<Vertex>,
    /// Every coordinate of `w` is at most `(n - 2) d`.
    pub all_coords_bounded: bool,
    /// Some coordinate lies in `[2d, (n - 2) d]`.
    pub some_coord_in_band: bool,
}

/// Whether every source of `w` is uncovered, with the two sufficient
/// conditions evaluated alongside.
pub fn source_all_uncovered(spec: &PolynomialSpec, w: &Vertex) -> Result<SourceUncovered> {
    source_all_uncovered_with(spec, w, |u| is_covered_oracle(spec, u))
}

pub(crate) fn source_all_uncovered_with(
    spec: &PolynomialSpec,
    w: &Vertex,
    covered: impl Fn(&Vertex) -> bool,
) -> Result<SourceUncovered> {
    spec.check_vertex(w)?;
    let q = spec.arity() as u32;
    if w.level <= q {
        return Err(Error::PreconditionNotMet(format!(
            "source check needs level > q = {q}, got {}",
            w.level
        )));
    }
    let d = spec.degree();
    let bound = (w.level - 2) * d;
    let witness = spec.source_set(w).into_iter().find(|u| covered(u));
    Ok(SourceUncovered {
        all_uncovered: witness.is_none(),
        witness,
        all_coords_bounded: w.coords.iter().all(|&c| c <= bound),
        some_coord_in_band: w.coords.iter().any(|&c| 2 * d <= c && c <= bound),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TargetUncoveredReport {
    pub level: u32,
    pub checked: usize,
    /// `(uncovered source, covered target)` pairs.
    #[serde(serialize_with = "crate::report::coord_pairs")]
    pub counterexamples: Vec<(Vertex, Vertex)>,
}

/// Every vertex of `level` with an uncovered source must itself be
/// uncovered. Needs `level - 1 > q`.
pub fn target_uncovered_check(spec: &PolynomialSpec, level: u32) -> Result<TargetUncoveredReport> {
    let table = CoverageTable::new(spec, level);
    target_uncovered_check_with(spec, level, &table)
}

pub(crate) fn target_uncovered_check_with(
    spec: &PolynomialSpec,
    level: u32,
    table: &CoverageTable,
) -> Result<TargetUncoveredReport> {
    let q = spec.arity() as u32;
    if level < 1 || level - 1 <= q {
        return Err(Error::PreconditionNotMet(format!(
            "target check needs level - 1 > q = {q}, got level {level}"
        )));
    }
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for w in spec.enumerate_vertices(level) {
        let Some(u) = spec
            .source_set(&w)
            .into_iter()
            .find(|u| !table.is_covered(spec, u))
        else {
            continue;
        };
        checked += 1;
        if table.is_covered(spec, &w) {
            counterexamples.push((u, w));
        }
    }
    Ok(TargetUncoveredReport {
        level,
        checked,
        counterexamples,
    })
}

/// `d + 1` vertices `w_0, ..., w_d` of `S(z)` with `w_l(j) = z(j) - l`.
///
/// Starts from a source vector with no mass on `j` (filled greedily from
/// the lowest other index) and moves one unit at a time onto `j`.
pub fn source_ladder(spec: &PolynomialSpec, z: &Vertex, j: usize) -> Result<Vec<Vertex>> {
    spec.check_vertex(z)?;
    spec.check_direction(j)?;
    let d = spec.degree();
    let high = z.level.saturating_sub(1) * d;
    let value = z.coords[j];
    if z.level == 0 || value < d || value > high {
        return Err(Error::LadderPreconditionViolated {
            value,
            low: d,
            high,
        });
    }
    let mut s = vec![0u32; z.arity()];
    let mut budget = d;
    for (i, slot) in s.iter_mut().enumerate() {
        if i == j {
            continue;
        }
        let take = z.coords[i].min(budget);
        *slot = take;
        budget -= take;
    }
    debug_assert_eq!(budget, 0);
    let below = |s: &[u32]| Vertex::new(z.level - 1, z.coords.iter().zip(s).map(|(a, b)| a - b).collect());
    let mut ladder = Vec::with_capacity(d as usize + 1);
    ladder.push(below(&s));
    for _ in 0..d {
        let donor = (0..s.len())
            .find(|&i| i != j && s[i] >= 1)
            .expect("source vector keeps mass off direction j until the last rung");
        s[donor] -= 1;
        s[j] += 1;
        ladder.push(below(&s));
    }
    Ok(ladder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_polynomial;

    fn quartic() -> PolynomialSpec {
        parse_polynomial("x1^4 + 2 x1^3 x2 + x1^2 x2^2 + 3 x1 x2^3 + x2^4").unwrap()
    }

    fn v(level: u32, c: &[u32]) -> Vertex {
        Vertex::new(level, c.to_vec())
    }

    #[test]
    fn formula_examples() {
        let pascal = PolynomialSpec::linear(2).unwrap();
        for n in 3..10 {
            assert_eq!(is_covered_formula(&pascal, &v(n, &[n, 0])), Some(true));
        }
        let p = quartic();
        assert_eq!(is_covered_formula(&p, &v(3, &[6, 6])), Some(false));
        assert_eq!(is_covered_formula(&p, &v(3, &[9, 3])), Some(true));
        assert_eq!(is_covered_formula(&p, &v(2, &[8, 0])), None);
    }

    #[test]
    fn oracle_examples() {
        let p = quartic();
        assert!(!is_covered_oracle(&p, &v(3, &[6, 6])));
        let q3 = PolynomialSpec::all_ones(3, 2).unwrap();
        assert!(!is_covered_oracle(&q3, &v(2, &[2, 1, 1])));
        let pascal = PolynomialSpec::linear(2).unwrap();
        for n in 2..8 {
            assert_eq!(covering_vertices(&pascal, &v(n, &[n, 0])), vec![v(n, &[n - 1, 1])]);
        }
        assert_eq!(
            covering_vertices(&p, &v(3, &[12, 0])),
            vec![v(3, &[11, 1]), v(3, &[10, 2]), v(3, &[9, 3]), v(3, &[8, 4])]
        );
        assert!(covering_vertices(&p, &v(3, &[6, 6])).is_empty());
    }

    #[test]
    fn quartic_level_three_counts() {
        let r = coverage_report(&quartic(), 3);
        assert_eq!((r.covered_count(), r.uncovered_count()), (8, 5));
        assert!(r.discrepancies.is_empty());
    }

    #[test]
    fn wrong_threshold_is_detected() {
        let r = coverage_report_with_slack(&quartic(), 5, 2);
        assert!(!r.discrepancies.is_empty());
    }

    #[test]
    fn cov2_conventions() {
        let pascal = PolynomialSpec::linear(2).unwrap();
        for n in 3..=8 {
            let r = check_cov2(&pascal, n).unwrap();
            assert_eq!(r.mismatches_for(Cov2Convention::CoverMinusSourceTight), 0);
            assert!(r.mismatches_for(Cov2Convention::SourceMinusCover) > 0);
        }
        let r = check_cov2(&quartic(), 3).unwrap();
        assert_eq!(r.covered_checked, 8);
        assert_eq!(r.matching, vec![Cov2Convention::CoverMinusSourceTight]);
        assert!(check_cov2(&pascal, 2).is_err());
    }

    #[test]
    fn source_uncovered_examples() {
        let p = quartic();
        let r = source_all_uncovered(&p, &v(4, &[8, 8])).unwrap();
        assert!(r.all_uncovered && r.all_coords_bounded);
        let r = source_all_uncovered(&p, &v(3, &[12, 0])).unwrap();
        assert!(!r.all_uncovered);
        assert_eq!(r.witness, Some(v(2, &[8, 0])));
        let pascal = PolynomialSpec::linear(2).unwrap();
        let r = source_all_uncovered(&pascal, &v(5, &[3, 2])).unwrap();
        assert!(r.all_uncovered && r.some_coord_in_band);
    }

    #[test]
    fn target_uncovered_examples() {
        let pascal = PolynomialSpec::linear(2).unwrap();
        for n in 4..=10 {
            let r = target_uncovered_check(&pascal, n).unwrap();
            assert!(r.counterexamples.is_empty());
            assert!(r.checked > 0);
        }
        assert!(matches!(
            target_uncovered_check(&pascal, 3),
            Err(Error::PreconditionNotMet(_))
        ));
        let p = quartic();
        for w in p.targets(&v(2, &[4, 4])) {
            assert!(!is_covered_oracle(&p, &w));
        }
    }

    #[test]
    fn ladder_examples() {
        let pascal = PolynomialSpec::linear(2).unwrap();
        assert_eq!(
            source_ladder(&pascal, &v(5, &[3, 2]), 0).unwrap(),
            vec![v(4, &[3, 1]), v(4, &[2, 2])]
        );
        let p = quartic();
        let ladder = source_ladder(&p, &v(3, &[6, 6]), 0).unwrap();
        let firsts: Vec<u32> = ladder.iter().map(|w| w.coords[0]).collect();
        assert_eq!(firsts, vec![6, 5, 4, 3, 2]);
        let sources = p.source_set(&v(3, &[6, 6]));
        assert!(ladder.iter().all(|w| sources.contains(w)));
        assert!(matches!(
            source_ladder(&p, &v(3, &[3, 9]), 0),
            Err(Error::LadderPreconditionViolated { .. })
        ));
    }
}
