//! Chains of splitting and shared vertices.
//!
//! A chain of length `k` at level `n` alternates splitting vertices
//! `w_0, ..., w_k` (level `n`) with shared vertices `u_0, ..., u_{k-1}`
//! (level `n - 1`), where each `u_l` is a source of both `w_l` and
//! `w_{l+1}`.

use serde::{Serialize, Serializer};

use crate::coverage::{is_covered_oracle, CoverageTable};
use crate::error::{Error, Result};
use crate::polynomial::PolynomialSpec;
use crate::vertex::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub level: u32,
    #[serde(serialize_with = "crate::report::coords_list")]
    pub splitting: Vec<Vertex>,
    #[serde(serialize_with = "crate::report::coords_list")]
    pub shared: Vec<Vertex>,
    /// 0-based; written 1-based.
    #[serde(serialize_with = "one_based")]
    pub direction: Option<usize>,
}

fn one_based<S: Serializer>(j: &Option<usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match j {
        Some(j) => s.serialize_some(&(j + 1)),
        None => s.serialize_none(),
    }
}

impl Chain {
    /// Number of links.
    pub fn len(&self) -> usize {
        self.shared.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shared.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainValidation {
    pub is_chain: bool,
    pub is_straight: bool,
    pub is_link: bool,
    #[serde(serialize_with = "one_based")]
    pub distinguished_direction: Option<usize>,
}

fn in_sources(spec: &PolynomialSpec, u: &Vertex, w: &Vertex) -> bool {
    spec.source_vector_between(u, w).is_some()
}

fn distinguished_in(spec: &PolynomialSpec, c: &Chain, j: usize) -> bool {
    (1..c.shared.len()).all(|l| spec.dsv(&c.splitting[l], j).as_ref() == Some(&c.shared[l]))
}

/// Evaluates the chain, straightness and distinguished-direction
/// predicates. When `c.direction` is set only that direction is tried.
pub fn validate_chain(spec: &PolynomialSpec, c: &Chain) -> Result<ChainValidation> {
    if c.splitting.is_empty() || c.shared.len() + 1 != c.splitting.len() {
        return Err(Error::LengthMismatch {
            splitting: c.splitting.len(),
            shared: c.shared.len(),
        });
    }
    for w in &c.splitting {
        spec.check_vertex(w)?;
    }
    for u in &c.shared {
        spec.check_vertex(u)?;
    }
    if let Some(j) = c.direction {
        spec.check_direction(j)?;
    }
    let levels_ok = c.splitting.iter().all(|w| w.level == c.level)
        && c.shared.iter().all(|u| u.level + 1 == c.level);
    let is_chain = levels_ok
        && c.shared.iter().enumerate().all(|(l, u)| {
            in_sources(spec, u, &c.splitting[l]) && in_sources(spec, u, &c.splitting[l + 1])
        });
    let mut all: Vec<&Vertex> = c.splitting.iter().chain(&c.shared).collect();
    all.sort();
    all.dedup();
    let is_straight = all.len() == c.splitting.len() + c.shared.len();
    let distinguished_direction = if !(is_chain && is_straight) {
        None
    } else if let Some(j) = c.direction {
        distinguished_in(spec, c, j).then_some(j)
    } else if c.shared.len() <= 1 {
        None
    } else {
        (0..spec.arity()).find(|&j| distinguished_in(spec, c, j))
    };
    Ok(ChainValidation {
        is_chain,
        is_straight,
        is_link: is_chain && c.shared.len() == 1,
        distinguished_direction,
    })
}

/// Grows the link `w0 - u0 - w1` into a distinguished chain with
/// `target_len` links: `u_l = dsv(w_l, j)` and `w_{l+1}` is the target of
/// `u_l` other than `w_l` with the largest `j`-coordinate (first in
/// canonical order on ties).
pub fn build_distinguished_chain(
    spec: &PolynomialSpec,
    w0: &Vertex,
    w1: &Vertex,
    u0: &Vertex,
    j: usize,
    target_len: usize,
) -> Result<Chain> {
    spec.check_vertex(w0)?;
    spec.check_vertex(w1)?;
    spec.check_vertex(u0)?;
    spec.check_direction(j)?;
    if w0 == w1 || w0.level != w1.level {
        return Err(Error::HypothesisNotMet(format!(
            "{w0} and {w1} must be distinct vertices of one level"
        )));
    }
    if !in_sources(spec, u0, w0) || !in_sources(spec, u0, w1) {
        return Err(Error::HypothesisNotMet(format!(
            "{u0} is not a shared source of {w0} and {w1}"
        )));
    }
    if spec.dsv(w1, j).is_none() {
        return Err(Error::DsvAbsent {
            vertex: w1.coords.clone(),
            direction: j,
        });
    }
    let mut chain = Chain {
        level: w0.level,
        splitting: vec![w0.clone(), w1.clone()],
        shared: vec![u0.clone()],
        direction: Some(j),
    };
    if u0 == w0 || u0 == w1 {
        return Err(Error::NoExtension(0));
    }
    while chain.shared.len() < target_len {
        let links = chain.shared.len();
        let w = chain.splitting.last().expect("chain has splitting vertices");
        let u = spec.dsv(w, j).ok_or(Error::NoExtension(links))?;
        if chain.shared.contains(&u) {
            return Err(Error::NoExtension(links));
        }
        let next = spec
            .targets(&u)
            .into_iter()
            .filter(|t| t != w)
            .fold(None::<Vertex>, |best, t| match best {
                Some(b) if b.coords[j] >= t.coords[j] => Some(b),
                _ => Some(t),
            })
            .ok_or(Error::NoExtension(links))?;
        if chain.splitting.contains(&next) {
            return Err(Error::NoExtension(links));
        }
        chain.shared.push(u);
        chain.splitting.push(next);
    }
    Ok(chain)
}

/// A pair of uncovered vertices meeting the chain-start inequality
/// `2d^2 + 4d <= v'(j) < v(j) <= (n - 2) d`, with one shared source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStart {
    #[serde(serialize_with = "crate::report::coords")]
    pub v: Vertex,
    #[serde(serialize_with = "crate::report::coords")]
    pub v_prime: Vertex,
    #[serde(serialize_with = "one_based_plain")]
    pub direction: usize,
    #[serde(serialize_with = "crate::report::coords")]
    pub shared: Vertex,
}

fn one_based_plain<S: Serializer>(j: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(*j as u64 + 1)
}

/// Every ordered pair satisfying the chain-start conditions, each with its
/// smallest qualifying direction and first shared source in canonical
/// order.
pub fn find_chain_start(spec: &PolynomialSpec, level: u32) -> Result<Vec<ChainStart>> {
    let q = spec.arity() as u32;
    if level <= q {
        return Err(Error::PreconditionNotMet(format!(
            "chain starts need level > q = {q}, got {level}"
        )));
    }
    let d = spec.degree();
    let low = 2 * d * d + 4 * d;
    let high = (level - 2) * d;
    if low >= high {
        return Ok(Vec::new());
    }
    let table = CoverageTable::new(spec, level);
    let uncovered: Vec<Vertex> = spec
        .enumerate_vertices(level)
        .into_iter()
        .filter(|w| !table.is_covered(spec, w))
        .collect();
    let mut out = Vec::new();
    for v in &uncovered {
        let sources = spec.source_set(v);
        for vp in &uncovered {
            if v == vp {
                continue;
            }
            let Some(j) = (0..spec.arity())
                .find(|&j| low <= vp.coords[j] && vp.coords[j] < v.coords[j] && v.coords[j] <= high)
            else {
                continue;
            };
            if let Some(u) = sources.iter().find(|u| in_sources(spec, u, vp)) {
                out.push(ChainStart {
                    v: v.clone(),
                    v_prime: vp.clone(),
                    direction: j,
                    shared: u.clone(),
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "kebab-case")]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    NotApplicable(String),
}

impl CheckOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    /// `dsv(w1, j)` is not a source of `w0` when `w1(j) <= w0(j)`.
    pub dsv_not_shared: CheckOutcome,
    /// Sources of `w1` and their targets are uncovered when
    /// `2d <= w1(j) <= (n - 2) d`.
    pub uncovered_neighbourhood: CheckOutcome,
    /// `dsv(w1, j)` has a target other than `w0` and `w1`.
    pub has_candidates: CheckOutcome,
    #[serde(serialize_with = "crate::report::coords_list")]
    pub candidates: Vec<Vertex>,
}

impl LinkReport {
    pub fn passed(&self) -> bool {
        ![&self.dsv_not_shared, &self.uncovered_neighbourhood, &self.has_candidates]
            .iter()
            .any(|c| c.is_fail())
    }
}

/// Static ingredients for extending the link `w0, w1` in direction `j`.
pub fn check_link_consequences(spec: &PolynomialSpec, w0: &Vertex, w1: &Vertex, j: usize) -> Result<LinkReport> {
    check_link_consequences_with(spec, w0, w1, j, |v| is_covered_oracle(spec, v))
}

pub(crate) fn check_link_consequences_with(
    spec: &PolynomialSpec,
    w0: &Vertex,
    w1: &Vertex,
    j: usize,
    covered: impl Fn(&Vertex) -> bool,
) -> Result<LinkReport> {
    spec.check_vertex(w0)?;
    spec.check_vertex(w1)?;
    spec.check_direction(j)?;
    if w0.level != w1.level {
        return Err(Error::HypothesisNotMet(format!(
            "levels differ: {} != {}",
            w0.level, w1.level
        )));
    }
    if w0 == w1 {
        return Err(Error::HypothesisNotMet(format!("w0 = w1 = {w0}")));
    }
    if !spec.source_set(w0).iter().any(|u| in_sources(spec, u, w1)) {
        return Err(Error::HypothesisNotMet(format!(
            "S({w0}) and S({w1}) are disjoint"
        )));
    }
    let n = w0.level;
    let d = spec.degree();
    let q = spec.arity() as u32;
    let dsv = spec.dsv(w1, j);

    let dsv_not_shared = match &dsv {
        None => CheckOutcome::NotApplicable(format!("w1(j) = {} < d", w1.coords[j])),
        Some(_) if w1.coords[j] > w0.coords[j] => CheckOutcome::NotApplicable(format!(
            "w1(j) = {} > w0(j) = {}",
            w1.coords[j], w0.coords[j]
        )),
        Some(u) if in_sources(spec, u, w0) => CheckOutcome::Fail(format!("{u} is a source of {w0}")),
        Some(_) => CheckOutcome::Pass,
    };

    let band = 2 * d <= w1.coords[j] && w1.coords[j] <= n.saturating_sub(2) * d;
    let uncovered_neighbourhood = if !band {
        CheckOutcome::NotApplicable(format!(
            "w1(j) = {} outside [{}, {}]",
            w1.coords[j],
            2 * d,
            n.saturating_sub(2) * d
        ))
    } else if n <= q + 1 {
        CheckOutcome::NotApplicable(format!("level {n} needs to exceed q + 1 = {}", q + 1))
    } else {
        let mut failure = None;
        'outer: for u in spec.source_set(w1) {
            if covered(&u) {
                failure = Some(format!("source {u} is covered"));
                break;
            }
            for t in spec.targets(&u) {
                if covered(&t) {
                    failure = Some(format!("target {t} of {u} is covered"));
                    break 'outer;
                }
            }
        }
        failure.map_or(CheckOutcome::Pass, CheckOutcome::Fail)
    };

    let candidates: Vec<Vertex> = dsv
        .as_ref()
        .map(|u| {
            spec.targets(u)
                .into_iter()
                .filter(|t| t != w0 && t != w1)
                .collect()
        })
        .unwrap_or_default();
    let has_candidates = match (&dsv, &dsv_not_shared) {
        (None, _) => CheckOutcome::NotApplicable("dsv(w1, j) is absent".into()),
        (_, CheckOutcome::NotApplicable(why)) => CheckOutcome::NotApplicable(why.clone()),
        _ if candidates.is_empty() => CheckOutcome::Fail("no extension candidate".into()),
        _ => CheckOutcome::Pass,
    };
    Ok(LinkReport {
        dsv_not_shared,
        uncovered_neighbourhood,
        has_candidates,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_polynomial;

    fn v(level: u32, c: &[u32]) -> Vertex {
        Vertex::new(level, c.to_vec())
    }

    fn quartic() -> PolynomialSpec {
        parse_polynomial("x1^4 + 2 x1^3 x2 + x1^2 x2^2 + 3 x1 x2^3 + x2^4").unwrap()
    }

    #[test]
    fn validation() {
        let p = PolynomialSpec::linear(2).unwrap();
        let link = Chain {
            level: 7,
            splitting: vec![v(7, &[4, 3]), v(7, &[3, 4])],
            shared: vec![v(6, &[3, 3])],
            direction: None,
        };
        let r = validate_chain(&p, &link).unwrap();
        assert!(r.is_chain && r.is_straight && r.is_link);

        let repeated = Chain {
            level: 7,
            splitting: vec![v(7, &[4, 3]), v(7, &[3, 4]), v(7, &[4, 3])],
            shared: vec![v(6, &[3, 3]), v(6, &[3, 3])],
            direction: None,
        };
        assert!(!validate_chain(&p, &repeated).unwrap().is_straight);

        let c = Chain {
            level: 10,
            splitting: vec![v(10, &[7, 3]), v(10, &[6, 4]), v(10, &[5, 5])],
            shared: vec![v(9, &[6, 3]), v(9, &[5, 4])],
            direction: None,
        };
        assert_eq!(validate_chain(&p, &c).unwrap().distinguished_direction, Some(0));

        let bad = Chain {
            level: 10,
            splitting: vec![v(10, &[7, 3])],
            shared: vec![v(9, &[6, 3])],
            direction: None,
        };
        assert!(matches!(validate_chain(&p, &bad), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn pascal_chain() {
        let p = PolynomialSpec::linear(2).unwrap();
        let c = build_distinguished_chain(&p, &v(10, &[7, 3]), &v(10, &[6, 4]), &v(9, &[6, 3]), 0, 3).unwrap();
        assert_eq!(
            c.splitting,
            vec![v(10, &[7, 3]), v(10, &[6, 4]), v(10, &[5, 5]), v(10, &[4, 6])]
        );
        assert_eq!(c.shared, vec![v(9, &[6, 3]), v(9, &[5, 4]), v(9, &[4, 5])]);
        let r = validate_chain(&p, &c).unwrap();
        assert!(r.is_straight);
        assert_eq!(r.distinguished_direction, Some(0));
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains(r#""direction":1"#));
    }

    #[test]
    fn quartic_extension_step() {
        let p = quartic();
        let w1 = v(5, &[12, 8]);
        let w0 = v(5, &[13, 7]);
        let u0 = v(4, &[12, 4]);
        let c = build_distinguished_chain(&p, &w0, &w1, &u0, 0, 2).unwrap();
        assert_eq!(c.shared[1], v(4, &[8, 8]));
        assert_eq!(c.splitting[2], v(5, &[11, 9]));
    }

    #[test]
    fn chain_errors() {
        let p = quartic();
        let r = build_distinguished_chain(&p, &v(2, &[5, 3]), &v(2, &[1, 7]), &v(1, &[1, 3]), 0, 2);
        assert!(matches!(r, Err(Error::DsvAbsent { .. })));
    }

    #[test]
    fn chain_starts() {
        let p = PolynomialSpec::linear(2).unwrap();
        let starts = find_chain_start(&p, 10).unwrap();
        assert!(starts
            .iter()
            .any(|s| s.v == v(10, &[8, 2]) && s.v_prime == v(10, &[7, 3]) && s.shared == v(9, &[7, 2])));
        assert!(find_chain_start(&p, 8).unwrap().is_empty());
        assert!(!find_chain_start(&p, 9).unwrap().is_empty());
        assert!(find_chain_start(&quartic(), 8).unwrap().is_empty());
    }

    #[test]
    fn link_consequences() {
        let p = PolynomialSpec::linear(2).unwrap();
        let r = check_link_consequences(&p, &v(10, &[7, 3]), &v(10, &[6, 4]), 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.dsv_not_shared, CheckOutcome::Pass);
        assert_eq!(r.uncovered_neighbourhood, CheckOutcome::Pass);
        assert_eq!(r.candidates, vec![v(10, &[5, 5])]);

        let r = check_link_consequences(&p, &v(10, &[6, 4]), &v(10, &[7, 3]), 0).unwrap();
        assert!(matches!(r.dsv_not_shared, CheckOutcome::NotApplicable(_)));

        let q = quartic();
        let r = check_link_consequences(&q, &v(5, &[13, 7]), &v(5, &[12, 8]), 0).unwrap();
        assert_eq!(r.uncovered_neighbourhood, CheckOutcome::Pass);

        assert!(matches!(
            check_link_consequences(&p, &v(10, &[7, 3]), &v(10, &[3, 7]), 0),
            Err(Error::HypothesisNotMet(_))
        ));
    }
}
