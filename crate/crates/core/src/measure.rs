//! Geometric-weight invariant measures on polynomial diagrams.
//!
//! Weights `θ` with `p(θ) = 1` give every cylinder into `v` the mass
//! `θ^v`, independent of the path; the vertex then carries
//! `dim(v) θ^v`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::{Diagram, EdgeRef, Multiplicity};
use crate::error::{Error, Result};
use crate::polynomial::PolynomialSpec;
use crate::vertex::Vertex;

/// Accepted `|p(θ) - 1|` for user-supplied weights.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    pub theta: Vec<f64>,
    pub residual: f64,
}

fn require_polynomial(mode: &Multiplicity) -> Result<()> {
    if mode.is_polynomial() {
        Ok(())
    } else {
        Err(Error::MeasureModeUnsupported)
    }
}

/// `p(θ)` counting multiplicities.
pub fn evaluate(spec: &PolynomialSpec, theta: &[f64]) -> f64 {
    spec.terms()
        .map(|(s, a)| a as f64 * monomial(theta, s))
        .sum()
}

fn monomial(theta: &[f64], exp: &[u32]) -> f64 {
    theta
        .iter()
        .zip(exp)
        .map(|(t, &e)| t.powi(e as i32))
        .product()
}

impl WeightVector {
    /// Validates user weights: positive and on the surface `p(θ) = 1`.
    pub fn new(spec: &PolynomialSpec, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != spec.arity() {
            return Err(Error::InvalidWeights(format!(
                "expected {} weights, got {}",
                spec.arity(),
                theta.len()
            )));
        }
        if let Some(t) = theta.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {t} is not positive")));
        }
        let residual = (evaluate(spec, &theta) - 1.0).abs();
        if residual > WEIGHT_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "p(theta) differs from 1 by {residual:e}"
            )));
        }
        Ok(Self { theta, residual })
    }
}

/// `θ_i = t` with `t^d Σ a_s = 1`, by bisection on `(0, 1]` down to
/// floating-point resolution.
pub fn solve_symmetric_weight(spec: &PolynomialSpec, mode: &Multiplicity) -> Result<WeightVector> {
    require_polynomial(mode)?;
    let sum = spec.coefficient_sum() as f64;
    let d = spec.degree() as i32;
    let f = |t: f64| sum * t.powi(d) - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    let theta = vec![t; spec.arity()];
    let residual = (evaluate(spec, &theta) - 1.0).abs();
    Ok(WeightVector { theta, residual })
}

/// `{"theta": [..]}` or `{"symmetric": true}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
}

pub fn parse_weights_json(spec: &PolynomialSpec, input: &str) -> Result<WeightVector> {
    let json: WeightsJson = serde_json::from_str(input)?;
    match (json.theta, json.symmetric) {
        (Some(theta), None | Some(false)) => WeightVector::new(spec, theta),
        (None, Some(true)) => solve_symmetric_weight(spec, &Multiplicity::Coefficients),
        _ => Err(Error::InvalidWeights(
            "give exactly one of \"theta\" or \"symmetric\": true".into(),
        )),
    }
}

/// Product over the edges of `θ^(target - source)`.
pub fn cylinder_measure(diagram: &Diagram, path: &[EdgeRef], w: &WeightVector) -> Result<f64> {
    require_polynomial(diagram.multiplicity_mode())?;
    path.iter().try_fold(1.0, |acc, e| {
        let s = diagram
            .spec()
            .source_vector_between(&e.source, &e.target)
            .ok_or_else(|| Error::InvalidPath(format!("{} -> {} is not an edge", e.source, e.target)))?;
        Ok(acc * monomial(&w.theta, &s))
    })
}

pub fn vertex_measure(diagram: &Diagram, v: &Vertex, w: &WeightVector) -> Result<f64> {
    require_polynomial(diagram.multiplicity_mode())?;
    let dim = diagram.dimension(v)?.to_f64().unwrap_or(f64::INFINITY);
    Ok(dim * monomial(&w.theta, &v.coords))
}

/// `Σ_{v ∈ V_n} dim(v) θ^v`, which is `p(θ)^n`.
pub fn level_mass(diagram: &Diagram, level: u32, w: &WeightVector) -> Result<f64> {
    diagram
        .level(level)
        .iter()
        .map(|v| vertex_measure(diagram, v, w))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassBound {
    pub level: u32,
    pub mass: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Total mass of the minimal cylinders into non-corner vertices, one per
/// vertex, against `1 / level`.
pub fn minimal_mass_bound(spec: &PolynomialSpec, mode: &Multiplicity, level: u32, w: &WeightVector) -> Result<MassBound> {
    require_polynomial(mode)?;
    if level < 2 {
        return Err(Error::PreconditionNotMet(format!("mass bound needs level >= 2, got {level}")));
    }
    let mass: f64 = spec
        .enumerate_vertices(level)
        .iter()
        .filter(|v| !v.is_corner())
        .map(|v| monomial(&w.theta, &v.coords))
        .sum();
    let bound = 1.0 / f64::from(level);
    Ok(MassBound {
        level,
        mass,
        bound,
        pass: mass <= bound,
    })
}

/// Non-corner vertices of `level` with fewer than `level` paths.
pub fn dim_lower_bound_check(diagram: &Diagram, level: u32) -> Result<Vec<Vertex>> {
    if level > diagram.max_level() {
        return Err(Error::BeyondHorizon {
            level,
            max_level: diagram.max_level(),
        });
    }
    Ok(diagram
        .level(level)
        .iter()
        .enumerate()
        .filter(|(i, v)| !v.is_corner() && *diagram.dimension_at(level, *i) < level.into())
        .map(|(_, v)| v.clone())
        .collect())
}

/// Smallest coordinate of each vertex along the path, root first.
pub fn dense_orbit_trace(path: &[EdgeRef]) -> Vec<u32> {
    let mut out = Vec::with_capacity(path.len() + 1);
    if let Some(first) = path.first() {
        out.push(first.source.min_coord());
    }
    out.extend(path.iter().map(|e| e.target.min_coord()));
    out
}

/// Exact weights, for rational points of `p(θ) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalWeights {
    pub theta: Vec<BigRational>,
}

fn rational_monomial(theta: &[BigRational], exp: &[u32]) -> BigRational {
    theta
        .iter()
        .zip(exp)
        .fold(BigRational::one(), |acc, (t, &e)| acc * num_traits::pow(t.clone(), e as usize))
}

impl RationalWeights {
    pub fn new(spec: &PolynomialSpec, theta: Vec<BigRational>) -> Result<Self> {
        if theta.len() != spec.arity() || theta.iter().any(|t| *t <= BigRational::zero()) {
            return Err(Error::InvalidWeights("exact weights must be positive, one per variable".into()));
        }
        let value = spec
            .terms()
            .fold(BigRational::zero(), |acc, (s, a)| {
                acc + BigRational::from_integer(BigInt::from(a)) * rational_monomial(&theta, s)
            });
        if !value.is_one() {
            return Err(Error::InvalidWeights(format!("p(theta) = {value}, not exactly 1")));
        }
        Ok(Self { theta })
    }

    /// `θ_i = 1/q` for the linear form `x_1 + ... + x_q`.
    pub fn uniform(spec: &PolynomialSpec) -> Result<Self> {
        let t = BigRational::new(BigInt::one(), BigInt::from(spec.arity()));
        Self::new(spec, vec![t; spec.arity()])
    }

    pub fn to_float(&self, spec: &PolynomialSpec) -> WeightVector {
        let theta: Vec<f64> = self.theta.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect();
        let residual = (evaluate(spec, &theta) - 1.0).abs();
        WeightVector { theta, residual }
    }
}

pub fn cylinder_measure_exact(diagram: &Diagram, path: &[EdgeRef], w: &RationalWeights) -> Result<BigRational> {
    require_polynomial(diagram.multiplicity_mode())?;
    path.iter().try_fold(BigRational::one(), |acc, e| {
        let s = diagram
            .spec()
            .source_vector_between(&e.source, &e.target)
            .ok_or_else(|| Error::InvalidPath(format!("{} -> {} is not an edge", e.source, e.target)))?;
        Ok(acc * rational_monomial(&w.theta, &s))
    })
}

pub fn vertex_measure_exact(diagram: &Diagram, v: &Vertex, w: &RationalWeights) -> Result<BigRational> {
    require_polynomial(diagram.multiplicity_mode())?;
    let dim = BigInt::from(diagram.dimension(v)?.clone());
    Ok(BigRational::from_integer(dim) * rational_monomial(&w.theta, &v.coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_polynomial;
    use crate::vershik::{OrderedDiagram, OrderingSpec};

    fn quartic() -> PolynomialSpec {
        parse_polynomial("x1^4 + 2 x1^3 x2 + x1^2 x2^2 + 3 x1 x2^3 + x2^4").unwrap()
    }

    fn v(level: u32, c: &[u32]) -> Vertex {
        Vertex::new(level, c.to_vec())
    }

    #[test]
    fn symmetric_solutions() {
        let mode = Multiplicity::Coefficients;
        let w = solve_symmetric_weight(&PolynomialSpec::linear(2).unwrap(), &mode).unwrap();
        assert!((w.theta[0] - 0.5).abs() < 1e-15);
        let w = solve_symmetric_weight(&quartic(), &mode).unwrap();
        assert!((w.theta[0] - 8f64.powf(-0.25)).abs() < 1e-12);
        assert!(w.residual <= 1e-12);
        let w = solve_symmetric_weight(&PolynomialSpec::linear(3).unwrap(), &mode).unwrap();
        assert!((w.theta[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            solve_symmetric_weight(&quartic(), &Multiplicity::AllOnes),
            Err(Error::MeasureModeUnsupported)
        );
    }

    #[test]
    fn pascal_measures() {
        let spec = PolynomialSpec::linear(2).unwrap();
        let d = Diagram::polynomial(spec.clone(), 4).unwrap();
        let w = WeightVector::new(&spec, vec![0.5, 0.5]).unwrap();
        assert_eq!(vertex_measure(&d, &v(3, &[2, 1]), &w).unwrap(), 0.375);
        let od = OrderedDiagram::new(d.clone(), OrderingSpec::SourceLex).unwrap();
        for x in od.tower(&v(3, &[2, 1]), 10).unwrap().paths {
            assert_eq!(cylinder_measure(&d, &od.edges(&x).unwrap(), &w).unwrap(), 0.125);
        }
        let b = minimal_mass_bound(&spec, &Multiplicity::Coefficients, 4, &w).unwrap();
        assert_eq!(b.mass, 0.1875);
        assert!(b.pass);
    }

    #[test]
    fn quartic_measures() {
        let spec = quartic();
        let d = Diagram::polynomial(spec.clone(), 3).unwrap();
        let w = solve_symmetric_weight(&spec, &Multiplicity::Coefficients).unwrap();
        assert!((vertex_measure(&d, &v(2, &[4, 4]), &w).unwrap() - 15.0 / 64.0).abs() < 1e-12);
        let b = minimal_mass_bound(&spec, &Multiplicity::Coefficients, 3, &w).unwrap();
        assert!((b.mass - 11.0 / 512.0).abs() < 1e-12);
        assert!(b.pass);
        for n in 0..=3 {
            assert!((level_mass(&d, n, &w).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_mode() {
        let spec = PolynomialSpec::linear(2).unwrap();
        let d = Diagram::polynomial(spec.clone(), 4).unwrap();
        let w = RationalWeights::uniform(&spec).unwrap();
        let od = OrderedDiagram::new(d.clone(), OrderingSpec::SourceLex).unwrap();
        let target = v(4, &[2, 2]);
        let dim = BigInt::from(d.dimension(&target).unwrap().clone());
        for x in od.tower(&target, 10).unwrap().paths {
            let c = cylinder_measure_exact(&d, &od.edges(&x).unwrap(), &w).unwrap();
            assert_eq!(c.clone() * BigRational::from_integer(dim.clone()), vertex_measure_exact(&d, &target, &w).unwrap());
            assert_eq!(c, BigRational::new(1.into(), 16.into()));
        }
        let half = BigRational::new(1.into(), 2.into());
        assert!(RationalWeights::new(&spec, vec![half.clone(), half.clone() * half]).is_err());
    }

    #[test]
    fn weights_json() {
        let spec = PolynomialSpec::linear(2).unwrap();
        assert_eq!(parse_weights_json(&spec, r#"{"theta": [0.5, 0.5]}"#).unwrap().theta, vec![0.5, 0.5]);
        assert_eq!(parse_weights_json(&spec, r#"{"symmetric": true}"#).unwrap().theta, vec![0.5, 0.5]);
        assert!(matches!(
            parse_weights_json(&spec, r#"{"theta": [0.5, 0.6]}"#),
            Err(Error::InvalidWeights(_))
        ));
        assert!(parse_weights_json(&spec, r#"{"theta": [-0.5, 1.5]}"#).is_err());
        assert!(parse_weights_json(&spec, r#"{}"#).is_err());
    }

    #[test]
    fn dimension_bound() {
        let d = Diagram::polynomial(PolynomialSpec::linear(2).unwrap(), 10).unwrap();
        for n in 2..=10 {
            assert!(dim_lower_bound_check(&d, n).unwrap().is_empty());
        }
    }

    #[test]
    fn traces() {
        let spec = PolynomialSpec::linear(2).unwrap();
        let od = OrderedDiagram::new(Diagram::polynomial(spec, 6).unwrap(), OrderingSpec::SourceLex).unwrap();
        let corner = od.minimal_path(&v(6, &[6, 0])).unwrap();
        assert_eq!(dense_orbit_trace(&od.edges(&corner).unwrap()), vec![0; 7]);
        let mut at = Vertex::root(2);
        let mut central = Vec::new();
        for n in 0..6u32 {
            let step = if n % 2 == 0 { [1, 0] } else { [0, 1] };
            let next = at.plus(&step);
            central.push(EdgeRef { source: at, target: next.clone(), copy: 1 });
            at = next;
        }
        assert_eq!(dense_orbit_trace(&central), vec![0, 0, 1, 1, 2, 2, 3]);
        let other = od.maximal_path(&v(6, &[3, 3])).unwrap();
        let trace = dense_orbit_trace(&od.edges(&other).unwrap());
        assert!(trace.windows(2).all(|p| p[1] >= p[0] && p[1] - p[0] <= 1));
    }
}
