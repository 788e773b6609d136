//! Exact multivariate polynomial multiplication over the integers.
//!
//! This is the second route to path counts: in a polynomial diagram the
//! number of root-to-`v` paths is the coefficient of `x^v` in `p^n`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::diagram::Multiplicity;
use crate::polynomial::PolynomialSpec;

/// Sparse polynomial keyed by exponent vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    pub arity: usize,
    pub terms: BTreeMap<Vec<u32>, BigUint>,
}

impl SparsePoly {
    pub fn one(arity: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; arity], BigUint::from(1u32));
        Self { arity, terms }
    }

    /// The generating polynomial with the coefficients the given
    /// multiplicity mode puts on edges. `None` for per-pair tables, which
    /// are not products of a single polynomial.
    pub fn from_spec(spec: &PolynomialSpec, mode: &Multiplicity) -> Option<Self> {
        let terms = spec
            .terms()
            .map(|(exp, c)| {
                let c = match mode {
                    Multiplicity::Coefficients => c,
                    Multiplicity::AllOnes => 1,
                    Multiplicity::Table(_) => return None,
                };
                Some((exp.to_vec(), BigUint::from(c)))
            })
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(Self {
            arity: spec.arity(),
            terms,
        })
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut terms: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(BigUint::zero) += ca * cb;
            }
        }
        SparsePoly {
            arity: self.arity,
            terms,
        }
    }

    pub fn coefficient(&self, exp: &[u32]) -> BigUint {
        self.terms.get(exp).cloned().unwrap_or_default()
    }
}

/// `p^0, p^1, ..., p^max_power` by repeated multiplication.
pub fn powers(base: &SparsePoly, max_power: u32) -> Vec<SparsePoly> {
    let mut out = vec![SparsePoly::one(base.arity)];
    for _ in 0..max_power {
        let next = out.last().unwrap().mul(base);
        out.push(next);
    }
    out
}
