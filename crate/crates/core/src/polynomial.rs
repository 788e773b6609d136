//! Generating polynomials: validation, the text grammar and its JSON form.
//!
//! Text grammar (whitespace is free between tokens):
//!
//! ```text
//! poly   ::= term ("+" term)*
//! term   ::= [int "*"?] factor+
//! factor ::= "x" int ("^" int)?
//! ```
//!
//! Variables are numbered from 1 and the arity is the largest index that
//! appears. Repeated monomials are summed.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex::compositions;

/// Largest accepted number of variables.
pub const MAX_ARITY: usize = 16;
/// Largest accepted total degree.
pub const MAX_DEGREE: u32 = 4096;

/// A homogeneous polynomial with positive integer coefficients on every
/// monomial of its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialSpec {
    arity: usize,
    degree: u32,
    coefficients: BTreeMap<Vec<u32>, u64>,
    source_vectors: Vec<Vec<u32>>,
}

impl PolynomialSpec {
    /// Builds a spec from `(exponent vector, coefficient)` pairs.
    ///
    /// Coefficients of repeated exponent vectors are added together.
    pub fn new<I>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        if arity < 2 {
            return Err(Error::AritySmallerThanTwo(arity));
        }
        if arity > MAX_ARITY {
            return Err(Error::LimitExceeded {
                what: "arity",
                limit: MAX_ARITY as u64,
            });
        }
        let mut coefficients: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        let mut degree: Option<u32> = None;
        for (exp, coef) in terms {
            if exp.len() != arity {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: format!("exponent vector {exp:?} does not have length {arity}"),
                });
            }
            if coef <= 0 {
                return Err(Error::NonPositiveCoefficient {
                    exponent: exp,
                    value: coef,
                });
            }
            let total = exp
                .iter()
                .try_fold(0u32, |acc, &e| acc.checked_add(e))
                .filter(|&t| t <= MAX_DEGREE)
                .ok_or(Error::LimitExceeded {
                    what: "degree",
                    limit: MAX_DEGREE as u64,
                })?;
            match degree {
                None => degree = Some(total),
                Some(d) if d != total => {
                    return Err(Error::NotHomogeneous {
                        expected: d,
                        found: total,
                    })
                }
                Some(_) => {}
            }
            let slot = coefficients.entry(exp).or_insert(0);
            *slot = slot
                .checked_add(coef as u64)
                .ok_or(Error::LimitExceeded {
                    what: "coefficient",
                    limit: u64::MAX,
                })?;
        }
        let degree = match degree {
            None => {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: "polynomial has no terms".into(),
                })
            }
            Some(0) => {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: "polynomial must have degree at least 1".into(),
                })
            }
            Some(d) => d,
        };
        // Every degree-d exponent vector must appear. Walk the canonical list
        // and stop at the first gap, so the cost is bounded by the input size.
        let mut source_vectors = Vec::with_capacity(coefficients.len());
        for s in compositions(degree, arity) {
            if !coefficients.contains_key(&s) {
                return Err(Error::MissingMonomial(s));
            }
            source_vectors.push(s);
        }
        Ok(Self {
            arity,
            degree,
            coefficients,
            source_vectors,
        })
    }

    /// `x1 + x2 + ... + xq`.
    pub fn linear(arity: usize) -> Result<Self> {
        Self::all_ones(arity, 1)
    }

    /// Every monomial of degree `degree` in `arity` variables with coefficient 1.
    pub fn all_ones(arity: usize, degree: u32) -> Result<Self> {
        if arity < 2 {
            return Err(Error::AritySmallerThanTwo(arity));
        }
        if degree > MAX_DEGREE || arity > MAX_ARITY {
            return Err(Error::LimitExceeded {
                what: "degree",
                limit: MAX_DEGREE as u64,
            });
        }
        Self::new(arity, compositions(degree, arity).map(|e| (e, 1)))
    }

    /// Number of variables `q`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Total degree `d`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficient(&self, exponent: &[u32]) -> Option<u64> {
        self.coefficients.get(exponent).copied()
    }

    /// Sum of all coefficients, i.e. the polynomial evaluated at all ones.
    pub fn coefficient_sum(&self) -> u128 {
        self.coefficients.values().map(|&c| c as u128).sum()
    }

    /// The source vectors (the degree-`d` exponent vectors) in canonical
    /// descending lexicographic order.
    pub fn source_vectors(&self) -> &[Vec<u32>] {
        &self.source_vectors
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], u64)> + '_ {
        self.source_vectors
            .iter()
            .map(|s| (s.as_slice(), self.coefficients[s]))
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            q: self.arity,
            terms: self
                .terms()
                .map(|(exp, coef)| TermJson {
                    exp: exp.to_vec(),
                    coef: coef as i64,
                })
                .collect(),
        }
    }
}

impl fmt::Display for PolynomialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (exp, coef)) in self.terms().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if coef != 1 {
                write!(f, "{coef} ")?;
            }
            let mut first = true;
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// JSON form: `{"q": 2, "terms": [{"exp": [1, 0], "coef": 1}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub q: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: i64,
}

impl TryFrom<PolynomialJson> for PolynomialSpec {
    type Error = Error;

    fn try_from(json: PolynomialJson) -> Result<Self> {
        PolynomialSpec::new(json.q, json.terms.into_iter().map(|t| (t.exp, t.coef)))
    }
}

/// Parses either the text grammar or, when the input starts with `{`, the
/// JSON form.
pub fn parse_polynomial(input: &str) -> Result<PolynomialSpec> {
    if input.trim_start().starts_with('{') {
        parse_polynomial_json(input)
    } else {
        parse_polynomial_text(input)
    }
}

pub fn parse_polynomial_json(input: &str) -> Result<PolynomialSpec> {
    let json: PolynomialJson = serde_json::from_str(input)?;
    json.try_into()
}

pub fn parse_polynomial_text(input: &str) -> Result<PolynomialSpec> {
    let mut cur = Cursor {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let mut raw: Vec<(BTreeMap<usize, u32>, u64)> = Vec::new();
    loop {
        raw.push(cur.term()?);
        cur.skip_ws();
        match cur.peek() {
            None => break,
            Some(b'+') => cur.pos += 1,
            Some(c) => return Err(cur.error(format!("expected '+' or end of input, found {:?}", c as char))),
        }
    }
    let arity = raw
        .iter()
        .flat_map(|(factors, _)| factors.keys().copied())
        .max()
        .unwrap_or(0);
    if arity < 2 {
        return Err(Error::AritySmallerThanTwo(arity));
    }
    if arity > MAX_ARITY {
        return Err(Error::LimitExceeded {
            what: "arity",
            limit: MAX_ARITY as u64,
        });
    }
    let mut terms = Vec::with_capacity(raw.len());
    for (factors, coef) in raw {
        let mut exp = vec![0u32; arity];
        for (var, e) in factors {
            exp[var - 1] = e;
        }
        let coef = i64::try_from(coef).map_err(|_| Error::LimitExceeded {
            what: "coefficient",
            limit: i64::MAX as u64,
        })?;
        terms.push((exp, coef));
    }
    PolynomialSpec::new(arity, terms)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c) = self.peek().filter(u8::is_ascii_digit) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(c - b'0')))
                .ok_or_else(|| self.error("integer literal overflows"))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an integer"));
        }
        Ok(value)
    }

    fn term(&mut self) -> Result<(BTreeMap<usize, u32>, u64)> {
        self.skip_ws();
        let mut coef = 1;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coef = self.number()?;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
        let mut factors: BTreeMap<usize, u32> = BTreeMap::new();
        loop {
            self.skip_ws();
            if self.peek() != Some(b'x') {
                break;
            }
            self.pos += 1;
            let var = self.number()?;
            if var == 0 {
                return Err(self.error("variables are numbered from 1"));
            }
            if var > MAX_ARITY as u64 {
                return Err(Error::LimitExceeded {
                    what: "arity",
                    limit: MAX_ARITY as u64,
                });
            }
            self.skip_ws();
            let mut e = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                e = self.number()?;
            }
            let slot = factors.entry(var as usize).or_insert(0);
            *slot = u64::from(*slot)
                .checked_add(e)
                .filter(|&t| t <= u64::from(MAX_DEGREE))
                .ok_or(Error::LimitExceeded {
                    what: "degree",
                    limit: MAX_DEGREE as u64,
                })? as u32;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
        if factors.is_empty() {
            return Err(self.error("expected a factor of the form x<i>"));
        }
        Ok((factors, coef))
    }
}
