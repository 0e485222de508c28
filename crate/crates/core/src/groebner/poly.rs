use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::order::MonomialOrder;
use crate::error::{Error, Result};
use crate::ideal::{parse_monomial_factors, parse_vars_header, Exponent};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub exp: Exponent,
}

/// Polynomial with rational coefficients. Terms are kept with nonzero
/// coefficients, distinct exponents, sorted descending by the order the
/// polynomial was last normalized with (leading term first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(dim: usize, terms: Vec<(Rational, Exponent)>, order: &MonomialOrder) -> Self {
        let mut terms: Vec<Term> = terms
            .into_iter()
            .map(|(coeff, exp)| Term { coeff, exp })
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.exp, &a.exp));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exp == t.exp => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        Polynomial { dim, terms: merged }
    }

    pub fn monomial(coeff: Rational, exp: Exponent) -> Self {
        let dim = exp.dim();
        let terms = if coeff.is_zero() {
            Vec::new()
        } else {
            vec![Term { coeff, exp }]
        };
        Polynomial { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_exponent(&self) -> Option<&Exponent> {
        self.terms.first().map(|t| &t.exp)
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exp.degree()).max().unwrap_or(0)
    }

    /// Re-sorts the terms for another order.
    pub fn reorder(&self, order: &MonomialOrder) -> Self {
        let mut p = self.clone();
        p.terms.sort_by(|a, b| order.cmp(&b.exp, &a.exp));
        p
    }

    pub fn monic(&self) -> Self {
        let Some(lc) = self.leading().map(|t| t.coeff.clone()) else {
            return self.clone();
        };
        let inv = lc.recip();
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * &inv,
                    exp: t.exp.clone(),
                })
                .collect(),
        }
    }

    pub fn scale_shift(&self, c: &Rational, shift: &Exponent) -> Self {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * c,
                    exp: t.exp.add(shift),
                })
                .collect(),
        }
    }

    /// `self - other`, both sorted by `order`.
    pub fn sub(&self, other: &Polynomial, order: &MonomialOrder) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => order.cmp(&a.exp, &b.exp),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        coeff: -other.terms[j].coeff.clone(),
                        exp: other.terms[j].exp.clone(),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].coeff - &other.terms[j].coeff;
                    if !c.is_zero() {
                        out.push(Term {
                            coeff: c,
                            exp: self.terms[i].exp.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            dim: self.dim,
            terms: out,
        }
    }

    pub fn mul(&self, other: &Polynomial, order: &MonomialOrder) -> Self {
        let terms = self
            .terms
            .iter()
            .flat_map(|a| {
                other
                    .terms
                    .iter()
                    .map(move |b| (&a.coeff * &b.coeff, a.exp.add(&b.exp)))
            })
            .collect();
        Polynomial::from_terms(self.dim, terms, order)
    }

    /// Complex evaluation for numerical models.
    pub fn eval_complex(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let mut v = Complex64::new(rational::to_f64(&t.coeff), 0.0);
                for (zi, &k) in z.iter().zip(t.exp.coords()) {
                    if k > 0 {
                        v *= zi.powu(k);
                    }
                }
                v
            })
            .sum()
    }

    /// Parses one line such as `3/4*x1^2*x2 + x2^3 - 1/2*x1`.
    pub fn parse_line(line: &str, dim: usize, line_no: usize, order: &MonomialOrder) -> Result<Self> {
        let mut terms = Vec::new();
        for (negative, body) in split_signed_terms(line, line_no)? {
            let mut coeff = Rational::one();
            let mut exp = Exponent::zero(dim);
            for factor in body.split('*').map(str::trim) {
                if factor.is_empty() {
                    return Err(Error::parse(line_no, format!("empty factor in {body:?}")));
                }
                if factor.starts_with('x') {
                    exp = exp.add(&parse_monomial_factors(factor, dim, line_no)?);
                } else {
                    let c = rational::parse(factor).ok_or_else(|| {
                        Error::parse(line_no, format!("bad coefficient {factor:?}"))
                    })?;
                    coeff *= c;
                }
            }
            if negative {
                coeff = -coeff;
            }
            terms.push((coeff, exp));
        }
        Ok(Polynomial::from_terms(dim, terms, order))
    }
}

fn split_signed_terms(line: &str, line_no: usize) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut negative = false;
    let mut current = String::new();
    let mut expect_term = true;
    for ch in line.chars() {
        match ch {
            '+' | '-' => {
                if expect_term {
                    if !current.trim().is_empty() {
                        return Err(Error::parse(line_no, "misplaced sign"));
                    }
                    if ch == '-' {
                        negative = !negative;
                    }
                    continue;
                }
                out.push((negative, current.trim().to_string()));
                current.clear();
                negative = ch == '-';
                expect_term = true;
            }
            c if c.is_whitespace() => current.push(c),
            c => {
                expect_term = false;
                current.push(c);
            }
        }
    }
    if expect_term {
        return Err(Error::parse(line_no, "expression ends without a term"));
    }
    out.push((negative, current.trim().to_string()));
    Ok(out)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            let abs = t.coeff.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = t.exp.is_zero();
            if abs.is_one() {
                if is_const {
                    f.write_str("1")?;
                } else {
                    write!(f, "{}", t.exp)?;
                }
            } else if is_const {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{}", t.exp)?;
            }
        }
        Ok(())
    }
}

/// Parses the polynomial system format: `vars <n>` then one polynomial per line.
pub fn parse_system(text: &str, order: &MonomialOrder) -> Result<(usize, Vec<Polynomial>)> {
    let mut dim = None;
    let mut polys = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(n) = dim else {
            let n = parse_vars_header(line, line_no)?;
            if n != order.dim() {
                return Err(Error::DimensionMismatch {
                    expected: order.dim(),
                    got: n,
                });
            }
            dim = Some(n);
            continue;
        };
        polys.push(Polynomial::parse_line(line, n, line_no, order)?);
    }
    let Some(n) = dim else {
        return Err(Error::parse(0, "missing `vars <n>` header"));
    };
    if polys.is_empty() {
        return Err(Error::parse(0, "no polynomials"));
    }
    Ok((n, polys))
}

/// Reads only the `vars <n>` header of a polynomial file.
pub fn system_dim(text: &str) -> Result<usize> {
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        return parse_vars_header(line, idx + 1);
    }
    Err(Error::parse(0, "missing `vars <n>` header"))
}
