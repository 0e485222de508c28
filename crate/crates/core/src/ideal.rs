//! Monomial ideals in `C[x1, ..., xn]` localized at the origin.
//!
//! An ideal is stored by its minimal generating set of exponent vectors,
//! which is an antichain under the componentwise order.

use std::fmt;

use crate::error::{Error, Result};

/// Default ceiling on the number of generators produced while forming
/// powers and products.
pub const DEFAULT_GENERATOR_CAP: usize = 100_000;

/// Exponent vector of a monomial, a lattice point in `N^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(coords: Vec<u32>) -> Self {
        assert!(!coords.is_empty(), "exponent must have at least one coordinate");
        Exponent(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Exponent::new(vec![0; dim])
    }

    /// `k * e_axis`.
    pub fn pure(dim: usize, axis: usize, k: u32) -> Self {
        let mut v = vec![0; dim];
        v[axis] = k;
        Exponent::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise maximum (the lcm of two monomials).
    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// `self - other`; caller guarantees `other` divides `self`.
    pub fn sub(&self, other: &Exponent) -> Exponent {
        debug_assert!(other.divides(self));
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// If this is `k * e_i` with `k > 0`, returns `(i, k)`.
    pub fn as_pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &c) in self.0.iter().enumerate() {
            if c > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, c));
            }
        }
        found
    }

    pub fn is_coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent::new(v)
    }
}

impl fmt::Display for Exponent {
    /// Monomial notation, e.g. `x1^2*x3`; the zero exponent prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if c == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, c)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Reduces a list of exponents to its minimal elements, sorted
/// descending lexicographically (so `x1^2` precedes `x2^3`).
pub fn minimalize(mut gens: Vec<Exponent>) -> Vec<Exponent> {
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    gens.dedup();
    let mut kept: Vec<Exponent> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|h| h.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort_by(|a, b| b.cmp(a));
    kept
}

/// A proper monomial ideal given by its minimal generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    dim: usize,
    gens: Vec<Exponent>,
}

impl MonomialIdeal {
    /// Builds the ideal generated by `gens`, discarding non-minimal ones.
    pub fn new(dim: usize, gens: Vec<Exponent>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        if gens.is_empty() {
            return Err(Error::Domain("ideal needs at least one generator".into()));
        }
        for g in &gens {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.dim(),
                });
            }
            if g.is_zero() {
                return Err(Error::Domain("the unit ideal is not a proper ideal".into()));
            }
        }
        Ok(MonomialIdeal {
            dim,
            gens: minimalize(gens),
        })
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_rows(dim: usize, rows: &[&[u32]]) -> Result<Self> {
        Self::new(dim, rows.iter().map(|r| Exponent::new(r.to_vec())).collect())
    }

    /// The maximal ideal `m = (x1, ..., xn)`.
    pub fn maximal(dim: usize) -> Self {
        let gens = (0..dim).map(|i| Exponent::pure(dim, i, 1)).collect();
        MonomialIdeal::new(dim, gens).expect("maximal ideal is valid")
    }

    /// `m^s`.
    pub fn maximal_power(dim: usize, s: u32) -> Self {
        Self::maximal(dim)
            .power(s)
            .expect("powers of the maximal ideal stay small at desk scale")
    }

    /// `(x1^a1, ..., xn^an)`.
    pub fn diagonal(degrees: &[u32]) -> Result<Self> {
        let n = degrees.len();
        Self::new(
            n,
            degrees
                .iter()
                .enumerate()
                .map(|(i, &a)| Exponent::pure(n, i, a))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Exponent] {
        &self.gens
    }

    /// True iff every axis carries a pure power generator, i.e. the
    /// zero set is the origin and the colength is finite.
    pub fn is_m_primary(&self) -> bool {
        self.pure_power_degrees().is_some()
    }

    /// The degree `a_i` of the pure power `x_i^{a_i}` on each axis.
    pub fn pure_power_degrees(&self) -> Option<Vec<u32>> {
        let mut degs = vec![None; self.dim];
        for g in &self.gens {
            if let Some((i, k)) = g.as_pure_power() {
                degs[i] = Some(k);
            }
        }
        degs.into_iter().collect()
    }

    /// Side `B` of the box `[0, B)^n` holding the staircase.
    pub fn box_bound(&self) -> Result<u32> {
        self.pure_power_degrees()
            .and_then(|d| d.into_iter().max())
            .ok_or(Error::NotMPrimary)
    }

    pub(crate) fn require_m_primary(&self) -> Result<()> {
        if self.is_m_primary() {
            Ok(())
        } else {
            Err(Error::NotMPrimary)
        }
    }

    pub fn contains_monomial(&self, m: &Exponent) -> Result<bool> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: m.dim(),
            });
        }
        Ok(self.gens.iter().any(|g| g.divides(m)))
    }

    /// True iff `self ⊆ other`.
    pub fn is_subset_of(&self, other: &MonomialIdeal) -> bool {
        self.dim == other.dim
            && self
                .gens
                .iter()
                .all(|g| other.gens.iter().any(|h| h.divides(g)))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<MonomialIdeal> {
        self.product_with_cap(other, DEFAULT_GENERATOR_CAP)
    }

    pub fn product_with_cap(&self, other: &MonomialIdeal, cap: usize) -> Result<MonomialIdeal> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let count = self.gens.len().saturating_mul(other.gens.len());
        if count > cap {
            return Err(Error::Resource(format!(
                "product would produce {count} candidate generators (cap {cap})"
            )));
        }
        let sums = self
            .gens
            .iter()
            .flat_map(|a| other.gens.iter().map(move |b| a.add(b)))
            .collect();
        Ok(MonomialIdeal {
            dim: self.dim,
            gens: minimalize(sums),
        })
    }

    pub fn power(&self, k: u32) -> Result<MonomialIdeal> {
        self.power_with_cap(k, DEFAULT_GENERATOR_CAP)
    }

    /// `J^k` by repeated multiplication, minimalizing after every step.
    pub fn power_with_cap(&self, k: u32, cap: usize) -> Result<MonomialIdeal> {
        if k == 0 {
            return Err(Error::Domain("power exponent must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.product_with_cap(self, cap)?;
        }
        Ok(acc)
    }

    /// Coordinate relabeling: axis `i` of the result is axis `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<MonomialIdeal> {
        if perm.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: perm.len(),
            });
        }
        let gens = self
            .gens
            .iter()
            .map(|g| Exponent::new(perm.iter().map(|&p| g.coords()[p]).collect()))
            .collect();
        MonomialIdeal::new(self.dim, gens)
    }

    /// `dim O/J`, the number of monomials outside `J`.
    pub fn colength(&self) -> Result<u64> {
        let b = self.box_bound()? as u64;
        let n = self.dim;
        if n == 1 {
            return Ok(self.gens[0].coords()[0] as u64);
        }
        // For each prefix in [0,B)^{n-1} the column above it leaves the
        // staircase at the smallest last coordinate of a dividing generator.
        let mut total = 0u64;
        let mut prefix = vec![0u32; n - 1];
        loop {
            let height = self
                .gens
                .iter()
                .filter(|g| g.coords()[..n - 1].iter().zip(&prefix).all(|(a, p)| a <= p))
                .map(|g| g.coords()[n - 1])
                .min()
                .expect("pure power of the last axis divides every column");
            total += height as u64;
            // odometer increment
            let mut i = 0;
            loop {
                if i == n - 1 {
                    return Ok(total);
                }
                prefix[i] += 1;
                if (prefix[i] as u64) < b {
                    break;
                }
                prefix[i] = 0;
                i += 1;
            }
        }
    }

    /// Parses the text ideal format:
    ///
    /// ```text
    /// # comment
    /// vars 2
    /// x1^2
    /// x2^3
    /// 1 1
    /// ```
    pub fn parse(text: &str) -> Result<MonomialIdeal> {
        let mut dim: Option<usize> = None;
        let mut gens = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(n) = dim else {
                dim = Some(parse_vars_header(line, line_no)?);
                continue;
            };
            gens.push(parse_monomial(line, n, line_no)?);
        }
        let Some(n) = dim else {
            return Err(Error::parse(0, "missing `vars <n>` header"));
        };
        if gens.is_empty() {
            return Err(Error::parse(0, "no generators"));
        }
        if gens.iter().any(Exponent::is_zero) {
            return Err(Error::Domain("the unit ideal is not a proper ideal".into()));
        }
        MonomialIdeal::new(n, gens)
    }

    /// Inverse of [`MonomialIdeal::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("vars {}\n", self.dim);
        for g in &self.gens {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn parse_vars_header(line: &str, line_no: usize) -> Result<usize> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some("vars"), Some(n), None) => {
            let n: usize = n
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad dimension {n:?}")))?;
            if n == 0 {
                return Err(Error::parse(line_no, "dimension must be at least 1"));
            }
            Ok(n)
        }
        _ => Err(Error::parse(line_no, "expected header `vars <n>`")),
    }
}

/// Parses `x1^2*x3` (or `1`) into an exponent of dimension `n`.
pub(crate) fn parse_monomial_factors(text: &str, n: usize, line_no: usize) -> Result<Exponent> {
    let mut coords = vec![0u32; n];
    let text = text.trim();
    if text == "1" {
        return Ok(Exponent::new(coords));
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let (var, power) = match factor.split_once('^') {
            Some((v, p)) => {
                let p: u32 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad exponent in {factor:?}")))?;
                (v.trim(), p)
            }
            None => (factor, 1),
        };
        let idx: usize = var
            .strip_prefix('x')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(line_no, format!("bad variable {var:?}")))?;
        if idx == 0 || idx > n {
            return Err(Error::parse(
                line_no,
                format!("variable x{idx} outside declared dimension {n}"),
            ));
        }
        coords[idx - 1] += power;
    }
    Ok(Exponent::new(coords))
}

fn parse_monomial(line: &str, n: usize, line_no: usize) -> Result<Exponent> {
    if line.contains('x') {
        return parse_monomial_factors(line, n, line_no);
    }
    let coords: Vec<u32> = line
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(line_no, format!("bad exponent entry {t:?}")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != n {
        return Err(Error::parse(
            line_no,
            format!("exponent vector has {} entries, expected {n}", coords.len()),
        ));
    }
    Ok(Exponent::new(coords))
}
