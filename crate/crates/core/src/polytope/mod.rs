//! Newton polytope `P(J) = conv(gens) + R_+^n` of an m-primary monomial
//! ideal, described by its facets with positive offset.
//!
//! Within the orthant the coordinate hyperplanes `x_i >= 0` are implied,
//! so only the facets `<normal, x> >= offset` with `offset > 0` are kept.
//! Every such facet of an m-primary ideal has a strictly positive normal.

mod volume;

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{minimalize, Exponent, MonomialIdeal};
use crate::linalg;
use crate::rational::{self, int, Rational};

/// Largest ambient dimension the exact geometry is run in.
pub const MAX_DIM: usize = 4;

/// Default ceiling on candidate hyperplanes examined during facet enumeration.
pub const DEFAULT_CANDIDATE_CAP: usize = 2_000_000;

/// The half-space `<normal, x> >= offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub normal: Vec<u64>,
    pub offset: u64,
}

impl Facet {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.normal
            .iter()
            .zip(x)
            .map(|(&a, xi)| int(a as i64) * xi)
            .sum()
    }

    pub fn eval_exponent(&self, g: &Exponent) -> u64 {
        self.normal
            .iter()
            .zip(g.coords())
            .map(|(&a, &c)| a * c as u64)
            .sum()
    }

    /// The intercepts `a_j = offset / normal_j`, i.e. the facet is
    /// `sum x_j / a_j = 1`.
    pub fn intercepts(&self) -> Vec<Rational> {
        self.normal
            .iter()
            .map(|&v| rational::rat(self.offset as i64, v as i64))
            .collect()
    }

    fn ratio_at(&self, direction: &[Rational]) -> Rational {
        self.eval(direction) / int(self.offset as i64)
    }
}

/// Per-coordinate weights `0 <= gamma_j < 1` of the divisor `sum gamma_j {z_j = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(gamma: Vec<Rational>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::Domain("weight vector is empty".into()));
        }
        for g in &gamma {
            if g.is_negative() || *g >= Rational::one() {
                return Err(Error::Domain(format!("weight {g} outside [0, 1)")));
            }
        }
        Ok(WeightVector(gamma))
    }

    pub fn zero(dim: usize) -> Self {
        WeightVector(vec![Rational::zero(); dim])
    }

    /// `gamma_j = 1 - 1/p_j`, the weights realized by the substitution `z_j -> z_j^{p_j}`.
    pub fn from_stretch(p: &[u32]) -> Result<Self> {
        if p.iter().any(|&pj| pj < 1) {
            return Err(Error::Domain("stretch factors must be at least 1".into()));
        }
        Self::new(
            p.iter()
                .map(|&pj| Rational::one() - rational::rat(1, pj as i64))
                .collect(),
        )
    }

    /// Parses `"1/2,0"`.
    pub fn parse(text: &str) -> Result<Self> {
        let gamma = text
            .split(',')
            .map(|t| {
                rational::parse(t).ok_or_else(|| Error::parse(0, format!("bad weight {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(gamma)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn gamma(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// `prod (1 - gamma_j)`.
    pub fn complement_product(&self) -> Rational {
        self.0
            .iter()
            .fold(Rational::one(), |acc, g| acc * (Rational::one() - g))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational::to_f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolytope {
    dim: usize,
    generators: Vec<Exponent>,
    facets: Vec<Facet>,
    box_bound: u32,
}

impl NewtonPolytope {
    pub fn new(ideal: &MonomialIdeal) -> Result<Self> {
        Self::with_candidate_cap(ideal, DEFAULT_CANDIDATE_CAP)
    }

    /// Facet enumeration by exhaustive candidate hyperplanes: every
    /// n-element subset of generators and recession directions `e_i`
    /// containing at least one generator spans a candidate; it is kept
    /// when its normal is nonnegative, its offset positive and every
    /// generator lies on the correct side.
    pub fn with_candidate_cap(ideal: &MonomialIdeal, cap: usize) -> Result<Self> {
        ideal.require_m_primary()?;
        let n = ideal.dim();
        if n > MAX_DIM {
            return Err(Error::Domain(format!(
                "dimension {n} exceeds the supported maximum {MAX_DIM}"
            )));
        }
        let gens = ideal.gens();
        let elements = gens.len() + n;
        let candidates = binomial(elements, n);
        if candidates > cap as u128 {
            return Err(Error::Resource(format!(
                "{candidates} candidate hyperplanes exceed the cap {cap}"
            )));
        }

        let points: Vec<Vec<Rational>> = gens.iter().map(|g| to_rational(g.coords())).collect();
        let mut facets = BTreeSet::new();
        for subset in (0..elements).combinations(n) {
            // Points come first in the element numbering.
            let (pts, dirs): (Vec<usize>, Vec<usize>) =
                subset.iter().partition(|&&i| i < gens.len());
            let Some((&p0, rest)) = pts.split_first() else {
                continue;
            };
            let mut rows: Vec<Vec<Rational>> = rest
                .iter()
                .map(|&p| {
                    points[p]
                        .iter()
                        .zip(&points[p0])
                        .map(|(a, b)| a - b)
                        .collect()
                })
                .collect();
            for &d in &dirs {
                let mut e = vec![Rational::zero(); n];
                e[d - gens.len()] = Rational::one();
                rows.push(e);
            }
            let null = linalg::nullspace(&rows, n);
            if null.len() != 1 {
                continue;
            }
            let mut normal = linalg::primitive(&null[0]);
            if normal.iter().all(|x| !x.is_positive()) {
                normal.iter_mut().for_each(|x| *x = -x.clone());
            }
            if !linalg::is_nonnegative(&normal) {
                continue;
            }
            let normal: Vec<u64> = normal
                .iter()
                .map(|x| x.to_u64().expect("normal fits in u64"))
                .collect();
            let facet = Facet {
                offset: 0,
                normal,
            };
            let offset = facet.eval_exponent(&gens[p0]);
            if offset == 0 {
                continue;
            }
            if gens.iter().all(|g| facet.eval_exponent(g) >= offset) {
                facets.insert(Facet { offset, ..facet });
            }
        }
        if facets.is_empty() {
            return Err(Error::Internal("no facet found for an m-primary ideal".into()));
        }
        Ok(NewtonPolytope {
            dim: n,
            generators: gens.to_vec(),
            facets: facets.into_iter().collect(),
            box_bound: ideal.box_bound()?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Side `B` of the box `[0, B]^n` that contains `R_+^n \ P`.
    pub fn box_bound(&self) -> u32 {
        self.box_bound
    }

    pub fn contains_point(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if x.iter().any(Signed::is_negative) {
            return Err(Error::Domain("point has a negative coordinate".into()));
        }
        Ok(self
            .facets
            .iter()
            .all(|f| f.eval(x) >= int(f.offset as i64)))
    }

    /// Floating point membership test for samplers; `x` must be in the orthant.
    pub fn contains_point_f64(&self, x: &[f64]) -> bool {
        self.facets.iter().all(|f| {
            let lhs: f64 = f.normal.iter().zip(x).map(|(&a, xi)| a as f64 * xi).sum();
            lhs >= f.offset as f64
        })
    }

    pub fn contains_exponent(&self, g: &Exponent) -> bool {
        self.facets
            .iter()
            .all(|f| f.eval_exponent(g) >= f.offset)
    }

    /// Howald's formula: `lct = min over facets of <normal, 1> / offset`,
    /// the reciprocal of `min { a > 0 : a (1, ..., 1) in P }`.
    pub fn lct(&self) -> Rational {
        self.weighted_threshold_unchecked(&WeightVector::zero(self.dim))
    }

    /// The facet attaining the minimum in [`NewtonPolytope::lct`].
    pub fn lct_facet(&self) -> &Facet {
        let ones = vec![Rational::one(); self.dim];
        self.facets
            .iter()
            .min_by(|a, b| a.ratio_at(&ones).cmp(&b.ratio_at(&ones)))
            .expect("polytope has facets")
    }

    /// `min over facets of <normal, 1 - gamma> / offset`: the threshold of
    /// `e^{-2c phi} prod |z_j|^{-2 gamma_j}` for the monomial model.
    pub fn weighted_threshold(&self, w: &WeightVector) -> Result<Rational> {
        if w.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: w.dim(),
            });
        }
        Ok(self.weighted_threshold_unchecked(w))
    }

    fn weighted_threshold_unchecked(&self, w: &WeightVector) -> Rational {
        let direction: Vec<Rational> = w
            .gamma()
            .iter()
            .map(|g| Rational::one() - g)
            .collect();
        self.facets
            .iter()
            .map(|f| f.ratio_at(&direction))
            .min()
            .expect("polytope has facets")
    }

    /// Exact `Vol(R_+^n \ P)`.
    pub fn complement_volume(&self) -> Result<Rational> {
        volume::complement_volume(self)
    }

    /// `(true, Some(s))` iff the only facet is `sum x_j >= s`, i.e. the
    /// integral closure of the ideal is `m^s`.
    pub fn is_power_of_maximal(&self) -> (bool, Option<u32>) {
        match self.facets.as_slice() {
            [f] if f.normal.iter().all(|&v| v == 1) => (true, Some(f.offset as u32)),
            _ => (false, None),
        }
    }

    /// Lattice points of `P` in `[0, B]^n`, reduced to minimal generators.
    pub fn integral_closure(&self) -> Result<MonomialIdeal> {
        let n = self.dim;
        let b = self.box_bound;
        let mut pts = Vec::new();
        let mut x = vec![0u32; n];
        loop {
            let e = Exponent::new(x.clone());
            if self.contains_exponent(&e) {
                pts.push(e);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return MonomialIdeal::new(n, minimalize(pts));
                }
                x[i] += 1;
                if x[i] <= b {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }
}

/// `(p_1 beta_1, ..., p_n beta_n)` for every generator `beta`: the ideal
/// of `phi(z_1^{p_1}, ..., z_n^{p_n})`.
pub fn stretch_ideal(ideal: &MonomialIdeal, p: &[u32]) -> Result<MonomialIdeal> {
    ideal.require_m_primary()?;
    if p.len() != ideal.dim() {
        return Err(Error::DimensionMismatch {
            expected: ideal.dim(),
            got: p.len(),
        });
    }
    if p.iter().any(|&pj| pj < 1) {
        return Err(Error::Domain("stretch factors must be at least 1".into()));
    }
    let gens = ideal
        .gens()
        .iter()
        .map(|g| Exponent::new(g.coords().iter().zip(p).map(|(c, pj)| c * pj).collect()))
        .collect();
    MonomialIdeal::new(ideal.dim(), gens)
}

/// Convenience: the integral closure of `J` through its Newton polytope.
pub fn integral_closure(ideal: &MonomialIdeal) -> Result<MonomialIdeal> {
    NewtonPolytope::new(ideal)?.integral_closure()
}

fn to_rational(c: &[u32]) -> Vec<Rational> {
    c.iter().map(|&x| int(x as i64)).collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
