//! A small Buchberger engine over `Q`, used to degenerate a polynomial
//! ideal to its monomial initial ideal.

mod order;
mod poly;

pub use order::{MonomialOrder, OrderKind};
pub use poly::{parse_system, system_dim, Polynomial, Term};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{Exponent, MonomialIdeal};
use crate::numeric::{estimate_threshold, McConfig, PshModel, ThresholdInterval};
use crate::polytope::NewtonPolytope;
use crate::rational::{self, Rational};

pub const DEFAULT_MAX_DEGREE: u32 = 20;
pub const DEFAULT_MAX_BASIS: usize = 200;

/// Limits guarding against Buchberger blowup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroebnerLimits {
    pub max_degree: u32,
    pub max_basis: usize,
}

impl Default for GroebnerLimits {
    fn default() -> Self {
        GroebnerLimits {
            max_degree: DEFAULT_MAX_DEGREE,
            max_basis: DEFAULT_MAX_BASIS,
        }
    }
}

/// Remainder of `f` under multivariate division by `divisors`.
pub fn reduce(f: &Polynomial, divisors: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let mut p = f.clone();
    let mut remainder: Vec<(Rational, Exponent)> = Vec::new();
    while let Some(lt) = p.leading().cloned() {
        let divisor = divisors.iter().find(|g| {
            g.leading_exponent()
                .is_some_and(|lm| lm.divides(&lt.exp))
        });
        match divisor {
            Some(g) => {
                let glt = g.leading().expect("divisor is nonzero");
                let c = &lt.coeff / &glt.coeff;
                let shift = lt.exp.sub(&glt.exp);
                p = p.sub(&g.scale_shift(&c, &shift), order);
            }
            None => {
                remainder.push((lt.coeff.clone(), lt.exp.clone()));
                p = p.sub(&Polynomial::monomial(lt.coeff, lt.exp), order);
            }
        }
    }
    Polynomial::from_terms(f.dim(), remainder, order)
}

pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (Some(ft), Some(gt)) = (f.leading(), g.leading()) else {
        return Polynomial::zero(f.dim());
    };
    let lcm = ft.exp.lcm(&gt.exp);
    let a = f.scale_shift(&ft.coeff.recip(), &lcm.sub(&ft.exp));
    let b = g.scale_shift(&gt.coeff.recip(), &lcm.sub(&gt.exp));
    a.sub(&b, order)
}

/// Reduced Groebner basis with the default limits.
pub fn buchberger(gens: &[Polynomial], order: &MonomialOrder) -> Result<Vec<Polynomial>> {
    buchberger_with_limits(gens, order, GroebnerLimits::default())
}

/// Buchberger's algorithm with the normal selection strategy (smallest
/// lcm degree first) and the coprime leading monomial criterion. The
/// result is reduced, monic and sorted by leading monomial, largest first.
pub fn buchberger_with_limits(
    gens: &[Polynomial],
    order: &MonomialOrder,
    limits: GroebnerLimits,
) -> Result<Vec<Polynomial>> {
    let Some(first) = gens.first() else {
        return Err(Error::Domain("empty generator list".into()));
    };
    let dim = first.dim();
    if let Some(bad) = gens.iter().find(|g| g.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: bad.dim(),
        });
    }
    if dim != order.dim() {
        return Err(Error::DimensionMismatch {
            expected: order.dim(),
            got: dim,
        });
    }
    let mut basis: Vec<Polynomial> = gens
        .iter()
        .map(|g| g.reorder(order))
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    if basis.is_empty() {
        return Err(Error::Domain("all generators are zero".into()));
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).tuple_combinations().collect();

    while !pairs.is_empty() {
        let pick = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(i, j))| (lcm_degree(&basis[i], &basis[j]), i, j))
            .map(|(idx, _)| idx)
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(pick);
        let (li, lj) = (
            basis[i].leading_exponent().expect("nonzero"),
            basis[j].leading_exponent().expect("nonzero"),
        );
        if li.is_coprime(lj) {
            continue;
        }
        let h = reduce(&s_polynomial(&basis[i], &basis[j], order), &basis, order);
        if h.is_zero() {
            continue;
        }
        if h.degree() > limits.max_degree {
            return Err(Error::Resource(format!(
                "basis element of degree {} exceeds the degree cap {}",
                h.degree(),
                limits.max_degree
            )));
        }
        if basis.len() >= limits.max_basis {
            return Err(Error::Resource(format!(
                "basis size exceeds the cap {}",
                limits.max_basis
            )));
        }
        let k = basis.len();
        basis.push(h.monic());
        pairs.extend((0..k).map(|i| (i, k)));
    }

    Ok(reduce_basis(basis, order))
}

fn lcm_degree(f: &Polynomial, g: &Polynomial) -> u32 {
    f.leading_exponent()
        .expect("nonzero")
        .lcm(g.leading_exponent().expect("nonzero"))
        .degree()
}

fn reduce_basis(mut basis: Vec<Polynomial>, order: &MonomialOrder) -> Vec<Polynomial> {
    basis.sort_by(|a, b| order.cmp(a.leading_exponent().unwrap(), b.leading_exponent().unwrap()));
    // Drop elements whose leading monomial is divisible by another's.
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading_exponent().unwrap();
        if !minimal
            .iter()
            .any(|h| h.leading_exponent().unwrap().divides(lm))
        {
            minimal.push(g);
        }
    }
    let mut reduced: Vec<Polynomial> = Vec::with_capacity(minimal.len());
    for (idx, g) in minimal.iter().enumerate() {
        let lt = g.leading().unwrap().clone();
        let tail = g.sub(&Polynomial::monomial(lt.coeff.clone(), lt.exp.clone()), order);
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .map(|(_, h)| h.clone())
            .collect();
        let tail = reduce(&tail, &others, order);
        let mut terms: Vec<(Rational, Exponent)> = vec![(lt.coeff, lt.exp)];
        terms.extend(tail.terms().iter().map(|t| (t.coeff.clone(), t.exp.clone())));
        reduced.push(Polynomial::from_terms(g.dim(), terms, order).monic());
    }
    reduced.sort_by(|a, b| order.cmp(b.leading_exponent().unwrap(), a.leading_exponent().unwrap()));
    reduced
}

/// True iff every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &[Polynomial], order: &MonomialOrder) -> bool {
    basis.iter().tuple_combinations().all(|(f, g)| {
        reduce(&s_polynomial(f, g, order), basis, order).is_zero()
    })
}

/// Ideal of leading monomials of a Groebner basis.
pub fn initial_ideal(basis: &[Polynomial], order: &MonomialOrder) -> Result<MonomialIdeal> {
    let Some(first) = basis.first() else {
        return Err(Error::Domain("empty basis".into()));
    };
    let gens: Vec<Exponent> = basis
        .iter()
        .filter_map(|g| g.reorder(order).leading_exponent().cloned())
        .collect();
    if gens.iter().any(Exponent::is_zero) {
        return Err(Error::Domain("the polynomial ideal is the unit ideal".into()));
    }
    MonomialIdeal::new(first.dim(), gens)
}

/// `dim O/J`, counted as the standard monomials of the initial ideal.
pub fn poly_colength(gens: &[Polynomial], order: &MonomialOrder) -> Result<u64> {
    let basis = buchberger(gens, order)?;
    let initial = initial_ideal(&basis, order)?;
    initial.colength()
}

/// All products of `k` generators (with repetition): a generating set of `J^k`.
pub fn power_system(gens: &[Polynomial], k: u32, order: &MonomialOrder) -> Result<Vec<Polynomial>> {
    if k == 0 {
        return Err(Error::Domain("power exponent must be at least 1".into()));
    }
    Ok((0..gens.len())
        .combinations_with_replacement(k as usize)
        .map(|idx| {
            idx.iter()
                .skip(1)
                .fold(gens[idx[0]].reorder(order), |acc, &i| acc.mul(&gens[i], order))
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct SemicontinuityReport {
    pub order: OrderKind,
    pub basis: Vec<String>,
    pub initial_ideal: String,
    pub colength: u64,
    #[serde(with = "rational::serde_str")]
    pub lct_initial: Rational,
    pub mc_interval: ThresholdInterval,
    pub tolerance: f64,
    /// `lct(initial) <= c_hi + tolerance`
    pub passes: bool,
}

/// Compares the exact threshold of the initial ideal with a Monte Carlo
/// bracket for `phi = (1/2) log sum |g_j|^2`.
pub fn semicontinuity_report(
    gens: &[Polynomial],
    order: &MonomialOrder,
    cfg: &McConfig,
    steps: u32,
    tolerance: f64,
) -> Result<SemicontinuityReport> {
    let basis = buchberger(gens, order)?;
    let initial = initial_ideal(&basis, order)?;
    let colength = initial.colength()?;
    let lct_initial = NewtonPolytope::new(&initial)?.lct();
    let model = PshModel::poly(gens.to_vec(), rational::int(1))?;
    let mc_interval = estimate_threshold(&model, None, cfg, steps)?;
    let passes = rational::to_f64(&lct_initial) <= mc_interval.c_hi + tolerance;
    Ok(SemicontinuityReport {
        order: order.kind(),
        basis: basis.iter().map(|g| g.to_string()).collect(),
        initial_ideal: initial.to_string(),
        colength,
        lct_initial,
        mc_interval,
        tolerance,
        passes,
    })
}
