//! Samuel multiplicity of m-primary monomial ideals and the exact checks
//! of `lct(J)^n e(J) >= n^n` with its colength and weighted forms.
//!
//! Inequalities are compared multiplicatively so that everything stays
//! in exact rationals; no n-th roots are taken.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{Exponent, MonomialIdeal};
use crate::polytope::{NewtonPolytope, WeightVector};
use crate::rational::{self, int, Rational};

/// `e(J) = n! Vol(R_+^n \ P(J))`.
pub fn samuel_multiplicity(ideal: &MonomialIdeal) -> Result<Rational> {
    let p = NewtonPolytope::new(ideal)?;
    multiplicity_of(&p)
}

pub(crate) fn multiplicity_of(p: &NewtonPolytope) -> Result<Rational> {
    Ok(rational::factorial(p.dim()) * p.complement_volume()?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColengthEntry {
    pub k: u32,
    pub colength: u64,
    /// `n! colength(J^k) / k^n`
    #[serde(with = "rational::serde_str")]
    pub scaled: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColengthSeries {
    pub entries: Vec<ColengthEntry>,
}

/// Exact colengths of `J, J^2, ..., J^{k_max}`.
pub fn colength_series(ideal: &MonomialIdeal, k_max: u32) -> Result<ColengthSeries> {
    ideal.require_m_primary()?;
    if k_max < 1 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let n = ideal.dim();
    let n_fact = rational::factorial(n);
    let mut power = ideal.clone();
    let mut entries = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        if k > 1 {
            power = power.product(ideal)?;
        }
        let colength = power.colength()?;
        let scaled =
            &n_fact * int(colength as i64) / rational::pow(&int(k as i64), n as u32);
        entries.push(ColengthEntry { k, colength, scaled });
    }
    Ok(ColengthSeries { entries })
}

/// Outcome of comparing `threshold^n * e` against `n^n prod(1 - gamma_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IneqReport {
    pub n: usize,
    /// The log canonical threshold, or the weighted threshold when weights are present.
    #[serde(with = "rational::serde_str")]
    pub lct: Rational,
    #[serde(with = "rational::serde_str")]
    pub e: Rational,
    #[serde(with = "rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
    pub holds: bool,
    pub equality: bool,
    pub closure_is_power: bool,
    /// `s` when the integral closure is `m^s`.
    pub closure_power: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<String>>,
}

pub fn check_main_inequality(ideal: &MonomialIdeal) -> Result<IneqReport> {
    let p = NewtonPolytope::new(ideal)?;
    let report = build_report(&p, None)?;
    // Equality forces the integral closure to be a power of the maximal ideal.
    if report.equality && !report.closure_is_power {
        return Err(Error::Internal(format!(
            "equality lct^n e = n^n on {ideal} but the closure is not a power of m"
        )));
    }
    if !report.holds {
        return Err(Error::Internal(format!(
            "lct^n e = {} < {} on {ideal}",
            report.lhs, report.rhs
        )));
    }
    Ok(report)
}

pub fn check_weighted_inequality(ideal: &MonomialIdeal, w: &WeightVector) -> Result<IneqReport> {
    let p = NewtonPolytope::new(ideal)?;
    if w.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: w.dim(),
        });
    }
    if w.is_zero() {
        return check_main_inequality(ideal);
    }
    let report = build_report(&p, Some(w))?;
    if !report.holds {
        return Err(Error::Internal(format!(
            "weighted inequality {} < {} on {ideal}",
            report.lhs, report.rhs
        )));
    }
    Ok(report)
}

fn build_report(p: &NewtonPolytope, w: Option<&WeightVector>) -> Result<IneqReport> {
    let n = p.dim();
    let threshold = match w {
        Some(w) => p.weighted_threshold(w)?,
        None => p.lct(),
    };
    let e = multiplicity_of(p)?;
    let lhs = rational::pow(&threshold, n as u32) * &e;
    let mut rhs = rational::pow(&int(n as i64), n as u32);
    if let Some(w) = w {
        rhs *= w.complement_product();
    }
    let (closure_is_power, closure_power) = p.is_power_of_maximal();
    Ok(IneqReport {
        n,
        holds: lhs >= rhs,
        equality: lhs == rhs,
        lct: threshold,
        e,
        lhs,
        rhs,
        closure_is_power,
        closure_power,
        gamma: w.map(|w| w.gamma().iter().map(|g| g.to_string()).collect()),
    })
}

/// `colength(J) >= n^n / (n! lct(J)^n)`.
pub fn check_colength_bound(ideal: &MonomialIdeal) -> Result<bool> {
    let p = NewtonPolytope::new(ideal)?;
    let n = p.dim();
    let bound = rational::pow(&int(n as i64), n as u32)
        / (rational::factorial(n) * rational::pow(&p.lct(), n as u32));
    Ok(int(ideal.colength()? as i64) >= bound)
}

/// Reference generator for randomized sweeps: `n` pure powers with
/// degrees in `[1, 6]`, plus mixed generators with entries in `[0, 6]`,
/// for a total generator count drawn uniformly from `[n + 1, n + 6]`.
pub fn random_ideal<R: Rng>(rng: &mut R, n: usize) -> MonomialIdeal {
    let count = rng.gen_range(n + 1..=n + 6);
    let mut gens: Vec<Exponent> = (0..n)
        .map(|i| Exponent::pure(n, i, rng.gen_range(1..=6)))
        .collect();
    while gens.len() < count {
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
        if v.iter().any(|&c| c > 0) {
            gens.push(Exponent::new(v));
        }
    }
    MonomialIdeal::new(n, gens).expect("random generators are valid")
}

/// The `index`-th ideal of a sweep, drawn from its own ChaCha stream.
pub fn sweep_ideal(seed: u64, index: u64, max_dim: usize) -> MonomialIdeal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = rng.gen_range(1..=max_dim);
    random_ideal(&mut rng, n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub gens: String,
    #[serde(with = "rational::serde_str")]
    pub lct: Rational,
    #[serde(with = "rational::serde_str")]
    pub e: Rational,
    #[serde(with = "rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
    pub holds: bool,
    pub equality: bool,
    pub closure_power: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub count: usize,
    pub seed: u64,
    pub max_dim: usize,
    pub all_hold: bool,
    pub equality_iff_power: bool,
    pub equality_cases: usize,
    pub rows: Vec<SweepRow>,
}

/// Checks the inequality and its equality case on `count` random ideals.
/// Rows are sorted by `(n, generators)` so the output does not depend on
/// scheduling.
pub fn sweep(count: usize, seed: u64, max_dim: usize) -> Result<SweepSummary> {
    if max_dim == 0 || max_dim > crate::polytope::MAX_DIM {
        return Err(Error::Domain(format!("sweep dimension {max_dim} out of range")));
    }
    let mut rows = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let ideal = sweep_ideal(seed, i, max_dim);
            let p = NewtonPolytope::new(&ideal)?;
            let r = build_report(&p, None)?;
            Ok(SweepRow {
                n: r.n,
                gens: gens_text(&ideal),
                lct: r.lct,
                e: r.e,
                lhs: r.lhs,
                rhs: r.rhs,
                holds: r.holds,
                equality: r.equality,
                closure_power: r.closure_power,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| (a.n, &a.gens).cmp(&(b.n, &b.gens)));
    Ok(SweepSummary {
        count,
        seed,
        max_dim,
        all_hold: rows.iter().all(|r| r.holds),
        equality_iff_power: rows
            .iter()
            .all(|r| r.equality == r.closure_power.is_some()),
        equality_cases: rows.iter().filter(|r| r.equality).count(),
        rows,
    })
}

fn gens_text(ideal: &MonomialIdeal) -> String {
    ideal
        .gens()
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Fits `|scaled(k) - e| <= C / k` on the first `fit_upto` entries and
/// returns `C`.
pub fn fit_convergence_constant(series: &ColengthSeries, e: &Rational, fit_upto: u32) -> Rational {
    series
        .entries
        .iter()
        .filter(|en| en.k <= fit_upto)
        .map(|en| {
            let diff = &en.scaled - e;
            let diff = if diff < Rational::zero() { -diff } else { diff };
            diff * int(en.k as i64)
        })
        .max()
        .unwrap_or_else(Rational::one)
}
