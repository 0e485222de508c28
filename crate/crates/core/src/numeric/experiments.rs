use std::f64::consts::PI;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::mc::{estimate_threshold, mc_integral, McConfig, McEstimate, ThresholdInterval};
use super::model::PshModel;
use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::polytope::{NewtonPolytope, WeightVector};
use crate::rational::{self, int, Rational};

/// Normalization data attached to an experiment: `-A <= phi <= 0` near the
/// boundary and a Monge-Ampère mass budget `M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub bound_a: f64,
    #[serde(with = "rational::serde_str")]
    pub mass_budget: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<String>>,
}

impl ExperimentConfig {
    pub fn new(bound_a: f64, mass_budget: Rational, gamma: Option<&WeightVector>) -> Result<Self> {
        if !(bound_a.is_finite() && bound_a >= 0.0) {
            return Err(Error::Domain(format!("bound A = {bound_a} must be >= 0")));
        }
        if !mass_budget.is_positive() {
            return Err(Error::Domain(format!("mass budget {mass_budget} must be positive")));
        }
        Ok(ExperimentConfig {
            bound_a,
            mass_budget,
            gamma: gamma.map(|w| w.gamma().iter().map(rational::to_string).collect()),
        })
    }
}

/// Monge-Ampère mass of `lambda log|z|` at the origin.
pub fn radial_mass(lambda: &Rational, n: usize) -> Result<Rational> {
    if !lambda.is_positive() {
        return Err(Error::Domain(format!("lambda {lambda} must be positive")));
    }
    Ok(rational::pow(lambda, n as u32))
}

/// Surface area of the unit sphere in `C^n = R^{2n}`.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powi(n as i32) / factorial(n - 1)
}

/// Volume of the ball of radius `r` in `C^m`.
pub fn ball_volume(m: usize, r: f64) -> f64 {
    PI.powi(m as i32) * r.powi(2 * m as i32) / factorial(m)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `∫_{|z|<r} |z|^{-2c lambda} dλ`, finite iff `c lambda < n`.
pub fn radial_integral(n: usize, c_lambda: f64, r: f64) -> f64 {
    let p = 2.0 * (n as f64 - c_lambda);
    if p <= 0.0 {
        f64::INFINITY
    } else {
        sphere_area(n) * r.powf(p) / p
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessRow {
    #[serde(with = "rational::serde_str")]
    pub eps: Rational,
    #[serde(with = "rational::serde_str")]
    pub mass: Rational,
    pub mass_below_bound: bool,
    pub integral: f64,
    pub std_error: f64,
    pub exact: f64,
    pub integral_times_eps: f64,
    /// Integral divided by the previous row's (larger eps).
    pub ratio_to_previous: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessTable {
    pub n: usize,
    pub config: ExperimentConfig,
    pub rows: Vec<SharpnessRow>,
    pub masses_below_bound: bool,
    pub integrals_increasing: bool,
}

/// `phi_eps = (n - eps) log|z|`: mass `(n - eps)^n < n^n`, yet
/// `∫ e^{-2 phi_eps}` blows up like `1/eps`. Rows are ordered by
/// decreasing `eps`.
pub fn sharpness_experiment(n: usize, eps: &[Rational], cfg: &McConfig) -> Result<SharpnessTable> {
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let nn = int(n as i64);
    let mut eps = eps.to_vec();
    eps.sort_by(|a, b| b.cmp(a));
    eps.dedup();
    let bound = rational::pow(&nn, n as u32);
    let config = ExperimentConfig::new(0.0, bound.clone(), None)?;
    let mut rows: Vec<SharpnessRow> = Vec::with_capacity(eps.len());
    for e in eps {
        if !e.is_positive() || e >= nn {
            return Err(Error::Domain(format!("eps {e} not in (0, {n})")));
        }
        let lambda = &nn - &e;
        let mass = radial_mass(&lambda, n)?;
        let model = PshModel::radial(n, lambda.clone())?;
        let est = mc_integral(&model, 1.0, None, cfg)?;
        let ratio_to_previous = rows.last().map(|p| est.value / p.integral);
        rows.push(SharpnessRow {
            mass_below_bound: mass < bound,
            mass,
            integral: est.value,
            std_error: est.std_error,
            exact: radial_integral(n, rational::to_f64(&lambda), cfg.radius),
            integral_times_eps: est.value * rational::to_f64(&e),
            ratio_to_previous,
            eps: e,
        });
    }
    Ok(SharpnessTable {
        n,
        config,
        masses_below_bound: rows.iter().all(|r| r.mass_below_bound),
        integrals_increasing: rows.windows(2).all(|p| p[1].integral > p[0].integral),
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct KiselmanRow {
    pub eps: f64,
    /// Exactly zero: the model depends on `z_1` alone.
    pub mass: u32,
    pub integral: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LogLawCheck {
    pub eps_large: f64,
    pub eps_small: f64,
    pub measured_difference: f64,
    pub predicted_difference: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KiselmanTable {
    pub n: usize,
    pub radius: f64,
    /// `K` in `∫ (|z_1|^2 + eps^2)^{-1} ~ K log(1/eps)`.
    pub log_law_constant: f64,
    pub rows: Vec<KiselmanRow>,
    pub checks: Vec<LogLawCheck>,
}

/// `phi_eps = (1/2) log(|z_1|^2 + eps^2)` has zero Monge-Ampère mass for
/// `n >= 2` while `∫ e^{-2 phi_eps}` grows like `log(1/eps)`.
pub fn kiselman_experiment(n: usize, eps: &[f64], cfg: &McConfig) -> Result<KiselmanTable> {
    if n < 2 {
        return Err(Error::Domain("the Kiselman family needs n >= 2".into()));
    }
    let mut eps = eps.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    // Near z_1 = 0 the slice ball has volume V_{n-1}(r); the disk integral
    // of 1/(|z_1|^2 + eps^2) is pi log(1 + r^2/eps^2).
    let log_law_constant = 2.0 * PI * ball_volume(n - 1, cfg.radius);
    let mut rows = Vec::with_capacity(eps.len());
    for &e in &eps {
        let model = PshModel::kiselman(n, e)?;
        let est = mc_integral(&model, 1.0, None, cfg)?;
        if est.diverged {
            return Err(Error::Numeric(format!(
                "bounded integrand reported divergent at eps = {e}"
            )));
        }
        rows.push(KiselmanRow {
            eps: e,
            mass: 0,
            integral: est.value,
            std_error: est.std_error,
        });
    }
    let checks = rows
        .windows(2)
        .map(|p| {
            let measured = p[1].integral - p[0].integral;
            let predicted = log_law_constant * (p[0].eps / p[1].eps).ln();
            LogLawCheck {
                eps_large: p[0].eps,
                eps_small: p[1].eps,
                measured_difference: measured,
                predicted_difference: predicted,
                relative_error: (measured - predicted).abs() / predicted,
            }
        })
        .collect();
    Ok(KiselmanTable {
        n,
        radius: cfg.radius,
        log_law_constant,
        rows,
        checks,
    })
}

/// Rejection-sampling estimate of `Vol(R_+^n \ P)` inside `[0, B]^n`.
pub fn mc_complement_volume(p: &NewtonPolytope, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    const BLOCK: usize = 4096;
    let n = p.dim();
    let b = p.box_bound() as f64;
    let blocks = cfg.samples.div_ceil(BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(blk as u64);
            let count = BLOCK.min(cfg.samples - blk * BLOCK);
            let mut x = vec![0.0; n];
            let mut hits = 0u64;
            for _ in 0..count {
                for xi in x.iter_mut() {
                    *xi = rng.gen::<f64>() * b;
                }
                if !p.contains_point_f64(&x) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let total = cfg.samples as f64;
    let frac = hits as f64 / total;
    let box_volume = b.powi(n as i32);
    Ok(McEstimate {
        value: box_volume * frac,
        std_error: box_volume * (frac * (1.0 - frac) / total).sqrt(),
        tail: 0.0,
        shell_contributions: Vec::new(),
        log_shell_contributions: Vec::new(),
        diverged: false,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HolderReport {
    pub first: String,
    pub second: String,
    pub product: String,
    #[serde(with = "rational::serde_str")]
    pub lct_first: Rational,
    #[serde(with = "rational::serde_str")]
    pub lct_second: Rational,
    #[serde(with = "rational::serde_str")]
    pub lct_product: Rational,
    /// `1 / (1/lct(J1) + 1/lct(J2))`
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    pub holds: bool,
    pub tight: bool,
    pub mc_interval: ThresholdInterval,
    pub mc_contains_exact: bool,
}

pub fn holder_experiment(
    j1: &MonomialIdeal,
    j2: &MonomialIdeal,
    cfg: &McConfig,
    steps: u32,
) -> Result<HolderReport> {
    if j1.dim() != j2.dim() {
        return Err(Error::DimensionMismatch {
            expected: j1.dim(),
            got: j2.dim(),
        });
    }
    let lct_first = NewtonPolytope::new(j1)?.lct();
    let lct_second = NewtonPolytope::new(j2)?.lct();
    let product = j1.product(j2)?;
    let lct_product = NewtonPolytope::new(&product)?.lct();
    let inv = lct_first.recip() + lct_second.recip();
    if inv.is_zero() {
        return Err(Error::Internal("degenerate thresholds".into()));
    }
    let bound = inv.recip();
    if lct_product < bound {
        return Err(Error::Internal(format!(
            "Hölder bound violated: lct {lct_product} < {bound}"
        )));
    }
    let model = PshModel::toric(product.clone(), int(1))?;
    let mc_interval = estimate_threshold(&model, None, cfg, steps)?;
    let mc_contains_exact = mc_interval.contains(rational::to_f64(&lct_product));
    Ok(HolderReport {
        first: j1.to_string(),
        second: j2.to_string(),
        product: product.to_string(),
        holds: true,
        tight: lct_product == bound,
        lct_first,
        lct_second,
        lct_product,
        bound,
        mc_interval,
        mc_contains_exact,
    })
}
