//! Shell-stratified Monte Carlo for `∫_{|z|<r} e^{-2c phi} ∏|z_j|^{-2 gamma_j} dλ`.
//!
//! Points are drawn in log-modulus coordinates `tau_j = -ln|z_j|`. A base
//! sample fixes the index `d` of the largest coordinate, the gaps
//! `delta_j = tau_j - tau_d >= 0`, the phases, and an offset inside a shell.
//! The same base sample is then translated into every shell, so shell
//! contributions of a log-homogeneous integrand form an exact geometric
//! sequence and borderline divergence is seen without sampling noise.
//!
//! Gaps come from a local proposal (exponential plus a wide uniform range)
//! or, for toric models, from a folded Laplace around one of the rays
//! `delta = slope * tau_d` given by the facet normals, where the mass of a
//! quasi-homogeneous singularity concentrates. Ray gaps depend on the shell,
//! except for diagonal rays, so homogeneous models keep exact ratios.
//!
//! Blocks of samples own independent ChaCha streams keyed by block index and
//! are merged in block order, which keeps results independent of the number
//! of worker threads.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::model::PshModel;
use crate::error::{Error, Result};
use crate::polytope::WeightVector;

const BLOCK: usize = 1024;
const RATIO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McConfig {
    /// Base samples; each one contributes to every shell.
    pub samples: usize,
    pub shells: usize,
    pub radius: f64,
    pub ratio: f64,
    pub seed: u64,
    /// Number of trailing shells inspected by the divergence test.
    pub window: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            samples: 100_000,
            shells: 24,
            radius: 0.5,
            ratio: 0.5,
            seed: 42,
            window: 4,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::Domain("need at least 2 samples".into()));
        }
        if self.window < 2 || self.shells < self.window {
            return Err(Error::Domain(format!(
                "need shells >= window >= 2, got shells {} and window {}",
                self.shells, self.window
            )));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::Domain(format!("shell ratio {} not in (0, 1)", self.ratio)));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::Domain(format!("radius {} must be positive", self.radius)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    /// Shell sum plus a geometric tail when convergent; the plain shell sum
    /// (possibly infinite) otherwise.
    pub value: f64,
    pub std_error: f64,
    pub tail: f64,
    /// Innermost shell last.
    pub shell_contributions: Vec<f64>,
    pub log_shell_contributions: Vec<f64>,
    pub diverged: bool,
}

/// Running `ln Σ exp(x_i)` kept as `max + ln(sum)`.
#[derive(Debug, Clone, Copy)]
struct LogSum {
    max: f64,
    sum: f64,
}

impl LogSum {
    const EMPTY: LogSum = LogSum {
        max: f64::NEG_INFINITY,
        sum: 0.0,
    };

    fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.sum += (x - self.max).exp();
        }
    }

    fn merge(&mut self, other: &LogSum) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        if other.max > self.max {
            self.sum = self.sum * (self.max - other.max).exp() + other.sum;
            self.max = other.max;
        } else {
            self.sum += other.sum * (other.max - self.max).exp();
        }
    }

    fn ln(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

/// First and second moments in log space.
#[derive(Debug, Clone, Copy)]
struct Moments {
    first: LogSum,
    second: LogSum,
}

impl Moments {
    const EMPTY: Moments = Moments {
        first: LogSum::EMPTY,
        second: LogSum::EMPTY,
    };

    fn push(&mut self, log_w: f64) {
        self.first.push(log_w);
        self.second.push(2.0 * log_w);
    }

    fn merge(&mut self, other: &Moments) {
        self.first.merge(&other.first);
        self.second.merge(&other.second);
    }

    /// `ln` of the sample mean.
    fn ln_mean(&self, n: f64) -> f64 {
        self.first.ln() - n.ln()
    }

    /// Standard error of the sample mean.
    fn std_error(&self, n: f64) -> f64 {
        let lm = self.ln_mean(n);
        if lm == f64::NEG_INFINITY {
            return 0.0;
        }
        // Var/mean^2 = E[w^2]/E[w]^2 - 1
        let rel = (self.second.ln() - n.ln() - 2.0 * lm).exp() - 1.0;
        lm.exp() * (rel.max(0.0) / (n - 1.0)).sqrt()
    }
}

struct BlockStats {
    shells: Vec<Moments>,
    total: Moments,
    error: Option<Error>,
}

struct Sampler<'a> {
    model: &'a PshModel,
    n: usize,
    c: f64,
    gamma: Vec<f64>,
    rates: Vec<f64>,
    /// Indices into `model.rays()` grouped by dominant coordinate.
    rays_by_dominant: Vec<Vec<usize>>,
    shells: usize,
    /// `ln(1/r)`
    s0: f64,
    /// `ln(1/rho)`
    step: f64,
    /// Width of the range drawn for the dominant coordinate.
    width: f64,
    /// Range of the uniform part of the gap distribution.
    gap_range: f64,
}

/// How the gaps of a base sample were drawn.
enum Gaps {
    /// Fixed gaps, shared by every shell.
    Local,
    /// `|slope * tau_d + noise|` along a ray, recomputed per shell.
    Ray(usize),
}

/// Density of `|c + L|` with `L` standard Laplace.
fn folded_laplace_log_density(delta: f64, center: f64) -> f64 {
    (0.5 * (-(delta - center).abs()).exp() + 0.5 * (-(delta + center)).exp()).ln()
}

impl Sampler<'_> {
    fn local_log_density(&self, j: usize, delta: f64) -> f64 {
        let a = self.rates[j];
        let mut p = 0.5 * a * (-a * delta).exp();
        if delta <= self.gap_range {
            p += 0.5 / self.gap_range;
        }
        p.ln()
    }

    /// Log density of the gap vector given the dominant coordinate and its
    /// value, mixing the local proposal with every ray for `d`.
    fn gap_log_density(&self, d: usize, tau_d: f64, delta: &[f64]) -> f64 {
        let local: f64 = (0..self.n)
            .filter(|&j| j != d)
            .map(|j| self.local_log_density(j, delta[j]))
            .sum();
        let rays = &self.rays_by_dominant[d];
        if rays.is_empty() {
            return local;
        }
        let along = rays.iter().map(|&r| {
            let slopes = &self.model.rays()[r].slopes;
            (0..self.n)
                .filter(|&j| j != d)
                .map(|j| folded_laplace_log_density(delta[j], slopes[j] * tau_d))
                .sum::<f64>()
                - (rays.len() as f64).ln()
        });
        let along = super::model::log_sum_exp(along);
        0.5f64.ln() + super::model::log_sum_exp([local, along].into_iter())
    }

    fn run_block(&self, seed: u64, block: usize, count: usize) -> BlockStats {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block as u64);
        let n = self.n;
        let mut stats = BlockStats {
            shells: vec![Moments::EMPTY; self.shells],
            total: Moments::EMPTY,
            error: None,
        };
        let mut noise = vec![0.0; n];
        let mut delta = vec![0.0; n];
        let mut theta = vec![0.0; n];
        let mut tau = vec![0.0; n];
        let mut log_w = vec![0.0; self.shells];
        let base_log_q = -(n as f64).ln() - self.width.ln() - n as f64 * (2.0 * PI).ln();
        for _ in 0..count {
            let d = rng.gen_range(0..n);
            let offset = rng.gen::<f64>() * self.width;
            let rays = &self.rays_by_dominant[d];
            let gaps = if !rays.is_empty() && rng.gen::<bool>() {
                Gaps::Ray(rays[rng.gen_range(0..rays.len())])
            } else {
                Gaps::Local
            };
            for j in 0..n {
                if j == d {
                    noise[j] = 0.0;
                    continue;
                }
                noise[j] = match gaps {
                    Gaps::Ray(_) => {
                        let e = -(1.0 - rng.gen::<f64>()).ln();
                        if rng.gen::<bool>() {
                            e
                        } else {
                            -e
                        }
                    }
                    Gaps::Local if rng.gen::<bool>() => -(1.0 - rng.gen::<f64>()).ln() / self.rates[j],
                    Gaps::Local => rng.gen::<f64>() * self.gap_range,
                };
            }
            for t in theta.iter_mut() {
                *t = rng.gen::<f64>() * 2.0 * PI;
            }
            let mut total = LogSum::EMPTY;
            for (k, lw) in log_w.iter_mut().enumerate() {
                let tau_d = self.s0 + k as f64 * self.step + offset;
                match gaps {
                    Gaps::Local => delta.copy_from_slice(&noise),
                    Gaps::Ray(r) => {
                        let slopes = &self.model.rays()[r].slopes;
                        for j in 0..n {
                            delta[j] = if j == d {
                                0.0
                            } else {
                                (slopes[j] * tau_d + noise[j]).abs()
                            };
                        }
                    }
                }
                // -ln|z| relative to the outer edge of the shell
                let spread: f64 = delta.iter().map(|x| (-2.0 * x).exp()).sum();
                let rel = offset - 0.5 * spread.ln();
                if !(0.0..self.step).contains(&rel) {
                    *lw = f64::NEG_INFINITY;
                    continue;
                }
                for j in 0..n {
                    tau[j] = tau_d + delta[j];
                }
                let phi = self.model.phi(&tau, &theta);
                let log_q = base_log_q + self.gap_log_density(d, tau_d, &delta);
                let mut v = -2.0 * self.c * phi - log_q;
                for j in 0..n {
                    v += 2.0 * (self.gamma[j] - 1.0) * tau[j];
                }
                if v.is_nan() || v == f64::INFINITY {
                    stats.error = Some(Error::Numeric(format!(
                        "non-finite integrand sample at c = {} in shell {}",
                        self.c,
                        k + 1
                    )));
                    return stats;
                }
                *lw = v;
                total.push(v);
            }
            for (m, &v) in stats.shells.iter_mut().zip(&log_w) {
                m.push(v);
            }
            stats.total.push(total.ln());
        }
        stats
    }
}

/// Estimates `∫_{|z|<r} e^{-2c phi} ∏|z_j|^{-2 gamma_j} dλ` shell by shell.
/// Bisection midpoints are dyadic, so `c` is taken as `f64` without loss.
pub fn mc_integral(
    model: &PshModel,
    c: f64,
    w: Option<&WeightVector>,
    cfg: &McConfig,
) -> Result<McEstimate> {
    cfg.validate()?;
    let n = model.dim();
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::Domain(format!("exponent c = {c} must be nonnegative")));
    }
    let gamma = match w {
        Some(w) if w.dim() != n => {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: w.dim(),
            })
        }
        Some(w) => w.to_f64(),
        None => vec![0.0; n],
    };
    let step = (1.0 / cfg.ratio).ln();
    let s0 = (1.0 / cfg.radius).ln();
    let width = step + 0.5 * (n as f64).ln();
    let tau_max = s0 + cfg.shells as f64 * step + width;
    let sampler = Sampler {
        model,
        n,
        c,
        rates: gamma.iter().map(|g| 1.0 - g).collect(),
        gamma,
        rays_by_dominant: (0..n)
            .map(|d| {
                let rays = model.rays().iter().enumerate();
                rays.filter(|(_, r)| r.dominant == d).map(|(i, _)| i).collect()
            })
            .collect(),
        shells: cfg.shells,
        s0,
        step,
        width,
        gap_range: (model.anisotropy() - 1.0) * tau_max + 6.0,
    };

    let blocks = cfg.samples.div_ceil(BLOCK);
    let stats: Vec<BlockStats> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let count = BLOCK.min(cfg.samples - b * BLOCK);
            sampler.run_block(cfg.seed, b, count)
        })
        .collect();

    let mut shells = vec![Moments::EMPTY; cfg.shells];
    let mut total = Moments::EMPTY;
    for s in stats {
        if let Some(e) = s.error {
            return Err(e);
        }
        for (acc, m) in shells.iter_mut().zip(&s.shells) {
            acc.merge(m);
        }
        total.merge(&s.total);
    }

    let count = cfg.samples as f64;
    let logs: Vec<f64> = shells.iter().map(|m| m.ln_mean(count)).collect();
    let tail_logs = &logs[cfg.shells - cfg.window..];
    let diverged = tail_logs
        .windows(2)
        .all(|p| p[1] >= p[0] - RATIO_TOLERANCE);

    let shell_sum = total.ln_mean(count).exp();
    let mut std_error = total.std_error(count);
    let mut tail = 0.0;
    if !diverged {
        let first = tail_logs[0];
        let last = tail_logs[cfg.window - 1];
        if last.is_finite() && first.is_finite() {
            let q = ((last - first) / (cfg.window - 1) as f64).exp();
            if q < 1.0 {
                let a = q / (1.0 - q);
                tail = a * last.exp();
                std_error += a * shells[cfg.shells - 1].std_error(count);
            }
        }
    }
    let value = shell_sum + tail;
    if !diverged && !(value.is_finite() && std_error.is_finite()) {
        return Err(Error::Numeric(format!(
            "convergent estimate is not finite at c = {c}"
        )));
    }
    Ok(McEstimate {
        value,
        std_error,
        tail,
        shell_contributions: logs.iter().map(|l| l.exp()).collect(),
        log_shell_contributions: logs,
        diverged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub c: f64,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdInterval {
    pub c_lo: f64,
    /// Infinite when the integral never diverged up to the cap.
    pub c_hi: f64,
    pub cap: f64,
    pub bracketed: bool,
    pub steps: u32,
    pub evaluations: Vec<Evaluation>,
}

impl ThresholdInterval {
    pub fn width(&self) -> f64 {
        self.c_hi - self.c_lo
    }

    /// Closed-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        self.c_lo <= x && x <= self.c_hi
    }
}

pub const DEFAULT_BISECTION_STEPS: u32 = 7;

/// Bisection for the integrability threshold on `[0, 4n]`. Each step keeps
/// `c_lo` convergent and `c_hi` divergent.
pub fn estimate_threshold(
    model: &PshModel,
    w: Option<&WeightVector>,
    cfg: &McConfig,
    steps: u32,
) -> Result<ThresholdInterval> {
    let cap = 4.0 * model.dim() as f64;
    let mut evaluations = Vec::new();
    let top = mc_integral(model, cap, w, cfg)?;
    evaluations.push(Evaluation {
        c: cap,
        diverged: top.diverged,
    });
    if !top.diverged {
        return Ok(ThresholdInterval {
            c_lo: cap,
            c_hi: f64::INFINITY,
            cap,
            bracketed: false,
            steps: 0,
            evaluations,
        });
    }
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        let est = mc_integral(model, mid, w, cfg)?;
        evaluations.push(Evaluation {
            c: mid,
            diverged: est.diverged,
        });
        if est.diverged {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ThresholdInterval {
        c_lo: lo,
        c_hi: hi,
        cap,
        bracketed: true,
        steps,
        evaluations,
    })
}
