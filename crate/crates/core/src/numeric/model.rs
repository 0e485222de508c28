use num_complex::Complex64;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::groebner::Polynomial;
use crate::ideal::MonomialIdeal;
use crate::polytope::NewtonPolytope;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    /// `phi = (c/2) log sum |z^beta|^2` over the generators of a monomial ideal.
    Toric {
        ideal: MonomialIdeal,
        scale: Rational,
    },
    /// `phi = lambda log |z|`.
    Radial { lambda: Rational },
    /// `phi = (1/2) log(|z_1|^2 + eps^2)`.
    Kiselman { epsilon: f64 },
    /// `phi = (c/2) log sum |g_j|^2` for polynomials `g_j`.
    Poly {
        gens: Vec<Polynomial>,
        scale: Rational,
    },
}

/// A model plurisubharmonic function on a neighborhood of the origin of `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PshModel {
    dim: usize,
    kind: ModelKind,
    // Cached f64 data for the hot loop.
    scale: f64,
    toric_gens: Vec<Vec<f64>>,
    rays: Vec<Ray>,
}

/// A direction `tau = t * normal` along which a toric singularity is
/// quasi-homogeneous, stored relative to its smallest coordinate `dominant`:
/// `tau_j - tau_dominant = slopes[j] * tau_dominant`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub dominant: usize,
    pub slopes: Vec<f64>,
}

impl PshModel {
    pub fn toric(ideal: MonomialIdeal, scale: Rational) -> Result<Self> {
        require_positive(&scale, "scale")?;
        ideal.require_m_primary()?;
        let rays = NewtonPolytope::new(&ideal)?
            .facets()
            .iter()
            .map(|f| {
                let (dominant, &min) = f
                    .normal
                    .iter()
                    .enumerate()
                    .min_by_key(|&(_, v)| *v)
                    .expect("facet normal is nonempty");
                let slopes = f.normal.iter().map(|&v| v as f64 / min as f64 - 1.0).collect();
                Ray { dominant, slopes }
            })
            .collect();
        let toric_gens = ideal
            .gens()
            .iter()
            .map(|g| g.coords().iter().map(|&c| c as f64).collect())
            .collect();
        Ok(PshModel {
            dim: ideal.dim(),
            scale: rational::to_f64(&scale),
            kind: ModelKind::Toric { ideal, scale },
            toric_gens,
            rays,
        })
    }

    pub fn radial(dim: usize, lambda: Rational) -> Result<Self> {
        require_positive(&lambda, "lambda")?;
        require_dim(dim)?;
        Ok(PshModel {
            dim,
            scale: rational::to_f64(&lambda),
            kind: ModelKind::Radial { lambda },
            toric_gens: Vec::new(),
            rays: Vec::new(),
        })
    }

    pub fn kiselman(dim: usize, epsilon: f64) -> Result<Self> {
        require_dim(dim)?;
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Domain(format!("epsilon {epsilon} must be positive")));
        }
        Ok(PshModel {
            dim,
            scale: 1.0,
            kind: ModelKind::Kiselman { epsilon },
            toric_gens: Vec::new(),
            rays: Vec::new(),
        })
    }

    pub fn poly(gens: Vec<Polynomial>, scale: Rational) -> Result<Self> {
        require_positive(&scale, "scale")?;
        let Some(first) = gens.first() else {
            return Err(Error::Domain("polynomial model needs generators".into()));
        };
        let dim = first.dim();
        if gens.iter().any(|g| g.dim() != dim) {
            return Err(Error::Domain("generators of different dimensions".into()));
        }
        if gens.iter().all(Polynomial::is_zero) {
            return Err(Error::Domain("all generators are zero".into()));
        }
        Ok(PshModel {
            dim,
            scale: rational::to_f64(&scale),
            kind: ModelKind::Poly { gens, scale },
            toric_gens: Vec::new(),
            rays: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::Toric { .. } => "toric",
            ModelKind::Radial { .. } => "radial",
            ModelKind::Kiselman { .. } => "kiselman",
            ModelKind::Poly { .. } => "poly",
        }
    }

    /// Rough ratio between the fastest and slowest coordinate scales of the
    /// singularity; sizes the log-magnitude range explored by the sampler.
    pub fn anisotropy(&self) -> f64 {
        match &self.kind {
            ModelKind::Toric { ideal, .. } => {
                ideal.gens().iter().map(|g| g.degree()).max().unwrap_or(1) as f64
            }
            ModelKind::Poly { gens, .. } => {
                gens.iter().map(Polynomial::degree).max().unwrap_or(1).max(1) as f64
            }
            ModelKind::Radial { .. } | ModelKind::Kiselman { .. } => 1.0,
        }
    }

    /// Quasi-homogeneity directions used to guide sampling; empty unless toric.
    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// `phi(z)` at the point with `|z_j| = exp(-tau_j)` and `arg z_j = theta_j`.
    pub fn phi(&self, tau: &[f64], theta: &[f64]) -> f64 {
        match &self.kind {
            ModelKind::Toric { .. } => {
                let lse = log_sum_exp(self.toric_gens.iter().map(|g| {
                    -2.0 * g.iter().zip(tau).map(|(b, t)| b * t).sum::<f64>()
                }));
                0.5 * self.scale * lse
            }
            ModelKind::Radial { .. } => {
                let log_norm_sq = log_sum_exp(tau.iter().map(|t| -2.0 * t));
                0.5 * self.scale * log_norm_sq
            }
            ModelKind::Kiselman { epsilon } => {
                let z1_sq = (-2.0 * tau[0]).exp();
                0.5 * (z1_sq + epsilon * epsilon).ln()
            }
            ModelKind::Poly { gens, .. } => {
                let z: Vec<Complex64> = tau
                    .iter()
                    .zip(theta)
                    .map(|(t, th)| Complex64::from_polar((-t).exp(), *th))
                    .collect();
                let sum_sq: f64 = gens.iter().map(|g| g.eval_complex(&z).norm_sqr()).sum();
                0.5 * self.scale * sum_sq.ln()
            }
        }
    }
}

fn require_positive(x: &Rational, what: &str) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive, got {x}")))
    }
}

fn require_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::Domain("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub(crate) fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}
