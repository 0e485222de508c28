//! Command-line front end. `main.rs` only parses arguments, configures the
//! thread pool and maps errors to exit codes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{self, MonomialOrder, OrderKind};
use crate::ideal::MonomialIdeal;
use crate::multiplicity::{self, IneqReport};
use crate::numeric::{self, McConfig, PshModel, ThresholdInterval, DEFAULT_BISECTION_STEPS};
use crate::polytope::{Facet, NewtonPolytope, WeightVector};
use crate::rational::{self, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "lctkit", version, about = "Log canonical thresholds, multiplicities and Monte Carlo integrability checks")]
pub struct Cli {
    /// Output format; csv is available for verbs that produce a table.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Log canonical threshold and the facet realizing it.
    Lct { ideal: PathBuf },
    /// Samuel multiplicity and the first colengths of powers.
    Mult {
        ideal: PathBuf,
        #[arg(long, default_value_t = 5)]
        kmax: u32,
    },
    /// Integral closure and whether it is a power of the maximal ideal.
    Closure { ideal: PathBuf },
    /// lct^n e >= n^n and the colength bound.
    Check { ideal: PathBuf },
    /// Weighted threshold and the weighted inequality.
    Weighted {
        ideal: PathBuf,
        /// Comma-separated weights in [0, 1), e.g. 1/2,0.
        #[arg(long)]
        gamma: String,
    },
    /// Product of two ideals, then `check`.
    Product { first: PathBuf, second: PathBuf },
    /// Gröbner basis, initial ideal, colength and the semicontinuity check.
    Reduce {
        system: PathBuf,
        #[arg(long, value_enum, default_value_t = OrderKind::Grevlex)]
        order: OrderKind,
        /// Allowed excess of lct(initial) over the Monte Carlo upper end.
        #[arg(long, default_value_t = 0.07)]
        tolerance: f64,
        #[command(flatten)]
        mc: McArgs,
    },
    /// n! colength(J^k) / k^n for k = 1..kmax.
    Colengths {
        ideal: PathBuf,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
    },
    /// Monte Carlo bracket for the threshold of (c/2) log sum |z^beta|^2.
    Estimate {
        ideal: PathBuf,
        #[arg(long)]
        gamma: Option<String>,
        /// Scale c of the model.
        #[arg(long, default_value = "1")]
        scale: String,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Numerical experiments.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Randomized check of the inequality and its equality case.
    Sweep {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// (n - eps) log|z|: bounded mass, integrals growing like 1/eps.
    Sharpness {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "1/5,1/10,1/20")]
        eps: String,
        #[command(flatten)]
        mc: McArgs,
    },
    /// (1/2) log(|z_1|^2 + eps^2): zero mass, integrals growing like log(1/eps).
    Kiselman {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value = "0.1,0.01")]
        eps: String,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Threshold of a product against 1 / (1/lct(J1) + 1/lct(J2)).
    Holder {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        mc: McArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub shells: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Divergence window.
    #[arg(long)]
    pub window: Option<usize>,
    /// Bisection steps.
    #[arg(long, default_value_t = DEFAULT_BISECTION_STEPS)]
    pub steps: u32,
}

impl McArgs {
    pub fn config(&self) -> Result<McConfig> {
        let d = McConfig::default();
        let cfg = McConfig {
            samples: self.samples.unwrap_or(d.samples),
            shells: self.shells.unwrap_or(d.shells),
            radius: self.radius.unwrap_or(d.radius),
            ratio: self.ratio.unwrap_or(d.ratio),
            seed: self.seed.unwrap_or(d.seed),
            window: self.window.unwrap_or(d.window),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    verb: &'a str,
    inputs: Vec<String>,
    result: T,
    provenance: Provenance,
}

#[derive(Serialize)]
struct Provenance {
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<McConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bisection_steps: Option<u32>,
}

impl Provenance {
    fn exact() -> Self {
        Provenance {
            version: VERSION,
            seed: None,
            config: None,
            bisection_steps: None,
        }
    }

    fn numeric(cfg: &McConfig, steps: Option<u32>) -> Self {
        Provenance {
            version: VERSION,
            seed: Some(cfg.seed),
            config: Some(cfg.clone()),
            bisection_steps: steps,
        }
    }
}

#[derive(Serialize)]
struct LctResult {
    ideal: String,
    n: usize,
    #[serde(with = "rational::serde_str")]
    lct: Rational,
    facet: Facet,
    facets: Vec<Facet>,
}

#[derive(Serialize)]
struct MultResult {
    ideal: String,
    #[serde(with = "rational::serde_str")]
    e: Rational,
    colength: u64,
    colength_series: Vec<multiplicity::ColengthEntry>,
}

#[derive(Serialize)]
struct ClosureResult {
    ideal: String,
    closure: String,
    is_power_of_maximal: bool,
    power: Option<u32>,
}

#[derive(Serialize)]
struct CheckResult {
    ideal: String,
    #[serde(flatten)]
    inequality: IneqReport,
    colength: u64,
    colength_bound_holds: bool,
}

#[derive(Serialize)]
struct EstimateResult {
    ideal: String,
    model: &'static str,
    #[serde(with = "rational::serde_str")]
    scale: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<Vec<String>>,
    /// Exact threshold of the model, for comparison.
    #[serde(with = "rational::serde_str")]
    exact: Rational,
    interval: ThresholdInterval,
    contains_exact: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_ideal(path: &Path) -> Result<MonomialIdeal> {
    MonomialIdeal::parse(&read(path)?)
}

fn display(paths: &[&PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

fn parse_gamma(text: &str) -> Result<WeightVector> {
    WeightVector::parse(text)
}

fn parse_list<T>(text: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            f(s).ok_or_else(|| Error::parse(0, format!("invalid {what} {s:?}")))
        })
        .collect()
}

struct Output<'w, W: Write> {
    out: &'w mut W,
    format: Format,
}

impl<W: Write> Output<'_, W> {
    fn json<T: Serialize>(&mut self, verb: &str, inputs: Vec<String>, result: T, provenance: Provenance) -> Result<()> {
        if self.format == Format::Csv {
            return Err(Error::Domain(format!("verb {verb} has no tabular output; use --format json")));
        }
        self.write_json(verb, inputs, result, provenance)
    }

    fn write_json<T: Serialize>(&mut self, verb: &str, inputs: Vec<String>, result: T, provenance: Provenance) -> Result<()> {
        let report = Report {
            verb,
            inputs,
            result,
            provenance,
        };
        let text = serde_json::to_string_pretty(&report)
            .map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    /// JSON report, or the given rows as CSV.
    fn table<T: Serialize, R: Serialize>(
        &mut self,
        verb: &str,
        inputs: Vec<String>,
        result: T,
        rows: &[R],
        provenance: Provenance,
    ) -> Result<()> {
        match self.format {
            Format::Json => self.write_json(verb, inputs, result, provenance),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in rows {
                    w.serialize(r)
                        .map_err(|e| Error::Internal(format!("csv serialization failed: {e}")))?;
                }
                let bytes = w
                    .into_inner()
                    .map_err(|e| Error::Internal(format!("csv serialization failed: {e}")))?;
                self.out.write_all(&bytes)?;
                Ok(())
            }
        }
    }
}

fn check_result(ideal: &MonomialIdeal) -> Result<CheckResult> {
    Ok(CheckResult {
        ideal: ideal.to_string(),
        inequality: multiplicity::check_main_inequality(ideal)?,
        colength: ideal.colength()?,
        colength_bound_holds: multiplicity::check_colength_bound(ideal)?,
    })
}

/// Runs one command, writing the report to `out`.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    let mut o = Output {
        out,
        format: cli.format,
    };
    match &cli.command {
        Command::Lct { ideal } => {
            let j = read_ideal(ideal)?;
            let p = NewtonPolytope::new(&j)?;
            let result = LctResult {
                ideal: j.to_string(),
                n: j.dim(),
                lct: p.lct(),
                facet: p.lct_facet().clone(),
                facets: p.facets().to_vec(),
            };
            o.json("lct", display(&[ideal]), result, Provenance::exact())
        }
        Command::Mult { ideal, kmax } => {
            let j = read_ideal(ideal)?;
            let series = multiplicity::colength_series(&j, *kmax)?;
            let result = MultResult {
                ideal: j.to_string(),
                e: multiplicity::samuel_multiplicity(&j)?,
                colength: j.colength()?,
                colength_series: series.entries,
            };
            o.json("mult", display(&[ideal]), result, Provenance::exact())
        }
        Command::Closure { ideal } => {
            let j = read_ideal(ideal)?;
            let p = NewtonPolytope::new(&j)?;
            let (is_power_of_maximal, power) = p.is_power_of_maximal();
            let result = ClosureResult {
                ideal: j.to_string(),
                closure: p.integral_closure()?.to_string(),
                is_power_of_maximal,
                power,
            };
            o.json("closure", display(&[ideal]), result, Provenance::exact())
        }
        Command::Check { ideal } => {
            let j = read_ideal(ideal)?;
            o.json("check", display(&[ideal]), check_result(&j)?, Provenance::exact())
        }
        Command::Weighted { ideal, gamma } => {
            let j = read_ideal(ideal)?;
            let w = parse_gamma(gamma)?;
            let result = multiplicity::check_weighted_inequality(&j, &w)?;
            o.json("weighted", display(&[ideal]), result, Provenance::exact())
        }
        Command::Product { first, second } => {
            let product = read_ideal(first)?.product(&read_ideal(second)?)?;
            o.json("product", display(&[first, second]), check_result(&product)?, Provenance::exact())
        }
        Command::Reduce {
            system,
            order,
            tolerance,
            mc,
        } => {
            let text = read(system)?;
            let order = MonomialOrder::new(*order, groebner::system_dim(&text)?);
            let (_, gens) = groebner::parse_system(&text, &order)?;
            let cfg = mc.config()?;
            let result = groebner::semicontinuity_report(&gens, &order, &cfg, mc.steps, *tolerance)?;
            o.json("reduce", display(&[system]), result, Provenance::numeric(&cfg, Some(mc.steps)))
        }
        Command::Colengths { ideal, kmax } => {
            let j = read_ideal(ideal)?;
            let series = multiplicity::colength_series(&j, *kmax)?;
            o.table("colengths", display(&[ideal]), &series, &series.entries, Provenance::exact())
        }
        Command::Estimate {
            ideal,
            gamma,
            scale,
            mc,
        } => {
            let j = read_ideal(ideal)?;
            let scale = rational::parse(scale)
                .ok_or_else(|| Error::parse(0, format!("invalid scale {scale:?}")))?;
            let w = gamma.as_deref().map(parse_gamma).transpose()?;
            let p = NewtonPolytope::new(&j)?;
            let exact = match &w {
                Some(w) => p.weighted_threshold(w)?,
                None => p.lct(),
            } / &scale;
            let cfg = mc.config()?;
            let model = PshModel::toric(j.clone(), scale.clone())?;
            let interval = numeric::estimate_threshold(&model, w.as_ref(), &cfg, mc.steps)?;
            let result = EstimateResult {
                ideal: j.to_string(),
                model: model.name(),
                scale,
                gamma: w.map(|w| w.gamma().iter().map(rational::to_string).collect()),
                contains_exact: interval.contains(rational::to_f64(&exact)),
                exact,
                interval,
            };
            let prov = Provenance::numeric(&cfg, Some(mc.steps));
            let rows = result.interval.evaluations.clone();
            o.table("estimate", display(&[ideal]), result, &rows, prov)
        }
        Command::Experiment(Experiment::Sharpness { dim, eps, mc }) => {
            let eps = parse_list(eps, "eps", rational::parse)?;
            let cfg = mc.config()?;
            let table = numeric::sharpness_experiment(*dim, &eps, &cfg)?;
            let prov = Provenance::numeric(&cfg, None);
            o.table("experiment sharpness", Vec::new(), &table, &table.rows, prov)
        }
        Command::Experiment(Experiment::Kiselman { dim, eps, mc }) => {
            let eps = parse_list(eps, "eps", |s| s.parse::<f64>().ok())?;
            let cfg = mc.config()?;
            let table = numeric::kiselman_experiment(*dim, &eps, &cfg)?;
            let prov = Provenance::numeric(&cfg, None);
            o.table("experiment kiselman", Vec::new(), &table, &table.rows, prov)
        }
        Command::Experiment(Experiment::Holder { first, second, mc }) => {
            let (a, b) = (read_ideal(first)?, read_ideal(second)?);
            let cfg = mc.config()?;
            let report = numeric::holder_experiment(&a, &b, &cfg, mc.steps)?;
            let prov = Provenance::numeric(&cfg, Some(mc.steps));
            o.json("experiment holder", display(&[first, second]), report, prov)
        }
        Command::Sweep {
            count,
            seed,
            max_dim,
        } => {
            let summary = multiplicity::sweep(*count, *seed, *max_dim)?;
            let prov = Provenance {
                seed: Some(*seed),
                ..Provenance::exact()
            };
            o.table("sweep", Vec::new(), &summary, &summary.rows, prov)?;
            if !summary.all_hold || !summary.equality_iff_power {
                return Err(Error::Internal("sweep found a violation of the inequality or its equality case".into()));
            }
            Ok(())
        }
    }
}
