//! Monte Carlo estimation of integrability thresholds and the numerical
//! experiments built on it.

mod experiments;
mod mc;
mod model;

pub use experiments::{
    ball_volume, holder_experiment, kiselman_experiment, mc_complement_volume, radial_integral,
    radial_mass, sharpness_experiment, sphere_area, ExperimentConfig, HolderReport, KiselmanRow,
    KiselmanTable, LogLawCheck, SharpnessRow, SharpnessTable,
};
pub use mc::{
    estimate_threshold, mc_integral, Evaluation, McConfig, McEstimate, ThresholdInterval,
    DEFAULT_BISECTION_STEPS,
};
pub use model::{ModelKind, PshModel};
