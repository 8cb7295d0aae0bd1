use alloc::string::{String, ToString};

use super::montecarlo::AlloyModel;
use super::stats::MeanEstimate;

/// Version tag carried by every record.
pub const RECORD_SCHEMA: &str = "wegner-record/1";

/// One measured quantity next to the bound it is compared against.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentRecord {
    pub schema: String,
    pub experiment: String,
    /// What `mc_estimate` measures: `count`, `ids`, `probability`, ...
    pub statistic: String,
    pub dim: usize,
    pub side: u32,
    pub epsilon: Option<f64>,
    pub energy: Option<f64>,
    pub density: String,
    pub potential: String,
    pub hopping: String,
    pub construction: Option<String>,
    pub mc_estimate: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub theoretical_bound: f64,
    pub literal_bound: Option<f64>,
    pub master_seed: u64,
    pub passed: bool,
}

impl ExperimentRecord {
    pub fn new(experiment: &str, statistic: &str, model: &AlloyModel, estimate: MeanEstimate, master_seed: u64) -> Self {
        Self {
            schema: RECORD_SCHEMA.to_string(),
            experiment: experiment.to_string(),
            statistic: statistic.to_string(),
            dim: model.lattice().dim(),
            side: model.lattice().side(),
            epsilon: None,
            energy: None,
            density: model.density().id(),
            potential: model.potential().label(),
            hopping: model.hopping().name().to_string(),
            construction: None,
            mc_estimate: estimate.mean,
            std_error: estimate.std_error,
            n_samples: estimate.n_samples,
            theoretical_bound: f64::INFINITY,
            literal_bound: None,
            master_seed,
            passed: true,
        }
    }

    pub fn with_window(mut self, epsilon: Option<f64>, energy: Option<f64>) -> Self {
        self.epsilon = epsilon;
        self.energy = energy;
        self
    }

    pub fn with_bound(mut self, bound: f64, literal: Option<f64>, construction: Option<&str>) -> Self {
        self.theoretical_bound = bound;
        self.literal_bound = literal;
        self.construction = construction.map(ToString::to_string);
        self
    }

    pub fn with_passed(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }
}
