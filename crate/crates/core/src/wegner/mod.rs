//! The averaged eigenvalue-counting bound and the Monte Carlo experiments
//! that test it.
//!
//! Samples are indexed; each index determines its couplings through the
//! per-site streams of [`crate::lattice::sample_couplings`], and every
//! reduction folds results in index order. Output therefore does not depend
//! on the [`SampleExecutor`] used.

mod bound;
mod disorder;
mod montecarlo;
mod record;
mod stats;
mod sweeps;

pub use bound::{
    abstract_bound, bound_report, coefficients_for, literal_bound, local_rank, rank_weighted_sum, BoundReport,
    WegnerBoundInput,
};
pub use disorder::{large_disorder_probability, LargeDisorder, MIN_PROBABILITY_SAMPLES};
pub use montecarlo::{
    estimate_from_spectra, mc_expected_count, pilot_median_energy, sample_spectra, AlloyModel, SampleExecutor,
    Sequential, PILOT_SEED_OFFSET,
};
pub use record::{ExperimentRecord, RECORD_SCHEMA};
pub use stats::{linear_fit, wilson_interval, LinearFit, MeanEstimate, Z_95};
pub use sweeps::{
    bound_check, bound_check_records, epsilon_sweep, ids_estimate, volume_sweep, BoundCheck, EpsilonSweep, IdsCurve,
    VolumePoint, VolumeSweep, SATURATION_SLOPE, SIGMAS,
};
