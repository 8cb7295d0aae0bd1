use alloc::vec::Vec;

use super::bound::{abstract_bound, coefficients_for, WegnerBoundInput};
use super::montecarlo::{AlloyModel, SampleExecutor};
use super::record::ExperimentRecord;
use super::stats::{wilson_interval, MeanEstimate, Z_95};
use crate::math;
use crate::spectral::resolvent_distance;
use crate::{Error, Result};

/// Probability estimates need at least this many samples.
pub const MIN_PROBABILITY_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct LargeDisorder {
    pub energy: f64,
    /// Samples with `dist(σ(H), E) < e^{−L}`.
    pub hits: usize,
    pub n_samples: usize,
    pub probability: f64,
    /// 95% Wilson interval.
    pub lower: f64,
    pub upper: f64,
    /// `min(1, counting bound at ε = e^{−L})`.
    pub bound: f64,
    /// `max(bound, L^{−p})`.
    pub threshold: f64,
    pub record: ExperimentRecord,
}

/// Estimates `P{dist(σ(H_{ω,L}), E) < e^{−L}}` and checks the upper
/// confidence limit against `max(min(1, B(e^{−L})), L^{−p})`.
///
/// Requires `‖f‖_BV ≤ e^{−2L}` and at least 100 samples.
pub fn large_disorder_probability<E: SampleExecutor + ?Sized>(
    model: &AlloyModel,
    energy: f64,
    p: f64,
    n_samples: usize,
    master_seed: u64,
    executor: &E,
) -> Result<LargeDisorder> {
    if n_samples < MIN_PROBABILITY_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n_samples,
            min: MIN_PROBABILITY_SAMPLES,
        });
    }
    let side = model.lattice().side();
    let bv = model.density().bv_norm();
    let threshold_bv = math::exp(-2.0 * side as f64);
    if bv > threshold_bv * (1.0 + 1e-12) {
        return Err(Error::NotLargeDisorder {
            bv_norm: bv,
            threshold: threshold_bv,
        });
    }
    let radius = math::exp(-(side as f64));
    let hits: Vec<Result<bool>> = executor.map_indexed(n_samples, |i| {
        let spectrum = model.spectrum(master_seed, i as u64)?;
        Ok(resolvent_distance(&spectrum, energy) < radius)
    });
    let hits = hits.into_iter().collect::<Result<Vec<bool>>>()?.into_iter().filter(|&h| h).count();
    let probability = hits as f64 / n_samples as f64;
    let (lower, upper) = wilson_interval(hits, n_samples, Z_95);
    let field = coefficients_for(model.potential(), side)?;
    let b = abstract_bound(&WegnerBoundInput {
        field: &field,
        density: model.density(),
        potential: model.potential(),
        lattice: model.lattice(),
        epsilon: radius,
        energy,
    })?;
    let bound = b.min(1.0);
    let threshold = bound.max(math::powf(side as f64, -p));
    let estimate = MeanEstimate {
        mean: probability,
        std_error: math::sqrt(probability * (1.0 - probability) / n_samples as f64),
        n_samples,
    };
    let record = ExperimentRecord::new("large-disorder", "probability", model, estimate, master_seed)
        .with_window(Some(radius), Some(energy))
        .with_bound(threshold, Some(bound), Some(field.construction().tag()))
        .with_passed(upper <= threshold);
    if upper > threshold {
        return Err(Error::LargeDisorderViolated { upper, threshold });
    }
    Ok(LargeDisorder {
        energy,
        hits,
        n_samples,
        probability,
        lower,
        upper,
        bound,
        threshold,
        record,
    })
}
