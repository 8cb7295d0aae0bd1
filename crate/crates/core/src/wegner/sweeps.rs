use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::bound::{bound_report, coefficients_for, BoundReport, WegnerBoundInput};
use super::montecarlo::{estimate_from_spectra, sample_spectra, AlloyModel, SampleExecutor};
use super::record::ExperimentRecord;
use super::stats::{linear_fit, LinearFit, MeanEstimate};
use crate::math;
use crate::spectral::{count_in_interval, count_not_above};
use crate::transform::CoefficientField;
use crate::{Error, Result};

/// Acceptance margin in standard errors.
pub const SIGMAS: f64 = 3.0;

/// Fitted ε-exponents below this count as saturated.
pub const SATURATION_SLOPE: f64 = 0.5;

/// Estimate and bound for one interval `[E−ε, E+ε]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub epsilon: f64,
    pub energy: f64,
    pub estimate: MeanEstimate,
    pub report: BoundReport,
}

impl BoundCheck {
    /// `estimate ≤ bound + 3σ`.
    pub fn holds(&self) -> bool {
        self.estimate.within(self.report.bound, SIGMAS)
    }
}

fn bound_input<'a>(model: &'a AlloyModel, field: &'a CoefficientField, epsilon: f64, energy: f64) -> WegnerBoundInput<'a> {
    WegnerBoundInput {
        field,
        density: model.density(),
        potential: model.potential(),
        lattice: model.lattice(),
        epsilon,
        energy,
    }
}

fn count_estimate(spectra: &[Vec<f64>], energy: f64, epsilon: f64) -> MeanEstimate {
    estimate_from_spectra(spectra, |s| count_in_interval(s, energy - epsilon, energy + epsilon) as f64)
}

/// Checks the counting bound for each `ε`, all on the same samples.
pub fn bound_check<E: SampleExecutor + ?Sized>(
    model: &AlloyModel,
    field: &CoefficientField,
    energy: f64,
    epsilons: &[f64],
    n_samples: usize,
    master_seed: u64,
    executor: &E,
) -> Result<Vec<BoundCheck>> {
    if n_samples < 2 {
        return Err(Error::TooFewSamples { got: n_samples, min: 2 });
    }
    let spectra = sample_spectra(model, n_samples, master_seed, executor)?;
    epsilons
        .iter()
        .map(|&epsilon| {
            let report = bound_report(&bound_input(model, field, epsilon, energy))?;
            Ok(BoundCheck {
                epsilon,
                energy,
                estimate: count_estimate(&spectra, energy, epsilon),
                report,
            })
        })
        .collect()
}

pub fn bound_check_records(model: &AlloyModel, field: &CoefficientField, checks: &[BoundCheck], master_seed: u64) -> Vec<ExperimentRecord> {
    checks
        .iter()
        .map(|c| {
            ExperimentRecord::new("bound-check", "count", model, c.estimate, master_seed)
                .with_window(Some(c.epsilon), Some(c.energy))
                .with_bound(c.report.bound, c.report.literal, Some(field.construction().tag()))
                .with_passed(c.holds())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonSweep {
    pub energy: f64,
    pub epsilons: Vec<f64>,
    pub estimates: Vec<MeanEstimate>,
    /// Fit of `log estimate` against `log ε`.
    pub fit: LinearFit,
    /// The estimates no longer scale with `ε`.
    pub out_of_regime: bool,
    pub records: Vec<ExperimentRecord>,
}

/// Fits the exponent `a` in `E{Tr χ_{[E−ε,E+ε]}} ∝ εᵃ`.
pub fn epsilon_sweep<E: SampleExecutor + ?Sized>(
    model: &AlloyModel,
    energy: f64,
    epsilons: &[f64],
    n_samples: usize,
    master_seed: u64,
    executor: &E,
) -> Result<EpsilonSweep> {
    if epsilons.len() < 4 {
        return Err(Error::InvalidParameter(format!("need at least 4 interval widths, got {}", epsilons.len())));
    }
    if epsilons.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidParameter(format!("interval widths must be positive: {epsilons:?}")));
    }
    let lo = epsilons.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = epsilons.iter().copied().fold(0.0, f64::max);
    if hi < 10.0 * lo {
        return Err(Error::InvalidParameter(format!("interval widths span less than a decade: {lo}..{hi}")));
    }
    if n_samples < 2 {
        return Err(Error::TooFewSamples { got: n_samples, min: 2 });
    }
    let spectra = sample_spectra(model, n_samples, master_seed, executor)?;
    let estimates: Vec<MeanEstimate> = epsilons.iter().map(|&e| count_estimate(&spectra, energy, e)).collect();
    if estimates.iter().any(|e| e.mean == 0.0) {
        return Err(Error::IntervalTooFine);
    }
    let x: Vec<f64> = epsilons.iter().map(|&e| math::ln(e)).collect();
    let y: Vec<f64> = estimates.iter().map(|e| math::ln(e.mean)).collect();
    let fit = linear_fit(&x, &y);
    let out_of_regime = fit.slope < SATURATION_SLOPE;
    let records = epsilons
        .iter()
        .zip(&estimates)
        .map(|(&epsilon, &est)| {
            ExperimentRecord::new("epsilon-sweep", "count", model, est, master_seed)
                .with_window(Some(epsilon), Some(energy))
                .with_passed(!out_of_regime)
        })
        .collect();
    Ok(EpsilonSweep {
        energy,
        epsilons: epsilons.to_vec(),
        estimates,
        fit,
        out_of_regime,
        records,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumePoint {
    pub side: u32,
    pub estimate: MeanEstimate,
    pub report: BoundReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeSweep {
    pub energy: f64,
    pub epsilon: f64,
    pub points: Vec<VolumePoint>,
    /// Fit of `log estimate` against `log(L+1)`; the slope is the empirical
    /// volume exponent.
    pub fit: LinearFit,
    /// Fit of `log bound` against `log(L+1)`.
    pub bound_fit: LinearFit,
    pub records: Vec<ExperimentRecord>,
}

/// Runs the model on each side length in `sides`, using the default
/// coefficient construction for the bound, and fails if an estimate exceeds
/// its bound by more than three standard errors.
pub fn volume_sweep<E: SampleExecutor + ?Sized>(
    model: &AlloyModel,
    energy: f64,
    epsilon: f64,
    sides: &[u32],
    n_samples: usize,
    master_seed: u64,
    executor: &E,
) -> Result<VolumeSweep> {
    if sides.len() < 4 {
        return Err(Error::InvalidParameter(format!("need at least 4 side lengths, got {}", sides.len())));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if n_samples < 2 {
        return Err(Error::TooFewSamples { got: n_samples, min: 2 });
    }
    let mut points = Vec::with_capacity(sides.len());
    let mut records = Vec::with_capacity(sides.len());
    for &side in sides {
        let m = model.with_side(side)?;
        let field = coefficients_for(m.potential(), side)?;
        let report = bound_report(&bound_input(&m, &field, epsilon, energy))?;
        let spectra = sample_spectra(&m, n_samples, master_seed, executor)?;
        let estimate = count_estimate(&spectra, energy, epsilon);
        let passed = estimate.within(report.bound, SIGMAS);
        records.push(
            ExperimentRecord::new("volume-sweep", "count", &m, estimate, master_seed)
                .with_window(Some(epsilon), Some(energy))
                .with_bound(report.bound, report.literal, Some(field.construction().tag()))
                .with_passed(passed),
        );
        if !passed {
            return Err(Error::WegnerBoundViolated {
                side,
                estimate: estimate.mean,
                std_error: estimate.std_error,
                bound: report.bound,
            });
        }
        points.push(VolumePoint { side, estimate, report });
    }
    let x: Vec<f64> = sides.iter().map(|&l| math::ln(l as f64 + 1.0)).collect();
    let positive = points.iter().all(|p| p.estimate.mean > 0.0);
    let y: Vec<f64> = points.iter().map(|p| math::ln(p.estimate.mean)).collect();
    let fit = if positive {
        linear_fit(&x, &y)
    } else {
        LinearFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            slope_std_error: f64::NAN,
        }
    };
    let yb: Vec<f64> = points.iter().map(|p| math::ln(p.report.bound)).collect();
    let bound_fit = linear_fit(&x, &yb);
    Ok(VolumeSweep {
        energy,
        epsilon,
        points,
        fit,
        bound_fit,
        records,
    })
}

/// Normalized cumulative counts `N_L(E) = E{#{n : E_n ≤ E}}/(L+1)^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdsCurve {
    pub energies: Vec<f64>,
    pub values: Vec<MeanEstimate>,
    /// `N_L(E_{i+1}) − N_L(E_i)` from paired samples.
    pub increments: Vec<MeanEstimate>,
    /// Bound on `|N_L(E₂) − N_L(E₁)|/|E₂ − E₁|` from the counting bound with
    /// `ε = 1/2`, divided by `(L+1)^d`.
    pub lipschitz_slope: f64,
    pub records: Vec<ExperimentRecord>,
}

impl IdsCurve {
    /// Grid indices `i` where `N_L(E_{i+1}) < N_L(E_i)` by more than
    /// `2σ` of the paired difference.
    pub fn monotonicity_violations(&self) -> Vec<usize> {
        (0..self.increments.len())
            .filter(|&i| self.increments[i].mean < -2.0 * self.increments[i].std_error)
            .collect()
    }

    /// Grid indices `i` where the increment exceeds
    /// `slope·(E_{i+1} − E_i) + 3σ`.
    pub fn lipschitz_violations(&self) -> Vec<usize> {
        (0..self.increments.len())
            .filter(|&i| {
                let de = self.energies[i + 1] - self.energies[i];
                !self.increments[i].within(self.lipschitz_slope * de, SIGMAS)
            })
            .collect()
    }
}

pub fn ids_estimate<E: SampleExecutor + ?Sized>(
    model: &AlloyModel,
    energies: &[f64],
    n_samples: usize,
    master_seed: u64,
    executor: &E,
) -> Result<IdsCurve> {
    if energies.is_empty() || energies.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(String::from("energy grid must be non-empty and strictly increasing")));
    }
    if n_samples < 2 {
        return Err(Error::TooFewSamples { got: n_samples, min: 2 });
    }
    let volume = model.lattice().len() as f64;
    let spectra = sample_spectra(model, n_samples, master_seed, executor)?;
    let normalized: Vec<Vec<f64>> = spectra
        .iter()
        .map(|s| energies.iter().map(|&e| count_not_above(s, e) as f64 / volume).collect())
        .collect();
    let column = |j: usize| -> Vec<f64> { normalized.iter().map(|row| row[j]).collect() };
    let values: Vec<MeanEstimate> = (0..energies.len()).map(|j| MeanEstimate::from_samples(&column(j))).collect();
    let increments = (1..energies.len())
        .map(|j| {
            let diffs: Vec<f64> = normalized.iter().map(|row| row[j] - row[j - 1]).collect();
            MeanEstimate::from_samples(&diffs)
        })
        .collect();
    let field = coefficients_for(model.potential(), model.lattice().side())?;
    let center = 0.5 * (energies[0] + energies[energies.len() - 1]);
    let report = bound_report(&bound_input(model, &field, 0.5, center))?;
    let lipschitz_slope = report.bound / volume;
    let records = energies
        .iter()
        .zip(&values)
        .map(|(&e, &v)| {
            ExperimentRecord::new("ids", "ids", model, v, master_seed)
                .with_window(None, Some(e))
                .with_bound(1.0, None, Some(field.construction().tag()))
        })
        .collect();
    Ok(IdsCurve {
        energies: energies.to_vec(),
        values,
        increments,
        lipschitz_slope,
        records,
    })
}
