//! Dispatches a validated config to the experiment it names.

use std::path::{Path, PathBuf};

use serde::Serialize;
use wegner_core::math::{self, format_rational, parse_rational};
use wegner_core::transform::{
    build_monomial_coefficients, laurent_root_order, mean_window_coefficients, truncation_window,
    verify_positive_combination, CoefficientField, CombinationMinimum, DEFAULT_MAX_ORDER, DEFAULT_ORDER_TOL,
    DEFAULT_WINDOW_CAP,
};
use wegner_core::wegner::{
    bound_check, bound_check_records, coefficients_for, epsilon_sweep, ids_estimate, large_disorder_probability,
    pilot_median_energy, volume_sweep, AlloyModel, RECORD_SCHEMA, SIGMAS,
};
use wegner_core::{DecayingPotential, Error, ExperimentRecord, LatticeBox, SingleSitePotential};

use crate::coeffs::write_field;
use crate::config::{
    ConstructionSpec, EnergyPolicy, EnergySpec, ExperimentConfig, ExperimentKind, IdsOracle, OutputFormat,
    DEFAULT_PILOT_SAMPLES,
};
use crate::error::ConfigError;
use crate::executor::Parallel;
use crate::output::{config_hash, write_records, write_text};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Machine-readable outcome printed on stdout.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub status: &'static str,
    pub experiment: &'static str,
    pub config_hash: String,
    pub summary: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub files: Vec<PathBuf>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// Result of an experiment before anything is written.
#[derive(Clone, Debug)]
pub struct Execution {
    pub summary: String,
    pub checks: Vec<Check>,
    pub records: Vec<ExperimentRecord>,
    /// Serialized coefficient field, for transform-verify.
    pub coefficients: Option<String>,
}

impl Execution {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Errors that mean "the claim under test failed" rather than "the
/// experiment is mis-specified".
fn is_assertion(e: &Error) -> bool {
    matches!(
        e,
        Error::WegnerBoundViolated { .. }
            | Error::LargeDisorderViolated { .. }
            | Error::PositivityFailed { .. }
            | Error::IntervalTooFine
            | Error::SpectralShiftViolated { .. }
            | Error::NoConvergence
    )
}

fn failure_or_config<T>(result: Result<T, Error>, name: &str) -> Result<Result<T, Check>, ConfigError> {
    match result {
        Ok(v) => Ok(Ok(v)),
        Err(e) if is_assertion(&e) => Ok(Err(Check::new(name, false, e.to_string()))),
        Err(e) => Err(e.into()),
    }
}

fn model(config: &ExperimentConfig, side: u32) -> Result<AlloyModel, ConfigError> {
    Ok(AlloyModel::new(
        config.potential()?,
        config.density()?,
        LatticeBox::new(config.dim, side)?,
        config.hopping.into(),
    )?)
}

fn energy(config: &ExperimentConfig, model: &AlloyModel) -> Result<f64, ConfigError> {
    match config.energy {
        Some(EnergySpec::Fixed(e)) => Ok(e),
        None | Some(EnergySpec::Policy(EnergyPolicy::PilotMedian)) => Ok(pilot_median_energy(
            model,
            config.pilot_samples.unwrap_or(DEFAULT_PILOT_SAMPLES),
            config.seed,
            &Parallel,
        )?),
    }
}

/// The requested construction, or the default for the potential.
pub fn coefficient_field(
    construction: Option<ConstructionSpec>,
    u: &SingleSitePotential,
    side: u32,
) -> Result<CoefficientField, ConfigError> {
    let field = match construction {
        None => coefficients_for(u, side)?,
        Some(ConstructionSpec::Monomial) => {
            let c = u
                .as_compact()
                .ok_or_else(|| ConfigError::Invalid("monomial construction needs a compact potential".into()))?;
            build_monomial_coefficients(c, side)?
        }
        Some(ConstructionSpec::CorollaryWindow) if u.as_compact().is_none() => {
            return Err(ConfigError::Invalid("corollary-window needs a compact potential".into()))
        }
        Some(ConstructionSpec::MeanWindow) if u.as_decaying().is_none() => {
            return Err(ConfigError::Invalid("mean-window needs a decaying potential".into()))
        }
        Some(ConstructionSpec::CorollaryWindow | ConstructionSpec::MeanWindow) => mean_window_coefficients(u, side)?,
        Some(ConstructionSpec::ExpTruncated) => {
            let d = match u {
                SingleSitePotential::Decaying(d) => d.clone(),
                SingleSitePotential::Compact(c) => DecayingPotential::from_compact(c, 0.5)?,
            };
            let root = laurent_root_order(&d, DEFAULT_ORDER_TOL, DEFAULT_MAX_ORDER)?;
            truncation_window(&d, side, root, DEFAULT_WINDOW_CAP)?
        }
    };
    Ok(field)
}

fn slope_check(config: &ExperimentConfig, name: &str, slope: f64, default_tol: f64) -> Option<Check> {
    let expected = config.expected_slope?;
    let tol = config.slope_tolerance.unwrap_or(default_tol);
    Some(Check::new(
        name,
        (slope - expected).abs() <= tol,
        format!("fitted {slope:.4}, expected {expected} ± {tol}"),
    ))
}

fn run_bound_check(config: &ExperimentConfig) -> Result<Execution, ConfigError> {
    let side = config.side()?;
    let model = model(config, side)?;
    let field = coefficient_field(config.construction, model.potential(), side)?;
    let mut checks = Vec::new();
    match failure_or_config(verify_positive_combination(&field, model.potential(), model.lattice()), "positivity")? {
        Ok(min) => checks.push(Check::new(
            "positivity",
            true,
            format!("min combination = {}, δ = {}", min.display(), format_rational(field.delta())),
        )),
        Err(check) => {
            return Ok(Execution {
                summary: check.detail.clone(),
                checks: vec![check],
                records: Vec::new(),
                coefficients: None,
            })
        }
    }
    let e = energy(config, &model)?;
    let eps = config.epsilons()?;
    let results = bound_check(&model, &field, e, &eps, config.samples(), config.seed, &Parallel)?;
    let mut records = bound_check_records(&model, &field, &results, config.seed);
    let mut lines = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let detail = format!(
            "E={e:.6} ε={}: estimate {:.4} ± {:.4}, bound {:.6}",
            r.epsilon, r.estimate.mean, r.estimate.std_error, r.report.bound
        );
        checks.push(Check::new(format!("bound[ε={}]", r.epsilon), r.holds(), detail.clone()));
        lines.push(detail);
        if let Some(expected) = config.expected.as_ref().map(|v| v[i]) {
            let ok = (r.estimate.mean - expected).abs() <= SIGMAS * r.estimate.std_error;
            records[i].passed &= ok;
            checks.push(Check::new(
                format!("oracle[ε={}]", r.epsilon),
                ok,
                format!("estimate {:.4} vs exact {expected} (3σ = {:.4})", r.estimate.mean, SIGMAS * r.estimate.std_error),
            ));
        }
    }
    Ok(Execution {
        summary: lines.join("; "),
        checks,
        records,
        coefficients: None,
    })
}

fn run_epsilon_sweep(config: &ExperimentConfig) -> Result<Execution, ConfigError> {
    let model = model(config, config.side()?)?;
    let e = energy(config, &model)?;
    let eps = config.epsilons()?;
    let sweep = match failure_or_config(
        epsilon_sweep(&model, e, &eps, config.samples(), config.seed, &Parallel),
        "resolution",
    )? {
        Ok(s) => s,
        Err(check) => return Ok(failed(check)),
    };
    let mut checks = vec![Check::new(
        "in-regime",
        !sweep.out_of_regime,
        format!("slope {:.4} (saturated below {})", sweep.fit.slope, wegner_core::wegner::SATURATION_SLOPE),
    )];
    checks.extend(slope_check(config, "slope", sweep.fit.slope, 0.1));
    Ok(Execution {
        summary: format!("E={e:.6}: slope {:.4} ± {:.4}", sweep.fit.slope, sweep.fit.slope_std_error),
        checks,
        records: sweep.records,
        coefficients: None,
    })
}

fn run_volume_sweep(config: &ExperimentConfig) -> Result<Execution, ConfigError> {
    let sides = config.sides.clone().ok_or(ConfigError::Missing {
        kind: "volume-sweep",
        field: "sides",
    })?;
    let model = model(config, sides[0])?;
    let e = energy(config, &model)?;
    let epsilon = config.epsilon.ok_or(ConfigError::Missing {
        kind: "volume-sweep",
        field: "epsilon",
    })?;
    let sweep = match failure_or_config(
        volume_sweep(&model, e, epsilon, &sides, config.samples(), config.seed, &Parallel),
        "bound",
    )? {
        Ok(s) => s,
        Err(check) => return Ok(failed(check)),
    };
    let mut checks = vec![Check::new(
        "bound",
        true,
        format!("{} side lengths within 3σ of the bound", sweep.points.len()),
    )];
    checks.extend(slope_check(config, "volume-exponent", sweep.fit.slope, 0.15));
    Ok(Execution {
        summary: format!(
            "E={e:.6} ε={epsilon}: volume exponent {:.4} ± {:.4} (bound grows with exponent {:.4})",
            sweep.fit.slope, sweep.fit.slope_std_error, sweep.bound_fit.slope
        ),
        checks,
        records: sweep.records,
        coefficients: None,
    })
}

fn run_ids(config: &ExperimentConfig) -> Result<Execution, ConfigError> {
    let model = model(config, config.side()?)?;
    let grid = config.energies.clone().unwrap_or_default();
    let mut curve = ids_estimate(&model, &grid, config.samples(), config.seed, &Parallel)?;
    let mono = curve.monotonicity_violations();
    let lip = curve.lipschitz_violations();
    let mut checks = vec![
        Check::new("monotone", mono.is_empty(), format!("violations at grid indices {mono:?}")),
        Check::new(
            "lipschitz",
            lip.is_empty(),
            format!("slope bound {:.4}; violations at grid indices {lip:?}", curve.lipschitz_slope),
        ),
    ];
    if config.oracle == Some(IdsOracle::CouplingCdf) {
        let density = config.density()?;
        let mut worst = 0.0f64;
        let mut bad = Vec::new();
        for (i, (&e, v)) in curve.energies.iter().zip(&curve.values).enumerate() {
            let exact = density.cdf(e);
            let ok = (v.mean - exact).abs() <= SIGMAS * v.std_error + 1e-12;
            curve.records[i].passed = ok;
            worst = worst.max((v.mean - exact).abs());
            if !ok {
                bad.push(i);
            }
        }
        checks.push(Check::new(
            "oracle",
            bad.is_empty(),
            format!("max |N_L − F| = {worst:.4}; outside 3σ at {bad:?}"),
        ));
    }
    Ok(Execution {
        summary: format!("{} energies, Lipschitz slope bound {:.4}", grid.len(), curve.lipschitz_slope),
        checks,
        records: curve.records,
        coefficients: None,
    })
}

fn run_large_disorder(config: &ExperimentConfig) -> Result<Execution, ConfigError> {
    let model = model(config, config.side()?)?;
    let e = energy(config, &model)?;
    let p = config.p.ok_or(ConfigError::Missing {
        kind: "large-disorder",
        field: "p",
    })?;
    let out = match failure_or_config(
        large_disorder_probability(&model, e, p, config.samples(), config.seed, &Parallel),
        "probability",
    )? {
        Ok(o) => o,
        Err(check) => return Ok(failed(check)),
    };
    let detail = format!(
        "P = {:.6} ({} of {}), 95% upper {:.6} <= max(bound {:.3e}, L^-p) = {:.6}",
        out.probability, out.hits, out.n_samples, out.upper, out.bound, out.threshold
    );
    Ok(Execution {
        summary: detail.clone(),
        checks: vec![Check::new("probability", true, detail)],
        records: vec![out.record],
        coefficients: None,
    })
}

fn run_transform_verify(config: &ExperimentConfig) -> Result<Execution, ConfigError> {
    let side = config.side()?;
    let u = config.potential()?;
    let lattice = LatticeBox::new(config.dim, side)?;
    let field = coefficient_field(config.construction, &u, side)?;
    let text = write_field(&field);
    let min = match failure_or_config(verify_positive_combination(&field, &u, &lattice), "positivity")? {
        Ok(m) => m,
        Err(check) => {
            let mut exec = failed(check);
            exec.coefficients = Some(text);
            return Ok(exec);
        }
    };
    let delta = match min {
        CombinationMinimum::Exact(_) => format_rational(field.delta()),
        CombinationMinimum::Approximate(_) => format!("{}", field.delta_f64()),
    };
    let summary = format!("min combination = {}, δ = {delta}", min.display());
    let mut checks = vec![Check::new("positivity", true, summary.clone())];
    if let Some(expected) = &config.expected_minimum {
        let expected = parse_rational(expected)?;
        let ok = match &min {
            CombinationMinimum::Exact(m) => *m == expected,
            CombinationMinimum::Approximate(m) => {
                let x = math::to_f64(&expected);
                (m - x).abs() <= 1e-12 * x.abs().max(1.0)
            }
        };
        checks.push(Check::new(
            "expected-minimum",
            ok,
            format!("got {}, expected {}", min.display(), format_rational(&expected)),
        ));
    }
    let passed = checks.iter().all(|c| c.passed);
    let record = ExperimentRecord {
        schema: RECORD_SCHEMA.to_string(),
        experiment: "transform-verify".into(),
        statistic: "min-combination".into(),
        dim: config.dim,
        side,
        epsilon: None,
        energy: None,
        density: "none".into(),
        potential: u.label(),
        hopping: "none".into(),
        construction: Some(field.construction().tag().into()),
        mc_estimate: min.to_f64(),
        std_error: 0.0,
        n_samples: 0,
        theoretical_bound: field.delta_f64(),
        literal_bound: None,
        master_seed: config.seed,
        passed,
    };
    Ok(Execution {
        summary,
        checks,
        records: vec![record],
        coefficients: Some(text),
    })
}

fn failed(check: Check) -> Execution {
    Execution {
        summary: check.detail.clone(),
        checks: vec![check],
        records: Vec::new(),
        coefficients: None,
    }
}

/// Runs the experiment without touching the file system.
pub fn execute(config: &ExperimentConfig) -> Result<Execution, ConfigError> {
    config.validate()?;
    match config.kind {
        ExperimentKind::BoundCheck => run_bound_check(config),
        ExperimentKind::EpsilonSweep => run_epsilon_sweep(config),
        ExperimentKind::VolumeSweep => run_volume_sweep(config),
        ExperimentKind::Ids => run_ids(config),
        ExperimentKind::LargeDisorder => run_large_disorder(config),
        ExperimentKind::TransformVerify => run_transform_verify(config),
    }
}

/// Runs the experiment and writes its records (and coefficient file) to
/// `out_dir` when given.
pub fn run(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<Report, ConfigError> {
    let exec = execute(config)?;
    let hash = config_hash(config);
    let mut files = Vec::new();
    if let Some(dir) = out_dir {
        let stem = format!("{}-{hash}", config.kind.name());
        let format = config.format.unwrap_or(OutputFormat::Jsonl);
        if !exec.records.is_empty() {
            files.push(write_records(dir, &stem, &exec.records, format)?);
        }
        if let Some(text) = &exec.coefficients {
            files.push(write_text(dir, &stem, "coeffs", text)?);
        }
    }
    Ok(Report {
        status: if exec.passed() { "pass" } else { "fail" },
        experiment: config.kind.name(),
        config_hash: hash,
        summary: exec.summary,
        checks: exec.checks,
        files,
    })
}
