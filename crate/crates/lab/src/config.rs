//! TOML experiment configuration.

use serde::{Deserialize, Serialize};
use wegner_core::math::parse_rational;
use wegner_core::transform::Construction;
use wegner_core::{
    CompactPotential, CouplingDensity, DecayingPotential, Hopping, LatticeBox, Rational, SingleSitePotential,
};

use crate::error::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    BoundCheck,
    EpsilonSweep,
    VolumeSweep,
    Ids,
    LargeDisorder,
    TransformVerify,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::BoundCheck => "bound-check",
            ExperimentKind::EpsilonSweep => "epsilon-sweep",
            ExperimentKind::VolumeSweep => "volume-sweep",
            ExperimentKind::Ids => "ids",
            ExperimentKind::LargeDisorder => "large-disorder",
            ExperimentKind::TransformVerify => "transform-verify",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HoppingSpec {
    Off,
    #[default]
    Adjacency,
    Laplacian,
}

impl From<HoppingSpec> for Hopping {
    fn from(h: HoppingSpec) -> Self {
        match h {
            HoppingSpec::Off => Hopping::Off,
            HoppingSpec::Adjacency => Hopping::Adjacency,
            HoppingSpec::Laplacian => Hopping::Laplacian,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Jsonl,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Jsonl => "jsonl",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionSpec {
    Monomial,
    MeanWindow,
    CorollaryWindow,
    ExpTruncated,
}

impl From<ConstructionSpec> for Construction {
    fn from(c: ConstructionSpec) -> Self {
        match c {
            ConstructionSpec::Monomial => Construction::Monomial,
            ConstructionSpec::MeanWindow => Construction::MeanWindow,
            ConstructionSpec::CorollaryWindow => Construction::CorollaryWindow,
            ConstructionSpec::ExpTruncated => Construction::ExpTruncated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteValue {
    pub at: Vec<i64>,
    /// Exact value as `"p/q"` or `"p"`.
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoreValue {
    pub at: i64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// Explicit sites of a compact potential.
    Compact { sites: Vec<SiteValue> },
    /// One-dimensional `u(−i) = values[i]`.
    Profile { values: Vec<String> },
    /// Tensor product of one-dimensional profiles.
    Product { factors: Vec<Vec<String>> },
    /// Core values on `|k| ≤ radius` with geometric tails beyond.
    Decaying {
        core: Vec<CoreValue>,
        radius: u32,
        tail_pos: f64,
        tail_neg: f64,
        ratio: f64,
    },
    /// `u(k) = amplitude · ratio^{|k|}`.
    Geometric { amplitude: f64, ratio: f64 },
}

fn rational(text: &str) -> Result<Rational, ConfigError> {
    parse_rational(text).map_err(|e| ConfigError::Invalid(e.to_string()))
}

fn profile(values: &[String]) -> Result<CompactPotential, ConfigError> {
    let mut entries = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let r = rational(v)?;
        if r != Rational::from_integer(0.into()) {
            entries.push((vec![-(i as i64)], r));
        }
    }
    Ok(CompactPotential::new(1, entries)?)
}

impl PotentialSpec {
    pub fn build(&self, dim: usize) -> Result<SingleSitePotential, ConfigError> {
        let u: SingleSitePotential = match self {
            PotentialSpec::Compact { sites } => {
                let entries = sites
                    .iter()
                    .map(|s| Ok((s.at.clone(), rational(&s.value)?)))
                    .collect::<Result<Vec<_>, ConfigError>>()?;
                CompactPotential::new(dim, entries)?.into()
            }
            PotentialSpec::Profile { values } => profile(values)?.into(),
            PotentialSpec::Product { factors } => {
                let factors = factors.iter().map(|f| profile(f)).collect::<Result<Vec<_>, _>>()?;
                CompactPotential::product(&factors)?.into()
            }
            PotentialSpec::Decaying {
                core,
                radius,
                tail_pos,
                tail_neg,
                ratio,
            } => {
                let core = core.iter().map(|c| (c.at, c.value)).collect();
                DecayingPotential::new(core, *radius, *tail_pos, *tail_neg, *ratio)?.into()
            }
            PotentialSpec::Geometric { amplitude, ratio } => DecayingPotential::geometric(*amplitude, *ratio)?.into(),
        };
        if u.dim() != dim {
            return Err(ConfigError::Invalid(format!(
                "potential is {}-dimensional but dim = {dim}",
                u.dim()
            )));
        }
        Ok(u)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensitySpec {
    Uniform { lower: f64, upper: f64 },
    Triangular { lower: f64, upper: f64 },
    PiecewiseLinear { breakpoints: Vec<[f64; 2]> },
}

impl DensitySpec {
    pub fn build(&self) -> Result<CouplingDensity, ConfigError> {
        Ok(match self {
            DensitySpec::Uniform { lower, upper } => CouplingDensity::uniform(*lower, *upper)?,
            DensitySpec::Triangular { lower, upper } => CouplingDensity::triangular(*lower, *upper)?,
            DensitySpec::PiecewiseLinear { breakpoints } => {
                CouplingDensity::piecewise_linear(breakpoints.iter().map(|&[x, y]| (x, y)).collect())?
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyPolicy {
    /// Median of the pooled eigenvalues of a pilot run.
    PilotMedian,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnergySpec {
    Fixed(f64),
    Policy(EnergyPolicy),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdsOracle {
    /// `N_L(E) = F(E)`, the coupling CDF; exact for `u = δ₀` without hopping.
    CouplingCdf,
}

pub const DEFAULT_SAMPLES: usize = 2000;
pub const DEFAULT_PROBABILITY_SAMPLES: usize = 10_000;
pub const DEFAULT_PILOT_SAMPLES: usize = 64;

/// One experiment. Which optional fields are required depends on `kind`;
/// see [`ExperimentConfig::validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<Vec<u32>>,
    #[serde(default)]
    pub hopping: HoppingSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pilot_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    /// Exponent in the `L^{−p}` large-disorder threshold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionSpec>,
    /// Known expectations, one per entry of `epsilons` (bound-check).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_tolerance: Option<f64>,
    /// Exact minimum of the positive combination (transform-verify).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_minimum: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<IdsOracle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub potential: PotentialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensitySpec>,
}

fn is_unit_delta(u: &SingleSitePotential) -> bool {
    u.as_compact()
        .is_some_and(|c| c.rank() == 1 && c.sites()[0].1 == Rational::from_integer(1.into()))
}

fn missing(kind: ExperimentKind, field: &'static str) -> ConfigError {
    ConfigError::Missing {
        kind: kind.name(),
        field,
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(match self.kind {
            ExperimentKind::LargeDisorder => DEFAULT_PROBABILITY_SAMPLES,
            _ => DEFAULT_SAMPLES,
        })
    }

    pub fn side(&self) -> Result<u32, ConfigError> {
        self.side.ok_or_else(|| missing(self.kind, "side"))
    }

    pub fn lattice(&self) -> Result<LatticeBox, ConfigError> {
        Ok(LatticeBox::new(self.dim, self.side()?)?)
    }

    pub fn density(&self) -> Result<CouplingDensity, ConfigError> {
        self.density.as_ref().ok_or_else(|| missing(self.kind, "density"))?.build()
    }

    pub fn potential(&self) -> Result<SingleSitePotential, ConfigError> {
        self.potential.build(self.dim)
    }

    pub fn epsilons(&self) -> Result<Vec<f64>, ConfigError> {
        match (&self.epsilons, self.epsilon) {
            (Some(list), None) => Ok(list.clone()),
            (None, Some(e)) => Ok(vec![e]),
            (Some(_), Some(_)) => Err(ConfigError::Invalid(String::from("give either epsilon or epsilons, not both"))),
            (None, None) => Err(missing(self.kind, "epsilons")),
        }
    }

    /// Checks that every field the experiment needs is present and
    /// well-formed, building the model pieces once.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let kind = self.kind;
        self.potential()?;
        if kind != ExperimentKind::TransformVerify {
            self.density()?;
        }
        match kind {
            ExperimentKind::VolumeSweep => {
                let sides = self.sides.as_ref().ok_or_else(|| missing(kind, "sides"))?;
                if sides.len() < 4 {
                    return Err(ConfigError::Invalid(format!("volume-sweep needs at least 4 sides, got {}", sides.len())));
                }
                for &s in sides {
                    LatticeBox::new(self.dim, s)?;
                }
                self.epsilon.ok_or_else(|| missing(kind, "epsilon"))?;
            }
            _ => {
                self.lattice()?;
            }
        }
        match kind {
            ExperimentKind::BoundCheck | ExperimentKind::EpsilonSweep => {
                let eps = self.epsilons()?;
                if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
                    return Err(ConfigError::Invalid(format!("epsilons must be positive: {eps:?}")));
                }
                if let Some(expected) = &self.expected {
                    if expected.len() != eps.len() {
                        return Err(ConfigError::Invalid(format!(
                            "{} expected values for {} epsilons",
                            expected.len(),
                            eps.len()
                        )));
                    }
                }
            }
            ExperimentKind::Ids => {
                let grid = self.energies.as_ref().ok_or_else(|| missing(kind, "energies"))?;
                if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(ConfigError::Invalid(String::from("energies must be strictly increasing")));
                }
                let exact = self.hopping == HoppingSpec::Off && is_unit_delta(&self.potential()?);
                if self.oracle == Some(IdsOracle::CouplingCdf) && !exact {
                    return Err(ConfigError::Invalid(String::from(
                        "the coupling-cdf oracle needs hopping = \"off\" and u = δ₀",
                    )));
                }
            }
            ExperimentKind::LargeDisorder => {
                self.p.ok_or_else(|| missing(kind, "p"))?;
                self.energy.ok_or_else(|| missing(kind, "energy"))?;
            }
            ExperimentKind::TransformVerify => {
                if let Some(m) = &self.expected_minimum {
                    rational(m)?;
                }
            }
            ExperimentKind::VolumeSweep => {}
        }
        if let Some(EnergySpec::Fixed(e)) = self.energy {
            if !e.is_finite() {
                return Err(ConfigError::Invalid(format!("energy {e} is not finite")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAGONAL: &str = r#"
kind = "bound-check"
dim = 1
side = 9
hopping = "off"
seed = 1
epsilons = [0.15]
energy = 0.35
expected = [3.0]

[potential]
kind = "profile"
values = ["1"]

[density]
kind = "uniform"
lower = 0.0
upper = 1.0
"#;

    #[test]
    fn parses_and_round_trips() {
        let config = ExperimentConfig::from_toml(DIAGONAL).unwrap();
        assert_eq!(config.kind, ExperimentKind::BoundCheck);
        assert_eq!(config.samples(), DEFAULT_SAMPLES);
        assert_eq!(ExperimentConfig::from_toml(&config.to_toml()).unwrap(), config);
    }

    #[test]
    fn energy_policy_parses() {
        let text = DIAGONAL.replace("energy = 0.35", "energy = \"pilot-median\"");
        let config = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(config.energy, Some(EnergySpec::Policy(EnergyPolicy::PilotMedian)));
    }

    #[test]
    fn missing_density_is_reported() {
        let text = DIAGONAL.split("[density]").next().unwrap();
        let err = ExperimentConfig::from_toml(text).unwrap_err();
        assert!(matches!(err, ConfigError::Missing { field: "density", .. }), "{err}");
    }

    #[test]
    fn rational_values() {
        let spec = PotentialSpec::Compact {
            sites: vec![
                SiteValue { at: vec![0, 0], value: "1/2".into() },
                SiteValue { at: vec![0, -1], value: "-1/2".into() },
            ],
        };
        let u = spec.build(2).unwrap();
        assert_eq!(u.as_compact().unwrap().rank(), 2);
        assert!(spec.build(1).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = DIAGONAL.replace("seed = 1", "seed = 1\nsead = 2");
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(ConfigError::Parse(_))));
    }
}
