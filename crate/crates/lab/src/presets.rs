//! Built-in experiment configurations.

use crate::config::{
    ConstructionSpec, DensitySpec, EnergyPolicy, EnergySpec, ExperimentConfig, ExperimentKind, HoppingSpec,
    IdsOracle, PotentialSpec,
};
use crate::error::ConfigError;

pub const PRESET_NAMES: &[&str] = &[
    "diag-oracle-1d",
    "degenerate-2d-product",
    "dipole-alloy-1d",
    "diag-epsilon-sweep",
    "diag-volume-sweep",
    "alloy-volume-sweep",
    "diag-ids-1d",
    "alloy-ids-1d",
    "large-disorder-L3",
    "dipole-transform-1d",
    "product-transform-2d",
    "geometric-window-1d",
];

fn values(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn delta() -> PotentialSpec {
    PotentialSpec::Profile { values: values(&["1"]) }
}

fn dipole() -> PotentialSpec {
    PotentialSpec::Profile { values: values(&["1", "-1"]) }
}

fn unit_uniform() -> Option<DensitySpec> {
    Some(DensitySpec::Uniform { lower: 0.0, upper: 1.0 })
}

fn base(kind: ExperimentKind, dim: usize, potential: PotentialSpec) -> ExperimentConfig {
    ExperimentConfig {
        kind,
        dim,
        side: None,
        sides: None,
        hopping: HoppingSpec::Adjacency,
        seed: 1,
        samples: None,
        pilot_samples: None,
        epsilon: None,
        epsilons: None,
        energy: None,
        energies: None,
        p: None,
        construction: None,
        expected: None,
        expected_slope: None,
        slope_tolerance: None,
        expected_minimum: None,
        oracle: None,
        format: None,
        out: None,
        potential,
        density: unit_uniform(),
    }
}

fn ids_grid() -> Vec<f64> {
    (0..21).map(|i| -0.2 + 1.4 * i as f64 / 20.0).collect()
}

pub fn preset(name: &str) -> Result<ExperimentConfig, ConfigError> {
    let config = match name {
        "diag-oracle-1d" => ExperimentConfig {
            side: Some(9),
            hopping: HoppingSpec::Off,
            epsilons: Some(vec![0.15]),
            energy: Some(EnergySpec::Fixed(0.35)),
            expected: Some(vec![3.0]),
            ..base(ExperimentKind::BoundCheck, 1, delta())
        },
        "degenerate-2d-product" => ExperimentConfig {
            side: Some(6),
            epsilons: Some(vec![0.01, 0.05, 0.2]),
            energy: Some(EnergySpec::Policy(EnergyPolicy::PilotMedian)),
            construction: Some(ConstructionSpec::Monomial),
            ..base(
                ExperimentKind::BoundCheck,
                2,
                PotentialSpec::Product {
                    factors: vec![values(&["1", "-1"]), values(&["1", "-1"])],
                },
            )
        },
        "dipole-alloy-1d" => ExperimentConfig {
            side: Some(10),
            epsilons: Some(vec![0.01, 0.05, 0.2]),
            energy: Some(EnergySpec::Policy(EnergyPolicy::PilotMedian)),
            ..base(ExperimentKind::BoundCheck, 1, dipole())
        },
        "diag-epsilon-sweep" => ExperimentConfig {
            side: Some(9),
            hopping: HoppingSpec::Off,
            samples: Some(5000),
            epsilons: Some(vec![0.01, 0.02, 0.05, 0.1, 0.2]),
            energy: Some(EnergySpec::Fixed(0.5)),
            expected_slope: Some(1.0),
            slope_tolerance: Some(0.1),
            ..base(ExperimentKind::EpsilonSweep, 1, delta())
        },
        "diag-volume-sweep" => ExperimentConfig {
            sides: Some(vec![3, 7, 15, 31]),
            hopping: HoppingSpec::Off,
            epsilon: Some(0.1),
            energy: Some(EnergySpec::Fixed(0.5)),
            expected_slope: Some(1.0),
            slope_tolerance: Some(0.15),
            ..base(ExperimentKind::VolumeSweep, 1, delta())
        },
        "alloy-volume-sweep" => ExperimentConfig {
            sides: Some(vec![4, 8, 16, 32]),
            epsilon: Some(0.05),
            energy: Some(EnergySpec::Policy(EnergyPolicy::PilotMedian)),
            ..base(ExperimentKind::VolumeSweep, 1, delta())
        },
        "diag-ids-1d" => ExperimentConfig {
            side: Some(9),
            hopping: HoppingSpec::Off,
            energies: Some(ids_grid()),
            oracle: Some(IdsOracle::CouplingCdf),
            ..base(ExperimentKind::Ids, 1, delta())
        },
        "alloy-ids-1d" => ExperimentConfig {
            side: Some(9),
            energies: Some(ids_grid()),
            ..base(ExperimentKind::Ids, 1, delta())
        },
        "large-disorder-L3" => {
            let width = 2.0 * 6f64.exp();
            ExperimentConfig {
                side: Some(3),
                p: Some(2.0),
                energy: Some(EnergySpec::Fixed(width / 2.0)),
                density: Some(DensitySpec::Uniform { lower: 0.0, upper: width }),
                ..base(ExperimentKind::LargeDisorder, 1, delta())
            }
        }
        "dipole-transform-1d" => ExperimentConfig {
            side: Some(20),
            expected_minimum: Some("1".into()),
            density: None,
            ..base(ExperimentKind::TransformVerify, 1, dipole())
        },
        "product-transform-2d" => ExperimentConfig {
            side: Some(6),
            expected_minimum: Some("2".into()),
            density: None,
            ..base(
                ExperimentKind::TransformVerify,
                2,
                PotentialSpec::Product {
                    factors: vec![values(&["1", "-1"]), values(&["1", "-2", "1"])],
                },
            )
        },
        "geometric-window-1d" => ExperimentConfig {
            side: Some(8),
            construction: Some(ConstructionSpec::ExpTruncated),
            density: None,
            ..base(
                ExperimentKind::TransformVerify,
                1,
                PotentialSpec::Geometric {
                    amplitude: 1.0,
                    ratio: 0.5,
                },
            )
        },
        _ => {
            return Err(ConfigError::UnknownPreset {
                name: name.to_string(),
                available: PRESET_NAMES.to_vec(),
            })
        }
    };
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates_and_round_trips() {
        for name in PRESET_NAMES {
            let config = preset(name).unwrap();
            config.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            let text = config.to_toml();
            assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), config, "{name}");
        }
    }

    #[test]
    fn unknown_preset_lists_names() {
        let err = preset("nope").unwrap_err().to_string();
        assert!(err.contains("diag-oracle-1d"));
    }
}
