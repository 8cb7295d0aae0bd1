use proptest::prelude::*;
use wegner_core::transform::mean_window_coefficients;
use wegner_core::wegner::{
    abstract_bound, bound_check, bound_check_records, coefficients_for, epsilon_sweep, mc_expected_count,
    pilot_median_energy, volume_sweep, AlloyModel,
    SampleExecutor, Sequential, WegnerBoundInput,
};
use wegner_core::{CompactPotential, CouplingDensity, Hopping, LatticeBox, SingleSitePotential};

/// Evaluates samples last to first.
struct Reversed;

impl SampleExecutor for Reversed {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        let mut out: Vec<(usize, T)> = (0..n).rev().map(|i| (i, f(i))).collect();
        out.reverse();
        out.into_iter().map(|(_, t)| t).collect()
    }
}

fn alloy(side: u32) -> AlloyModel {
    AlloyModel::new(
        CompactPotential::delta(2).into(),
        CouplingDensity::uniform(0.0, 1.0).unwrap(),
        LatticeBox::new(2, side).unwrap(),
        Hopping::Adjacency,
    )
    .unwrap()
}

#[test]
fn output_does_not_depend_on_evaluation_order() {
    let model = alloy(4);
    let a = mc_expected_count(&model, -0.5, 0.5, 64, 9, &Sequential).unwrap();
    let b = mc_expected_count(&model, -0.5, 0.5, 64, 9, &Reversed).unwrap();
    assert_eq!(a, b);
    let field = coefficients_for(model.potential(), 4).unwrap();
    let ra = bound_check_records(&model, &field, &bound_check(&model, &field, 0.3, &[0.1], 32, 1, &Sequential).unwrap(), 1);
    let rb = bound_check_records(&model, &field, &bound_check(&model, &field, 0.3, &[0.1], 32, 1, &Reversed).unwrap(), 1);
    assert_eq!(ra, rb);
}

#[test]
fn diagonal_model_matches_closed_form_in_2d() {
    let model = AlloyModel::new(
        CompactPotential::delta(2).into(),
        CouplingDensity::uniform(-1.0, 1.0).unwrap(),
        LatticeBox::new(2, 3).unwrap(),
        Hopping::Off,
    )
    .unwrap();
    // 16 sites, |[0, 0.5]| / 2 = 1/4
    let est = mc_expected_count(&model, 0.0, 0.5, 2000, 5, &Sequential).unwrap();
    assert!((est.mean - 4.0).abs() <= 3.0 * est.std_error, "{est:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bound_is_monotone(
        eps in 0.001f64..1.0,
        factor in 1.0f64..4.0,
        width in 0.1f64..5.0,
        side in 1u32..8,
    ) {
        let u: SingleSitePotential = CompactPotential::from_profile(&[3, -1]).unwrap().into();
        let lattice = LatticeBox::new(1, side).unwrap();
        let field = mean_window_coefficients(&u, side).unwrap();
        let wider_field = mean_window_coefficients(&u, side + 1).unwrap();
        let density = CouplingDensity::uniform(0.0, width).unwrap();
        let rougher = CouplingDensity::uniform(0.0, width / factor).unwrap();
        let input = WegnerBoundInput {
            field: &field,
            density: &density,
            potential: &u,
            lattice: &lattice,
            epsilon: eps,
            energy: 0.0,
        };
        let base = abstract_bound(&input).unwrap();
        let wider = abstract_bound(&WegnerBoundInput { epsilon: eps * factor, ..input }).unwrap();
        let rough = abstract_bound(&WegnerBoundInput { density: &rougher, ..input }).unwrap();
        let larger_sum = abstract_bound(&WegnerBoundInput { field: &wider_field, ..input }).unwrap();
        prop_assert!(wider >= base);
        prop_assert!(rough >= base * (1.0 - 1e-12));
        prop_assert!(larger_sum >= base);
    }
}

#[test]
fn alloy_counts_scale_linearly_in_the_bulk() {
    let model = AlloyModel::new(
        CompactPotential::delta(1).into(),
        CouplingDensity::uniform(0.0, 1.0).unwrap(),
        LatticeBox::new(1, 12).unwrap(),
        Hopping::Adjacency,
    )
    .unwrap();
    let energy = pilot_median_energy(&model, 64, 11, &Sequential).unwrap();
    let sweep = epsilon_sweep(&model, energy, &[0.01, 0.02, 0.05, 0.1, 0.2], 3000, 11, &Sequential).unwrap();
    assert!((0.8..=1.2).contains(&sweep.fit.slope), "{:?}", sweep.fit);
    assert!(!sweep.out_of_regime);
}

#[test]
fn alloy_volume_sweep_stays_below_the_bound() {
    let model = alloy(2);
    let sweep = volume_sweep(&model, 0.0, 0.05, &[2, 3, 4, 6], 500, 12, &Sequential).unwrap();
    for p in &sweep.points {
        assert!(p.estimate.within(p.report.bound, 3.0), "L={}: {:?} vs {}", p.side, p.estimate, p.report.bound);
    }
    assert!(sweep.bound_fit.slope > 0.0);
}
