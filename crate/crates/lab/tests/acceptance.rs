//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any of them fails.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use wegner_core::lattice::build_hamiltonian;
use wegner_core::math::rational_from_int;
use wegner_core::spectral::{eigenvalue_derivative, eigenvalues_symmetric, single_site_perturbation, spectral_shift_check};
use wegner_core::transform::{
    build_monomial_coefficients, laurent_root_order, monomial_combination, truncation_window, window_minimum,
    DEFAULT_MAX_ORDER, DEFAULT_ORDER_TOL, DEFAULT_WINDOW_CAP,
};
use wegner_core::wegner::{
    bound_check, coefficients_for, epsilon_sweep, ids_estimate, large_disorder_probability, linear_fit,
    mc_expected_count, pilot_median_energy, SIGMAS,
};
use wegner_core::{
    AlloyModel, CompactPotential, CouplingDensity, DecayingPotential, Error, Hopping, LatticeBox, SingleSitePotential,
    SwitchFunction,
};
use wegner_lab::Parallel;

type Outcome = Result<String, String>;

fn model(u: SingleSitePotential, density: CouplingDensity, dim: usize, side: u32, hopping: Hopping) -> AlloyModel {
    AlloyModel::new(u, density, LatticeBox::new(dim, side).unwrap(), hopping).unwrap()
}

fn diagonal_oracle() -> AlloyModel {
    model(
        CompactPotential::delta(1).into(),
        CouplingDensity::uniform(0.0, 1.0).unwrap(),
        1,
        9,
        Hopping::Off,
    )
}

/// Random potential on `[−3,0]^d` with integer values in `[−5,5]`, not all
/// zero. Every other draw balances each last-axis slice so that positive
/// root orders are well represented.
fn random_potential(rng: &mut ChaCha8Rng, dim: usize) -> CompactPotential {
    loop {
        let len = 4usize.pow(dim as u32);
        let mut values: Vec<i64> = (0..len).map(|_| (rng.next_u32() % 11) as i64 - 5).collect();
        if rng.next_u32() % 2 == 0 {
            for slice in values.chunks_mut(4) {
                let head: i64 = slice[..3].iter().sum();
                slice[3] = (-head).clamp(-5, 5);
            }
        }
        let entries: Vec<_> = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| {
                let mut point = vec![0i64; dim];
                let mut rest = i;
                for axis in (0..dim).rev() {
                    point[axis] = -((rest % 4) as i64);
                    rest /= 4;
                }
                (point, rational_from_int(v))
            })
            .collect();
        if !entries.is_empty() {
            return CompactPotential::new(dim, entries).unwrap();
        }
    }
}

fn corpus() -> Vec<(CompactPotential, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for _ in 0..600 {
        out.push((random_potential(&mut rng, 1), 12));
    }
    for _ in 0..600 {
        out.push((random_potential(&mut rng, 2), 6));
    }
    out
}

fn constant_identity(corpus: &[(CompactPotential, u32)]) -> Outcome {
    let mut positive_order = 0;
    for (u, side) in corpus {
        let field = build_monomial_coefficients(u, *side).map_err(|e| format!("{}: {e}", u.label()))?;
        let lattice = LatticeBox::new(u.dim(), *side).unwrap();
        let sums = field.exact_combination(u, &lattice).map_err(|e| e.to_string())?;
        if let Some(bad) = sums.iter().find(|s| *s != field.delta()) {
            return Err(format!("{}: combination {bad} ≠ δ = {}", u.label(), field.delta()));
        }
        if field.exponents().iter().any(|&m| m > 0) {
            positive_order += 1;
        }
    }
    Ok(format!("{} potentials, {positive_order} with positive root order", corpus.len()))
}

fn vanishing_identity(corpus: &[(CompactPotential, u32)]) -> Outcome {
    let mut checked = 0usize;
    for (u, side) in corpus {
        let m = build_monomial_coefficients(u, *side).map_err(|e| e.to_string())?.exponents().to_vec();
        let mut lower: Vec<Vec<u32>> = Vec::new();
        match m.as_slice() {
            [m0] => lower.extend((0..*m0).map(|e| vec![e])),
            [m0, m1] => {
                for e in 0..*m1 {
                    lower.extend((0..=3).map(|f| vec![f, e]));
                }
                lower.extend((0..*m0).map(|f| vec![f, *m1]));
            }
            _ => unreachable!(),
        }
        for exponents in lower {
            let sums = monomial_combination(u, *side, &exponents).map_err(|e| e.to_string())?;
            if !sums.iter().all(Zero::is_zero) {
                return Err(format!("{}: exponents {exponents:?} give a nonzero combination", u.label()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} lower-order combinations vanish"))
}

fn diagonal_count() -> Outcome {
    let est = mc_expected_count(&diagonal_oracle(), 0.2, 0.5, 2000, 1, &Parallel).map_err(|e| e.to_string())?;
    let msg = format!("estimate {:.4} ± {:.4} vs 3.0", est.mean, est.std_error);
    if (est.mean - 3.0).abs() <= SIGMAS * est.std_error {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn master_inequality() -> Outcome {
    let v = CompactPotential::from_profile(&[1, -1]).unwrap();
    let potentials: Vec<(usize, SingleSitePotential)> = vec![
        (1, CompactPotential::delta(1).into()),
        (1, v.clone().into()),
        (2, CompactPotential::delta(2).into()),
        (2, CompactPotential::product(&[v.clone(), v]).unwrap().into()),
    ];
    let epsilons = [0.01, 0.05, 0.2];
    let mut cells = 0;
    let mut worst = f64::NEG_INFINITY;
    for (dim, u) in &potentials {
        for side in [6u32, 10, 14] {
            let m = model(u.clone(), CouplingDensity::uniform(0.0, 1.0).unwrap(), *dim, side, Hopping::Adjacency);
            let seed = 100 + side as u64;
            let energy = pilot_median_energy(&m, 64, seed, &Parallel).map_err(|e| e.to_string())?;
            let field = coefficients_for(m.potential(), side).map_err(|e| e.to_string())?;
            let checks = bound_check(&m, &field, energy, &epsilons, 2000, seed, &Parallel).map_err(|e| e.to_string())?;
            for c in checks {
                cells += 1;
                let margin = c.estimate.mean - c.report.bound - SIGMAS * c.estimate.std_error;
                worst = worst.max(c.estimate.mean / c.report.bound);
                if margin > 0.0 {
                    return Err(format!(
                        "{} L={side} ε={}: estimate {} > bound {}",
                        m.label(),
                        c.epsilon,
                        c.estimate.mean,
                        c.report.bound
                    ));
                }
            }
        }
    }
    Ok(format!("{cells} cells, largest estimate/bound ratio {worst:.3e}"))
}

fn epsilon_linearity() -> Outcome {
    let sweep = epsilon_sweep(&diagonal_oracle(), 0.35, &[0.01, 0.02, 0.05, 0.1, 0.2], 5000, 2, &Parallel)
        .map_err(|e| e.to_string())?;
    let msg = format!("slope {:.4} ± {:.4}", sweep.fit.slope, sweep.fit.slope_std_error);
    if (sweep.fit.slope - 1.0).abs() <= 0.1 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn hellmann_feynman() -> Outcome {
    let m = model(
        CompactPotential::from_profile(&[1, -1]).unwrap().into(),
        CouplingDensity::uniform(0.0, 1.0).unwrap(),
        1,
        8,
        Hopping::Adjacency,
    );
    let h = 1e-5;
    let mut checked = 0;
    let mut skipped = 0;
    let mut worst: f64 = 0.0;
    let mut seed = 0u64;
    while checked < 100 {
        let omega = m.couplings(seed, 0);
        let k = [(seed % 10) as i64];
        let n = (seed as usize * 7) % 9;
        seed += 1;
        let analytic = match eigenvalue_derivative(m.potential(), &omega, m.lattice(), m.hopping(), &k, n) {
            Ok(d) if d.abs() >= 1e-3 => d,
            Ok(_) | Err(Error::DegenerateEigenvalue { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        let at = |shift: f64| {
            let mut shifted = omega.clone();
            shifted.set(&k, omega.get(&k).unwrap() + shift);
            let hm = build_hamiltonian(m.potential(), &shifted, m.lattice(), m.hopping()).unwrap();
            eigenvalues_symmetric(&hm.matrix).unwrap()[n]
        };
        let fd = (at(h) - at(-h)) / (2.0 * h);
        let rel = ((analytic - fd) / analytic).abs();
        worst = worst.max(rel);
        if rel >= 1e-6 {
            return Err(format!("seed {}: analytic {analytic} vs difference {fd}", seed - 1));
        }
        checked += 1;
    }
    Ok(format!("{checked} instances ({skipped} skipped), worst relative error {worst:.2e}"))
}

fn spectral_shift() -> Outcome {
    let u: SingleSitePotential = CompactPotential::from_profile(&[2, -1]).unwrap().into();
    let m = model(u.clone(), CouplingDensity::uniform(-1.0, 2.0).unwrap(), 1, 8, Hopping::Adjacency);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let unit = |rng: &mut ChaCha8Rng| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let omega = m.couplings(i, 0);
        let site = [1 + (rng.next_u32() % 8) as i64];
        let rho = SwitchFunction::new(0.05 + 0.95 * unit(&mut rng), 0.0);
        let shift = -3.0 + 6.0 * unit(&mut rng);
        let (h, h_prime) = single_site_perturbation(&u, &omega, m.lattice(), Hopping::Adjacency, &site)
            .map_err(|e| e.to_string())?;
        let (lhs, bound) = spectral_shift_check(&h, &h_prime, &rho, shift).map_err(|e| format!("instance {i}: {e}"))?;
        if bound != 2.0 * rho.total_variation() || lhs > bound + 1e-9 {
            return Err(format!("instance {i}: {lhs} vs {bound}"));
        }
        worst = worst.max(lhs / bound);
    }
    Ok(format!("100 instances, largest trace difference / bound {worst:.3}"))
}

fn truncation_windows() -> Outcome {
    let dipole = DecayingPotential::from_compact(&CompactPotential::from_profile(&[1, -1]).unwrap(), 0.5).unwrap();
    let cases = [("geometric 1/2", DecayingPotential::geometric(1.0, 0.5).unwrap()), ("dipole", dipole)];
    let sides = [4u32, 8, 16];
    let mut summary = Vec::new();
    for (name, u) in &cases {
        let root = laurent_root_order(u, DEFAULT_ORDER_TOL, DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
        let mut sizes = Vec::new();
        for &side in &sides {
            let field = truncation_window(u, side, root, DEFAULT_WINDOW_CAP).map_err(|e| e.to_string())?;
            let min = window_minimum(&field, u, &LatticeBox::new(1, side).unwrap());
            if min < root.value.abs() / 2.0 {
                return Err(format!("{name} L={side}: minimum {min} < |c_F|/2 = {}", root.value.abs() / 2.0));
            }
            sizes.push(field.domain().len() as f64);
        }
        let x: Vec<f64> = sides.iter().map(|&l| l as f64).collect();
        let fit = linear_fit(&x, &sizes);
        let ratios: Vec<f64> = sizes.iter().zip(&x).map(|(w, l)| w / (l + 1.0)).collect();
        if ratios.windows(2).any(|r| r[1] > r[0]) {
            return Err(format!("{name}: window/(L+1) ratios {ratios:?} increase"));
        }
        if fit.slope > 1.5 {
            return Err(format!("{name}: window sizes {sizes:?} grow with slope {}", fit.slope));
        }
        summary.push(format!("{name} sizes {sizes:?}"));
    }
    Ok(summary.join(", "))
}

fn large_disorder() -> Outcome {
    let m = model(
        CompactPotential::delta(1).into(),
        CouplingDensity::uniform(0.0, 2e6).unwrap(),
        1,
        3,
        Hopping::Adjacency,
    );
    let r = large_disorder_probability(&m, 1e6, 2.0, 10_000, 9, &Parallel).map_err(|e| e.to_string())?;
    let msg = format!("P = {} (upper {:.3e}) vs threshold {:.4}", r.probability, r.upper, r.threshold);
    if r.upper <= r.threshold {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ids() -> Outcome {
    let grid: Vec<f64> = (0..21).map(|i| -0.2 + 1.4 * i as f64 / 20.0).collect();
    let curve = ids_estimate(&diagonal_oracle(), &grid, 2000, 3, &Parallel).map_err(|e| e.to_string())?;
    for (e, v) in grid.iter().zip(&curve.values) {
        let expected = e.clamp(0.0, 1.0);
        if (v.mean - expected).abs() > SIGMAS * v.std_error {
            return Err(format!("N({e}) = {} ± {} vs {expected}", v.mean, v.std_error));
        }
    }
    let hopping = model(
        CompactPotential::delta(1).into(),
        CouplingDensity::uniform(0.0, 1.0).unwrap(),
        1,
        9,
        Hopping::Adjacency,
    );
    let curve = ids_estimate(&hopping, &grid, 2000, 4, &Parallel).map_err(|e| e.to_string())?;
    let lipschitz = curve.lipschitz_violations();
    let monotone = curve.monotonicity_violations();
    if !lipschitz.is_empty() || !monotone.is_empty() {
        return Err(format!("Lipschitz violations at {lipschitz:?}, monotonicity at {monotone:?}"));
    }
    Ok(format!("oracle matches on 21 points, hopping slope bound {:.3}", curve.lipschitz_slope))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("exact constant combination", Box::new(|| constant_identity(&corpus))),
        ("vanishing lower orders", Box::new(|| vanishing_identity(&corpus))),
        ("diagonal oracle count", Box::new(diagonal_count)),
        ("counting bound grid", Box::new(master_inequality)),
        ("linear in interval width", Box::new(epsilon_linearity)),
        ("Hellmann-Feynman derivatives", Box::new(hellmann_feynman)),
        ("spectral shift rank bound", Box::new(spectral_shift)),
        ("truncation windows", Box::new(truncation_windows)),
        ("large disorder probability", Box::new(large_disorder)),
        ("integrated density of states", Box::new(ids)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
