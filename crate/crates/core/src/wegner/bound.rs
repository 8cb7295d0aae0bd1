use alloc::format;

use crate::lattice::{CouplingDensity, LatticeBox, SingleSitePotential};
use crate::math;
use crate::transform::{
    build_monomial_coefficients, laurent_root_order, mean_window_coefficients, truncation_window,
    CoefficientField, Construction, DEFAULT_MAX_ORDER, DEFAULT_ORDER_TOL, DEFAULT_WINDOW_CAP,
};
use crate::{Error, Result};

/// Everything the averaged counting bound depends on.
#[derive(Clone, Copy, Debug)]
pub struct WegnerBoundInput<'a> {
    pub field: &'a CoefficientField,
    pub density: &'a CouplingDensity,
    pub potential: &'a SingleSitePotential,
    pub lattice: &'a LatticeBox,
    pub epsilon: f64,
    pub energy: f64,
}

/// The computable bound together with the closed-form right-hand side for
/// the window constructions, where one exists.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub bound: f64,
    /// `Σ_k |a_L(k)| rank(χ_Λ u(·−k))`.
    pub rank_weighted_sum: f64,
    pub literal: Option<f64>,
}

/// `#{x ∈ Λ_L : u(x−k) ≠ 0}`.
pub fn local_rank(u: &SingleSitePotential, lattice: &LatticeBox, k: &[i64]) -> usize {
    match u {
        SingleSitePotential::Compact(c) => c
            .sites()
            .iter()
            .filter(|(s, _)| {
                let x: alloc::vec::Vec<i64> = s.iter().zip(k).map(|(a, b)| a + b).collect();
                lattice.index_of(&x).is_some()
            })
            .count(),
        SingleSitePotential::Decaying(d) => (0..=lattice.side() as i64).filter(|&x| d.value(x - k[0]) != 0.0).count(),
    }
}

/// `Σ_k |a_L(k)| rank(χ_Λ u(·−k))`.
pub fn rank_weighted_sum(field: &CoefficientField, u: &SingleSitePotential, lattice: &LatticeBox) -> f64 {
    field
        .nonzero()
        .map(|(k, a)| math::to_f64(a).abs() * local_rank(u, lattice, &k) as f64)
        .sum()
}

fn check(input: &WegnerBoundInput<'_>) -> Result<()> {
    if !(input.epsilon > 0.0 && input.epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", input.epsilon)));
    }
    if input.field.dim() != input.lattice.dim() || input.potential.dim() != input.lattice.dim() {
        return Err(Error::InvalidLattice(format!(
            "dimension mismatch: field {}, potential {}, box {}",
            input.field.dim(),
            input.potential.dim(),
            input.lattice.dim()
        )));
    }
    Ok(())
}

/// `(4ε/δ) Σ_k |a_L(k)| ‖f‖_BV rank(χ_Λ u(·−k))`.
pub fn abstract_bound(input: &WegnerBoundInput<'_>) -> Result<f64> {
    Ok(bound_report(input)?.bound)
}

pub fn bound_report(input: &WegnerBoundInput<'_>) -> Result<BoundReport> {
    check(input)?;
    let sum = rank_weighted_sum(input.field, input.potential, input.lattice);
    let bv = input.density.bv_norm();
    let bound = 4.0 * input.epsilon / input.field.delta_f64() * sum * bv;
    Ok(BoundReport {
        bound,
        rank_weighted_sum: sum,
        literal: literal_bound(input),
    })
}

/// Closed forms for the window constructions:
/// `(4/|ū|) rank u ‖f‖_BV ε (L+n)^d` for compact `u`, and
/// `(8/|ū|) min(L^d, rank u) ‖f‖_BV ε (L+m)^d` for the decaying window.
/// `None` for the monomial and truncated constructions, whose constants are
/// not explicit.
pub fn literal_bound(input: &WegnerBoundInput<'_>) -> Option<f64> {
    let side = input.lattice.side() as f64;
    let d = input.lattice.dim() as i32;
    let bv = input.density.bv_norm();
    let mean = math::abs(input.potential.mean_f64());
    match input.field.construction() {
        Construction::CorollaryWindow => {
            let c = input.potential.as_compact()?;
            Some(4.0 / mean * c.rank() as f64 * bv * input.epsilon * math::powi(side + c.n() as f64, d))
        }
        Construction::MeanWindow => {
            let m = input.field.window_radius()? as f64;
            let volume = math::powi(side, d);
            let rank = input.potential.rank().map_or(volume, |r| (r as f64).min(volume));
            Some(8.0 / mean * rank * bv * input.epsilon * math::powi(side + m, d))
        }
        Construction::Monomial | Construction::ExpTruncated => None,
    }
}

/// Default construction for a potential: the window when `ū ≠ 0`, the
/// monomial field for compact `u` with `ū = 0`, and the truncated Laurent
/// window for decaying `u` with `ū = 0`.
pub fn coefficients_for(u: &SingleSitePotential, side: u32) -> Result<CoefficientField> {
    match mean_window_coefficients(u, side) {
        Err(Error::DegenerateMean) => match u {
            SingleSitePotential::Compact(c) => build_monomial_coefficients(c, side),
            SingleSitePotential::Decaying(d) => {
                let root = laurent_root_order(d, DEFAULT_ORDER_TOL, DEFAULT_MAX_ORDER)?;
                truncation_window(d, side, root, DEFAULT_WINDOW_CAP)
            }
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{CompactPotential, DecayingPotential};

    fn delta() -> SingleSitePotential {
        CompactPotential::delta(1).into()
    }

    #[test]
    fn delta_corollary_window() {
        let u = delta();
        let lattice = LatticeBox::new(1, 10).unwrap();
        let field = mean_window_coefficients(&u, 10).unwrap();
        let density = CouplingDensity::uniform(0.0, 1.0).unwrap();
        let input = WegnerBoundInput {
            field: &field,
            density: &density,
            potential: &u,
            lattice: &lattice,
            epsilon: 0.01,
            energy: 0.5,
        };
        let report = bound_report(&input).unwrap();
        assert!((report.bound - 0.88).abs() < 1e-12);
        assert!((report.literal.unwrap() - 0.8).abs() < 1e-12);
        let wider = WegnerBoundInput { epsilon: 0.02, ..input };
        assert!((abstract_bound(&wider).unwrap() - 1.76).abs() < 1e-12);
    }

    #[test]
    fn bound_is_inverse_in_delta() {
        let u: SingleSitePotential = CompactPotential::from_profile(&[2]).unwrap().into();
        let lattice = LatticeBox::new(1, 10).unwrap();
        let field = mean_window_coefficients(&u, 10).unwrap();
        assert_eq!(field.delta_f64(), 2.0);
        let density = CouplingDensity::uniform(0.0, 1.0).unwrap();
        let input = WegnerBoundInput {
            field: &field,
            density: &density,
            potential: &u,
            lattice: &lattice,
            epsilon: 0.01,
            energy: 0.0,
        };
        assert!((abstract_bound(&input).unwrap() - 0.44).abs() < 1e-12);
    }

    #[test]
    fn ranks_are_clipped_by_the_box() {
        let u: SingleSitePotential = CompactPotential::from_profile(&[1, -1]).unwrap().into();
        let lattice = LatticeBox::new(1, 3).unwrap();
        assert_eq!(local_rank(&u, &lattice, &[0]), 1);
        assert_eq!(local_rank(&u, &lattice, &[2]), 2);
        assert_eq!(local_rank(&u, &lattice, &[4]), 1);
        assert_eq!(local_rank(&u, &lattice, &[6]), 0);
        let g: SingleSitePotential = DecayingPotential::geometric(1.0, 0.5).unwrap().into();
        assert_eq!(local_rank(&g, &lattice, &[-7]), 4);
    }

    #[test]
    fn construction_dispatch() {
        let dipole: SingleSitePotential = CompactPotential::from_profile(&[1, -1]).unwrap().into();
        assert_eq!(coefficients_for(&dipole, 4).unwrap().construction(), Construction::Monomial);
        assert_eq!(coefficients_for(&delta(), 4).unwrap().construction(), Construction::CorollaryWindow);
        let g: SingleSitePotential = DecayingPotential::geometric(1.0, 0.5).unwrap().into();
        assert_eq!(coefficients_for(&g, 4).unwrap().construction(), Construction::MeanWindow);
        let odd: SingleSitePotential = DecayingPotential::new(Default::default(), 0, 1.0, -1.0, 0.5).unwrap().into();
        assert_eq!(coefficients_for(&odd, 4).unwrap().construction(), Construction::ExpTruncated);
    }
}
