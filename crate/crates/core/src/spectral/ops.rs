use alloc::vec::Vec;

use super::eigen::{eig_symmetric, eigenvalues_symmetric};
use super::switch::SwitchFunction;
use crate::lattice::{build_hamiltonian, CouplingField, Hopping, LatticeBox, SingleSitePotential, SymMatrix};
use crate::math;
use crate::{Error, Result};

/// Eigenvalues closer than this to a neighbour count as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-8;

/// Number of eigenvalues in the closed interval `[lower, upper]`; the input
/// must be sorted ascending.
pub fn count_in_interval(eigenvalues: &[f64], lower: f64, upper: f64) -> usize {
    if upper < lower {
        return 0;
    }
    let start = eigenvalues.partition_point(|&e| e < lower);
    let end = eigenvalues.partition_point(|&e| e <= upper);
    end - start
}

/// Number of eigenvalues `≤ energy`.
pub fn count_not_above(eigenvalues: &[f64], energy: f64) -> usize {
    eigenvalues.partition_point(|&e| e <= energy)
}

/// `dist(σ(H), E) = min_n |E_n − E|`; zero means `E` is an eigenvalue.
pub fn resolvent_distance(eigenvalues: &[f64], energy: f64) -> f64 {
    eigenvalues
        .iter()
        .map(|e| math::abs(e - energy))
        .fold(f64::INFINITY, f64::min)
}

/// `∂E_n/∂ω_k = ⟨ψ_n, u(·−k) ψ_n⟩` (Hellmann–Feynman), for a simple
/// eigenvalue `E_n` (`n` counts from zero in ascending order).
pub fn eigenvalue_derivative(
    u: &SingleSitePotential,
    omega: &CouplingField,
    lattice: &LatticeBox,
    hopping: Hopping,
    k: &[i64],
    n: usize,
) -> Result<f64> {
    let h = build_hamiltonian(u, omega, lattice, hopping)?;
    let es = eig_symmetric(&h.matrix)?;
    let values = es.eigenvalues();
    if n >= values.len() {
        return Err(Error::EigenIndex {
            index: n,
            len: values.len(),
        });
    }
    let below = if n > 0 { values[n] - values[n - 1] } else { f64::INFINITY };
    let above = values.get(n + 1).map_or(f64::INFINITY, |v| v - values[n]);
    let gap = below.min(above);
    if gap <= DEGENERACY_GAP {
        return Err(Error::DegenerateEigenvalue { gap });
    }
    let mut acc = 0.0;
    let mut shifted = Vec::with_capacity(k.len());
    for (i, x) in lattice.points().enumerate() {
        shifted.clear();
        shifted.extend(x.iter().zip(k).map(|(a, b)| a - b));
        let weight = u.value_f64(&shifted);
        if weight != 0.0 {
            let psi = es.component(i, n);
            acc += weight * psi * psi;
        }
    }
    Ok(acc)
}

/// `H` and `H′ = H − ω_k u(·−k)χ_Λ` for a single coupling.
pub fn single_site_perturbation(
    u: &SingleSitePotential,
    omega: &CouplingField,
    lattice: &LatticeBox,
    hopping: Hopping,
    k: &[i64],
) -> Result<(SymMatrix, SymMatrix)> {
    let h = build_hamiltonian(u, omega, lattice, hopping)?;
    let mut removed = omega.clone();
    if !removed.set(k, 0.0) {
        return Err(Error::IncompleteCouplingField(crate::lattice::format_point(k)));
    }
    let h_prime = build_hamiltonian(u, &removed, lattice, hopping)?;
    Ok((h.matrix, h_prime.matrix))
}

/// Trace difference `|Σ_n ρ(E_n+s) − ρ(E′_n+s)|` against the bound
/// `rank(H − H′)·∫|ρ′|`. The perturbation must be diagonal.
///
/// Returns `(lhs, bound)`, or an error if `lhs > bound + 1e−9`.
pub fn spectral_shift_check(
    h: &SymMatrix,
    h_prime: &SymMatrix,
    rho: &SwitchFunction,
    shift: f64,
) -> Result<(f64, f64)> {
    if h.dim() != h_prime.dim() {
        return Err(Error::InvalidParameter(alloc::string::String::from(
            "operators act on different spaces",
        )));
    }
    let n = h.dim();
    let mut rank = 0usize;
    for i in 0..n {
        for j in 0..n {
            let diff = h.get(i, j) - h_prime.get(i, j);
            if i != j && diff != 0.0 {
                return Err(Error::InvalidParameter(alloc::string::String::from(
                    "perturbation is not diagonal",
                )));
            }
            if i == j && diff != 0.0 {
                rank += 1;
            }
        }
    }
    let e = eigenvalues_symmetric(h)?;
    let e_prime = eigenvalues_symmetric(h_prime)?;
    let trace: f64 = e
        .iter()
        .zip(&e_prime)
        .map(|(a, b)| rho.eval(a + shift) - rho.eval(b + shift))
        .sum();
    let lhs = math::abs(trace);
    let bound = rank as f64 * rho.total_variation();
    if lhs > bound + 1e-9 {
        return Err(Error::SpectralShiftViolated { lhs, bound });
    }
    Ok((lhs, bound))
}
