//! Discrete alloy-type random Schrödinger operators on finite boxes of `ℤᵈ`.
//!
//! The crate is split along the lines of the model:
//!
//! * [`lattice`] builds boxes, single site potentials, coupling densities and
//!   the finite-box Hamiltonian `H_{ω,L} = H₀ + V_ω` restricted to `Λ_L`.
//! * [`transform`] constructs coefficient fields `a_L(k)` for which
//!   `Σ_k a_L(k) u(x−k) ≥ δ > 0` on the box, including the exact monomial
//!   construction for sign-indefinite potentials with vanishing mean.
//! * [`spectral`] holds the dense symmetric eigensolver and the spectral
//!   quantities (counts, resolvent distance, Hellmann–Feynman derivatives,
//!   trace differences).
//! * [`wegner`] evaluates the averaged eigenvalue-counting bound and runs
//!   the Monte Carlo experiments that check it.
//!
//! The crate is `no_std` and only needs `alloc`. Parallel sample execution,
//! configuration files and record output live in the `wegner-lab` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod lattice;
pub mod math;
pub mod spectral;
pub mod transform;
pub mod wegner;

pub use error::{Error, Result};
pub use lattice::{
    CompactPotential, CouplingDensity, CouplingField, DecayingPotential, Hopping, LatticeBox,
    Rect, SingleSitePotential, SymMatrix,
};
pub use math::Rational;
pub use spectral::{EigenSystem, SwitchFunction};
pub use transform::{CoefficientField, Construction, IntPolynomial, ReducedPotential, RootOrder};
pub use wegner::{AlloyModel, ExperimentRecord, MeanEstimate, SampleExecutor, Sequential};
