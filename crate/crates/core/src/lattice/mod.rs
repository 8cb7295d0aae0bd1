//! Boxes, potentials, densities, coupling fields and the finite-box
//! Hamiltonian.

mod coupling;
mod density;
mod geometry;
mod hamiltonian;
mod potential;

pub use coupling::{coupling_domain, sample_couplings, CouplingField, Provenance};
pub use density::{CouplingDensity, DensityKind};
pub use geometry::{format_point, LatticeBox, Rect};
pub use hamiltonian::{
    build_hamiltonian, build_potential, laplacian_restriction, BoxHamiltonian, Hopping, PotentialStencil,
    SymMatrix,
};
pub(crate) use hamiltonian::hopping_matrix;
pub use potential::{CompactPotential, DecayingPotential, SingleSitePotential};
