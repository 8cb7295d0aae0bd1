//! Dense symmetric eigen-decomposition and the spectral quantities used by
//! the averaging argument.

mod eigen;
mod ops;
mod switch;

pub use eigen::{eig_symmetric, eigenvalues_symmetric, EigenSystem};
pub use ops::{
    count_in_interval, count_not_above, eigenvalue_derivative, resolvent_distance,
    single_site_perturbation, spectral_shift_check, DEGENERACY_GAP,
};
pub use switch::SwitchFunction;
