//! Coefficient fields `a_L(k)` that turn a sign-indefinite single site
//! potential into a strictly positive combination on the box:
//! `Σ_k a_L(k) u(x−k) ≥ δ > 0` for every `x ∈ Λ_L`.
//!
//! Compact potentials go through accompanying polynomials and a
//! dimension-by-dimension reduction, all in exact rational arithmetic.
//! One-dimensional exponentially decaying potentials use the accompanying
//! Laurent series and a constructive truncation window.

mod coefficients;
mod laurent;
mod polynomial;
mod reduce;

pub use coefficients::{
    build_monomial_coefficients, mean_window_coefficients, monomial_combination,
    verify_positive_combination, CoefficientField, CombinationMinimum, Construction,
};
pub use laurent::{
    laurent_derivative_at_one, laurent_root_order, truncation_window, window_minimum, LaurentRoot,
    DEFAULT_MAX_ORDER, DEFAULT_ORDER_TOL, DEFAULT_WINDOW_CAP,
};
pub use polynomial::{accompanying_polynomial, root_order_at_one, IntPolynomial, RootOrder};
pub use reduce::{reduce_dimension, Reduction, ReducedPotential};
