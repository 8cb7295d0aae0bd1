use alloc::vec::Vec;

use num_traits::Zero;

use crate::lattice::SingleSitePotential;
use crate::math::{self, Rational};
use crate::{Error, Result};

/// Polynomial with exact rational coefficients, lowest degree first.
/// Trailing zero coefficients are trimmed, so the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    coefficients: Vec<Rational>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn from_ints(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| math::rational_from_int(c)).collect())
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// `p^{(j)}(1) = Σ_ν ν(ν−1)⋯(ν−j+1)·c_ν`.
    pub fn derivative_at_one(&self, j: u32) -> Rational {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(nu, c)| *nu as u32 >= j && !c.is_zero())
            .map(|(nu, c)| c * Rational::from_integer(math::falling_factorial(nu as i64, j)))
            .sum()
    }
}

/// Order of the root `t = 1`, with `c = p^{(m)}(1)` for finite order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootOrder {
    Finite { order: u32, value: Rational },
    /// The polynomial vanishes identically.
    Infinite,
}

impl RootOrder {
    pub fn order(&self) -> Option<u32> {
        match self {
            RootOrder::Finite { order, .. } => Some(*order),
            RootOrder::Infinite => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            RootOrder::Finite { value, .. } => Some(value),
            RootOrder::Infinite => None,
        }
    }
}

/// `p(t) = Σ_{ν=0}^{n} tᵛ w(−ν)` for a one-dimensional compact `w`.
pub fn accompanying_polynomial(w: &SingleSitePotential) -> Result<IntPolynomial> {
    let w = w.as_compact().ok_or(Error::NonCompact)?;
    if w.dim() != 1 {
        return Err(Error::InvalidParameter(alloc::format!(
            "accompanying polynomial needs a one-dimensional potential, got d={}",
            w.dim()
        )));
    }
    let coefficients = (0..=w.n() as i64).map(|nu| w.value(&[-nu])).collect();
    Ok(IntPolynomial::new(coefficients))
}

/// Smallest `m` with `p^{(m)}(1) ≠ 0`. Any nonzero polynomial of degree `n`
/// has `m ≤ n`.
pub fn root_order_at_one(p: &IntPolynomial) -> RootOrder {
    let Some(degree) = p.degree() else {
        return RootOrder::Infinite;
    };
    for j in 0..=degree as u32 {
        let value = p.derivative_at_one(j);
        if !value.is_zero() {
            return RootOrder::Finite { order: j, value };
        }
    }
    unreachable!("the leading derivative of a nonzero polynomial is nonzero")
}
