use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use super::polynomial::{root_order_at_one, IntPolynomial, RootOrder};
use crate::lattice::{CompactPotential, Rect};
use crate::math::Rational;
use crate::{Error, Result};

/// A potential `w^{(j)}: ℤʲ → ℚ` with support in `[−n, 0]^j`, together
/// with the exponents already consumed on the way down from dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPotential {
    dim: usize,
    n: u32,
    values: BTreeMap<Vec<i64>, Rational>,
    /// `[M_{j+1}, …, M_d]`.
    consumed: Vec<u32>,
}

impl ReducedPotential {
    pub fn from_compact(u: &CompactPotential) -> Self {
        Self {
            dim: u.dim(),
            n: u.n(),
            values: u.sites().iter().cloned().collect(),
            consumed: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Nonzero values keyed by point.
    pub fn values(&self) -> &BTreeMap<Vec<i64>, Rational> {
        &self.values
    }

    pub fn value(&self, point: &[i64]) -> Rational {
        self.values.get(point).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn consumed(&self) -> &[u32] {
        &self.consumed
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// The value of a dimension-zero potential.
    pub fn scalar(&self) -> Option<Rational> {
        (self.dim == 0).then(|| self.value(&[]))
    }
}

/// One reduction step `w^{(j)} → w^{(j−1)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// `M_j`, the minimal root order over all slices.
    pub order: u32,
    pub reduced: ReducedPotential,
    /// `I_{j−1}`: slices whose root order equals `M_j`.
    pub minimal: Vec<Vec<i64>>,
    /// `J_{j−1}`: slices with larger (possibly infinite) order.
    pub higher: Vec<Vec<i64>>,
}

/// For every `x' ∈ [−n,0]^{j−1}` forms `p(x', t) = Σ_ν tᵛ w(x', −ν)`, takes
/// `M_j` as the minimal root order at `t = 1` over the family and sets
/// `w^{(j−1)}(x') = ∂ᵗ^{M_j} p(x', t)|_{t=1}`.
pub fn reduce_dimension(w: &ReducedPotential) -> Result<Reduction> {
    if w.is_zero() {
        return Err(Error::VanishingPotential);
    }
    if w.dim == 0 {
        return Err(Error::InvalidParameter(alloc::string::String::from(
            "cannot reduce a dimension-zero potential",
        )));
    }
    let n = w.n as i64;
    let slices: Vec<Vec<i64>> = if w.dim == 1 {
        alloc::vec![Vec::new()]
    } else {
        Rect::cube(w.dim - 1, -n, 0)?.points().collect()
    };

    let mut orders = Vec::with_capacity(slices.len());
    for slice in &slices {
        let coefficients = (0..=n)
            .map(|nu| {
                let mut point = slice.clone();
                point.push(-nu);
                w.value(&point)
            })
            .collect();
        orders.push(root_order_at_one(&IntPolynomial::new(coefficients)));
    }

    let order = orders
        .iter()
        .filter_map(RootOrder::order)
        .min()
        .ok_or(Error::VanishingPotential)?;

    let mut values = BTreeMap::new();
    let mut minimal = Vec::new();
    let mut higher = Vec::new();
    for (slice, root) in slices.into_iter().zip(orders) {
        match root {
            RootOrder::Finite { order: m, value } if m == order => {
                values.insert(slice.clone(), value);
                minimal.push(slice);
            }
            _ => higher.push(slice),
        }
    }
    let mut consumed = alloc::vec![order];
    consumed.extend_from_slice(&w.consumed);
    Ok(Reduction {
        order,
        reduced: ReducedPotential {
            dim: w.dim - 1,
            n: w.n,
            values,
            consumed,
        },
        minimal,
        higher,
    })
}
