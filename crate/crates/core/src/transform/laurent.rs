use alloc::format;
use alloc::vec::Vec;

use super::coefficients::{CoefficientField, Construction};
use crate::lattice::{DecayingPotential, LatticeBox, Rect};
use crate::math::{self, Rational};
use crate::{Error, Result};

pub const DEFAULT_ORDER_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ORDER: u32 = 32;
/// Largest window, in sites, the truncation search will try.
pub const DEFAULT_WINDOW_CAP: usize = 1 << 14;

const SERIES_REL_TOL: f64 = 1e-15;
const MAX_SERIES_TERMS: i64 = 1 << 20;

/// Order `D` of the root `z = 1` of `F(z) = Σ_ν zᵛ u(−ν)` with
/// `c_F = F^{(D)}(1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaurentRoot {
    pub order: u32,
    pub value: f64,
}

/// `(F^{(j)}(1), Σ_ν |ν(ν−1)⋯(ν−j+1) u(−ν)|)`.
///
/// Each tail is summed until the remainder bound falls below `1e−15` of the
/// absolute partial sum.
pub fn laurent_derivative_at_one(u: &DecayingPotential, j: u32) -> (f64, f64) {
    let mut value = 0.0;
    let mut abs_sum = 0.0;
    for (&k, &v) in u.core() {
        let term = math::falling_factorial_f64(-k, j) * v;
        value += term;
        abs_sum += math::abs(term);
    }
    let r = u.core_radius() as i64;
    let s = u.ratio();
    let (pos, neg) = u.tail_amplitudes();
    // ν > R reads u(−ν) = A₋ s^ν, ν < −R reads u(−ν) = A₊ s^{|ν|}
    for (amplitude, direction) in [(neg, 1i64), (pos, -1i64)] {
        if amplitude == 0.0 {
            continue;
        }
        let mut t = r + 1;
        loop {
            let nu = direction * t;
            let term = math::falling_factorial_f64(nu, j) * amplitude * math::powi(s, t as i32);
            value += term;
            abs_sum += math::abs(term);
            let next = t + 1;
            let bound = math::powi((next + j as i64) as f64, j as i32) * math::abs(amplitude) * math::powi(s, next as i32);
            let ratio = math::powi((next + 1 + j as i64) as f64 / (next + j as i64) as f64, j as i32) * s;
            if ratio < 1.0 && bound / (1.0 - ratio) <= SERIES_REL_TOL * abs_sum {
                break;
            }
            if bound == 0.0 || t - r > MAX_SERIES_TERMS {
                break;
            }
            t = next;
        }
    }
    (value, abs_sum)
}

/// Smallest `j` with `|F^{(j)}(1)| > tol · Σ_ν |ν⋯(ν−j+1) u(−ν)|`.
pub fn laurent_root_order(u: &DecayingPotential, tol: f64, max_order: u32) -> Result<LaurentRoot> {
    for j in 0..=max_order {
        let (value, abs_sum) = laurent_derivative_at_one(u, j);
        if math::abs(value) > tol * abs_sum {
            return Ok(LaurentRoot { order: j, value });
        }
    }
    Err(Error::OrderUndetermined { max_order })
}

/// `sign · Σ_{k∈W} k^D u(x−k)` at every `x ∈ Λ_L`.
fn window_sums(u: &DecayingPotential, side: u32, left: i64, right: i64, order: u32, sign: f64) -> Vec<f64> {
    let powers: Vec<f64> = (-left..=side as i64 + right).map(|k| math::powi(k as f64, order as i32)).collect();
    (0..=side as i64)
        .map(|x| {
            let sum: f64 = (-left..=side as i64 + right)
                .zip(&powers)
                .map(|(k, p)| p * u.value(x - k))
                .sum();
            sign * sum
        })
        .collect()
}

/// Searches outward for the smallest window `W = {−left,…,L+right}` with
/// `sign(c_F) Σ_{k∈W} k^D u(x−k) ≥ |c_F|/2` on `Λ_L`.
///
/// Window sizes are tried in increasing order and, for a fixed size, the
/// most balanced splits first. The result has `a_L(k) = sign(c_F) k^D` on `W`
/// and `δ = |c_F|/2`.
pub fn truncation_window(u: &DecayingPotential, side: u32, root: LaurentRoot, cap: usize) -> Result<CoefficientField> {
    if root.value == 0.0 || !root.value.is_finite() {
        return Err(Error::InvalidParameter(format!("root value {} must be finite and nonzero", root.value)));
    }
    let sign = if root.value < 0.0 { -1.0 } else { 1.0 };
    let half = math::abs(root.value) / 2.0;
    let base = side as usize + 1;
    let mut extra = 0i64;
    while base + extra as usize <= cap {
        let mut splits: Vec<(i64, i64)> = (0..=extra).map(|left| (left, extra - left)).collect();
        splits.sort_by_key(|&(l, r)| ((l - r).abs(), l));
        for (left, right) in splits {
            let sums = window_sums(u, side, left, right, root.order, sign);
            if sums.iter().all(|&s| s >= half) {
                let domain = Rect::cube(1, -left, side as i64 + right)?;
                let values = domain
                    .points()
                    .map(|k| {
                        let v = Rational::from_integer(math::int_pow(k[0], root.order));
                        if sign < 0.0 {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect();
                let field = CoefficientField::new(domain, values, math::rational_from_f64(half)?, Construction::ExpTruncated)?;
                return Ok(field.with_metadata(sign as i8, alloc::vec![root.order], None));
            }
        }
        extra += 1;
    }
    Err(Error::WindowCapExceeded { cap })
}

/// Checks the window certificate on a box, returning the minimum.
pub fn window_minimum(field: &CoefficientField, u: &DecayingPotential, lattice: &LatticeBox) -> f64 {
    let lo = field.domain().lo()[0];
    let hi = field.domain().hi()[0];
    let coefficients: Vec<f64> = field.values().iter().map(math::to_f64).collect();
    (0..=lattice.side() as i64)
        .map(|x| (lo..=hi).zip(&coefficients).map(|(k, a)| a * u.value(x - k)).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}
