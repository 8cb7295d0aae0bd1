use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::reduce::{reduce_dimension, ReducedPotential};
use crate::lattice::{CompactPotential, LatticeBox, Rect, SingleSitePotential};
use crate::math::{self, format_rational, Rational};
use crate::{Error, Result};

/// How a coefficient field was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Construction {
    /// `±Π k_a^{M_a}` on `{0,…,L+n}^d` from the dimension reduction.
    Monomial,
    /// Indicator of `Q(L,m) = Λ_L + [−m,m]^d` for a decaying potential with
    /// nonzero mean.
    MeanWindow,
    /// Indicator of `Λ_{L+n}` for a compact potential with nonzero mean.
    CorollaryWindow,
    /// `±k^D` on a finite window, for a decaying one-dimensional potential.
    ExpTruncated,
}

impl Construction {
    pub fn tag(self) -> &'static str {
        match self {
            Construction::Monomial => "monomial",
            Construction::MeanWindow => "mean-window",
            Construction::CorollaryWindow => "corollary-window",
            Construction::ExpTruncated => "exp-truncated",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "monomial" => Some(Construction::Monomial),
            "mean-window" => Some(Construction::MeanWindow),
            "corollary-window" => Some(Construction::CorollaryWindow),
            "exp-truncated" => Some(Construction::ExpTruncated),
            _ => None,
        }
    }
}

/// Coefficients `a_L(k)` on a finite rectangle (zero outside) with the
/// positivity constant `δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientField {
    domain: Rect,
    values: Vec<Rational>,
    delta: Rational,
    construction: Construction,
    /// `−1` when the natural coefficients were negated to make `δ > 0`.
    sign: i8,
    /// `M_1,…,M_d` for monomial fields, `[D]` for truncated ones.
    exponents: Vec<u32>,
    /// `m` of the mean window.
    window_radius: Option<u64>,
}

impl CoefficientField {
    pub fn new(domain: Rect, values: Vec<Rational>, delta: Rational, construction: Construction) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for a domain of {} sites",
                values.len(),
                domain.len()
            )));
        }
        if !delta.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "delta must be positive, got {}",
                format_rational(&delta)
            )));
        }
        Ok(Self {
            domain,
            values,
            delta,
            construction,
            sign: 1,
            exponents: Vec::new(),
            window_radius: None,
        })
    }

    /// Attaches the sign flip, exponents and window radius of the
    /// construction.
    pub fn with_metadata(mut self, sign: i8, exponents: Vec<u32>, window_radius: Option<u64>) -> Self {
        self.sign = sign;
        self.exponents = exponents;
        self.window_radius = window_radius;
        self
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &Rect {
        &self.domain
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn delta_f64(&self) -> f64 {
        math::to_f64(&self.delta)
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn window_radius(&self) -> Option<u64> {
        self.window_radius
    }

    pub fn get(&self, k: &[i64]) -> Rational {
        self.domain
            .index_of(k)
            .map(|i| self.values[i].clone())
            .unwrap_or_else(Rational::zero)
    }

    /// `(k, a_L(k))` for the nonzero coefficients.
    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<i64>, &Rational)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(i, v)| (self.domain.point(i), v))
    }

    pub fn max_abs(&self) -> Rational {
        self.values.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn abs_sum(&self) -> Rational {
        self.values.iter().map(|v| v.abs()).sum()
    }

    /// `Σ_k a_L(k) u(x−k)` for every `x ∈ Λ_L`, exactly.
    pub fn exact_combination(&self, u: &CompactPotential, lattice: &LatticeBox) -> Result<Vec<Rational>> {
        check_dims(self.dim(), u.dim(), lattice)?;
        let mut k = alloc::vec![0i64; u.dim()];
        Ok(lattice
            .points()
            .map(|x| {
                let mut acc = Rational::zero();
                for (s, value) in u.sites() {
                    for (axis, slot) in k.iter_mut().enumerate() {
                        *slot = x[axis] - s[axis];
                    }
                    if let Some(i) = self.domain.index_of(&k) {
                        let a = &self.values[i];
                        if !a.is_zero() {
                            acc += a * value;
                        }
                    }
                }
                acc
            })
            .collect())
    }

    /// `Σ_k a_L(k) u(x−k)` in floating point, summed over the field's domain.
    pub fn float_combination(&self, u: &SingleSitePotential, lattice: &LatticeBox) -> Result<Vec<f64>> {
        check_dims(self.dim(), u.dim(), lattice)?;
        let coefficients: Vec<(Vec<i64>, f64)> =
            self.nonzero().map(|(k, v)| (k, math::to_f64(v))).collect();
        let mut shifted = alloc::vec![0i64; u.dim()];
        Ok(lattice
            .points()
            .map(|x| {
                coefficients
                    .iter()
                    .map(|(k, a)| {
                        for axis in 0..shifted.len() {
                            shifted[axis] = x[axis] - k[axis];
                        }
                        a * u.value_f64(&shifted)
                    })
                    .sum()
            })
            .collect())
    }
}

fn check_dims(field: usize, potential: usize, lattice: &LatticeBox) -> Result<()> {
    if field != potential || potential != lattice.dim() {
        return Err(Error::InvalidLattice(format!(
            "dimension mismatch: field {field}, potential {potential}, box {}",
            lattice.dim()
        )));
    }
    Ok(())
}

fn monomial(k: &[i64], exponents: &[u32]) -> Rational {
    let mut value = num_bigint::BigInt::one();
    for (&c, &e) in k.iter().zip(exponents) {
        value *= math::int_pow(c, e);
    }
    Rational::from_integer(value)
}

/// `Σ_{k ∈ {0,…,L+n}^d} Π_a k_a^{e_a} u(x−k)` for every `x ∈ Λ_L`
/// (`0⁰ = 1`), exactly.
pub fn monomial_combination(u: &CompactPotential, side: u32, exponents: &[u32]) -> Result<Vec<Rational>> {
    if exponents.len() != u.dim() {
        return Err(Error::InvalidParameter(format!(
            "{} exponents for a {}-dimensional potential",
            exponents.len(),
            u.dim()
        )));
    }
    let lattice = LatticeBox::new(u.dim(), side)?;
    let mut k = alloc::vec![0i64; u.dim()];
    Ok(lattice
        .points()
        .map(|x| {
            let mut acc = Rational::zero();
            for (s, value) in u.sites() {
                for (axis, slot) in k.iter_mut().enumerate() {
                    *slot = x[axis] - s[axis];
                }
                acc += monomial(&k, exponents) * value;
            }
            acc
        })
        .collect())
}

/// Runs the reduction `d` times and returns `a_L(k) = ±Π k_a^{M_a}` on
/// `{0,…,L+n}^d` with `δ = |w^{(0)}|`.
pub fn build_monomial_coefficients(u: &CompactPotential, side: u32) -> Result<CoefficientField> {
    let mut w = ReducedPotential::from_compact(u);
    while w.dim() > 0 {
        w = reduce_dimension(&w)?.reduced;
    }
    // consumed = [M_1, …, M_d]
    let exponents = w.consumed().to_vec();
    let constant = w.scalar().ok_or(Error::VanishingPotential)?;
    if constant.is_zero() {
        return Err(Error::VanishingPotential);
    }
    let sign: i8 = if constant.is_negative() { -1 } else { 1 };
    let domain = Rect::cube(u.dim(), 0, side as i64 + u.n() as i64)?;
    let values = domain
        .points()
        .map(|k| {
            let v = monomial(&k, &exponents);
            if sign < 0 {
                -v
            } else {
                v
            }
        })
        .collect();
    Ok(CoefficientField::new(domain, values, constant.abs(), Construction::Monomial)?
        .with_metadata(sign, exponents, None))
}

/// Window construction for potentials with `ū ≠ 0`.
///
/// Compact `u`: `a_L = sign(ū)` on `Λ_{L+n}`, `δ = |ū|`. Decaying `u`: with
/// the smallest `m` such that `Σ_{|k|≥m} |u(k)| ≤ |ū|/2`, `a_L = sign(ū)`
/// on `Q(L,m) = {−m,…,L+m}`, `δ = |ū|/2`.
pub fn mean_window_coefficients(u: &SingleSitePotential, side: u32) -> Result<CoefficientField> {
    match u {
        SingleSitePotential::Compact(c) => {
            let mean = c.mean();
            if mean.is_zero() {
                return Err(Error::DegenerateMean);
            }
            let sign: i8 = if mean.is_negative() { -1 } else { 1 };
            let domain = Rect::cube(c.dim(), 0, side as i64 + c.n() as i64)?;
            let values = alloc::vec![math::rational_from_int(sign as i64); domain.len()];
            Ok(CoefficientField::new(domain, values, mean.abs(), Construction::CorollaryWindow)?
                .with_metadata(sign, Vec::new(), None))
        }
        SingleSitePotential::Decaying(d) => {
            let mean = d.mean();
            let scale = d.abs_tail_from(0);
            if math::abs(mean) <= 1e-14 * scale {
                return Err(Error::DegenerateMean);
            }
            let half = math::abs(mean) / 2.0;
            let mut m = 0u64;
            while d.abs_tail_from(m) > half {
                m += 1;
            }
            let sign: i8 = if mean < 0.0 { -1 } else { 1 };
            let domain = Rect::cube(1, -(m as i64), side as i64 + m as i64)?;
            let values = alloc::vec![math::rational_from_int(sign as i64); domain.len()];
            let delta = math::rational_from_f64(half)?;
            Ok(CoefficientField::new(domain, values, delta, Construction::MeanWindow)?
                .with_metadata(sign, Vec::new(), Some(m)))
        }
    }
}

/// Minimum over the box of the positive combination.
#[derive(Clone, Debug, PartialEq)]
pub enum CombinationMinimum {
    Exact(Rational),
    Approximate(f64),
}

impl CombinationMinimum {
    pub fn to_f64(&self) -> f64 {
        match self {
            CombinationMinimum::Exact(r) => math::to_f64(r),
            CombinationMinimum::Approximate(v) => *v,
        }
    }

    pub fn display(&self) -> String {
        match self {
            CombinationMinimum::Exact(r) => format_rational(r),
            CombinationMinimum::Approximate(v) => format!("{v}"),
        }
    }
}

/// `min_{x ∈ Λ_L} Σ_k a_L(k) u(x−k)`, exactly for compact `u`, and checks it
/// against `δ`.
pub fn verify_positive_combination(
    field: &CoefficientField,
    u: &SingleSitePotential,
    lattice: &LatticeBox,
) -> Result<CombinationMinimum> {
    match u {
        SingleSitePotential::Compact(c) => {
            let sums = field.exact_combination(c, lattice)?;
            let minimum = sums.into_iter().min().expect("boxes are non-empty");
            if &minimum < field.delta() {
                return Err(Error::PositivityFailed {
                    minimum: format_rational(&minimum),
                    delta: format_rational(field.delta()),
                });
            }
            Ok(CombinationMinimum::Exact(minimum))
        }
        SingleSitePotential::Decaying(_) => {
            let sums = field.float_combination(u, lattice)?;
            let minimum = sums.into_iter().fold(f64::INFINITY, f64::min);
            if minimum < field.delta_f64() {
                return Err(Error::PositivityFailed {
                    minimum: format!("{minimum}"),
                    delta: format!("{}", field.delta_f64()),
                });
            }
            Ok(CombinationMinimum::Approximate(minimum))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DecayingPotential;
    use crate::math::rational_from_int;
    use alloc::vec;

    fn dipole() -> CompactPotential {
        CompactPotential::from_profile(&[1, -1]).unwrap()
    }

    #[test]
    fn delta_monomial_field() {
        let field = build_monomial_coefficients(&CompactPotential::delta(1), 3).unwrap();
        assert_eq!(field.domain(), &Rect::cube(1, 0, 3).unwrap());
        assert!(field.values().iter().all(|v| *v == rational_from_int(1)));
        assert_eq!(field.delta(), &rational_from_int(1));
        assert_eq!(field.exponents(), &[0]);
    }

    #[test]
    fn dipole_monomial_field_is_negated_identity() {
        let field = build_monomial_coefficients(&dipole(), 10).unwrap();
        assert_eq!(field.sign(), -1);
        for (i, v) in field.values().iter().enumerate() {
            assert_eq!(*v, rational_from_int(-(i as i64)));
        }
        let lattice = LatticeBox::new(1, 10).unwrap();
        let sums = field.exact_combination(&dipole(), &lattice).unwrap();
        assert!(sums.iter().all(|s| *s == rational_from_int(1)));
        let u: SingleSitePotential = dipole().into();
        assert_eq!(
            verify_positive_combination(&field, &u, &lattice).unwrap(),
            CombinationMinimum::Exact(rational_from_int(1))
        );
    }

    #[test]
    fn product_monomial_field() {
        let u = CompactPotential::product(&[dipole(), dipole()]).unwrap();
        let field = build_monomial_coefficients(&u, 5).unwrap();
        assert_eq!(field.exponents(), &[1, 1]);
        assert_eq!(field.sign(), 1);
        assert_eq!(field.get(&[2, 3]), rational_from_int(6));
        let lattice = LatticeBox::new(2, 5).unwrap();
        let min = verify_positive_combination(&field, &u.clone().into(), &lattice).unwrap();
        assert_eq!(min, CombinationMinimum::Exact(rational_from_int(1)));
    }

    #[test]
    fn vanishing_below_root_order() {
        // (1 − t)²: orders 0 and 1 vanish identically
        let u = CompactPotential::from_profile(&[1, -2, 1]).unwrap();
        for e in 0..2 {
            assert!(monomial_combination(&u, 7, &[e]).unwrap().iter().all(|v| v.is_zero()));
        }
        assert!(monomial_combination(&u, 7, &[2]).unwrap().iter().all(|v| *v == rational_from_int(2)));
    }

    #[test]
    fn corollary_window_for_nonzero_mean() {
        let u: SingleSitePotential = CompactPotential::from_profile(&[3, -1]).unwrap().into();
        let field = mean_window_coefficients(&u, 4).unwrap();
        assert_eq!(field.construction(), Construction::CorollaryWindow);
        assert_eq!(field.domain(), &Rect::cube(1, 0, 5).unwrap());
        assert_eq!(field.delta(), &rational_from_int(2));
        let lattice = LatticeBox::new(1, 4).unwrap();
        assert_eq!(
            verify_positive_combination(&field, &u, &lattice).unwrap(),
            CombinationMinimum::Exact(rational_from_int(2))
        );
        let delta: SingleSitePotential = CompactPotential::delta(1).into();
        let field = mean_window_coefficients(&delta, 4).unwrap();
        assert_eq!(field.domain(), &Rect::cube(1, 0, 4).unwrap());
        assert_eq!(
            verify_positive_combination(&field, &delta, &lattice).unwrap(),
            CombinationMinimum::Exact(rational_from_int(1))
        );
    }

    #[test]
    fn negative_mean_flips_sign() {
        let u: SingleSitePotential = CompactPotential::from_profile(&[-2]).unwrap().into();
        let field = mean_window_coefficients(&u, 2).unwrap();
        assert_eq!(field.sign(), -1);
        assert_eq!(field.delta(), &rational_from_int(2));
        verify_positive_combination(&field, &u, &LatticeBox::new(1, 2).unwrap()).unwrap();
    }

    #[test]
    fn degenerate_mean_rejected() {
        let u: SingleSitePotential = dipole().into();
        assert_eq!(mean_window_coefficients(&u, 3), Err(Error::DegenerateMean));
    }

    #[test]
    fn geometric_mean_window_radius() {
        let u: SingleSitePotential = DecayingPotential::geometric(1.0, 0.5).unwrap().into();
        let field = mean_window_coefficients(&u, 6).unwrap();
        assert_eq!(field.window_radius(), Some(2));
        assert_eq!(field.construction(), Construction::MeanWindow);
        assert_eq!(field.domain(), &Rect::cube(1, -2, 8).unwrap());
        assert_eq!(field.delta_f64(), 1.5);
        let min = verify_positive_combination(&field, &u, &LatticeBox::new(1, 6).unwrap()).unwrap();
        assert!(min.to_f64() >= 1.5);
    }

    #[test]
    fn failing_certificate_is_reported() {
        let u = dipole();
        let lattice = LatticeBox::new(1, 3).unwrap();
        let domain = Rect::cube(1, 0, 4).unwrap();
        let field = CoefficientField::new(
            domain,
            vec![rational_from_int(1); 5],
            rational_from_int(1),
            Construction::CorollaryWindow,
        )
        .unwrap();
        assert!(matches!(
            verify_positive_combination(&field, &u.into(), &lattice),
            Err(Error::PositivityFailed { .. })
        ));
    }

    #[test]
    fn coefficient_growth_bound() {
        let u = CompactPotential::from_profile(&[1, -3, 3, -1]).unwrap();
        let side = 9;
        let field = build_monomial_coefficients(&u, side).unwrap();
        assert_eq!(field.exponents(), &[3]);
        let cap = num_traits::pow(num_bigint::BigInt::from(side as i64 + u.n() as i64), 3);
        assert!(field.max_abs() <= Rational::from_integer(cap));
    }
}
