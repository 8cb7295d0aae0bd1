use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Shape of the single-coupling density `f`.
#[derive(Clone, Debug, PartialEq)]
pub enum DensityKind {
    Uniform { lower: f64, upper: f64 },
    /// Symmetric tent with its peak at the midpoint.
    Triangular { lower: f64, upper: f64 },
    /// Linear interpolation of `(x, f(x))` breakpoints, zero outside
    /// `[x₀, x_last]`. Jumps at the ends are allowed.
    PiecewiseLinear { breakpoints: Vec<(f64, f64)> },
}

/// A probability density of bounded variation with bounded support.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingDensity {
    kind: DensityKind,
    /// Cumulative mass at each breakpoint (piecewise kind only).
    cumulative: Vec<f64>,
}

const NORMALIZATION_TOL: f64 = 1e-12;

impl CouplingDensity {
    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        Self::new(DensityKind::Uniform { lower, upper })
    }

    pub fn triangular(lower: f64, upper: f64) -> Result<Self> {
        Self::new(DensityKind::Triangular { lower, upper })
    }

    pub fn piecewise_linear(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(DensityKind::PiecewiseLinear { breakpoints })
    }

    pub fn new(kind: DensityKind) -> Result<Self> {
        let mut cumulative = Vec::new();
        match &kind {
            DensityKind::Uniform { lower, upper } | DensityKind::Triangular { lower, upper } => {
                if !(lower.is_finite() && upper.is_finite() && lower < upper) {
                    return Err(Error::InvalidDensity(format!("empty support [{lower}, {upper}]")));
                }
            }
            DensityKind::PiecewiseLinear { breakpoints } => {
                if breakpoints.len() < 2 {
                    return Err(Error::InvalidDensity(String::from("need at least two breakpoints")));
                }
                if breakpoints.iter().any(|(x, y)| !x.is_finite() || !y.is_finite() || *y < 0.0) {
                    return Err(Error::InvalidDensity(String::from(
                        "breakpoints must be finite with non-negative values",
                    )));
                }
                if breakpoints.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::InvalidDensity(String::from(
                        "breakpoints must be strictly increasing",
                    )));
                }
                cumulative.push(0.0);
                let mut acc = 0.0;
                for w in breakpoints.windows(2) {
                    acc += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
                    cumulative.push(acc);
                }
                if math::abs(acc - 1.0) > NORMALIZATION_TOL {
                    return Err(Error::UnnormalizedDensity { integral: acc });
                }
            }
        }
        Ok(Self { kind, cumulative })
    }

    pub fn kind(&self) -> &DensityKind {
        &self.kind
    }

    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            DensityKind::Uniform { lower, upper } | DensityKind::Triangular { lower, upper } => {
                (*lower, *upper)
            }
            DensityKind::PiecewiseLinear { breakpoints } => {
                (breakpoints[0].0, breakpoints[breakpoints.len() - 1].0)
            }
        }
    }

    /// Total variation norm: jump heights plus `∫|f′|`.
    pub fn bv_norm(&self) -> f64 {
        match &self.kind {
            DensityKind::Uniform { lower, upper } => 2.0 / (upper - lower),
            DensityKind::Triangular { lower, upper } => 4.0 / (upper - lower),
            DensityKind::PiecewiseLinear { breakpoints } => {
                let ends = breakpoints[0].1 + breakpoints[breakpoints.len() - 1].1;
                let slopes: f64 = breakpoints.windows(2).map(|w| math::abs(w[1].1 - w[0].1)).sum();
                ends + slopes
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x < a || x > b {
            return 0.0;
        }
        match &self.kind {
            DensityKind::Uniform { .. } => 1.0 / (b - a),
            DensityKind::Triangular { .. } => {
                let half = 0.5 * (b - a);
                let peak = 1.0 / half;
                peak * (1.0 - math::abs(x - (a + half)) / half)
            }
            DensityKind::PiecewiseLinear { breakpoints } => {
                let i = segment_of(breakpoints, x);
                let (x0, y0) = breakpoints[i];
                let (x1, y1) = breakpoints[i + 1];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Cumulative distribution `F(x) = ∫_{−∞}^x f`.
    pub fn cdf(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x <= a {
            return 0.0;
        }
        if x >= b {
            return 1.0;
        }
        match &self.kind {
            DensityKind::Uniform { .. } => (x - a) / (b - a),
            DensityKind::Triangular { .. } => {
                let width = b - a;
                if x <= a + 0.5 * width {
                    2.0 * math::powi((x - a) / width, 2)
                } else {
                    1.0 - 2.0 * math::powi((b - x) / width, 2)
                }
            }
            DensityKind::PiecewiseLinear { breakpoints } => {
                let i = segment_of(breakpoints, x);
                let (x0, y0) = breakpoints[i];
                let (x1, y1) = breakpoints[i + 1];
                let t = x - x0;
                let slope = (y1 - y0) / (x1 - x0);
                self.cumulative[i] + y0 * t + 0.5 * slope * t * t
            }
        }
    }

    /// Inverse of the cumulative distribution, `p ∈ [0, 1)`.
    pub fn inverse_cdf(&self, p: f64) -> f64 {
        let (a, b) = self.support();
        match &self.kind {
            DensityKind::Uniform { .. } => a + p * (b - a),
            DensityKind::Triangular { .. } => {
                let width = b - a;
                if p < 0.5 {
                    a + width * math::sqrt(0.5 * p)
                } else {
                    b - width * math::sqrt(0.5 * (1.0 - p))
                }
            }
            DensityKind::PiecewiseLinear { breakpoints } => {
                let target = p * self.cumulative[self.cumulative.len() - 1];
                let i = match self
                    .cumulative
                    .iter()
                    .rposition(|&c| c <= target)
                {
                    Some(i) if i + 1 < self.cumulative.len() => i,
                    _ => self.cumulative.len() - 2,
                };
                let (x0, y0) = breakpoints[i];
                let (x1, y1) = breakpoints[i + 1];
                let need = target - self.cumulative[i];
                let slope = (y1 - y0) / (x1 - x0);
                // Solve y0·t + slope·t²/2 = need for the offset t.
                let t = if math::abs(slope) < 1e-300 {
                    if y0 > 0.0 {
                        need / y0
                    } else {
                        0.0
                    }
                } else {
                    let disc = (y0 * y0 + 2.0 * slope * need).max(0.0);
                    // Stable root of the quadratic.
                    2.0 * need / (y0 + math::sqrt(disc))
                };
                (x0 + t).clamp(x0, x1)
            }
        }
    }

    /// A short identifier used in experiment records.
    pub fn id(&self) -> String {
        match &self.kind {
            DensityKind::Uniform { lower, upper } => format!("uniform[{lower},{upper}]"),
            DensityKind::Triangular { lower, upper } => format!("triangular[{lower},{upper}]"),
            DensityKind::PiecewiseLinear { breakpoints } => {
                let parts: Vec<String> = breakpoints.iter().map(|(x, y)| format!("{x}:{y}")).collect();
                format!("piecewise[{}]", parts.join(","))
            }
        }
    }
}

fn segment_of(breakpoints: &[(f64, f64)], x: f64) -> usize {
    let last = breakpoints.len() - 2;
    breakpoints
        .windows(2)
        .position(|w| x <= w[1].0)
        .unwrap_or(last)
        .min(last)
}
