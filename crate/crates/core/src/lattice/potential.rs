use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::geometry::{format_point, Rect};
use crate::math::{self, format_rational, Rational};
use crate::{Error, Result};

/// A compactly supported single site potential `u: ℤᵈ → ℚ`.
///
/// On construction the support is translated so that it lies in `[−n, 0]^d`
/// with the largest coordinate on every axis equal to zero. The applied
/// translation is kept in [`CompactPotential::shift`].
#[derive(Clone, Debug, PartialEq)]
pub struct CompactPotential {
    dim: usize,
    n: u32,
    shift: Vec<i64>,
    sites: Vec<(Vec<i64>, Rational)>,
    values: Vec<f64>,
}

impl CompactPotential {
    pub fn new(dim: usize, entries: Vec<(Vec<i64>, Rational)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidLattice(String::from("dimension 0")));
        }
        if entries.is_empty() {
            return Err(Error::ZeroPotential);
        }
        let mut map = BTreeMap::new();
        for (point, value) in entries {
            if point.len() != dim {
                return Err(Error::InvalidLattice(format!(
                    "site {} has dimension {}, expected {dim}",
                    format_point(&point),
                    point.len()
                )));
            }
            if value.is_zero() {
                return Err(Error::ZeroEntry(format_point(&point)));
            }
            let label = format_point(&point);
            if map.insert(point, value).is_some() {
                return Err(Error::DuplicateSite(label));
            }
        }
        let mut shift = vec![i64::MAX; dim];
        let mut n = 0i64;
        for axis in 0..dim {
            let max = map.keys().map(|p| p[axis]).max().unwrap_or(0);
            let min = map.keys().map(|p| p[axis]).min().unwrap_or(0);
            shift[axis] = -max;
            n = n.max(max - min);
        }
        let sites: Vec<(Vec<i64>, Rational)> = map
            .into_iter()
            .map(|(p, v)| (p.iter().zip(&shift).map(|(c, s)| c + s).collect(), v))
            .collect();
        let values = sites.iter().map(|(_, v)| math::to_f64(v)).collect();
        Ok(Self {
            dim,
            n: n as u32,
            shift,
            sites,
            values,
        })
    }

    /// `δ₀` in dimension `dim`.
    pub fn delta(dim: usize) -> Self {
        Self::new(dim, vec![(vec![0; dim], math::rational_from_int(1))])
            .expect("delta potential is valid")
    }

    /// One-dimensional potential from its profile `[u(0), u(−1), …, u(−n)]`.
    /// Zero entries are skipped.
    pub fn from_profile(profile: &[i64]) -> Result<Self> {
        let entries = profile
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| (vec![-(i as i64)], math::rational_from_int(v)))
            .collect();
        Self::new(1, entries)
    }

    /// Tensor product `u(x) = Π_a v_a(x_a)` of one-dimensional factors.
    pub fn product(factors: &[CompactPotential]) -> Result<Self> {
        if factors.iter().any(|f| f.dim != 1) || factors.is_empty() {
            return Err(Error::InvalidParameter(String::from(
                "product needs one-dimensional factors",
            )));
        }
        let mut entries: Vec<(Vec<i64>, Rational)> = vec![(Vec::new(), math::rational_from_int(1))];
        for factor in factors {
            let mut next = Vec::with_capacity(entries.len() * factor.sites.len());
            for (point, value) in &entries {
                for (site, v) in &factor.sites {
                    let mut p = point.clone();
                    p.push(site[0]);
                    next.push((p, value * v));
                }
            }
            entries = next;
        }
        Self::new(factors.len(), entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Smallest `n` with `supp u ⊆ [−n, 0]^d`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Translation that was added to the input coordinates.
    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    /// Number of support points.
    pub fn rank(&self) -> usize {
        self.sites.len()
    }

    /// Support points with their exact values, sorted by point.
    pub fn sites(&self) -> &[(Vec<i64>, Rational)] {
        &self.sites
    }

    pub fn values_f64(&self) -> &[f64] {
        &self.values
    }

    /// `ū = Σ_k u(k)`, exactly.
    pub fn mean(&self) -> Rational {
        self.sites.iter().map(|(_, v)| v.clone()).sum()
    }

    pub fn value(&self, point: &[i64]) -> Rational {
        match self.sites.binary_search_by(|(p, _)| p.as_slice().cmp(point)) {
            Ok(i) => self.sites[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn value_f64(&self, point: &[i64]) -> f64 {
        match self.sites.binary_search_by(|(p, _)| p.as_slice().cmp(point)) {
            Ok(i) => self.values[i],
            Err(_) => 0.0,
        }
    }

    /// `[−n, 0]^d`.
    pub fn support_rect(&self) -> Rect {
        Rect::cube(self.dim, -(self.n as i64), 0).expect("valid support cube")
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .sites
            .iter()
            .map(|(p, v)| format!("{}:{}", format_point(p), format_rational(v)))
            .collect();
        format!("compact{{{}}}", parts.join(" "))
    }
}

/// One-dimensional potential with an exponentially decaying two-sided tail:
/// explicit values on `|k| ≤ R`, and `u(k) = A₊ sᵏ` for `k > R`,
/// `u(k) = A₋ s^{|k|}` for `k < −R`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayingPotential {
    core: BTreeMap<i64, f64>,
    core_radius: u32,
    tail_pos: f64,
    tail_neg: f64,
    ratio: f64,
}

impl DecayingPotential {
    pub fn new(
        core: BTreeMap<i64, f64>,
        core_radius: u32,
        tail_pos: f64,
        tail_neg: f64,
        ratio: f64,
    ) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidTail(format!("ratio {ratio} not in (0,1)")));
        }
        if !tail_pos.is_finite() || !tail_neg.is_finite() {
            return Err(Error::InvalidTail(String::from("non-finite tail amplitude")));
        }
        for (&k, &v) in &core {
            if k.unsigned_abs() > core_radius as u64 {
                return Err(Error::InvalidTail(format!(
                    "core site {k} outside radius {core_radius}"
                )));
            }
            if v == 0.0 {
                return Err(Error::ZeroEntry(format!("({k})")));
            }
            if !v.is_finite() {
                return Err(Error::InvalidTail(format!("non-finite value at {k}")));
            }
        }
        if core.is_empty() && tail_pos == 0.0 && tail_neg == 0.0 {
            return Err(Error::ZeroPotential);
        }
        Ok(Self {
            core,
            core_radius,
            tail_pos,
            tail_neg,
            ratio,
        })
    }

    /// `u(k) = A·s^{|k|}` for all `k`.
    pub fn geometric(amplitude: f64, ratio: f64) -> Result<Self> {
        let mut core = BTreeMap::new();
        core.insert(0, amplitude);
        Self::new(core, 0, amplitude, amplitude, ratio)
    }

    /// A compactly supported one-dimensional potential viewed through the
    /// decaying interface (zero tail).
    pub fn from_compact(u: &CompactPotential, ratio: f64) -> Result<Self> {
        if u.dim() != 1 {
            return Err(Error::NotDecaying);
        }
        let core: BTreeMap<i64, f64> = u.sites().iter().map(|(p, v)| (p[0], math::to_f64(v))).collect();
        Self::new(core, u.n(), 0.0, 0.0, ratio)
    }

    pub fn core(&self) -> &BTreeMap<i64, f64> {
        &self.core
    }

    pub fn core_radius(&self) -> u32 {
        self.core_radius
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn tail_amplitudes(&self) -> (f64, f64) {
        (self.tail_pos, self.tail_neg)
    }

    pub fn has_tail(&self) -> bool {
        self.tail_pos != 0.0 || self.tail_neg != 0.0
    }

    pub fn value(&self, k: i64) -> f64 {
        let r = self.core_radius as i64;
        if (-r..=r).contains(&k) {
            self.core.get(&k).copied().unwrap_or(0.0)
        } else if k > 0 {
            self.tail_pos * math::powi(self.ratio, k as i32)
        } else {
            self.tail_neg * math::powi(self.ratio, (-k) as i32)
        }
    }

    /// The constant `C` in `|u(k)| ≤ C s^{|k|}`.
    pub fn decay_constant(&self) -> f64 {
        let core_max = self
            .core
            .iter()
            .map(|(&k, &v)| math::abs(v) / math::powi(self.ratio, k.unsigned_abs() as i32))
            .fold(0.0, f64::max);
        core_max.max(math::abs(self.tail_pos)).max(math::abs(self.tail_neg))
    }

    /// `Σ_{k > R} s^k`-type geometric tail starting at `start`.
    fn geometric_from(&self, start: u64) -> f64 {
        math::powi(self.ratio, start as i32) / (1.0 - self.ratio)
    }

    pub fn mean(&self) -> f64 {
        let start = self.core_radius as u64 + 1;
        self.core.values().sum::<f64>() + (self.tail_pos + self.tail_neg) * self.geometric_from(start)
    }

    /// `Σ_{|k| ≥ m} |u(k)|`.
    pub fn abs_tail_from(&self, m: u64) -> f64 {
        let core: f64 = self
            .core
            .iter()
            .filter(|(k, _)| k.unsigned_abs() >= m)
            .map(|(_, v)| math::abs(*v))
            .sum();
        let start = m.max(self.core_radius as u64 + 1);
        core + (math::abs(self.tail_pos) + math::abs(self.tail_neg)) * self.geometric_from(start)
    }

    /// Smallest `T ≥ R` with `Σ_{|k|>T} |u(k)| < tol`.
    pub fn truncation_radius(&self, tol: f64) -> u32 {
        let mut t = self.core_radius;
        while self.has_tail() && self.abs_tail_from(t as u64 + 1) >= tol {
            t += 1;
        }
        t
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.core.iter().map(|(k, v)| format!("({k}):{v}")).collect();
        format!(
            "decaying{{core {} R={} tail+={} tail-={} s={}}}",
            parts.join(" "),
            self.core_radius,
            self.tail_pos,
            self.tail_neg,
            self.ratio
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SingleSitePotential {
    Compact(CompactPotential),
    Decaying(DecayingPotential),
}

impl SingleSitePotential {
    pub fn dim(&self) -> usize {
        match self {
            Self::Compact(u) => u.dim(),
            Self::Decaying(_) => 1,
        }
    }

    pub fn mean_f64(&self) -> f64 {
        match self {
            Self::Compact(u) => math::to_f64(&u.mean()),
            Self::Decaying(u) => u.mean(),
        }
    }

    pub fn value_f64(&self, point: &[i64]) -> f64 {
        match self {
            Self::Compact(u) => u.value_f64(point),
            Self::Decaying(u) => u.value(point[0]),
        }
    }

    /// Number of support points, `None` for an infinite support.
    pub fn rank(&self) -> Option<usize> {
        match self {
            Self::Compact(u) => Some(u.rank()),
            Self::Decaying(u) if !u.has_tail() => Some(u.core().len()),
            Self::Decaying(_) => None,
        }
    }

    pub fn as_compact(&self) -> Option<&CompactPotential> {
        match self {
            Self::Compact(u) => Some(u),
            Self::Decaying(_) => None,
        }
    }

    pub fn as_decaying(&self) -> Option<&DecayingPotential> {
        match self {
            Self::Compact(_) => None,
            Self::Decaying(u) => Some(u),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Self::Compact(u) => u.values_f64().iter().map(|v| math::abs(*v)).fold(0.0, f64::max),
            Self::Decaying(u) => {
                let core = u.core().values().map(|v| math::abs(*v)).fold(0.0, f64::max);
                let (p, n) = u.tail_amplitudes();
                core.max(math::abs(p * u.ratio())).max(math::abs(n * u.ratio()))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Compact(u) => u.label(),
            Self::Decaying(u) => u.label(),
        }
    }
}

impl From<CompactPotential> for SingleSitePotential {
    fn from(u: CompactPotential) -> Self {
        Self::Compact(u)
    }
}

impl From<DecayingPotential> for SingleSitePotential {
    fn from(u: DecayingPotential) -> Self {
        Self::Decaying(u)
    }
}
