use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Axis-aligned integer rectangle `[lo₁,hi₁] × ⋯ × [lo_d,hi_d]`.
///
/// Points are enumerated in lexicographic row-major order: the last
/// coordinate varies fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Rect {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidLattice(format!(
                "corner dimensions {} and {} do not match",
                lo.len(),
                hi.len()
            )));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::InvalidLattice(String::from("empty rectangle")));
        }
        Ok(Self { lo, hi })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn extent(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis] + 1) as usize
    }

    pub fn len(&self) -> usize {
        (0..self.dim()).map(|a| self.extent(a)).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(p, (lo, hi))| lo <= p && p <= hi)
    }

    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        if !self.contains(point) {
            return None;
        }
        let mut index = 0usize;
        for axis in 0..self.dim() {
            index = index * self.extent(axis) + (point[axis] - self.lo[axis]) as usize;
        }
        Some(index)
    }

    pub fn point(&self, mut index: usize) -> Vec<i64> {
        let mut point = vec![0; self.dim()];
        for axis in (0..self.dim()).rev() {
            let extent = self.extent(axis);
            point[axis] = self.lo[axis] + (index % extent) as i64;
            index /= extent;
        }
        point
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Row-major strides, so `index_of(p) = Σ (p_a − lo_a)·stride_a`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dim()];
        for axis in (0..self.dim().saturating_sub(1)).rev() {
            strides[axis] = strides[axis + 1] * self.extent(axis + 1);
        }
        strides
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.dim() == other.dim() && self.contains(&other.lo) && self.contains(&other.hi)
    }
}

/// The box `Λ_L = [0, L]^d ∩ ℤᵈ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBox {
    side: u32,
    rect: Rect,
}

/// Dimensions above this are rejected; coupling streams pack coordinates
/// into 64 bits.
pub const MAX_DIM: usize = 8;

impl LatticeBox {
    pub fn new(dim: usize, side: u32) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidLattice(format!("dimension {dim} not in 1..={MAX_DIM}")));
        }
        Ok(Self {
            side,
            rect: Rect::cube(dim, 0, side as i64)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.rect.dim()
    }

    /// The side parameter `L`.
    pub fn side(&self) -> u32 {
        self.side
    }

    /// `(L+1)^d`.
    pub fn len(&self) -> usize {
        self.rect.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rect(&self) -> &Rect {
        &self.rect
    }

    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        self.rect.index_of(point)
    }

    pub fn point(&self, index: usize) -> Vec<i64> {
        self.rect.point(index)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        self.rect.points()
    }
}

pub fn format_point(point: &[i64]) -> String {
    let parts: Vec<String> = point.iter().map(|c| format!("{c}")).collect();
    format!("({})", parts.join(","))
}
