use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::coupling::{coupling_domain, CouplingField, Provenance};
use super::geometry::{format_point, LatticeBox, Rect};
use super::potential::SingleSitePotential;
use crate::math;
use crate::{Error, Result};

/// Dense square matrix in row-major order. Intended for symmetric matrices;
/// symmetry is checked, not assumed, by the eigensolver.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidParameter(alloc::format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * m.n + i] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn add_to_diagonal(&mut self, diag: &[f64]) {
        for (i, &v) in diag.iter().enumerate() {
            self.data[i * self.n + i] += v;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// First `(row, col)` with `M[row][col] ≠ M[col][row]`, compared exactly.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j).to_bits() != self.get(j, i).to_bits() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `M·v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// True when every off-diagonal entry is zero.
    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0.0))
    }
}

/// Free part `H₀` of the finite-box operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Hopping {
    /// `H₀ = 0`.
    Off,
    /// Nearest-neighbour adjacency operator, zero diagonal.
    #[default]
    Adjacency,
    /// Combinatorial Laplacian: adjacency minus `2d` on the diagonal.
    Laplacian,
}

impl Hopping {
    pub fn name(self) -> &'static str {
        match self {
            Hopping::Off => "off",
            Hopping::Adjacency => "adjacency",
            Hopping::Laplacian => "laplacian",
        }
    }
}

/// Adjacency matrix of the box graph: `A[x][y] = 1` iff `‖x−y‖₁ = 1`.
pub fn laplacian_restriction(lattice: &LatticeBox) -> SymMatrix {
    let n = lattice.len();
    let strides = lattice.rect().strides();
    let side = lattice.side() as i64;
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        let p = lattice.point(i);
        for (axis, &stride) in strides.iter().enumerate() {
            if p[axis] < side {
                m.set_sym(i, i + stride, 1.0);
            }
        }
    }
    m
}

pub(crate) fn hopping_matrix(lattice: &LatticeBox, hopping: Hopping) -> SymMatrix {
    match hopping {
        Hopping::Off => SymMatrix::zeros(lattice.len()),
        Hopping::Adjacency => laplacian_restriction(lattice),
        Hopping::Laplacian => {
            let mut m = laplacian_restriction(lattice);
            let shift = vec![-2.0 * lattice.dim() as f64; lattice.len()];
            m.add_to_diagonal(&shift);
            m
        }
    }
}

/// For each box site `x`, the terms `(index of k in Λ⁺, u(x−k))` of
/// `V(x) = Σ_k ω_k u(x−k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialStencil {
    domain: Rect,
    rows: Vec<Vec<(usize, f64)>>,
}

impl PotentialStencil {
    /// Stencil against the coupling index set `domain`; fails if some
    /// `k` the box needs is missing.
    pub fn new(u: &SingleSitePotential, lattice: &LatticeBox, domain: &Rect) -> Result<Self> {
        let needed = coupling_domain(u, lattice)?;
        let mut rows = Vec::with_capacity(lattice.len());
        match u {
            SingleSitePotential::Compact(c) => {
                for x in lattice.points() {
                    let mut row = Vec::with_capacity(c.rank());
                    for ((s, _), &value) in c.sites().iter().zip(c.values_f64()) {
                        let k: Vec<i64> = x.iter().zip(s).map(|(a, b)| a - b).collect();
                        let idx = domain
                            .index_of(&k)
                            .ok_or_else(|| Error::IncompleteCouplingField(format_point(&k)))?;
                        row.push((idx, value));
                    }
                    rows.push(row);
                }
            }
            SingleSitePotential::Decaying(d) => {
                if !domain.contains_rect(&needed) {
                    let missing = needed
                        .points()
                        .find(|k| !domain.contains(k))
                        .unwrap_or_else(|| needed.lo().to_vec());
                    return Err(Error::IncompleteCouplingField(format_point(&missing)));
                }
                for x in lattice.points() {
                    let row = needed
                        .points()
                        .filter_map(|k| {
                            let value = d.value(x[0] - k[0]);
                            (value != 0.0).then(|| (domain.index_of(&k).expect("checked"), value))
                        })
                        .collect();
                    rows.push(row);
                }
            }
        }
        Ok(Self {
            domain: domain.clone(),
            rows,
        })
    }

    pub fn domain(&self) -> &Rect {
        &self.domain
    }

    /// `V(x)` for coupling values laid out on the stencil's domain.
    pub fn apply(&self, omega: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(k, u)| omega[k] * u).sum())
            .collect()
    }
}

/// `V_ω(x) = Σ_k ω_k u(x−k)` for `x ∈ Λ_L`, in the box's index order.
///
/// Decaying potentials are summed over `{−T,…,L+T}` only, where the
/// neglected remainder is below `1e−14·max|ω|`.
pub fn build_potential(
    u: &SingleSitePotential,
    omega: &CouplingField,
    lattice: &LatticeBox,
) -> Result<Vec<f64>> {
    let stencil = PotentialStencil::new(u, lattice, omega.domain())?;
    Ok(stencil.apply(omega.values()))
}

/// The finite-box operator `H_{ω,L}` as a dense symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxHamiltonian {
    pub lattice: LatticeBox,
    pub matrix: SymMatrix,
    pub hopping: Hopping,
    pub potential: Vec<f64>,
    pub potential_label: String,
    pub coupling: Option<Provenance>,
}

pub fn build_hamiltonian(
    u: &SingleSitePotential,
    omega: &CouplingField,
    lattice: &LatticeBox,
    hopping: Hopping,
) -> Result<BoxHamiltonian> {
    let potential = build_potential(u, omega, lattice)?;
    Ok(assemble(lattice, hopping, potential, u.label(), omega.provenance()))
}

pub(crate) fn assemble(
    lattice: &LatticeBox,
    hopping: Hopping,
    potential: Vec<f64>,
    potential_label: String,
    coupling: Option<Provenance>,
) -> BoxHamiltonian {
    let mut matrix = hopping_matrix(lattice, hopping);
    matrix.add_to_diagonal(&potential);
    BoxHamiltonian {
        lattice: lattice.clone(),
        matrix,
        hopping,
        potential,
        potential_label,
        coupling,
    }
}
