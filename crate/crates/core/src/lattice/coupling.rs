use alloc::format;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::density::CouplingDensity;
use super::geometry::{LatticeBox, Rect};
use super::potential::SingleSitePotential;
use crate::{Error, Result};

/// Remainder allowed when a decaying potential is truncated, relative to
/// `max |ω|`.
pub const TRUNCATION_TOL: f64 = 1e-14;

/// Where a coupling field came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Provenance {
    pub master_seed: u64,
    pub sample_index: u64,
}

/// Coupling constants `ω_k` on a rectangular index set.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingField {
    domain: Rect,
    values: Vec<f64>,
    provenance: Option<Provenance>,
}

impl CouplingField {
    /// A field with explicitly given values, in the domain's row-major order.
    pub fn from_values(domain: Rect, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::InvalidParameter(format!(
                "{} coupling values for a domain of {} sites",
                values.len(),
                domain.len()
            )));
        }
        Ok(Self {
            domain,
            values,
            provenance: None,
        })
    }

    pub fn constant(domain: Rect, value: f64) -> Self {
        let values = alloc::vec![value; domain.len()];
        Self {
            domain,
            values,
            provenance: None,
        }
    }

    pub fn domain(&self) -> &Rect {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Option<Provenance> {
        self.provenance
    }

    pub fn get(&self, k: &[i64]) -> Option<f64> {
        self.domain.index_of(k).map(|i| self.values[i])
    }

    /// Replaces `ω_k`; returns `false` if `k` is outside the domain.
    pub fn set(&mut self, k: &[i64], value: f64) -> bool {
        match self.domain.index_of(k) {
            Some(i) => {
                self.values[i] = value;
                self.provenance = None;
                true
            }
            None => false,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(crate::math::abs(*v)))
    }
}

/// Index set `Λ⁺` of couplings that influence the potential on the box.
///
/// For compact `u` with `supp u ⊆ [−n,0]^d` this is `{0,…,L+n}^d`. For a
/// decaying potential it is `{−T,…,L+T}` where the neglected tail satisfies
/// `Σ_{|j|>T} |u(j)| < 1e−14`.
pub fn coupling_domain(u: &SingleSitePotential, lattice: &LatticeBox) -> Result<Rect> {
    if u.dim() != lattice.dim() {
        return Err(Error::InvalidLattice(format!(
            "potential dimension {} does not match box dimension {}",
            u.dim(),
            lattice.dim()
        )));
    }
    let side = lattice.side() as i64;
    match u {
        SingleSitePotential::Compact(c) => Rect::cube(lattice.dim(), 0, side + c.n() as i64),
        SingleSitePotential::Decaying(d) => {
            let t = d.truncation_radius(TRUNCATION_TOL) as i64;
            Rect::cube(1, -t, side + t)
        }
    }
}

/// Draws i.i.d. couplings on `domain` by inverse CDF.
///
/// Every site has its own ChaCha8 stream: the 256-bit key is derived from
/// `(master_seed, sample_index)` and the 64-bit stream id packs the site
/// coordinates. Values therefore do not depend on iteration order, on the
/// domain shape or on how samples are spread over threads.
///
/// # Panics
///
/// If a coordinate does not fit in `64 / d` bits.
pub fn sample_couplings(
    density: &CouplingDensity,
    domain: &Rect,
    master_seed: u64,
    sample_index: u64,
) -> CouplingField {
    let seed = stream_key(master_seed, sample_index);
    let values = domain
        .points()
        .map(|site| {
            let mut rng = ChaCha8Rng::from_seed(seed);
            rng.set_stream(pack_site(&site));
            let p = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            density.inverse_cdf(p)
        })
        .collect();
    CouplingField {
        domain: domain.clone(),
        values,
        provenance: Some(Provenance {
            master_seed,
            sample_index,
        }),
    }
}

fn stream_key(master_seed: u64, sample_index: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&sample_index.to_le_bytes());
    key[16..].copy_from_slice(b"alloy-type coupl");
    key
}

fn pack_site(site: &[i64]) -> u64 {
    let bits = 64 / site.len() as u32;
    let mut packed = 0u64;
    for &c in site {
        if bits < 64 {
            let half = 1i64 << (bits - 1);
            assert!(
                (-half..half).contains(&c),
                "site coordinate {c} does not fit in {bits} bits"
            );
            packed = (packed << bits) | ((c as u64) & ((1u64 << bits) - 1));
        } else {
            packed = c as u64;
        }
    }
    packed
}
