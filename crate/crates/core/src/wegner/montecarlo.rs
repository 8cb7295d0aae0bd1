use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::stats::MeanEstimate;
use crate::lattice::{
    coupling_domain, sample_couplings, CouplingDensity, CouplingField, Hopping, LatticeBox, PotentialStencil, Rect,
    SingleSitePotential, SymMatrix,
};
use crate::spectral::{count_in_interval, eigenvalues_symmetric};
use crate::{Error, Result};

/// Runs `f(0), …, f(n−1)` and returns the results in index order.
///
/// Implementations may evaluate in any order or in parallel; callers rely
/// only on the output order.
pub trait SampleExecutor {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// In-order evaluation on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl SampleExecutor for Sequential {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}

/// The random operator `H_{ω,L}` with everything that does not depend on `ω`
/// precomputed.
#[derive(Clone, Debug)]
pub struct AlloyModel {
    potential: SingleSitePotential,
    density: CouplingDensity,
    lattice: LatticeBox,
    hopping: Hopping,
    domain: Rect,
    stencil: PotentialStencil,
    free: SymMatrix,
}

impl AlloyModel {
    pub fn new(potential: SingleSitePotential, density: CouplingDensity, lattice: LatticeBox, hopping: Hopping) -> Result<Self> {
        let domain = coupling_domain(&potential, &lattice)?;
        let stencil = PotentialStencil::new(&potential, &lattice, &domain)?;
        let free = crate::lattice::hopping_matrix(&lattice, hopping);
        Ok(Self {
            potential,
            density,
            lattice,
            hopping,
            domain,
            stencil,
            free,
        })
    }

    /// The same model on a box of another side length.
    pub fn with_side(&self, side: u32) -> Result<Self> {
        let lattice = LatticeBox::new(self.lattice.dim(), side)?;
        Self::new(self.potential.clone(), self.density.clone(), lattice, self.hopping)
    }

    pub fn potential(&self) -> &SingleSitePotential {
        &self.potential
    }

    pub fn density(&self) -> &CouplingDensity {
        &self.density
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn hopping(&self) -> Hopping {
        self.hopping
    }

    pub fn coupling_domain(&self) -> &Rect {
        &self.domain
    }

    pub fn couplings(&self, master_seed: u64, sample_index: u64) -> CouplingField {
        sample_couplings(&self.density, &self.domain, master_seed, sample_index)
    }

    /// `H₀ + V_ω` for couplings on the model's coupling domain.
    pub fn matrix(&self, omega: &CouplingField) -> Result<SymMatrix> {
        if omega.domain() != &self.domain {
            let stencil = PotentialStencil::new(&self.potential, &self.lattice, omega.domain())?;
            return Ok(self.with_potential(&stencil.apply(omega.values())));
        }
        Ok(self.with_potential(&self.stencil.apply(omega.values())))
    }

    fn with_potential(&self, potential: &[f64]) -> SymMatrix {
        let mut m = self.free.clone();
        m.add_to_diagonal(potential);
        m
    }

    /// Sorted eigenvalues of sample `sample_index`.
    pub fn spectrum(&self, master_seed: u64, sample_index: u64) -> Result<Vec<f64>> {
        let omega = self.couplings(master_seed, sample_index);
        eigenvalues_symmetric(&self.matrix(&omega)?)
    }

    pub fn label(&self) -> String {
        format!(
            "d={} L={} u={} f={} H0={}",
            self.lattice.dim(),
            self.lattice.side(),
            self.potential.label(),
            self.density.id(),
            self.hopping.name()
        )
    }
}

/// Spectra of samples `0..n_samples`, in sample order.
pub fn sample_spectra<E: SampleExecutor + ?Sized>(
    model: &AlloyModel,
    n_samples: usize,
    master_seed: u64,
    executor: &E,
) -> Result<Vec<Vec<f64>>> {
    executor
        .map_indexed(n_samples, |i| model.spectrum(master_seed, i as u64))
        .into_iter()
        .collect()
}

/// Mean and standard error of a per-sample statistic of the spectrum.
pub fn estimate_from_spectra<F: Fn(&[f64]) -> f64>(spectra: &[Vec<f64>], statistic: F) -> MeanEstimate {
    let values: Vec<f64> = spectra.iter().map(|s| statistic(s)).collect();
    MeanEstimate::from_samples(&values)
}

/// `E{Tr χ_{[lower, upper]}(H_{ω,L})}` by Monte Carlo.
pub fn mc_expected_count<E: SampleExecutor + ?Sized>(
    model: &AlloyModel,
    lower: f64,
    upper: f64,
    n_samples: usize,
    master_seed: u64,
    executor: &E,
) -> Result<MeanEstimate> {
    if n_samples < 2 {
        return Err(Error::TooFewSamples { got: n_samples, min: 2 });
    }
    let counts: Vec<Result<f64>> = executor.map_indexed(n_samples, |i| {
        let spectrum = model.spectrum(master_seed, i as u64)?;
        Ok(count_in_interval(&spectrum, lower, upper) as f64)
    });
    let counts: Vec<f64> = counts.into_iter().collect::<Result<_>>()?;
    Ok(MeanEstimate::from_samples(&counts))
}

/// Seed offset for pilot runs, so pilot samples never coincide with the
/// measured ones.
pub const PILOT_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// Median of the pooled eigenvalues of `n_pilot` samples drawn with
/// `master_seed + PILOT_SEED_OFFSET`.
pub fn pilot_median_energy<E: SampleExecutor + ?Sized>(
    model: &AlloyModel,
    n_pilot: usize,
    master_seed: u64,
    executor: &E,
) -> Result<f64> {
    if n_pilot == 0 {
        return Err(Error::TooFewSamples { got: 0, min: 1 });
    }
    let spectra = sample_spectra(model, n_pilot, master_seed.wrapping_add(PILOT_SEED_OFFSET), executor)?;
    let mut pooled: Vec<f64> = spectra.into_iter().flatten().collect();
    pooled.sort_by(f64::total_cmp);
    let mid = pooled.len() / 2;
    Ok(if pooled.len() % 2 == 1 {
        pooled[mid]
    } else {
        0.5 * (pooled[mid - 1] + pooled[mid])
    })
}
