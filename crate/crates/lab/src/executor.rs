use rayon::prelude::*;
use wegner_core::wegner::SampleExecutor;

/// Spreads samples over the rayon thread pool. Results come back in index
/// order, so output matches [`wegner_core::wegner::Sequential`] exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct Parallel;

impl SampleExecutor for Parallel {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).into_par_iter().map(f).collect()
    }
}
