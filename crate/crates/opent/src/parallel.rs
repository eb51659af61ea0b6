//! Multi-threaded Monte-Carlo drivers.
//!
//! Sample `i` draws from `RandomSource::substream(seed, i)` and the values
//! are collected in index order before averaging, so every estimate here is
//! bit-identical to the sequential driver in `opent_core::random`.

use opent_core::random::{self, MonteCarloEstimate, RandomSource};
use opent_core::{epower, BipartiteOperator, Error, Result};
use rayon::prelude::*;

pub fn monte_carlo<F>(samples: usize, seed: u64, f: F) -> Result<MonteCarloEstimate>
where
    F: Fn(&mut RandomSource) -> Result<f64> + Sync,
{
    if samples < 2 {
        return Err(Error::Argument(format!("Monte-Carlo estimate needs at least 2 samples, got {samples}")));
    }
    let values = (0..samples as u64)
        .into_par_iter()
        .map(|i| f(&mut RandomSource::substream(seed, i)))
        .collect::<Result<Vec<f64>>>()?;
    MonteCarloEstimate::from_samples(&values, seed)
}

/// Mean of `E(U)` over Haar-random unitaries on `C^d ⊗ C^d`.
pub fn haar_average(d: usize, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    monte_carlo(samples, seed, |r| random::haar_entanglement_sample(d, r))
}

/// Mean of `E(X)` over operators uniform on the HS unit sphere.
pub fn generic_average(d: usize, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    monte_carlo(samples, seed, |r| random::generic_entanglement_sample(d, r))
}

/// Mean entanglement that `u` creates from Haar ⊗ Haar product inputs.
pub fn entangling_power(u: &BipartiteOperator, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    // Validates unitarity and dimensions before any sampling.
    epower::entangling_power(u)?;
    monte_carlo(samples, seed, |r| epower::product_state_sample(u, r))
}
