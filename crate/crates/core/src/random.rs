//! Seeded Haar sampling and Monte-Carlo averaging.
//!
//! Every Monte-Carlo sample `i` draws from its own ChaCha8 stream derived
//! from `(seed, i)`, so estimates do not depend on evaluation order and a
//! parallel driver reproduces the sequential one bit for bit as long as it
//! sums in index order.

use alloc::format;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use crate::bipartite::BipartiteOperator;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{ComplexMatrix, C64};
use crate::schmidt;
use crate::state::StateVector;

/// Seeded random stream. Identical `(seed, stream)` pairs give identical draws.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent stream number `index` under the same seed.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { seed, stream: index, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn algorithm(&self) -> &'static str {
        Self::ALGORITHM
    }

    /// Standard complex Gaussian with independent `N(0, 1)` parts.
    pub fn complex_gaussian(&mut self) -> C64 {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        C64::new(re, im)
    }

    /// Uniform draw from `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre(rows: usize, cols: usize, rng: &mut RandomSource) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_gaussian())
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of the
/// diagonal of `R` divided out of `Q`.
pub fn haar_unitary(dim: usize, rng: &mut RandomSource) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::dim("haar_unitary needs dim >= 1"));
    }
    let (q, r) = linalg::qr(&ginibre(dim, dim, rng))?;
    let phases: Vec<C64> = (0..dim)
        .map(|j| {
            let rjj = r[(j, j)];
            let n = rjj.norm();
            if n == 0.0 { C64::new(1.0, 0.0) } else { rjj / n }
        })
        .collect();
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j]))
}

/// Unit vector uniform on the sphere of `C^dim`.
pub fn haar_state(dim: usize, rng: &mut RandomSource) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::dim("haar_state needs dim >= 1"));
    }
    StateVector::new((0..dim).map(|_| rng.complex_gaussian()).collect())?.normalized()
}

/// Operator uniform on the unit sphere of HS space over `C^dA ⊗ C^dB`.
pub fn random_hs_direction(dim_a: usize, dim_b: usize, rng: &mut RandomSource) -> Result<BipartiteOperator> {
    let n = dim_a * dim_b;
    if n == 0 {
        return Err(Error::dim("random_hs_direction needs positive dimensions"));
    }
    let g = ginibre(n, n, rng);
    let norm = g.hs_norm();
    BipartiteOperator::new(g.scale_real(1.0 / norm), dim_a, dim_b)
}

/// Haar-random local unitary `U₁ ⊗ U₂`.
pub fn haar_local_unitary(dim_a: usize, dim_b: usize, rng: &mut RandomSource) -> Result<BipartiteOperator> {
    let u1 = haar_unitary(dim_a, rng)?;
    let u2 = haar_unitary(dim_b, rng)?;
    BipartiteOperator::product(&u1, &u2)
}

/// Sample mean with its standard error `s / √n` (`s` the n−1 sample deviation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MonteCarloEstimate {
    /// Sums in slice order; callers keep index order for reproducibility.
    pub fn from_samples(values: &[f64], seed: u64) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::arg(format!("Monte-Carlo estimate needs at least 2 samples, got {n}")));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        Ok(Self { mean, stderr: libm::sqrt(var / n as f64), samples: n, seed })
    }

    /// `|mean − target| ≤ k·stderr`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        libm::fabs(self.mean - target) <= k * self.stderr
    }

    /// Combined standard error of the difference of two independent estimates.
    pub fn combined_stderr(&self, other: &Self) -> f64 {
        libm::sqrt(self.stderr * self.stderr + other.stderr * other.stderr)
    }
}

/// Sequential Monte-Carlo driver: sample `i` sees `RandomSource::substream(seed, i)`.
pub fn monte_carlo<F>(samples: usize, seed: u64, mut f: F) -> Result<MonteCarloEstimate>
where
    F: FnMut(&mut RandomSource) -> Result<f64>,
{
    if samples < 2 {
        return Err(Error::arg(format!("Monte-Carlo estimate needs at least 2 samples, got {samples}")));
    }
    let values = (0..samples as u64)
        .map(|i| f(&mut RandomSource::substream(seed, i)))
        .collect::<Result<Vec<f64>>>()?;
    MonteCarloEstimate::from_samples(&values, seed)
}

/// One draw of `E(U)` for Haar-random `U` on `C^d ⊗ C^d`.
pub fn haar_entanglement_sample(d: usize, rng: &mut RandomSource) -> Result<f64> {
    let u = BipartiteOperator::square(haar_unitary(d * d, rng)?, d)?;
    schmidt::linear_entanglement(&u)
}

/// One draw of `E(X)` for `X` uniform on the HS unit sphere.
pub fn generic_entanglement_sample(d: usize, rng: &mut RandomSource) -> Result<f64> {
    schmidt::linear_entanglement(&random_hs_direction(d, d, rng)?)
}

/// Haar average of `E`; its exact value is [`haar_average_exact`].
pub fn mc_average_operator_entanglement(d: usize, samples: usize, rng: &RandomSource) -> Result<MonteCarloEstimate> {
    monte_carlo(samples, rng.seed(), |r| haar_entanglement_sample(d, r))
}

/// Average of `E` over HS-sphere operators.
pub fn mc_average_generic_entanglement(d: usize, samples: usize, rng: &RandomSource) -> Result<MonteCarloEstimate> {
    monte_carlo(samples, rng.seed(), |r| generic_entanglement_sample(d, r))
}

/// `∫ dU E(U) = (d² − 1)/(d² + 1)` over the unitary group of `C^d ⊗ C^d`.
pub fn haar_average_exact(d: usize) -> f64 {
    let d2 = (d * d) as f64;
    (d2 - 1.0) / (d2 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = RandomSource::substream(7, 3);
        let mut b = RandomSource::substream(7, 3);
        let mut c = RandomSource::substream(7, 4);
        let xa: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..4).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
        assert_eq!(a.algorithm(), "chacha8");
    }

    #[test]
    fn dim_one_unitary_is_a_phase() {
        let mut rng = RandomSource::new(1);
        let u = haar_unitary(1, &mut rng).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = RandomSource::new(2);
        for dim in [2, 3, 4] {
            for _ in 0..1000 {
                assert!(haar_unitary(dim, &mut rng).unwrap().is_unitary(1e-10));
            }
        }
    }

    #[test]
    fn states_and_directions_are_normalized() {
        let mut rng = RandomSource::new(3);
        for _ in 0..200 {
            assert!((haar_state(5, &mut rng).unwrap().norm() - 1.0).abs() < 1e-12);
            let x = random_hs_direction(2, 3, &mut rng).unwrap();
            assert!((x.hs_norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn estimate_requires_two_samples() {
        assert!(MonteCarloEstimate::from_samples(&[1.0], 0).is_err());
        assert!(monte_carlo(1, 0, |_| Ok(0.0)).is_err());
        let e = MonteCarloEstimate::from_samples(&[1.0, 3.0], 9).unwrap();
        assert_eq!(e.mean, 2.0);
        // s = √2, stderr = √2/√2 = 1
        assert!((e.stderr - 1.0).abs() < 1e-15);
        assert_eq!((e.samples, e.seed), (2, 9));
    }

    #[test]
    fn two_sample_estimate_is_reproducible() {
        let src = RandomSource::new(11);
        let a = mc_average_operator_entanglement(2, 2, &src).unwrap();
        let b = mc_average_operator_entanglement(2, 2, &src).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn exact_haar_average() {
        assert!((haar_average_exact(2) - 0.6).abs() < 1e-15);
        assert!((haar_average_exact(3) - 0.8).abs() < 1e-15);
    }
}
