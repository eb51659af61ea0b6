//! Pure state vectors.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

/// Amplitude vector of a pure state. Not necessarily normalized: the
/// vectorization maps keep `|Φ⁺⟩` unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::dim("state vector must be non-empty"));
        }
        if let Some(pos) = amplitudes.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::arg(format!("amplitude {pos} is not finite")));
        }
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_vec_unchecked(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Index(format!("basis index {index} >= dimension {dim}")));
        }
        let mut amplitudes = alloc::vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { amplitudes })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::arg("cannot normalize the zero vector"));
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { amplitudes: self.amplitudes.iter().map(|&z| z * s).collect() }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::dim(format!(
                "inner product of vectors of length {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, &b)| a.conj() * b).sum())
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::dim("distance between vectors of different length"));
        }
        let s: f64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(&a, &b)| (a - b).norm_sqr())
            .sum();
        Ok(libm::sqrt(s))
    }

    /// Tensor product `|self⟩ ⊗ |other⟩`, `self` as the slow index.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            out.extend(other.amplitudes.iter().map(|&b| a * b));
        }
        Self { amplitudes: out }
    }

    pub fn apply(&self, op: &ComplexMatrix) -> Result<Self> {
        Ok(Self { amplitudes: op.apply(&self.amplitudes)? })
    }

    /// Projector-like outer product `|self⟩⟨self|`.
    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}
