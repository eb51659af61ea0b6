//! Operators on a two-party space `C^dA ⊗ C^dB`.

use alloc::format;

use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::matrix::ComplexMatrix;

/// Square matrix on `C^dA ⊗ C^dB` with the A factor as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    matrix: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteOperator {
    pub fn new(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::dim("local dimensions must be positive"));
        }
        let n = dim_a
            .checked_mul(dim_b)
            .ok_or_else(|| Error::dim("dimA * dimB overflows"))?;
        if !matrix.is_square() || matrix.rows() != n {
            return Err(Error::dim(format!(
                "{}x{} matrix is not an operator on {dim_a}x{dim_b}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { matrix, dim_a, dim_b })
    }

    /// Operator on `C^d ⊗ C^d`.
    pub fn square(matrix: ComplexMatrix, d: usize) -> Result<Self> {
        Self::new(matrix, d, d)
    }

    /// `a ⊗ b`.
    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() || !b.is_square() {
            return Err(Error::dim("local factors must be square"));
        }
        Self::new(a.kron(b)?, a.rows(), b.rows())
    }

    pub fn identity(dim_a: usize, dim_b: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim_a * dim_b), dim_a, dim_b }
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    #[inline]
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    #[inline]
    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn layout(&self) -> SubsystemLayout {
        SubsystemLayout::new(alloc::vec![self.dim_a, self.dim_b]).expect("dimensions validated at construction")
    }

    /// Common local dimension, or an error when `dimA ≠ dimB`.
    pub fn local_dim(&self) -> Result<usize> {
        if self.dim_a != self.dim_b {
            return Err(Error::UnsupportedDimension(format!(
                "operation needs equal local dimensions, got {}x{}",
                self.dim_a, self.dim_b
            )));
        }
        Ok(self.dim_a)
    }

    pub fn hs_norm(&self) -> f64 {
        self.matrix.hs_norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.matrix.is_unitary(tol)
    }

    pub fn dagger(&self) -> Self {
        Self { matrix: self.matrix.dagger(), dim_a: self.dim_a, dim_b: self.dim_b }
    }

    /// `self · other`; both must share the same layout.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if (self.dim_a, self.dim_b) != (other.dim_a, other.dim_b) {
            return Err(Error::dim("composing operators with different layouts"));
        }
        Ok(Self { matrix: self.matrix.matmul(&other.matrix)?, dim_a: self.dim_a, dim_b: self.dim_b })
    }

    /// `x ⊗ x` on four factors `(A1, B1, A2, B2)`.
    pub fn doubled(&self) -> Result<ComplexMatrix> {
        self.matrix.kron(&self.matrix)
    }
}
