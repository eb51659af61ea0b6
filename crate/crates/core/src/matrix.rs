//! Dense complex matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense row-major complex matrix. Every entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dim("matrix dimensions must be positive"));
        }
        let expected = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::dim("rows * cols overflows"))?;
        if entries.len() != expected {
            return Err(Error::dim(format!(
                "{rows}x{cols} matrix needs {expected} entries, got {}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::arg(format!("entry {pos} is not finite")));
        }
        Ok(Self { rows, cols, data: entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    /// Real-valued convenience constructor, mostly for fixed gates and tests.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).sum()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::dim(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    fn check_same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(format!(
                "{what}: shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Hilbert–Schmidt inner product `tr(self† · other)`, conjugate-linear in
    /// `self`.
    pub fn hs_inner(&self, other: &Self) -> Result<C64> {
        self.check_same_shape(other, "hs_inner")?;
        Ok(self.data.iter().zip(&other.data).map(|(a, &b)| a.conj() * b).sum())
    }

    pub fn hs_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hs_norm(&self) -> f64 {
        libm::sqrt(self.hs_norm_sqr())
    }

    /// `‖self − other‖_HS`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other, "distance")?;
        let s: f64 = self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).norm_sqr()).sum();
        Ok(libm::sqrt(s))
    }

    /// Kronecker product with `self` as the slow index:
    /// `(a⊗b)[(i,k),(j,l)] = a[i,j]·b[k,l]`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let overflow = || Error::dim("kron: product dimension overflows");
        let rows = self.rows.checked_mul(other.rows).ok_or_else(overflow)?;
        let cols = self.cols.checked_mul(other.cols).ok_or_else(overflow)?;
        rows.checked_mul(cols).ok_or_else(overflow)?;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..self.rows {
            for k in 0..other.rows {
                for j in 0..self.cols {
                    let a = self.data[i * self.cols + j];
                    data.extend(other.row(k).iter().map(|&b| a * b));
                }
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.matmul(other)?.try_sub(&other.matmul(self)?)
    }

    /// `‖a†a − I‖_HS ≤ tol`. Non-square input is never unitary.
    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let gram = &self.dagger() * self;
        gram.distance(&Self::identity(self.rows)).is_ok_and(|d| d <= tol)
    }

    /// `‖a − a†‖_HS ≤ tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.distance(&self.dagger()).is_ok_and(|d| d <= tol)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// The operator forms panic on shape mismatch; fallible callers use
// `matmul`/`try_add`/`try_sub`.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(ComplexMatrix::new(2, 2, vec![ONE; 3]), Err(Error::Dimension(_))));
        assert!(matches!(ComplexMatrix::new(0, 2, vec![]), Err(Error::Dimension(_))));
        let nan = vec![ONE, c(f64::NAN, 0.0), ONE, ONE];
        assert!(matches!(ComplexMatrix::new(2, 2, nan), Err(Error::Argument(_))));
        let inf = vec![ONE, c(0.0, f64::INFINITY)];
        assert!(ComplexMatrix::new(1, 2, inf).is_err());
    }

    #[test]
    fn kron_identities_and_paulis() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), ComplexMatrix::identity(4));
        let zz = sigma_z().kron(&sigma_z()).unwrap();
        let expected = ComplexMatrix::from_diag(&[ONE, -ONE, -ONE, ONE]);
        assert_eq!(zz, expected);
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = ComplexMatrix::from_fn(2, 3, |i, j| c(i as f64 + 0.5, j as f64 - 1.0));
        let b = ComplexMatrix::from_fn(3, 2, |i, j| c((i * j) as f64, 1.0 + i as f64));
        let k = a.kron(&b).unwrap();
        assert_eq!((k.rows(), k.cols()), (6, 6));
        for i in 0..2 {
            for kk in 0..3 {
                for j in 0..3 {
                    for l in 0..2 {
                        assert_eq!(k[(i * 3 + kk, j * 2 + l)], a[(i, j)] * b[(kk, l)]);
                    }
                }
            }
        }
    }

    #[test]
    fn hs_inner_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(i3.hs_inner(&i3).unwrap(), c(3.0, 0.0));
        // tr(σx σz) = 0 by hand: σxσz = [[0,-1],[1,0]].
        assert_eq!(sigma_x().hs_inner(&sigma_z()).unwrap(), ZERO);
        assert!(matches!(
            i3.hs_inner(&ComplexMatrix::identity(2)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn dagger_examples() {
        let i4 = ComplexMatrix::identity(4);
        assert_eq!(i4.dagger(), i4);
        let d = ComplexMatrix::from_diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
        assert_eq!(d.dagger(), ComplexMatrix::from_diag(&[c(0.0, -1.0), c(0.0, 1.0)]));
        let r = ComplexMatrix::from_fn(2, 3, |i, j| c(i as f64, j as f64 + 1.0));
        assert_eq!(r.dagger().dagger(), r);
    }

    #[test]
    fn unitarity_checks() {
        assert!(ComplexMatrix::identity(4).is_unitary(1e-10));
        assert!(!ComplexMatrix::identity(4).scale_real(2.0).is_unitary(1e-10));
        assert!(!ComplexMatrix::zeros(2, 3).is_unitary(1e-10));
        assert!(sigma_x().is_unitary(1e-12));
    }

    #[test]
    fn matmul_shape_error() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(a.matmul(&a).is_err());
        assert!(a.apply(&[ONE; 2]).is_err());
    }

    #[test]
    fn commutator_of_paulis() {
        // [σx, σz] = -2iσy = [[0,-2],[2,0]]
        let comm = sigma_x().commutator(&sigma_z()).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.0, -2.0, 2.0, 0.0]).unwrap();
        assert_eq!(comm, expected);
    }
}
