//! Tensor-factor bookkeeping: partial traces and factor permutations.
//!
//! Factor indices are zero-based and run left to right; the leftmost factor
//! is the slowest-varying digit of a composite index.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE};
use crate::state::StateVector;

/// Local dimensions of the tensor factors of a composite space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::dim("layout needs at least one factor"));
        }
        if dims.contains(&0) {
            return Err(Error::dim("local dimensions must be positive"));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::dim("total dimension overflows"))?;
        Ok(Self { dims })
    }

    /// `n` copies of the same local dimension.
    pub fn uniform(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Mixed-radix digits of a composite index.
    pub fn digits(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
    }

    pub fn compose(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    fn check_operator(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total_dim() {
            return Err(Error::dim(format!(
                "{}x{} operator does not match layout {:?} (dimension {})",
                m.rows(),
                m.cols(),
                self.dims,
                self.total_dim()
            )));
        }
        Ok(())
    }

    fn check_permutation(&self, perm: &[usize]) -> Result<()> {
        let n = self.num_factors();
        if perm.len() != n {
            return Err(Error::arg(format!("permutation of length {} for {n} factors", perm.len())));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::arg(format!("{perm:?} is not a permutation of 0..{n}")));
            }
            seen[p] = true;
        }
        Ok(())
    }

    /// Layout after moving factor `k` to position `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        self.check_permutation(perm)?;
        let mut dims = vec![0; self.dims.len()];
        for (k, &p) in perm.iter().enumerate() {
            dims[p] = self.dims[k];
        }
        Ok(Self { dims })
    }

    /// For each source index, the index it lands on after the permutation.
    fn index_map(&self, perm: &[usize]) -> Result<(Self, Vec<usize>)> {
        let target = self.permuted(perm)?;
        let n = self.num_factors();
        let mut src = vec![0; n];
        let mut dst = vec![0; n];
        let map = (0..self.total_dim())
            .map(|i| {
                self.digits(i, &mut src);
                for (k, &p) in perm.iter().enumerate() {
                    dst[p] = src[k];
                }
                target.compose(&dst)
            })
            .collect();
        Ok((target, map))
    }

    /// Moves factor `k` of a vector to position `perm[k]`. Dimensions travel
    /// with their factors, so the returned layout may differ from `self`.
    pub fn permute_vector(&self, v: &StateVector, perm: &[usize]) -> Result<(StateVector, Self)> {
        if v.dim() != self.total_dim() {
            return Err(Error::dim(format!(
                "vector of length {} does not match layout dimension {}",
                v.dim(),
                self.total_dim()
            )));
        }
        let (target, map) = self.index_map(perm)?;
        let mut out = vec![num_complex::Complex::new(0.0, 0.0); v.dim()];
        for (i, &z) in v.amplitudes().iter().enumerate() {
            out[map[i]] = z;
        }
        Ok((StateVector::from_vec_unchecked(out), target))
    }

    /// `P·op·P†` for the factor permutation `P`, computed by index relabeling.
    pub fn conjugate_by_permutation(&self, op: &ComplexMatrix, perm: &[usize]) -> Result<ComplexMatrix> {
        self.check_operator(op)?;
        let (_, map) = self.index_map(perm)?;
        let n = op.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out[(map[r], map[c])] = op[(r, c)];
            }
        }
        Ok(out)
    }

    /// Unitary 0/1 matrix moving factor `k` to position `perm[k]`.
    ///
    /// Permutations compose like functions: the operator of `p∘q` equals
    /// `P(p)·P(q)`. Each factor must land on a slot of the same dimension.
    pub fn permutation_operator(&self, perm: &[usize]) -> Result<ComplexMatrix> {
        self.check_permutation(perm)?;
        for (k, &p) in perm.iter().enumerate() {
            if self.dims[k] != self.dims[p] {
                return Err(Error::arg(format!(
                    "factor {k} (dim {}) cannot move to slot {p} (dim {})",
                    self.dims[k], self.dims[p]
                )));
            }
        }
        let (_, map) = self.index_map(perm)?;
        let n = self.total_dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (src, &dst) in map.iter().enumerate() {
            out[(dst, src)] = ONE;
        }
        Ok(out)
    }

    /// Operator exchanging factors `i` and `j`.
    pub fn transposition_operator(&self, i: usize, j: usize) -> Result<ComplexMatrix> {
        self.permutation_operator(&self.transposition(i, j)?)
    }

    pub fn transposition(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        let n = self.num_factors();
        if i >= n || j >= n {
            return Err(Error::Index(format!("factors ({i}, {j}) out of range for {n} factors")));
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, j);
        Ok(perm)
    }

    fn keep_mask(&self, keep: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.num_factors()];
        for &k in keep {
            if k >= self.num_factors() {
                return Err(Error::Index(format!(
                    "factor {k} out of range for {} factors",
                    self.num_factors()
                )));
            }
            mask[k] = true;
        }
        Ok(mask)
    }

    /// Traces out every factor not listed in `keep`. Kept factors stay in
    /// their original order; an empty `keep` yields the 1x1 scalar trace.
    pub fn partial_trace(&self, rho: &ComplexMatrix, keep: &[usize]) -> Result<ComplexMatrix> {
        self.check_operator(rho)?;
        let mask = self.keep_mask(keep)?;
        let kept = self.sub_layout(&mask, true);
        let gone = self.sub_layout(&mask, false);

        let n = self.total_dim();
        let nf = self.num_factors();
        let mut digits = vec![0; nf];
        let mut split: Vec<(usize, usize)> = Vec::with_capacity(n);
        let mut kd = Vec::with_capacity(nf);
        let mut gd = Vec::with_capacity(nf);
        for i in 0..n {
            self.digits(i, &mut digits);
            kd.clear();
            gd.clear();
            for (f, &x) in digits.iter().enumerate() {
                if mask[f] { kd.push(x) } else { gd.push(x) }
            }
            let k = if kd.is_empty() { 0 } else { kept.compose(&kd) };
            let g = if gd.is_empty() { 0 } else { gone.compose(&gd) };
            split.push((k, g));
        }

        let m = kept.total_dim();
        let mut out = ComplexMatrix::zeros(m, m);
        for r in 0..n {
            let (kr, gr) = split[r];
            for c in 0..n {
                let (kc, gc) = split[c];
                if gr == gc {
                    out[(kr, kc)] += rho[(r, c)];
                }
            }
        }
        Ok(out)
    }

    fn kept(&self, mask: &[bool], value: bool) -> Vec<usize> {
        self.dims.iter().zip(mask).filter(|(_, &m)| m == value).map(|(&d, _)| d).collect()
    }

    // Empty selections become a single trivial factor.
    fn sub_layout(&self, mask: &[bool], value: bool) -> Self {
        let dims = self.kept(mask, value);
        Self { dims: if dims.is_empty() { vec![1] } else { dims } }
    }

    /// Reduced density matrix `Tr_discarded |ψ⟩⟨ψ|` of a pure (possibly
    /// unnormalized) state, without forming the full projector.
    pub fn reduced_density(&self, psi: &StateVector, keep: &[usize]) -> Result<ComplexMatrix> {
        let mask = self.keep_mask(keep)?;
        let mut perm = vec![0; self.num_factors()];
        let mut slot = 0;
        for (f, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
            perm[f] = slot;
            slot += 1;
        }
        let kept_dim: usize = self.kept(&mask, true).iter().product();
        for (f, _) in mask.iter().enumerate().filter(|(_, &m)| !m) {
            perm[f] = slot;
            slot += 1;
        }
        let (moved, _) = self.permute_vector(psi, &perm)?;
        let rest = self.total_dim() / kept_dim;
        let a = moved.amplitudes();
        Ok(ComplexMatrix::from_fn(kept_dim, kept_dim, |i, j| {
            (0..rest).map(|k| a[i * rest + k] * a[j * rest + k].conj()).sum()
        }))
    }
}
