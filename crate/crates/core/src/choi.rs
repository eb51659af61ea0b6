//! Vectorization of operators and completely positive maps.
//!
//! A single-system operator `X` on `C^d` becomes `(X ⊗ 1)|Φ⁺⟩` with the
//! UNNORMALIZED `|Φ⁺⟩ = Σ_α |α α⟩`, an isometry from HS space onto `C^d ⊗ C^d`.
//! A bipartite operator becomes `(X_{13} ⊗ 1_{24}) |Φ⁺⟩ ⊗ |Φ⁺⟩` on four
//! factors laid out as
//!
//! ```text
//! factor:   0      1      2      3
//! role:   sysA   ancA   sysB   ancB
//! ```
//!
//! For two qubits the amplitude at index `8·i0 + 4·i1 + 2·i2 + i3` equals
//! `X[(i0, i2), (i1, i3)]`; e.g. the identity gives ones exactly at the indices
//! `0, 3, 12, 15` (`i0 = i1`, `i2 = i3`).

use alloc::format;
use alloc::vec::Vec;

use crate::bipartite::BipartiteOperator;
use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::linalg;
use crate::matrix::{ComplexMatrix, ONE, ZERO};
use crate::state::StateVector;

/// Factor order that brings the two system factors to the front:
/// `(sysA, ancA, sysB, ancB) -> (sysA, sysB, ancA, ancB)`. It is an involution.
const SYSTEMS_FIRST: [usize; 4] = [0, 2, 1, 3];

const TP_TOL: f64 = 1e-9;

/// `Σ_α |α⟩ ⊗ |α⟩`, norm `√d`.
pub fn phi_plus(d: usize) -> Result<StateVector> {
    if d == 0 {
        return Err(Error::dim("phi_plus needs d >= 1"));
    }
    let mut amps = alloc::vec![ZERO; d * d];
    for a in 0..d {
        amps[a * d + a] = ONE;
    }
    StateVector::new(amps)
}

/// `(X ⊗ 1)|Φ⁺⟩` for a `d x d` operator.
pub fn vectorize(x: &ComplexMatrix, d: usize) -> Result<StateVector> {
    if !x.is_square() || x.rows() != d {
        return Err(Error::dim(format!("vectorize expects {d}x{d}, got {}x{}", x.rows(), x.cols())));
    }
    phi_plus(d)?.apply(&x.kron(&ComplexMatrix::identity(d))?)
}

fn four_factor_layout(d: usize) -> Result<SubsystemLayout> {
    SubsystemLayout::uniform(d, 4)
}

/// `(X_{13} ⊗ 1_{24}) |ψ⟩` for a vector on the four-factor space.
pub fn apply_on_systems(x: &BipartiteOperator, psi: &StateVector) -> Result<StateVector> {
    let d = x.local_dim()?;
    let layout = four_factor_layout(d)?;
    let (moved, _) = layout.permute_vector(psi, &SYSTEMS_FIRST)?;
    // With the systems in front the vector is a d² x d² matrix M and the
    // action is X·M.
    let n = d * d;
    let m = ComplexMatrix::new(n, n, moved.into_vec())?;
    let acted = x.matrix().matmul(&m)?;
    let (back, _) = layout.permute_vector(&StateVector::new(acted.into_vec())?, &SYSTEMS_FIRST)?;
    Ok(back)
}

/// `|Ψ(X)⟩ = (X_{13} ⊗ 1_{24}) |Φ⁺⟩^{⊗2}`; requires `dimA = dimB`.
pub fn bipartite_vectorize(x: &BipartiteOperator) -> Result<StateVector> {
    let d = x.local_dim()?;
    let pp = phi_plus(d)?;
    apply_on_systems(x, &pp.tensor(&pp))
}

/// Operator entanglement evaluated on the vectorized operator: normalize
/// `|Ψ(X)⟩`, trace out `(sysB, ancB)`, and return `1 − tr ρ²`.
pub fn choi_linear_entanglement(x: &BipartiteOperator) -> Result<f64> {
    let psi = bipartite_vectorize(x)?;
    if psi.norm_sqr() == 0.0 {
        return Err(Error::arg("operator entanglement of the zero operator is undefined"));
    }
    let d = x.local_dim()?;
    let rho = four_factor_layout(d)?.reduced_density(&psi.normalized()?, &[0, 1])?;
    Ok(1.0 - rho.hs_norm_sqr())
}

/// Kraus representation `T(ρ) = Σ_i A_i ρ A_i†` of a map on `C^dA ⊗ C^dB`.
#[derive(Debug, Clone)]
pub struct KrausMap {
    kraus: Vec<ComplexMatrix>,
    dim_a: usize,
    dim_b: usize,
    trace_preserving: bool,
}

impl KrausMap {
    /// Validates shapes and, when `trace_preserving` is claimed,
    /// `‖Σ A_i†A_i − 1‖_HS ≤ 1e-9`.
    pub fn new(kraus: Vec<ComplexMatrix>, dim_a: usize, dim_b: usize, trace_preserving: bool) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::arg("a Kraus map needs at least one operator"));
        }
        let n = dim_a * dim_b;
        if let Some(i) = kraus.iter().position(|a| !a.is_square() || a.rows() != n) {
            return Err(Error::dim(format!(
                "Kraus operator {i} is {}x{}, expected {n}x{n}",
                kraus[i].rows(),
                kraus[i].cols()
            )));
        }
        let map = Self { kraus, dim_a, dim_b, trace_preserving };
        if trace_preserving {
            let defect = map.completeness_defect();
            if defect > TP_TOL {
                return Err(Error::arg(format!(
                    "map flagged trace-preserving but ‖Σ A†A − 1‖ = {defect:.3e}"
                )));
            }
        }
        Ok(map)
    }

    /// Single-Kraus map `ρ ↦ A ρ A†`.
    pub fn pure(a: &BipartiteOperator) -> Self {
        let tp = a.is_unitary(TP_TOL);
        Self { kraus: alloc::vec![a.matrix().clone()], dim_a: a.dim_a(), dim_b: a.dim_b(), trace_preserving: tp }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// `‖Σ A_i†A_i − 1‖_HS`.
    pub fn completeness_defect(&self) -> f64 {
        let n = self.dim_a * self.dim_b;
        let sum = self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, a| &acc + &(&a.dagger() * a));
        sum.distance(&ComplexMatrix::identity(n)).expect("same shape")
    }

    pub fn operators(&self) -> Result<Vec<BipartiteOperator>> {
        self.kraus.iter().map(|a| BipartiteOperator::new(a.clone(), self.dim_a, self.dim_b)).collect()
    }
}

/// `Σ_i |Ψ(A_i)⟩⟨Ψ(A_i)|` on the four-factor space, dimension `d⁴`.
#[derive(Debug, Clone)]
pub struct ChoiOperator {
    matrix: ComplexMatrix,
    local_dim: usize,
}

impl ChoiOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// Number of eigenvalues above `tol x (largest eigenvalue)`.
    pub fn rank(&self, tol: f64) -> Result<usize> {
        let ev = self.eigenvalues()?;
        let largest = ev.last().copied().unwrap_or(0.0).max(0.0);
        Ok(ev.iter().filter(|&&x| x > tol * largest).count())
    }
}

/// Choi operator of a Kraus map; requires `dimA = dimB`.
pub fn choi_of_map(t: &KrausMap) -> Result<ChoiOperator> {
    if t.dim_a != t.dim_b {
        return Err(Error::UnsupportedDimension(format!(
            "Choi operator needs equal local dimensions, got {}x{}",
            t.dim_a, t.dim_b
        )));
    }
    let d = t.dim_a;
    let n = d * d * d * d;
    let mut matrix = ComplexMatrix::zeros(n, n);
    for a in t.operators()? {
        let v = bipartite_vectorize(&a)?;
        matrix = &matrix + &v.density();
    }
    Ok(ChoiOperator { matrix, local_dim: d })
}

/// `tr(M²) / tr(M)²`; equals 1 exactly for rank-one (pure-map) Choi operators.
pub fn choi_purity(c: &ChoiOperator) -> Result<f64> {
    let tr = c.matrix.trace();
    if tr.norm() == 0.0 {
        return Err(Error::arg("Choi operator has zero trace"));
    }
    // M is Hermitian, so tr(M²) = ‖M‖²_HS.
    Ok(c.matrix.hs_norm_sqr() / tr.norm_sqr())
}

/// `|Ψ(X)⟩` written as the operator it vectorizes; handy for debugging the
/// four-factor layout.
pub fn unvectorize(psi: &StateVector, d: usize) -> Result<BipartiteOperator> {
    let n = d * d;
    if psi.dim() != n * n {
        return Err(Error::dim(format!("vector of length {} is not on ({d})^4", psi.dim())));
    }
    let a = psi.amplitudes();
    let m = ComplexMatrix::from_fn(n, n, |row, col| {
        let (i0, i2) = (row / d, row % d);
        let (i1, i3) = (col / d, col % d);
        a[((i0 * d + i1) * d + i2) * d + i3]
    });
    BipartiteOperator::square(m, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::schmidt;

    #[test]
    fn phi_plus_examples() {
        assert_eq!(phi_plus(1).unwrap().amplitudes(), &[ONE]);
        assert_eq!(phi_plus(2).unwrap(), StateVector::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap());
        for d in 2..=6 {
            let p = phi_plus(d).unwrap();
            assert_eq!(p.dim(), d * d);
            assert!((p.norm_sqr() - d as f64).abs() < 1e-15);
        }
        assert!(phi_plus(0).is_err());
    }

    #[test]
    fn vectorize_identity_is_phi_plus() {
        assert_eq!(vectorize(&ComplexMatrix::identity(3), 3).unwrap(), phi_plus(3).unwrap());
        assert!(vectorize(&ComplexMatrix::identity(3), 2).is_err());
    }

    #[test]
    fn bipartite_vectorize_identity_layout() {
        let v = bipartite_vectorize(&BipartiteOperator::identity(2, 2)).unwrap();
        let ones: Vec<usize> = v.amplitudes().iter().enumerate().filter(|(_, z)| **z == ONE).map(|(i, _)| i).collect();
        assert_eq!(ones, alloc::vec![0, 3, 12, 15]);
        assert!((v.norm_sqr() - 4.0).abs() < 1e-15);
        let pp = phi_plus(2).unwrap();
        assert_eq!(v, pp.tensor(&pp));
    }

    #[test]
    fn vectorization_round_trips_through_layout() {
        let x = gates::cnot();
        let v = bipartite_vectorize(&x).unwrap();
        assert_eq!(unvectorize(&v, 2).unwrap(), x);
        // And it is the flattened realignment.
        assert_eq!(v.amplitudes(), schmidt::reshuffle(&x).as_slice());
    }

    #[test]
    fn unequal_dims_are_unsupported() {
        let x = BipartiteOperator::identity(2, 3);
        assert!(matches!(bipartite_vectorize(&x), Err(Error::UnsupportedDimension(_))));
        let map = KrausMap::new(alloc::vec![ComplexMatrix::identity(6)], 2, 3, true).unwrap();
        assert!(matches!(choi_of_map(&map), Err(Error::UnsupportedDimension(_))));
    }

    #[test]
    fn identity_map_choi() {
        let map = KrausMap::new(alloc::vec![ComplexMatrix::identity(4)], 2, 2, true).unwrap();
        let c = choi_of_map(&map).unwrap();
        assert!((c.trace() - 4.0).abs() < 1e-12);
        assert_eq!(c.rank(1e-10).unwrap(), 1);
        assert!((choi_purity(&c).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_orthogonal_kraus_terms_have_purity_half() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let a = ComplexMatrix::identity(4).scale_real(s);
        let b = gates::pauli_z().kron(&ComplexMatrix::identity(2)).unwrap().scale_real(s);
        let map = KrausMap::new(alloc::vec![a, b], 2, 2, true).unwrap();
        let c = choi_of_map(&map).unwrap();
        assert!((choi_purity(&c).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(c.rank(1e-10).unwrap(), 2);
    }

    #[test]
    fn kraus_map_validation() {
        assert!(KrausMap::new(alloc::vec![], 2, 2, false).is_err());
        assert!(matches!(
            KrausMap::new(alloc::vec![ComplexMatrix::identity(3)], 2, 2, false),
            Err(Error::Dimension(_))
        ));
        let scaled = ComplexMatrix::identity(4).scale_real(2.0);
        assert!(KrausMap::new(alloc::vec![scaled.clone()], 2, 2, true).is_err());
        assert!(KrausMap::new(alloc::vec![scaled], 2, 2, false).is_ok());
    }

    #[test]
    fn zero_trace_purity_is_an_error() {
        let map = KrausMap::new(alloc::vec![ComplexMatrix::zeros(4, 4)], 2, 2, false).unwrap();
        let c = choi_of_map(&map).unwrap();
        assert!(choi_purity(&c).is_err());
    }

    #[test]
    fn choi_path_matches_known_values() {
        assert!((choi_linear_entanglement(&gates::cnot()).unwrap() - 0.5).abs() < 1e-12);
        assert!((choi_linear_entanglement(&gates::swap(3)).unwrap() - 8.0 / 9.0).abs() < 1e-12);
        assert!(choi_linear_entanglement(&BipartiteOperator::identity(2, 2)).unwrap().abs() < 1e-15);
    }
}
