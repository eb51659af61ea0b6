//! Operator Schmidt decomposition and the linear-entropy operator entanglement.
//!
//! A bipartite operator is realigned into a `dA² x dB²` matrix whose singular
//! values are its operator Schmidt coefficients. With `p_k = λ_k² / ‖X‖²_HS`
//! the operator entanglement is `E(X) = 1 − Σ p_k²`, the linear entropy of the
//! reduced state of the vectorized operator. `E` is scale invariant, so
//! non-unitary operators are normalized internally.

use alloc::format;
use alloc::vec::Vec;

use crate::bipartite::BipartiteOperator;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{ComplexMatrix, C64};

/// `Σ_k λ_k e_k ⊗ f_k` with HS-orthonormal `e_k` (dA x dA) and `f_k` (dB x dB).
#[derive(Debug, Clone)]
pub struct OperatorSchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_ops: Vec<ComplexMatrix>,
    pub right_ops: Vec<ComplexMatrix>,
    pub source_norm: f64,
    dim_a: usize,
    dim_b: usize,
}

impl OperatorSchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// `Σ_k λ_k e_k ⊗ f_k`.
    pub fn reconstruct(&self) -> Result<BipartiteOperator> {
        let n = self.dim_a * self.dim_b;
        let mut sum = ComplexMatrix::zeros(n, n);
        for ((&lambda, e), f) in self.coefficients.iter().zip(&self.left_ops).zip(&self.right_ops) {
            sum = sum.try_add(&e.kron(f)?.scale_real(lambda))?;
        }
        BipartiteOperator::new(sum, self.dim_a, self.dim_b)
    }
}

/// Spectrum-derived entanglement quantities of a bipartite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub linear_entropy: f64,
    /// Natural-log entropy of the Schmidt probabilities.
    pub von_neumann_entropy: f64,
    pub schmidt_rank: usize,
    pub schmidt_probabilities: Vec<f64>,
}

/// Realignment `R[(a,c),(b,d)] = x[(a,b),(c,d)]`, a `dA² x dB²` matrix.
///
/// Row-major flattening of `R` is exactly the vectorized operator on the
/// four-factor space `(sysA, ancA, sysB, ancB)`.
pub fn reshuffle(x: &BipartiteOperator) -> ComplexMatrix {
    let (da, db) = (x.dim_a(), x.dim_b());
    let m = x.matrix();
    ComplexMatrix::from_fn(da * da, db * db, |row, col| {
        let (a, c) = (row / da, row % da);
        let (b, d) = (col / db, col % db);
        m[(a * db + b, c * db + d)]
    })
}

fn nonzero(x: &BipartiteOperator) -> Result<f64> {
    let norm_sqr = x.matrix().hs_norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::arg("operator entanglement of the zero operator is undefined"));
    }
    Ok(norm_sqr)
}

/// All operator Schmidt coefficients (singular values of the realignment),
/// descending, including numerically zero ones.
pub fn schmidt_spectrum(x: &BipartiteOperator) -> Result<Vec<f64>> {
    linalg::singular_values(&reshuffle(x))
}

/// Operator Schmidt decomposition keeping coefficients above
/// `tol x (largest coefficient)`.
pub fn operator_schmidt(x: &BipartiteOperator, tol: f64) -> Result<OperatorSchmidtDecomposition> {
    let (da, db) = (x.dim_a(), x.dim_b());
    let svd = linalg::svd(&reshuffle(x))?;
    let largest = svd.singular_values.first().copied().unwrap_or(0.0);
    let mut out = OperatorSchmidtDecomposition {
        coefficients: Vec::new(),
        left_ops: Vec::new(),
        right_ops: Vec::new(),
        source_norm: x.hs_norm(),
        dim_a: da,
        dim_b: db,
    };
    for (k, &lambda) in svd.singular_values.iter().enumerate() {
        if largest == 0.0 || lambda <= tol * largest {
            break;
        }
        let u = svd.u.column(k);
        let v = svd.v.column(k);
        out.coefficients.push(lambda);
        out.left_ops.push(ComplexMatrix::new(da, da, u)?);
        out.right_ops.push(ComplexMatrix::new(db, db, v.into_iter().map(|z| z.conj()).collect())?);
    }
    Ok(out)
}

/// Schmidt probabilities `λ_k² / Σ λ²` from a coefficient list.
pub fn schmidt_probabilities(coefficients: &[f64]) -> Vec<f64> {
    let total: f64 = coefficients.iter().map(|l| l * l).sum();
    coefficients.iter().map(|l| l * l / total).collect()
}

/// `1 − Σ p_k²`.
pub fn linear_entropy_of(probabilities: &[f64]) -> f64 {
    1.0 - probabilities.iter().map(|p| p * p).sum::<f64>()
}

/// `−Σ p_k ln p_k` with `0·ln 0 = 0`.
pub fn von_neumann_entropy_of(probabilities: &[f64]) -> f64 {
    -probabilities.iter().filter(|&&p| p > 0.0).map(|&p| p * libm::log(p)).sum::<f64>()
}

/// Linear-entropy operator entanglement `E(x)`.
pub fn linear_entanglement(x: &BipartiteOperator) -> Result<f64> {
    nonzero(x)?;
    Ok(linear_entropy_of(&schmidt_probabilities(&schmidt_spectrum(x)?)))
}

pub fn von_neumann_entanglement(x: &BipartiteOperator) -> Result<f64> {
    nonzero(x)?;
    Ok(von_neumann_entropy_of(&schmidt_probabilities(&schmidt_spectrum(x)?)))
}

/// Number of Schmidt coefficients above `tol x (largest coefficient)`.
pub fn schmidt_rank(x: &BipartiteOperator, tol: f64) -> Result<usize> {
    let spectrum = schmidt_spectrum(x)?;
    let largest = spectrum.first().copied().unwrap_or(0.0);
    Ok(spectrum.iter().filter(|&&s| s > tol * largest).count())
}

/// `x = A ⊗ B` up to the relative rank tolerance.
pub fn is_product_operator(x: &BipartiteOperator, tol: f64) -> Result<bool> {
    nonzero(x)?;
    Ok(schmidt_rank(x, tol)? == 1)
}

pub fn entanglement_report(x: &BipartiteOperator, tol: f64) -> Result<EntanglementReport> {
    nonzero(x)?;
    let spectrum = schmidt_spectrum(x)?;
    let all = schmidt_probabilities(&spectrum);
    let largest = spectrum.first().copied().unwrap_or(0.0);
    let rank = spectrum.iter().filter(|&&s| s > tol * largest).count();
    Ok(EntanglementReport {
        linear_entropy: linear_entropy_of(&all),
        von_neumann_entropy: von_neumann_entropy_of(&all),
        schmidt_rank: rank,
        schmidt_probabilities: all[..rank].to_vec(),
    })
}

/// Largest possible `E` on `C^dA ⊗ C^dB`: `1 − 1/min(dA², dB²)`.
pub fn max_linear_entanglement(dim_a: usize, dim_b: usize) -> f64 {
    let m = dim_a.min(dim_b) as f64;
    1.0 - 1.0 / (m * m)
}

const BUILDER_TOL: f64 = 1e-9;

/// Controlled unitary `Σ_α Π_α ⊗ U_α` for a resolution of the identity into
/// orthogonal projectors and pairwise HS-orthogonal unitaries.
pub fn controlled_unitary(projectors: &[ComplexMatrix], unitaries: &[ComplexMatrix]) -> Result<BipartiteOperator> {
    if projectors.is_empty() {
        return Err(Error::arg("controlled_unitary: no projectors given"));
    }
    if projectors.len() != unitaries.len() {
        return Err(Error::arg(format!(
            "controlled_unitary: {} projectors but {} unitaries",
            projectors.len(),
            unitaries.len()
        )));
    }
    let da = projectors[0].rows();
    let db = unitaries[0].rows();
    for (alpha, p) in projectors.iter().enumerate() {
        if !p.is_square() || p.rows() != da {
            return Err(Error::arg(format!("controlled_unitary: projector {alpha} is not {da}x{da}")));
        }
        if !p.is_hermitian(BUILDER_TOL) {
            return Err(Error::arg(format!("controlled_unitary: projector {alpha} is not Hermitian")));
        }
        if (&(p * p) - p).hs_norm() > BUILDER_TOL {
            return Err(Error::arg(format!("controlled_unitary: projector {alpha} is not idempotent")));
        }
        for (beta, q) in projectors.iter().enumerate().skip(alpha + 1) {
            if (p * q).hs_norm() > BUILDER_TOL {
                return Err(Error::arg(format!(
                    "controlled_unitary: projectors {alpha} and {beta} are not orthogonal"
                )));
            }
        }
    }
    let sum = projectors.iter().skip(1).fold(projectors[0].clone(), |acc, p| &acc + p);
    if sum.distance(&ComplexMatrix::identity(da))? > BUILDER_TOL {
        return Err(Error::arg("controlled_unitary: projectors do not sum to the identity"));
    }
    for (alpha, u) in unitaries.iter().enumerate() {
        if !u.is_square() || u.rows() != db {
            return Err(Error::arg(format!("controlled_unitary: unitary {alpha} is not {db}x{db}")));
        }
        if !u.is_unitary(BUILDER_TOL) {
            return Err(Error::arg(format!("controlled_unitary: operator {alpha} is not unitary")));
        }
        for (beta, v) in unitaries.iter().enumerate().skip(alpha + 1) {
            if u.hs_inner(v)?.norm() > BUILDER_TOL * db as f64 {
                return Err(Error::arg(format!(
                    "controlled_unitary: unitaries {alpha} and {beta} are not HS-orthogonal"
                )));
            }
        }
    }
    let n = da * db;
    let mut total = ComplexMatrix::zeros(n, n);
    for (p, u) in projectors.iter().zip(unitaries) {
        total = &total + &p.kron(u)?;
    }
    BipartiteOperator::new(total, da, db)
}

/// Closed form `E = 1 − (1/d²) Σ_α |tr Π_α|²` for a controlled unitary with
/// orthogonal target unitaries; `d` is the control dimension.
pub fn controlled_unitary_closed_form(projectors: &[ComplexMatrix]) -> f64 {
    let d = projectors.first().map_or(1, |p| p.rows()) as f64;
    1.0 - projectors.iter().map(|p| p.trace().norm_sqr()).sum::<f64>() / (d * d)
}

/// `exp(iθ σz⊗σz) = cos θ·I + i sin θ·σz⊗σz` on two qubits.
pub fn exp_zz(theta: f64) -> BipartiteOperator {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let plus = C64::new(c, s);
    let minus = C64::new(c, -s);
    BipartiteOperator::square(ComplexMatrix::from_diag(&[plus, minus, minus, plus]), 2)
        .expect("4x4 operator on 2x2")
}

/// `E(exp(iθ σz⊗σz)) = sin²(2θ)/2`.
pub fn exp_zz_closed_form(theta: f64) -> f64 {
    let s = libm::sin(2.0 * theta);
    0.5 * s * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::matrix::{ONE, ZERO};

    fn op(m: ComplexMatrix, d: usize) -> BipartiteOperator {
        BipartiteOperator::square(m, d).unwrap()
    }

    #[test]
    fn swap_realigns_to_identity_pattern() {
        // SWAP[(a,b),(c,d)] = δ_ad δ_bc, so R[(a,c),(b,d)] = δ_ad δ_bc, which is
        // the 4x4 permutation matrix pairing (a,c) with (c,a): four unit
        // singular values.
        let r = reshuffle(&gates::swap(2));
        assert_eq!(r, gates::swap(2).into_matrix());
        let s = linalg::singular_values(&r).unwrap();
        for x in s {
            assert!((x - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn swap_has_maximal_entanglement() {
        for d in 2..=4 {
            let s = gates::swap(d);
            let expected = 1.0 - 1.0 / (d * d) as f64;
            assert!((linear_entanglement(&s).unwrap() - expected).abs() < 1e-10);
            assert_eq!(schmidt_rank(&s, 1e-10).unwrap(), d * d);
            let vn = von_neumann_entanglement(&s).unwrap();
            assert!((vn - 2.0 * libm::log(d as f64)).abs() < 1e-10);
            let dec = operator_schmidt(&s, 1e-10).unwrap();
            assert!(dec.coefficients.iter().all(|&l| (l - 1.0).abs() < 1e-10));
        }
    }

    #[test]
    fn cnot_values() {
        let cnot = gates::cnot();
        assert!((linear_entanglement(&cnot).unwrap() - 0.5).abs() < 1e-12);
        assert!((von_neumann_entanglement(&cnot).unwrap() - core::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(schmidt_rank(&cnot, 1e-10).unwrap(), 2);
        assert!(!is_product_operator(&cnot, 1e-10).unwrap());
        let dec = operator_schmidt(&cnot, 1e-10).unwrap();
        for l in &dec.coefficients {
            assert!((l - core::f64::consts::SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_is_product() {
        let id = BipartiteOperator::identity(2, 2);
        assert!(is_product_operator(&id, 1e-10).unwrap());
        assert_eq!(linear_entanglement(&id).unwrap(), 0.0);
        assert_eq!(von_neumann_entanglement(&id).unwrap(), 0.0);
        let dec = operator_schmidt(&id, 1e-10).unwrap();
        assert_eq!(dec.rank(), 1);
        assert!((dec.coefficients[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_operator_is_rejected() {
        let z = op(ComplexMatrix::zeros(4, 4), 2);
        assert!(matches!(linear_entanglement(&z), Err(Error::Argument(_))));
        assert!(matches!(von_neumann_entanglement(&z), Err(Error::Argument(_))));
        assert!(matches!(is_product_operator(&z, 1e-10), Err(Error::Argument(_))));
        assert_eq!(operator_schmidt(&z, 1e-10).unwrap().rank(), 0);
    }

    #[test]
    fn unequal_local_dimensions() {
        // A 2x3 product has one term; a rank-2 sum of products has two.
        let a = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        let b = ComplexMatrix::identity(3);
        let prod = BipartiteOperator::product(&a, &b).unwrap();
        assert_eq!(schmidt_rank(&prod, 1e-10).unwrap(), 1);
        let z2 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let z3 = ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let sum = &prod.matrix().clone() + &z2.kron(&z3).unwrap();
        let x = BipartiteOperator::new(sum, 2, 3).unwrap();
        assert_eq!(schmidt_rank(&x, 1e-10).unwrap(), 2);
        let dec = operator_schmidt(&x, 1e-10).unwrap();
        assert!(dec.reconstruct().unwrap().matrix().distance(x.matrix()).unwrap() < 1e-12);
        let e = linear_entanglement(&x).unwrap();
        assert!(e > 0.0 && e <= max_linear_entanglement(2, 3));
    }

    #[test]
    fn exp_zz_closed_form_points() {
        for (theta, expected) in [
            (0.0, 0.0),
            (core::f64::consts::FRAC_PI_8, 0.25),
            (core::f64::consts::FRAC_PI_4, 0.5),
            (core::f64::consts::FRAC_PI_2, 0.0),
        ] {
            let u = exp_zz(theta);
            assert!(u.is_unitary(1e-12));
            assert!((exp_zz_closed_form(theta) - expected).abs() < 1e-15);
            assert!((linear_entanglement(&u).unwrap() - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn cnot_as_controlled_unitary() {
        let p0 = ComplexMatrix::from_diag(&[ONE, ZERO]);
        let p1 = ComplexMatrix::from_diag(&[ZERO, ONE]);
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let u = controlled_unitary(&[p0.clone(), p1.clone()], &[ComplexMatrix::identity(2), x]).unwrap();
        assert_eq!(u, gates::cnot());
        assert!((controlled_unitary_closed_form(&[p0, p1]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn controlled_unitary_extremes() {
        let d = 3;
        let u1 = gates::clock(d);
        let trivial = controlled_unitary(&[ComplexMatrix::identity(d)], &[u1]).unwrap();
        assert!(linear_entanglement(&trivial).unwrap().abs() < 1e-12);
        assert_eq!(controlled_unitary_closed_form(&[ComplexMatrix::identity(d)]), 0.0);

        let projectors: Vec<_> = (0..d)
            .map(|k| ComplexMatrix::from_fn(d, d, |i, j| if i == k && j == k { ONE } else { ZERO }))
            .collect();
        let unitaries: Vec<_> = (0..d).map(|k| gates::shift_power(d, k)).collect();
        let u = controlled_unitary(&projectors, &unitaries).unwrap();
        let expected = 1.0 - 1.0 / d as f64;
        assert!((controlled_unitary_closed_form(&projectors) - expected).abs() < 1e-15);
        assert!((linear_entanglement(&u).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn controlled_unitary_rejects_bad_input() {
        let p0 = ComplexMatrix::from_diag(&[ONE, ZERO]);
        let p1 = ComplexMatrix::from_diag(&[ZERO, ONE]);
        let id = ComplexMatrix::identity(2);
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let msg = |r: Result<BipartiteOperator>| match r {
            Err(Error::Argument(m)) => m,
            other => panic!("expected argument error, got {other:?}"),
        };
        assert!(msg(controlled_unitary(&[p0.clone()], &[id.clone(), x.clone()])).contains("projectors but"));
        assert!(msg(controlled_unitary(&[p0.clone(), p0.clone()], &[id.clone(), x.clone()])).contains("orthogonal"));
        assert!(msg(controlled_unitary(&[p0.clone()], &[id.clone()])).contains("sum to the identity"));
        assert!(msg(controlled_unitary(&[p0.clone(), p1.clone()], &[id.clone(), id.clone()])).contains("HS-orthogonal"));
        assert!(msg(controlled_unitary(&[p0.clone(), p1.clone()], &[id.scale_real(2.0), x.clone()])).contains("not unitary"));
        let half = ComplexMatrix::from_diag(&[C64::new(0.5, 0.0), ZERO]);
        assert!(msg(controlled_unitary(&[half, p1], &[id, x])).contains("idempotent"));
    }

    #[test]
    fn entropy_helpers() {
        assert_eq!(von_neumann_entropy_of(&[1.0, 0.0]), 0.0);
        assert!((linear_entropy_of(&[0.5, 0.5]) - 0.5).abs() < 1e-15);
        let p = schmidt_probabilities(&[3.0, 4.0]);
        assert!((p[0] - 9.0 / 25.0).abs() < 1e-15 && (p[1] - 16.0 / 25.0).abs() < 1e-15);
    }
}
