//! Operator entanglement from the swap operator on two copies.
//!
//! `U^{⊗2}` acts on four factors `(A1, B1, A2, B2)` and `T₁₃` exchanges the
//! two A factors. Then
//!
//! ```text
//! E(U) = 1 − ⟨U^{⊗2}, T₁₃ U^{⊗2} T₁₃⟩ / ‖U‖⁴_HS
//!      = 2 N_d · tr[U^{⊗2} ρ₁₃⁺ U^{†⊗2} P₁₃⁻],     N_d = (d+1)/d,
//! ```
//!
//! where `P₁₃^± = (1 ± T₁₃)/2 ⊗ 1₂₄` and `ρ₁₃⁺ = 2 P₁₃⁺ / [d³(d+1)]`. The
//! second line is the success probability of a three-step experiment:
//! prepare `ρ₁₃⁺`, evolve by `U^{⊗2}`, project onto the antisymmetric sector
//! of `T₁₃`.

use alloc::format;
use alloc::vec::Vec;

use crate::bipartite::BipartiteOperator;
use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::matrix::{ComplexMatrix, C64};
use crate::state::StateVector;

/// Unitarity tolerance for inputs of the swap and protocol routes.
pub const UNITARY_TOL: f64 = 1e-8;

/// `(d + 1) / d`.
pub fn n_d(d: usize) -> f64 {
    (d as f64 + 1.0) / d as f64
}

/// `P₁₃^±` on `(C^d)^{⊗4}`.
#[derive(Debug, Clone)]
pub struct SymmetrizerPair {
    pub p_plus: ComplexMatrix,
    pub p_minus: ComplexMatrix,
    pub local_dim: usize,
}

/// Layout `(A1, B1, A2, B2)` of two copies of a bipartite operator.
fn doubled_layout(dim_a: usize, dim_b: usize) -> Result<SubsystemLayout> {
    SubsystemLayout::new(alloc::vec![dim_a, dim_b, dim_a, dim_b])
}

/// `T₁₃` exchanging the A factors of the two copies.
pub fn swap13(dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    doubled_layout(dim_a, dim_b)?.transposition_operator(0, 2)
}

pub fn symmetrizers(d: usize) -> Result<SymmetrizerPair> {
    if d < 2 {
        return Err(Error::arg("symmetrizers need d >= 2"));
    }
    let t = swap13(d, d)?;
    let id = ComplexMatrix::identity(t.rows());
    Ok(SymmetrizerPair {
        p_plus: (&id + &t).scale_real(0.5),
        p_minus: (&id - &t).scale_real(0.5),
        local_dim: d,
    })
}

/// Uniform state `ρ₁₃⁺ = 2 P₁₃⁺ / [d³(d+1)]` on the symmetric sector.
pub fn rho13_plus(d: usize) -> Result<ComplexMatrix> {
    let pair = symmetrizers(d)?;
    let df = d as f64;
    let rho = pair.p_plus.scale_real(2.0 / (df * df * df * (df + 1.0)));
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::Numerical(format!("ρ₁₃⁺ has trace {tr}, expected 1")));
    }
    Ok(rho)
}

/// `E(U) = 1 − ⟨U^{⊗2}, T₁₃ U^{⊗2} T₁₃⟩ / d⁴`, with `‖x‖⁴` replacing `d⁴`
/// for non-unitary input.
pub fn entanglement_via_swap(u: &BipartiteOperator) -> Result<f64> {
    let d = u.local_dim()?;
    let norm_sqr = u.matrix().hs_norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::arg("operator entanglement of the zero operator is undefined"));
    }
    let normalizer = if u.is_unitary(UNITARY_TOL) {
        let d2 = (d * d) as f64;
        d2 * d2
    } else {
        norm_sqr * norm_sqr
    };
    let w = u.doubled()?;
    let layout = doubled_layout(d, d)?;
    let twt = layout.conjugate_by_permutation(&w, &layout.transposition(0, 2)?)?;
    Ok(1.0 - w.hs_inner(&twt)?.re / normalizer)
}

/// Exact success probability together with the rescaled value `2 N_d p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolOutcome {
    pub probability: f64,
    pub rescaled_e: f64,
    pub n_d: f64,
}

/// Runs the prepare / evolve / project protocol as a dense expectation value.
pub fn protocol_outcome(u: &BipartiteOperator) -> Result<ProtocolOutcome> {
    let d = u.local_dim()?;
    if !u.is_unitary(UNITARY_TOL) {
        return Err(Error::arg("the measurement protocol needs a unitary evolution"));
    }
    // a) prepare
    let rho = rho13_plus(d)?;
    // b) evolve by U⊗U
    let w = u.doubled()?;
    let evolved = &(&w * &rho) * &w.dagger();
    // c) project onto the −1 eigenspace of T₁₃
    let p_minus = symmetrizers(d)?.p_minus;
    let probability = (&evolved * &p_minus).trace().re;
    let nd = n_d(d);
    Ok(ProtocolOutcome { probability, rescaled_e: 2.0 * nd * probability, n_d: nd })
}

pub fn protocol_probability(u: &BipartiteOperator) -> Result<f64> {
    Ok(protocol_outcome(u)?.probability)
}

/// `‖[T₁₃, x^{⊗2}]‖_HS ≤ tol·‖x‖²_HS`, which holds iff `x` is a product.
pub fn commutator_product_test(x: &BipartiteOperator, tol: f64) -> Result<bool> {
    let norm_sqr = x.matrix().hs_norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::arg("product test of the zero operator is undefined"));
    }
    let w = x.doubled()?;
    let t = swap13(x.dim_a(), x.dim_b())?;
    Ok(t.commutator(&w)?.hs_norm() <= tol * norm_sqr)
}

/// Product test for an N-party pure state: `(1 − T_{i,i+N}) |Φ⟩^{⊗2} = 0`
/// for every `i < N − 1`, within `tol·‖Φ‖²`.
pub fn product_state_test(phi: &StateVector, layout: &SubsystemLayout, tol: f64) -> Result<bool> {
    if phi.dim() != layout.total_dim() {
        return Err(Error::dim(format!(
            "state of length {} does not match layout {:?}",
            phi.dim(),
            layout.dims()
        )));
    }
    let n = layout.num_factors();
    let doubled = phi.tensor(phi);
    let dims: Vec<usize> = layout.dims().iter().chain(layout.dims()).copied().collect();
    let doubled_layout = SubsystemLayout::new(dims)?;
    let bound = tol * phi.norm_sqr();
    for i in 0..n.saturating_sub(1) {
        let perm = doubled_layout.transposition(i, i + n)?;
        let (swapped, _) = doubled_layout.permute_vector(&doubled, &perm)?;
        if doubled.distance(&swapped)? > bound {
            return Ok(false);
        }
    }
    Ok(true)
}
