//! Entangling power: mean linear entropy that a unitary creates from
//! Haar-random product inputs.
//!
//! With `S` the swap and `N_d = (d+1)/d`,
//! `e_p(U) = N_d⁻² [E(U) + E(U·S) − E(S)] ≤ (d−1)/(d+1)`.

use alloc::format;

use crate::bipartite::BipartiteOperator;
use crate::error::{Error, Result};
use crate::gates;
use crate::layout::SubsystemLayout;
use crate::protocol::{n_d, UNITARY_TOL};
use crate::random::{self, MonteCarloEstimate, RandomSource};
use crate::schmidt::{self, linear_entanglement};
use crate::state::StateVector;

/// Default tolerance of the optimality test.
pub const OPTIMALITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglingPowerReport {
    pub ep: f64,
    pub e_u: f64,
    pub e_us: f64,
    /// `1 − 1/d²`, evaluated analytically.
    pub e_s: f64,
    pub bound: f64,
    pub optimal: bool,
    pub local_dim: usize,
}

/// `(d − 1)/(d + 1)`.
pub fn ep_bound(d: usize) -> f64 {
    let df = d as f64;
    (df - 1.0) / (df + 1.0)
}

fn checked_unitary(u: &BipartiteOperator) -> Result<usize> {
    let d = u.local_dim()?;
    if !u.is_unitary(UNITARY_TOL) {
        return Err(Error::arg("entangling power is defined for unitaries only"));
    }
    Ok(d)
}

fn e_and_es(u: &BipartiteOperator, d: usize) -> Result<(f64, f64)> {
    let e_u = linear_entanglement(u)?;
    let e_us = linear_entanglement(&u.compose(&gates::swap(d))?)?;
    Ok((e_u, e_us))
}

pub fn entangling_power(u: &BipartiteOperator) -> Result<EntanglingPowerReport> {
    let d = checked_unitary(u)?;
    let (e_u, e_us) = e_and_es(u, d)?;
    let e_s = schmidt::max_linear_entanglement(d, d);
    let nd = n_d(d);
    Ok(EntanglingPowerReport {
        ep: (e_u + e_us - e_s) / (nd * nd),
        e_u,
        e_us,
        e_s,
        bound: ep_bound(d),
        optimal: optimal_from(e_u, e_us, e_s, OPTIMALITY_TOL),
        local_dim: d,
    })
}

fn optimal_from(e_u: f64, e_us: f64, e_s: f64, tol: f64) -> bool {
    libm::fabs(e_u - e_s) <= tol && libm::fabs(e_us - e_s) <= tol
}

/// `E(U) = E(U·S) = E(S)` within `tol`: the entangling-power bound is met.
pub fn is_optimal(u: &BipartiteOperator, tol: f64) -> Result<bool> {
    let d = checked_unitary(u)?;
    let (e_u, e_us) = e_and_es(u, d)?;
    Ok(optimal_from(e_u, e_us, schmidt::max_linear_entanglement(d, d), tol))
}

/// `1 − tr ρ₁²` of a normalized pure state on `C^d ⊗ C^d`.
pub fn state_linear_entropy(psi: &StateVector, d: usize) -> Result<f64> {
    if psi.dim() != d * d {
        return Err(Error::dim(format!("state of length {} is not on C^{d} ⊗ C^{d}", psi.dim())));
    }
    let norm_sqr = psi.norm_sqr();
    if libm::fabs(norm_sqr - 1.0) > 1e-8 {
        return Err(Error::arg(format!("state is not normalized (‖ψ‖² = {norm_sqr})")));
    }
    let rho = SubsystemLayout::uniform(d, 2)?.reduced_density(psi, &[0])?;
    Ok(1.0 - rho.hs_norm_sqr())
}

/// One draw of `E(U |ψ₁⟩|ψ₂⟩)` with independent Haar-random local states.
pub fn product_state_sample(u: &BipartiteOperator, rng: &mut RandomSource) -> Result<f64> {
    let d = u.local_dim()?;
    let psi1 = random::haar_state(d, rng)?;
    let psi2 = random::haar_state(d, rng)?;
    state_linear_entropy(&psi1.tensor(&psi2).apply(u.matrix())?, d)
}

/// Monte-Carlo entangling power over Haar ⊗ Haar product inputs.
pub fn mc_entangling_power(u: &BipartiteOperator, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    checked_unitary(u)?;
    random::monte_carlo(samples, seed, |rng| product_state_sample(u, rng))
}
