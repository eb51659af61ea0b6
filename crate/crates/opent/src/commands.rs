//! Report builders behind each subcommand. Every report carries the flags
//! that decide the process exit code.

use std::path::Path;

use opent_core::choi::{self, KrausMap};
use opent_core::epower;
use opent_core::protocol::{self, UNITARY_TOL};
use opent_core::random::{self, RandomSource};
use opent_core::schmidt;
use opent_core::{BipartiteOperator, DEFAULT_TOL};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::format::{self, ser_f64, ser_f64_opt, ser_f64_vec};
use crate::gate::ResolvedGate;
use crate::parallel;

/// Width of the Monte-Carlo agreement band in standard errors.
pub const MC_BAND: f64 = 3.0;

/// Reports that decide whether the command exits successfully.
pub trait Agreement {
    fn agrees(&self) -> bool;
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossChecks {
    /// Value from the swap-operator trace formula.
    #[serde(serialize_with = "ser_f64_opt")]
    pub swap_path: Option<f64>,
    /// `2 N_d p` from the measurement protocol; unitaries only.
    #[serde(serialize_with = "ser_f64_opt")]
    pub protocol_path: Option<f64>,
    /// Linear entropy of the normalized vectorized operator.
    #[serde(serialize_with = "ser_f64_opt")]
    pub choi_path: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EntanglementReport {
    pub gate: String,
    pub dim_a: usize,
    pub dim_b: usize,
    pub unitary: bool,
    #[serde(serialize_with = "ser_f64")]
    pub linear_entropy: f64,
    #[serde(serialize_with = "ser_f64")]
    pub von_neumann_entropy: f64,
    pub schmidt_rank: usize,
    #[serde(serialize_with = "ser_f64_vec")]
    pub coefficients: Vec<f64>,
    #[serde(serialize_with = "ser_f64_vec")]
    pub schmidt_probabilities: Vec<f64>,
    pub cross_checks: CrossChecks,
    #[serde(serialize_with = "ser_f64")]
    pub max_deviation: f64,
    #[serde(serialize_with = "ser_f64")]
    pub tolerance: f64,
    pub agrees: bool,
}

impl Agreement for EntanglementReport {
    fn agrees(&self) -> bool {
        self.agrees
    }
}

pub fn entanglement(gate: &ResolvedGate, tol: f64) -> CliResult<EntanglementReport> {
    let x = &gate.operator;
    let report = schmidt::entanglement_report(x, DEFAULT_TOL)?;
    let coefficients = schmidt::schmidt_spectrum(x)?.into_iter().take(report.schmidt_rank).collect();
    let unitary = x.is_unitary(UNITARY_TOL);
    let square = x.dim_a() == x.dim_b();
    let cross_checks = CrossChecks {
        swap_path: if square { Some(protocol::entanglement_via_swap(x)?) } else { None },
        protocol_path: if square && unitary { Some(protocol::protocol_outcome(x)?.rescaled_e) } else { None },
        choi_path: if square { Some(choi::choi_linear_entanglement(x)?) } else { None },
    };
    let max_deviation = [cross_checks.swap_path, cross_checks.protocol_path, cross_checks.choi_path]
        .into_iter()
        .flatten()
        .map(|v| (v - report.linear_entropy).abs())
        .fold(0.0, f64::max);
    Ok(EntanglementReport {
        gate: gate.label.clone(),
        dim_a: x.dim_a(),
        dim_b: x.dim_b(),
        unitary,
        linear_entropy: report.linear_entropy,
        von_neumann_entropy: report.von_neumann_entropy,
        schmidt_rank: report.schmidt_rank,
        coefficients,
        schmidt_probabilities: report.schmidt_probabilities,
        cross_checks,
        max_deviation,
        tolerance: tol,
        agrees: max_deviation <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    #[serde(serialize_with = "ser_f64")]
    pub theta: f64,
    #[serde(rename = "E", serialize_with = "ser_f64")]
    pub e: f64,
    #[serde(serialize_with = "ser_f64")]
    pub closed_form: f64,
    #[serde(serialize_with = "ser_f64")]
    pub abs_error: f64,
}

/// `E(exp(iθ σz⊗σz))` on `steps` evenly spaced angles from `start` to `end`.
pub fn sweep(start: f64, end: f64, steps: usize) -> CliResult<Vec<SweepRow>> {
    if steps < 2 {
        return Err(CliError::argument(format!("--steps must be at least 2, got {steps}")));
    }
    if !(start.is_finite() && end.is_finite() && start < end) {
        return Err(CliError::argument(format!("invalid angle range [{start}, {end}]; need start < end")));
    }
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            let theta = if i + 1 == steps { end } else { start + (end - start) * (i as f64 / last) };
            let e = schmidt::linear_entanglement(&schmidt::exp_zz(theta))?;
            let closed_form = schmidt::exp_zz_closed_form(theta);
            Ok(SweepRow { theta, e, closed_form, abs_error: (e - closed_form).abs() })
        })
        .collect()
}

pub fn sweep_agrees(rows: &[SweepRow], tol: f64) -> bool {
    rows.iter().all(|r| r.abs_error <= tol)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct McReport {
    #[serde(serialize_with = "ser_f64")]
    pub mean: f64,
    #[serde(serialize_with = "ser_f64")]
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub rng: &'static str,
    /// Agreement band in standard errors.
    #[serde(serialize_with = "ser_f64")]
    pub band: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EpowerReport {
    pub gate: String,
    pub local_dim: usize,
    #[serde(serialize_with = "ser_f64")]
    pub ep: f64,
    #[serde(rename = "eU", serialize_with = "ser_f64")]
    pub e_u: f64,
    #[serde(rename = "eUS", serialize_with = "ser_f64")]
    pub e_us: f64,
    #[serde(rename = "eS", serialize_with = "ser_f64")]
    pub e_s: f64,
    #[serde(serialize_with = "ser_f64")]
    pub bound: f64,
    pub optimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<McReport>,
}

impl Agreement for EpowerReport {
    fn agrees(&self) -> bool {
        self.monte_carlo.as_ref().map_or(true, |m| m.agrees)
    }
}

pub fn entangling_power(gate: &ResolvedGate, mc_samples: usize, seed: u64) -> CliResult<EpowerReport> {
    let r = epower::entangling_power(&gate.operator)?;
    let monte_carlo = if mc_samples > 0 {
        let est = parallel::entangling_power(&gate.operator, mc_samples, seed)?;
        Some(McReport {
            mean: est.mean,
            stderr: est.stderr,
            samples: est.samples,
            seed,
            rng: RandomSource::ALGORITHM,
            band: MC_BAND,
            agrees: est.within(r.ep, MC_BAND),
        })
    } else {
        None
    };
    Ok(EpowerReport {
        gate: gate.label.clone(),
        local_dim: r.local_dim,
        ep: r.ep,
        e_u: r.e_u,
        e_us: r.e_us,
        e_s: r.e_s,
        bound: r.bound,
        optimal: r.optimal,
        monte_carlo,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HaarAverageReport {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub rng: &'static str,
    #[serde(serialize_with = "ser_f64")]
    pub mean: f64,
    #[serde(serialize_with = "ser_f64")]
    pub stderr: f64,
    #[serde(serialize_with = "ser_f64")]
    pub analytic: f64,
    pub within_band: bool,
}

impl Agreement for HaarAverageReport {
    fn agrees(&self) -> bool {
        self.within_band
    }
}

pub fn haar_average(dim: usize, samples: usize, seed: u64) -> CliResult<HaarAverageReport> {
    if dim < 2 {
        return Err(CliError::dimension(format!("--dim must be at least 2, got {dim}")));
    }
    let est = parallel::haar_average(dim, samples, seed)?;
    let analytic = random::haar_average_exact(dim);
    Ok(HaarAverageReport {
        dim,
        samples: est.samples,
        seed,
        rng: RandomSource::ALGORITHM,
        mean: est.mean,
        stderr: est.stderr,
        analytic,
        within_band: est.within(analytic, MC_BAND),
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChoiReport {
    pub d: usize,
    pub kraus_operators: usize,
    pub trace_preserving: bool,
    #[serde(serialize_with = "ser_f64")]
    pub trace: f64,
    #[serde(serialize_with = "ser_f64")]
    pub purity: f64,
    pub rank: usize,
    pub is_pure: bool,
    #[serde(serialize_with = "ser_f64")]
    pub min_eigenvalue: f64,
    /// Entanglement of the single Kraus operator of a one-term map.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entanglement: Option<EntanglementReport>,
}

impl Agreement for ChoiReport {
    fn agrees(&self) -> bool {
        self.entanglement.as_ref().map_or(true, |e| e.agrees)
    }
}

/// Eigenvalues below `−PSD_TOL · trace` mean the Choi operator is not PSD.
pub const PSD_TOL: f64 = 1e-9;

pub fn choi_report(map: &KrausMap, label: &str, tol: f64) -> CliResult<ChoiReport> {
    let c = choi::choi_of_map(map)?;
    let eigenvalues = c.eigenvalues()?;
    let trace = c.trace();
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
    if min_eigenvalue < -PSD_TOL * trace.abs().max(1.0) {
        return Err(CliError::numerical(format!(
            "Choi operator is not positive semidefinite: minimum eigenvalue {}",
            format::sig17(min_eigenvalue)
        )));
    }
    let rank = c.rank(DEFAULT_TOL)?;
    let entanglement = match map.kraus() {
        [single] => {
            let op = BipartiteOperator::new(single.clone(), map.dim_a(), map.dim_b())?;
            Some(entanglement(&ResolvedGate { label: label.to_string(), operator: op }, tol)?)
        }
        _ => None,
    };
    Ok(ChoiReport {
        d: c.local_dim(),
        kraus_operators: map.kraus().len(),
        trace_preserving: map.is_trace_preserving(),
        trace,
        purity: choi::choi_purity(&c)?,
        rank,
        is_pure: rank == 1,
        min_eigenvalue,
        entanglement,
    })
}

pub fn choi_file(path: &Path, tol: f64) -> CliResult<ChoiReport> {
    choi_report(&format::read_kraus(path)?, &path.display().to_string(), tol)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ShotReport {
    pub shots: u64,
    pub seed: u64,
    pub rng: &'static str,
    pub successes: u64,
    #[serde(serialize_with = "ser_f64")]
    pub frequency: f64,
    /// `3·√(p(1−p)/shots)`.
    #[serde(serialize_with = "ser_f64")]
    pub band: f64,
    pub within_band: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProtocolReport {
    pub gate: String,
    pub local_dim: usize,
    #[serde(serialize_with = "ser_f64")]
    pub probability: f64,
    #[serde(serialize_with = "ser_f64")]
    pub rescaled_e: f64,
    /// Reference value from the Schmidt spectrum.
    #[serde(rename = "schmidtE", serialize_with = "ser_f64")]
    pub schmidt_e: f64,
    #[serde(serialize_with = "ser_f64")]
    pub n_d: f64,
    #[serde(serialize_with = "ser_f64")]
    pub deviation: f64,
    #[serde(serialize_with = "ser_f64")]
    pub tolerance: f64,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled: Option<ShotReport>,
}

impl Agreement for ProtocolReport {
    fn agrees(&self) -> bool {
        self.agrees && self.sampled.as_ref().map_or(true, |s| s.within_band)
    }
}

pub fn protocol_run(gate: &ResolvedGate, shots: Option<u64>, seed: u64, tol: f64) -> CliResult<ProtocolReport> {
    let out = protocol::protocol_outcome(&gate.operator)?;
    let schmidt_e = schmidt::linear_entanglement(&gate.operator)?;
    let deviation = (out.rescaled_e - schmidt_e).abs();
    let sampled = match shots {
        None => None,
        Some(0) => return Err(CliError::argument("--shots must be positive")),
        Some(n) => Some(sample_shots(out.probability, n, seed)),
    };
    Ok(ProtocolReport {
        gate: gate.label.clone(),
        local_dim: gate.operator.dim_a(),
        probability: out.probability,
        rescaled_e: out.rescaled_e,
        schmidt_e,
        n_d: out.n_d,
        deviation,
        tolerance: tol,
        agrees: deviation <= tol,
        sampled,
    })
}

/// Bernoulli trials with success probability `p` from one seeded stream.
pub fn sample_shots(p: f64, shots: u64, seed: u64) -> ShotReport {
    let p = p.clamp(0.0, 1.0);
    let mut rng = RandomSource::new(seed);
    let successes = (0..shots).filter(|_| rng.uniform() < p).count() as u64;
    let frequency = successes as f64 / shots as f64;
    let band = MC_BAND * (p * (1.0 - p) / shots as f64).sqrt();
    ShotReport {
        shots,
        seed,
        rng: RandomSource::ALGORITHM,
        successes,
        frequency,
        band,
        within_band: (frequency - p).abs() <= band,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::{GateSpec, NamedGate};
    use opent_core::gates;

    fn named(g: NamedGate, d: usize) -> ResolvedGate {
        GateSpec::named(g, d).resolve().unwrap()
    }

    #[test]
    fn entanglement_examples() {
        let swap = entanglement(&named(NamedGate::Swap, 2), 1e-9).unwrap();
        assert!((swap.linear_entropy - 0.75).abs() < 1e-12);
        assert!(swap.agrees);
        let id = entanglement(&named(NamedGate::Identity, 3), 1e-9).unwrap();
        assert!(id.linear_entropy.abs() < 1e-12);
        assert_eq!(id.schmidt_rank, 1);
        let cnot = entanglement(&named(NamedGate::Cnot, 2), 1e-9).unwrap();
        assert!((cnot.linear_entropy - 0.5).abs() < 1e-12);
        assert_eq!(cnot.schmidt_rank, 2);
        assert_eq!(cnot.coefficients.len(), 2);
        assert!(cnot.max_deviation < 1e-12);
    }

    #[test]
    fn non_unitary_input_skips_the_protocol_path() {
        let x = BipartiteOperator::square(gates::cnot().matrix().scale_real(3.0), 2).unwrap();
        let r = entanglement(&ResolvedGate { label: "scaled".into(), operator: x }, 1e-9).unwrap();
        assert!(!r.unitary);
        assert!(r.cross_checks.protocol_path.is_none());
        assert!(r.cross_checks.swap_path.is_some());
        assert!(r.agrees);
    }

    #[test]
    fn sweep_examples() {
        let rows = sweep(0.0, std::f64::consts::FRAC_PI_2, 5).unwrap();
        let expected = [0.0, 0.25, 0.5, 0.25, 0.0];
        for (row, e) in rows.iter().zip(expected) {
            assert!((row.e - e).abs() < 1e-12);
            assert_eq!(row.closed_form.to_bits(), schmidt::exp_zz_closed_form(row.theta).to_bits());
        }
        assert!(sweep_agrees(&rows, 1e-10));
        assert_eq!(sweep(0.0, 1.0, 2).unwrap().len(), 2);
        assert!(sweep(0.0, 1.0, 1).is_err());
        assert!(sweep(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn epower_examples() {
        let swap = entangling_power(&named(NamedGate::Swap, 2), 0, 1).unwrap();
        assert_eq!(swap.ep, 0.0);
        assert!(!swap.optimal && swap.monte_carlo.is_none() && swap.agrees());
        let cnot = entangling_power(&named(NamedGate::Cnot, 2), 4000, 42).unwrap();
        assert!((cnot.ep - 2.0 / 9.0).abs() < 1e-12);
        assert!((cnot.bound - 1.0 / 3.0).abs() < 1e-15);
        assert!(cnot.agrees());
        assert_eq!(entangling_power(&named(NamedGate::Identity, 3), 0, 1).unwrap().ep, 0.0);
    }

    #[test]
    fn haar_average_report_is_reproducible() {
        let a = haar_average(2, 500, 3).unwrap();
        let b = haar_average(2, 500, 3).unwrap();
        assert_eq!(format::render_json(&a).unwrap(), format::render_json(&b).unwrap());
        assert_eq!(a.analytic, 0.6);
        assert!((haar_average(3, 10, 3).unwrap().analytic - 0.8).abs() < 1e-15);
        assert!(haar_average(1, 10, 3).is_err());
        assert!(haar_average(2, 1, 3).is_err());
    }

    #[test]
    fn choi_examples() {
        let id = choi_report(&KrausMap::pure(&gates::identity(2)), "identity", 1e-9).unwrap();
        assert!((id.trace - 4.0).abs() < 1e-12 && (id.purity - 1.0).abs() < 1e-12 && id.is_pure);
        let cnot = choi_report(&KrausMap::pure(&gates::cnot()), "cnot", 1e-9).unwrap();
        let direct = entanglement(&named(NamedGate::Cnot, 2), 1e-9).unwrap();
        let via_choi = cnot.entanglement.unwrap();
        assert_eq!(via_choi.linear_entropy.to_bits(), direct.linear_entropy.to_bits());
        assert_eq!(via_choi.schmidt_rank, direct.schmidt_rank);
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let two = KrausMap::new(
            vec![
                gates::identity(2).matrix().scale_real(half),
                gates::swap(2).matrix().scale_real(half),
            ],
            2,
            2,
            true,
        )
        .unwrap();
        let r = choi_report(&two, "mix", 1e-9).unwrap();
        assert!(!r.is_pure && r.entanglement.is_none());
    }

    #[test]
    fn protocol_examples() {
        let swap = protocol_run(&named(NamedGate::Swap, 2), None, 0, 1e-9).unwrap();
        assert!((swap.probability - 0.25).abs() < 1e-12 && swap.agrees());
        let id = protocol_run(&named(NamedGate::Identity, 2), Some(1000), 0, 1e-9).unwrap();
        assert!(id.probability.abs() < 1e-15);
        assert_eq!(id.sampled.unwrap().successes, 0);
        let cnot = protocol_run(&named(NamedGate::Cnot, 2), Some(100_000), 42, 1e-9).unwrap();
        let s = cnot.sampled.as_ref().unwrap();
        let p = cnot.probability;
        assert!((s.frequency - p).abs() <= 3.0 * (p * (1.0 - p) / 1e5).sqrt());
        assert!(cnot.agrees());
    }
}
