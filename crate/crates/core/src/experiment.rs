//! Batch drivers: probe-based φ inference, identity-line verification over
//! sampled inputs, trajectory simulation and the swap sweep.
//!
//! Every per-sample computation derives its input from `(seed, index)` and
//! results are collected in index order, so outputs do not depend on the
//! size of the thread pool.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{
    reliability, CompiledProtocol, DynamicsError, LindbladConfig, ProcessOutcome, ProtocolSchedule,
    Trajectory, RELIABILITY_SEED,
};
use crate::efvector::{
    default_probe_states, infer_ef_vector, minimally_dissipative_state, minimize_ep,
    minimize_ep_numeric, EfVectorError, EntropyFlowVector, ProbeSet,
};
use crate::qmath::{bloch_to_density, trace_distance, BlochVector, QmathError, QubitState};
use crate::sampling::{sample_bloch_indexed, SamplingMode};
use crate::swapreset::{
    gibbs_qubit, swap_entropy_change, swap_entropy_flow_vector, swap_entropy_production, swap_heat,
    swap_outcome, swap_relative_entropy, GibbsBathQubit, SwapError,
};
use crate::thermo::{self, ThermoError, ThermoReport};

/// Default convergence threshold of the numerical α₀ search (simplex
/// diameter in the minimiser's coordinates).
pub const DEFAULT_MINIMIZER_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    EfVector(#[from] EfVectorError),
    #[error(transparent)]
    Thermo(#[from] ThermoError),
    #[error(transparent)]
    Swap(#[from] SwapError),
    #[error(transparent)]
    State(#[from] QmathError),
}

/// A reset protocol: either a driven Lindblad schedule or the analytic swap.
#[derive(Debug, Clone)]
pub enum Protocol {
    Lindblad {
        schedule: ProtocolSchedule,
        cfg: LindbladConfig,
    },
    Swap {
        bath: GibbsBathQubit,
    },
}

/// A protocol ready to be run on many inputs.
pub enum PreparedProtocol {
    Lindblad(Box<CompiledProtocol>),
    Swap(GibbsBathQubit),
}

impl Protocol {
    pub fn prepare(&self) -> Result<PreparedProtocol, ExperimentError> {
        Ok(match self {
            Protocol::Lindblad { schedule, cfg } => {
                PreparedProtocol::Lindblad(Box::new(CompiledProtocol::new(schedule, cfg)?))
            }
            Protocol::Swap { bath } => PreparedProtocol::Swap(*bath),
        })
    }

    pub fn temperature(&self) -> f64 {
        match self {
            Protocol::Lindblad { cfg, .. } => 1.0 / cfg.beta,
            Protocol::Swap { bath } => 1.0 / bath.beta,
        }
    }
}

/// Numerical health of one integrated trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryHygiene {
    pub first_law_residual: f64,
    pub max_trace_drift: f64,
    pub min_eigenvalue: f64,
}

impl From<&Trajectory> for TrajectoryHygiene {
    fn from(t: &Trajectory) -> Self {
        Self {
            first_law_residual: t.first_law_residual(),
            max_trace_drift: t.max_trace_drift(),
            min_eigenvalue: t.min_eigenvalue(),
        }
    }
}

impl PreparedProtocol {
    /// Runs one input; the hygiene record is present for integrated runs.
    pub fn run(
        &self,
        rho0: &QubitState,
    ) -> Result<(ProcessOutcome, Option<TrajectoryHygiene>), ExperimentError> {
        match self {
            PreparedProtocol::Lindblad(p) => {
                let traj = p.evolve(rho0)?;
                Ok((
                    ProcessOutcome::from(&traj),
                    Some(TrajectoryHygiene::from(&traj)),
                ))
            }
            PreparedProtocol::Swap(bath) => Ok((swap_outcome(rho0, bath), None)),
        }
    }

    pub fn trajectory(&self, rho0: &QubitState) -> Result<Option<Trajectory>, ExperimentError> {
        match self {
            PreparedProtocol::Lindblad(p) => Ok(Some(p.evolve(rho0)?)),
            PreparedProtocol::Swap(_) => Ok(None),
        }
    }
}

/// Result of φ inference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiReport {
    pub vector: EntropyFlowVector,
    /// Minimally dissipative input predicted from φ.
    pub alpha0_bloch: BlochVector,
    pub condition_number: f64,
}

/// Measures the entropy flow from four probe inputs (full trajectories for
/// Lindblad protocols, the closed form for the swap) and solves for φ.
pub fn infer_phi(
    protocol: &Protocol,
    probe_states: Option<[BlochVector; 4]>,
) -> Result<PhiReport, ExperimentError> {
    let states = probe_states.unwrap_or_else(default_probe_states);
    let prepared = protocol.prepare()?;
    let temperature = protocol.temperature();
    let efs = states
        .par_iter()
        .map(|a| {
            let rho0 = bloch_to_density(a)?;
            let (out, _) = prepared.run(&rho0)?;
            Ok(thermo::entropy_flow_single_bath(out.heat, temperature)?)
        })
        .collect::<Result<Vec<f64>, ExperimentError>>()?;
    let mut probes = [(BlochVector::ORIGIN, 0.0); 4];
    for (i, slot) in probes.iter_mut().enumerate() {
        *slot = (states[i], efs[i]);
    }
    let set = ProbeSet::new(probes)?;
    let vector = infer_ef_vector(&set)?;
    Ok(PhiReport {
        vector,
        alpha0_bloch: minimally_dissipative_state(&vector),
        condition_number: set.condition_number(),
    })
}

/// Closed-form counterpart of [`infer_phi`] for the swap.
pub fn swap_phi(bath: &GibbsBathQubit) -> PhiReport {
    let vector = swap_entropy_flow_vector(bath);
    PhiReport {
        vector,
        alpha0_bloch: minimally_dissipative_state(&vector),
        condition_number: f64::NAN,
    }
}

/// Numerical minimally dissipative input.
pub fn minimize_alpha0(protocol: &Protocol, tol: f64) -> Result<BlochVector, ExperimentError> {
    match protocol {
        Protocol::Lindblad { schedule, cfg } => Ok(minimize_ep_numeric(schedule, cfg, tol)?),
        Protocol::Swap { bath } => {
            let out = minimize_ep(
                |a| {
                    let rho = bloch_to_density(a).expect("minimiser stays inside the ball");
                    swap_entropy_production(&rho, bath)
                },
                tol,
            )?;
            Ok(out.point)
        }
    }
}

/// The argmin used by [`verify`] under [`AlphaSource::Minimizer`]. For the
/// swap `EP = D[ρ₀‖γ]`, whose exact minimiser is γ itself; a simplex search
/// would only locate it to about 1e−8 and the identity is exact, so the
/// search is reserved for protocols without a closed form.
pub fn reference_alpha0(protocol: &Protocol, tol: f64) -> Result<BlochVector, ExperimentError> {
    match protocol {
        Protocol::Swap { bath } => Ok(bath.bloch()),
        Protocol::Lindblad { .. } => minimize_alpha0(protocol, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaSource {
    /// Derivative-free minimisation of the measured entropy production.
    #[default]
    Minimizer,
    /// `a* = −tanh(φ/2) φ̂` from the inferred entropy-flow vector.
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub sampling: SamplingMode,
    pub alpha_source: AlphaSource,
    pub minimizer_tol: f64,
    /// Extra sphere samples used for the reliability estimate.
    pub reliability_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 1,
            sampling: SamplingMode::Ball,
            alpha_source: AlphaSource::Minimizer,
            minimizer_tol: DEFAULT_MINIMIZER_TOL,
            reliability_samples: 200,
        }
    }
}

/// One verified input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub index: usize,
    pub initial: BlochVector,
    pub report: ThermoReport,
    pub hygiene: Option<TrajectoryHygiene>,
}

impl VerifyRecord {
    pub fn residual(&self) -> f64 {
        self.report.residual()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub alpha0: BlochVector,
    pub alpha_source: AlphaSource,
    /// φ inferred from the default probes (reported whatever the α₀ source).
    pub phi: PhiReport,
    /// Reliability estimate ε against the target.
    pub epsilon: f64,
    pub records: Vec<VerifyRecord>,
}

impl VerifyOutcome {
    pub fn max_abs_residual(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.residual().abs())
            .fold(0.0, f64::max)
    }

    /// `mean(kl) / mean(D0)`: the share of the dissipation mismatch that is
    /// classical rather than coherent.
    pub fn kl_fraction(&self) -> f64 {
        let kl: f64 = self.records.iter().map(|r| r.report.kl).sum();
        let d0: f64 = self.records.iter().map(|r| r.report.d0).sum();
        kl / d0
    }
}

/// Samples inputs, runs the protocol on each and on α₀, and records the
/// mismatch identity.
pub fn verify(
    protocol: &Protocol,
    target: &QubitState,
    opts: &VerifyOptions,
) -> Result<VerifyOutcome, ExperimentError> {
    let inputs = sample_inputs(opts.seed, opts.samples, opts.sampling);
    verify_inputs(protocol, target, opts, &inputs)
}

/// [`verify`] on explicit inputs; `opts.samples` and the sampling fields are
/// ignored.
pub fn verify_inputs(
    protocol: &Protocol,
    target: &QubitState,
    opts: &VerifyOptions,
    inputs: &[BlochVector],
) -> Result<VerifyOutcome, ExperimentError> {
    let phi = match protocol {
        Protocol::Swap { bath } => swap_phi(bath),
        Protocol::Lindblad { .. } => infer_phi(protocol, None)?,
    };
    let alpha0 = match opts.alpha_source {
        AlphaSource::Minimizer => reference_alpha0(protocol, opts.minimizer_tol)?,
        AlphaSource::Phi => phi.alpha0_bloch,
    };
    let prepared = protocol.prepare()?;
    let temperature = protocol.temperature();
    let (alpha_outcome, _) = prepared.run(&bloch_to_density(&alpha0)?)?;

    let records = inputs
        .par_iter()
        .enumerate()
        .map(|(index, &initial)| {
            let (outcome, hygiene) = prepared.run(&bloch_to_density(&initial)?)?;
            let report = thermo::report(&outcome, &alpha_outcome, target, temperature)?;
            Ok(VerifyRecord {
                index,
                initial,
                report,
                hygiene,
            })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;

    let epsilon = match protocol {
        Protocol::Lindblad { schedule, cfg } => reliability(
            schedule,
            cfg,
            target,
            opts.reliability_samples,
            RELIABILITY_SEED,
        )?,
        Protocol::Swap { bath } => trace_distance(&bath.gamma, target),
    };

    Ok(VerifyOutcome {
        alpha0,
        alpha_source: opts.alpha_source,
        phi,
        epsilon,
        records,
    })
}

/// One simulated input with its trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedSample {
    pub index: usize,
    pub initial: BlochVector,
    pub trajectory: Trajectory,
}

/// Runs the given inputs (or `samples` seeded draws) through a Lindblad
/// protocol.
pub fn simulate(
    schedule: &ProtocolSchedule,
    cfg: &LindbladConfig,
    inputs: &[BlochVector],
) -> Result<Vec<SimulatedSample>, ExperimentError> {
    let protocol = CompiledProtocol::new(schedule, cfg)?;
    inputs
        .par_iter()
        .enumerate()
        .map(|(index, a)| {
            let trajectory = protocol.evolve(&bloch_to_density(a)?)?;
            Ok(SimulatedSample {
                index,
                initial: *a,
                trajectory,
            })
        })
        .collect()
}

/// Seeded inputs for [`simulate`] and [`verify`].
pub fn sample_inputs(seed: u64, samples: usize, mode: SamplingMode) -> Vec<BlochVector> {
    (0..samples)
        .map(|i| sample_bloch_indexed(seed, i as u64, mode))
        .collect()
}

/// Named input family of the swap sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapInput {
    Gibbs,
    Ground,
    Excited,
    Mixed,
    PlusX,
}

impl SwapInput {
    pub const ALL: [SwapInput; 5] = [
        SwapInput::Gibbs,
        SwapInput::Ground,
        SwapInput::Excited,
        SwapInput::Mixed,
        SwapInput::PlusX,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SwapInput::Gibbs => "gibbs",
            SwapInput::Ground => "ground",
            SwapInput::Excited => "excited",
            SwapInput::Mixed => "mixed",
            SwapInput::PlusX => "plus-x",
        }
    }

    fn state(&self, bath: &GibbsBathQubit) -> QubitState {
        let bloch = match self {
            SwapInput::Gibbs => return bath.gamma,
            SwapInput::Ground => BlochVector::new(0.0, 0.0, 1.0),
            SwapInput::Excited => BlochVector::new(0.0, 0.0, -1.0),
            SwapInput::Mixed => BlochVector::ORIGIN,
            SwapInput::PlusX => BlochVector::new(1.0, 0.0, 0.0),
        };
        bloch_to_density(&bloch).expect("unit vectors are valid states")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapRow {
    pub beta_eb: f64,
    pub input: SwapInput,
    pub heat: f64,
    pub entropy_change: f64,
    pub entropy_production: f64,
    pub relative_entropy: f64,
}

/// Closed-form swap thermodynamics over a grid of `βE_b`.
pub fn swap_sweep(beta_eb: &[f64]) -> Result<Vec<SwapRow>, ExperimentError> {
    let mut rows = Vec::with_capacity(beta_eb.len() * SwapInput::ALL.len());
    for &x in beta_eb {
        let bath = gibbs_qubit(x, 1.0)?;
        for input in SwapInput::ALL {
            let rho = input.state(&bath);
            rows.push(SwapRow {
                beta_eb: x,
                input,
                heat: swap_heat(&rho, &bath),
                entropy_change: swap_entropy_change(&rho, &bath),
                entropy_production: swap_entropy_production(&rho, &bath),
                relative_entropy: swap_relative_entropy(&rho, &bath),
            });
        }
    }
    Ok(rows)
}
