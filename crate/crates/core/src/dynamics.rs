//! Driven qubit coupled weakly to a single thermal bath.
//!
//! The system Hamiltonian is `H = (E/2)[cos θ σ_z + sin θ σ_x]`, and the
//! instantaneous Lindbladian is detailed-balanced with respect to it:
//!
//! ```text
//! dρ/dt = i[ρ, H] + cE(N+1) D[L](ρ) + cE N D[L†](ρ),   N = 1/(e^{βE} − 1)
//! ```
//!
//! with ħ = 1. Heat flowing into the bath is accumulated as
//! `dQ/dt = −tr(H · dissipative_part(ρ))` and work as `dW/dt = tr(ρ ∂_t H)`,
//! both integrated by the same RK4 stages as the state.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qmath::{
    self, bloch_matrix, hermitize, identity, matrix_to_bloch, min_eigenvalue, pauli_x, pauli_y,
    pauli_z, real_trace, trace_distance, trace_of_product, BlochVector, Mat2, QmathError,
    QubitState,
};
use crate::sampling::{sample_bloch_indexed, SamplingMode};

/// Coupling strength used by the reference protocols.
pub const REFERENCE_COUPLING: f64 = 0.2;
/// Protocol duration of the reference protocols, in units of βħ.
pub const REFERENCE_DURATION: f64 = 50.0;
/// Integrator step of the reference protocols, in units of βħ.
pub const REFERENCE_STEP: f64 = 1.0 / 500.0;
/// Final energy gap of the reference protocols, in units of k_BT.
pub const REFERENCE_FINAL_GAP: f64 = 10.0;
/// Initial gap of the smooth reference protocols (`E_τ / 50`).
pub const REFERENCE_INITIAL_GAP: f64 = REFERENCE_FINAL_GAP / 50.0;

/// Positivity violation that aborts an integration.
pub const POSITIVITY_TOL: f64 = 1e-8;
/// States are stored every this many integrator steps (plus both endpoints).
pub const STORE_EVERY: usize = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("energy gap must be positive, got E = {energy} at t = {time}")]
    NonPositiveEnergy { energy: f64, time: f64 },
    #[error("invalid Lindblad configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "integration lost positivity at t = {time} (eigenvalue {eigenvalue:e}); try a smaller dt"
    )]
    IntegrationFailure { time: f64, eigenvalue: f64 },
    #[error(transparent)]
    State(#[from] QmathError),
}

/// Instantaneous control parameters `x_t = (E_t, θ_t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    /// Energy gap, in units of k_BT.
    pub energy: f64,
    /// Orientation of the energy eigenbasis relative to the z basis.
    pub theta: f64,
}

impl ControlParams {
    pub const fn new(energy: f64, theta: f64) -> Self {
        Self { energy, theta }
    }
}

/// `H = (E/2)[cos θ σ_z + sin θ σ_x]`.
pub fn hamiltonian(p: &ControlParams) -> Mat2 {
    (pauli_z().scale(p.theta.cos()) + pauli_x().scale(p.theta.sin())).scale(0.5 * p.energy)
}

/// `L = ½[cos θ σ_x − iσ_y − sin θ σ_z]`, which satisfies `[L, H] = E L`.
pub fn lowering_operator(theta: f64) -> Mat2 {
    let minus_i = Complex64::new(0.0, -1.0);
    (pauli_x().scale(theta.cos()) + pauli_y() * minus_i - pauli_z().scale(theta.sin())).scale(0.5)
}

/// `D[L](ρ) = LρL† − ½{L†L, ρ}`.
pub fn dissipator(l: &Mat2, rho: &Mat2) -> Mat2 {
    let l_dag = l.adjoint();
    let l_dag_l = l_dag * l;
    l * rho * l_dag - (l_dag_l * rho + rho * l_dag_l).scale(0.5)
}

/// Bose occupation `1/(e^{βE} − 1)`.
pub fn thermal_occupation(energy: f64, beta: f64) -> f64 {
    1.0 / (beta * energy).exp_m1()
}

/// Unitary part `i[ρ, H]` of the generator (ħ = 1).
pub fn unitary_part(rho: &Mat2, h: &Mat2) -> Mat2 {
    (rho * h - h * rho) * Complex64::new(0.0, 1.0)
}

/// The two dissipators of the generator, without the commutator term.
pub fn dissipative_part(
    rho: &Mat2,
    p: &ControlParams,
    coupling: f64,
    beta: f64,
) -> Result<Mat2, DynamicsError> {
    Ok(Generator::new(p, coupling, beta)?.dissipative(rho))
}

/// Full instantaneous Lindbladian applied to `rho`.
pub fn lindblad_rhs(
    rho: &Mat2,
    p: &ControlParams,
    coupling: f64,
    beta: f64,
) -> Result<Mat2, DynamicsError> {
    let g = Generator::new(p, coupling, beta)?;
    Ok(unitary_part(rho, &g.h) + g.dissipative(rho))
}

/// Instantaneous generator with everything the RK4 stages need.
#[derive(Debug, Clone, Copy)]
struct Generator {
    h: Mat2,
    dh: Mat2,
    l: Mat2,
    l_dag: Mat2,
    l_dag_l: Mat2,
    l_l_dag: Mat2,
    rate_down: f64,
    rate_up: f64,
}

impl Generator {
    /// `dh` starts at zero; [`CompiledProtocol`] fills it in.
    fn new(p: &ControlParams, coupling: f64, beta: f64) -> Result<Self, DynamicsError> {
        if !(p.energy > 0.0) {
            return Err(DynamicsError::NonPositiveEnergy {
                energy: p.energy,
                time: f64::NAN,
            });
        }
        let n = thermal_occupation(p.energy, beta);
        let l = lowering_operator(p.theta);
        let l_dag = l.adjoint();
        Ok(Self {
            h: hamiltonian(p),
            dh: Mat2::zeros(),
            l,
            l_dag,
            l_dag_l: l_dag * l,
            l_l_dag: l * l_dag,
            rate_down: coupling * p.energy * (n + 1.0),
            rate_up: coupling * p.energy * n,
        })
    }

    #[inline]
    fn dissipative(&self, rho: &Mat2) -> Mat2 {
        let down = self.l * rho * self.l_dag - (self.l_dag_l * rho + rho * self.l_dag_l).scale(0.5);
        let up = self.l_dag * rho * self.l - (self.l_l_dag * rho + rho * self.l_l_dag).scale(0.5);
        down.scale(self.rate_down) + up.scale(self.rate_up)
    }

    /// Derivative of `(ρ, Q, W)`.
    #[inline]
    fn flow(&self, rho: &Mat2) -> (Mat2, f64, f64) {
        let diss = self.dissipative(rho);
        let drho = unitary_part(rho, &self.h) + diss;
        let dq = -trace_of_product(&self.h, &diss).re;
        let dw = trace_of_product(rho, &self.dh).re;
        (drho, dq, dw)
    }
}

/// Closed-form control schedule `t ↦ x_t`.
pub type ScheduleFn = Arc<dyn Fn(f64) -> ControlParams + Send + Sync>;

/// A control protocol `t ∈ [0, τ] ↦ (E_t, θ_t)`.
#[derive(Clone)]
pub enum ProtocolSchedule {
    /// `E_t = E₀ + (E_τ − E₀) sin²(πt/2τ)`, `θ_t = πt/τ`.
    RotatingGap {
        e0: f64,
        etau: f64,
        tau: f64,
    },
    /// Same gap ramp, `θ_t = π`.
    FixedAngleGap {
        e0: f64,
        etau: f64,
        tau: f64,
    },
    /// Constant `E`, `θ = π`: relaxation towards a near-pure Gibbs state. The
    /// control is taken to be in place already at t = 0, so no quench work is
    /// booked.
    Relaxation {
        energy: f64,
    },
    Custom {
        name: String,
        schedule: ScheduleFn,
    },
}

impl fmt::Debug for ProtocolSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RotatingGap { e0, etau, tau } => f
                .debug_struct("RotatingGap")
                .field("e0", e0)
                .field("etau", etau)
                .field("tau", tau)
                .finish(),
            Self::FixedAngleGap { e0, etau, tau } => f
                .debug_struct("FixedAngleGap")
                .field("e0", e0)
                .field("etau", etau)
                .field("tau", tau)
                .finish(),
            Self::Relaxation { energy } => f
                .debug_struct("Relaxation")
                .field("energy", energy)
                .finish(),
            Self::Custom { name, .. } => f.debug_struct("Custom").field("name", name).finish(),
        }
    }
}

/// The three reference erasure protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolKind {
    RotatingGap,
    FixedAngleGap,
    Relaxation,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 3] = [
        ProtocolKind::RotatingGap,
        ProtocolKind::FixedAngleGap,
        ProtocolKind::Relaxation,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProtocolKind::RotatingGap => "rotating-gap",
            ProtocolKind::FixedAngleGap => "fixed-angle-gap",
            ProtocolKind::Relaxation => "relaxation",
        }
    }
}

impl ProtocolSchedule {
    pub fn rotating_gap(e0: f64, etau: f64, tau: f64) -> Self {
        Self::RotatingGap { e0, etau, tau }
    }

    pub fn fixed_angle_gap(e0: f64, etau: f64, tau: f64) -> Self {
        Self::FixedAngleGap { e0, etau, tau }
    }

    pub fn relaxation(energy: f64) -> Self {
        Self::Relaxation { energy }
    }

    pub fn custom<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> ControlParams + Send + Sync + 'static,
    {
        Self::Custom {
            name: name.into(),
            schedule: Arc::new(f),
        }
    }

    /// Reference parameters: E₀ = 0.2, E_τ = 10, τ = 50.
    pub fn standard(kind: ProtocolKind) -> Self {
        match kind {
            ProtocolKind::RotatingGap => Self::rotating_gap(
                REFERENCE_INITIAL_GAP,
                REFERENCE_FINAL_GAP,
                REFERENCE_DURATION,
            ),
            ProtocolKind::FixedAngleGap => Self::fixed_angle_gap(
                REFERENCE_INITIAL_GAP,
                REFERENCE_FINAL_GAP,
                REFERENCE_DURATION,
            ),
            ProtocolKind::Relaxation => Self::relaxation(REFERENCE_FINAL_GAP),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::RotatingGap { .. } => "rotating-gap",
            Self::FixedAngleGap { .. } => "fixed-angle-gap",
            Self::Relaxation { .. } => "relaxation",
            Self::Custom { name, .. } => name,
        }
    }

    pub fn params_at(&self, t: f64) -> ControlParams {
        let ramp = |e0: f64, etau: f64, tau: f64| {
            let s = (PI * t / (2.0 * tau)).sin();
            e0 + (etau - e0) * s * s
        };
        match self {
            Self::RotatingGap { e0, etau, tau } => {
                ControlParams::new(ramp(*e0, *etau, *tau), PI * t / tau)
            }
            Self::FixedAngleGap { e0, etau, tau } => ControlParams::new(ramp(*e0, *etau, *tau), PI),
            Self::Relaxation { energy } => ControlParams::new(*energy, PI),
            Self::Custom { schedule, .. } => schedule(t),
        }
    }

    pub fn hamiltonian_at(&self, t: f64) -> Mat2 {
        hamiltonian(&self.params_at(t))
    }

    /// `∂_t H` by centred finite difference with half-width `h`.
    pub fn hamiltonian_rate(&self, t: f64, h: f64) -> Mat2 {
        if let Self::Relaxation { .. } = self {
            return Mat2::zeros();
        }
        (self.hamiltonian_at(t + h) - self.hamiltonian_at(t - h)).unscale(2.0 * h)
    }
}

/// Integration settings; times in units of βħ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladConfig {
    pub coupling: f64,
    pub tau: f64,
    pub dt: f64,
    pub beta: f64,
}

impl Default for LindbladConfig {
    fn default() -> Self {
        Self::reference()
    }
}

impl LindbladConfig {
    /// c = 1/5, τ = 50, dt = 1/500, β = 1.
    pub fn reference() -> Self {
        Self {
            coupling: REFERENCE_COUPLING,
            tau: REFERENCE_DURATION,
            dt: REFERENCE_STEP,
            beta: 1.0,
        }
    }

    /// Number of integrator steps; fails unless τ/dt is a positive integer.
    pub fn steps(&self) -> Result<usize, DynamicsError> {
        let bad = |msg: String| Err(DynamicsError::InvalidConfig(msg));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        if !(self.coupling > 0.0) || !self.coupling.is_finite() {
            return bad(format!("coupling must be positive, got {}", self.coupling));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        let ratio = self.tau / self.dt;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return bad(format!("tau/dt = {ratio} is not a positive integer"));
        }
        Ok(n as usize)
    }
}

/// Time series produced by [`evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QubitState>,
    /// Cumulative heat into the bath, units of k_BT.
    pub heat: Vec<f64>,
    /// Cumulative work on the system, units of k_BT.
    pub work: Vec<f64>,
    /// von Neumann entropy of the system, nats.
    pub entropy: Vec<f64>,
    /// `tr(ρ_t H_{x_t})`.
    pub energy: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial_state(&self) -> &QubitState {
        &self.states[0]
    }

    pub fn final_state(&self) -> &QubitState {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn total_heat(&self) -> f64 {
        *self.heat.last().expect("trajectory is never empty")
    }

    pub fn total_work(&self) -> f64 {
        *self.work.last().expect("trajectory is never empty")
    }

    /// Entropy production accumulated up to sample `i` (single bath, T = 1).
    pub fn entropy_production_at(&self, i: usize) -> f64 {
        self.heat[i] + self.entropy[i] - self.entropy[0]
    }

    /// `ΔE − (W − Q)`, which vanishes for exact bookkeeping.
    pub fn first_law_residual(&self) -> f64 {
        let last = self.len() - 1;
        (self.energy[last] - self.energy[0]) - (self.work[last] - self.heat[last])
    }

    /// Largest `|tr ρ − 1|` over the stored states.
    pub fn max_trace_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (real_trace(s.matrix()) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(|s| min_eigenvalue(s.matrix()))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Endpoint data of one run of a reset process: everything the
/// thermodynamic accounting needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessOutcome {
    pub initial: QubitState,
    pub final_state: QubitState,
    /// Heat into the bath, units of k_BT.
    pub heat: f64,
    pub work: f64,
}

impl From<&Trajectory> for ProcessOutcome {
    fn from(t: &Trajectory) -> Self {
        Self {
            initial: *t.initial_state(),
            final_state: *t.final_state(),
            heat: t.total_heat(),
            work: t.total_work(),
        }
    }
}

/// A schedule sampled on the RK4 half-step grid, reusable across any number
/// of initial states.
#[derive(Debug, Clone)]
pub struct CompiledProtocol {
    cfg: LindbladConfig,
    steps: usize,
    /// Generator at `t = k·dt/2`, `k = 0..=2·steps`.
    generators: Vec<Generator>,
}

impl CompiledProtocol {
    pub fn new(schedule: &ProtocolSchedule, cfg: &LindbladConfig) -> Result<Self, DynamicsError> {
        let steps = cfg.steps()?;
        let half = 0.5 * cfg.dt;
        let fd = cfg.dt / 10.0;
        let generators = (0..=2 * steps)
            .map(|k| {
                let t = k as f64 * half;
                let p = schedule.params_at(t);
                let mut g = Generator::new(&p, cfg.coupling, cfg.beta).map_err(|e| match e {
                    DynamicsError::NonPositiveEnergy { energy, .. } => {
                        DynamicsError::NonPositiveEnergy { energy, time: t }
                    }
                    other => other,
                })?;
                g.dh = schedule.hamiltonian_rate(t, fd);
                Ok(g)
            })
            .collect::<Result<Vec<_>, DynamicsError>>()?;
        Ok(Self {
            cfg: *cfg,
            steps,
            generators,
        })
    }

    pub fn config(&self) -> &LindbladConfig {
        &self.cfg
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn time(&self, step: usize) -> f64 {
        step as f64 * self.cfg.dt
    }

    /// One RK4 step of `(ρ, Q, W)` from `step` to `step + 1`.
    #[inline]
    fn rk4_step(&self, step: usize, rho: &Mat2) -> (Mat2, f64, f64) {
        let dt = self.cfg.dt;
        let g0 = &self.generators[2 * step];
        let g1 = &self.generators[2 * step + 1];
        let g2 = &self.generators[2 * step + 2];
        let (k1, q1, w1) = g0.flow(rho);
        let (k2, q2, w2) = g1.flow(&(rho + k1.scale(0.5 * dt)));
        let (k3, q3, w3) = g1.flow(&(rho + k2.scale(0.5 * dt)));
        let (k4, q4, w4) = g2.flow(&(rho + k3.scale(dt)));
        let sixth = dt / 6.0;
        let next = rho + (k1 + (k2 + k3).scale(2.0) + k4).scale(sixth);
        (
            hermitize(&next),
            sixth * (q1 + 2.0 * (q2 + q3) + q4),
            sixth * (w1 + 2.0 * (w2 + w3) + w4),
        )
    }

    /// Integrates the initial state, storing every [`STORE_EVERY`] steps.
    pub fn evolve(&self, rho0: &QubitState) -> Result<Trajectory, DynamicsError> {
        let capacity = self.steps / STORE_EVERY + 2;
        let mut traj = Trajectory {
            times: Vec::with_capacity(capacity),
            states: Vec::with_capacity(capacity),
            heat: Vec::with_capacity(capacity),
            work: Vec::with_capacity(capacity),
            entropy: Vec::with_capacity(capacity),
            energy: Vec::with_capacity(capacity),
        };
        let mut rho = *rho0.matrix();
        let (mut heat, mut work) = (0.0, 0.0);
        let mut store = |step: usize, rho: &Mat2, heat: f64, work: f64| {
            let state = QubitState::from_matrix_unchecked(*rho);
            traj.times.push(self.time(step));
            traj.entropy.push(qmath::von_neumann_entropy(&state));
            traj.energy
                .push(trace_of_product(rho, &self.generators[2 * step].h).re);
            traj.states.push(state);
            traj.heat.push(heat);
            traj.work.push(work);
        };
        store(0, &rho, heat, work);
        for step in 0..self.steps {
            let (next, dq, dw) = self.rk4_step(step, &rho);
            rho = next;
            heat += dq;
            work += dw;
            let lowest = min_eigenvalue(&rho);
            if lowest < -POSITIVITY_TOL || !lowest.is_finite() {
                return Err(DynamicsError::IntegrationFailure {
                    time: self.time(step + 1),
                    eigenvalue: lowest,
                });
            }
            let done = step + 1;
            if done % STORE_EVERY == 0 || done == self.steps {
                store(done, &rho, heat, work);
            }
        }
        Ok(traj)
    }

    /// Propagates an arbitrary matrix through the (linear) integrator and
    /// returns the final matrix together with the linear heat and work
    /// functionals. No positivity checks: `m0` need not be a state.
    pub fn propagate_linear(&self, m0: &Mat2) -> (Mat2, f64, f64) {
        let mut m = *m0;
        let (mut heat, mut work) = (0.0, 0.0);
        for step in 0..self.steps {
            let (next, dq, dw) = self.rk4_step(step, &m);
            m = next;
            heat += dq;
            work += dw;
        }
        (m, heat, work)
    }

    /// Endpoint data only.
    pub fn outcome(&self, rho0: &QubitState) -> Result<ProcessOutcome, DynamicsError> {
        let traj = self.evolve(rho0)?;
        Ok(ProcessOutcome::from(&traj))
    }
}

/// Integrates `rho0` under `schedule` with fixed-step classical RK4.
pub fn evolve(
    rho0: &QubitState,
    schedule: &ProtocolSchedule,
    cfg: &LindbladConfig,
) -> Result<Trajectory, DynamicsError> {
    CompiledProtocol::new(schedule, cfg)?.evolve(rho0)
}

/// The protocol as an affine map on Bloch vectors, obtained by propagating
/// `I/2` and `σ_i/2` once. Since the integrator is linear in ρ, evaluating
/// the map reproduces a full trajectory's endpoint to rounding error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessMap {
    /// Image of `I/2`.
    offset: Mat2,
    offset_heat: f64,
    offset_work: f64,
    /// Images of `σ_i/2`.
    linear: [Mat2; 3],
    linear_heat: [f64; 3],
    linear_work: [f64; 3],
}

impl ProcessMap {
    pub fn build(protocol: &CompiledProtocol) -> Self {
        let basis = [pauli_x(), pauli_y(), pauli_z()].map(|s| s.scale(0.5));
        let (offset, offset_heat, offset_work) = protocol.propagate_linear(&identity().scale(0.5));
        let images: Vec<_> = basis
            .par_iter()
            .map(|b| protocol.propagate_linear(b))
            .collect();
        Self {
            offset,
            offset_heat,
            offset_work,
            linear: [images[0].0, images[1].0, images[2].0],
            linear_heat: [images[0].1, images[1].1, images[2].1],
            linear_work: [images[0].2, images[1].2, images[2].2],
        }
    }

    pub fn from_schedule(
        schedule: &ProtocolSchedule,
        cfg: &LindbladConfig,
    ) -> Result<Self, DynamicsError> {
        Ok(Self::build(&CompiledProtocol::new(schedule, cfg)?))
    }

    /// Final Bloch vector for initial Bloch vector `a`.
    pub fn final_bloch(&self, a: &BlochVector) -> BlochVector {
        let c = a.to_array();
        let mut m = self.offset;
        for i in 0..3 {
            m += self.linear[i].scale(c[i]);
        }
        matrix_to_bloch(&m)
    }

    pub fn heat(&self, a: &BlochVector) -> f64 {
        self.offset_heat + a.dot(&BlochVector::from(self.linear_heat))
    }

    pub fn work(&self, a: &BlochVector) -> f64 {
        self.offset_work + a.dot(&BlochVector::from(self.linear_work))
    }

    /// Entropy production for initial Bloch vector `a` (T = 1).
    pub fn entropy_production(&self, a: &BlochVector) -> f64 {
        let s0 = qmath::qubit_entropy_from_radius(a.norm());
        let stau = qmath::qubit_entropy_from_radius(self.final_bloch(a).norm());
        self.heat(a) + stau - s0
    }

    pub fn outcome(&self, a: &BlochVector) -> Result<ProcessOutcome, DynamicsError> {
        let initial = qmath::bloch_to_density(a)?;
        let final_state =
            QubitState::new(bloch_matrix(&self.final_bloch(a))).map_err(DynamicsError::from)?;
        Ok(ProcessOutcome {
            initial,
            final_state,
            heat: self.heat(a),
            work: self.work(a),
        })
    }
}

/// Seed used for the extra probe states of [`reliability`] when the caller
/// does not need a particular stream.
pub const RELIABILITY_SEED: u64 = 0x0005_eed0_fe55;

/// Estimates ε = max over inputs of the trace distance between the final
/// state and `target`. The six Bloch-axis pure states and `I/2` are always
/// probed; `samples` further pure states are drawn uniformly on the sphere
/// (the maximum of a convex function over the ball sits on its boundary).
pub fn reliability(
    schedule: &ProtocolSchedule,
    cfg: &LindbladConfig,
    target: &QubitState,
    samples: usize,
    seed: u64,
) -> Result<f64, DynamicsError> {
    let protocol = CompiledProtocol::new(schedule, cfg)?;
    let mut probes: Vec<BlochVector> = BlochVector::axis_states().to_vec();
    probes.push(BlochVector::ORIGIN);
    probes.extend((0..samples).map(|i| sample_bloch_indexed(seed, i as u64, SamplingMode::Sphere)));
    let distances = probes
        .par_iter()
        .map(|a| {
            let rho0 = qmath::bloch_to_density(a)?;
            let (m, _, _) = protocol.propagate_linear(rho0.matrix());
            let lowest = min_eigenvalue(&m);
            if lowest < -POSITIVITY_TOL {
                return Err(DynamicsError::IntegrationFailure {
                    time: cfg.tau,
                    eigenvalue: lowest,
                });
            }
            Ok(trace_distance(
                &QubitState::from_matrix_unchecked(m),
                target,
            ))
        })
        .collect::<Result<Vec<f64>, DynamicsError>>()?;
    Ok(distances.into_iter().fold(0.0, f64::max))
}
