//! Thermodynamics of reliable qubit reset.
//!
//! The crate simulates reset protocols for a single qubit, either by swapping
//! with a Gibbs bath qubit or by driving a detailed-balanced Lindblad master
//! equation, and accounts for the heat, work and entropy production they
//! incur from arbitrary initial states. Around that it provides:
//!
//! * [`efvector`]: inference of a protocol's entropy-flow vector from four
//!   probe states, the closed-form minimally dissipative input, and a
//!   derivative-free numerical minimiser as an independent check;
//! * [`thermo`]: per-input reports and the mismatch identity
//!   `EP(ρ₀) − EP(α₀) = D[ρ₀‖α₀] − D[ρ_τ‖α_τ]`;
//! * [`experiment`]: the batch drivers behind the `qreset` CLI.
//!
//! Units throughout: k_B = ħ = 1 and β = 1. Entropies are in nats and
//! energies in k_BT.

pub mod dynamics;
pub mod efvector;
pub mod experiment;
pub mod minimize;
pub mod qmath;
pub mod sampling;
pub mod swapreset;
pub mod thermo;

pub use dynamics::{
    evolve, reliability, CompiledProtocol, ControlParams, DynamicsError, LindbladConfig,
    ProcessMap, ProcessOutcome, ProtocolKind, ProtocolSchedule, Trajectory,
};
pub use efvector::{
    infer_ef_vector, minimally_dissipative_state, minimize_ep_numeric, predict_ef,
    EntropyFlowVector, ProbeSet,
};
pub use qmath::{BlochVector, QubitState};
pub use sampling::SamplingMode;
pub use swapreset::{gibbs_qubit, GibbsBathQubit};
pub use thermo::ThermoReport;
