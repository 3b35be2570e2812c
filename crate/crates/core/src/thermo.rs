//! Entropy-production accounting for reset processes with a single bath.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::ProcessOutcome;
use crate::qmath::{
    coherence_decomposition, relative_entropy, trace_distance, von_neumann_entropy, QubitState,
};

/// Slack allowed on inequalities that hold exactly in theory.
pub const SECOND_LAW_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermoError {
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
}

/// `Q/T`, with Q in energy units of the same scale as T (k_B = 1).
pub fn entropy_flow_single_bath(heat: f64, temperature: f64) -> Result<f64, ThermoError> {
    if !(temperature > 0.0) {
        return Err(ThermoError::NonPositiveTemperature(temperature));
    }
    Ok(heat / temperature)
}

/// `EF + S(ρ_τ) − S(ρ₀)`.
pub fn entropy_production(ef: f64, s0: f64, stau: f64) -> f64 {
    ef + stau - s0
}

/// Minimum heat `T[S(ρ₀) − S(ρ_τ)]`.
pub fn landauer_bound(s0: f64, stau: f64, temperature: f64) -> f64 {
    temperature * (s0 - stau)
}

/// `(EP(ρ₀) − EP(α₀)) − (D[ρ₀‖α₀] − D[ρ_τ‖α_τ])`, which vanishes when α₀ is
/// the minimally dissipative input.
pub fn mismatch_residual(ep_rho: f64, ep_alpha: f64, d0: f64, dtau: f64) -> f64 {
    (ep_rho - ep_alpha) - (d0 - dtau)
}

pub fn second_law_check(ep: f64) -> bool {
    ep >= -SECOND_LAW_TOL
}

/// Per-input thermodynamic record of one reset run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoReport {
    /// Heat into the bath.
    pub heat: f64,
    pub work: f64,
    pub s0: f64,
    pub stau: f64,
    /// Entropy flow `Q/T`.
    pub ef: f64,
    /// Entropy production of this input.
    pub ep: f64,
    /// Entropy production of the reference input α₀.
    pub ep_alpha: f64,
    /// `D[ρ₀‖α₀]`.
    pub d0: f64,
    /// `D[ρ_τ‖α_τ]`.
    pub dtau: f64,
    /// Classical part of `d0` in α₀'s eigenbasis.
    pub kl: f64,
    /// Relative entropy of coherence of ρ₀ with respect to α₀'s eigenbasis.
    pub coherence: f64,
    /// Trace distance of ρ_τ to the target state.
    pub eps_final: f64,
}

impl ThermoReport {
    pub fn residual(&self) -> f64 {
        mismatch_residual(self.ep, self.ep_alpha, self.d0, self.dtau)
    }

    /// Excess over the Landauer bound, `Q − T[S(ρ₀) − S(ρ_τ)]`.
    pub fn landauer_excess(&self, temperature: f64) -> f64 {
        self.heat - landauer_bound(self.s0, self.stau, temperature)
    }
}

fn ep_of(outcome: &ProcessOutcome, temperature: f64) -> Result<(f64, f64, f64, f64), ThermoError> {
    let ef = entropy_flow_single_bath(outcome.heat, temperature)?;
    let s0 = von_neumann_entropy(&outcome.initial);
    let stau = von_neumann_entropy(&outcome.final_state);
    Ok((ef, s0, stau, entropy_production(ef, s0, stau)))
}

/// Builds the report for input ρ₀ against reference input α₀, both run
/// through the same protocol.
pub fn report(
    rho: &ProcessOutcome,
    alpha: &ProcessOutcome,
    target: &QubitState,
    temperature: f64,
) -> Result<ThermoReport, ThermoError> {
    let (ef, s0, stau, ep) = ep_of(rho, temperature)?;
    let (_, _, _, ep_alpha) = ep_of(alpha, temperature)?;
    let split = coherence_decomposition(&rho.initial, &alpha.initial);
    Ok(ThermoReport {
        heat: rho.heat,
        work: rho.work,
        s0,
        stau,
        ef,
        ep,
        ep_alpha,
        d0: relative_entropy(&rho.initial, &alpha.initial),
        dtau: relative_entropy(&rho.final_state, &alpha.final_state),
        kl: split.kl,
        coherence: split.coherence,
        eps_final: trace_distance(&rho.final_state, target),
    })
}
