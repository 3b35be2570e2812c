//! Entropy-flow vectors.
//!
//! For any protocol acting on a qubit the entropy flow is affine in the
//! initial Bloch vector, `EF(a) = EF[I/2] + ½ a·φ`. Four linearly
//! independent probes fix `(EF[I/2], φ)` through a 4×4 linear solve. For a
//! reliable reset, minimising `EF(a) + S_target − S(a)` gives the minimally
//! dissipative state `a* = −tanh(φ/2) φ̂`.

use nalgebra::{DMatrix, Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{DynamicsError, LindbladConfig, ProcessMap, ProtocolSchedule};
use crate::minimize::{minimize_over_ball, MinimizeOutcome, NelderMeadOptions};
use crate::qmath::{qubit_entropy_from_radius, BlochVector};

/// Probe matrices with a larger condition number are rejected.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EfVectorError {
    #[error(
        "probe {dependent} is linearly dependent on probes {earlier:?} (condition number {condition:e})"
    )]
    LinearlyDependent {
        dependent: usize,
        earlier: Vec<usize>,
        condition: f64,
    },
    #[error("probe {0} has a non-finite Bloch vector or entropy flow")]
    NonFinite(usize),
    #[error("numerical minimisation did not converge; best point {best:?} with EP = {value}")]
    NotConverged { best: BlochVector, value: f64 },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// `(EF[I/2], φ)` for one protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyFlowVector {
    /// Entropy flow from the maximally mixed state (nats).
    pub ef_mixed: f64,
    pub phi: BlochVector,
    pub phi_norm: f64,
}

impl EntropyFlowVector {
    pub fn new(ef_mixed: f64, phi: BlochVector) -> Self {
        Self {
            ef_mixed,
            phi,
            phi_norm: phi.norm(),
        }
    }
}

/// Four `(Bloch vector, measured EF)` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSet {
    probes: [(BlochVector, f64); 4],
    condition: f64,
}

/// `I/2` and the pure +x, +y, +z states.
pub fn default_probe_states() -> [BlochVector; 4] {
    [
        BlochVector::ORIGIN,
        BlochVector::new(1.0, 0.0, 0.0),
        BlochVector::new(0.0, 1.0, 0.0),
        BlochVector::new(0.0, 0.0, 1.0),
    ]
}

fn design_row(a: &BlochVector) -> [f64; 4] {
    [2.0, a.x, a.y, a.z]
}

fn design_matrix(states: &[BlochVector; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| design_row(&states[i])[j])
}

/// Ratio of extreme singular values; infinite for a singular matrix.
fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

impl ProbeSet {
    pub fn new(probes: [(BlochVector, f64); 4]) -> Result<Self, EfVectorError> {
        for (i, (a, ef)) in probes.iter().enumerate() {
            if !a.is_finite() || !ef.is_finite() {
                return Err(EfVectorError::NonFinite(i));
            }
        }
        let states = probes.map(|p| p.0);
        let design = design_matrix(&states);
        let condition = condition_number(&DMatrix::from_fn(4, 4, |i, j| design[(i, j)]));
        if condition < MAX_CONDITION {
            return Ok(Self { probes, condition });
        }
        // Name the first probe whose row falls in the span of the earlier ones.
        let rows: Vec<[f64; 4]> = states.iter().map(design_row).collect();
        let mut dependent = 3;
        for k in 1..4 {
            let sub = DMatrix::from_fn(k + 1, 4, |i, j| rows[i][j]);
            if condition_number(&sub) >= MAX_CONDITION {
                dependent = k;
                break;
            }
        }
        Err(EfVectorError::LinearlyDependent {
            dependent,
            earlier: (0..dependent).collect(),
            condition,
        })
    }

    /// Probes at the given states with entropy flows from `measure`.
    pub fn measure<F, E>(states: [BlochVector; 4], mut measure: F) -> Result<Self, EfVectorError>
    where
        F: FnMut(&BlochVector) -> Result<f64, E>,
        EfVectorError: From<E>,
    {
        let mut probes = [(BlochVector::ORIGIN, 0.0); 4];
        for (slot, a) in probes.iter_mut().zip(states) {
            *slot = (a, measure(&a)?);
        }
        Self::new(probes)
    }

    pub fn probes(&self) -> &[(BlochVector, f64); 4] {
        &self.probes
    }

    pub fn condition_number(&self) -> f64 {
        self.condition
    }
}

/// Solves `A (EF[I/2], φ)ᵀ = 2 (EF⁽¹⁾, …, EF⁽⁴⁾)ᵀ`.
pub fn infer_ef_vector(probes: &ProbeSet) -> Result<EntropyFlowVector, EfVectorError> {
    let states = probes.probes.map(|p| p.0);
    let a = design_matrix(&states);
    let rhs = Vector4::from_fn(|i, _| 2.0 * probes.probes[i].1);
    let solution = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| EfVectorError::LinearlyDependent {
            dependent: 3,
            earlier: vec![0, 1, 2],
            condition: f64::INFINITY,
        })?;
    Ok(EntropyFlowVector::new(
        solution[0],
        BlochVector::new(solution[1], solution[2], solution[3]),
    ))
}

/// `EF[I/2] + ½ a·φ`.
pub fn predict_ef(v: &EntropyFlowVector, a: &BlochVector) -> f64 {
    v.ef_mixed + 0.5 * a.dot(&v.phi)
}

/// Entropy production of a reliable reset whose output entropy is
/// `s_target`: `EF(a) + S_target − S(a)`.
pub fn ep_analytic(v: &EntropyFlowVector, a: &BlochVector, s_target: f64) -> f64 {
    predict_ef(v, a) + s_target - qubit_entropy_from_radius(a.norm())
}

/// `a* = −tanh(φ/2) φ̂`; the origin when `φ = 0`.
pub fn minimally_dissipative_state(v: &EntropyFlowVector) -> BlochVector {
    let phi = v.phi.norm();
    if phi == 0.0 {
        return BlochVector::ORIGIN;
    }
    v.phi.scale(-(0.5 * phi).tanh() / phi)
}

/// Minimises an arbitrary entropy-production surface over the open ball.
pub fn minimize_ep<F>(objective: F, tol: f64) -> Result<MinimizeOutcome, EfVectorError>
where
    F: Fn(&BlochVector) -> f64 + Sync,
{
    let opts = NelderMeadOptions {
        tol,
        ..NelderMeadOptions::default()
    };
    let out = minimize_over_ball(objective, &opts);
    if !out.converged {
        return Err(EfVectorError::NotConverged {
            best: out.point,
            value: out.value,
        });
    }
    Ok(out)
}

/// Numerically minimises the entropy production measured from simulated
/// trajectories, independently of the closed-form `a*`. The objective uses
/// the protocol's exact affine action (see [`ProcessMap`]), so it includes
/// the true output entropy `S(Γ(ρ₀))` rather than assuming a perfect reset.
pub fn minimize_ep_numeric(
    schedule: &ProtocolSchedule,
    cfg: &LindbladConfig,
    tol: f64,
) -> Result<BlochVector, EfVectorError> {
    let map = ProcessMap::from_schedule(schedule, cfg)?;
    Ok(minimize_ep(|a| map.entropy_production(a), tol)?.point)
}
