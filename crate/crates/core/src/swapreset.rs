//! Reset by swapping the system with a qubit drawn from a Gibbs bath.
//!
//! The swap replaces ρ₀ by γ = e^{−βH_b}/Z_b with H_b = −E_b σ_z, so every
//! thermodynamic quantity has a closed form. With x = βE_b and a_z the
//! initial z component, the heat into the bath is `x (tanh x − a_z)` in
//! units of k_BT.

use num_complex::Complex64;
use thiserror::Error;

use crate::dynamics::ProcessOutcome;
use crate::efvector::EntropyFlowVector;
use crate::qmath::{
    relative_entropy, von_neumann_entropy, BlochVector, Mat2, QmathError, QubitState,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SwapError {
    #[error("inverse temperature must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("bath energy must be finite and non-negative, got {0}")]
    InvalidEnergy(f64),
    #[error(transparent)]
    State(#[from] QmathError),
}

/// One bath qubit in its Gibbs state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsBathQubit {
    /// `E_b`, units of k_BT at β = 1.
    pub energy: f64,
    pub beta: f64,
    pub gamma: QubitState,
}

impl GibbsBathQubit {
    /// `βE_b`.
    pub fn reduced_energy(&self) -> f64 {
        self.beta * self.energy
    }

    /// Bloch vector `(0, 0, tanh βE_b)`.
    pub fn bloch(&self) -> BlochVector {
        BlochVector::new(0.0, 0.0, self.reduced_energy().tanh())
    }

    /// `ln g₀ − ln g₁ = 2βE_b`: the only combination of `ln γ` the heat sees.
    fn log_ratio(&self) -> f64 {
        2.0 * self.reduced_energy()
    }
}

pub fn gibbs_qubit(energy: f64, beta: f64) -> Result<GibbsBathQubit, SwapError> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(SwapError::NonPositiveBeta(beta));
    }
    if !(energy >= 0.0) || !energy.is_finite() {
        return Err(SwapError::InvalidEnergy(energy));
    }
    // Populations from e^{−2x} directly: 1 − tanh x cancels badly for large x.
    let x = beta * energy;
    let boltzmann = (-2.0 * x).exp();
    let excited = boltzmann / (1.0 + boltzmann);
    let gamma = QubitState::new(Mat2::new(
        Complex64::new(1.0 / (1.0 + boltzmann), 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(excited, 0.0),
    ))?;
    Ok(GibbsBathQubit {
        energy,
        beta,
        gamma,
    })
}

/// `Q/k_BT = tr(γ ln γ) − tr(ρ₀ ln γ)`.
///
/// Only the diagonal of ρ₀ in the z basis enters; expanding in γ's
/// eigenbasis gives `(g₀ − p₀)(ln g₀ − ln g₁)`.
pub fn swap_heat(rho0: &QubitState, bath: &GibbsBathQubit) -> f64 {
    let g0 = bath.gamma.matrix()[(0, 0)].re;
    let p0 = rho0.matrix()[(0, 0)].re;
    (g0 - p0) * bath.log_ratio()
}

/// `ΔS_sys = S(γ) − S(ρ₀)` (nats).
pub fn swap_entropy_change(rho0: &QubitState, bath: &GibbsBathQubit) -> f64 {
    von_neumann_entropy(&bath.gamma) - von_neumann_entropy(rho0)
}

/// `Q/T + ΔS_sys`, which equals `D[ρ₀‖γ]`.
pub fn swap_entropy_production(rho0: &QubitState, bath: &GibbsBathQubit) -> f64 {
    swap_heat(rho0, bath) + swap_entropy_change(rho0, bath)
}

/// Endpoint record of one swap; the system ends in γ and no work is done
/// on it.
pub fn swap_outcome(rho0: &QubitState, bath: &GibbsBathQubit) -> ProcessOutcome {
    ProcessOutcome {
        initial: *rho0,
        final_state: bath.gamma,
        heat: swap_heat(rho0, bath),
        work: 0.0,
    }
}

/// Closed-form entropy-flow vector of the swap: `EF[I/2] = x tanh x` and
/// `φ = (0, 0, −2x)` with `x = βE_b`.
pub fn swap_entropy_flow_vector(bath: &GibbsBathQubit) -> EntropyFlowVector {
    let x = bath.reduced_energy();
    EntropyFlowVector::new(x * x.tanh(), BlochVector::new(0.0, 0.0, -2.0 * x))
}

/// Relative-entropy route to the swap's entropy production, for cross-checks.
pub fn swap_relative_entropy(rho0: &QubitState, bath: &GibbsBathQubit) -> f64 {
    relative_entropy(rho0, &bath.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efvector::{minimally_dissipative_state, predict_ef};
    use crate::qmath::{bloch_to_density, eig_hermitian, QubitState};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn state(x: f64, y: f64, z: f64) -> QubitState {
        bloch_to_density(&BlochVector::new(x, y, z)).unwrap()
    }

    /// `tr(ρ ln γ)` through the numerical eigendecomposition of γ.
    fn trace_rho_log_gamma(rho: &QubitState, gamma: &QubitState) -> f64 {
        let log_gamma = eig_hermitian(gamma.matrix()).unwrap().map(f64::ln);
        (rho.matrix() * log_gamma).trace().re
    }

    fn brute_heat(rho: &QubitState, bath: &GibbsBathQubit) -> f64 {
        trace_rho_log_gamma(&bath.gamma, &bath.gamma) - trace_rho_log_gamma(rho, &bath.gamma)
    }

    #[test]
    fn gibbs_examples() {
        let b = gibbs_qubit(0.0, 1.0).unwrap();
        assert_eq!(b.gamma, QubitState::maximally_mixed());
        let b = gibbs_qubit(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(b.gamma.bloch().z, 0.761594, epsilon = 1e-6);
        let b = gibbs_qubit(400.0, 1.0).unwrap();
        assert_eq!(b.gamma.bloch().z, 1.0);
        assert!(gibbs_qubit(1.0, 0.0).is_err());
        assert!(gibbs_qubit(-1.0, 1.0).is_err());
    }

    #[test]
    fn heat_examples() {
        let bath = gibbs_qubit(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(swap_heat(&bath.gamma, &bath), 0.0, epsilon = 1e-15);

        let g0 = 1.0f64.exp() / (1.0f64.exp() + (-1.0f64).exp());
        let excited = state(0.0, 0.0, -1.0);
        assert_abs_diff_eq!(swap_heat(&excited, &bath), 2.0 * g0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            swap_heat(&excited, &bath),
            brute_heat(&excited, &bath),
            epsilon = 1e-13
        );

        let mixed = QubitState::maximally_mixed();
        let g1 = 1.0 - g0;
        let expected = trace_rho_log_gamma(&bath.gamma, &bath.gamma) - 0.5 * (g0.ln() + g1.ln());
        assert_abs_diff_eq!(swap_heat(&mixed, &bath), expected, epsilon = 1e-13);
    }

    #[test]
    fn entropy_change_examples() {
        let bath = gibbs_qubit(1.0, 1.0).unwrap();
        assert_eq!(swap_entropy_change(&bath.gamma, &bath), 0.0);
        let cold = gibbs_qubit(50.0, 1.0).unwrap();
        let mixed = QubitState::maximally_mixed();
        assert_abs_diff_eq!(swap_entropy_change(&mixed, &cold), -LN_2, epsilon = 1e-14);
        let rho = state(0.2, 0.3, -0.4);
        assert_abs_diff_eq!(
            swap_entropy_change(&rho, &bath),
            von_neumann_entropy(&bath.gamma) - von_neumann_entropy(&rho),
            epsilon = 1e-15
        );
    }

    #[test]
    fn entropy_production_examples() {
        let bath = gibbs_qubit(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            swap_entropy_production(&bath.gamma, &bath),
            0.0,
            epsilon = 1e-15
        );
        let excited = state(0.0, 0.0, -1.0);
        assert_abs_diff_eq!(
            swap_entropy_production(&excited, &bath),
            2.126928,
            epsilon = 1e-6
        );
    }

    #[test]
    fn entropy_production_of_excited_state_grows_with_bath_gap() {
        let excited = state(0.0, 0.0, -1.0);
        let mut last = -1.0;
        for k in 0..=40 {
            let bath = gibbs_qubit(0.2 * k as f64, 1.0).unwrap();
            let ep = swap_entropy_production(&excited, &bath);
            assert!(ep > last);
            last = ep;
        }
    }

    #[test]
    fn flow_vector_examples() {
        let v = swap_entropy_flow_vector(&gibbs_qubit(1.0, 1.0).unwrap());
        assert_eq!(v.phi, BlochVector::new(0.0, 0.0, -2.0));
        let v0 = swap_entropy_flow_vector(&gibbs_qubit(0.0, 1.0).unwrap());
        assert_eq!(v0.phi.norm(), 0.0);
        assert_eq!(v0.ef_mixed, 0.0);
        let bath = gibbs_qubit(1.0, 1.0).unwrap();
        let a = minimally_dissipative_state(&v);
        assert!(a.distance(&bath.bloch()) < 1e-15);
        // a = −ẑ: EF[I/2] + ½(−1)(−2)
        assert_abs_diff_eq!(
            predict_ef(&v, &BlochVector::new(0.0, 0.0, -1.0)),
            v.ef_mixed + 1.0,
            epsilon = 1e-15
        );
    }

    fn any_bloch() -> impl Strategy<Value = BlochVector> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y, z, r)| {
            let v = BlochVector::new(x, y, z);
            v.scale(r / v.norm().max(1e-12))
        })
    }

    proptest! {
        #[test]
        fn entropy_production_is_relative_entropy(a in any_bloch(), x in 0.0..8.0f64) {
            let bath = gibbs_qubit(x, 1.0).unwrap();
            let rho = bloch_to_density(&a).unwrap();
            let ep = swap_entropy_production(&rho, &bath);
            prop_assert!(ep >= 0.0);
            prop_assert!((ep - swap_relative_entropy(&rho, &bath)).abs() <= 1e-12);
            prop_assert!((swap_heat(&rho, &bath) - brute_heat(&rho, &bath)).abs() <= 1e-12 * (1.0 + x));
        }

        #[test]
        fn flow_vector_predicts_heat(a in any_bloch(), x in 0.0..8.0f64) {
            let bath = gibbs_qubit(x, 1.0).unwrap();
            let v = swap_entropy_flow_vector(&bath);
            let rho = bloch_to_density(&a).unwrap();
            prop_assert!((predict_ef(&v, &a) - swap_heat(&rho, &bath)).abs() <= 1e-12);
        }
    }
}
