//! Scalar SPAM and passive-noise channels.
//!
//! Every channel multiplies the whole state by a real factor, so each helper
//! returns the factor it applied and simulations can keep an exact log.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::StateVector;

/// How a per-qubit loss `ε` maps to an amplitude factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DampingConvention {
    /// `ε` is a population loss: amplitudes shrink by `sqrt(1 - ε)` per qubit.
    #[default]
    Population,
    /// `ε` scales amplitudes directly: `(1 - ε)` per qubit.
    Amplitude,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoiseParams {
    pub eps_init: f64,
    pub eps_read: f64,
    /// Seconds.
    pub t1: f64,
    /// Seconds.
    pub tau_gate: f64,
    /// Seconds.
    pub tau_move: f64,
    pub gate_errors_enabled: bool,
    pub passive_enabled: bool,
    pub spam_enabled: bool,
    pub convention: DampingConvention,
    /// Idle damping on spectators of single-qubit gates too.
    pub idle_on_single_qubit_gates: bool,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            eps_init: 0.003,
            eps_read: 0.0017,
            t1: 4.0,
            tau_gate: 1.8e-6,
            tau_move: 100e-6,
            gate_errors_enabled: true,
            passive_enabled: true,
            spam_enabled: true,
            convention: DampingConvention::Population,
            idle_on_single_qubit_gates: false,
        }
    }
}

impl NoiseParams {
    /// Ideal gates and every scalar channel switched off.
    pub fn noiseless() -> Self {
        NoiseParams {
            gate_errors_enabled: false,
            passive_enabled: false,
            spam_enabled: false,
            ..NoiseParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eps_init", self.eps_init), ("eps_read", self.eps_read)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(format!("noise.{name}"), format!("{v} is outside [0, 1]")));
            }
        }
        for (name, v) in [("t1", self.t1), ("tau_gate", self.tau_gate), ("tau_move", self.tau_move)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(format!("noise.{name}"), format!("{v} must be a positive duration")));
            }
        }
        Ok(())
    }

    /// Amplitude factor for a per-qubit loss `eps` applied to `qubits` qubits.
    pub fn amplitude_factor(&self, eps: f64, qubits: usize) -> f64 {
        let per_qubit = match self.convention {
            DampingConvention::Population => (1.0 - eps).sqrt(),
            DampingConvention::Amplitude => 1.0 - eps,
        };
        per_qubit.powi(qubits as i32)
    }

    pub fn state_prep_factor(&self, qubits: usize) -> f64 {
        if self.spam_enabled {
            self.amplitude_factor(self.eps_init, qubits)
        } else {
            1.0
        }
    }

    pub fn readout_factor(&self, qubits: usize) -> f64 {
        if self.spam_enabled {
            self.amplitude_factor(self.eps_read, qubits)
        } else {
            1.0
        }
    }

    /// Factor for the qubits left idle by a gate on `active` of `total` qubits.
    pub fn idle_factor(&self, total: usize, active: usize) -> f64 {
        if !self.passive_enabled || active >= total {
            return 1.0;
        }
        let eps = 1.0 - (-self.tau_gate / self.t1).exp();
        self.amplitude_factor(eps, total - active)
    }

    pub fn movement_factor(&self, total: usize) -> f64 {
        if !self.passive_enabled {
            return 1.0;
        }
        let eps = 1.0 - (-self.tau_move / self.t1).exp();
        self.amplitude_factor(eps, total)
    }
}

/// `1 - exp(-dt / T1)`.
pub fn wait_error(dt: f64, t1: f64) -> Result<f64> {
    if !(dt >= 0.0) {
        return Err(Error::input(format!("waiting time must be non-negative, got {dt}")));
    }
    if !(t1 > 0.0) {
        return Err(Error::input(format!("T1 must be positive, got {t1}")));
    }
    Ok(-(-dt / t1).exp_m1())
}

pub fn apply_state_prep(state: &mut StateVector, params: &NoiseParams) -> Result<f64> {
    let f = params.state_prep_factor(state.qubit_count());
    state.scale_amplitudes(f)?;
    Ok(f)
}

/// Damped copy for evaluation; the running state is left untouched.
pub fn apply_readout(state: &StateVector, params: &NoiseParams) -> Result<(StateVector, f64)> {
    let f = params.readout_factor(state.qubit_count());
    let mut snap = state.clone();
    snap.scale_amplitudes(f)?;
    Ok((snap, f))
}

pub fn idle_damping_for_gate(state: &mut StateVector, active_qubits: &[usize], params: &NoiseParams) -> Result<f64> {
    let total = state.qubit_count();
    if let Some(q) = active_qubits.iter().find(|&&q| q >= total) {
        return Err(Error::input(format!("active qubit {q} out of range")));
    }
    let f = params.idle_factor(total, active_qubits.len());
    state.scale_amplitudes(f)?;
    Ok(f)
}

pub fn movement_damping(state: &mut StateVector, params: &NoiseParams) -> Result<f64> {
    let f = params.movement_factor(state.qubit_count());
    state.scale_amplitudes(f)?;
    Ok(f)
}
