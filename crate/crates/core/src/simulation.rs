//! Step-by-step execution of ideal and noisy walks.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::circuit::{build_abstract_step, build_step_circuit, Circuit, GateKind, NativeGateSet, Op, WalkSpec};
use crate::error::{Error, Result};
use crate::gates::{
    ckx_from_ckz, effective_ckz, ideal_gate, param_gate, GateMatrix, IdealGate, ParamKind,
};
use crate::metrics::{hellinger_fidelity, ToleranceReport};
use crate::noise::{apply_readout, apply_state_prep, idle_damping_for_gate, movement_damping, NoiseParams};
use crate::oracle::step_matrix;
use crate::state::{ProbabilityTable, StateVector};

/// Largest register (data plus ancillas) a noisy run will allocate.
pub const MAX_RUN_QUBITS: usize = 12;

/// Largest walk register for the dense oracle.
pub const MAX_DENSE_QUBITS: usize = 6;

fn ensure_size(qubits: usize, limit: usize, what: &str) -> Result<()> {
    if qubits > limit {
        return Err(Error::Unsupported(format!(
            "{what} needs {qubits} qubits; the supported maximum is {limit}"
        )));
    }
    Ok(())
}

fn execute_ideal(state: &mut StateVector, circuit: &Circuit) -> Result<()> {
    for g in circuit.gates() {
        match g.kind {
            GateKind::Mcx => state.apply_mcx(g.controls(), g.target())?,
            GateKind::X => state.apply_gate(&ideal_gate(IdealGate::X), &g.qubits)?,
            GateKind::H => state.apply_gate(&ideal_gate(IdealGate::H), &g.qubits)?,
            GateKind::Ry(t) => state.apply_gate(&ideal_gate(IdealGate::Ry(t)), &g.qubits)?,
        }
    }
    Ok(())
}

/// Position marginals of the abstract walk with ideal gates, one table per step.
pub fn run_ideal(spec: &WalkSpec) -> Result<Vec<ProbabilityTable>> {
    ensure_size(spec.problem_qubits(), MAX_RUN_QUBITS, "the ideal walk")?;
    let mut state = StateVector::from_index(spec.problem_qubits(), 0)?;
    let positions = spec.position_indices();
    (0..spec.steps())
        .map(|t| {
            execute_ideal(&mut state, &build_abstract_step(spec, t)?)?;
            state.marginal_probabilities(&positions)
        })
        .collect()
}

/// Same contract as [`run_ideal`], by multiplying dense `S · C_t` matrices.
pub fn run_ideal_dense_oracle(spec: &WalkSpec) -> Result<Vec<ProbabilityTable>> {
    let nq = spec.problem_qubits();
    ensure_size(nq, MAX_DENSE_QUBITS, "the dense oracle")?;
    let dim = 1usize << nq;
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    psi[0] = C64::new(1.0, 0.0);
    let positions = spec.position_indices();
    let mut out = Vec::with_capacity(spec.steps());
    for t in 0..spec.steps() {
        let m = step_matrix(spec, t)?;
        psi = (0..dim)
            .map(|r| m[r * dim..(r + 1) * dim].iter().zip(&psi).map(|(a, b)| a * b).sum())
            .collect();
        let state = StateVector::from_amplitudes(nq, psi.clone())?;
        out.push(state.marginal_probabilities(&positions)?);
    }
    Ok(out)
}

/// Effective CkX matrices by rank for a gate set.
pub fn effective_gates(gates: &NativeGateSet) -> Result<BTreeMap<usize, GateMatrix>> {
    let mut out = BTreeMap::new();
    for rank in 2..=gates.max_rank {
        let k = rank - 1;
        let core = match (gates.param_a, rank) {
            (Some(a), 2) => param_gate(ParamKind::Cz, a)?,
            (Some(a), 3) => param_gate(ParamKind::Ccz, a)?,
            _ => match effective_ckz(k) {
                Ok(g) => g,
                Err(Error::Unsupported(_)) => continue,
                Err(e) => return Err(e),
            },
        };
        out.insert(rank, ckx_from_ckz(&core)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    /// 1-based.
    pub step: usize,
    pub ideal: ProbabilityTable,
    pub effective: ProbabilityTable,
    pub fidelity: f64,
    /// Total probability of the read-out snapshot.
    pub total_probability: f64,
    /// Product of every scalar damping factor so far, readout included.
    pub amplitude_factor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunResult {
    pub spec: WalkSpec,
    pub gates: NativeGateSet,
    pub noise: NoiseParams,
    pub qubit_count: usize,
    pub ancillas: usize,
    pub moves_per_step: usize,
    pub gate_census: BTreeMap<usize, u64>,
    pub steps: Vec<StepRecord>,
}

impl RunResult {
    pub fn fidelities(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.fidelity).collect()
    }

    pub fn tolerance_report(&self) -> ToleranceReport {
        ToleranceReport::from_fidelities(&self.fidelities())
    }
}

/// Compiled walk under the given gate set and noise, compared step by step against [`run_ideal`].
pub fn run_noisy(spec: &WalkSpec, gates: &NativeGateSet, noise: &NoiseParams) -> Result<RunResult> {
    noise.validate()?;
    let circuits: Vec<Circuit> = (0..spec.steps())
        .map(|t| build_step_circuit(spec, gates, t))
        .collect::<Result<_>>()?;
    let total = circuits[0].qubit_count();
    ensure_size(total, MAX_RUN_QUBITS, "the compiled walk")?;
    let ideal = run_ideal(spec)?;

    let matrices = if noise.gate_errors_enabled {
        let m = effective_gates(gates)?;
        if let Some(r) = circuits[0].rank_census().keys().find(|r| !m.contains_key(r)) {
            return Err(Error::Unsupported(format!("no effective matrix is available for rank {r}")));
        }
        m
    } else {
        BTreeMap::new()
    };

    let positions = spec.position_indices();
    let mut state = StateVector::from_index(total, 0)?;
    let mut s = apply_state_prep(&mut state, noise)?;
    let mut steps = Vec::with_capacity(spec.steps());
    for (t, circuit) in circuits.iter().enumerate() {
        for op in circuit.ops() {
            match op {
                Op::Move => s *= movement_damping(&mut state, noise)?,
                Op::Gate(g) => {
                    match (g.kind, matrices.get(&g.rank())) {
                        (GateKind::Mcx, Some(m)) => state.apply_gate(m, &g.qubits)?,
                        (GateKind::Mcx, None) => state.apply_mcx(g.controls(), g.target())?,
                        (GateKind::X, _) => state.apply_gate(&ideal_gate(IdealGate::X), &g.qubits)?,
                        (GateKind::H, _) => state.apply_gate(&ideal_gate(IdealGate::H), &g.qubits)?,
                        (GateKind::Ry(a), _) => state.apply_gate(&ideal_gate(IdealGate::Ry(a)), &g.qubits)?,
                    }
                    if g.is_multiqubit() || noise.idle_on_single_qubit_gates {
                        s *= idle_damping_for_gate(&mut state, &g.qubits, noise)?;
                    }
                }
            }
        }
        let (snap, read) = apply_readout(&state, noise)?;
        let effective = snap.marginal_probabilities(&positions)?;
        let fidelity = hellinger_fidelity(&ideal[t], &effective)?;
        steps.push(StepRecord {
            step: t + 1,
            ideal: ideal[t].clone(),
            effective,
            fidelity,
            total_probability: snap.total_probability(),
            amplitude_factor: s * read,
        });
    }
    Ok(RunResult {
        spec: spec.clone(),
        gates: gates.clone(),
        noise: noise.clone(),
        qubit_count: total,
        ancillas: circuits[0].ancillas().len(),
        moves_per_step: circuits[0].move_count(),
        gate_census: circuits[0].rank_census(),
        steps,
    })
}
