//! Python bindings: `import qwalk`.

use pyo3::prelude::*;

fn to_py(e: qwalk_core::Error) -> PyErr {
    pyo3::exceptions::PyValueError::new_err(e.to_string())
}

#[pyo3::pymodule]
mod qwalk {
    use std::collections::BTreeMap;

    use pyo3::prelude::*;
    use qwalk_core::circuit::{count_multiqubit_gates as count, decompose_ckx as decompose};
    use qwalk_core::gates::{self, ideal_ckz, GateMatrix, ParamKind};
    use qwalk_core::metrics::{self, default_fidelity_sets};
    use qwalk_core::{DampingConvention, NativeGateSet, NoiseParams, WalkSpec};

    use super::to_py;

    /// Dense statevector, qubit 0 most significant.
    #[pyclass(name = "StateVector")]
    struct PyStateVector {
        inner: qwalk_core::StateVector,
    }

    #[pymethods]
    impl PyStateVector {
        #[new]
        fn new(qubit_count: usize, bits: &str) -> PyResult<Self> {
            let inner = qwalk_core::StateVector::new_basis_state(qubit_count, bits).map_err(to_py)?;
            Ok(PyStateVector { inner })
        }

        #[getter]
        fn qubit_count(&self) -> usize {
            self.inner.qubit_count()
        }

        /// Apply a named gate: H, X, Z, RY(theta), RZ2PI, or CZ / CCZ / C3Z (ideal or effective).
        #[pyo3(signature = (name, targets, effective=false))]
        fn apply(&mut self, name: &str, targets: Vec<usize>, effective: bool) -> PyResult<()> {
            let g = named_gate(name, effective)?;
            self.inner.apply_gate(&g, &targets).map_err(to_py)
        }

        fn scale(&mut self, factor: f64) -> PyResult<()> {
            self.inner.scale_amplitudes(factor).map_err(to_py)
        }

        fn total_probability(&self) -> f64 {
            self.inner.total_probability()
        }

        /// Marginal probabilities over `subset`, indexed by its bitstring.
        fn marginal(&self, subset: Vec<usize>) -> PyResult<Vec<f64>> {
            Ok(self.inner.marginal_probabilities(&subset).map_err(to_py)?.probabilities().to_vec())
        }

        /// Amplitudes as `(re, im)` pairs.
        fn amplitudes(&self) -> Vec<(f64, f64)> {
            self.inner.amplitudes().iter().map(|a| (a.re, a.im)).collect()
        }
    }

    fn named_gate(name: &str, effective: bool) -> PyResult<GateMatrix> {
        let k = match name.to_ascii_uppercase().as_str() {
            "CZ" => Some(1),
            "CCZ" => Some(2),
            "C3Z" => Some(3),
            _ => None,
        };
        match (k, effective) {
            (Some(k), true) => gates::effective_ckz(k).map_err(to_py),
            (Some(k), false) => ideal_ckz(k).map_err(to_py),
            (None, _) => Ok(gates::ideal_gate(name.parse().map_err(to_py)?)),
        }
    }

    /// Gate fidelity of CZ / CCZ / C3Z against the ideal gate; `a` selects the further-term family.
    #[pyfunction]
    #[pyo3(signature = (name, a=None))]
    fn gate_fidelity(name: &str, a: Option<f64>) -> PyResult<f64> {
        let eff = match (name.to_ascii_uppercase().as_str(), a) {
            ("CZ", Some(a)) => gates::param_gate(ParamKind::Cz, a).map_err(to_py)?,
            ("CCZ", Some(a)) => gates::param_gate(ParamKind::Ccz, a).map_err(to_py)?,
            (_, Some(_)) => {
                return Err(pyo3::exceptions::PyValueError::new_err("a applies to CZ and CCZ only"))
            }
            _ => named_gate(name, true)?,
        };
        let ideal = ideal_ckz(eff.rank() - 1).map_err(to_py)?;
        gates::gate_fidelity(&eff, &ideal).map_err(to_py)
    }

    #[pyfunction]
    fn equivalent_two_qubit_fidelity(fidelity: f64, count: u32) -> PyResult<f64> {
        gates::equivalent_two_qubit_fidelity(fidelity, count).map_err(to_py)
    }

    /// `(gates, ancillas)`; each gate is its qubit list with the target last.
    #[pyfunction]
    fn decompose_ckx(k: usize, max_rank: usize) -> PyResult<(Vec<Vec<usize>>, usize)> {
        let (ops, m) = decompose(k, max_rank).map_err(to_py)?;
        Ok((ops.into_iter().map(|g| g.qubits).collect(), m))
    }

    #[pyfunction]
    fn count_multiqubit_gates(position_qubits: usize, coin_qubits: usize, max_rank: usize) -> PyResult<BTreeMap<usize, u64>> {
        let spec = WalkSpec::new(position_qubits, coin_qubits, 1).map_err(to_py)?;
        count(&spec, &NativeGateSet::new(max_rank).map_err(to_py)?).map_err(to_py)
    }

    /// Per-step results of a noisy walk.
    #[pyclass(name = "RunResult")]
    struct PyRunResult {
        inner: qwalk_core::RunResult,
    }

    #[pymethods]
    impl PyRunResult {
        #[getter]
        fn fidelities(&self) -> Vec<f64> {
            self.inner.fidelities()
        }

        #[getter]
        fn total_probability(&self) -> Vec<f64> {
            self.inner.steps.iter().map(|s| s.total_probability).collect()
        }

        #[getter]
        fn ancillas(&self) -> usize {
            self.inner.ancillas
        }

        /// Ideal and effective position distributions at 1-based `step`.
        fn distributions(&self, step: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
            let s = step
                .checked_sub(1)
                .and_then(|i| self.inner.steps.get(i))
                .ok_or_else(|| pyo3::exceptions::PyIndexError::new_err("step out of range"))?;
            Ok((s.ideal.probabilities().to_vec(), s.effective.probabilities().to_vec()))
        }

        /// `{tolerance: steps_within}` for 0.99, 0.999 and 0.9999.
        fn tolerance(&self) -> Vec<(f64, usize)> {
            self.inner
                .tolerance_report()
                .entries
                .iter()
                .map(|e| (e.tolerance, e.steps_within))
                .collect()
        }
    }

    #[pyfunction]
    #[pyo3(signature = (
        position_qubits, coin_qubits, steps=21, max_rank=3, param_a=None,
        gate_errors=true, passive=true, spam=true, amplitude_convention=false
    ))]
    #[allow(clippy::too_many_arguments)]
    fn simulate(
        position_qubits: usize,
        coin_qubits: usize,
        steps: usize,
        max_rank: usize,
        param_a: Option<f64>,
        gate_errors: bool,
        passive: bool,
        spam: bool,
        amplitude_convention: bool,
    ) -> PyResult<PyRunResult> {
        let spec = WalkSpec::new(position_qubits, coin_qubits, steps).map_err(to_py)?;
        let mut set = NativeGateSet::new(max_rank).map_err(to_py)?;
        if let Some(a) = param_a {
            set = set.with_param_a(a).map_err(to_py)?;
        }
        let noise = NoiseParams {
            gate_errors_enabled: gate_errors,
            passive_enabled: passive,
            spam_enabled: spam,
            convention: if amplitude_convention {
                DampingConvention::Amplitude
            } else {
                DampingConvention::Population
            },
            ..NoiseParams::default()
        };
        let inner = qwalk_core::run_noisy(&spec, &set, &noise).map_err(to_py)?;
        Ok(PyRunResult { inner })
    }

    /// Ideal position distributions, one per step.
    #[pyfunction]
    #[pyo3(signature = (position_qubits, coin_qubits, steps=21))]
    fn run_ideal(position_qubits: usize, coin_qubits: usize, steps: usize) -> PyResult<Vec<Vec<f64>>> {
        let spec = WalkSpec::new(position_qubits, coin_qubits, steps).map_err(to_py)?;
        let tables = qwalk_core::run_ideal(&spec).map_err(to_py)?;
        Ok(tables.iter().map(|t| t.probabilities().to_vec()).collect())
    }

    #[pyfunction]
    fn hellinger_fidelity(p: Vec<f64>, q: Vec<f64>) -> PyResult<f64> {
        if p.len() != q.len() || !p.len().is_power_of_two() || p.len() < 2 {
            return Err(pyo3::exceptions::PyValueError::new_err("tables must share a power-of-two length"));
        }
        let qubits: Vec<usize> = (0..p.len().trailing_zeros() as usize).collect();
        let a = qwalk_core::ProbabilityTable::new(qubits.clone(), p).map_err(to_py)?;
        let b = qwalk_core::ProbabilityTable::new(qubits, q).map_err(to_py)?;
        metrics::hellinger_fidelity(&a, &b).map_err(to_py)
    }

    #[pyfunction]
    fn steps_within_tolerance(fidelities: Vec<f64>, tol: f64) -> usize {
        metrics::steps_within_tolerance(&fidelities, tol)
    }

    /// Mean percentage increase per `(n, from_rank)` with the default fidelity sets.
    #[pyfunction]
    #[pyo3(signature = (n_list, transitions=vec![3, 4], coin_qubits=2))]
    fn composite(n_list: Vec<usize>, transitions: Vec<usize>, coin_qubits: usize) -> PyResult<Vec<(usize, usize, f64)>> {
        let r = metrics::gate_set_comparison(&n_list, &default_fidelity_sets(), &transitions, coin_qubits)
            .map_err(to_py)?;
        Ok(r.rows.iter().map(|row| (row.n, row.from_rank, row.mean_increase_percent)).collect())
    }
}
